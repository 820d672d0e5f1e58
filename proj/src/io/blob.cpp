// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/io/blob.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "hewflow/common/error.h"

namespace hewflow::io {

namespace {

void put(Bytes& out, uint64_t v, size_t width) {
  for (size_t i = 0; i < width; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t get(const Bytes& in, size_t offset, size_t width) {
  uint64_t v = 0;
  for (size_t i = 0; i < width; ++i) v |= static_cast<uint64_t>(in[offset + i]) << (8 * i);
  return v;
}

Bytes encode(BlobKind kind, const ckks::ParamsHash& hash, double scale,
             const std::vector<const ckks::RnsPoly*>& polys) {
  if (polys.empty() || polys.size() > 255) throw ValidationError("blob needs 1 to 255 parts");
  const size_t level = polys.front()->limbs();
  const size_t n = polys.front()->n();
  if (level == 0 || level > 255) throw ValidationError("blob level out of range");
  for (const auto* p : polys) {
    if (p->limbs() != level || p->n() != n) {
      throw ValidationError("blob parts disagree in shape");
    }
    if (p->domain() != ckks::Domain::kNtt) {
      throw ParamsError("only NTT-domain polynomials are serialized");
    }
  }
  Bytes out;
  out.reserve(blob_size_bytes(polys.size(), level, n));
  out.insert(out.end(), kBlobMagic, kBlobMagic + 4);
  put(out, kBlobVersion, 2);
  out.insert(out.end(), hash.begin(), hash.end());
  put(out, static_cast<uint8_t>(kind), 1);
  put(out, level, 1);
  put(out, polys.size(), 1);
  put(out, n, 4);
  put(out, std::bit_cast<uint64_t>(scale), 8);
  for (const auto* p : polys) {
    for (uint64_t r : p->data()) put(out, r, 8);
  }
  return out;
}

std::string kind_name(BlobKind kind) {
  switch (kind) {
    case BlobKind::kCiphertext:
      return "ciphertext";
    case BlobKind::kPublicKey:
      return "public key";
    case BlobKind::kSecretKey:
      return "secret key";
    case BlobKind::kRelinKey:
      return "relinearization key";
  }
  return "unknown";
}

/// Header checks shared by every parser; returns the decoded polynomials.
std::vector<ckks::RnsPoly> decode(const Bytes& blob, BlobKind want,
                                  const ckks::SchemeParams& params, BlobHeader& h) {
  h = read_header(blob);
  if (h.kind != want) {
    throw ValidationError("blob holds a " + kind_name(h.kind) + ", expected a " +
                          kind_name(want));
  }
  if (h.params_hash != params.hash) {
    throw ParamsError(kind_name(want) + " was produced under params " +
                      ckks::to_hex(h.params_hash).substr(0, 16) + "..., expected " +
                      ckks::to_hex(params.hash).substr(0, 16) + "...");
  }
  if (h.n != params.n()) {
    throw ParamsError("blob ring degree " + std::to_string(h.n) + " does not match params");
  }
  if (h.level == 0 || h.level > params.max_level()) {
    throw ValidationError("blob level " + std::to_string(h.level) + " is out of range");
  }
  std::vector<ckks::RnsPoly> polys;
  size_t offset = kBlobHeaderBytes;
  for (size_t p = 0; p < h.parts; ++p) {
    ckks::RnsPoly poly(params.ring, h.level, ckks::Domain::kNtt);
    for (size_t i = 0; i < h.level; ++i) {
      const uint64_t q = params.prime(i);
      auto limb = poly.limb(i);
      for (size_t k = 0; k < h.n; ++k, offset += 8) {
        limb[k] = get(blob, offset, 8);
        if (limb[k] >= q) throw ValidationError("blob residue is not reduced");
      }
    }
    polys.push_back(std::move(poly));
  }
  return polys;
}

}  // namespace

BlobHeader read_header(const Bytes& blob) {
  if (blob.size() < kBlobHeaderBytes || std::memcmp(blob.data(), kBlobMagic, 4) != 0) {
    throw ValidationError("not a hewflow blob");
  }
  BlobHeader h;
  h.version = static_cast<uint16_t>(get(blob, 4, 2));
  if (h.version != kBlobVersion) {
    throw ValidationError("unsupported blob version " + std::to_string(h.version));
  }
  std::memcpy(h.params_hash.data(), blob.data() + 6, 32);
  const auto kind = static_cast<uint8_t>(get(blob, 38, 1));
  if (kind < 1 || kind > 4) throw ValidationError("unknown blob kind");
  h.kind = static_cast<BlobKind>(kind);
  h.level = get(blob, 39, 1);
  h.parts = get(blob, 40, 1);
  h.n = get(blob, 41, 4);
  h.scale = std::bit_cast<double>(get(blob, 45, 8));
  if (blob.size() != blob_size_bytes(h.parts, h.level, h.n)) {
    throw ValidationError("blob length " + std::to_string(blob.size()) +
                          " does not match its header");
  }
  return h;
}

Bytes serialize(const ckks::Ciphertext& ct) {
  std::vector<const ckks::RnsPoly*> polys;
  for (const auto& p : ct.parts) polys.push_back(&p);
  return encode(BlobKind::kCiphertext, ct.params_hash, ct.scale, polys);
}

Bytes serialize(const ckks::SecretKey& sk) {
  return encode(BlobKind::kSecretKey, sk.params_hash, 0.0, {&sk.s});
}

Bytes serialize(const ckks::PublicKey& pk) {
  return encode(BlobKind::kPublicKey, pk.params_hash, 0.0, {&pk.b, &pk.a});
}

Bytes serialize(const ckks::RelinKey& rk) {
  std::vector<const ckks::RnsPoly*> polys;
  for (const auto& p : rk.b) polys.push_back(&p);
  for (const auto& p : rk.a) polys.push_back(&p);
  return encode(BlobKind::kRelinKey, rk.params_hash, 0.0, polys);
}

ckks::Ciphertext parse_ciphertext(const Bytes& blob, const ckks::SchemeParams& params) {
  BlobHeader h;
  auto polys = decode(blob, BlobKind::kCiphertext, params, h);
  if (h.parts < 2 || h.parts > 3) throw ValidationError("ciphertext must have 2 or 3 parts");
  if (!(h.scale > 0.0) || !std::isfinite(h.scale)) {
    throw ValidationError("ciphertext scale is not a positive number");
  }
  ckks::Ciphertext ct;
  ct.parts = std::move(polys);
  ct.scale = h.scale;
  ct.params_hash = h.params_hash;
  return ct;
}

ckks::SecretKey parse_secret_key(const Bytes& blob, const ckks::SchemeParams& params) {
  BlobHeader h;
  auto polys = decode(blob, BlobKind::kSecretKey, params, h);
  if (h.parts != 1 || h.level != params.max_level()) {
    throw ValidationError("secret key must be one polynomial over every limb");
  }
  return {std::move(polys[0]), h.params_hash};
}

ckks::PublicKey parse_public_key(const Bytes& blob, const ckks::SchemeParams& params) {
  BlobHeader h;
  auto polys = decode(blob, BlobKind::kPublicKey, params, h);
  if (h.parts != 2 || h.level != params.max_level()) {
    throw ValidationError("public key must be two polynomials over every limb");
  }
  return {std::move(polys[0]), std::move(polys[1]), h.params_hash};
}

ckks::RelinKey parse_relin_key(const Bytes& blob, const ckks::SchemeParams& params) {
  BlobHeader h;
  auto polys = decode(blob, BlobKind::kRelinKey, params, h);
  const size_t digits = ckks::relin_digits(params).size();
  if (h.parts != 2 * digits || h.level != params.max_level()) {
    throw ValidationError("relinearization key has " + std::to_string(h.parts) +
                          " polynomials, expected " + std::to_string(2 * digits));
  }
  ckks::RelinKey rk;
  rk.params_hash = h.params_hash;
  for (size_t d = 0; d < digits; ++d) {
    rk.b.push_back(std::move(polys[d]));
    rk.a.push_back(std::move(polys[digits + d]));
  }
  return rk;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("failed writing " + path);
}

nlohmann::json params_to_json(const ckks::SchemeParams& params) {
  nlohmann::json j;
  j["n"] = params.n();
  std::vector<uint64_t> primes;
  for (size_t i = 0; i < params.max_level(); ++i) primes.push_back(params.prime(i));
  j["primes"] = primes;
  j["scale_bits"] = static_cast<int>(std::lround(std::log2(params.scale)));
  j["sigma"] = params.sigma;
  j["relin_digit_bits"] = params.relin_digit_bits;
  j["hash"] = ckks::to_hex(params.hash);
  return j;
}

ckks::SchemeParams params_from_json(const nlohmann::json& doc) {
  ckks::SchemeParams params;
  try {
    params = ckks::SchemeParams::create(
        doc.at("n").get<size_t>(), doc.at("primes").get<std::vector<uint64_t>>(),
        std::ldexp(1.0, doc.at("scale_bits").get<int>()), doc.at("sigma").get<double>(),
        doc.at("relin_digit_bits").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("params.json is malformed: ") + e.what());
  }
  if (doc.contains("hash") &&
      ckks::hash_from_hex(doc.at("hash").get<std::string>()) != params.hash) {
    throw ParamsError("params.json hash does not match its fields");
  }
  return params;
}

}  // namespace hewflow::io
