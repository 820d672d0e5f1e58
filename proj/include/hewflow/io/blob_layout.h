// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>

namespace hewflow::io {

// Binary blob layout, all integers little-endian:
//
//   offset  size  field
//        0     4  magic "HEWF"
//        4     2  format version
//        6    32  params hash (SHA-256)
//       38     1  kind
//       39     1  level (active limbs)
//       40     1  parts (polynomials stored)
//       41     4  ring degree n
//       45     8  scale (IEEE-754 binary64 bits)
//       53     -  residues, u64 each, ordered part -> limb -> coefficient
//
// Every stored polynomial is in the NTT domain.

inline constexpr char kBlobMagic[4] = {'H', 'E', 'W', 'F'};
inline constexpr uint16_t kBlobVersion = 1;
inline constexpr size_t kBlobHeaderBytes = 53;

enum class BlobKind : uint8_t {
  kCiphertext = 1,
  kPublicKey = 2,
  kSecretKey = 3,
  kRelinKey = 4,
};

inline constexpr size_t blob_size_bytes(size_t parts, size_t level, size_t n) {
  return kBlobHeaderBytes + parts * level * n * sizeof(uint64_t);
}

}  // namespace hewflow::io
