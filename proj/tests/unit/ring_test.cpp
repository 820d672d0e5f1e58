// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/ring/modulus.h"
#include "hewflow/ring/primes.h"
#include "hewflow/ring/rns_poly.h"
#include "hewflow/ring/sampling.h"
#include "oracles/ring_oracle.h"

namespace hewflow::ring {
namespace {

using oracle::u128;

RnsPoly from_residues(const RingParamsPtr& params,
                      const std::vector<uint64_t>& values) {
  RnsPoly p(params, 1, Domain::kCoeff);
  std::copy(values.begin(), values.end(), p.limb(0).begin());
  return p;
}

std::vector<uint64_t> residues(const RnsPoly& p, size_t limb = 0) {
  return {p.limb(limb).begin(), p.limb(limb).end()};
}

std::vector<uint64_t> random_vector(Prng& prng, size_t n, uint64_t q) {
  std::vector<uint64_t> v(n);
  for (auto& x : v) x = uniform_below(prng, q);
  return v;
}

TEST(ModulusTest, BarrettMatchesRemainder) {
  Prng prng(1);
  for (uint64_t q : {17ULL, 97ULL, 1073750017ULL, 1099511480321ULL,
                     (1ULL << 61) - 1, 4611686018427387847ULL}) {
    const Modulus mod(q);
    for (int i = 0; i < 2000; ++i) {
      const uint64_t a = uniform_below(prng, q);
      const uint64_t b = uniform_below(prng, q);
      const u128 prod = static_cast<u128>(a) * b;
      ASSERT_EQ(mod.reduce128(prod), static_cast<uint64_t>(prod % q));
      const uint64_t bs = mod.shoup(b);
      ASSERT_EQ(mod.mul_shoup(a, b, bs), static_cast<uint64_t>(prod % q));
      const u128 wide = (static_cast<u128>(prng()) << 64) | prng();
      ASSERT_EQ(mod.reduce_wide(wide), static_cast<uint64_t>(wide % q));
    }
  }
}

TEST(ModulusTest, SignedLifts) {
  const Modulus mod(97);
  EXPECT_EQ(mod.from_signed(-1), 96u);
  EXPECT_EQ(mod.from_signed(-97), 0u);
  EXPECT_EQ(mod.from_signed(-98), 96u);
  EXPECT_EQ(mod.to_centered(96), -1);
  EXPECT_EQ(mod.to_centered(48), 48);
  EXPECT_EQ(mod.to_centered(49), -48);
  EXPECT_EQ(mod.mul(mod.inv(5), 5), 1u);
  EXPECT_THROW(Modulus(1), ValidationError);
}

TEST(PrimesTest, MillerRabin) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_FALSE(is_prime(561));  // Carmichael
  EXPECT_TRUE(is_prime((1ULL << 61) - 1));
  EXPECT_FALSE(is_prime((1ULL << 61) + 1));
  EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to 2,3,5,7
}

TEST(PrimesTest, GeneratedPrimesAreNttFriendly) {
  const auto below = primes_below(2048, 40, 3);
  ASSERT_EQ(below.size(), 3u);
  for (uint64_t q : below) {
    EXPECT_TRUE(is_prime(q));
    EXPECT_EQ(q % 4096, 1u);
    EXPECT_LT(q, 1ULL << 40);
  }
  EXPECT_GT(below[0], below[1]);
  const auto near = primes_near(2048, 30, 6, below);
  std::vector<uint64_t> sorted = near;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
  for (size_t i = 0; i < near.size(); ++i) {
    EXPECT_EQ(near[i] % 4096, 1u);
    EXPECT_EQ(near[i] < (1ULL << 30), i % 2 == 0);
  }
}

TEST(RingParamsTest, RejectsBadBases) {
  EXPECT_THROW(RingParams::create(12, {97}), ValidationError);
  EXPECT_THROW(RingParams::create(4, {17}), ValidationError);
  EXPECT_THROW(RingParams::create(8, {19}), ValidationError);   // not 1 mod 16
  EXPECT_THROW(RingParams::create(8, {33}), ValidationError);   // not prime
  EXPECT_THROW(RingParams::create(8, {17, 17}), ValidationError);
  EXPECT_THROW(RingParams::create(8, {}), ValidationError);
}

TEST(NttTest, ImpulseTransformsToOnes) {
  const auto params = RingParams::create(8, {17});
  std::vector<uint64_t> delta(8, 0);
  delta[0] = 1;
  const RnsPoly hat = ntt_forward(from_residues(params, delta));
  EXPECT_EQ(hat.domain(), Domain::kNtt);
  EXPECT_EQ(residues(hat), std::vector<uint64_t>(8, 1));
  const RnsPoly back = ntt_inverse(hat);
  EXPECT_EQ(residues(back), delta);
}

TEST(NttTest, OnesInvertToImpulse) {
  const auto params = RingParams::create(8, {17});
  RnsPoly ones(params, 1, Domain::kNtt);
  std::fill(ones.limb(0).begin(), ones.limb(0).end(), 1);
  std::vector<uint64_t> delta(8, 0);
  delta[0] = 1;
  EXPECT_EQ(residues(ntt_inverse(ones)), delta);
}

TEST(NttTest, EvaluatesAtOddPowersOfPsi) {
  const auto params = RingParams::create(16, {97});
  Prng prng(7);
  const auto p = random_vector(prng, 16, 97);
  const RnsPoly hat = ntt_forward(from_residues(params, p));
  const uint64_t psi = params->tables(0).psi;
  EXPECT_EQ(oracle::mod_pow(psi, 16, 97), 96u);
  for (size_t k = 0; k < 16; ++k) {
    const uint64_t point = oracle::mod_pow(psi, 2 * bit_reverse(k, 4) + 1, 97);
    EXPECT_EQ(hat.limb(0)[k], oracle::eval_at(p, point, 97));
  }
}

TEST(NttTest, RoundTripIsExact) {
  Prng prng(11);
  for (auto [n, q] : std::vector<std::pair<size_t, uint64_t>>{
           {16, 97},
           {1024, primes_below(1024, 30, 1)[0]},
           {4096, primes_below(4096, 60, 1)[0]}}) {
    const auto params = RingParams::create(n, {q});
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = from_residues(params, random_vector(prng, n, q));
      EXPECT_EQ(ntt_inverse(ntt_forward(p)), p);
      RnsPoly in_ntt = p;
      in_ntt.set_domain(Domain::kNtt);
      EXPECT_EQ(ntt_forward(ntt_inverse(in_ntt)), in_ntt);
    }
  }
}

TEST(NttTest, DomainErrors) {
  const auto params = RingParams::create(8, {17});
  RnsPoly coeff(params, 1, Domain::kCoeff);
  RnsPoly ntt(params, 1, Domain::kNtt);
  EXPECT_THROW(ntt_forward(ntt), ParamsError);
  EXPECT_THROW(ntt_inverse(coeff), ParamsError);
  EXPECT_THROW(poly_add(coeff, ntt), ParamsError);
}

TEST(PolyMulTest, MatchesSchoolbookOracle) {
  Prng prng(3);
  for (auto [n, q] : std::vector<std::pair<size_t, uint64_t>>{
           {8, 97}, {16, 97}, {32, 193}}) {
    const auto params = RingParams::create(n, {q});
    const int trials = n == 8 ? 200 : 50;
    for (int t = 0; t < trials; ++t) {
      const auto a = random_vector(prng, n, q);
      const auto b = random_vector(prng, n, q);
      const RnsPoly c =
          poly_mul(from_residues(params, a), from_residues(params, b));
      ASSERT_EQ(c.domain(), Domain::kCoeff);
      ASSERT_EQ(residues(c), oracle::negacyclic_mul(a, b, q));
    }
  }
}

TEST(PolyMulTest, IdentityAndWraparound) {
  const auto params = RingParams::create(8, {97});
  Prng prng(5);
  const auto a = from_residues(params, random_vector(prng, 8, 97));
  std::vector<uint64_t> one(8, 0);
  one[0] = 1;
  EXPECT_EQ(poly_mul(a, from_residues(params, one)), a);

  std::vector<uint64_t> x4(8, 0);
  x4[4] = 1;
  const auto sq = poly_mul(from_residues(params, x4), from_residues(params, x4));
  std::vector<uint64_t> minus_one(8, 0);
  minus_one[0] = 96;
  EXPECT_EQ(residues(sq), minus_one);
}

TEST(PolyMulTest, RingRelation) {
  const auto params = RingParams::create(16, {97});
  for (size_t i = 0; i < 16; ++i) {
    for (size_t j = 0; j < 16; ++j) {
      std::vector<uint64_t> xi(16, 0), xj(16, 0), expect(16, 0);
      xi[i] = 1;
      xj[j] = 1;
      const size_t k = i + j;
      if (k >= 16) {
        expect[k - 16] = 96;
      } else {
        expect[k] = 1;
      }
      ASSERT_EQ(residues(poly_mul(from_residues(params, xi),
                                  from_residues(params, xj))),
                expect);
    }
  }
}

TEST(PolyAddTest, AdditiveProperties) {
  const auto params = RingParams::create(64, primes_below(64, 50, 3));
  Prng prng(9);
  const RnsPoly a = sample_uniform(params, 3, prng, Domain::kCoeff);
  const RnsPoly b = sample_uniform(params, 3, prng, Domain::kCoeff);
  const RnsPoly zero(params, 3, Domain::kCoeff);
  EXPECT_EQ(poly_add(a, zero), a);
  EXPECT_EQ(poly_sub(a, a), zero);
  EXPECT_EQ(poly_sub(poly_add(a, b), b), a);
  EXPECT_EQ(poly_add(a, poly_neg(a)), zero);
}

TEST(PolyAddTest, MismatchedOperandsRejected) {
  const auto p1 = RingParams::create(8, {17, 97});
  const auto p2 = RingParams::create(8, {97, 17});
  EXPECT_THROW(poly_add(RnsPoly(p1, 2, Domain::kCoeff),
                        RnsPoly(p2, 2, Domain::kCoeff)),
               ParamsError);
  EXPECT_THROW(poly_mul(RnsPoly(p1, 2, Domain::kCoeff),
                        RnsPoly(p1, 1, Domain::kCoeff)),
               ParamsError);
  // Equal bases built separately are the same ring.
  const auto p3 = RingParams::create(8, {17, 97});
  EXPECT_NO_THROW(poly_add(RnsPoly(p1, 2, Domain::kCoeff),
                           RnsPoly(p3, 2, Domain::kCoeff)));
}

TEST(RnsTest, PerLimbArithmeticMatchesCrtOracle) {
  const size_t n = 16;
  const auto primes = primes_below(n, 20, 2);
  const uint64_t q0 = primes[0], q1 = primes[1];
  const uint64_t big_q = q0 * q1;
  const auto params = RingParams::create(n, primes);
  Prng prng(13);
  for (int t = 0; t < 30; ++t) {
    const auto a = random_vector(prng, n, big_q);
    const auto b = random_vector(prng, n, big_q);
    RnsPoly pa(params, 2, Domain::kCoeff), pb(params, 2, Domain::kCoeff);
    for (size_t j = 0; j < n; ++j) {
      pa.limb(0)[j] = a[j] % q0;
      pa.limb(1)[j] = a[j] % q1;
      pb.limb(0)[j] = b[j] % q0;
      pb.limb(1)[j] = b[j] % q1;
    }
    const auto prod = poly_mul(pa, pb);
    const auto sum = poly_add(pa, pb);
    const auto expect_prod = oracle::negacyclic_mul(a, b, big_q);
    for (size_t j = 0; j < n; ++j) {
      ASSERT_EQ(oracle::crt2(prod.limb(0)[j], prod.limb(1)[j], q0, q1),
                expect_prod[j]);
      ASSERT_EQ(oracle::crt2(sum.limb(0)[j], sum.limb(1)[j], q0, q1),
                (a[j] + b[j]) % big_q);
    }
  }
}

TEST(DropLimbTest, ExactRoundingAgainstIntegerOracle) {
  const size_t n = 16;
  const auto primes = primes_below(n, 20, 3);
  const auto params = RingParams::create(n, primes);
  const u128 q01 = static_cast<u128>(primes[0]) * primes[1];
  const u128 big_q = q01 * primes[2];
  Prng prng(17);
  for (Domain domain : {Domain::kCoeff, Domain::kNtt}) {
    std::vector<__int128> values(n);
    RnsPoly p(params, 3, Domain::kCoeff);
    for (size_t j = 0; j < n; ++j) {
      const u128 x = ((static_cast<u128>(prng()) << 64) | prng()) % big_q;
      values[j] = x > big_q / 2 ? static_cast<__int128>(x) -
                                      static_cast<__int128>(big_q)
                                : static_cast<__int128>(x);
      for (size_t i = 0; i < 3; ++i) p.limb(i)[j] = static_cast<uint64_t>(x % primes[i]);
    }
    if (domain == Domain::kNtt) ntt_forward_inplace(p);
    RnsPoly dropped = drop_limb(p);
    EXPECT_EQ(dropped.limbs(), 2u);
    EXPECT_EQ(dropped.data().size(), p.data().size() - n);
    if (domain == Domain::kNtt) ntt_inverse_inplace(dropped);
    const __int128 q2 = primes[2];
    for (size_t j = 0; j < n; ++j) {
      __int128 r = values[j] % q2;
      if (r < 0) r += q2;
      if (r > q2 / 2) r -= q2;
      const __int128 y = (values[j] - r) / q2;
      // |x / q2 - y| <= 1/2
      const long double err = static_cast<long double>(values[j]) /
                                  static_cast<long double>(q2) -
                              static_cast<long double>(y);
      EXPECT_LE(std::fabs(static_cast<double>(err)), 0.5);
      for (size_t i = 0; i < 2; ++i) {
        __int128 m = y % static_cast<__int128>(primes[i]);
        if (m < 0) m += primes[i];
        ASSERT_EQ(dropped.limb(i)[j], static_cast<uint64_t>(m));
      }
    }
  }
}

TEST(DropLimbTest, SingleLimbRejected) {
  const auto params = RingParams::create(8, {17, 97});
  const RnsPoly p(params, 2, Domain::kCoeff);
  const RnsPoly one = drop_limb(p);
  EXPECT_EQ(one.limbs(), 1u);
  EXPECT_THROW(drop_limb(one), ParamsError);
  EXPECT_EQ(truncate_limbs(p, 1).limbs(), 1u);
}

TEST(SamplingTest, Deterministic) {
  const auto params = RingParams::create(64, primes_below(64, 40, 2));
  EXPECT_EQ(sample_uniform(params, 2, 42), sample_uniform(params, 2, 42));
  EXPECT_EQ(sample_ternary(params, 2, 42), sample_ternary(params, 2, 42));
  EXPECT_EQ(sample_gaussian(params, 2, 3.2, 42),
            sample_gaussian(params, 2, 3.2, 42));
  EXPECT_FALSE(sample_uniform(params, 2, 42) == sample_uniform(params, 2, 43));
}

TEST(SamplingTest, TernaryRange) {
  const auto params = RingParams::create(1024, primes_below(1024, 40, 2));
  const RnsPoly s = sample_ternary(params, 2, 5);
  std::array<int, 3> counts{};
  for (size_t i = 0; i < 2; ++i) {
    const Modulus& mod = params->modulus(i);
    for (size_t j = 0; j < 1024; ++j) {
      const int64_t c = mod.to_centered(s.limb(i)[j]);
      ASSERT_GE(c, -1);
      ASSERT_LE(c, 1);
      if (i == 0) ++counts[c + 1];
      // Both limbs carry the same integer.
      ASSERT_EQ(mod.to_centered(s.limb(i)[j]),
                params->modulus(0).to_centered(s.limb(0)[j]));
    }
  }
  for (int c : counts) EXPECT_GT(c, 250);
}

TEST(SamplingTest, GaussianMoments) {
  Prng prng(2024);
  const size_t draws = 100000;
  const double sigma = 3.2;
  const auto xs = gaussian_integers(draws, sigma, prng);
  const double mean =
      std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(draws);
  double var = 0.0;
  for (int64_t x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / (draws - 1));
  EXPECT_LE(std::fabs(mean), 3.0 * sigma / std::sqrt(static_cast<double>(draws)));
  EXPECT_LE(std::fabs(sd - sigma) / sigma, 0.05);
  EXPECT_THROW(gaussian_integers(1, 0.0, prng), ValidationError);
}

}  // namespace
}  // namespace hewflow::ring
