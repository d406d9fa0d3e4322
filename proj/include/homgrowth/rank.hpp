#pragma once

#include <cstdint>
#include <vector>

#include "homgrowth/errors.hpp"
#include "homgrowth/sparse.hpp"

namespace homgrowth {

bool is_prime_u64(std::uint64_t n);

struct PrimeField {
    std::uint32_t p;
    explicit PrimeField(std::uint64_t modulus);
};

// Rank of m over F_p. Sparse elimination with Markowitz-style pivoting
// (minimum column count, then minimum row length, ties by lowest index),
// switching to a dense kernel for the fill-heavy tail. p = 2 runs a
// bit-packed specialization.
std::int64_t gfp_rank(const SparseIntMatrix& m, const PrimeField& f,
                      const RankOptions& opts = {});

// Monte Carlo rank over Q: maximum of gfp_rank over random primes drawn
// from [2^29, 2^31), stopping once two distinct primes agree on the
// maximum. A prime understates the rank only if it divides a fixed nonzero
// maximal minor; for the small-entry matrices here the chance that two
// independent ~2^30 primes both do is negligible (well under 2^-40).
// Deterministic given seed, independent of thread count.
std::int64_t rational_rank(const SparseIntMatrix& m, std::uint64_t seed,
                           const RankOptions& opts = {});

// k-th prime of the stream rational_rank(seed) consumes; exposed for tests.
std::uint32_t random_prime_stream(std::uint64_t seed, int k);

// Nullspace basis of m over F_p, dense elimination; each vector has length
// m.cols with entries in [0, p). Guarded to rows*cols <= 3.4e7.
std::vector<std::vector<std::uint32_t>> gfp_nullspace(const SparseIntMatrix& m,
                                                      const PrimeField& f);

}  // namespace homgrowth
