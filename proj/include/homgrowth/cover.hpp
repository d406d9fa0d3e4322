#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "homgrowth/chain.hpp"
#include "homgrowth/errors.hpp"
#include "homgrowth/fraction.hpp"
#include "homgrowth/simplicial.hpp"

namespace homgrowth {

// Exponent vector n: V -> Z>=1 defining the quotient Q = prod_v Z/n_v of
// the right-angled Artin group on L.
struct CoverSpec {
    std::vector<std::int64_t> exponents;  // parallel to L.vertices

    static CoverSpec uniform(const SimplicialComplex& L, std::int64_t n);
    static CoverSpec from_map(const SimplicialComplex& L,
                              const std::map<std::string, std::int64_t>& n_of);
    std::uint64_t index() const;  // |Q|, overflow-checked
    bool is_uniform() const;
};

// Chain complex of the finite cover of the Salvetti complex: one degree-k
// cell (q, sigma) per q in Q and (k-1)-face sigma of L (the empty face
// gives the vertices). Cell id = q_index * f_{k-1} + face_index with q in
// mixed radix over the vertex order (first vertex least significant).
// Boundary: for sigma = {v_1 < ... < v_k},
//   d(q,sigma) = sum_j (-1)^{j-1} [(q + e_{v_j}, sigma\v_j) - (q, sigma\v_j)];
// vertices with n_v = 1 contribute cancelling pairs, so the trivial cover
// has zero boundaries.
ChainComplex build_cover_complex(const SimplicialComplex& L, const CoverSpec& spec,
                                 const BudgetOptions& budget = {},
                                 bool with_labels = false);

// One experiment record: per-degree ranks plus index-normalized values.
struct BettiTable {
    std::string complex_name;
    std::vector<std::int64_t> exponents;  // empty when no cover is involved
    std::uint64_t index = 1;
    FieldTag field;
    std::vector<std::int64_t> betti;
    std::vector<Fraction> normalized;
    std::vector<std::int64_t> targets;  // reduced b_{i-1}(L;F); empty if unset
    std::uint64_t seed = 0;
    double elapsed_seconds = 0.0;  // informational; never serialized
};

// Betti numbers of the cover over the field; asserts the Euler identity
// sum (-1)^i b_i = sum (-1)^i dims_i. For odd characteristic (or Q) with
// all n_v <= 2 and |Q| large, ranks are computed through the character
// decomposition (one twisted complex per character of Q) instead of the
// big matrix; both paths are exact and agree (see
// character_decomposition_check).
BettiTable cover_betti(const SimplicialComplex& L, const std::string& name,
                       const CoverSpec& spec, const FieldTag& f, std::uint64_t seed,
                       const BudgetOptions& budget = {}, const RankOptions& opts = {});

// One table per uniform exponent n, each carrying the comparison targets
// reduced b_{i-1}(L;F).
std::vector<BettiTable> normalized_betti_scan(const SimplicialComplex& L,
                                              const std::string& name, const FieldTag& f,
                                              const std::vector<std::int64_t>& n_list,
                                              std::uint64_t seed,
                                              const BudgetOptions& budget = {},
                                              const RankOptions& opts = {});

// One character chi of Q with values in F_p: the cover complex restricted
// to the chi-isotypic summand. dims[k] = f_{k-1}(L); boundary entries
// (chi(v_j) - 1) with the simplicial signs. chi values must be n_v-th
// roots of unity mod p.
ChainComplex twisted_complex(const SimplicialComplex& L, const CoverSpec& spec,
                             const std::vector<std::uint32_t>& chi, const PrimeField& f);

// Whether sum over all characters of betti(twisted) equals betti(cover)
// in every degree, both sides computed independently (the cover side on
// the assembled matrices). Requires n_v | p - 1 for every v.
bool character_decomposition_check(const SimplicialComplex& L, const CoverSpec& spec,
                                   const PrimeField& f, std::uint64_t seed,
                                   const BudgetOptions& budget = {},
                                   const RankOptions& opts = {});

// t_p(H_i) = number of Z/p^k summands of H_i(cover; Z), solved downward
// from b_i(F_p) = b_i(Q) + t_p(H_i) + t_p(H_{i-1}) with t_p(H_top) = 0.
// A negative solution or nonzero t_p(H_0) raises InconsistencyError.
struct TorsionProfile {
    BettiTable over_q;
    BettiTable over_p;
    std::vector<std::int64_t> t;  // per degree
};
TorsionProfile torsion_rank_profile(const SimplicialComplex& L, const std::string& name,
                                    const CoverSpec& spec, std::uint32_t p,
                                    std::uint64_t seed, const BudgetOptions& budget = {},
                                    const RankOptions& opts = {});
std::vector<std::int64_t> torsion_from_tables(const BettiTable& over_q,
                                              const BettiTable& over_p);

}  // namespace homgrowth
