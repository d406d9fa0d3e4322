#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homgrowth/chain.hpp"
#include "homgrowth/cover.hpp"
#include "homgrowth/simplicial.hpp"

namespace homgrowth {

// Finite cube complex Y_L inside [-1,1]^V: one degree-k cell (eps, sigma)
// per (k-1)-face sigma of L (including the empty face) and sign vector
// eps on the remaining vertices. Cell id = face_index * 2^(|V|-k) + code,
// the code packing the signs of V \ sigma in vertex order (bit 0 = lowest
// vertex outside sigma; bit value 1 means -1).
// Boundary: d(eps,sigma) = sum_j (-1)^{j-1}
//   [(eps u {v_j -> +1}, sigma\v_j) - (eps u {v_j -> -1}, sigma\v_j)].
struct DavisComplex {
    SimplicialComplex base;
    ChainComplex chain;
};

// Assembles the chain complex, verifies boundary-of-boundary = 0, and
// checks on a sample of vertex cells (all of them when |V| <= 16) that the
// incidence structure around each vertex is a copy of L.
DavisComplex build_davis(const SimplicialComplex& L, const BudgetOptions& budget = {});

// Betti numbers of Y_L; the normalized column divides by 2^|V|.
BettiTable davis_betti(const SimplicialComplex& L, const std::string& name,
                       const FieldTag& f, std::uint64_t seed,
                       const BudgetOptions& budget = {}, const RankOptions& opts = {});

// Mayer-Vietoris data for removing vertex v: the ambient pieces
// Y_St(v), Y_(L-v), and Y_Lk(v) = their intersection (each carrying all
// ambient sign decorations), homology of all four complexes, the
// alternating-sum exactness check, and per-degree surjectivity of the map
// H_i(Y_Lk(v)) -> H_i(Y_St(v)) induced by inclusion.
struct MvReport {
    std::string complex_name;
    std::string vertex;
    FieldTag field;
    std::vector<std::int64_t> dims_full, dims_st, dims_rest, dims_lk;  // cells per degree
    std::vector<std::int64_t> h_full, h_st, h_rest, h_lk;              // homology
    bool alternating_sum_zero = false;
    std::vector<char> surjective;  // per degree
    bool all_surjective = false;
};
MvReport mv_check(const SimplicialComplex& L, const std::string& name,
                  const std::string& v, const FieldTag& f, std::uint64_t seed,
                  const BudgetOptions& budget = {}, const RankOptions& opts = {});

// True iff the top-dimensional reduced F_2 homology of L vanishes.
bool embedding_criterion(const SimplicialComplex& L, std::uint64_t seed = 1,
                         const RankOptions& opts = {});

}  // namespace homgrowth
