#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homgrowth/chain.hpp"
#include "homgrowth/cover.hpp"
#include "homgrowth/fraction.hpp"
#include "homgrowth/simplicial.hpp"

namespace homgrowth {

// Nerve of the cover of L by its maximal simplices: one vertex per maximal
// simplex (tokens "F<idx>" in facet order), a face per subset with
// nonempty common intersection. Homotopy equivalent to L.
SimplicialComplex nerve_subcomplex(const SimplicialComplex& L);

// E^1_{i,j} dimensions for the cover: each (i+1)-subset sigma of maximal
// simplices with intersection tau contributes (|Q| / prod_{v in tau} n_v)
// * C(|tau|, j); subsets with empty intersection contribute |Q| at j = 0.
// Closed-form counting only, no homology.
struct E1Table {
    int m = 0;                                    // number of maximal simplices
    std::vector<std::vector<std::int64_t>> dims;  // dims[i][j]
    std::int64_t at(int i, int j) const;          // 0 outside the stored range
};
E1Table e1_dimensions(const SimplicialComplex& L, const CoverSpec& spec,
                      int up_to_subset_size);

// Homology dimensions of C_*(Delta; V_sigma), where Delta is the full
// simplex on the maximal simplices and V_sigma = F[Q] exactly when the
// corresponding intersection is empty. Requires <= 14 maximal simplices.
// Asserts the result equals reduced b_{i-1}(L;F) * |Q| in every degree.
std::vector<std::int64_t> coefficient_nerve_homology(const SimplicialComplex& L,
                                                     const CoverSpec& spec,
                                                     const FieldTag& f,
                                                     std::uint64_t seed,
                                                     const RankOptions& opts = {});

// Side-by-side normalized values: the finite-stage gap between the cover
// Betti numbers and the nerve-coefficient values, with the off-row E^1
// mass that bounds it.
struct CollapseRow {
    int degree = 0;
    Fraction cover_normalized;
    Fraction nerve_normalized;
    Fraction e1_offrow_mass;
    Fraction e1_row0_kernel;  // chain-level kernel of E^1_{i,0} -> C_i(Delta;V_sigma)
};
struct CollapseReport {
    std::string complex_name;
    std::int64_t n = 1;  // uniform exponent
    FieldTag field;
    std::vector<CollapseRow> rows;
};
CollapseReport collapse_report(const SimplicialComplex& L, const std::string& name,
                               const CoverSpec& spec, const FieldTag& f,
                               std::uint64_t seed, const BudgetOptions& budget = {},
                               const RankOptions& opts = {});

}  // namespace homgrowth
