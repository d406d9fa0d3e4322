#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homgrowth/errors.hpp"
#include "homgrowth/rank.hpp"
#include "homgrowth/simplicial.hpp"
#include "homgrowth/sparse.hpp"

namespace homgrowth {

// Coefficient field: Q or F_p. Text form "q" / "f:<prime>".
struct FieldTag {
    bool rational = true;
    std::uint32_t p = 0;

    static FieldTag Q() { return {}; }
    static FieldTag Fp(std::uint32_t prime);
    static FieldTag parse(const std::string& s);
    std::string str() const;
    bool operator==(const FieldTag&) const = default;
};

// Graded chain complex in degrees 0..D. boundaries[k] maps degree-k chains
// to degree-(k-1) chains; boundaries[0] has 0 rows, or 1 row when the
// complex is augmented (then degree-0 homology is reduced).
struct ChainComplex {
    std::vector<std::int64_t> dims;
    std::vector<SparseIntMatrix> boundaries;
    std::vector<std::vector<std::string>> labels;  // optional, per degree

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }
    void validate_shapes() const;
};

// Exact check over Z that consecutive boundaries compose to zero.
void verify_dd_zero(const ChainComplex& cc);

// rank of boundaries[k] over the field, k = 0..D (plus a trailing 0)
std::vector<std::int64_t> chain_ranks(const ChainComplex& cc, const FieldTag& f,
                                      std::uint64_t seed, const RankOptions& opts = {});

// betti[k] = dims[k] - rank ∂_k - rank ∂_{k+1}
std::vector<std::int64_t> chain_betti(const ChainComplex& cc, const FieldTag& f,
                                      std::uint64_t seed, const RankOptions& opts = {});

// Simplicial chain complex of c; augmented = reduced homology.
ChainComplex simplicial_chain(const SimplicialComplex& c, bool augmented);

// Reduced Betti numbers of c in degrees 0..dim(c).
std::vector<std::int64_t> reduced_betti(const SimplicialComplex& c, const FieldTag& f,
                                        std::uint64_t seed, const RankOptions& opts = {});

}  // namespace homgrowth
