#include "homgrowth/chain.hpp"

#include <algorithm>
#include <stdexcept>

namespace homgrowth {

namespace {
using i32 = std::int32_t;
using i64 = std::int64_t;
}  // namespace

FieldTag FieldTag::Fp(std::uint32_t prime) {
    PrimeField check(prime);  // validates primality and range
    FieldTag f;
    f.rational = false;
    f.p = check.p;
    return f;
}

FieldTag FieldTag::parse(const std::string& s) {
    if (s == "q" || s == "Q") return Q();
    if (s.rfind("f:", 0) == 0 || s.rfind("F:", 0) == 0) {
        std::string rest = s.substr(2);
        if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("field tag must be 'q' or 'f:<prime>', got: " + s);
        return Fp(static_cast<std::uint32_t>(std::stoull(rest)));
    }
    throw std::invalid_argument("field tag must be 'q' or 'f:<prime>', got: " + s);
}

std::string FieldTag::str() const {
    return rational ? "q" : "f:" + std::to_string(p);
}

void ChainComplex::validate_shapes() const {
    if (dims.size() != boundaries.size())
        throw std::invalid_argument("ChainComplex: dims/boundaries length mismatch");
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (boundaries[k].cols != dims[k])
            throw std::invalid_argument("ChainComplex: boundary column count mismatch");
        if (k > 0 && boundaries[k].rows != dims[k - 1])
            throw std::invalid_argument("ChainComplex: boundary row count mismatch");
        if (k == 0 && boundaries[0].rows > 1)
            throw std::invalid_argument("ChainComplex: degree-0 boundary must have 0 or 1 rows");
    }
    if (!labels.empty()) {
        if (labels.size() != dims.size())
            throw std::invalid_argument("ChainComplex: labels length mismatch");
        for (std::size_t k = 0; k < dims.size(); ++k)
            if (static_cast<i64>(labels[k].size()) != dims[k])
                throw std::invalid_argument("ChainComplex: label count mismatch");
    }
}

void verify_dd_zero(const ChainComplex& cc) {
    for (std::size_t k = 1; k < cc.boundaries.size(); ++k) {
        SparseIntMatrix prod = sparse_mul(cc.boundaries[k - 1], cc.boundaries[k]);
        if (!prod.entries.empty())
            throw InconsistencyError("boundary of boundary is nonzero in degree " +
                                     std::to_string(k));
    }
}

std::vector<i64> chain_ranks(const ChainComplex& cc, const FieldTag& f, std::uint64_t seed,
                             const RankOptions& opts) {
    std::vector<i64> r;
    r.reserve(cc.boundaries.size() + 1);
    for (const auto& b : cc.boundaries) {
        if (f.rational)
            r.push_back(rational_rank(b, seed, opts));
        else
            r.push_back(gfp_rank(b, PrimeField(f.p), opts));
    }
    r.push_back(0);
    return r;
}

std::vector<i64> chain_betti(const ChainComplex& cc, const FieldTag& f, std::uint64_t seed,
                             const RankOptions& opts) {
    auto r = chain_ranks(cc, f, seed, opts);
    std::vector<i64> b(cc.dims.size());
    for (std::size_t k = 0; k < cc.dims.size(); ++k) {
        b[k] = cc.dims[k] - r[k] - r[k + 1];
        if (b[k] < 0)
            throw InconsistencyError("negative Betti number in degree " + std::to_string(k));
    }
    return b;
}

ChainComplex simplicial_chain(const SimplicialComplex& c, bool augmented) {
    ChainComplex cc;
    const int d = c.dim();
    if (d < 0) return cc;  // empty complex: no graded pieces
    for (int k = 0; k <= d; ++k) cc.dims.push_back(static_cast<i64>(c.faces(k).size()));

    cc.boundaries.resize(d + 1);
    {
        std::vector<SparseIntMatrix::Entry> aug;
        if (augmented)
            for (i64 j = 0; j < cc.dims[0]; ++j) aug.push_back({0, j, 1});
        cc.boundaries[0] = SparseIntMatrix::from_triplets(augmented ? 1 : 0, cc.dims[0],
                                                          std::move(aug));
    }
    for (int k = 1; k <= d; ++k) {
        const auto& fs = c.faces(k);
        std::vector<SparseIntMatrix::Entry> tri;
        tri.reserve(fs.size() * (k + 1));
        std::vector<i32> sub;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            const auto& f = fs[j];
            i64 sign = 1;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                sub.clear();
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) sub.push_back(f[t]);
                i64 row = c.face_index(k - 1, sub);
                tri.push_back({row, static_cast<i64>(j), sign});
                sign = -sign;
            }
        }
        cc.boundaries[k] = SparseIntMatrix::from_triplets(cc.dims[k - 1], cc.dims[k],
                                                          std::move(tri));
    }
    return cc;
}

std::vector<i64> reduced_betti(const SimplicialComplex& c, const FieldTag& f,
                               std::uint64_t seed, const RankOptions& opts) {
    ChainComplex cc = simplicial_chain(c, /*augmented=*/true);
    if (cc.dims.empty()) return {};
    return chain_betti(cc, f, seed, opts);
}

}  // namespace homgrowth
