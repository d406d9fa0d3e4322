#include "homgrowth/nerve.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace homgrowth {

namespace {
using i32 = std::int32_t;
using i64 = std::int64_t;
using u64 = std::uint64_t;
using u128 = unsigned __int128;

std::string facet_token(std::size_t idx, std::size_t total) {
    int width = std::max<int>(2, static_cast<int>(std::to_string(total - 1).size()));
    std::string s = std::to_string(idx);
    while (static_cast<int>(s.size()) < width) s = "0" + s;
    return "F" + s;
}

}  // namespace

SimplicialComplex nerve_subcomplex(const SimplicialComplex& L) {
    if (L.facets.empty()) return empty_complex();
    const std::size_t m = L.facets.size();
    // the subsets with nonempty intersection are exactly the subsets of
    // some F_v = {maximal simplices containing v}, so the F_v generate
    std::vector<std::vector<std::string>> gen;
    for (std::size_t v = 0; v < L.vertices.size(); ++v) {
        std::vector<std::string> fv;
        for (std::size_t j = 0; j < m; ++j)
            if (std::binary_search(L.facets[j].begin(), L.facets[j].end(),
                                   static_cast<i32>(v)))
                fv.push_back(facet_token(j, m));
        if (!fv.empty()) gen.push_back(std::move(fv));
    }
    return build_complex(gen);
}

namespace {

// Enumerates the faces of the script-L nerve subcomplex: subsets of maximal
// simplices with nonempty common intersection, each with its intersection
// size and index product. Throws when the stored subset count explodes.
struct NerveFaces {
    // per subset size s (1-based): list of (prod n_v over tau, |tau|)
    std::vector<std::vector<std::pair<u64, int>>> by_size;
};

NerveFaces enumerate_nerve_faces(const SimplicialComplex& L, const CoverSpec& spec,
                                 int max_size) {
    const std::size_t m = L.facets.size();
    if (m > 63) throw BudgetError("nerve enumeration limited to 63 maximal simplices");
    u64 stored_bound = 0;
    std::vector<u64> fv_mask(L.vertices.size(), 0);
    for (std::size_t v = 0; v < L.vertices.size(); ++v) {
        u64 mask = 0;
        for (std::size_t j = 0; j < m; ++j)
            if (std::binary_search(L.facets[j].begin(), L.facets[j].end(),
                                   static_cast<i32>(v)))
                mask |= 1ull << j;
        fv_mask[v] = mask;
        int b = __builtin_popcountll(mask);
        stored_bound += (b >= 63) ? ~0ull : (1ull << b);
        if (stored_bound > (1ull << 22))
            throw BudgetError("nerve subset enumeration exceeds the stored-subset budget");
    }
    // distinct subsets sigma with nonempty tau: walk subsets of each F_v
    std::set<u64> seen;
    for (std::size_t v = 0; v < L.vertices.size(); ++v) {
        u64 fm = fv_mask[v];
        for (u64 sub = fm;; sub = (sub - 1) & fm) {
            if (sub) seen.insert(sub);
            if (sub == 0) break;
        }
    }
    NerveFaces nf;
    nf.by_size.resize(max_size + 1);
    for (u64 sigma : seen) {
        int s = __builtin_popcountll(sigma);
        if (s > max_size) continue;
        // tau = common intersection of the chosen maximal simplices
        std::vector<i32> tau;
        bool first = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (!(sigma >> j & 1)) continue;
            if (first) {
                tau = L.facets[j];
                first = false;
            } else {
                std::vector<i32> next;
                std::set_intersection(tau.begin(), tau.end(), L.facets[j].begin(),
                                      L.facets[j].end(), std::back_inserter(next));
                tau.swap(next);
            }
        }
        u64 prod = 1;
        for (i32 v : tau) prod *= static_cast<u64>(spec.exponents[v]);
        nf.by_size[s].push_back({prod, static_cast<int>(tau.size())});
    }
    return nf;
}

i64 checked_i64(u128 x, const char* what) {
    if (x > static_cast<u128>((1ull << 62)))
        throw BudgetError(std::string(what) + " exceeds 2^62");
    return static_cast<i64>(x);
}

u128 binomial_u128(int n, int k) {
    if (k < 0 || k > n) return 0;
    u128 r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * static_cast<u128>(n - k + i) / static_cast<u128>(i);
        if (r > (static_cast<u128>(1) << 100))
            throw BudgetError("binomial coefficient overflow in E^1 bookkeeping");
    }
    return r;
}

}  // namespace

i64 E1Table::at(int i, int j) const {
    if (i < 0 || j < 0) return 0;
    if (static_cast<std::size_t>(i) >= dims.size()) return 0;
    if (static_cast<std::size_t>(j) >= dims[i].size()) return 0;
    return dims[i][j];
}

E1Table e1_dimensions(const SimplicialComplex& L, const CoverSpec& spec,
                      int up_to_subset_size) {
    if (spec.exponents.size() != L.vertices.size())
        throw std::invalid_argument("cover spec does not match the vertex set");
    const int m = static_cast<int>(L.facets.size());
    const int cap = std::min(up_to_subset_size, m);
    if (cap < 1) throw std::invalid_argument("e1_dimensions: subset size must be >= 1");
    const u64 Q = spec.index();
    NerveFaces nf = enumerate_nerve_faces(L, spec, cap);

    E1Table table;
    table.m = m;
    const int maxj = L.dim() + 1;
    table.dims.assign(cap, std::vector<i64>(maxj + 1, 0));
    for (int s = 1; s <= cap; ++s) {
        const int i = s - 1;
        u128 nonempty = 0;
        std::vector<u128> acc(maxj + 1, 0);
        for (const auto& [prod, tsize] : nf.by_size[s]) {
            ++nonempty;
            u128 comps = Q / prod;  // components of the preimage torus
            for (int j = 0; j <= tsize; ++j)
                acc[j] += comps * binomial_u128(tsize, j);
        }
        // subsets with empty intersection: |Q| points apiece, H_0 only
        u128 empties = binomial_u128(m, s) - nonempty;
        acc[0] += empties * static_cast<u128>(Q);
        for (int j = 0; j <= maxj; ++j)
            table.dims[i][j] = checked_i64(acc[j], "E^1 dimension");
    }
    return table;
}

namespace {

// small chain complex whose tensor with F[Q] is C_*(Delta; V_sigma):
// basis in degree i = (i+1)-subsets with empty intersection; boundary =
// simplicial boundary of Delta restricted to those subsets
struct EmptyIntersectionComplex {
    std::vector<std::vector<u64>> basis;  // per degree, sorted subset masks
    std::vector<SparseIntMatrix> boundaries;
};

EmptyIntersectionComplex empty_intersection_complex(const SimplicialComplex& L) {
    const int m = static_cast<int>(L.facets.size());
    if (m > 14)
        throw BudgetError("coefficient_nerve_homology limited to 14 maximal simplices");
    if (L.vertices.size() > 62)
        throw BudgetError("coefficient_nerve_homology limited to 62 vertices");
    std::vector<u64> facet_vmask(m, 0);
    for (int j = 0; j < m; ++j)
        for (i32 v : L.facets[j]) facet_vmask[j] |= 1ull << v;

    EmptyIntersectionComplex ec;
    ec.basis.resize(m);
    const u64 full = (L.vertices.empty() ? 0 : (~0ull >> (64 - L.vertices.size())));
    for (u64 sigma = 1; sigma < (1ull << m); ++sigma) {
        u64 tau = full;
        for (int j = 0; j < m; ++j)
            if (sigma >> j & 1) tau &= facet_vmask[j];
        if (tau == 0) ec.basis[__builtin_popcountll(sigma) - 1].push_back(sigma);
    }
    for (auto& lvl : ec.basis) std::sort(lvl.begin(), lvl.end());

    ec.boundaries.resize(m);
    ec.boundaries[0] = SparseIntMatrix(0, static_cast<i64>(ec.basis[0].size()));
    for (int i = 1; i < m; ++i) {
        std::vector<SparseIntMatrix::Entry> tri;
        const auto& lvl = ec.basis[i];
        const auto& prev = ec.basis[i - 1];
        for (std::size_t c = 0; c < lvl.size(); ++c) {
            u64 sigma = lvl[c];
            i64 sign = 1;
            for (u64 rest = sigma; rest; rest &= rest - 1) {
                u64 bit = rest & (~rest + 1);  // lowest set bit
                u64 face = sigma & ~bit;
                auto it = std::lower_bound(prev.begin(), prev.end(), face);
                if (it != prev.end() && *it == face)
                    tri.push_back({static_cast<i64>(it - prev.begin()),
                                   static_cast<i64>(c), sign});
                sign = -sign;
            }
        }
        ec.boundaries[i] = SparseIntMatrix::from_triplets(
            static_cast<i64>(prev.size()), static_cast<i64>(lvl.size()), std::move(tri));
    }
    return ec;
}

}  // namespace

std::vector<i64> coefficient_nerve_homology(const SimplicialComplex& L,
                                            const CoverSpec& spec, const FieldTag& f,
                                            u64 seed, const RankOptions& opts) {
    if (spec.exponents.size() != L.vertices.size())
        throw std::invalid_argument("cover spec does not match the vertex set");
    if (L.facets.empty()) return {};
    const int m = static_cast<int>(L.facets.size());
    const i64 Q = static_cast<i64>(spec.index());
    EmptyIntersectionComplex ec = empty_intersection_complex(L);
    // every rank and dimension carries a tensor factor F[Q]
    std::vector<i64> rank(m + 1, 0);
    for (int i = 0; i < m; ++i) {
        if (f.rational)
            rank[i] = rational_rank(ec.boundaries[i], seed, opts);
        else
            rank[i] = gfp_rank(ec.boundaries[i], PrimeField(f.p), opts);
    }
    std::vector<i64> h(m, 0);
    for (int i = 0; i < m; ++i)
        h[i] = Q * (static_cast<i64>(ec.basis[i].size()) - rank[i] -
                    (i + 1 < m ? rank[i + 1] : 0));

    auto rb = reduced_betti(L, f, seed, opts);
    for (int i = 0; i < m; ++i) {
        i64 expect = (i >= 1 && static_cast<std::size_t>(i - 1) < rb.size())
                         ? Q * rb[i - 1]
                         : 0;
        if (h[i] != expect)
            throw InconsistencyError(
                "coefficient nerve homology mismatch in degree " + std::to_string(i) +
                ": got " + std::to_string(h[i]) + ", expected " + std::to_string(expect));
    }
    return h;
}

CollapseReport collapse_report(const SimplicialComplex& L, const std::string& name,
                               const CoverSpec& spec, const FieldTag& f, u64 seed,
                               const BudgetOptions& budget, const RankOptions& opts) {
    CollapseReport rep;
    rep.complex_name = name;
    rep.field = f;
    if (!spec.is_uniform())
        throw std::invalid_argument("collapse_report requires a uniform cover spec");
    rep.n = spec.exponents.empty() ? 1 : spec.exponents[0];

    const i64 Q = static_cast<i64>(spec.index());
    BettiTable cov = cover_betti(L, name, spec, f, seed, budget, opts);
    std::vector<i64> nerve = coefficient_nerve_homology(L, spec, f, seed, opts);
    const int m = static_cast<int>(L.facets.size());
    E1Table e1 = e1_dimensions(L, spec, m);

    // chain-level dimensions of C_i(Delta; V_sigma), for the kernel column
    EmptyIntersectionComplex ec = empty_intersection_complex(L);

    const int degrees = static_cast<int>(cov.betti.size());
    for (int i = 0; i < degrees; ++i) {
        CollapseRow row;
        row.degree = i;
        row.cover_normalized = Fraction(cov.betti[i], Q);
        row.nerve_normalized =
            (i < static_cast<int>(nerve.size())) ? Fraction(nerve[i], Q) : Fraction(0);
        i64 offrow = 0;
        for (int j = 1; j <= i; ++j) offrow += e1.at(i - j, j);
        row.e1_offrow_mass = Fraction(offrow, Q);
        i64 chain_dim =
            (i < m) ? Q * static_cast<i64>(ec.basis[i].size()) : 0;
        row.e1_row0_kernel = Fraction(e1.at(i, 0) - chain_dim, Q);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace homgrowth
