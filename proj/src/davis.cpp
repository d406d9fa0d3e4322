#include "homgrowth/davis.hpp"

#include <algorithm>
#include <stdexcept>

namespace homgrowth {

namespace {
using i32 = std::int32_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

u64 insert_bit(u64 code, int t, u64 bit) {
    const u64 low = code & ((1ull << t) - 1);
    return low | (bit << t) | ((code >> t) << (t + 1));
}

struct DavisGeometry {
    int nv = 0;
    std::vector<i64> fv;
    std::vector<i64> dims;  // f_{k-1} * 2^(nv-k)
};

DavisGeometry davis_geometry(const SimplicialComplex& L, const BudgetOptions& budget) {
    DavisGeometry g;
    g.nv = static_cast<int>(L.vertices.size());
    if (g.nv > 62) throw BudgetError("Davis complex limited to 62 vertices");
    g.fv = L.f_vector();
    for (std::size_t k = 0; k < g.fv.size(); ++k) {
        const int rem = g.nv - static_cast<int>(k);
        if (rem < 0) throw InconsistencyError("face dimension exceeds vertex count");
        if (g.fv[k] > budget.max_cells_per_degree >> rem)
            throw BudgetError("Davis cell count exceeds the per-degree budget");
        g.dims.push_back(g.fv[k] << rem);
    }
    return g;
}

// vertex-cell incidence audit around sampled vertices, driven by the
// boundary matrices: the cells whose closure contains a vertex must
// biject with the faces of L, degree by degree
void check_vertex_links(const SimplicialComplex& L, const ChainComplex& cc,
                        const DavisGeometry& g) {
    const int top = cc.top_degree();
    // column supports per degree
    std::vector<std::vector<std::vector<i64>>> col_rows(top + 1);
    for (int k = 1; k <= top; ++k) {
        col_rows[k].assign(cc.dims[k], {});
        for (const auto& e : cc.boundaries[k].entries) col_rows[k][e.c].push_back(e.r);
    }
    std::vector<i64> samples;
    const i64 nverts = cc.dims[0];
    const i64 want = std::min<i64>(nverts, 16);
    for (i64 s = 0; s < want; ++s) samples.push_back(s * (nverts / want));
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    for (i64 eps : samples) {
        std::vector<i64> incident{eps};
        for (int k = 1; k <= top; ++k) {
            std::vector<char> prev(cc.dims[k - 1], 0);
            for (i64 id : incident) prev[id] = 1;
            std::vector<i64> next;
            for (i64 c = 0; c < cc.dims[k]; ++c) {
                int hits = 0;
                for (i64 r : col_rows[k][c]) hits += prev[r];
                if (hits == k)
                    next.push_back(c);
                else if (hits != 0)
                    throw InconsistencyError("vertex link audit: partial incidence");
            }
            // the incident cells must hit every (k-1)-face of L exactly once
            const int rem = g.nv - k;
            std::vector<char> seen(g.fv[k], 0);
            for (i64 id : next) {
                i64 face = id >> rem;
                if (seen[face])
                    throw InconsistencyError("vertex link audit: duplicate face");
                seen[face] = 1;
            }
            if (static_cast<i64>(next.size()) != g.fv[k])
                throw InconsistencyError("vertex link audit: face count mismatch");
            incident.swap(next);
        }
    }
}

// exhaustive count: every vertex of Y_L lies in the closure of exactly
// f_{k-1}(L) cells of degree k (cheap encoding-level sweep)
void check_vertex_counts(const SimplicialComplex& L, const DavisGeometry& g) {
    const int nv = g.nv;
    double work = 0;
    for (std::size_t k = 0; k < g.dims.size(); ++k)
        work += static_cast<double>(g.dims[k]) * (1ull << k);
    if (work > 16'777'216.0) return;  // the sampled audit still ran
    std::vector<std::vector<i64>> counts(g.dims.size(),
                                         std::vector<i64>(1ull << nv, 0));
    for (std::size_t k = 0; k < g.dims.size(); ++k) {
        const int rem = nv - static_cast<int>(k);
        for (i64 face = 0; face < g.fv[k]; ++face) {
            const auto& fverts =
                (k == 0) ? std::vector<i32>{} : L.faces(static_cast<int>(k) - 1)[face];
            for (u64 code = 0; code < (1ull << rem); ++code) {
                // expand to full sign vectors over V by completing on sigma
                u64 base = 0;
                int t = 0;
                for (int v = 0; v < nv; ++v) {
                    if (std::binary_search(fverts.begin(), fverts.end(), v)) continue;
                    base |= ((code >> t) & 1ull) << v;
                    ++t;
                }
                for (u64 fill = 0;; fill = (fill + 1)) {
                    u64 eps = base;
                    for (std::size_t j = 0; j < fverts.size(); ++j)
                        eps |= ((fill >> j) & 1ull) << fverts[j];
                    // recompress eps to the degree-0 code (identity: sigma empty)
                    counts[k][eps]++;
                    if (fill + 1 >= (1ull << fverts.size())) break;
                }
            }
        }
    }
    for (std::size_t k = 0; k < counts.size(); ++k)
        for (u64 eps = 0; eps < counts[k].size(); ++eps)
            if (counts[k][eps] != g.fv[k])
                throw InconsistencyError("vertex incidence count mismatch in degree " +
                                         std::to_string(k));
}

}  // namespace

DavisComplex build_davis(const SimplicialComplex& L, const BudgetOptions& budget) {
    DavisGeometry g = davis_geometry(L, budget);
    const int nv = g.nv;
    const int top = static_cast<int>(g.dims.size()) - 1;

    DavisComplex d;
    d.base = L;
    d.chain.dims = g.dims;
    d.chain.boundaries.resize(top + 1);
    d.chain.boundaries[0] = SparseIntMatrix(0, g.dims[0]);
    for (int k = 1; k <= top; ++k) {
        const auto& fs = L.faces(k - 1);
        const int rem = nv - k;
        std::vector<SparseIntMatrix::Entry> tri;
        tri.reserve(static_cast<std::size_t>(g.dims[k]) * 2 * k);
        for (std::size_t j = 0; j < fs.size(); ++j) {
            const auto& f = fs[j];
            // per deleted vertex: target face id and bit insertion position
            struct Term {
                i64 tgt;
                int pos;
                i64 sign;
            };
            std::vector<Term> terms;
            std::vector<i32> sub;
            i64 sign = 1;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                sub.clear();
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) sub.push_back(f[t]);
                i64 tgt = (k == 1) ? 0 : L.face_index(k - 2, sub);
                terms.push_back({tgt, f[drop] - static_cast<int>(drop), sign});
                sign = -sign;
            }
            for (u64 code = 0; code < (1ull << rem); ++code) {
                const i64 col = static_cast<i64>(j) << rem | static_cast<i64>(code);
                for (const auto& t : terms) {
                    const u64 plus = insert_bit(code, t.pos, 0);
                    const u64 minus = insert_bit(code, t.pos, 1);
                    tri.push_back({(t.tgt << (rem + 1)) | static_cast<i64>(plus), col, t.sign});
                    tri.push_back(
                        {(t.tgt << (rem + 1)) | static_cast<i64>(minus), col, -t.sign});
                }
            }
        }
        d.chain.boundaries[k] =
            SparseIntMatrix::from_triplets(g.dims[k - 1], g.dims[k], std::move(tri));
    }
    d.chain.validate_shapes();
    verify_dd_zero(d.chain);
    check_vertex_links(L, d.chain, g);
    check_vertex_counts(L, g);
    return d;
}

BettiTable davis_betti(const SimplicialComplex& L, const std::string& name,
                       const FieldTag& f, u64 seed, const BudgetOptions& budget,
                       const RankOptions& opts) {
    DavisComplex d = build_davis(L, budget);
    BettiTable t;
    t.complex_name = name;
    t.index = 1ull << L.vertices.size();
    t.field = f;
    t.seed = seed;
    t.betti = chain_betti(d.chain, f, seed, opts);
    i64 lhs = 0, rhs = 0, s = 1;
    for (std::size_t k = 0; k < t.betti.size(); ++k, s = -s) {
        lhs += s * t.betti[k];
        rhs += s * d.chain.dims[k];
    }
    if (lhs != rhs) throw InconsistencyError("Euler characteristic mismatch for Y_L");
    for (i64 b : t.betti) t.normalized.push_back(Fraction(b, static_cast<i64>(t.index)));
    return t;
}

namespace {

// one piece of the Mayer-Vietoris decomposition: the cells (eps, sigma)
// with sigma a face of the given subcomplex, in ambient decoration
struct Piece {
    std::vector<i64> dims;
    std::vector<std::vector<i64>> amb_faces;  // per degree, sorted ambient face ids
    std::vector<SparseIntMatrix> boundaries;  // local indexing
};

Piece carve_piece(const SimplicialComplex& L, const ChainComplex& amb,
                  const SimplicialComplex& sub) {
    const int nv = static_cast<int>(L.vertices.size());
    const int amb_top = amb.top_degree();
    Piece p;
    p.amb_faces.resize(amb_top + 1);
    p.dims.assign(amb_top + 1, 0);
    p.amb_faces[0] = {0};  // the empty face
    for (int k = 1; k <= amb_top; ++k) {
        if (k - 1 > sub.dim()) break;
        for (const auto& f : sub.faces(k - 1)) {
            std::vector<i32> in_L;
            for (i32 v : f) in_L.push_back(static_cast<i32>(L.vertex_index(sub.vertices[v])));
            std::sort(in_L.begin(), in_L.end());
            const i64 idx = L.face_index(k - 1, in_L);
            if (idx < 0) throw InconsistencyError("piece face missing from the ambient complex");
            p.amb_faces[k].push_back(idx);
        }
        std::sort(p.amb_faces[k].begin(), p.amb_faces[k].end());
    }
    for (int k = 0; k <= amb_top; ++k) {
        const int rem = nv - k;
        p.dims[k] = static_cast<i64>(p.amb_faces[k].size()) << rem;
    }
    // boundary submatrices in local coordinates
    p.boundaries.resize(amb_top + 1);
    p.boundaries[0] = SparseIntMatrix(0, p.dims[0]);
    for (int k = 1; k <= amb_top; ++k) {
        const int rem = nv - k;
        const auto& cols = p.amb_faces[k];
        const auto& rows = p.amb_faces[k - 1];
        std::vector<i64> row_pos;  // ambient face -> local face
        {
            i64 maxf = rows.empty() ? 0 : rows.back() + 1;
            row_pos.assign(maxf, -1);
            for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = i;
        }
        std::vector<i64> col_pos(amb.boundaries[k].cols >> rem, -1);
        for (std::size_t i = 0; i < cols.size(); ++i) col_pos[cols[i]] = static_cast<i64>(i);
        std::vector<SparseIntMatrix::Entry> tri;
        for (const auto& e : amb.boundaries[k].entries) {
            const i64 cface = e.c >> rem;
            const i64 lc = col_pos[cface];
            if (lc < 0) continue;  // cell outside the piece
            const i64 code = e.c & ((1ll << rem) - 1);
            const i64 rface = e.r >> (rem + 1);
            const i64 rcode = e.r & ((1ll << (rem + 1)) - 1);
            const i64 lr =
                (rface < static_cast<i64>(row_pos.size())) ? row_pos[rface] : -1;
            if (lr < 0) throw InconsistencyError("piece is not closed under the boundary");
            tri.push_back({lr << (rem + 1) | rcode, lc << rem | code, e.v});
        }
        p.boundaries[k] =
            SparseIntMatrix::from_triplets(p.dims[k - 1], p.dims[k], std::move(tri));
    }
    return p;
}

struct MvNumbers {
    std::vector<i64> h_full, h_st, h_rest, h_lk;
    std::vector<i64> induced_rank;  // H_i(lk) -> H_i(st)
    bool operator==(const MvNumbers&) const = default;
};

std::vector<i64> piece_homology(const Piece& p, const PrimeField& f,
                                const RankOptions& opts, std::vector<i64>* ranks_out) {
    std::vector<i64> r(p.boundaries.size() + 1, 0);
    for (std::size_t k = 0; k < p.boundaries.size(); ++k)
        r[k] = gfp_rank(p.boundaries[k], f, opts);
    std::vector<i64> h(p.dims.size());
    for (std::size_t k = 0; k < p.dims.size(); ++k) h[k] = p.dims[k] - r[k] - r[k + 1];
    if (ranks_out) *ranks_out = r;
    return h;
}

MvNumbers mv_numbers(const ChainComplex& full, const Piece& st, const Piece& rest,
                     const Piece& lk, const PrimeField& f, int nv,
                     const RankOptions& opts) {
    MvNumbers out;
    std::vector<i64> r_full(full.boundaries.size() + 1, 0);
    for (std::size_t k = 0; k < full.boundaries.size(); ++k)
        r_full[k] = gfp_rank(full.boundaries[k], f, opts);
    out.h_full.resize(full.dims.size());
    for (std::size_t k = 0; k < full.dims.size(); ++k)
        out.h_full[k] = full.dims[k] - r_full[k] - r_full[k + 1];

    std::vector<i64> r_st;
    out.h_st = piece_homology(st, f, opts, &r_st);
    out.h_rest = piece_homology(rest, f, opts, nullptr);
    out.h_lk = piece_homology(lk, f, opts, nullptr);

    // induced-map rank in each degree: span of lk-cycles inside st modulo
    // st-boundaries, via rank([cycles | boundary]) - rank(boundary)
    const int degrees = static_cast<int>(full.dims.size());
    out.induced_rank.assign(degrees, 0);
    for (int i = 0; i < degrees; ++i) {
        const i64 bd_rank = (i + 1 < degrees) ? r_st[i + 1] : 0;
        if (i == 0) {
            // every piece contains all degree-0 cells, so the unit cycles
            // of the link piece already span the star piece's degree 0
            if (lk.dims[0] != st.dims[0])
                throw InconsistencyError("degree-0 cells differ between pieces");
            out.induced_rank[0] = st.dims[0] - bd_rank;
            continue;
        }
        auto basis = gfp_nullspace(lk.boundaries[i], f);
        if (basis.empty()) {
            out.induced_rank[i] = 0;
            continue;
        }
        // lk-local -> st-local coordinate map
        const int rem = nv - i;
        std::vector<i64> face_map(lk.amb_faces[i].size());
        for (std::size_t j = 0; j < lk.amb_faces[i].size(); ++j) {
            auto it = std::lower_bound(st.amb_faces[i].begin(), st.amb_faces[i].end(),
                                       lk.amb_faces[i][j]);
            if (it == st.amb_faces[i].end() || *it != lk.amb_faces[i][j])
                throw InconsistencyError("link piece is not inside the star piece");
            face_map[j] = it - st.amb_faces[i].begin();
        }
        std::vector<SparseIntMatrix::Entry> tri;
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (i64 c = 0; c < lk.dims[i]; ++c)
                if (basis[b][c]) {
                    const i64 face = c >> rem, code = c & ((1ll << rem) - 1);
                    tri.push_back({face_map[face] << rem | code, static_cast<i64>(b),
                                   static_cast<i64>(basis[b][c])});
                }
        const i64 nb = static_cast<i64>(basis.size());
        if (i + 1 < degrees)
            for (const auto& e : st.boundaries[i + 1].entries)
                tri.push_back({e.r, nb + e.c, e.v});
        SparseIntMatrix m = SparseIntMatrix::from_triplets(
            st.dims[i], nb + (i + 1 < degrees ? st.dims[i + 1] : 0), std::move(tri));
        out.induced_rank[i] = gfp_rank(m, f, opts) - bd_rank;
    }
    return out;
}

}  // namespace

MvReport mv_check(const SimplicialComplex& L, const std::string& name,
                  const std::string& v, const FieldTag& f, u64 seed,
                  const BudgetOptions& budget, const RankOptions& opts) {
    if (L.vertex_index(v) < 0)
        throw std::invalid_argument("mv_check: unknown vertex " + v);
    DavisComplex Y = build_davis(L, budget);
    const int nv = static_cast<int>(L.vertices.size());

    SimplicialComplex A = star(L, v);
    std::vector<std::string> others;
    for (const auto& w : L.vertices)
        if (w != v) others.push_back(w);
    if (others.empty())
        throw std::invalid_argument("mv_check needs at least two vertices");
    SimplicialComplex B = full_subcomplex(L, others);
    SimplicialComplex C = link(L, {v});

    Piece st = carve_piece(L, Y.chain, A);
    Piece rest = carve_piece(L, Y.chain, B);
    Piece lk = carve_piece(L, Y.chain, C);

    MvReport rep;
    rep.complex_name = name;
    rep.vertex = v;
    rep.field = f;
    rep.dims_full = Y.chain.dims;
    rep.dims_st = st.dims;
    rep.dims_rest = rest.dims;
    rep.dims_lk = lk.dims;

    MvNumbers nums;
    if (!f.rational) {
        nums = mv_numbers(Y.chain, st, rest, lk, PrimeField(f.p), nv, opts);
    } else {
        // two distinct primes must agree on every reported number
        std::vector<std::pair<u32, MvNumbers>> seen;
        bool done = false;
        for (int k = 0; k <= 16 && !done; ++k) {
            u32 p = random_prime_stream(seed, k);
            bool dup = false;
            for (auto& pr : seen) dup = dup || pr.first == p;
            if (dup) continue;
            seen.push_back({p, mv_numbers(Y.chain, st, rest, lk, PrimeField(p), nv, opts)});
            for (std::size_t a = 0; a + 1 < seen.size() && !done; ++a)
                if (seen[a].second == seen.back().second) {
                    nums = seen.back().second;
                    done = true;
                }
        }
        if (!done)
            throw InconsistencyError("mv_check: primes keep disagreeing over Q");
    }

    rep.h_full = nums.h_full;
    rep.h_st = nums.h_st;
    rep.h_rest = nums.h_rest;
    rep.h_lk = nums.h_lk;

    i64 alt = 0, s = 1;
    for (std::size_t i = 0; i < nums.h_full.size(); ++i, s = -s)
        alt += s * (nums.h_lk[i] - nums.h_st[i] - nums.h_rest[i] + nums.h_full[i]);
    rep.alternating_sum_zero = alt == 0;

    rep.surjective.resize(nums.h_full.size());
    rep.all_surjective = true;
    for (std::size_t i = 0; i < nums.h_full.size(); ++i) {
        rep.surjective[i] = nums.induced_rank[i] == nums.h_st[i];
        rep.all_surjective = rep.all_surjective && rep.surjective[i];
    }
    return rep;
}

bool embedding_criterion(const SimplicialComplex& L, u64 seed, const RankOptions& opts) {
    const int d = L.dim();
    if (d < 0) return true;
    auto rb = reduced_betti(L, FieldTag::Fp(2), seed, opts);
    return rb[d] == 0;
}

}  // namespace homgrowth
