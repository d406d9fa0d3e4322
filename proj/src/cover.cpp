#include "homgrowth/cover.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <stdexcept>

namespace homgrowth {

namespace {
using i32 = std::int32_t;
using i64 = std::int64_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
}  // namespace

CoverSpec CoverSpec::uniform(const SimplicialComplex& L, i64 n) {
    if (n < 1) throw std::invalid_argument("cover exponent must be >= 1");
    CoverSpec s;
    s.exponents.assign(L.vertices.size(), n);
    return s;
}

CoverSpec CoverSpec::from_map(const SimplicialComplex& L,
                              const std::map<std::string, i64>& n_of) {
    CoverSpec s;
    s.exponents.assign(L.vertices.size(), 0);
    for (const auto& [name, n] : n_of) {
        i64 i = L.vertex_index(name);
        if (i < 0) throw std::invalid_argument("cover spec: unknown vertex " + name);
        if (n < 1) throw std::invalid_argument("cover exponent must be >= 1");
        s.exponents[i] = n;
    }
    for (std::size_t i = 0; i < s.exponents.size(); ++i)
        if (s.exponents[i] == 0)
            throw std::invalid_argument("cover spec: missing exponent for vertex " +
                                        L.vertices[i]);
    return s;
}

u64 CoverSpec::index() const {
    u64 q = 1;
    for (i64 n : exponents) {
        if (n < 1) throw std::invalid_argument("cover exponent must be >= 1");
        if (q > (1ull << 62) / static_cast<u64>(n))
            throw BudgetError("cover index |Q| exceeds 2^62");
        q *= static_cast<u64>(n);
    }
    return q;
}

bool CoverSpec::is_uniform() const {
    for (i64 n : exponents)
        if (n != exponents[0]) return false;
    return true;
}

namespace {

struct CoverGeometry {
    i64 index;                       // |Q|
    std::vector<i64> strides;        // mixed radix, vertex 0 least significant
    std::vector<i64> fv;             // f_{-1}, f_0, ...
    std::vector<i64> dims;           // |Q| * f_{k-1}
};

CoverGeometry cover_geometry(const SimplicialComplex& L, const CoverSpec& spec,
                             const BudgetOptions& budget) {
    if (spec.exponents.size() != L.vertices.size())
        throw std::invalid_argument("cover spec does not match the vertex set");
    CoverGeometry g;
    g.index = static_cast<i64>(spec.index());
    g.strides.resize(spec.exponents.size());
    i64 s = 1;
    for (std::size_t i = 0; i < spec.exponents.size(); ++i) {
        g.strides[i] = s;
        s *= spec.exponents[i];
    }
    g.fv = L.f_vector();
    for (i64 f : g.fv) {
        if (f > 0 && g.index > budget.max_cells_per_degree / f)
            throw BudgetError("cover cell count exceeds the per-degree budget (" +
                              std::to_string(g.index) + " * " + std::to_string(f) + ")");
        g.dims.push_back(g.index * f);
    }
    return g;
}

std::string cover_label(const SimplicialComplex& L, const CoverSpec& spec, i64 q_idx,
                        const std::vector<i32>* face) {
    std::string s;
    for (std::size_t i = 0; i < spec.exponents.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(q_idx % spec.exponents[i]);
        q_idx /= spec.exponents[i];
    }
    s += ";";
    if (face)
        for (std::size_t j = 0; j < face->size(); ++j) {
            if (j) s += " ";
            s += L.vertices[(*face)[j]];
        }
    return s;
}

}  // namespace

ChainComplex build_cover_complex(const SimplicialComplex& L, const CoverSpec& spec,
                                 const BudgetOptions& budget, bool with_labels) {
    if (!L.facets.empty() && !is_flag(L))
        std::cerr << "warning: base complex is not flag; the cover models the "
                     "right-angled Artin group of its 1-skeleton relations only at "
                     "the cell level\n";
    CoverGeometry g = cover_geometry(L, spec, budget);
    const int top = static_cast<int>(g.dims.size()) - 1;  // = dim L + 1

    ChainComplex cc;
    cc.dims = g.dims;
    cc.boundaries.resize(top + 1);
    cc.boundaries[0] = SparseIntMatrix(0, g.dims[0]);

    // one odometer pass per degree; digits give q + e_v in O(1)
    for (int k = 1; k <= top; ++k) {
        const auto& fs = L.faces(k - 1);
        const i64 nf = static_cast<i64>(fs.size());
        const i64 nf_prev = g.fv[k - 1];  // f_{k-2}
        std::vector<SparseIntMatrix::Entry> tri;
        tri.reserve(static_cast<std::size_t>(g.index) * nf * 2 * k);

        // face-local boundary data: (target face index, deleted vertex, sign)
        struct Term {
            i64 tgt;
            i32 v;
            i64 sign;
        };
        std::vector<std::vector<Term>> face_terms(nf);
        std::vector<i32> sub;
        for (i64 j = 0; j < nf; ++j) {
            const auto& f = fs[j];
            i64 sign = 1;
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                sub.clear();
                for (std::size_t t = 0; t < f.size(); ++t)
                    if (t != drop) sub.push_back(f[t]);
                i64 tgt = (k == 1) ? 0 : L.face_index(k - 2, sub);
                if (spec.exponents[f[drop]] > 1)  // n_v = 1 terms cancel
                    face_terms[j].push_back({tgt, f[drop], sign});
                sign = -sign;
            }
        }

        std::vector<i64> digit(spec.exponents.size(), 0);
        for (i64 q = 0; q < g.index; ++q) {
            for (i64 j = 0; j < nf; ++j) {
                const i64 col = q * nf + j;
                for (const auto& t : face_terms[j]) {
                    const i64 n_v = spec.exponents[t.v];
                    const i64 q_plus =
                        (digit[t.v] + 1 < n_v) ? q + g.strides[t.v]
                                               : q - (n_v - 1) * g.strides[t.v];
                    tri.push_back({q_plus * nf_prev + t.tgt, col, t.sign});
                    tri.push_back({q * nf_prev + t.tgt, col, -t.sign});
                }
            }
            for (std::size_t i = 0; i < digit.size(); ++i) {  // odometer tick
                if (++digit[i] < spec.exponents[i]) break;
                digit[i] = 0;
            }
        }
        cc.boundaries[k] = SparseIntMatrix::from_triplets(g.dims[k - 1], g.dims[k],
                                                          std::move(tri));
    }

    if (with_labels) {
        cc.labels.resize(top + 1);
        for (int k = 0; k <= top; ++k) {
            const auto* fs = (k == 0) ? nullptr : &L.faces(k - 1);
            const i64 nf = (k == 0) ? 1 : static_cast<i64>(fs->size());
            for (i64 q = 0; q < g.index; ++q)
                for (i64 j = 0; j < nf; ++j)
                    cc.labels[k].push_back(
                        cover_label(L, spec, q, k == 0 ? nullptr : &(*fs)[j]));
        }
    }
    cc.validate_shapes();
    verify_dd_zero(cc);
    return cc;
}

ChainComplex twisted_complex(const SimplicialComplex& L, const CoverSpec& spec,
                             const std::vector<u32>& chi, const PrimeField& f) {
    if (chi.size() != L.vertices.size())
        throw std::invalid_argument("character length does not match the vertex set");
    if (spec.exponents.size() != L.vertices.size())
        throw std::invalid_argument("cover spec does not match the vertex set");
    const u64 p = f.p;
    for (std::size_t v = 0; v < chi.size(); ++v) {
        if (chi[v] == 0 || chi[v] >= p)
            throw std::invalid_argument("character value out of range");
        u64 pw = 1;
        for (i64 e = 0; e < spec.exponents[v]; ++e) pw = (pw * chi[v]) % p;
        if (pw != 1)
            throw std::invalid_argument("character value is not an n_v-th root of unity");
    }

    ChainComplex cc;
    const auto fv = L.f_vector();
    const int top = static_cast<int>(fv.size()) - 1;
    cc.dims = fv;  // dims[k] = f_{k-1}
    cc.boundaries.resize(top + 1);
    cc.boundaries[0] = SparseIntMatrix(0, 1);
    for (int k = 1; k <= top; ++k) {
        const auto& fs = L.faces(k - 1);
        std::vector<SparseIntMatrix::Entry> tri;
        std::vector<i32> sub;
        for (std::size_t j = 0; j < fs.size(); ++j) {
            const auto& face = fs[j];
            i64 sign = 1;
            for (std::size_t drop = 0; drop < face.size(); ++drop) {
                sub.clear();
                for (std::size_t t = 0; t < face.size(); ++t)
                    if (t != drop) sub.push_back(face[t]);
                i64 tgt = (k == 1) ? 0 : L.face_index(k - 2, sub);
                i64 coef = static_cast<i64>(chi[face[drop]]) - 1;  // chi(v)-1 as an integer lift
                if (coef != 0) tri.push_back({tgt, static_cast<i64>(j), sign * coef});
                sign = -sign;
            }
        }
        cc.boundaries[k] = SparseIntMatrix::from_triplets(cc.dims[k - 1], cc.dims[k],
                                                          std::move(tri));
    }
    cc.validate_shapes();
    verify_dd_zero(cc);  // holds over Z: the scalar coefficients commute
    return cc;
}

namespace {

// ranks of all cover boundaries over F_p via the character decomposition;
// valid whenever every chi value exists in F_p (callers ensure n_v | p-1)
std::vector<i64> cover_ranks_by_characters(const SimplicialComplex& L,
                                           const CoverSpec& spec, const PrimeField& f,
                                           const std::vector<std::vector<u32>>& roots,
                                           const RankOptions& opts) {
    const int degrees = static_cast<int>(L.f_vector().size());
    std::vector<i64> ranks(degrees + 1, 0);
    std::vector<i64> digit(spec.exponents.size(), 0);
    std::vector<u32> chi(spec.exponents.size(), 1);
    const u64 nchars = spec.index();
    for (u64 a = 0; a < nchars; ++a) {
        for (std::size_t v = 0; v < chi.size(); ++v) chi[v] = roots[v][digit[v]];
        ChainComplex tw = twisted_complex(L, spec, chi, f);
        for (int k = 0; k < degrees; ++k) ranks[k] += gfp_rank(tw.boundaries[k], f, opts);
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < spec.exponents[i]) break;
            digit[i] = 0;
        }
    }
    return ranks;
}

std::vector<std::vector<u32>> pm_one_roots(const CoverSpec& spec, const PrimeField& f) {
    std::vector<std::vector<u32>> roots;
    for (i64 n : spec.exponents) {
        if (n == 1)
            roots.push_back({1});
        else
            roots.push_back({1, f.p - 1});
    }
    return roots;
}

bool fast_path_applies(const CoverSpec& spec, const FieldTag& f) {
    if (!f.rational && f.p == 2) return false;
    if (spec.index() < 512) return false;
    for (i64 n : spec.exponents)
        if (n > 2) return false;
    return true;
}

void assert_euler(const std::vector<i64>& dims, const std::vector<i64>& betti) {
    i64 lhs = 0, rhs = 0, s = 1;
    for (std::size_t k = 0; k < dims.size(); ++k, s = -s) {
        lhs += s * betti[k];
        rhs += s * dims[k];
    }
    if (lhs != rhs)
        throw InconsistencyError("Euler characteristic mismatch: alternating Betti sum " +
                                 std::to_string(lhs) + " vs cell count sum " +
                                 std::to_string(rhs));
}

}  // namespace

BettiTable cover_betti(const SimplicialComplex& L, const std::string& name,
                       const CoverSpec& spec, const FieldTag& f, u64 seed,
                       const BudgetOptions& budget, const RankOptions& opts) {
    BettiTable t;
    t.complex_name = name;
    t.exponents = spec.exponents;
    t.index = spec.index();
    t.field = f;
    t.seed = seed;

    CoverGeometry g = cover_geometry(L, spec, budget);
    std::vector<i64> ranks;
    if (fast_path_applies(spec, f) && !L.facets.empty()) {
        if (f.rational) {
            // per-degree two-distinct-prime agreement, mirroring rational_rank
            std::vector<std::pair<u32, std::vector<i64>>> seen;
            const int degrees = static_cast<int>(g.fv.size());
            for (int k = 0;; ++k) {
                if (k > 64) throw InconsistencyError("cover_betti: primes keep disagreeing");
                u32 p = random_prime_stream(seed, k);
                bool dup = false;
                for (auto& pr : seen) dup = dup || pr.first == p;
                if (dup) continue;
                PrimeField pf(p);
                seen.push_back({p, cover_ranks_by_characters(L, spec, pf,
                                                             pm_one_roots(spec, pf), opts)});
                bool done = seen.size() >= 2;
                std::vector<i64> best(degrees + 1, 0);
                for (int d = 0; d <= degrees && done; ++d) {
                    for (auto& pr : seen) best[d] = std::max(best[d], pr.second[d]);
                    int agree = 0;
                    for (auto& pr : seen) agree += pr.second[d] == best[d];
                    done = agree >= 2;
                }
                if (done) {
                    ranks = best;
                    break;
                }
            }
        } else {
            PrimeField pf(f.p);
            ranks = cover_ranks_by_characters(L, spec, pf, pm_one_roots(spec, pf), opts);
        }
        ranks.resize(g.dims.size() + 1, 0);
    } else {
        ChainComplex cc = build_cover_complex(L, spec, budget);
        ranks = chain_ranks(cc, f, seed, opts);
    }

    for (std::size_t k = 0; k < g.dims.size(); ++k) {
        i64 b = g.dims[k] - ranks[k] - ranks[k + 1];
        if (b < 0) throw InconsistencyError("negative Betti number in degree " +
                                            std::to_string(k));
        t.betti.push_back(b);
        t.normalized.push_back(Fraction(b, g.index));
    }
    assert_euler(g.dims, t.betti);

    auto rb = reduced_betti(L, f, seed, opts);
    t.targets.assign(t.betti.size(), 0);
    for (std::size_t i = 1; i < t.targets.size(); ++i)
        if (i - 1 < rb.size()) t.targets[i] = rb[i - 1];
    return t;
}

std::vector<BettiTable> normalized_betti_scan(const SimplicialComplex& L,
                                              const std::string& name, const FieldTag& f,
                                              const std::vector<i64>& n_list, u64 seed,
                                              const BudgetOptions& budget,
                                              const RankOptions& opts) {
    std::vector<BettiTable> out;
    for (i64 n : n_list)
        out.push_back(cover_betti(L, name, CoverSpec::uniform(L, n), f, seed, budget, opts));
    return out;
}

bool character_decomposition_check(const SimplicialComplex& L, const CoverSpec& spec,
                                   const PrimeField& f, u64 seed,
                                   const BudgetOptions& budget, const RankOptions& opts) {
    const u64 p = f.p;
    for (i64 n : spec.exponents) {
        if (n > 1 && (p - 1) % static_cast<u64>(n) != 0)
            throw std::invalid_argument(
                "character_decomposition_check requires n_v | p-1 for every vertex");
    }
    // generator of F_p^*: test candidates against the prime factors of p-1
    std::vector<u64> fac;
    u64 m = p - 1;
    for (u64 d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            fac.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) fac.push_back(m);
    auto powm = [&](u64 a, u64 e) {
        u64 r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = r * a % p;
            a = a * a % p;
            e >>= 1;
        }
        return r;
    };
    u64 gen = 0;
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (u64 q : fac) ok = ok && powm(g, (p - 1) / q) != 1;
        if (ok) {
            gen = g;
            break;
        }
    }
    std::vector<std::vector<u32>> roots;
    for (i64 n : spec.exponents) {
        std::vector<u32> r;
        u64 base = powm(gen, (p - 1) / static_cast<u64>(n));  // order exactly n
        u64 cur = 1;
        for (i64 e = 0; e < n; ++e) {
            r.push_back(static_cast<u32>(cur));
            cur = cur * base % p;
        }
        roots.push_back(std::move(r));
    }

    // left side: per-character Betti numbers, summed
    std::vector<i64> digit(spec.exponents.size(), 0);
    std::vector<u32> chi(spec.exponents.size(), 1);
    const u64 nchars = spec.index();
    std::vector<i64> lhs;
    for (u64 a = 0; a < nchars; ++a) {
        for (std::size_t v = 0; v < chi.size(); ++v) chi[v] = roots[v][digit[v]];
        ChainComplex tw = twisted_complex(L, spec, chi, f);
        auto b = chain_betti(tw, FieldTag::Fp(f.p), seed, opts);
        if (lhs.empty()) lhs.assign(b.size(), 0);
        for (std::size_t k = 0; k < b.size(); ++k) lhs[k] += b[k];
        for (std::size_t i = 0; i < digit.size(); ++i) {
            if (++digit[i] < spec.exponents[i]) break;
            digit[i] = 0;
        }
    }

    // right side: the assembled cover complex, reduced directly
    ChainComplex cc = build_cover_complex(L, spec, budget);
    auto rhs = chain_betti(cc, FieldTag::Fp(f.p), seed, opts);
    return lhs == rhs;
}

std::vector<i64> torsion_from_tables(const BettiTable& over_q, const BettiTable& over_p) {
    if (!over_q.field.rational || over_p.field.rational)
        throw std::invalid_argument("torsion_from_tables: need one Q table and one F_p table");
    if (over_q.betti.size() != over_p.betti.size())
        throw std::invalid_argument("torsion_from_tables: degree ranges differ");
    const int top = static_cast<int>(over_q.betti.size()) - 1;
    std::vector<i64> t(top + 1, 0);
    // top homology of a d-complex is torsion-free; solve downward
    for (int i = top; i >= 1; --i) {
        i64 delta = over_p.betti[i] - over_q.betti[i];
        i64 lower = delta - t[i];
        if (lower < 0)
            throw InconsistencyError("negative torsion rank t_p(H_" + std::to_string(i - 1) +
                                     ")");
        t[i - 1] = lower;
    }
    if (!t.empty() && t[0] != over_p.betti[0] - over_q.betti[0])
        throw InconsistencyError("torsion bookkeeping failed at degree 0");
    if (!t.empty() && t[0] != 0)
        throw InconsistencyError("nonzero torsion rank for H_0, which is free");
    return t;
}

TorsionProfile torsion_rank_profile(const SimplicialComplex& L, const std::string& name,
                                    const CoverSpec& spec, u32 p, u64 seed,
                                    const BudgetOptions& budget, const RankOptions& opts) {
    TorsionProfile prof;
    prof.over_q = cover_betti(L, name, spec, FieldTag::Q(), seed, budget, opts);
    prof.over_p = cover_betti(L, name, spec, FieldTag::Fp(p), seed, budget, opts);
    prof.t = torsion_from_tables(prof.over_q, prof.over_p);
    return prof;
}

}  // namespace homgrowth
