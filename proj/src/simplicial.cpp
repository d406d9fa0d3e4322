#include "homgrowth/simplicial.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "homgrowth/errors.hpp"

namespace homgrowth {

namespace {

using i32 = std::int32_t;
using i64 = std::int64_t;

void check_token(const std::string& t) {
    if (t.empty()) throw std::invalid_argument("empty vertex token");
    if (t[0] == '#') throw std::invalid_argument("vertex token may not start with '#': " + t);
    for (char ch : t)
        if (std::isspace(static_cast<unsigned char>(ch)))
            throw std::invalid_argument("vertex token may not contain whitespace: " + t);
}

// k-subsets of the sorted list `from`, appended to `out`
void push_subsets(const std::vector<i32>& from, int k, std::vector<i32>& cur,
                  std::size_t start, std::vector<std::vector<i32>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= from.size(); ++i) {
        cur.push_back(from[i]);
        push_subsets(from, k, cur, i + 1, out);
        cur.pop_back();
    }
}

SimplicialComplex from_index_facets(const std::vector<std::string>& names,
                                    std::vector<std::vector<i32>> fac) {
    // rebuild through name lists so unused vertices drop out and order is
    // re-derived lexicographically
    std::vector<std::vector<std::string>> named;
    named.reserve(fac.size());
    for (auto& f : fac) {
        std::vector<std::string> row;
        row.reserve(f.size());
        for (i32 v : f) row.push_back(names[v]);
        named.push_back(std::move(row));
    }
    if (named.empty()) return empty_complex();
    return build_complex(named);
}

}  // namespace

int SimplicialComplex::dim() const {
    int d = -1;
    for (const auto& f : facets) d = std::max(d, static_cast<int>(f.size()) - 1);
    return d;
}

const std::vector<std::vector<i32>>& SimplicialComplex::faces(int k) const {
    if (k < 0) throw std::invalid_argument("faces: dimension must be >= 0");
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (static_cast<std::size_t>(k) >= cache_->by_dim.size()) {
        cache_->by_dim.resize(k + 1);
        cache_->done.resize(k + 1, 0);
    }
    if (!cache_->done[k]) {
        std::vector<std::vector<i32>> out;
        std::vector<i32> cur;
        for (const auto& f : facets)
            if (static_cast<int>(f.size()) >= k + 1) push_subsets(f, k + 1, cur, 0, out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        cache_->by_dim[k] = std::move(out);
        cache_->done[k] = 1;
    }
    return cache_->by_dim[k];
}

i64 SimplicialComplex::face_index(int k, const std::vector<i32>& f) const {
    const auto& fs = faces(k);
    auto it = std::lower_bound(fs.begin(), fs.end(), f);
    if (it == fs.end() || *it != f) return -1;
    return it - fs.begin();
}

std::vector<i64> SimplicialComplex::f_vector() const {
    std::vector<i64> fv{1};
    for (int k = 0; k <= dim(); ++k) fv.push_back(static_cast<i64>(faces(k).size()));
    return fv;
}

i64 SimplicialComplex::vertex_index(const std::string& name) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), name);
    if (it == vertices.end() || *it != name) return -1;
    return it - vertices.begin();
}

bool SimplicialComplex::has_face(const std::vector<std::string>& names) const {
    std::vector<i32> f;
    for (const auto& n : names) {
        i64 i = vertex_index(n);
        if (i < 0) return false;
        f.push_back(static_cast<i32>(i));
    }
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end()) return false;
    if (f.empty()) return true;
    return face_index(static_cast<int>(f.size()) - 1, f) >= 0;
}

std::vector<std::string> SimplicialComplex::face_names(const std::vector<i32>& f) const {
    std::vector<std::string> out;
    out.reserve(f.size());
    for (i32 v : f) out.push_back(vertices[v]);
    return out;
}

SimplicialComplex build_complex(const std::vector<std::vector<std::string>>& facets) {
    if (facets.empty()) throw std::invalid_argument("build_complex: empty facet list");
    std::set<std::string> vset;
    for (const auto& f : facets) {
        if (f.empty()) throw std::invalid_argument("build_complex: empty facet");
        std::set<std::string> inside;
        for (const auto& t : f) {
            check_token(t);
            if (!inside.insert(t).second)
                throw std::invalid_argument("build_complex: duplicate vertex '" + t +
                                            "' inside a facet");
        }
        vset.insert(inside.begin(), inside.end());
    }
    SimplicialComplex c;
    c.vertices.assign(vset.begin(), vset.end());
    std::vector<std::vector<i32>> idx_facets;
    for (const auto& f : facets) {
        std::vector<i32> row;
        for (const auto& t : f)
            row.push_back(static_cast<i32>(
                std::lower_bound(c.vertices.begin(), c.vertices.end(), t) - c.vertices.begin()));
        std::sort(row.begin(), row.end());
        idx_facets.push_back(std::move(row));
    }
    std::sort(idx_facets.begin(), idx_facets.end());
    idx_facets.erase(std::unique(idx_facets.begin(), idx_facets.end()), idx_facets.end());
    // drop contained facets
    for (const auto& f : idx_facets) {
        bool contained = false;
        for (const auto& g : idx_facets) {
            if (&f == &g || g.size() <= f.size()) continue;
            if (std::includes(g.begin(), g.end(), f.begin(), f.end())) {
                contained = true;
                break;
            }
        }
        if (!contained) c.facets.push_back(f);
    }
    return c;
}

SimplicialComplex empty_complex() { return SimplicialComplex{}; }

bool is_flag(const SimplicialComplex& c) {
    const int n = static_cast<int>(c.vertices.size());
    if (n == 0) return true;
    const int words = (n + 63) / 64;
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
    for (const auto& e : c.faces(1)) {
        adj[e[0] * words + (e[1] >> 6)] |= 1ull << (e[1] & 63);
        adj[e[1] * words + (e[0] >> 6)] |= 1ull << (e[0] & 63);
    }
    // If every one-vertex extension of a face by a mutually adjacent higher
    // vertex is again a face, induction gives that every clique is a face.
    for (int k = 1; k <= c.dim() + 1; ++k) {
        const auto& fs = c.faces(k);
        if (fs.empty()) break;
        std::vector<std::uint64_t> common(words);
        for (const auto& f : fs) {
            for (int w = 0; w < words; ++w) common[w] = ~0ull;
            for (i32 v : f)
                for (int w = 0; w < words; ++w) common[w] &= adj[v * words + w];
            std::vector<i32> ext(f);
            ext.push_back(0);
            for (i32 v = f.back() + 1; v < n; ++v) {
                if (!(common[v >> 6] & (1ull << (v & 63)))) continue;
                ext.back() = v;
                if (c.face_index(k + 1, ext) < 0) return false;
            }
        }
    }
    return true;
}

SimplicialComplex link(const SimplicialComplex& c, const std::vector<std::string>& s) {
    std::vector<i32> sf;
    for (const auto& name : s) {
        i64 i = c.vertex_index(name);
        if (i < 0) throw std::invalid_argument("link: unknown vertex " + name);
        sf.push_back(static_cast<i32>(i));
    }
    std::sort(sf.begin(), sf.end());
    if (sf.empty()) return c;
    if (c.face_index(static_cast<int>(sf.size()) - 1, sf) < 0)
        throw std::invalid_argument("link: argument is not a face");
    std::vector<std::vector<i32>> fac;
    for (const auto& f : c.facets) {
        if (!std::includes(f.begin(), f.end(), sf.begin(), sf.end())) continue;
        std::vector<i32> rest;
        std::set_difference(f.begin(), f.end(), sf.begin(), sf.end(), std::back_inserter(rest));
        if (!rest.empty()) fac.push_back(std::move(rest));
    }
    return from_index_facets(c.vertices, std::move(fac));
}

SimplicialComplex star(const SimplicialComplex& c, const std::string& v) {
    i64 vi = c.vertex_index(v);
    if (vi < 0) throw std::invalid_argument("star: unknown vertex " + v);
    std::vector<std::vector<i32>> fac;
    for (const auto& f : c.facets)
        if (std::binary_search(f.begin(), f.end(), static_cast<i32>(vi))) fac.push_back(f);
    return from_index_facets(c.vertices, std::move(fac));
}

SimplicialComplex full_subcomplex(const SimplicialComplex& c,
                                  const std::vector<std::string>& keep) {
    std::vector<i32> ks;
    for (const auto& name : keep) {
        i64 i = c.vertex_index(name);
        if (i < 0) throw std::invalid_argument("full_subcomplex: unknown vertex " + name);
        ks.push_back(static_cast<i32>(i));
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    std::vector<std::vector<i32>> fac;
    for (const auto& f : c.facets) {
        std::vector<i32> inter;
        std::set_intersection(f.begin(), f.end(), ks.begin(), ks.end(),
                              std::back_inserter(inter));
        if (!inter.empty()) fac.push_back(std::move(inter));
    }
    return from_index_facets(c.vertices, std::move(fac));
}

SimplicialComplex octahedralize(const SimplicialComplex& c) {
    if (c.facets.empty()) return empty_complex();
    std::vector<std::vector<std::string>> fac;
    for (const auto& f : c.facets) {
        const std::size_t k = f.size();
        for (std::uint64_t signs = 0; signs < (1ull << k); ++signs) {
            std::vector<std::string> row;
            row.reserve(k);
            for (std::size_t j = 0; j < k; ++j)
                row.push_back(c.vertices[f[j]] + ((signs >> j) & 1 ? "-" : "+"));
            fac.push_back(std::move(row));
        }
    }
    return build_complex(fac);
}

SimplicialComplex subdivide_edge(const SimplicialComplex& c, const std::string& u,
                                 const std::string& v) {
    if (!c.has_face({u, v}) || u == v)
        throw std::invalid_argument("subdivide_edge: {" + u + "," + v + "} is not an edge");
    std::string w = u + "|" + v;
    while (c.vertex_index(w) >= 0) w += "'";
    const i32 ui = static_cast<i32>(c.vertex_index(u));
    const i32 vi = static_cast<i32>(c.vertex_index(v));
    std::vector<std::vector<std::string>> fac;
    for (const auto& f : c.facets) {
        bool has_u = std::binary_search(f.begin(), f.end(), ui);
        bool has_v = std::binary_search(f.begin(), f.end(), vi);
        if (has_u && has_v) {
            for (i32 drop : {ui, vi}) {
                std::vector<std::string> row{w};
                for (i32 x : f)
                    if (x != drop) row.push_back(c.vertices[x]);
                fac.push_back(std::move(row));
            }
        } else {
            fac.push_back(c.face_names(f));
        }
    }
    return build_complex(fac);
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& c) {
    if (c.facets.empty()) return empty_complex();
    // token per face, deterministic collision handling
    std::map<std::vector<i32>, std::string> token;
    std::set<std::string> used;
    for (int k = 0; k <= c.dim(); ++k) {
        for (const auto& f : c.faces(k)) {
            std::string t;
            for (std::size_t j = 0; j < f.size(); ++j) {
                if (j) t += ",";
                t += c.vertices[f[j]];
            }
            while (!used.insert(t).second) t += "'";
            token[f] = t;
        }
    }
    std::vector<std::vector<std::string>> fac;
    for (const auto& f : c.facets) {
        // maximal chains below f = prefix chains of permutations of f
        std::vector<i32> perm(f);
        std::sort(perm.begin(), perm.end());
        do {
            std::vector<std::string> chain;
            std::vector<i32> prefix;
            for (i32 x : perm) {
                prefix.push_back(x);
                std::sort(prefix.begin(), prefix.end());
                chain.push_back(token.at(prefix));
            }
            fac.push_back(std::move(chain));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return build_complex(fac);
}

SimplicialComplex join_complexes(const SimplicialComplex& a, const SimplicialComplex& b) {
    // rename b's colliding vertices
    std::map<std::string, std::string> rename;
    std::set<std::string> taken(a.vertices.begin(), a.vertices.end());
    for (const auto& v : b.vertices) {
        std::string nv = v;
        while (taken.count(nv)) nv += "'";
        taken.insert(nv);
        if (nv != v) rename[v] = nv;
    }
    auto bname = [&](i32 i) {
        const std::string& v = b.vertices[i];
        auto it = rename.find(v);
        return it == rename.end() ? v : it->second;
    };
    std::vector<std::vector<std::string>> fac;
    const bool a_empty = a.facets.empty(), b_empty = b.facets.empty();
    if (a_empty && b_empty) return empty_complex();
    if (a_empty) {
        for (const auto& g : b.facets) {
            std::vector<std::string> row;
            for (i32 x : g) row.push_back(bname(x));
            fac.push_back(std::move(row));
        }
        return build_complex(fac);
    }
    if (b_empty) return a;
    for (const auto& f : a.facets)
        for (const auto& g : b.facets) {
            std::vector<std::string> row = a.face_names(f);
            for (i32 x : g) row.push_back(bname(x));
            fac.push_back(std::move(row));
        }
    return build_complex(fac);
}

SimplicialComplex rename_vertices(const SimplicialComplex& c,
                                  const std::map<std::string, std::string>& names) {
    std::set<std::string> target;
    std::vector<std::vector<std::string>> fac;
    for (const auto& f : c.facets) {
        std::vector<std::string> row;
        for (i32 x : f) {
            auto it = names.find(c.vertices[x]);
            row.push_back(it == names.end() ? c.vertices[x] : it->second);
        }
        fac.push_back(std::move(row));
    }
    for (const auto& v : c.vertices) {
        auto it = names.find(v);
        if (!target.insert(it == names.end() ? v : it->second).second)
            throw std::invalid_argument("rename_vertices: renaming is not injective");
    }
    if (fac.empty()) return empty_complex();
    return build_complex(fac);
}

namespace {

std::string pad2(i64 x, int width) {
    std::string s = std::to_string(x);
    while (static_cast<int>(s.size()) < width) s = "0" + s;
    return s;
}

SimplicialComplex make_simplex(int d) {
    std::vector<std::string> f;
    for (int i = 0; i <= d; ++i) f.push_back("v" + pad2(i, 2));
    return build_complex({f});
}

SimplicialComplex make_sphere_boundary(int d) {
    std::vector<std::string> all;
    for (int i = 0; i <= d + 1; ++i) all.push_back("v" + pad2(i, 2));
    std::vector<std::vector<std::string>> fac;
    for (int skip = 0; skip <= d + 1; ++skip) {
        std::vector<std::string> f;
        for (int i = 0; i <= d + 1; ++i)
            if (i != skip) f.push_back(all[i]);
        fac.push_back(std::move(f));
    }
    return build_complex(fac);
}

SimplicialComplex make_cycle(i64 k) {
    if (k < 4) throw std::invalid_argument("cycle_k requires k >= 4 (smaller cycles are not flag)");
    int width = std::max<int>(2, static_cast<int>(std::to_string(k - 1).size()));
    std::vector<std::vector<std::string>> fac;
    for (i64 i = 0; i < k; ++i)
        fac.push_back({"c" + pad2(i, width), "c" + pad2((i + 1) % k, width)});
    return build_complex(fac);
}

SimplicialComplex make_rp2_6() {
    // antipodal quotient of the icosahedron; complete 1-skeleton on 6
    // vertices, 10 triangles — the classical minimal RP^2 triangulation
    return build_complex({{"1", "2", "3"},
                          {"1", "3", "4"},
                          {"1", "4", "5"},
                          {"1", "5", "6"},
                          {"1", "2", "6"},
                          {"2", "3", "5"},
                          {"3", "4", "6"},
                          {"2", "4", "5"},
                          {"3", "5", "6"},
                          {"2", "4", "6"}});
}

// empty triangles = 3-cliques of the 1-skeleton that are not faces
std::vector<std::vector<i32>> empty_triangles(const SimplicialComplex& c) {
    const int n = static_cast<int>(c.vertices.size());
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& e : c.faces(1)) adj[e[0]][e[1]] = adj[e[1]][e[0]] = 1;
    std::vector<std::vector<i32>> out;
    for (i32 a = 0; a < n; ++a)
        for (i32 b = a + 1; b < n; ++b) {
            if (!adj[a][b]) continue;
            for (i32 d = b + 1; d < n; ++d) {
                if (!adj[a][d] || !adj[b][d]) continue;
                std::vector<i32> t{a, b, d};
                if (c.face_index(2, t) < 0) out.push_back(std::move(t));
            }
        }
    return out;
}

SimplicialComplex make_rp2_flag() {
    // greedy hitting set: repeatedly subdivide the edge lying on the most
    // empty triangles (ties: lexicographically least edge name pair)
    SimplicialComplex c = make_rp2_6();
    for (int guard = 0; guard < 1000; ++guard) {
        auto bad = empty_triangles(c);
        if (bad.empty()) break;
        std::map<std::pair<std::string, std::string>, i64> hits;
        for (const auto& t : bad)
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    std::vector<i32> e{t[a], t[b]};
                    if (c.face_index(1, e) >= 0)
                        hits[{c.vertices[t[a]], c.vertices[t[b]]}]++;
                }
        std::pair<std::string, std::string> best;
        i64 best_hits = -1;
        for (const auto& [e, h] : hits)
            if (h > best_hits || (h == best_hits && e < best)) {
                best = e;
                best_hits = h;
            }
        c = subdivide_edge(c, best.first, best.second);
    }
    if (!empty_triangles(c).empty())
        throw InconsistencyError("rp2_flag: greedy subdivision failed to reach flagness");
    return c;
}

SimplicialComplex make_moore(i64 p) {
    if (p < 2) throw std::invalid_argument("moore(p) requires p >= 2");
    // mapping cone of the simplicial degree-p map from a 3p-cycle onto a
    // 3-cycle: a triangulated cylinder realizes the map, a cone vertex caps
    // the source circle into a disk
    const i64 n = 3 * p;
    int width = std::max<int>(2, static_cast<int>(std::to_string(n - 1).size()));
    auto a = [&](i64 i) { return "a" + pad2(((i % n) + n) % n, width); };
    auto b = [&](i64 j) { return "b" + std::to_string(((j % 3) + 3) % 3); };
    std::vector<std::vector<std::string>> fac;
    for (i64 i = 0; i < n; ++i) {
        fac.push_back({a(i), a(i + 1), b(i + 1)});
        fac.push_back({a(i), b(i), b(i + 1)});
        fac.push_back({"c", a(i), a(i + 1)});
    }
    return build_complex(fac);
}

}  // namespace

SimplicialComplex builtin_complex(const std::string& name) {
    auto parse_suffix = [&](const std::string& prefix) -> i64 {
        std::string rest = name.substr(prefix.size());
        if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("unknown builtin complex: " + name);
        return std::stoll(rest);
    };
    if (name == "point") return build_complex({{"a"}});
    if (name.rfind("simplex_", 0) == 0) return make_simplex(static_cast<int>(parse_suffix("simplex_")));
    if (name.rfind("sphere_boundary_", 0) == 0)
        return make_sphere_boundary(static_cast<int>(parse_suffix("sphere_boundary_")));
    if (name.rfind("cycle_", 0) == 0) return make_cycle(parse_suffix("cycle_"));
    if (name == "octahedron") return octahedralize(build_complex({{"x", "y", "z"}}));
    if (name == "rp2_6") return make_rp2_6();
    if (name == "rp2_flag") return make_rp2_flag();
    if (name.size() > 7 && name.rfind("moore(", 0) == 0 && name.back() == ')') {
        std::string inner = name.substr(6, name.size() - 7);
        if (inner.empty() || inner.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("unknown builtin complex: " + name);
        return make_moore(std::stoll(inner));
    }
    if (name.rfind("moore_", 0) == 0) return make_moore(parse_suffix("moore_"));
    throw std::invalid_argument("unknown builtin complex: " + name);
}

std::vector<std::pair<std::string, std::string>> builtin_catalog() {
    return {
        {"point", "a single vertex"},
        {"simplex_<d>", "the full d-simplex (contractible)"},
        {"sphere_boundary_<d>", "boundary of the (d+1)-simplex, a d-sphere (not flag for d >= 1)"},
        {"cycle_<k>", "the k-cycle graph, k >= 4 (flag S^1)"},
        {"octahedron", "boundary of the 3-dimensional cross-polytope (flag S^2)"},
        {"rp2_6", "6-vertex triangulation of the projective plane (not flag)"},
        {"rp2_flag", "flag triangulation of the projective plane via greedy edge subdivision"},
        {"moore(<p>)", "mod-p Moore space: S^1 with a disk attached by a degree-p map (alias moore_<p>)"},
    };
}

void save_complex(const SimplicialComplex& c, std::ostream& out) {
    for (const auto& f : c.facets) {
        for (std::size_t j = 0; j < f.size(); ++j) {
            if (j) out << ' ';
            out << c.vertices[f[j]];
        }
        out << '\n';
    }
}

SimplicialComplex load_complex(std::istream& in) {
    std::vector<std::vector<std::string>> fac;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::string> row;
        std::string tok;
        while (ls >> tok) row.push_back(tok);
        if (!row.empty()) fac.push_back(std::move(row));
    }
    return build_complex(fac);
}

}  // namespace homgrowth
