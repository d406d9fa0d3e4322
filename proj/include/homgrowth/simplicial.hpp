#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace homgrowth {

// Finite abstract simplicial complex. Vertices are opaque string tokens
// with a fixed lexicographic order; every boundary sign in the project
// derives from this order. Instances are immutable after construction
// (the face cache mutates lazily behind a lock and may be shared between
// copies).
struct SimplicialComplex {
    std::vector<std::string> vertices;              // sorted, unique
    std::vector<std::vector<std::int32_t>> facets;  // sorted index lists; maximal; sorted

    // -1 for the empty complex (only the empty simplex)
    int dim() const;
    // k-faces as sorted index lists, in lexicographic order; cached
    const std::vector<std::vector<std::int32_t>>& faces(int k) const;
    // position of f in faces(k), or -1
    std::int64_t face_index(int k, const std::vector<std::int32_t>& f) const;
    // (f_{-1}=1, f_0, ..., f_dim)
    std::vector<std::int64_t> f_vector() const;
    std::int64_t vertex_index(const std::string& name) const;  // -1 if absent
    bool has_face(const std::vector<std::string>& names) const;
    std::vector<std::string> face_names(const std::vector<std::int32_t>& f) const;

    bool operator==(const SimplicialComplex& o) const {
        return vertices == o.vertices && facets == o.facets;
    }

  private:
    struct FaceCache {
        std::mutex mu;
        std::vector<std::vector<std::vector<std::int32_t>>> by_dim;
        std::vector<char> done;
    };
    mutable std::shared_ptr<FaceCache> cache_ = std::make_shared<FaceCache>();
};

// Build from facet lists given by vertex names. Contained facets are
// dropped; vertex order is lexicographic. Errors: empty facet list,
// duplicate vertex inside a facet, empty/whitespace/'#' tokens.
SimplicialComplex build_complex(const std::vector<std::vector<std::string>>& facets);

// The complex consisting of the empty simplex only.
SimplicialComplex empty_complex();

// Every set of pairwise-adjacent vertices spans a face.
bool is_flag(const SimplicialComplex& c);

// {t : t disjoint from s, t union s a face}; s must be a face.
SimplicialComplex link(const SimplicialComplex& c, const std::vector<std::string>& s);

// Faces contained in a face containing v.
SimplicialComplex star(const SimplicialComplex& c, const std::string& v);

// All faces with vertices inside keep.
SimplicialComplex full_subcomplex(const SimplicialComplex& c,
                                  const std::vector<std::string>& keep);

// Vertices V x {+,-}; signed tuples span a face iff the underlying
// vertices are distinct and span a face of c. Tokens "v+" / "v-".
SimplicialComplex octahedralize(const SimplicialComplex& c);

// Replace edge {u,v} by a new vertex "u|v" joined to u, v and to the link
// of the edge. Homeomorphic to c.
SimplicialComplex subdivide_edge(const SimplicialComplex& c, const std::string& u,
                                 const std::string& v);

// Order complex of the face poset; always flag. Vertex tokens are the
// comma-joined vertex names of the corresponding face.
SimplicialComplex barycentric_subdivision(const SimplicialComplex& c);

// Faces = unions of a face of a and a face of b; b's colliding vertex
// names get "'" appended.
SimplicialComplex join_complexes(const SimplicialComplex& a, const SimplicialComplex& b);

// Injective relabeling; omitted names stay fixed.
SimplicialComplex rename_vertices(const SimplicialComplex& c,
                                  const std::map<std::string, std::string>& names);

// Named catalog: point, simplex_<d>, sphere_boundary_<d>, cycle_<k> (k>=4),
// octahedron, rp2_6, rp2_flag, moore(<p>) (alias moore_<p>).
SimplicialComplex builtin_complex(const std::string& name);

// (name pattern, one-line description) pairs for the CLI listing.
std::vector<std::pair<std::string, std::string>> builtin_catalog();

// One maximal simplex per line, whitespace-separated tokens, '#' comments.
void save_complex(const SimplicialComplex& c, std::ostream& out);
SimplicialComplex load_complex(std::istream& in);

}  // namespace homgrowth
