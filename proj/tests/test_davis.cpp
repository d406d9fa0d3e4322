#include <cstdint>
#include <vector>

#include "doctest.h"
#include "homgrowth/davis.hpp"
#include "homgrowth/simplicial.hpp"

using namespace homgrowth;
using i64 = std::int64_t;

TEST_CASE("davis cell counts follow the sign-vector formula") {
    for (const char* name :
         {"point", "simplex_1", "simplex_2", "sphere_boundary_0", "cycle_4",
          "cycle_5", "octahedron", "rp2_6"}) {
        auto L = builtin_complex(name);
        auto d = build_davis(L);  // internal dd=0 and vertex-link audits
        auto fv = L.f_vector();
        const int nv = static_cast<int>(L.vertices.size());
        REQUIRE(d.chain.dims.size() == fv.size());
        for (std::size_t k = 0; k < fv.size(); ++k)
            CHECK(d.chain.dims[k] == fv[k] * (i64{1} << (nv - static_cast<int>(k))));
    }
    CHECK_THROWS_AS(build_davis(builtin_complex("octahedron"), BudgetOptions{10}),
                    BudgetError);
}

TEST_CASE("small davis complexes have the expected homology") {
    auto betti = [](const char* name, const char* f) {
        auto L = builtin_complex(name);
        return davis_betti(L, name, FieldTag::parse(f), 1).betti;
    };
    using V = std::vector<i64>;
    for (const char* f : {"q", "f:2", "f:3"}) {
        // one vertex: the unit interval
        CHECK(betti("point", f) == V{1, 0});
        // two adjacent vertices: the solid square
        CHECK(betti("simplex_1", f) == V{1, 0, 0});
        // two non-adjacent vertices: the boundary of the square, a circle
        CHECK(betti("sphere_boundary_0", f) == V{1, 1});
        // the 4-cycle: the flat torus
        CHECK(betti("cycle_4", f) == V{1, 2, 1});
        // the octahedron: the 3-torus
        CHECK(betti("octahedron", f) == V{1, 3, 3, 1});
        // a filled triangle: the solid cube
        CHECK(betti("simplex_2", f) == V{1, 0, 0, 0});
    }
    // a 5-cycle: an orientable surface; chi = 32 - 80 + 40 = -8, so genus 5
    CHECK(betti("cycle_5", "q") == V{1, 10, 1});
    CHECK(betti("cycle_5", "f:2") == V{1, 10, 1});
}

TEST_CASE("davis betti tables normalize by 2^V") {
    auto L = builtin_complex("cycle_4");
    auto t = davis_betti(L, "cycle_4", FieldTag::Q(), 3);
    CHECK(t.index == 16);
    CHECK(t.normalized[1] == Fraction(2, 16));
    CHECK(t.complex_name == "cycle_4");
    CHECK(t.seed == 3);
}

TEST_CASE("flag two-sphere gives a closed orientable 3-manifold") {
    // chi = 0 and F_2 Poincare duality for the 3-torus
    auto L = builtin_complex("octahedron");
    auto t = davis_betti(L, "octahedron", FieldTag::Fp(2), 1);
    REQUIRE(t.betti.size() == 4);
    i64 chi = t.betti[0] - t.betti[1] + t.betti[2] - t.betti[3];
    CHECK(chi == 0);
    CHECK(t.betti[0] == t.betti[3]);
    CHECK(t.betti[1] == t.betti[2]);
}

TEST_CASE("mayer-vietoris checks pass on the catalog") {
    for (const char* name : {"simplex_2", "sphere_boundary_0", "cycle_4", "cycle_5",
                             "octahedron", "rp2_6"}) {
        auto L = builtin_complex(name);
        for (const char* f : {"q", "f:2"}) {
            for (const auto& v : L.vertices) {
                auto rep = mv_check(L, name, v, FieldTag::parse(f), 1);
                CHECK(rep.alternating_sum_zero);
                CHECK(rep.all_surjective);
                // the three pieces tile the whole complex
                REQUIRE(rep.dims_st.size() == rep.dims_full.size());
                for (std::size_t k = 0; k < rep.dims_full.size(); ++k)
                    CHECK(rep.dims_st[k] + rep.dims_rest[k] - rep.dims_lk[k] ==
                          rep.dims_full[k]);
            }
        }
    }
}

TEST_CASE("mv report records the homology of each piece") {
    auto L = builtin_complex("cycle_4");
    auto v = L.vertices[0];
    auto rep = mv_check(L, "cycle_4", v, FieldTag::Q(), 1);
    CHECK(rep.vertex == v);
    // full: torus
    CHECK(rep.h_full == std::vector<i64>{1, 2, 1});
    // star piece: the link of v is two opposite vertices, the star a path;
    // all pieces carry all 16 sign vertices
    CHECK(rep.dims_full[0] == 16);
    CHECK(rep.dims_st[0] == 16);
    // pieces are disjoint unions of contractibles / circles, so degree-0
    // surjectivity and exactness force the counts to balance
    i64 alt = 0;
    for (std::size_t i = 0; i < rep.h_full.size(); ++i) {
        i64 s = (i % 2) ? -1 : 1;
        alt += s * (rep.h_lk[i] - rep.h_st[i] - rep.h_rest[i] + rep.h_full[i]);
    }
    CHECK(alt == 0);
    CHECK_THROWS_AS(mv_check(L, "cycle_4", "nope", FieldTag::Q(), 1),
                    std::invalid_argument);
}

TEST_CASE("embedding criterion reads top f2 homology") {
    CHECK(embedding_criterion(builtin_complex("simplex_2")));
    CHECK(embedding_criterion(builtin_complex("simplex_3")));
    CHECK(!embedding_criterion(builtin_complex("cycle_4")));
    CHECK(!embedding_criterion(builtin_complex("octahedron")));
    CHECK(!embedding_criterion(builtin_complex("rp2_6")));
    CHECK(!embedding_criterion(builtin_complex("rp2_flag")));
    // path graph: top homology vanishes
    CHECK(embedding_criterion(build_complex({{"a", "b"}, {"b", "c"}})));
    // punctured projective plane: drop one triangle
    auto rp = builtin_complex("rp2_6");
    std::vector<std::vector<std::string>> facets;
    for (std::size_t i = 0; i + 1 < rp.facets.size(); ++i)
        facets.push_back(rp.face_names(rp.facets[i]));
    CHECK(embedding_criterion(build_complex(facets)));
}

TEST_CASE("davis betti euler identity matches cell counts") {
    for (const char* name : {"cycle_4", "cycle_6", "rp2_6"}) {
        auto L = builtin_complex(name);
        auto t = davis_betti(L, name, FieldTag::Fp(2), 1);
        i64 lhs = 0, rhs = 0, s = 1;
        auto fv = L.f_vector();
        const int nv = static_cast<int>(L.vertices.size());
        for (std::size_t k = 0; k < t.betti.size(); ++k, s = -s) {
            lhs += s * t.betti[k];
            rhs += s * (fv[k] << (nv - static_cast<int>(k)));
        }
        CHECK(lhs == rhs);
    }
}
