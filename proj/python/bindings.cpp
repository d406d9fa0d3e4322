#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "homgrowth/chain.hpp"
#include "homgrowth/cover.hpp"
#include "homgrowth/davis.hpp"
#include "homgrowth/errors.hpp"
#include "homgrowth/nerve.hpp"
#include "homgrowth/simplicial.hpp"
#include "homgrowth/smith.hpp"

namespace py = pybind11;
using namespace homgrowth;

namespace {

FieldTag field_of(const std::string& s) { return FieldTag::parse(s); }

CoverSpec spec_of(const SimplicialComplex& L, const py::object& n) {
    if (py::isinstance<py::int_>(n))
        return CoverSpec::uniform(L, n.cast<std::int64_t>());
    std::map<std::string, std::int64_t> m = n.cast<std::map<std::string, std::int64_t>>();
    return CoverSpec::from_map(L, m);
}

py::dict table_dict(const BettiTable& t) {
    py::dict d;
    d["complex"] = t.complex_name;
    d["index"] = t.index;
    d["field"] = t.field.str();
    d["betti"] = t.betti;
    py::list norm;
    for (const auto& f : t.normalized) norm.append(f.str());
    d["normalized"] = norm;
    d["targets"] = t.targets;
    d["seed"] = t.seed;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact homology of finite Salvetti covers and Davis complexes";

    py::register_exception<BudgetError>(m, "BudgetError");
    py::register_exception<InconsistencyError>(m, "InconsistencyError");

    py::class_<RankOptions>(m, "RankOptions")
        .def(py::init<>())
        .def_readwrite("threads", &RankOptions::threads);

    py::class_<SimplicialComplex>(m, "Complex")
        .def_readonly("vertices", &SimplicialComplex::vertices)
        .def_readonly("facets", &SimplicialComplex::facets)
        .def("dim", &SimplicialComplex::dim)
        .def("f_vector", &SimplicialComplex::f_vector)
        .def("faces",
             [](const SimplicialComplex& c, int k) { return c.faces(k); })
        .def("__repr__", [](const SimplicialComplex& c) {
            std::ostringstream s;
            s << "Complex(" << c.vertices.size() << " vertices, "
              << c.facets.size() << " facets, dim " << c.dim() << ")";
            return s.str();
        });

    m.def("builtin", &builtin_complex, py::arg("name"));
    m.def("builtin_catalog", &builtin_catalog);
    m.def("build", &build_complex, py::arg("facets"),
          "complex from facet lists of vertex names");
    m.def("loads", [](const std::string& text) {
        std::istringstream in(text);
        return load_complex(in);
    });
    m.def("dumps", [](const SimplicialComplex& c) {
        std::ostringstream out;
        save_complex(c, out);
        return out.str();
    });

    m.def("is_flag", &is_flag);
    m.def(
        "link",
        [](const SimplicialComplex& c, const std::vector<std::string>& face) {
            return homgrowth::link(c, face);
        },
        py::arg("complex"), py::arg("face"));
    m.def("star", &star, py::arg("complex"), py::arg("vertex"));
    m.def("full_subcomplex", &full_subcomplex, py::arg("complex"), py::arg("keep"));
    m.def("octahedralize", &octahedralize);
    m.def("subdivide_edge", &subdivide_edge, py::arg("complex"), py::arg("u"),
          py::arg("v"));
    m.def("barycentric_subdivision", &barycentric_subdivision);
    m.def("join", &join_complexes, py::arg("a"), py::arg("b"));

    m.def(
        "reduced_betti",
        [](const SimplicialComplex& c, const std::string& field, std::uint64_t seed) {
            return reduced_betti(c, field_of(field), seed);
        },
        py::arg("complex"), py::arg("field") = "q", py::arg("seed") = 1);

    m.def(
        "cover_betti",
        [](const SimplicialComplex& L, const std::string& name, const py::object& n,
           const std::string& field, std::uint64_t seed, std::int64_t budget) {
            return table_dict(cover_betti(L, name, spec_of(L, n), field_of(field), seed,
                                          BudgetOptions{budget}));
        },
        py::arg("complex"), py::arg("name"), py::arg("n"), py::arg("field") = "q",
        py::arg("seed") = 1,
        py::arg("budget") = BudgetOptions{}.max_cells_per_degree);

    m.def(
        "cover_scan",
        [](const SimplicialComplex& L, const std::string& name,
           const std::vector<std::int64_t>& ns, const std::string& field,
           std::uint64_t seed) {
            py::list out;
            for (const auto& t :
                 normalized_betti_scan(L, name, field_of(field), ns, seed))
                out.append(table_dict(t));
            return out;
        },
        py::arg("complex"), py::arg("name"), py::arg("n_list"), py::arg("field") = "q",
        py::arg("seed") = 1);

    m.def(
        "torsion_profile",
        [](const SimplicialComplex& L, const std::string& name, const py::object& n,
           std::uint32_t p, std::uint64_t seed) {
            TorsionProfile tp =
                torsion_rank_profile(L, name, spec_of(L, n), p, seed);
            py::dict d;
            d["over_q"] = table_dict(tp.over_q);
            d["over_p"] = table_dict(tp.over_p);
            d["t"] = tp.t;
            return d;
        },
        py::arg("complex"), py::arg("name"), py::arg("n"), py::arg("p") = 2,
        py::arg("seed") = 1);

    m.def(
        "davis_betti",
        [](const SimplicialComplex& L, const std::string& name,
           const std::string& field, std::uint64_t seed) {
            return table_dict(davis_betti(L, name, field_of(field), seed));
        },
        py::arg("complex"), py::arg("name"), py::arg("field") = "q",
        py::arg("seed") = 1);

    m.def(
        "mv_check",
        [](const SimplicialComplex& L, const std::string& name, const std::string& v,
           const std::string& field, std::uint64_t seed) {
            MvReport r = mv_check(L, name, v, field_of(field), seed);
            py::dict d;
            d["complex"] = r.complex_name;
            d["vertex"] = r.vertex;
            d["field"] = r.field.str();
            d["h_full"] = r.h_full;
            d["h_star"] = r.h_st;
            d["h_rest"] = r.h_rest;
            d["h_link"] = r.h_lk;
            d["alternating_sum_zero"] = r.alternating_sum_zero;
            std::vector<bool> surj(r.surjective.begin(), r.surjective.end());
            d["surjective"] = surj;
            d["all_surjective"] = r.all_surjective;
            return d;
        },
        py::arg("complex"), py::arg("name"), py::arg("vertex"),
        py::arg("field") = "q", py::arg("seed") = 1);

    m.def("embedding_criterion", &embedding_criterion, py::arg("complex"),
          py::arg("seed") = 1, py::arg("opts") = RankOptions{});

    m.def(
        "collapse_report",
        [](const SimplicialComplex& L, const std::string& name, std::int64_t n,
           const std::string& field, std::uint64_t seed) {
            CollapseReport rep = collapse_report(L, name, CoverSpec::uniform(L, n),
                                                 field_of(field), seed);
            py::list rows;
            for (const auto& r : rep.rows) {
                py::dict d;
                d["degree"] = r.degree;
                d["cover_normalized"] = r.cover_normalized.str();
                d["nerve_normalized"] = r.nerve_normalized.str();
                d["e1_offrow_mass"] = r.e1_offrow_mass.str();
                d["e1_row0_kernel"] = r.e1_row0_kernel.str();
                rows.append(d);
            }
            return rows;
        },
        py::arg("complex"), py::arg("name"), py::arg("n"), py::arg("field") = "q",
        py::arg("seed") = 1);

    m.def(
        "smith_normal_form",
        [](std::int64_t rows, std::int64_t cols,
           const std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>>&
               triplets) {
            std::vector<SparseIntMatrix::Entry> es;
            for (const auto& [r, c, v] : triplets) es.push_back({r, c, v});
            return smith_normal_form(
                SparseIntMatrix::from_triplets(rows, cols, std::move(es)));
        },
        py::arg("rows"), py::arg("cols"), py::arg("triplets"),
        "invariant factors d_1 | d_2 | ... of an integer matrix");
}
