// Python bindings. Integers cross the boundary as Python ints (exact).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hkl/latcli.hpp"

namespace py = pybind11;
using namespace hkl;

namespace {

Int to_int(const py::handle& h) { return Int(py::str(h).cast<std::string>()); }

py::int_ to_py(const Int& x) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

IntVec vec_in(const py::sequence& s) {
  IntVec v;
  for (auto x : s) v.push_back(to_int(x));
  return v;
}

py::list vec_out(const IntVec& v) {
  py::list l;
  for (auto& x : v) l.append(to_py(x));
  return l;
}

py::list vecs_out(const std::vector<IntVec>& vs) {
  py::list l;
  for (auto& v : vs) l.append(vec_out(v));
  return l;
}

IntMat mat_in(const py::sequence& rows) {
  std::size_t n = py::len(rows);
  IntMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = rows[i].cast<py::sequence>();
    if (py::len(r) != n) throw py::value_error("matrix must be square");
    for (std::size_t j = 0; j < n; ++j) m(i, j) = to_int(r[j]);
  }
  return m;
}

py::list mat_out(const IntMat& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list r;
    for (std::size_t j = 0; j < m.cols(); ++j) r.append(to_py(m(i, j)));
    rows.append(r);
  }
  return rows;
}

py::list isos_out(const std::vector<Isometry>& xs) {
  py::list l;
  for (auto& x : xs) l.append(mat_out(x.matrix()));
  return l;
}

IntLattice lattice(const py::sequence& gram, std::optional<std::vector<std::string>> names) {
  IntMat g = mat_in(gram);
  if (!names) {
    names.emplace();
    for (std::size_t i = 0; i < g.rows(); ++i) names->push_back("e" + std::to_string(i + 1));
  }
  return IntLattice(g, *names);
}

py::dict orbit_out(const OrbitReport& r) {
  py::dict d;
  d["count"] = r.orbit_count;
  d["representatives"] = vecs_out(r.representatives);
  d["group_known"] = r.group_known;
  d["certified"] = r.certified;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact lattice computations for hyperkahler fourfolds of K3^[2]-type";

  static py::exception<Error> exc(m, "HklError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<IntLattice>(m, "Lattice")
      .def(py::init(&lattice), py::arg("gram"), py::arg("names") = std::nullopt)
      .def_property_readonly("rank", &IntLattice::rank)
      .def_property_readonly("gram", [](const IntLattice& L) { return mat_out(L.gram()); })
      .def_property_readonly("names", &IntLattice::basis_names)
      .def_property_readonly("signature", &IntLattice::signature)
      .def_property_readonly("determinant", [](const IntLattice& L) { return to_py(L.determinant()); })
      .def("pair", [](const IntLattice& L, py::sequence x, py::sequence y) { return to_py(L.pair(vec_in(x), vec_in(y))); })
      .def("square", [](const IntLattice& L, py::sequence x) { return to_py(L.square(vec_in(x))); })
      .def("invariant_factors", [](const IntLattice& L) {
        py::list l;
        for (auto& d : smith_decompose(L).invariant_factors) l.append(to_py(d));
        return l;
      })
      .def("is_isometry", [](const IntLattice& L, py::sequence mat) { return is_isometry(L, mat_in(mat)); })
      .def("reflection", [](const IntLattice& L, py::sequence v) { return mat_out(reflection(L, vec_in(v)).matrix()); })
      .def("isometry_group_generators", [](const IntLattice& L) {
        auto G = isometry_group(L);
        py::dict d;
        d["generators"] = isos_out(G.generators);
        d["contains_minus_id"] = G.contains_minus_id;
        d["kind"] = std::string(to_string(G.kind));
        return d;
      })
      .def("generates_isometry_group",
           [](const IntLattice& L, std::vector<py::sequence> gens, bool with_minus_id) {
             std::vector<IntMat> ms;
             for (auto& g : gens) ms.push_back(mat_in(g));
             return group_equal(L, isometry_group(L), generated_by(L, ms, with_minus_id));
           },
           py::arg("generators"), py::arg("with_minus_id") = true)
      .def("stabilizer", [](const IntLattice& L, py::sequence v) { return isos_out(stabilizer(L, vec_in(v))); })
      .def("transporter", [](const IntLattice& L, py::sequence v, py::sequence w) {
        return isos_out(transporter(L, vec_in(v), vec_in(w)));
      });

  py::class_<LatticeConfig>(m, "Config")
      .def_readonly("label", &LatticeConfig::label)
      .def_readonly("lattice", &LatticeConfig::lattice)
      .def("cls", [](const LatticeConfig& c, const std::string& n) { return vec_out(c.cls(n)); })
      .def("matrix", [](const LatticeConfig& c, const std::string& n) { return mat_out(c.matrix(n)); })
      .def("dump", &dump_config)
      .def("chamber_walls", [](const LatticeConfig& c, py::sequence x) {
        auto F = c.family();
        return vecs_out(chamber_of(F.ns, F.profile, F.gluing, vec_in(x)).walls);
      })
      .def("is_birational", [](const LatticeConfig& c, py::sequence mat) { return is_birational(c.family(), mat_in(mat)); })
      .def("bir_generators", [](const LatticeConfig& c) { return isos_out(bir_subgroup(c.family()).generators); })
      .def("chamber_orbits", [](const LatticeConfig& c) { return orbit_out(chamber_orbits(c.family())); })
      .def("polarization_orbits", [](const LatticeConfig& c) { return orbit_out(polarization_orbits(c.family())); })
      .def("heegner_avoidance", [](const LatticeConfig& c, py::sequence h) {
        return heegner_avoidance(c.family(), vec_in(h));
      });

  m.def("builtin_config", &builtin_config);
  m.def("builtin_config_names", &builtin_config_names);
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("source") = "<string>");
  m.def("load_config", &load_config);

  m.def("discriminant_conditions", [](long d) {
    auto v = discriminant_conditions(d);
    py::dict r;
    r["d"] = v.d;
    r["star"] = v.star;
    r["two_star"] = v.two_star;
    r["three_star"] = v.three_star;
    r["witness"] = v.witness ? py::object(py::make_tuple(to_py(v.witness->first), to_py(v.witness->second)))
                             : py::object(py::none());
    return r;
  });

  m.def("builtin_scenarios", &builtin_scenarios);
  m.def(
      "run_scenario",
      [](const std::string& name, const std::string& format) {
        require(format == "json" || format == "text", ErrorCode::input, "format must be 'json' or 'text'");
        ScenarioReport r;
        {
          py::gil_scoped_release release;
          r = run_scenario(name);
        }
        return py::make_tuple(emit_report(r, format == "json" ? ReportFormat::json : ReportFormat::text), r.exit_code());
      },
      py::arg("name"), py::arg("format") = "json");
}
