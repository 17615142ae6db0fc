#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "knapcrack/analysis.hpp"
#include "knapcrack/disagg.hpp"
#include "knapcrack/error.hpp"
#include "knapcrack/formulations.hpp"
#include "knapcrack/io.hpp"
#include "knapcrack/pipeline.hpp"

namespace py = pybind11;
using namespace knapcrack;

namespace {

// Python ints cross the boundary as decimal strings so size is unbounded.
Integer to_integer(const py::handle& h) {
  if (!py::isinstance<py::int_>(h)) throw py::type_error("expected int");
  return Integer(py::str(h).cast<std::string>());
}

py::int_ to_py(const Integer& z) {
  return py::reinterpret_steal<py::int_>(PyLong_FromString(z.get_str().c_str(), nullptr, 10));
}

IntVector to_vector(const py::iterable& it) {
  IntVector v;
  for (const auto& h : it) v.push_back(to_integer(h));
  return v;
}

py::list to_py(const IntVector& v) {
  py::list out;
  for (const auto& z : v) out.append(to_py(z));
  return out;
}

py::list to_py(const IntMatrix& m) {
  py::list out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.append(to_py(m.row(r)));
  return out;
}

LdeSystem make_system(const py::iterable& rows, const py::iterable& b) {
  std::vector<IntVector> r;
  for (const auto& row : rows) r.push_back(to_vector(py::reinterpret_borrow<py::iterable>(row)));
  return LdeSystem(IntMatrix::from_rows(r), to_vector(b));
}

Rational to_rational(const std::string& text) { return parse_rational(text); }

py::dict outcome_dict(const AttackOutcome& o) {
  py::dict d;
  d["status"] = std::string(to_string(o.verdict.status));
  d["algorithm"] = o.verdict.algorithm;
  d["x"] = to_py(o.verdict.x);
  d["solved"] = o.verdict.solved();
  d["complemented"] = o.verdict.complemented;
  d["dag_used"] = o.dag_used;
  d["t_found"] = o.t_found ? py::object(to_py(*o.t_found)) : py::none();
  d["modulus_found"] = o.modulus_found ? py::object(to_py(*o.modulus_found)) : py::none();
  d["exhausted"] = o.exhausted;
  d["attempts"] = o.attempts;
  d["wall_ms"] = o.wall_ms;
  return d;
}

py::dict attack_py(const LdeSystem& sys, const std::string& algo, bool dag, const py::object& modulus,
                   const py::object& t_max, bool jump_points, std::size_t row, const std::string& alpha,
                   const py::object& big_n) {
  SearchConfig cfg;
  cfg.algo = parse_algorithm(algo);
  cfg.use_dag = dag;
  cfg.dag_mode = jump_points ? DagMode::JumpPoints : DagMode::Sequential;
  cfg.dag_row = row;
  cfg.alpha = to_rational(alpha);
  if (!big_n.is_none()) cfg.big_n = to_integer(big_n);
  cfg.modulus = modulus.is_none() ? default_modulus(sys.n()) : to_integer(modulus);
  cfg.t_max = t_max.is_none() ? cfg.modulus - 1 : to_integer(t_max);
  AttackOutcome out;
  {
    py::gil_scoped_release release;
    out = dag ? attack_with_dag(sys, cfg) : attack(sys, cfg);
  }
  return outcome_dict(out);
}

py::dict features_dict(const KernelFeatures& f) {
  py::dict d;
  d["dim"] = f.dim;
  d["volume"] = f.volume;
  d["semi_axes"] = f.semi_axes;
  d["mve_volume"] = f.mve_volume;
  d["lambda_tilde"] = f.lambda_tilde;
  d["d"] = f.d;
  d["d_tilde"] = f.d_tilde;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lattice attacks on subset-sum and binary linear Diophantine systems";

  py::register_exception<Error>(m, "KnapcrackError", PyExc_ValueError);

  py::class_<LdeSystem>(m, "System")
      .def(py::init(&make_system), py::arg("A"), py::arg("b"))
      .def_property_readonly("A", [](const LdeSystem& s) { return to_py(s.A()); })
      .def_property_readonly("b", [](const LdeSystem& s) { return to_py(s.b()); })
      .def_property_readonly("m", &LdeSystem::m)
      .def_property_readonly("n", &LdeSystem::n)
      .def("satisfied_by", [](const LdeSystem& s, const py::iterable& x) { return s.satisfied_by(to_vector(x)); })
      .def("to_text", [](const LdeSystem& s) { return format_system(s); })
      .def("__eq__", [](const LdeSystem& a, const LdeSystem& b) { return a == b; })
      .def("__repr__", [](const LdeSystem& s) {
        return "System(m=" + std::to_string(s.m()) + ", n=" + std::to_string(s.n()) + ")";
      });

  m.def("parse_system", &parse_system, py::arg("text"));
  m.def("read_system", &read_system, py::arg("path"));

  m.def("attack", &attack_py, py::arg("system"), py::arg("algo") = "reduce", py::arg("dag") = false,
        py::arg("modulus") = py::none(), py::arg("t_max") = py::none(), py::arg("jump_points") = false,
        py::arg("row") = 0, py::arg("alpha") = "99/100", py::arg("big_n") = py::none());

  m.def("attack_scenario",
        [](const LdeSystem& sys, const std::vector<std::tuple<std::size_t, py::int_, py::int_>>& steps,
           const std::string& algo, const std::string& alpha) {
          std::vector<ScenarioStep> s;
          for (const auto& [row, t, mod] : steps) s.push_back({row, DisaggParams(to_integer(t), to_integer(mod))});
          SearchConfig cfg;
          cfg.algo = parse_algorithm(algo);
          cfg.alpha = to_rational(alpha);
          return outcome_dict(attack_scenario(sys, s, cfg).outcome);
        },
        py::arg("system"), py::arg("steps"), py::arg("algo") = "reduce", py::arg("alpha") = "99/100");

  m.def("brute_force", [](const LdeSystem& sys) {
    py::list out;
    for (const auto& x : brute_force_solve(sys)) out.append(to_py(x));
    return out;
  });

  m.def("generate", [](std::size_t m_, std::size_t n, std::uint64_t seed) {
    const GeneratedInstance g = generate_system(m_, n, seed);
    py::dict d;
    d["system"] = g.system;
    d["planted"] = to_py(g.planted);
    d["densities"] = g.densities;
    d["seed"] = g.seed;
    return d;
  }, py::arg("m"), py::arg("n"), py::arg("seed"));

  m.def("density", [](const py::iterable& a, const py::int_& b) {
    return density(SubsetSumInstance(to_vector(a), to_integer(b)));
  }, py::arg("a"), py::arg("b"));

  m.def("kernel_basis", [](const LdeSystem& sys, const std::string& alpha) {
    return to_py(decompose(sys, default_big_n(), to_rational(alpha)).D);
  }, py::arg("system"), py::arg("alpha") = "99/100");

  m.def("modular_transform", [](const py::iterable& a, const py::int_& b, const py::int_& t, const py::int_& mod) {
    const IntVector av = to_vector(a);
    const Integer bv = to_integer(b);
    const DisaggParams p(to_integer(t), to_integer(mod));
    const ModularImage img = modular_transform(av, bv, p);
    py::dict d;
    d["c"] = to_py(img.c);
    d["d"] = to_py(img.d);
    d["v"] = to_py(img.v);
    d["w"] = to_py(img.w);
    d["u_k"] = to_py(img.u_k);
    d["n_k"] = img.n_k;
    d["ideal"] = is_ideal(av, bv, p);
    return d;
  }, py::arg("a"), py::arg("b"), py::arg("t"), py::arg("modulus"));

  m.def("jump_points", [](const py::iterable& a, const py::int_& b, std::optional<std::size_t> limit) {
    const SubsetSumInstance inst(to_vector(a), to_integer(b));
    py::list out;
    for (const auto& jp : enumerate_jump_points(inst, limit)) {
      std::vector<std::string> sources;
      for (const auto& s : jp.sources) sources.push_back(to_string(s));
      out.append(py::make_tuple(to_py(Integer(jp.value.get_num())), to_py(Integer(jp.value.get_den())), sources));
    }
    return out;
  }, py::arg("a"), py::arg("b"), py::arg("limit") = py::none());

  m.def("kernel_features", [](const py::iterable& rows) {
    std::vector<IntVector> r;
    for (const auto& row : rows) r.push_back(to_vector(py::reinterpret_borrow<py::iterable>(row)));
    return features_dict(kernel_features(IntMatrix::from_rows(r)));
  }, py::arg("D"));

  m.def("gamma", [](std::size_t s) { return knapcrack::gamma(s); }, py::arg("s"));
}
