#include "lethargy/chain.hpp"
#include "lethargy/cli.hpp"
#include "lethargy/constructor.hpp"
#include "lethargy/errors.hpp"
#include "lethargy/seqtools.hpp"
#include "lethargy/verify.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

namespace py = pybind11;
using namespace lethargy;

namespace {

Vector to_vector(const std::map<Index, double>& entries) {
  Vector v;
  for (const auto& [i, x] : entries) v.set(i, x);
  return v;
}

std::map<Index, double> from_vector(const Vector& v) { return {v.begin(), v.end()}; }

py::dict report_dict(const LethargyReport& report) {
  py::list rows;
  for (const ReportRow& r : report.rows) {
    py::dict row;
    row["n"] = r.n;
    row["e"] = r.e;
    row["rho"] = r.rho;
    row["lower"] = r.lower;
    row["upper"] = r.upper;
    row["upper_alt"] = r.upper_alt;
    row["checkpoint"] = r.checkpoint;
    row["checkpoint_value"] = r.checkpoint_value;
    row["pass"] = r.pass;
    rows.append(row);
  }
  py::dict out;
  out["mode"] = to_string(report.mode);
  out["status"] = to_string(report.status());
  out["ok"] = report.ok();
  out["failures"] = report.failures();
  out["n_o"] = report.n_o;
  out["depth"] = report.depth;
  out["tol"] = report.tol;
  out["rows"] = rows;
  out["notes"] = report.notes;
  return out;
}

py::dict trace_dict(const ConstructionTrace& trace) {
  py::list levels;
  for (const LevelRecord& rec : trace.levels) {
    py::dict level;
    level["level"] = rec.level;
    level["target"] = rec.target;
    level["t"] = rec.t;
    level["q_norm"] = rec.q_norm;
    level["q_bound"] = rec.q_bound;
    level["achieved"] = rec.achieved;
    levels.append(level);
  }
  py::dict out;
  out["element"] = from_vector(trace.element);
  out["depth"] = trace.depth;
  out["tail_bound"] = trace.tail_bound;
  out["levels"] = levels;
  out["notes"] = trace.notes;
  return out;
}

struct Sandwich {
  SandwichResult result;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Elements with prescribed distances to nested subspaces";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidSpec>(m, "InvalidSpec", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<InfeasibleTarget>(m, "InfeasibleTarget", base.ptr());
  py::register_exception<Unsupported>(m, "Unsupported", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  py::class_<FNormSpec>(m, "FNorm")
      .def_static("lp", &FNormSpec::lp, py::arg("p"))
      .def_static("s_convex", &FNormSpec::s_convex, py::arg("p"), py::arg("s"))
      .def_static(
          "composite",
          [](const std::string& ratio, const std::string& scale) {
            return FNormSpec::composite(parse_rational(ratio), parse_rational(scale));
          },
          py::arg("ratio") = "1/2", py::arg("scale") = "1")
      .def_static(
          "seminorms",
          [](const std::vector<std::tuple<Index, Index, Index, double>>& family) {
            std::vector<Seminorm> out;
            for (const auto& [first, last, stride, degree] : family) out.push_back({{first, last, stride}, degree});
            return FNormSpec::seminorms(std::move(out));
          },
          py::arg("family"), "Each entry is (first, last, stride, degree); last = 0 means unbounded.")
      .def("__call__", [](const FNormSpec& s, const std::map<Index, double>& x) { return s.eval(to_vector(x)); })
      .def_property_readonly("bounded", &FNormSpec::bounded)
      .def("__repr__", &FNormSpec::describe);

  py::class_<ChainSpec>(m, "Chain")
      .def_static("linear", &ChainSpec::linear, py::arg("slope") = 1, py::arg("offset") = 0)
      .def_static("explicit_cuts", &ChainSpec::explicit_cuts, py::arg("cuts"))
      .def("cut", &ChainSpec::cut)
      .def("__repr__", &ChainSpec::describe);

  py::class_<SequenceSpec>(m, "Sequence")
      .def_static("harmonic", &SequenceSpec::harmonic)
      .def_static(
          "geometric",
          [](const std::string& ratio, const std::string& scale) {
            return SequenceSpec::geometric(parse_rational(ratio), parse_rational(scale));
          },
          py::arg("ratio"), py::arg("scale") = "1")
      .def_static("power", &SequenceSpec::power, py::arg("alpha"))
      .def_static(
          "explicit",
          [](const std::vector<std::string>& values, const std::string& tail_ratio) {
            std::vector<Rational> prefix;
            for (const std::string& v : values) prefix.push_back(parse_rational(v));
            return SequenceSpec::explicit_list(std::move(prefix), parse_rational(tail_ratio));
          },
          py::arg("values"), py::arg("tail_ratio"))
      .def("sqrt", &SequenceSpec::sqrt)
      .def("perturbed", &SequenceSpec::perturbed, py::arg("k"))
      .def("__call__", &SequenceSpec::value, py::arg("n"))
      .def("exact", [](const SequenceSpec& s, std::size_t n) { return to_string(s.exact(n)); }, py::arg("n"))
      .def("__repr__", &SequenceSpec::describe);

  m.def(
      "distance",
      [](const FNormSpec& spec, const ChainSpec& chain, std::size_t n, const std::map<Index, double>& x) {
        return distance(spec, chain, n, to_vector(x));
      },
      py::arg("space"), py::arg("chain"), py::arg("n"), py::arg("x"));

  m.def(
      "dnv",
      [](const FNormSpec& spec, const ChainSpec& chain, std::size_t n) {
        return dnv_estimate(spec, chain, n).value.to_double();
      },
      py::arg("space"), py::arg("chain"), py::arg("n"));

  m.def(
      "rescale",
      [](const SequenceSpec& seq, unsigned factor, std::size_t checkpoints) {
        const RescaleResult r = rescale(seq, factor, checkpoints);
        std::vector<std::string> exact;
        for (const Rational& f : r.f_exact) exact.push_back(to_string(f));
        py::dict out;
        out["f"] = r.f;
        out["f_exact"] = exact;
        out["n"] = r.n;
        out["rapid"] = r.rapid;
        return out;
      },
      py::arg("sequence"), py::arg("factor") = 3, py::arg("checkpoints") = 12);

  m.def(
      "construct_exact",
      [](const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq, std::size_t depth) {
        const ConstructionTrace trace = construct_exact(spec, chain, seq, depth);
        py::dict out = trace_dict(trace);
        out["report"] = report_dict(verify_exact(trace, spec, chain, seq));
        return out;
      },
      py::arg("space"), py::arg("chain"), py::arg("sequence"), py::arg("depth"),
      "Builds the exact-distance element and verifies it.");

  m.def(
      "construct_sandwich",
      [](const FNormSpec& spec, const ChainSpec& chain, const SequenceSpec& seq, std::size_t depth, unsigned factor) {
        const SandwichResult s = construct_sandwich(spec, chain, seq, depth, factor);
        py::dict out = trace_dict(s.trace);
        out["n_o"] = s.n_o;
        out["report"] = report_dict(verify_sandwich(s, spec, chain, seq));
        return out;
      },
      py::arg("space"), py::arg("chain"), py::arg("sequence"), py::arg("depth"), py::arg("factor") = 3,
      "Builds an element with e_n/c <= dist(x, V_n) <= c e_n and verifies it.");

  m.def(
      "run_config",
      [](const std::string& text) {
        const RunResult r = execute(parse_config(text));
        return py::make_tuple(r.exit_code, r.status, r.report_body);
      },
      py::arg("config_json"), "Runs a configuration document; returns (exit_code, status, report body JSON).");

  m.attr("SCHEMA_VERSION") = kSchemaVersion;
}
