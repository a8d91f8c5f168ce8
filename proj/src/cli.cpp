#include "lethargy/cli.hpp"

#include "lethargy/constructor.hpp"
#include "lethargy/seqtools.hpp"
#include "lethargy/verify.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

namespace lethargy {
namespace {

using json = nlohmann::json;

// Typed access to one JSON object with its pointer path for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_.empty() ? "/" : path_, message); }
  [[noreturn]] void fail_at(const std::string& key, const std::string& message) const {
    throw ConfigError(path_ + "/" + key, message);
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& item : value_.items()) {
      if (!allowed.count(item.key())) fail_at(item.key(), "unknown key");
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Node child(const std::string& key) const {
    if (!has(key)) fail_at(key, "missing required key");
    return Node(value_.at(key), path_ + "/" + key);
  }

  const json& raw(const std::string& key) const {
    if (!has(key)) fail_at(key, "missing required key");
    return value_.at(key);
  }

  std::string string(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) fail_at(key, "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  double number(const std::string& key) const {
    const json& v = raw(key);
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) fail_at(key, "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::size_t count(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail_at(key, "expected a nonnegative integer");
    return v.get<std::size_t>();
  }
  std::size_t count(const std::string& key, std::size_t fallback) const { return has(key) ? count(key) : fallback; }

  long long integer(const std::string& key, long long fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail_at(key, "expected an integer");
    return v.get<long long>();
  }

  Rational rational(const std::string& key) const { return to_rational_value(raw(key), path_ + "/" + key); }
  Rational rational(const std::string& key, const Rational& fallback) const {
    return has(key) ? rational(key) : fallback;
  }

  std::vector<Rational> rationals(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) fail_at(key, "expected an array");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(to_rational_value(v[i], path_ + "/" + key + "/" + std::to_string(i)));
    }
    return out;
  }

  const std::string& path() const noexcept { return path_; }

  // Strings are parsed exactly ("1/3", "0.3"); JSON numbers map to the
  // simplest fraction that rounds to the same double.
  static Rational to_rational_value(const json& v, const std::string& path) {
    try {
      if (v.is_string()) return parse_rational(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<long long>());
      if (v.is_number()) return simplest_rational(v.get<double>());
    } catch (const InvalidSpec& err) {
      throw ConfigError(path, err.what());
    }
    throw ConfigError(path, "expected a number or a rational string such as \"1/3\"");
  }

 private:
  const json& value_;
  std::string path_;
};

template <typename F>
auto guarded(const Node& node, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidSpec& err) {
    node.fail(err.what());
  }
}

FNormSpec parse_space(const Node& node) {
  const std::string type = node.string("type");
  return guarded(node, [&]() -> FNormSpec {
    if (type == "lp") {
      node.allow_only({"type", "p"});
      return FNormSpec::lp(node.number("p"));
    }
    if (type == "s_convex") {
      node.allow_only({"type", "p", "s"});
      return FNormSpec::s_convex(node.number("p", 2.0), node.number("s"));
    }
    if (type == "composite") {
      node.allow_only({"type", "ratio", "scale"});
      return FNormSpec::composite(node.rational("ratio", Rational(1, 2)), node.rational("scale", Rational(1)));
    }
    if (type == "seminorms") {
      node.allow_only({"type", "family"});
      const json& family = node.raw("family");
      if (!family.is_array() || family.empty()) node.fail_at("family", "expected a nonempty array");
      std::vector<Seminorm> seminorms;
      for (std::size_t i = 0; i < family.size(); ++i) {
        const Node item(family[i], node.path() + "/family/" + std::to_string(i));
        item.allow_only({"first", "last", "stride", "degree"});
        Seminorm s;
        s.selector.first = item.count("first", 1);
        s.selector.last = item.count("last", 0);
        s.selector.stride = item.count("stride", 1);
        s.degree = item.number("degree", 1.0);
        seminorms.push_back(s);
      }
      return FNormSpec::seminorms(std::move(seminorms));
    }
    node.fail_at("type", "unknown space type '" + type + "' (lp, s_convex, composite, seminorms)");
  });
}

ChainSpec parse_chain(const Node& node) {
  const std::string type = node.string("type");
  return guarded(node, [&]() -> ChainSpec {
    if (type == "linear") {
      node.allow_only({"type", "slope", "offset"});
      return ChainSpec::linear(node.count("slope", 1), node.integer("offset", 0));
    }
    if (type == "explicit") {
      node.allow_only({"type", "cuts"});
      const json& cuts = node.raw("cuts");
      if (!cuts.is_array()) node.fail_at("cuts", "expected an array of cut indices");
      std::vector<Index> values;
      for (const json& c : cuts) {
        if (!c.is_number_unsigned()) node.fail_at("cuts", "cut indices must be nonnegative integers");
        values.push_back(c.get<Index>());
      }
      return ChainSpec::explicit_cuts(std::move(values));
    }
    node.fail_at("type", "unknown chain type '" + type + "' (linear, explicit)");
  });
}

SequenceSpec parse_sequence(const Node& node) {
  const std::string type = node.string("type");
  return guarded(node, [&]() -> SequenceSpec {
    if (type == "harmonic") {
      node.allow_only({"type"});
      return SequenceSpec::harmonic();
    }
    if (type == "geometric") {
      node.allow_only({"type", "ratio", "scale"});
      return SequenceSpec::geometric(node.rational("ratio"), node.rational("scale", Rational(1)));
    }
    if (type == "power") {
      node.allow_only({"type", "alpha"});
      return SequenceSpec::power(node.number("alpha"));
    }
    if (type == "explicit") {
      node.allow_only({"type", "values", "tail_ratio"});
      return SequenceSpec::explicit_list(node.rationals("values"), node.rational("tail_ratio"));
    }
    if (type == "transformed") {
      node.allow_only({"type", "base", "scale", "power"});
      return parse_sequence(node.child("base")).transformed(node.rational("scale", Rational(1)),
                                                            node.number("power", 1.0));
    }
    if (type == "perturbed") {
      node.allow_only({"type", "base", "k"});
      return parse_sequence(node.child("base")).perturbed(node.count("k"));
    }
    node.fail_at("type", "unknown sequence type '" + type + "' (harmonic, geometric, power, explicit, "
                         "transformed, perturbed)");
  });
}

RunMode parse_mode(const Node& root) {
  const std::string mode = root.string("mode");
  if (mode == "rescale") return RunMode::kRescale;
  if (mode == "exact") return RunMode::kExact;
  if (mode == "sandwich") return RunMode::kSandwich;
  if (mode == "shapiro") return RunMode::kShapiro;
  if (mode == "tyuremskikh") return RunMode::kTyuremskikh;
  if (mode == "setchain") return RunMode::kSetchain;
  if (mode == "degeneracy") return RunMode::kDegeneracy;
  root.fail_at("mode", "unknown mode '" + mode +
                           "' (rescale, exact, sandwich, shapiro, tyuremskikh, setchain, degeneracy)");
}

std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

std::string csv_num(double x) { return std::isfinite(x) ? format_double(x) : (x > 0 ? "inf" : "-inf"); }

std::string element_csv(const Vector& x) {
  std::string out = "index,coefficient\n";
  for (const auto& [j, value] : x) out += std::to_string(j) + "," + format_double(value) + "\n";
  return out;
}

json report_json(const LethargyReport& report) {
  json rows = json::array();
  for (const ReportRow& row : report.rows) {
    json r = {{"n", row.n}, {"e_n", num(row.e)}, {"rho_n", num(row.rho)}, {"lower", num(row.lower)},
              {"upper", num(row.upper)}, {"checkpoint", row.checkpoint}, {"pass", row.pass}};
    if (row.upper_alt) r["upper_ratio_bound"] = num(*row.upper_alt);
    if (row.checkpoint_value) r["checkpoint_value"] = num(*row.checkpoint_value);
    rows.push_back(std::move(r));
  }
  json out = {{"mode", to_string(report.mode)},
              {"status", to_string(report.status())},
              {"n_o", report.n_o},
              {"depth", report.depth},
              {"factor", report.factor},
              {"tolerance", num(report.tol)},
              {"expected_failure", report.expected_failure},
              {"failures", report.failures()},
              {"rows", std::move(rows)},
              {"notes", report.notes}};
  if (report.ratio_bound) out["ratio_bound_M"] = num(*report.ratio_bound);
  return out;
}

std::string report_table(const LethargyReport& report) {
  std::string out = "n,e_n,rho_n,lower,upper,upper_ratio_bound,checkpoint,checkpoint_value,pass\n";
  for (const ReportRow& row : report.rows) {
    out += std::to_string(row.n) + "," + csv_num(row.e) + "," + csv_num(row.rho) + "," + csv_num(row.lower) + "," +
           csv_num(row.upper) + "," + (row.upper_alt ? csv_num(*row.upper_alt) : "") + "," +
           (row.checkpoint ? "1" : "0") + "," + (row.checkpoint_value ? csv_num(*row.checkpoint_value) : "") +
           "," + (row.pass ? "1" : "0") + "\n";
  }
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string report_text_rows(const LethargyReport& report) {
  std::ostringstream out;
  out << "status: " << to_string(report.status()) << " (" << report.failures() << " failing rows)\n";
  out << "levels: " << report.n_o << ".." << report.depth << ", factor " << report.factor << ", tolerance "
      << short_num(report.tol) << "\n";
  if (report.ratio_bound) out << "ratio bound M = " << short_num(*report.ratio_bound) << "\n";
  for (const std::string& note : report.notes) out << "note: " << note << "\n";
  out << pad("n", 8) << pad("e_n", 18) << pad("rho_n", 18) << pad("lower", 18) << pad("upper", 18) << "  result\n";
  for (const ReportRow& row : report.rows) {
    out << pad(std::to_string(row.n), 8) << pad(short_num(row.e), 18) << pad(short_num(row.rho), 18)
        << pad(short_num(row.lower), 18) << pad(short_num(row.upper), 18) << "  " << (row.pass ? "ok" : "FAIL")
        << (row.checkpoint ? " checkpoint" : "") << "\n";
  }
  return out.str();
}

json config_json(const RunConfig& config) {
  json out = {{"mode", to_string(config.mode)},
              {"space", config.space.describe()},
              {"chain", config.chain.describe()},
              {"sequence", config.sequence.describe()},
              {"depth", config.depth},
              {"factor", config.factor}};
  if (config.mode == RunMode::kSetchain) out["setchain"] = config.setchain;
  return out;
}

std::string text_header(const RunConfig& config) {
  std::ostringstream out;
  out << "lethargy report (" << to_string(config.mode) << ")\n";
  out << "space: " << config.space.describe() << "\n";
  out << "chain: " << config.chain.describe() << "\n";
  out << "sequence: " << config.sequence.describe() << "\n";
  out << "depth: " << config.depth << "\n";
  return out.str();
}

constexpr const char* kTruncationNote =
    "distances are certified for levels up to the truncation depth only";

void finish(RunResult& result, json body, const std::string& status, int exit_code) {
  body["status"] = status;
  body["exit_code"] = exit_code;
  result.status = status;
  result.exit_code = exit_code;
  result.report_body = body.dump(2);
}

RunResult run_rescale(const RunConfig& config, json body) {
  RunResult result;
  const RescaleResult r = rescale(config.sequence, config.factor, config.depth);
  const Rational c(config.factor);
  json rows = json::array();
  std::string table = "k,f_k,f_k_exact,n_k,branch,pass\n";
  std::ostringstream text;
  text << text_header(config) << pad("k", 6) << pad("f_k", 22) << pad("n_k", 12) << "  branch\n";
  bool all = true;
  for (std::size_t k = 0; k < r.n.size(); ++k) {
    bool pass = config.sequence.exact(r.n[k] + 1) <= r.f_exact[k];
    if (k + 1 < r.n.size()) pass = pass && r.f_exact[k] >= c * r.f_exact[k + 1];
    all = all && pass;
    const std::string branch = k == 0 ? "start" : (r.rapid[k - 1] ? "rapid" : "scaled");
    rows.push_back({{"k", k + 1}, {"f_k", num(r.f[k])}, {"f_k_exact", to_string(r.f_exact[k])},
                    {"n_k", r.n[k]}, {"branch", branch}, {"pass", pass}});
    table += std::to_string(k + 1) + "," + csv_num(r.f[k]) + "," + to_string(r.f_exact[k]) + "," +
             std::to_string(r.n[k]) + "," + branch + "," + (pass ? "1" : "0") + "\n";
    text << pad(std::to_string(k + 1), 6) << pad(short_num(r.f[k]), 22) << pad(std::to_string(r.n[k]), 12) << "  "
         << branch << (pass ? "" : "  FAIL") << "\n";
  }
  body["rescale"] = {{"rows", rows}, {"factor", config.factor}};
  const std::string status = all ? "PASS" : "FAIL";
  text << "status: " << status << "\n";
  result.report_text = text.str();
  result.table_csv = table;
  result.element_csv = "index,coefficient\n";
  finish(result, std::move(body), status, all ? 0 : 1);
  return result;
}

json construction_json(const ConstructionTrace& trace) {
  json out = {{"depth", trace.depth}, {"tail_bound", num(trace.tail_bound)}, {"support", trace.element.support_size()},
              {"notes", trace.notes}};
  if (trace.sandwich) {
    out["k_o"] = trace.sandwich->k_o;
    out["n_o"] = trace.sandwich->n_o;
    json checkpoints = json::array();
    for (std::size_t k = 0; k < trace.sandwich->rescale.n.size(); ++k) {
      checkpoints.push_back({{"k", k + 1},
                             {"n_k", trace.sandwich->rescale.n[k]},
                             {"f_k", num(trace.sandwich->rescale.f[k])}});
    }
    out["checkpoints"] = std::move(checkpoints);
  }
  return out;
}

RunResult from_report(const RunConfig& config, json body, const LethargyReport& report,
                      const ConstructionTrace& trace, bool extra_ok = true) {
  RunResult result;
  body["report"] = report_json(report);
  body["construction"] = construction_json(trace);
  result.report_text = text_header(config) + report_text_rows(report);
  result.table_csv = report_table(report);
  result.element_csv = element_csv(trace.element);
  const bool ok = report.ok() && extra_ok;
  finish(result, std::move(body), ok ? to_string(report.status()) : "FAIL", ok ? 0 : 1);
  return result;
}

RunResult run_degeneracy(const RunConfig& config, json body) {
  RunResult result;
  json rows = json::array();
  std::string table = "n,cut,d_nV,lower_bound_only\n";
  std::ostringstream text;
  text << text_header(config) << pad("n", 6) << pad("cut", 10) << pad("d_(n,V)", 22) << "\n";
  for (std::size_t n = 1; n <= config.depth; ++n) {
    const DnvEstimate d = dnv_estimate(config.space, config.chain, n);
    rows.push_back({{"n", n}, {"cut", config.chain.cut(n)}, {"d_nV", num(d.value.to_double())},
                    {"lower_bound_only", d.lower_bound_only}});
    table += std::to_string(n) + "," + std::to_string(config.chain.cut(n)) + "," + csv_num(d.value.to_double()) +
             "," + (d.lower_bound_only ? "1" : "0") + "\n";
    text << pad(std::to_string(n), 6) << pad(std::to_string(config.chain.cut(n)), 10)
         << pad(short_num(d.value.to_double()), 22) << (d.lower_bound_only ? "  (lower bound)" : "") << "\n";
  }
  const DvInfimum inf = dv_infimum(config.space, config.chain, config.depth);
  const Extended r = r_of_chain(config.space, config.chain, config.depth);
  json summary = {{"rows", rows},
                  {"dv_infimum", num(inf.value.to_double())},
                  {"dv_attained_at", inf.attained_at},
                  {"r_of_chain", num(r.to_double())}};
  text << "d_V over levels 1.." << config.depth << ": " << short_num(inf.value.to_double()) << " (at n = "
       << inf.attained_at << ")\n";
  text << "R(V): " << short_num(r.to_double()) << "\n";
  if (std::holds_alternative<SeminormFamily>(config.space.variant())) {
    const SeminormLowerBound lb =
        dv_lower_bound_seminorms(config.space, config.chain, config.seminorm_depth, config.depth);
    summary["seminorm_lower_bound"] = to_string(lb.bound);
    if (lb.failing_level) summary["seminorm_failing_level"] = *lb.failing_level;
    text << "d_V lower bound from " << config.seminorm_depth << " seminorm(s): " << to_string(lb.bound) << "\n";
  }
  try {
    const SandwichResult s = construct_sandwich(config.space, config.chain, config.sequence, config.depth, 3);
    summary["sandwich"] = {{"feasible", true}, {"n_o", s.n_o}};
    text << "sandwich construction: feasible from n_o = " << s.n_o << "\n";
  } catch (const PreconditionError& err) {
    summary["sandwich"] = {{"feasible", false}, {"condition", err.condition()}, {"message", err.what()}};
    text << "sandwich construction: rejected (" << err.condition() << ")\n";
  }
  body["degeneracy"] = std::move(summary);
  text << "status: PASS\n";
  result.report_text = text.str();
  result.table_csv = table;
  result.element_csv = "index,coefficient\n";
  finish(result, std::move(body), "PASS", 0);
  return result;
}

RunResult run_mode(const RunConfig& config, json body) {
  const double tol = config.tolerance;
  switch (config.mode) {
    case RunMode::kRescale:
      return run_rescale(config, std::move(body));
    case RunMode::kDegeneracy:
      return run_degeneracy(config, std::move(body));
    case RunMode::kExact: {
      const ConstructionTrace trace = construct_exact(config.space, config.chain, config.sequence, config.depth,
                                                      config.tail_epsilon, config.construction_tolerance);
      LethargyReport report = verify_exact(trace, config.space, config.chain, config.sequence, tol);
      report.notes.push_back(kTruncationNote);
      return from_report(config, std::move(body), report, trace);
    }
    case RunMode::kSandwich: {
      const SandwichResult s =
          construct_sandwich(config.space, config.chain, config.sequence, config.depth, config.factor);
      LethargyReport report = verify_sandwich(s, config.space, config.chain, config.sequence, tol);
      report.notes.push_back(kTruncationNote);
      return from_report(config, std::move(body), report, s.trace);
    }
    case RunMode::kShapiro: {
      const ShapiroResult w = shapiro_witness(config.space, config.chain, config.sequence, config.depth);
      LethargyReport report = verify_sandwich(w.sandwich, config.space, config.chain, config.sequence.sqrt(), tol);
      report.mode = ReportMode::kShapiro;
      report.notes.push_back(kTruncationNote);
      json ratios = json::array();
      std::string table = "n,e_n,rho_n,ratio,ratio_lower_bound,checkpoint,pass\n";
      bool ratios_ok = true;
      for (const RatioRow& row : w.rows) {
        const bool pass = row.rho >= std::sqrt(row.e) / 3.0 - report.tol;
        ratios_ok = ratios_ok && pass;
        ratios.push_back({{"n", row.n}, {"e_n", num(row.e)}, {"rho_n", num(row.rho)}, {"ratio", num(row.ratio)},
                          {"ratio_lower_bound", num(row.lower_bound)}, {"checkpoint", row.checkpoint},
                          {"pass", pass}});
        table += std::to_string(row.n) + "," + csv_num(row.e) + "," + csv_num(row.rho) + "," + csv_num(row.ratio) +
                 "," + csv_num(row.lower_bound) + "," + (row.checkpoint ? "1" : "0") + "," + (pass ? "1" : "0") +
                 "\n";
      }
      body["ratios"] = std::move(ratios);
      RunResult result = from_report(config, std::move(body), report, w.sandwich.trace, ratios_ok);
      result.table_csv = table;
      return result;
    }
    case RunMode::kTyuremskikh: {
      const TyuremskikhResult w = tyuremskikh_witness(config.space, config.chain, config.sequence, config.depth);
      LethargyReport report = verify_sandwich(w.sandwich, config.space, config.chain,
                                              config.sequence.transformed(Rational(3), 0.5), tol);
      report.mode = ReportMode::kTyuremskikh;
      report.notes.push_back(kTruncationNote);
      const bool nothing_to_certify = w.certified_from > config.depth;
      if (nothing_to_certify) report.notes.push_back("no level up to the depth has e_n <= 1");
      report.notes.push_back("rho_n >= e_n certified from n = " + std::to_string(w.certified_from));
      body["certified_from"] = w.certified_from;
      body["certified"] = w.certified;
      return from_report(config, std::move(body), report, w.sandwich.trace, w.certified || nothing_to_certify);
    }
    case RunMode::kSetchain: {
      const SandwichResult s =
          construct_sandwich(config.space, config.chain, config.sequence, config.depth, config.factor);
      SetChainSpec setchain = LineAugmentedChain{config.chain};
      if (config.setchain == "ball") setchain = BallChain{};
      LethargyReport report =
          verify_setchain(s.trace.element, config.space, setchain, config.sequence, s.n_o, config.depth, tol);
      report.notes.push_back(kTruncationNote);
      return from_report(config, std::move(body), report, s.trace);
    }
  }
  throw std::logic_error("unhandled run mode");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

}  // namespace

const char* to_string(RunMode mode) noexcept {
  switch (mode) {
    case RunMode::kRescale: return "rescale";
    case RunMode::kExact: return "exact";
    case RunMode::kSandwich: return "sandwich";
    case RunMode::kShapiro: return "shapiro";
    case RunMode::kTyuremskikh: return "tyuremskikh";
    case RunMode::kSetchain: return "setchain";
    case RunMode::kDegeneracy: return "degeneracy";
  }
  return "unknown";
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(line_column(text, err.byte), "syntax error: " + std::string(err.what()));
  }
  const Node root(doc, "");
  root.allow_only({"$schema", "description", "mode", "space", "chain", "sequence", "setchain", "depth", "factor",
                   "tolerance", "construction_tolerance", "tail_epsilon", "seminorm_depth", "output"});
  RunConfig config;
  config.mode = parse_mode(root);
  config.space = parse_space(root.child("space"));
  config.chain = parse_chain(root.child("chain"));
  config.sequence = parse_sequence(root.child("sequence"));
  config.depth = root.count("depth", config.mode == RunMode::kExact && root.has("tail_epsilon") ? 0 : 10);
  config.factor = static_cast<unsigned>(root.count("factor", 3));
  if (config.factor != 2 && config.factor != 3) root.fail_at("factor", "factor must be 2 or 3");
  config.tolerance = root.number("tolerance", 0.0);
  config.construction_tolerance = root.number("construction_tolerance", 0.0);
  if (config.tolerance < 0.0) root.fail_at("tolerance", "must be nonnegative");
  if (config.construction_tolerance < 0.0) root.fail_at("construction_tolerance", "must be nonnegative");
  if (root.has("tail_epsilon")) {
    config.tail_epsilon = root.number("tail_epsilon");
    if (!(*config.tail_epsilon > 0.0)) root.fail_at("tail_epsilon", "must be positive");
  }
  config.seminorm_depth = root.count("seminorm_depth", 1);
  config.setchain = root.string("setchain", "line");
  if (config.setchain != "line" && config.setchain != "ball") root.fail_at("setchain", "expected 'line' or 'ball'");
  if (config.depth == 0 && !(config.mode == RunMode::kExact && config.tail_epsilon)) {
    root.fail_at("depth", "depth must be at least 1");
  }
  if (root.has("output")) {
    const Node out = root.child("output");
    out.allow_only({"directory", "report", "text", "table", "element"});
    config.output.directory = out.string("directory", config.output.directory);
    config.output.report = out.string("report", config.output.report);
    config.output.text = out.string("text", config.output.text);
    config.output.table = out.string("table", config.output.table);
    config.output.element = out.string("element", config.output.element);
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, "cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const ConfigError& err) {
    throw ConfigError(path + ":" + err.location(), std::string(err.what()).substr(err.location().size() + 2));
  }
}

RunResult execute(const RunConfig& config) {
  json body = {{"schema_version", kSchemaVersion}, {"config", config_json(config)}};
  try {
    return run_mode(config, body);
  } catch (const PreconditionError& err) {
    RunResult result;
    body["precondition"] = {{"condition", err.condition()}, {"message", err.what()}};
    result.report_text = text_header(config) + "status: PRECONDITION-FAILED\n" + err.what() + "\n";
    result.table_csv = "";
    result.element_csv = "index,coefficient\n";
    finish(result, std::move(body), "PRECONDITION-FAILED", 3);
    return result;
  }
}

void write_outputs(const RunResult& result, const OutputPaths& paths, const std::string& directory) {
  const std::filesystem::path dir(directory);
  std::filesystem::create_directories(dir);
  const json header = {{"generated_at", utc_timestamp()}, {"tool", "lethargy"}, {"schema_version", kSchemaVersion}};
  std::string report = "{\n\"header\": " + header.dump() + ",\n\"body\": " + result.report_body + "\n}\n";
  write_file(dir / paths.report, report);
  write_file(dir / paths.text, result.report_text);
  write_file(dir / paths.table, result.table_csv);
  write_file(dir / paths.element, result.element_csv);
}

}  // namespace lethargy
