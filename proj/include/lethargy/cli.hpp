#pragma once

#include "lethargy/chain.hpp"
#include "lethargy/errors.hpp"
#include "lethargy/fnorm.hpp"
#include "lethargy/sequence.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace lethargy {

inline constexpr int kSchemaVersion = 1;

enum class RunMode { kRescale, kExact, kSandwich, kShapiro, kTyuremskikh, kSetchain, kDegeneracy };

const char* to_string(RunMode mode) noexcept;

/// Malformed or schema-violating configuration. `location` is a line:column
/// position for syntax errors and a JSON pointer for schema errors.
class ConfigError : public Error {
 public:
  ConfigError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

struct OutputPaths {
  std::string directory = "lethargy-out";
  std::string report = "report.json";
  std::string text = "report.txt";
  std::string table = "table.csv";
  std::string element = "element.csv";
};

struct RunConfig {
  RunMode mode = RunMode::kSandwich;
  FNormSpec space = FNormSpec::lp(2.0);
  ChainSpec chain = ChainSpec::linear();
  SequenceSpec sequence = SequenceSpec::harmonic();
  /// Set chains only: "line" (line-augmented) or "ball".
  std::string setchain = "line";
  std::size_t depth = 10;
  unsigned factor = 3;
  /// Verification tolerance; 0 selects ten times the construction tolerance.
  double tolerance = 0.0;
  /// 0 selects the per-norm default.
  double construction_tolerance = 0.0;
  std::optional<double> tail_epsilon;
  /// Number of seminorms used for the d_V lower bound in degeneracy mode.
  std::size_t seminorm_depth = 1;
  OutputPaths output;
};

/// Parses and validates a configuration document; unknown keys are errors.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

struct RunResult {
  /// 0 pass (including EXPECTED-FAIL), 1 verification failure, 3 precondition failure.
  int exit_code = 0;
  std::string status;
  /// Deterministic report body (JSON text without the header).
  std::string report_body;
  std::string report_text;
  std::string table_csv;
  std::string element_csv;
};

/// Runs the selected pipeline. Precondition failures are reported in the
/// result (exit code 3) rather than thrown.
RunResult execute(const RunConfig& config);

/// Writes report, text rendering, table and element files into
/// `directory`; the report gains a header with the generation time.
void write_outputs(const RunResult& result, const OutputPaths& paths, const std::string& directory);

/// "%.17g"
std::string format_double(double x);

}  // namespace lethargy
