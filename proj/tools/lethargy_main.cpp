#include "lethargy/cli.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Lethargy constructions: elements with prescribed distances to nested subspaces"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run the pipeline described by a configuration file");
  std::string config_path;
  std::string out_dir;
  std::size_t depth = 0;
  double tol = 0.0;
  run->add_option("config", config_path, "Configuration file (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides LETHARGY_OUT_DIR and the config)");
  run->add_option("--depth", depth, "Truncation depth N (overrides the config)");
  run->add_option("--tol", tol, "Verification tolerance (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    lethargy::RunConfig config = lethargy::load_config(config_path);
    if (depth > 0) config.depth = depth;
    if (tol > 0.0) config.tolerance = tol;
    std::string directory = config.output.directory;
    if (const char* env = std::getenv("LETHARGY_OUT_DIR"); env != nullptr && *env != '\0') directory = env;
    if (!out_dir.empty()) directory = out_dir;

    const lethargy::RunResult result = lethargy::execute(config);
    lethargy::write_outputs(result, config.output, directory);
    std::cout << result.report_text;
    std::cout << "outputs written to " << directory << "\n";
    return result.exit_code;
  } catch (const lethargy::ConfigError& err) {
    std::cerr << "configuration error at " << err.what() << "\n";
    return 2;
  } catch (const lethargy::InvalidSpec& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return 2;
  } catch (const lethargy::Unsupported& err) {
    std::cerr << "unsupported: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 4;
  }
}
