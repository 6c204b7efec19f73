#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "driftforge/commands.hpp"
#include "driftforge/error.hpp"
#include "driftforge/experiment.hpp"

namespace {

int finish(const driftforge::CommandReport& report) {
  if (!report.failures.empty())
    std::cerr << report.failures.size() << " item(s) failed, " << report.written.size() << " file(s) written\n";
  return report.exit_code();
}

// Falls back to the WordNet copy configured at build time.
void default_wordnet_dir(driftforge::ExperimentConfig& config) {
  if (!config.wordnet_dir.empty()) return;
  if (const char* env = std::getenv("DRIFTFORGE_WORDNET_DIR"); env && *env) return;
  if (std::filesystem::is_directory(DRIFTFORGE_DEFAULT_WORDNET_DIR)) config.wordnet_dir = DRIFTFORGE_DEFAULT_WORDNET_DIR;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftforge: drift-labeled text streams and prequential evaluation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::size_t jobs = 1;
  bool normalize = false;
  bool quiet = false;

  auto* generate = app.add_subcommand("generate", "sample subsets and write drifted streams");
  auto* evaluate = app.add_subcommand("evaluate", "run prequential evaluation over generated streams");
  auto* report = app.add_subcommand("report", "merge metrics into report.csv");
  for (auto* sub : {generate, evaluate}) {
    sub->add_option("-c,--config", config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("-j,--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  }
  for (auto* sub : {generate, evaluate, report}) {
    sub->add_option("-o,--out", out_dir, "output directory")->capture_default_str();
    sub->add_flag("-q,--quiet", quiet, "no progress output");
  }
  evaluate->add_flag("--normalize-embeddings", normalize, "L2-normalize precomputed embeddings");

  CLI11_PARSE(app, argc, argv);

  driftforge::CommandOptions options;
  options.out_dir = out_dir;
  options.jobs = jobs;
  options.log = quiet ? nullptr : &std::cerr;

  try {
    if (generate->parsed()) {
      auto config = driftforge::load_config(config_path);
      default_wordnet_dir(config);
      return finish(driftforge::cmd_generate(config, options));
    }
    if (evaluate->parsed()) {
      auto config = driftforge::load_config(config_path);
      if (normalize) config.normalize_embeddings = true;
      return finish(driftforge::cmd_evaluate(config, options));
    }
    const auto metrics = std::filesystem::path(out_dir) / "metrics";
    const auto dir = std::filesystem::is_directory(metrics) ? metrics.string() : out_dir;
    return finish(driftforge::cmd_report(dir, options.log));
  } catch (const driftforge::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
