#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "driftforge/driftgen.hpp"
#include "driftforge/experiment.hpp"

namespace driftforge {

struct CommandOptions {
  std::string out_dir = "out";
  std::size_t jobs = 1;
  // Progress and failure messages; null silences them.
  std::ostream* log = nullptr;
};

struct CommandReport {
  std::vector<std::string> written;
  std::vector<std::string> failures;

  int exit_code() const { return failures.empty() ? 0 : 1; }
};

// "<dataset>_<scenario>_<seed>", the stem shared by the stream, its drift
// sidecar and its embedding file.
std::string stream_basename(const std::string& dataset, const std::string& scenario, std::uint64_t seed);

// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::string& path, const std::string& content);

DriftedStream load_drifted_stream(const std::string& jsonl_path, const std::string& drifts_path, int num_labels);

// Runs tasks 0..count-1 on up to `jobs` threads. Exceptions stay with their
// task: the returned vector holds each task's error message ("" on success).
std::vector<std::string> run_parallel(std::size_t count, std::size_t jobs,
                                      const std::function<void(std::size_t)>& task);

// <out>/streams/<dataset>_<scenario>_<seed>.jsonl and .drifts, plus
// <out>/streams/<dataset>_manifest.json.
CommandReport cmd_generate(const ExperimentConfig& config, const CommandOptions& options);

// <out>/metrics/<dataset>_{windowed,summary,drifts}.csv and
// <out>/metrics/<dataset>_manifest.json.
CommandReport cmd_evaluate(const ExperimentConfig& config, const CommandOptions& options);

// Merges every dataset in metrics_dir into metrics_dir/report.csv: windowed
// rows with a series id and the drift markers that fall in each window.
CommandReport cmd_report(const std::string& metrics_dir, std::ostream* log = nullptr);

inline constexpr const char* kReportHeader =
    "series,dataset,scenario,learner,seed,window_index,window_size,accuracy,macro_f1,drift_kinds";

}  // namespace driftforge
