#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "driftforge/driftgen.hpp"
#include "driftforge/learner.hpp"
#include "driftforge/vectorize.hpp"

namespace driftforge {

// K x K counts; rows are true labels, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_labels = 0);

  void add(int truth, int predicted);
  std::uint64_t at(int truth, int predicted) const;
  std::uint64_t total() const { return total_; }
  std::uint64_t trace() const;
  int num_labels() const { return num_labels_; }
  bool empty() const { return total_ == 0; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  int num_labels_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// trace / total. Throws on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

// Unweighted mean of per-label F1 over the labels that occur as a true label
// or a prediction; 0/0 terms count as 0. Throws on an empty matrix.
double macro_f1(const ConfusionMatrix& cm);

struct WindowMetrics {
  std::size_t index = 0;
  std::size_t size = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  ConfusionMatrix matrix;
};

struct RunResult {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double elapsed_seconds = 0.0;
  std::vector<WindowMetrics> windows;
  std::vector<DriftAnnotation> annotations;
  ConfusionMatrix cumulative;
  // Filled when PrequentialOptions::record_predictions is set.
  std::vector<int> predictions;
};

struct PrequentialOptions {
  std::size_t window = 1000;
  bool record_predictions = false;
  // L2-normalize precomputed vectors before use.
  bool normalize = false;
};

// Test-then-train over the stream. An untrained learner's prediction is
// recorded as label 0. The last window may be partial.
RunResult prequential_run(const DriftedStream& stream, const Vectorizer& vectorizer, Classifier& learner,
                          const PrequentialOptions& options = {});
RunResult prequential_run(const DriftedStream& stream, std::span<const Vector> vectors, Classifier& learner,
                          const PrequentialOptions& options = {});

struct RunKey {
  std::string dataset;
  std::string scenario;
  std::string learner;
  std::uint64_t seed = 0;

  friend auto operator<=>(const RunKey&, const RunKey&) = default;
};

struct KeyedRun {
  RunKey key;
  RunResult result;
};

struct StreamMarkers {
  std::string dataset;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<DriftAnnotation> annotations;
};

inline constexpr const char* kWindowedHeader =
    "dataset,scenario,learner,seed,window_index,window_size,accuracy,macro_f1";
inline constexpr const char* kSummaryHeader = "dataset,scenario,learner,seed,accuracy,macro_f1,elapsed_seconds";
inline constexpr const char* kMarkersHeader = "dataset,scenario,seed,index,kind";

void write_windowed_csv(std::ostream& out, const std::vector<KeyedRun>& runs);
void write_summary_csv(std::ostream& out, const std::vector<KeyedRun>& runs);
void write_markers_csv(std::ostream& out, const std::vector<StreamMarkers>& markers);

// CSV field quoting for names that contain commas or quotes.
std::string csv_field(const std::string& value);
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace driftforge
