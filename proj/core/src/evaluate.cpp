#include "driftforge/evaluate.hpp"

#include <chrono>
#include <ostream>

#include <fmt/format.h>

#include "driftforge/error.hpp"

namespace driftforge {

ConfusionMatrix::ConfusionMatrix(int num_labels)
    : num_labels_(num_labels), counts_(static_cast<std::size_t>(num_labels) * static_cast<std::size_t>(num_labels), 0) {}

void ConfusionMatrix::add(int truth, int predicted) {
  if (truth < 0 || truth >= num_labels_ || predicted < 0 || predicted >= num_labels_)
    throw Error(fmt::format("confusion entry ({}, {}) outside [0, {})", truth, predicted, num_labels_));
  ++counts_[static_cast<std::size_t>(truth) * static_cast<std::size_t>(num_labels_) + static_cast<std::size_t>(predicted)];
  ++total_;
}

std::uint64_t ConfusionMatrix::at(int truth, int predicted) const {
  return counts_[static_cast<std::size_t>(truth) * static_cast<std::size_t>(num_labels_) + static_cast<std::size_t>(predicted)];
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (int i = 0; i < num_labels_; ++i) t += at(i, i);
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.num_labels_ != num_labels_) throw Error("cannot add confusion matrices of different K");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  total_ += other.total_;
  return *this;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.empty()) throw Error("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

double macro_f1(const ConfusionMatrix& cm) {
  if (cm.empty()) throw Error("macro F1 of an empty confusion matrix");
  const int k = cm.num_labels();
  double sum = 0.0;
  int labels = 0;
  for (int c = 0; c < k; ++c) {
    std::uint64_t row = 0, col = 0;
    for (int j = 0; j < k; ++j) {
      row += cm.at(c, j);
      col += cm.at(j, c);
    }
    if (row == 0 && col == 0) continue;
    ++labels;
    const double tp = static_cast<double>(cm.at(c, c));
    const double precision = col > 0 ? tp / static_cast<double>(col) : 0.0;
    const double recall = row > 0 ? tp / static_cast<double>(row) : 0.0;
    sum += precision + recall > 0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  }
  return sum / labels;
}

namespace {

template <typename VectorAt>
RunResult run_loop(const DriftedStream& stream, Classifier& learner, const PrequentialOptions& options,
                   VectorAt&& vector_at) {
  if (options.window == 0) throw Error("window must be at least 1");
  const int k = stream.stream.num_labels;
  if (learner.num_labels() != k)
    throw Error(fmt::format("learner has K = {} but the stream has K = {}", learner.num_labels(), k));

  RunResult result;
  result.cumulative = ConfusionMatrix(k);
  result.annotations = stream.annotations;
  if (options.record_predictions) result.predictions.reserve(stream.stream.size());

  ConfusionMatrix window(k);
  std::size_t in_window = 0;
  const auto flush = [&] {
    WindowMetrics w;
    w.index = result.windows.size();
    w.size = in_window;
    w.accuracy = accuracy(window);
    w.macro_f1 = macro_f1(window);
    w.matrix = window;
    result.windows.push_back(std::move(w));
    window = ConfusionMatrix(k);
    in_window = 0;
  };

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < stream.stream.size(); ++i) {
    const auto& inst = stream.stream.instances[i];
    const auto x = vector_at(i);
    const int predicted = learner.trained() ? learner.predict_one(x) : 0;
    result.cumulative.add(inst.label, predicted);
    window.add(inst.label, predicted);
    if (options.record_predictions) result.predictions.push_back(predicted);
    learner.learn_one(x, inst.label);
    if (++in_window == options.window) flush();
  }
  if (in_window > 0) flush();
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!result.cumulative.empty()) {
    result.accuracy = accuracy(result.cumulative);
    result.macro_f1 = macro_f1(result.cumulative);
  }
  return result;
}

}  // namespace

RunResult prequential_run(const DriftedStream& stream, const Vectorizer& vectorizer, Classifier& learner,
                          const PrequentialOptions& options) {
  if (vectorizer.dim() != learner.dim())
    throw Error(fmt::format("vectorizer dim {} does not match learner dim {}", vectorizer.dim(), learner.dim()));
  return run_loop(stream, learner, options, [&](std::size_t i) {
    return vectorizer.transform(stream.stream.instances[i].text);
  });
}

RunResult prequential_run(const DriftedStream& stream, std::span<const Vector> vectors, Classifier& learner,
                          const PrequentialOptions& options) {
  if (vectors.size() != stream.stream.size())
    throw Error(fmt::format("{} vectors for a stream of {} instances", vectors.size(), stream.stream.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != learner.dim())
      throw Error(fmt::format("vector {} has dimension {}, learner expects {}", i, vectors[i].size(), learner.dim()));
  }
  if (!options.normalize) {
    return run_loop(stream, learner, options, [&](std::size_t i) { return std::span<const float>(vectors[i]); });
  }
  return run_loop(stream, learner, options, [&](std::size_t i) {
    Vector v = vectors[i];
    l2_normalize(v);
    return v;
  });
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n") == std::string::npos) return value;
  std::string out = "\"";
  for (const char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_windowed_csv(std::ostream& out, const std::vector<KeyedRun>& runs) {
  out << kWindowedHeader << '\n';
  for (const auto& run : runs) {
    for (const auto& w : run.result.windows) {
      out << fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(run.key.dataset), csv_field(run.key.scenario),
                         csv_field(run.key.learner), run.key.seed, w.index, w.size, w.accuracy, w.macro_f1);
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<KeyedRun>& runs) {
  out << kSummaryHeader << '\n';
  for (const auto& run : runs) {
    out << fmt::format("{},{},{},{},{},{},{:.3f}\n", csv_field(run.key.dataset), csv_field(run.key.scenario),
                       csv_field(run.key.learner), run.key.seed, run.result.accuracy, run.result.macro_f1,
                       run.result.elapsed_seconds);
  }
}

void write_markers_csv(std::ostream& out, const std::vector<StreamMarkers>& markers) {
  out << kMarkersHeader << '\n';
  for (const auto& m : markers) {
    for (const auto& a : m.annotations) {
      out << fmt::format("{},{},{},{},{}\n", csv_field(m.dataset), csv_field(m.scenario), m.seed, a.index,
                         to_string(a.kind));
    }
  }
}

}  // namespace driftforge
