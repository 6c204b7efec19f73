#include "driftforge/linear_svm.hpp"

#include <cmath>

#include "driftforge/error.hpp"

namespace driftforge {

LinearSvm::LinearSvm(std::size_t dim, int num_labels, LinearSvmConfig config)
    : Classifier(dim, num_labels),
      config_(config),
      weights_(static_cast<std::size_t>(num_labels) * dim, 0.0),
      bias_(static_cast<std::size_t>(num_labels), 0.0),
      label_counts_(static_cast<std::size_t>(num_labels), 0) {
  if (!(config_.alpha > 0)) throw Error("ISVM alpha must be positive");
  if (config_.t0 <= 0) config_.t0 = 1.0 / config_.alpha;
}

std::span<const double> LinearSvm::weights(int label) const {
  return {weights_.data() + static_cast<std::size_t>(label) * dim(), dim()};
}

double LinearSvm::next_learning_rate() const {
  return 1.0 / (config_.alpha * (config_.t0 + static_cast<double>(steps_)));
}

std::vector<double> LinearSvm::score_all(std::span<const float> x) const {
  check_input(x);
  std::vector<double> scores(static_cast<std::size_t>(num_labels()));
  for (int l = 0; l < num_labels(); ++l) {
    const auto w = weights(l);
    double s = bias_[static_cast<std::size_t>(l)];
    for (std::size_t f = 0; f < dim(); ++f) s += w[f] * x[f];
    scores[static_cast<std::size_t>(l)] = s;
  }
  return scores;
}

double LinearSvm::sample_weight(int label) const {
  if (!config_.balanced) return 1.0;
  std::uint64_t total = 1;
  std::uint64_t observed = label_counts_[static_cast<std::size_t>(label)] == 0 ? 1 : 0;
  for (const auto c : label_counts_) {
    total += c;
    observed += c > 0;
  }
  const double own = static_cast<double>(label_counts_[static_cast<std::size_t>(label)] + 1);
  return static_cast<double>(total) / (static_cast<double>(observed) * own);
}

int LinearSvm::predict_one(std::span<const float> x) const { return argmax(score_all(x)); }

void LinearSvm::learn_one(std::span<const float> x, int label) {
  check_input(x);
  check_label(label);
  for (const float v : x) {
    if (!std::isfinite(v)) throw Error("ISVM input contains a non-finite value");
  }
  const double eta = next_learning_rate();
  const double step = eta * sample_weight(label);
  ++steps_;
  ++label_counts_[static_cast<std::size_t>(label)];
  const double shrink = 1.0 - eta * config_.alpha;
  const auto scores = score_all(x);
  for (int l = 0; l < num_labels(); ++l) {
    const double y = l == label ? 1.0 : -1.0;
    double* w = weights_.data() + static_cast<std::size_t>(l) * dim();
    const bool violated = y * scores[static_cast<std::size_t>(l)] < 1.0;
    for (std::size_t f = 0; f < dim(); ++f) {
      w[f] *= shrink;
      if (violated) w[f] += step * y * x[f];
    }
    if (violated) bias_[static_cast<std::size_t>(l)] += step * y;
  }
}

}  // namespace driftforge
