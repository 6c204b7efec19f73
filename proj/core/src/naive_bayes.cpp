#include "driftforge/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "driftforge/error.hpp"

namespace driftforge {

GaussianNaiveBayes::GaussianNaiveBayes(std::size_t dim, int num_labels)
    : Classifier(dim, num_labels),
      counts_(static_cast<std::size_t>(num_labels), 0.0),
      means_(static_cast<std::size_t>(num_labels) * dim, 0.0),
      m2_(static_cast<std::size_t>(num_labels) * dim, 0.0) {}

void GaussianNaiveBayes::learn_one(std::span<const float> x, int label) {
  check_input(x);
  check_label(label);
  const auto l = static_cast<std::size_t>(label);
  const double n = ++counts_[l];
  ++total_;
  double* mean = means_.data() + l * dim();
  double* m2 = m2_.data() + l * dim();
  for (std::size_t f = 0; f < dim(); ++f) {
    const double delta = x[f] - mean[f];
    mean[f] += delta / n;
    m2[f] += delta * (x[f] - mean[f]);
  }
}

double GaussianNaiveBayes::mean(int label, std::size_t feature) const {
  return means_[static_cast<std::size_t>(label) * dim() + feature];
}

double GaussianNaiveBayes::variance(int label, std::size_t feature) const {
  const double n = counts_[static_cast<std::size_t>(label)];
  return n > 0 ? m2_[static_cast<std::size_t>(label) * dim() + feature] / n : 0.0;
}

double GaussianNaiveBayes::smoothing() const {
  double largest = 0.0;
  for (int l = 0; l < num_labels(); ++l) {
    if (counts_[static_cast<std::size_t>(l)] == 0) continue;
    for (std::size_t f = 0; f < dim(); ++f) largest = std::max(largest, variance(l, f));
  }
  return std::max(1e-9 * largest, 1e-12);
}

std::vector<double> GaussianNaiveBayes::log_joint(std::span<const float> x) const {
  check_input(x);
  if (total_ == 0) throw Error("untrained model");
  const double eps = smoothing();
  std::vector<double> out(static_cast<std::size_t>(num_labels()), -std::numeric_limits<double>::infinity());
  for (int l = 0; l < num_labels(); ++l) {
    const double n = counts_[static_cast<std::size_t>(l)];
    if (n == 0) continue;
    double lj = std::log(n / total_);
    for (std::size_t f = 0; f < dim(); ++f) {
      const double var = variance(l, f) + eps;
      const double diff = x[f] - mean(l, f);
      lj -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + diff * diff / var);
    }
    out[static_cast<std::size_t>(l)] = lj;
  }
  return out;
}

int GaussianNaiveBayes::predict_one(std::span<const float> x) const {
  const auto lj = log_joint(x);
  return argmax(lj);
}

std::vector<double> GaussianNaiveBayes::score_all(std::span<const float> x) const {
  auto lj = log_joint(x);
  const double top = *std::max_element(lj.begin(), lj.end());
  double sum = 0.0;
  for (double& v : lj) {
    v = std::isinf(v) ? 0.0 : std::exp(v - top);
    sum += v;
  }
  for (double& v : lj) v /= sum;
  return lj;
}

}  // namespace driftforge
