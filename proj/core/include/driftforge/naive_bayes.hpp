#pragma once

#include <vector>

#include "driftforge/learner.hpp"

namespace driftforge {

// Gaussian Naive Bayes with one-pass (Welford) per-label feature moments.
class GaussianNaiveBayes final : public Classifier {
 public:
  GaussianNaiveBayes(std::size_t dim, int num_labels);

  void learn_one(std::span<const float> x, int label) override;
  int predict_one(std::span<const float> x) const override;
  // Posterior P(label | x); labels never seen get 0.
  std::vector<double> score_all(std::span<const float> x) const override;
  bool trained() const override { return total_ > 0; }
  std::string name() const override { return "GNB"; }

  double count(int label) const { return counts_[static_cast<std::size_t>(label)]; }
  double mean(int label, std::size_t feature) const;
  // Population variance M2 / n.
  double variance(int label, std::size_t feature) const;
  // 1e-9 * largest variance seen, floored at 1e-12.
  double smoothing() const;

 private:
  std::vector<double> log_joint(std::span<const float> x) const;

  std::vector<double> counts_;
  std::vector<double> means_;  // label-major, dim per label
  std::vector<double> m2_;
  double total_ = 0;
};

}  // namespace driftforge
