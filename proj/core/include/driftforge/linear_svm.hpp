#pragma once

#include <cstdint>
#include <vector>

#include "driftforge/learner.hpp"

namespace driftforge {

struct LinearSvmConfig {
  double alpha = 1e-4;
  // Learning-rate offset; 0 selects 1 / alpha, so the first step is 1.
  double t0 = 0.0;
  // Scales each hinge update by total / (observed_labels * count[label]),
  // counted over the instances seen so far.
  bool balanced = false;
};

// One-vs-rest linear SVM trained by stochastic subgradient descent on the
// L2-regularized hinge loss, step size 1 / (alpha * (t0 + t - 1)).
class LinearSvm final : public Classifier {
 public:
  LinearSvm(std::size_t dim, int num_labels, LinearSvmConfig config = {});

  void learn_one(std::span<const float> x, int label) override;
  int predict_one(std::span<const float> x) const override;
  std::vector<double> score_all(std::span<const float> x) const override;
  std::string name() const override { return "ISVM"; }

  std::span<const double> weights(int label) const;
  double bias(int label) const { return bias_[static_cast<std::size_t>(label)]; }
  std::uint64_t steps() const { return steps_; }
  // Sample weight the next instance of `label` would get.
  double sample_weight(int label) const;
  // Step size the next update will use.
  double next_learning_rate() const;
  const LinearSvmConfig& config() const { return config_; }

 private:
  LinearSvmConfig config_;
  std::vector<double> weights_;  // label-major
  std::vector<double> bias_;
  std::uint64_t steps_ = 0;
  std::vector<std::uint64_t> label_counts_;
};

}  // namespace driftforge
