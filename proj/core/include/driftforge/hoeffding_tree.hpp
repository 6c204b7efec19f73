#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "driftforge/learner.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

struct HoeffdingTreeConfig {
  double grace_period = 200;
  double split_confidence = 1e-7;
  double tie_threshold = 0.05;
  std::size_t num_thresholds = 10;
  // Each child must receive at least this fraction of the leaf weight.
  double min_branch_fraction = 0.01;
  // Features monitored per leaf, drawn afresh for every new leaf; 0 = all.
  std::size_t subspace_size = 0;
  std::uint64_t seed = 0;
};

// sqrt(R^2 ln(1/delta) / (2n))
double hoeffding_bound(double range, double confidence, double n);

// Hoeffding tree (VFDT) for numeric features. Leaves keep one Gaussian
// estimator per (feature, label); every grace_period of weight a leaf scores
// threshold splits by information gain and splits when the best beats the
// runner-up by the Hoeffding bound, or the bound falls below tie_threshold.
class HoeffdingTree final : public Classifier {
 public:
  HoeffdingTree(std::size_t dim, int num_labels, HoeffdingTreeConfig config = {});

  void learn_one(std::span<const float> x, int label) override { learn(x, label, 1.0); }
  void learn(std::span<const float> x, int label, double weight);
  int predict_one(std::span<const float> x) const override;
  // Normalized class distribution at the routed leaf.
  std::vector<double> score_all(std::span<const float> x) const override;
  std::string name() const override { return "HT"; }

  std::size_t leaf_count() const { return leaves_; }
  std::size_t node_count() const { return nodes_.size(); }
  const HoeffdingTreeConfig& config() const { return config_; }
  // Information-gain range, log2(K).
  double gain_range() const;

 private:
  struct Gaussian {
    double weight = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = 0.0;
    double max = 0.0;

    void add(double x, double w);
    // Estimated weight with value <= threshold.
    double weight_below(double threshold) const;
  };

  struct Node {
    // Split nodes: feature >= 0, children by x[feature] <= threshold.
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    std::size_t depth = 0;
    // Leaves.
    std::vector<double> class_weights;
    std::vector<std::size_t> features;
    std::vector<Gaussian> stats;  // features.size() * K, feature-major
    double weight_at_last_attempt = 0.0;

    bool is_leaf() const { return feature < 0; }
  };

  struct SplitCandidate {
    double merit = 0.0;
    int feature = -1;
    double threshold = 0.0;
    std::vector<double> left;
    std::vector<double> right;
  };

  std::size_t make_leaf(std::vector<double> class_weights, std::size_t depth);
  std::size_t route(std::span<const float> x) const;
  void attempt_split(std::size_t leaf);
  SplitCandidate best_split_for(const Node& leaf, std::size_t slot, double parent_entropy) const;

  HoeffdingTreeConfig config_;
  Rng rng_;
  std::vector<Node> nodes_;
  std::size_t leaves_ = 0;
};

double entropy(std::span<const double> weights);

}  // namespace driftforge
