#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "driftforge/adwin.hpp"
#include "driftforge/hoeffding_tree.hpp"
#include "driftforge/learner.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

struct ArfConfig {
  std::size_t n_models = 10;
  // Online-bagging Poisson rate; <= 0 trains every member with weight 1.
  double lambda = 6.0;
  // Features per leaf; 0 selects ceil(sqrt(d)).
  std::size_t subspace_size = 0;
  double warning_delta = 0.01;
  double drift_delta = 0.001;
  bool detectors_enabled = false;
  std::uint64_t seed = 0;
  HoeffdingTreeConfig tree;
};

// Adaptive Random Forest: online bagging of Hoeffding trees on random
// feature subspaces. With detectors enabled, each member feeds its 0/1
// error to a warning and a drift ADWIN; a warning starts a background tree,
// a drift swaps the background tree (or a fresh one) in.
class AdaptiveRandomForest final : public Classifier {
 public:
  AdaptiveRandomForest(std::size_t dim, int num_labels, ArfConfig config = {});

  void learn_one(std::span<const float> x, int label) override;
  int predict_one(std::span<const float> x) const override;
  // Vote fractions.
  std::vector<double> score_all(std::span<const float> x) const override;
  std::string name() const override { return config_.detectors_enabled ? "ARF_DD" : "ARF"; }

  std::size_t size() const { return members_.size(); }
  std::size_t subspace_size() const { return subspace_; }
  std::size_t replacements() const { return replacements_; }
  std::size_t warnings() const { return warnings_; }
  const HoeffdingTree& member(std::size_t i) const { return *members_[i].tree; }

 private:
  struct Member {
    std::unique_ptr<HoeffdingTree> tree;
    std::unique_ptr<HoeffdingTree> background;
    std::optional<Adwin> warning;
    std::optional<Adwin> drift;
    Rng rng;
  };

  std::unique_ptr<HoeffdingTree> new_tree(Member& member) const;
  void reset_detectors(Member& member) const;

  ArfConfig config_;
  std::size_t subspace_;
  std::vector<Member> members_;
  std::size_t replacements_ = 0;
  std::size_t warnings_ = 0;
};

}  // namespace driftforge
