#include "driftforge/adaptive_random_forest.hpp"

#include <cmath>

#include "driftforge/error.hpp"

namespace driftforge {

AdaptiveRandomForest::AdaptiveRandomForest(std::size_t dim, int num_labels, ArfConfig config)
    : Classifier(dim, num_labels), config_(config) {
  if (config_.n_models < 1) throw Error("ARF needs at least one member");
  subspace_ = config_.subspace_size == 0
                  ? static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))))
                  : config_.subspace_size;
  if (subspace_ < 1 || subspace_ > dim) throw Error("ARF subspace size must lie in [1, d]");

  members_.reserve(config_.n_models);
  for (std::size_t i = 0; i < config_.n_models; ++i) {
    Member m{nullptr, nullptr, std::nullopt, std::nullopt, Rng(mix_seed(config_.seed, i))};
    m.tree = new_tree(m);
    reset_detectors(m);
    members_.push_back(std::move(m));
  }
}

std::unique_ptr<HoeffdingTree> AdaptiveRandomForest::new_tree(Member& member) const {
  HoeffdingTreeConfig tree = config_.tree;
  tree.subspace_size = subspace_;
  tree.seed = member.rng.next();
  return std::make_unique<HoeffdingTree>(dim(), num_labels(), tree);
}

void AdaptiveRandomForest::reset_detectors(Member& member) const {
  if (!config_.detectors_enabled) return;
  member.warning.emplace(config_.warning_delta);
  member.drift.emplace(config_.drift_delta);
}

void AdaptiveRandomForest::learn_one(std::span<const float> x, int label) {
  check_input(x);
  check_label(label);
  for (auto& m : members_) {
    if (config_.detectors_enabled) {
      const double error = m.tree->predict_one(x) != label ? 1.0 : 0.0;
      if (m.warning->update(error)) {
        ++warnings_;
        m.background = new_tree(m);
        m.warning.emplace(config_.warning_delta);
      }
      if (m.drift->update(error)) {
        ++replacements_;
        m.tree = m.background ? std::move(m.background) : new_tree(m);
        m.background.reset();
        reset_detectors(m);
      }
    }
    const double weight = config_.lambda > 0 ? static_cast<double>(m.rng.poisson(config_.lambda)) : 1.0;
    if (weight == 0) continue;
    m.tree->learn(x, label, weight);
    if (m.background) m.background->learn(x, label, weight);
  }
}

std::vector<double> AdaptiveRandomForest::score_all(std::span<const float> x) const {
  check_input(x);
  std::vector<double> votes(static_cast<std::size_t>(num_labels()), 0.0);
  for (const auto& m : members_) votes[static_cast<std::size_t>(m.tree->predict_one(x))] += 1.0;
  for (double& v : votes) v /= static_cast<double>(members_.size());
  return votes;
}

int AdaptiveRandomForest::predict_one(std::span<const float> x) const { return argmax(score_all(x)); }

}  // namespace driftforge
