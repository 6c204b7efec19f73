#include "driftforge/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "driftforge/error.hpp"

namespace driftforge {

double hoeffding_bound(double range, double confidence, double n) {
  return std::sqrt(range * range * std::log(1.0 / confidence) / (2.0 * n));
}

double entropy(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (total <= 0) return 0.0;
  double h = 0.0;
  for (const double w : weights) {
    if (w > 0) h -= (w / total) * std::log2(w / total);
  }
  return h;
}

void HoeffdingTree::Gaussian::add(double x, double w) {
  if (weight == 0) {
    min = max = x;
  } else {
    min = std::min(min, x);
    max = std::max(max, x);
  }
  weight += w;
  const double delta = x - mean;
  mean += delta * w / weight;
  m2 += w * delta * (x - mean);
}

double HoeffdingTree::Gaussian::weight_below(double threshold) const {
  if (weight == 0 || threshold < min) return 0.0;
  if (threshold >= max) return weight;
  const double var = weight > 1 ? m2 / (weight - 1) : 0.0;
  if (var <= 0) return mean <= threshold ? weight : 0.0;
  const double z = (threshold - mean) / std::sqrt(var);
  return weight * 0.5 * std::erfc(-z / std::sqrt(2.0));
}

HoeffdingTree::HoeffdingTree(std::size_t dim, int num_labels, HoeffdingTreeConfig config)
    : Classifier(dim, num_labels), config_(config), rng_(config.seed) {
  if (!(config_.split_confidence > 0 && config_.split_confidence < 1))
    throw Error("split confidence must lie in (0, 1)");
  if (config_.grace_period < 1) throw Error("grace period must be at least 1");
  if (config_.num_thresholds < 1) throw Error("need at least one split threshold per feature");
  if (config_.subspace_size > dim) config_.subspace_size = dim;
  make_leaf(std::vector<double>(static_cast<std::size_t>(num_labels), 0.0), 0);
}

double HoeffdingTree::gain_range() const { return std::log2(std::max(num_labels(), 2)); }

std::size_t HoeffdingTree::make_leaf(std::vector<double> class_weights, std::size_t depth) {
  Node leaf;
  leaf.depth = depth;
  leaf.weight_at_last_attempt = std::accumulate(class_weights.begin(), class_weights.end(), 0.0);
  leaf.class_weights = std::move(class_weights);
  if (config_.subspace_size == 0 || config_.subspace_size >= dim()) {
    leaf.features.resize(dim());
    std::iota(leaf.features.begin(), leaf.features.end(), std::size_t{0});
  } else {
    std::vector<std::size_t> all(dim());
    std::iota(all.begin(), all.end(), std::size_t{0});
    for (std::size_t i = 0; i < config_.subspace_size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_.uniform_index(dim() - i));
      std::swap(all[i], all[j]);
    }
    leaf.features.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(config_.subspace_size));
    std::sort(leaf.features.begin(), leaf.features.end());
  }
  leaf.stats.resize(leaf.features.size() * static_cast<std::size_t>(num_labels()));
  nodes_.push_back(std::move(leaf));
  ++leaves_;
  return nodes_.size() - 1;
}

std::size_t HoeffdingTree::route(std::span<const float> x) const {
  std::size_t i = 0;
  while (!nodes_[i].is_leaf()) {
    const Node& n = nodes_[i];
    i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return i;
}

void HoeffdingTree::learn(std::span<const float> x, int label, double weight) {
  check_input(x);
  check_label(label);
  if (weight <= 0) return;
  const std::size_t leaf_index = route(x);
  Node& leaf = nodes_[leaf_index];
  const auto k = static_cast<std::size_t>(num_labels());
  const auto l = static_cast<std::size_t>(label);
  leaf.class_weights[l] += weight;
  for (std::size_t slot = 0; slot < leaf.features.size(); ++slot)
    leaf.stats[slot * k + l].add(x[leaf.features[slot]], weight);

  const double seen = std::accumulate(leaf.class_weights.begin(), leaf.class_weights.end(), 0.0);
  if (seen - leaf.weight_at_last_attempt >= config_.grace_period) {
    attempt_split(leaf_index);
  }
}

HoeffdingTree::SplitCandidate HoeffdingTree::best_split_for(const Node& leaf, std::size_t slot,
                                                            double parent_entropy) const {
  const auto k = static_cast<std::size_t>(num_labels());
  const Gaussian* stats = leaf.stats.data() + slot * k;
  double lo = 0, hi = 0;
  bool any = false;
  double total = 0;
  for (std::size_t c = 0; c < k; ++c) {
    if (stats[c].weight == 0) continue;
    lo = any ? std::min(lo, stats[c].min) : stats[c].min;
    hi = any ? std::max(hi, stats[c].max) : stats[c].max;
    any = true;
    total += stats[c].weight;
  }
  SplitCandidate best;
  best.feature = static_cast<int>(leaf.features[slot]);
  if (!any || hi <= lo) return best;

  std::vector<double> left(k), right(k);
  const double min_branch = config_.min_branch_fraction * total;
  for (std::size_t t = 1; t <= config_.num_thresholds; ++t) {
    const double threshold = lo + (hi - lo) * static_cast<double>(t) /
                                      static_cast<double>(config_.num_thresholds + 1);
    double wl = 0, wr = 0;
    for (std::size_t c = 0; c < k; ++c) {
      left[c] = stats[c].weight_below(threshold);
      right[c] = stats[c].weight - left[c];
      wl += left[c];
      wr += right[c];
    }
    if (wl < min_branch || wr < min_branch) continue;
    const double merit = parent_entropy - (wl * entropy(left) + wr * entropy(right)) / (wl + wr);
    if (merit > best.merit) {
      best.merit = merit;
      best.threshold = threshold;
      best.left = left;
      best.right = right;
    }
  }
  return best;
}

void HoeffdingTree::attempt_split(std::size_t leaf_index) {
  Node& leaf = nodes_[leaf_index];
  const double seen = std::accumulate(leaf.class_weights.begin(), leaf.class_weights.end(), 0.0);
  leaf.weight_at_last_attempt = seen;
  const auto observed = std::count_if(leaf.class_weights.begin(), leaf.class_weights.end(),
                                      [](double w) { return w > 0; });
  if (observed < 2) return;

  const double parent = entropy(leaf.class_weights);
  SplitCandidate best, second;
  for (std::size_t slot = 0; slot < leaf.features.size(); ++slot) {
    auto candidate = best_split_for(leaf, slot, parent);
    if (candidate.merit > best.merit) {
      second = std::move(best);
      best = std::move(candidate);
    } else if (candidate.merit > second.merit) {
      second = std::move(candidate);
    }
  }
  if (best.merit <= 0) return;

  const double eps = hoeffding_bound(gain_range(), config_.split_confidence, seen);
  if (best.merit - second.merit <= eps && eps >= config_.tie_threshold) return;

  const std::size_t depth = leaf.depth + 1;
  const std::size_t left = make_leaf(std::move(best.left), depth);
  const std::size_t right = make_leaf(std::move(best.right), depth);
  Node& node = nodes_[leaf_index];  // make_leaf may reallocate
  node.feature = best.feature;
  node.threshold = best.threshold;
  node.left = left;
  node.right = right;
  node.class_weights.clear();
  node.class_weights.shrink_to_fit();
  node.features.clear();
  node.features.shrink_to_fit();
  node.stats.clear();
  node.stats.shrink_to_fit();
  --leaves_;
}

int HoeffdingTree::predict_one(std::span<const float> x) const {
  check_input(x);
  return argmax(nodes_[route(x)].class_weights);
}

std::vector<double> HoeffdingTree::score_all(std::span<const float> x) const {
  check_input(x);
  std::vector<double> dist = nodes_[route(x)].class_weights;
  const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
  for (double& v : dist) v = total > 0 ? v / total : 1.0 / static_cast<double>(dist.size());
  return dist;
}

}  // namespace driftforge
