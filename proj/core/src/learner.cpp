#include "driftforge/learner.hpp"

#include <cmath>

#include <fmt/format.h>

#include "driftforge/error.hpp"

namespace driftforge {

Classifier::Classifier(std::size_t dim, int num_labels) : dim_(dim), num_labels_(num_labels) {
  if (dim == 0) throw Error("classifier dimension must be at least 1");
  if (num_labels < 1) throw Error("classifier needs at least one label");
}

std::vector<double> Classifier::score_all(std::span<const float> x) const {
  std::vector<double> scores(static_cast<std::size_t>(num_labels_), 0.0);
  scores[static_cast<std::size_t>(predict_one(x))] = 1.0;
  return scores;
}

void Classifier::check_input(std::span<const float> x) const {
  if (x.size() != dim_) throw Error(fmt::format("input has dimension {}, model expects {}", x.size(), dim_));
}

void Classifier::check_label(int label) const {
  if (label < 0 || label >= num_labels_)
    throw Error(fmt::format("label {} outside [0, {})", label, num_labels_));
}

int argmax(std::span<const double> scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

}  // namespace driftforge
