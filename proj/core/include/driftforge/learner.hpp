#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace driftforge {

// Incremental classifier over dense vectors with labels in [0, K).
// learn_one consumes one instance and keeps no reference to it;
// predict_one never changes the model.
class Classifier {
 public:
  Classifier(std::size_t dim, int num_labels);
  virtual ~Classifier() = default;

  virtual void learn_one(std::span<const float> x, int label) = 0;
  virtual int predict_one(std::span<const float> x) const = 0;
  // Per-label scores; argmax agrees with predict_one.
  virtual std::vector<double> score_all(std::span<const float> x) const;
  // False until predict_one is defined (Gaussian NB before its first instance).
  virtual bool trained() const { return true; }
  virtual std::string name() const = 0;

  std::size_t dim() const { return dim_; }
  int num_labels() const { return num_labels_; }

 protected:
  void check_input(std::span<const float> x) const;
  void check_label(int label) const;

 private:
  std::size_t dim_;
  int num_labels_;
};

// Index of the largest score; ties go to the smallest index.
int argmax(std::span<const double> scores);

}  // namespace driftforge
