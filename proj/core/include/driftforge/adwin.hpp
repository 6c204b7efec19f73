#pragma once

#include <cstddef>
#include <deque>
#include <vector>

namespace driftforge {

// ADWIN adaptive windowing change detector over values in [0, 1].
//
// The window is stored as an exponential histogram: row r holds up to
// max_buckets buckets of 2^r samples each, newest first. After each insert
// every split between buckets is tested, and the oldest bucket is dropped
// while the two sub-window means differ by at least
//   eps = sqrt(2 m V ln(2/delta')) + (2/3) m ln(2/delta'),
// with m = 1/n0 + 1/n1 (the inverse harmonic-mean size), V the window
// variance and delta' = delta / (number of split points tested).
class Adwin {
 public:
  explicit Adwin(double delta = 0.002, std::size_t max_buckets = 5);

  // Returns true when the window shrank.
  bool update(double x);

  double mean() const { return width_ == 0 ? 0.0 : total_ / static_cast<double>(width_); }
  double variance() const { return width_ == 0 ? 0.0 : m2_ / static_cast<double>(width_); }
  double total() const { return total_; }
  std::size_t width() const { return width_; }
  std::size_t detections() const { return detections_; }
  std::size_t bucket_count() const;
  double delta() const { return delta_; }

  // Sub-windows shorter than this are never tested.
  static constexpr std::size_t kMinSubWindow = 5;

 private:
  struct Bucket {
    double total = 0.0;
    double m2 = 0.0;
  };

  void insert(double x);
  void compress();
  bool detect_change();
  void drop_oldest();

  double delta_;
  std::size_t max_buckets_;
  std::vector<std::deque<Bucket>> rows_;
  std::size_t width_ = 0;
  double total_ = 0.0;
  double m2_ = 0.0;
  std::size_t detections_ = 0;
};

}  // namespace driftforge
