#include "driftforge/adwin.hpp"

#include <cmath>

#include <fmt/format.h>

#include "driftforge/error.hpp"

namespace driftforge {

Adwin::Adwin(double delta, std::size_t max_buckets) : delta_(delta), max_buckets_(max_buckets) {
  if (!(delta > 0 && delta < 1)) throw Error(fmt::format("ADWIN delta must lie in (0, 1), got {}", delta));
  if (max_buckets < 2) throw Error("ADWIN needs at least two buckets per row");
}

std::size_t Adwin::bucket_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

bool Adwin::update(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(fmt::format("ADWIN input {} outside [0, 1]", x));
  insert(x);
  compress();
  const bool changed = detect_change();
  if (changed) ++detections_;
  return changed;
}

void Adwin::insert(double x) {
  if (rows_.empty()) rows_.emplace_back();
  rows_[0].push_front({x, 0.0});
  if (width_ > 0) {
    const double delta = x - mean();
    m2_ += delta * delta * static_cast<double>(width_) / static_cast<double>(width_ + 1);
  }
  ++width_;
  total_ += x;
}

void Adwin::compress() {
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() <= max_buckets_) break;
    // Merge the two oldest buckets of row r into one bucket of row r + 1.
    const double n = std::ldexp(1.0, static_cast<int>(r));
    const Bucket older = rows_[r].back();
    rows_[r].pop_back();
    const Bucket newer = rows_[r].back();
    rows_[r].pop_back();
    const double diff = older.total / n - newer.total / n;
    const Bucket merged{older.total + newer.total, older.m2 + newer.m2 + diff * diff * n * n / (2 * n)};
    if (r + 1 == rows_.size()) rows_.emplace_back();
    rows_[r + 1].push_front(merged);
  }
}

void Adwin::drop_oldest() {
  auto& row = rows_.back();
  const std::size_t r = rows_.size() - 1;
  const Bucket b = row.back();
  row.pop_back();
  const auto n = static_cast<std::size_t>(1) << r;
  const std::size_t rest = width_ - n;
  if (rest == 0) {
    total_ = m2_ = 0.0;
  } else {
    const double rest_mean = (total_ - b.total) / static_cast<double>(rest);
    const double diff = b.total / static_cast<double>(n) - rest_mean;
    m2_ -= b.m2 + diff * diff * static_cast<double>(n) * static_cast<double>(rest) / static_cast<double>(width_);
    if (m2_ < 0) m2_ = 0;
    total_ -= b.total;
  }
  width_ = rest;
  while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

bool Adwin::detect_change() {
  bool changed = false;
  bool cut = true;
  while (cut && width_ > 2 * kMinSubWindow) {
    cut = false;
    const std::size_t tests = bucket_count() > 1 ? bucket_count() - 1 : 1;
    const double log_term = std::log(2.0 * static_cast<double>(tests) / delta_);
    const double variance = this->variance();

    std::size_t n0 = 0;
    double s0 = 0;
    // Oldest bucket first: last row, back of each deque.
    for (std::size_t r = rows_.size(); r-- > 0 && !cut;) {
      const auto size = static_cast<std::size_t>(1) << r;
      for (auto it = rows_[r].rbegin(); it != rows_[r].rend(); ++it) {
        n0 += size;
        s0 += it->total;
        const std::size_t n1 = width_ - n0;
        if (n1 < kMinSubWindow) break;
        if (n0 < kMinSubWindow) continue;
        const double m = 1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1);
        const double eps = std::sqrt(2.0 * m * variance * log_term) + 2.0 / 3.0 * m * log_term;
        const double diff = std::abs(s0 / static_cast<double>(n0) - (total_ - s0) / static_cast<double>(n1));
        if (diff >= eps) {
          cut = true;
          break;
        }
      }
    }
    if (cut) {
      drop_oldest();
      changed = true;
    }
  }
  return changed;
}

}  // namespace driftforge
