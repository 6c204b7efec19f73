#include <gtest/gtest.h>

#include <sstream>

#include "driftforge/error.hpp"
#include "driftforge/evaluate.hpp"
#include "driftforge/naive_bayes.hpp"
#include "driftforge/rng.hpp"
#include "synthetic.hpp"

using namespace driftforge;

namespace {

// Predicts labels[x[0]]: x[0] carries the instance index.
class OracleStub final : public Classifier {
 public:
  OracleStub(std::vector<int> labels, int k) : Classifier(1, k), labels_(std::move(labels)) {}
  void learn_one(std::span<const float> x, int label) override {
    learned_.push_back(static_cast<std::size_t>(x[0]));
    EXPECT_EQ(label, labels_[static_cast<std::size_t>(x[0])]);
  }
  int predict_one(std::span<const float> x) const override {
    const auto i = static_cast<std::size_t>(x[0]);
    // Test-then-train: instance i is predicted before it is learned.
    EXPECT_EQ(learned_.size(), i);
    return labels_[i];
  }
  std::string name() const override { return "oracle"; }

 private:
  std::vector<int> labels_;
  std::vector<std::size_t> learned_;
};

// Predicts its seeded random label; ignores training.
class RandomStub final : public Classifier {
 public:
  RandomStub(int k, std::uint64_t seed) : Classifier(1, k), rng_(seed) {}
  void learn_one(std::span<const float>, int) override { next_ = static_cast<int>(rng_.uniform_index(num_labels())); }
  int predict_one(std::span<const float>) const override { return next_; }
  std::string name() const override { return "random"; }

 private:
  Rng rng_;
  int next_ = 0;
};

std::vector<Vector> index_vectors(std::size_t n) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(Vector{static_cast<float>(i)});
  return out;
}

DriftedStream stream_of(const Corpus& c) {
  DriftedStream d;
  d.stream = c;
  return d;
}

ConfusionMatrix matrix(int k, const std::vector<std::vector<int>>& counts) {
  ConfusionMatrix cm(k);
  for (int t = 0; t < k; ++t)
    for (int p = 0; p < k; ++p)
      for (int n = 0; n < counts[t][p]; ++n) cm.add(t, p);
  return cm;
}

}  // namespace

TEST(Metrics, MacroF1Oracle) {
  const auto cm = matrix(2, {{5, 5}, {2, 8}});
  const double p0 = 5.0 / 7.0, r0 = 5.0 / 10.0;
  const double p1 = 8.0 / 13.0, r1 = 8.0 / 10.0;
  const double f0 = 2 * p0 * r0 / (p0 + r0);
  const double f1 = 2 * p1 * r1 / (p1 + r1);
  EXPECT_NEAR(macro_f1(cm), (f0 + f1) / 2, 1e-15);
  EXPECT_DOUBLE_EQ(accuracy(cm), 13.0 / 20.0);
}

TEST(Metrics, PerfectAndAllWrong) {
  for (int k = 2; k <= 6; ++k) {
    ConfusionMatrix diag(k), wrong(k);
    for (int c = 0; c < k; ++c) {
      diag.add(c, c);
      wrong.add(c, (c + 1) % k);
    }
    EXPECT_DOUBLE_EQ(macro_f1(diag), 1.0);
    EXPECT_DOUBLE_EQ(accuracy(diag), 1.0);
    EXPECT_DOUBLE_EQ(macro_f1(wrong), 0.0);
  }
}

TEST(Metrics, UnobservedLabelsAreSkipped) {
  // Label 2 never occurs; label 1 only as a wrong prediction (F1 0).
  const auto cm = matrix(3, {{3, 1, 0}, {0, 0, 0}, {0, 0, 0}});
  const double p0 = 1.0, r0 = 0.75;
  EXPECT_NEAR(macro_f1(cm), (2 * p0 * r0 / (p0 + r0) + 0.0) / 2, 1e-15);
}

TEST(Metrics, EmptyMatrixThrows) {
  EXPECT_THROW(macro_f1(ConfusionMatrix(3)), Error);
  EXPECT_THROW(accuracy(ConfusionMatrix(3)), Error);
  ConfusionMatrix cm(2);
  EXPECT_THROW(cm.add(2, 0), Error);
}

TEST(Prequential, OracleIsPerfect) {
  const auto c = fixtures::random_stream(2500, 4, 3);
  std::vector<int> labels;
  for (const auto& i : c.instances) labels.push_back(i.label);
  OracleStub oracle(labels, 4);
  const auto r = prequential_run(stream_of(c), index_vectors(2500), oracle);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(r.macro_f1, 1.0);
  ASSERT_EQ(r.windows.size(), 3u);
  EXPECT_EQ(r.windows[0].size, 1000u);
  EXPECT_EQ(r.windows[1].size, 1000u);
  EXPECT_EQ(r.windows[2].size, 500u);
  EXPECT_GE(r.elapsed_seconds, 0.0);
}

TEST(Prequential, WindowsSumToCumulative) {
  const auto c = fixtures::random_stream(3456, 3, 4);
  RandomStub learner(3, 9);
  PrequentialOptions o;
  o.window = 500;
  o.record_predictions = true;
  const auto r = prequential_run(stream_of(c), index_vectors(c.size()), learner, o);
  ConfusionMatrix sum(3);
  std::size_t sizes = 0;
  for (const auto& w : r.windows) {
    sum += w.matrix;
    sizes += w.size;
    EXPECT_DOUBLE_EQ(w.accuracy, accuracy(w.matrix));
  }
  EXPECT_EQ(sum, r.cumulative);
  EXPECT_EQ(sizes, c.size());
  EXPECT_EQ(r.predictions.size(), c.size());
}

TEST(Prequential, WindowsAreIndependent) {
  // Corrupting labels before a window boundary leaves later windows intact.
  const auto c = fixtures::random_stream(3000, 3, 5);
  auto corrupted = c;
  for (std::size_t i = 0; i < 1000; ++i) corrupted.instances[i].label = 0;
  RandomStub a(3, 1), b(3, 1);
  const auto ra = prequential_run(stream_of(c), index_vectors(3000), a);
  const auto rb = prequential_run(stream_of(corrupted), index_vectors(3000), b);
  EXPECT_NE(ra.windows[0].matrix, rb.windows[0].matrix);
  for (std::size_t w = 1; w < 3; ++w) EXPECT_EQ(ra.windows[w].matrix, rb.windows[w].matrix);
}

TEST(Prequential, UntrainedGnbPredictsZero) {
  auto c = fixtures::random_stream(10, 3, 6);
  c.instances[0].label = 2;
  GaussianNaiveBayes g(4, 3);
  PrequentialOptions o;
  o.record_predictions = true;
  const auto r = prequential_run(stream_of(c), HashingVectorizer(4, 0), g, o);
  EXPECT_EQ(r.predictions[0], 0);
  EXPECT_EQ(r.cumulative.total(), 10u);
}

TEST(Prequential, OfflineRecomputation) {
  Rng rng(31);
  for (int run = 0; run < 20; ++run) {
    const int k = 2 + static_cast<int>(rng.uniform_index(4));
    const auto c = fixtures::random_stream(1 + rng.uniform_index(3000), k, rng.next());
    GaussianNaiveBayes g(16, k);
    PrequentialOptions o;
    o.record_predictions = true;
    o.window = 1 + rng.uniform_index(700);
    const auto r = prequential_run(stream_of(c), HashingVectorizer(16, 3), g, o);
    ConfusionMatrix cm(k);
    for (std::size_t i = 0; i < c.size(); ++i) cm.add(c.instances[i].label, r.predictions[i]);
    EXPECT_NEAR(r.macro_f1, macro_f1(cm), 1e-9);
    EXPECT_NEAR(r.accuracy, accuracy(cm), 1e-9);
  }
}

TEST(Prequential, InputErrors) {
  const auto c = fixtures::random_stream(10, 2, 1);
  GaussianNaiveBayes g(1, 2);
  EXPECT_THROW(prequential_run(stream_of(c), index_vectors(9), g), Error);
  GaussianNaiveBayes g3(1, 3);
  EXPECT_THROW(prequential_run(stream_of(c), index_vectors(10), g3), Error);
  PrequentialOptions zero;
  zero.window = 0;
  EXPECT_THROW(prequential_run(stream_of(c), index_vectors(10), g, zero), Error);
  GaussianNaiveBayes g4(4, 2);
  EXPECT_THROW(prequential_run(stream_of(c), HashingVectorizer(8), g4), Error);
}

TEST(Prequential, NormalizeOption) {
  auto c = fixtures::random_stream(50, 2, 1);
  std::vector<Vector> raw, unit;
  Rng rng(2);
  for (std::size_t i = 0; i < 50; ++i) {
    Vector v{static_cast<float>(rng.normal()), static_cast<float>(rng.normal())};
    raw.push_back(v);
    l2_normalize(v);
    unit.push_back(v);
  }
  GaussianNaiveBayes a(2, 2), b(2, 2);
  PrequentialOptions o;
  o.normalize = true;
  o.record_predictions = true;
  const auto ra = prequential_run(stream_of(c), raw, a, o);
  o.normalize = false;
  const auto rb = prequential_run(stream_of(c), unit, b, o);
  EXPECT_EQ(ra.predictions, rb.predictions);
}

TEST(Csv, HeadersAndRows) {
  KeyedRun run;
  run.key = {"yelp", "class_swap", "GNB", 3};
  run.result.accuracy = 0.5;
  run.result.macro_f1 = 0.25;
  run.result.elapsed_seconds = 1.23456;
  WindowMetrics w;
  w.index = 0;
  w.size = 1000;
  w.accuracy = 0.1;
  w.macro_f1 = 1.0 / 3.0;
  run.result.windows.push_back(w);
  std::ostringstream windowed, summary, markers;
  write_windowed_csv(windowed, {run});
  write_summary_csv(summary, {run});
  write_markers_csv(markers, {{"yelp", "class_swap", 3, {{50000, DriftKind::Swap}}}});
  EXPECT_EQ(windowed.str(),
            "dataset,scenario,learner,seed,window_index,window_size,accuracy,macro_f1\n"
            "yelp,class_swap,GNB,3,0,1000,0.1,0.3333333333333333\n");
  EXPECT_EQ(summary.str(),
            "dataset,scenario,learner,seed,accuracy,macro_f1,elapsed_seconds\n"
            "yelp,class_swap,GNB,3,0.5,0.25,1.235\n");
  EXPECT_EQ(markers.str(), "dataset,scenario,seed,index,kind\nyelp,class_swap,3,50000,swap\n");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(split_csv_line("\"a,\"\"b\",c"), (std::vector<std::string>{"a,\"b", "c"}));
}
