#include <benchmark/benchmark.h>

#include <vector>

#include "driftforge/experiment.hpp"
#include "driftforge/rng.hpp"
#include "driftforge/vectorize.hpp"

using namespace driftforge;

namespace {

struct Batch {
  std::vector<Vector> x;
  std::vector<int> y;
};

Batch make_batch(std::size_t n, std::size_t dim, int k) {
  Rng rng(42);
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(k)));
    Vector v(dim);
    for (std::size_t j = 0; j < dim; ++j) v[j] = static_cast<float>(rng.normal() * 0.05 + (j % k == static_cast<std::size_t>(label) ? 0.03 : 0.0));
    b.x.push_back(std::move(v));
    b.y.push_back(label);
  }
  return b;
}

// One test-then-train step per iteration on 384-d inputs, K = 5.
void BM_TestThenTrain(benchmark::State& state) {
  LearnerSpec spec;
  spec.kind = static_cast<LearnerKind>(state.range(0));
  const auto batch = make_batch(4096, 384, 5);
  auto learner = make_learner(spec, 384, 5, 1);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& x = batch.x[i % batch.x.size()];
    benchmark::DoNotOptimize(learner->trained() ? learner->predict_one(x) : 0);
    learner->learn_one(x, batch.y[i % batch.y.size()]);
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
  state.SetLabel(std::string(to_string(spec.kind)));
}
BENCHMARK(BM_TestThenTrain)->DenseRange(0, 3);

}  // namespace
