#include <benchmark/benchmark.h>

#include <string>

#include "driftforge/adwin.hpp"
#include "driftforge/lexswap.hpp"
#include "driftforge/rng.hpp"
#include "driftforge/vectorize.hpp"

using namespace driftforge;

namespace {

const std::string kReview =
    "Good prices and friendly service, the rooms were clean and quiet but the breakfast was cold and "
    "the staff seemed tired. Great location near the old harbour, would happily stay again.";

void BM_AdwinUpdate(benchmark::State& state) {
  Rng rng(3);
  Adwin adwin(0.002);
  for (auto _ : state) benchmark::DoNotOptimize(adwin.update(rng.bernoulli(0.3) ? 1.0 : 0.0));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AdwinUpdate);

void BM_HashVectorize(benchmark::State& state) {
  const HashingVectorizer v(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(v.transform(kReview));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(kReview.size()));
}
BENCHMARK(BM_HashVectorize)->Arg(64)->Arg(384);

void BM_AdjectiveSwap(benchmark::State& state) {
  static const auto lexicon = load_wordnet_adjectives(DRIFTFORGE_WORDNET_DIR);
  for (auto _ : state) benchmark::DoNotOptimize(adjective_swap(kReview, lexicon));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(kReview.size()));
}
BENCHMARK(BM_AdjectiveSwap);

void BM_LoadWordNet(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_wordnet_adjectives(DRIFTFORGE_WORDNET_DIR));
}
BENCHMARK(BM_LoadWordNet)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
