#include "synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "driftforge/rng.hpp"

namespace driftforge::fixtures {

namespace fs = std::filesystem;

namespace {

constexpr const char* kWords[] = {"food",  "room",   "host",  "great", "bad",   "clean", "quiet", "view",
                                  "staff", "coffee", "price", "late",  "happy", "rude",  "small", "nice"};

std::string random_text(Rng& rng) {
  const auto n = 3 + rng.uniform_index(6);
  std::string text;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += kWords[rng.uniform_index(std::size(kWords))];
  }
  return text;
}

Timestamp year_start(int year) {
  return parse_timestamp(fmt::format("{:04}-01-01", year));
}

}  // namespace

Corpus make_corpus(std::size_t n, const std::vector<double>& fractions, int first_year, int last_year,
                   std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> counts(fractions.size());
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < fractions.size(); ++c) {
    const double exact = fractions[c] * static_cast<double>(n);
    counts[c] = static_cast<std::size_t>(exact);
    assigned += counts[c];
    rem.emplace_back(exact - static_cast<double>(counts[c]), c);
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[rem[i % rem.size()].second];

  std::vector<int> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) labels.insert(labels.end(), counts[c], static_cast<int>(c));
  for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[rng.uniform_index(i)]);

  const Timestamp lo = year_start(first_year);
  const Timestamp span = year_start(last_year + 1) - lo;
  std::vector<Timestamp> times(n);
  for (auto& t : times) t = lo + static_cast<Timestamp>(rng.uniform_index(static_cast<std::uint64_t>(span)));
  std::sort(times.begin(), times.end());

  Corpus corpus;
  corpus.name = "synthetic";
  corpus.num_labels = static_cast<int>(fractions.size());
  corpus.instances.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    corpus.instances.push_back({fmt::format("r{}", i), times[i], random_text(rng), labels[i]});
  return corpus;
}

Corpus random_stream(std::size_t n, int k, std::uint64_t seed) {
  Rng rng(seed);
  Corpus corpus;
  corpus.name = "random";
  corpus.num_labels = k;
  const Timestamp base = year_start(2015);
  for (std::size_t i = 0; i < n; ++i) {
    corpus.instances.push_back({fmt::format("r{}", i), base + static_cast<Timestamp>(i) * 600, random_text(rng),
                                static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)))});
  }
  return corpus;
}

VectorStream gaussian_two_cluster(std::size_t n, std::size_t dim, double offset, double sigma,
                                  std::uint64_t seed) {
  Rng rng(seed);
  VectorStream out;
  out.stream.stream = random_stream(n, 2, mix_seed(seed, 1));
  out.vectors.reserve(n);
  for (auto& inst : out.stream.stream.instances) {
    inst.label = rng.bernoulli(0.5) ? 1 : 0;
    const double mu = inst.label == 1 ? offset : -offset;
    Vector v(dim);
    for (auto& x : v) x = static_cast<float>(rng.normal(mu, sigma));
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double mean_window_f1(const RunResult& run, std::size_t first, std::size_t last) {
  double sum = 0.0;
  for (std::size_t w = first; w <= last; ++w) sum += run.windows.at(w).macro_f1;
  return sum / static_cast<double>(last - first + 1);
}

std::size_t windows_to_recovery(const RunResult& run, std::size_t first_post, double baseline, double tol,
                                std::size_t limit) {
  for (std::size_t k = 0; k < limit && first_post + k < run.windows.size(); ++k) {
    if (run.windows[first_post + k].macro_f1 >= baseline - tol) return k;
  }
  return limit;
}

std::string fresh_temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("driftforge_{}", name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void write_text(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream(path, std::ios::binary) << content;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace driftforge::fixtures
