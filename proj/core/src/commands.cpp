#include "driftforge/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "driftforge/error.hpp"
#include "driftforge/evaluate.hpp"
#include "driftforge/lexswap.hpp"
#include "driftforge/vectorize.hpp"

namespace driftforge {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

class Logger {
 public:
  explicit Logger(std::ostream* out) : out_(out) {}

  void line(const std::string& msg) {
    if (!out_) return;
    std::lock_guard lock(mu_);
    *out_ << msg << '\n';
    out_->flush();
  }

 private:
  std::ostream* out_;
  std::mutex mu_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open \"{}\"", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json read_json_file(const std::string& path) {
  try {
    return ordered_json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

std::string streams_dir(const CommandOptions& o) { return (fs::path(o.out_dir) / "streams").string(); }
std::string metrics_dir(const CommandOptions& o) { return (fs::path(o.out_dir) / "metrics").string(); }

std::string in_dir(const std::string& dir, const std::string& file) { return (fs::path(dir) / file).string(); }

}  // namespace

std::string stream_basename(const std::string& dataset, const std::string& scenario, std::uint64_t seed) {
  return fmt::format("{}_{}_{}", dataset, scenario, seed);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + fmt::format(".tmp{}", std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot write \"{}\"", tmp.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(fmt::format("write to \"{}\" failed", tmp.string()));
    }
  }
  fs::rename(tmp, target);
}

DriftedStream load_drifted_stream(const std::string& jsonl_path, const std::string& drifts_path, int num_labels) {
  FieldMapping mapping;
  mapping.num_labels = num_labels;
  DriftedStream ds;
  ds.stream = load_corpus(jsonl_path, mapping);
  ds.source = jsonl_path;
  std::ifstream in(drifts_path);
  if (!in) throw Error(fmt::format("cannot open \"{}\"", drifts_path));
  try {
    ds.annotations = read_annotations(in);
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", drifts_path, e.what()));
  }
  return ds;
}

std::vector<std::string> run_parallel(std::size_t count, std::size_t jobs,
                                      const std::function<void(std::size_t)>& task) {
  std::vector<std::string> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    worker();
    return errors;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  return errors;
}

CommandReport cmd_generate(const ExperimentConfig& config, const CommandOptions& options) {
  validate(config, ConfigUse::Generate);
  Logger log(options.log);
  CommandReport report;

  Corpus corpus = load_corpus(config.corpus_path, config.mapping);
  corpus.name = config.dataset;
  log.line(fmt::format("loaded {} instances from {} (K = {})", corpus.size(), config.corpus_path, corpus.num_labels));

  std::optional<AdjectiveLexicon> lexicon;
  if (config.needs_wordnet()) {
    lexicon = load_wordnet_adjectives(config.wordnet_dir);
    log.line(fmt::format("loaded {} WordNet adjectives", lexicon->size()));
  }

  const std::string dir = streams_dir(options);
  fs::create_directories(dir);

  struct Outcome {
    std::vector<std::string> written;
    std::vector<std::string> failures;
    std::vector<ordered_json> entries;
  };
  std::vector<Outcome> outcomes(config.seeds.size());

  const auto errors = run_parallel(config.seeds.size(), options.jobs, [&](std::size_t i) {
    const std::uint64_t seed = config.seeds[i];
    const Corpus subset = sample_stratified_temporal(corpus, {config.target_length, seed});
    for (const auto& scenario : config.scenarios) {
      const std::string base = stream_basename(config.dataset, scenario.name, seed);
      try {
        DriftSpec spec = scenario.drift;
        spec.seed = seed;
        DriftDependencies deps;
        deps.lexicon = lexicon ? &*lexicon : nullptr;
        deps.source = &corpus;
        deps.sample_length = config.target_length;
        const DriftedStream ds = apply_drift(subset, spec, deps);
        for (const auto& w : ds.warnings) log.line(fmt::format("{}: warning: {}", base, w));

        std::ostringstream jsonl, drifts;
        write_corpus(jsonl, ds.stream.instances);
        write_annotations(drifts, ds.annotations);
        const std::string jsonl_path = in_dir(dir, base + ".jsonl");
        const std::string drifts_path = in_dir(dir, base + ".drifts");
        write_file_atomic(jsonl_path, jsonl.str());
        write_file_atomic(drifts_path, drifts.str());
        outcomes[i].written.push_back(jsonl_path);
        outcomes[i].written.push_back(drifts_path);

        ordered_json entry;
        entry["scenario"] = scenario.name;
        entry["seed"] = seed;
        entry["method"] = std::string(to_string(spec.method));
        entry["length"] = ds.stream.size();
        entry["annotations"] = ds.annotations.size();
        if (spec.method == DriftMethod::TimeSliceRemoval)
          entry["removed_years"] = std::vector<int>(ds.spec.removed_years.begin(), ds.spec.removed_years.end());
        outcomes[i].entries.push_back(std::move(entry));
        log.line(fmt::format("wrote {} ({} instances, {} drift points)", base, ds.stream.size(), ds.annotations.size()));
      } catch (const std::exception& e) {
        outcomes[i].failures.push_back(fmt::format("{}: {}", base, e.what()));
      }
    }
  });

  ordered_json manifest;
  manifest["dataset"] = config.dataset;
  manifest["num_labels"] = corpus.num_labels;
  manifest["target_length"] = config.target_length;
  manifest["streams"] = ordered_json::array();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!errors[i].empty()) {
      for (const auto& scenario : config.scenarios)
        report.failures.push_back(
            fmt::format("{}: {}", stream_basename(config.dataset, scenario.name, config.seeds[i]), errors[i]));
    }
    for (auto& w : outcomes[i].written) report.written.push_back(std::move(w));
    for (auto& f : outcomes[i].failures) report.failures.push_back(std::move(f));
    for (auto& e : outcomes[i].entries) manifest["streams"].push_back(std::move(e));
  }
  const std::string manifest_path = in_dir(dir, config.dataset + "_manifest.json");
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  report.written.push_back(manifest_path);
  for (const auto& f : report.failures) log.line("failed: " + f);
  return report;
}

CommandReport cmd_evaluate(const ExperimentConfig& config, const CommandOptions& options) {
  validate(config, ConfigUse::Evaluate);
  Logger log(options.log);
  CommandReport report;

  const std::string sdir = streams_dir(options);
  const std::string stream_manifest = in_dir(sdir, config.dataset + "_manifest.json");
  if (!fs::is_regular_file(stream_manifest)) {
    report.failures.push_back(fmt::format("no generated streams: \"{}\" is missing", stream_manifest));
    for (const auto& f : report.failures) log.line("failed: " + f);
    return report;
  }
  const int num_labels = read_json_file(stream_manifest).at("num_labels").get<int>();

  struct StreamRef {
    std::string scenario;
    std::uint64_t seed;
    std::string base;
  };
  std::vector<StreamRef> streams;
  std::vector<StreamMarkers> markers;
  for (const auto& scenario : config.scenarios) {
    for (const auto seed : config.seeds) {
      const std::string base = stream_basename(config.dataset, scenario.name, seed);
      const std::string jsonl = in_dir(sdir, base + ".jsonl");
      const std::string drifts = in_dir(sdir, base + ".drifts");
      if (!fs::is_regular_file(jsonl) || !fs::is_regular_file(drifts)) {
        report.failures.push_back(fmt::format("{}: stream or drift sidecar missing", base));
        continue;
      }
      if (config.vectorizer.type == VectorizerSpec::Type::Embedding &&
          !fs::is_regular_file(in_dir(config.vectorizer.embedding_dir, base + ".dfe"))) {
        report.failures.push_back(fmt::format("{}: embedding file missing", base));
        continue;
      }
      std::ifstream in(drifts);
      try {
        markers.push_back({config.dataset, scenario.name, seed, read_annotations(in)});
      } catch (const Error& e) {
        report.failures.push_back(fmt::format("{}: {}", base, e.what()));
        continue;
      }
      streams.push_back({scenario.name, seed, base});
    }
  }

  const std::size_t n_learners = config.learners.size();
  std::vector<KeyedRun> runs(streams.size() * n_learners);
  PrequentialOptions popts;
  popts.window = config.window;
  popts.normalize = config.normalize_embeddings;

  const auto errors = run_parallel(runs.size(), options.jobs, [&](std::size_t t) {
    const StreamRef& ref = streams[t / n_learners];
    const LearnerSpec& spec = config.learners[t % n_learners];
    const DriftedStream ds = load_drifted_stream(in_dir(sdir, ref.base + ".jsonl"),
                                                 in_dir(sdir, ref.base + ".drifts"), num_labels);
    KeyedRun& run = runs[t];
    run.key = {config.dataset, ref.scenario, std::string(to_string(spec.kind)), ref.seed};
    if (config.vectorizer.type == VectorizerSpec::Type::Hashing) {
      const HashingVectorizer vectorizer(config.vectorizer.dim, config.vectorizer.seed);
      auto learner = make_learner(spec, vectorizer.dim(), num_labels, ref.seed);
      run.result = prequential_run(ds, vectorizer, *learner, popts);
    } else {
      const EmbeddingSet emb = load_embedding_file(in_dir(config.vectorizer.embedding_dir, ref.base + ".dfe"));
      auto learner = make_learner(spec, emb.dim, num_labels, ref.seed);
      run.result = prequential_run(ds, emb.vectors, *learner, popts);
    }
    log.line(fmt::format("{} {}: accuracy {:.4f}, macro F1 {:.4f}, {:.1f}s", ref.base, run.key.learner,
                         run.result.accuracy, run.result.macro_f1, run.result.elapsed_seconds));
  });

  std::vector<KeyedRun> done;
  for (std::size_t t = 0; t < runs.size(); ++t) {
    if (errors[t].empty()) {
      done.push_back(std::move(runs[t]));
    } else {
      report.failures.push_back(fmt::format("{} {}: {}", streams[t / n_learners].base,
                                            to_string(config.learners[t % n_learners].kind), errors[t]));
    }
  }

  const std::string mdir = metrics_dir(options);
  std::ostringstream windowed, summary, drifts;
  write_windowed_csv(windowed, done);
  write_summary_csv(summary, done);
  write_markers_csv(drifts, markers);
  const std::string prefix = config.dataset + "_";
  for (const auto& [name, body] : {std::pair{"windowed.csv", windowed.str()}, std::pair{"summary.csv", summary.str()},
                                   std::pair{"drifts.csv", drifts.str()}}) {
    const std::string path = in_dir(mdir, prefix + name);
    write_file_atomic(path, body);
    report.written.push_back(path);
  }
  ordered_json manifest;
  manifest["dataset"] = config.dataset;
  manifest["num_labels"] = num_labels;
  manifest["window"] = config.window;
  manifest["runs"] = done.size();
  const std::string manifest_path = in_dir(mdir, prefix + "manifest.json");
  write_file_atomic(manifest_path, manifest.dump(2) + "\n");
  report.written.push_back(manifest_path);
  for (const auto& f : report.failures) log.line("failed: " + f);
  return report;
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path, const char* header) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open \"{}\"", path));
  std::string line;
  if (!std::getline(in, line) || line != header) throw Error(fmt::format("{}: unexpected header", path));
  const std::size_t columns = split_csv_line(header).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != columns)
      throw Error(fmt::format("{}: line {} has {} fields, expected {}", path, line_no, fields.size(), columns));
    rows.push_back(std::move(fields));
  }
  return rows;
}

std::uint64_t to_u64(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(fmt::format("{}: \"{}\" is not a non-negative integer", where, s));
  }
}

}  // namespace

CommandReport cmd_report(const std::string& dir, std::ostream* log_out) {
  Logger log(log_out);
  CommandReport report;

  std::vector<std::string> manifests;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.ends_with("_manifest.json")) manifests.push_back(entry.path().string());
    }
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) throw Error(fmt::format("no metrics manifests in \"{}\"", dir));

  std::optional<int> num_labels;
  std::optional<std::size_t> window;
  std::vector<std::string> datasets;
  for (const auto& path : manifests) {
    const auto m = read_json_file(path);
    const int k = m.at("num_labels").get<int>();
    const auto w = m.at("window").get<std::size_t>();
    if (num_labels && *num_labels != k)
      throw Error(fmt::format("{}: K = {} differs from K = {} of the other datasets", path, k, *num_labels));
    if (window && *window != w)
      throw Error(fmt::format("{}: window {} differs from window {} of the other datasets", path, w, *window));
    num_labels = k;
    window = w;
    datasets.push_back(m.at("dataset").get<std::string>());
  }

  std::ostringstream out;
  out << kReportHeader << '\n';
  std::size_t rows_written = 0;
  for (const auto& dataset : datasets) {
    const auto windowed = read_csv(in_dir(dir, dataset + "_windowed.csv"), kWindowedHeader);
    const auto drift_rows = read_csv(in_dir(dir, dataset + "_drifts.csv"), kMarkersHeader);

    // (scenario, seed, window) -> kinds
    std::map<std::tuple<std::string, std::uint64_t, std::uint64_t>, std::vector<std::string>> marks;
    for (const auto& r : drift_rows) {
      const auto index = to_u64(r[3], dataset + "_drifts.csv");
      marks[{r[1], to_u64(r[2], dataset + "_drifts.csv"), index / *window}].push_back(r[4]);
    }
    for (const auto& r : windowed) {
      const std::string where = dataset + "_windowed.csv";
      const auto seed = to_u64(r[3], where);
      const auto w = to_u64(r[4], where);
      std::string kinds;
      if (const auto it = marks.find({r[1], seed, w}); it != marks.end()) {
        for (const auto& k : it->second) kinds += (kinds.empty() ? "" : ";") + k;
      }
      const std::string series = fmt::format("{}/{}/{}/{}", r[0], r[1], r[2], seed);
      out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", csv_field(series), csv_field(r[0]), csv_field(r[1]),
                         csv_field(r[2]), r[3], r[4], r[5], r[6], r[7], kinds);
      ++rows_written;
    }
  }
  const std::string path = in_dir(dir, "report.csv");
  write_file_atomic(path, out.str());
  report.written.push_back(path);
  log.line(fmt::format("wrote {} rows for {} dataset(s) to {}", rows_written, datasets.size(), path));
  return report;
}

}  // namespace driftforge
