#include "driftforge/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "driftforge/error.hpp"
#include "driftforge/naive_bayes.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class ObjectReader {
 public:
  ObjectReader(const json& object, std::string where) : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) throw Error(fmt::format("{}: expected an object", where_));
  }

  template <typename T>
  void read(const char* key, T& target) {
    seen_.insert(key);
    const auto it = object_.find(key);
    if (it == object_.end() || it->is_null()) return;
    try {
      target = it->get<T>();
    } catch (const json::exception&) {
      throw Error(fmt::format("{}.{}: wrong type ({})", where_, key, it->dump()));
    }
  }

  const json* child(const char* key) {
    seen_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() || it->is_null() ? nullptr : &*it;
  }

  void finish() const {
    for (const auto& [key, value] : object_.items()) {
      if (!seen_.contains(key)) throw Error(fmt::format("{}: unknown key \"{}\"", where_, key));
    }
  }

 private:
  const json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string resolve_path(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(base_dir) / p).lexically_normal().string();
}

void apply_preset(const std::string& preset, FieldMapping& mapping) {
  if (preset == "canonical") return;
  if (preset == "yelp") {
    mapping.id_field = "review_id";
    mapping.timestamp_field = "date";
    mapping.text_field = "text";
    mapping.label_field = "stars";
    mapping.label_offset = -1;
    mapping.num_labels = 5;
    return;
  }
  if (preset == "airbnb") {
    mapping.id_field = "id";
    mapping.timestamp_field = "date";
    mapping.text_field = "comments";
    mapping.label_field = "sentiment";
    mapping.label_values = {"negative", "neutral", "positive"};
    mapping.num_labels = 3;
    return;
  }
  throw Error(fmt::format("corpus.preset: unknown preset \"{}\" (canonical, yelp, airbnb)", preset));
}

LearnerSpec parse_learner(const json& entry, std::size_t index) {
  const std::string where = fmt::format("learners[{}]", index);
  LearnerSpec spec;
  if (entry.is_string()) {
    spec.kind = parse_learner_kind(entry.get<std::string>());
    spec.arf.detectors_enabled = spec.kind == LearnerKind::ARF_DD;
    return spec;
  }
  ObjectReader r(entry, where);
  std::string name;
  r.read("name", name);
  spec.kind = parse_learner_kind(name);
  spec.arf.detectors_enabled = spec.kind == LearnerKind::ARF_DD;
  r.read("alpha", spec.svm.alpha);
  r.read("t0", spec.svm.t0);
  r.read("balanced", spec.svm.balanced);
  r.read("n_models", spec.arf.n_models);
  r.read("lambda", spec.arf.lambda);
  r.read("subspace_size", spec.arf.subspace_size);
  r.read("warning_delta", spec.arf.warning_delta);
  r.read("drift_delta", spec.arf.drift_delta);
  r.read("seed", spec.arf.seed);
  r.read("grace_period", spec.arf.tree.grace_period);
  r.read("split_confidence", spec.arf.tree.split_confidence);
  r.read("tie_threshold", spec.arf.tree.tie_threshold);
  r.finish();
  return spec;
}

ScenarioSpec parse_scenario(const json& entry, std::size_t index) {
  ObjectReader r(entry, fmt::format("scenarios[{}]", index));
  ScenarioSpec s;
  std::string method = "none";
  std::vector<int> years;
  r.read("name", s.name);
  r.read("method", method);
  r.read("drift_points", s.drift.drift_points);
  r.read("removed_years", years);
  r.read("removal_count", s.drift.removal_count);
  r.finish();
  s.drift.method = parse_drift_method(method);
  s.drift.removed_years = {years.begin(), years.end()};
  return s;
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return fs::is_regular_file(path, ec);
}

bool dir_exists(const std::string& path) {
  std::error_code ec;
  return fs::is_directory(path, ec);
}

}  // namespace

std::string_view to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::GNB: return "GNB";
    case LearnerKind::ISVM: return "ISVM";
    case LearnerKind::ARF: return "ARF";
    case LearnerKind::ARF_DD: return "ARF_DD";
  }
  return "GNB";
}

LearnerKind parse_learner_kind(std::string_view name) {
  for (auto k : {LearnerKind::GNB, LearnerKind::ISVM, LearnerKind::ARF, LearnerKind::ARF_DD}) {
    if (to_string(k) == name) return k;
  }
  throw Error(fmt::format("unknown learner \"{}\" (GNB, ISVM, ARF, ARF_DD)", name));
}

std::unique_ptr<Classifier> make_learner(const LearnerSpec& spec, std::size_t dim, int num_labels,
                                         std::uint64_t run_seed) {
  switch (spec.kind) {
    case LearnerKind::GNB:
      return std::make_unique<GaussianNaiveBayes>(dim, num_labels);
    case LearnerKind::ISVM:
      return std::make_unique<LinearSvm>(dim, num_labels, spec.svm);
    case LearnerKind::ARF:
    case LearnerKind::ARF_DD: {
      ArfConfig arf = spec.arf;
      arf.detectors_enabled = spec.kind == LearnerKind::ARF_DD;
      arf.seed = mix_seed(spec.arf.seed, run_seed);
      return std::make_unique<AdaptiveRandomForest>(dim, num_labels, arf);
    }
  }
  throw Error("unknown learner kind");
}

std::vector<ScenarioSpec> default_scenarios() {
  std::vector<ScenarioSpec> out;
  out.push_back({"no_drift", {DriftMethod::None, {}, {}, 3, 0}});
  out.push_back({"class_swap", {DriftMethod::ClassSwap, {50000}, {}, 3, 0}});
  out.push_back({"class_shift", {DriftMethod::ClassShift, {50000, 100000, 150000}, {}, 3, 0}});
  out.push_back({"time_slice_removal", {DriftMethod::TimeSliceRemoval, {}, {}, 3, 0}});
  out.push_back({"adjective_swap", {DriftMethod::AdjectiveSwap, {50000}, {}, 3, 0}});
  out.push_back({"adjective_swap_3", {DriftMethod::AdjectiveSwap, {50000, 100000, 150000}, {}, 3, 0}});
  return out;
}

std::vector<LearnerSpec> default_learners() {
  std::vector<LearnerSpec> out;
  for (auto k : {LearnerKind::GNB, LearnerKind::ISVM, LearnerKind::ARF, LearnerKind::ARF_DD}) {
    LearnerSpec s;
    s.kind = k;
    s.arf.detectors_enabled = k == LearnerKind::ARF_DD;
    out.push_back(s);
  }
  return out;
}

bool ExperimentConfig::needs_wordnet() const {
  return std::any_of(scenarios.begin(), scenarios.end(),
                     [](const ScenarioSpec& s) { return s.drift.method == DriftMethod::AdjectiveSwap; });
}

ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(fmt::format("config is not valid JSON: {}", e.what()));
  }
  ObjectReader r(root, "config");
  ExperimentConfig cfg;
  r.read("dataset", cfg.dataset);
  r.read("wordnet_dir", cfg.wordnet_dir);
  r.read("window", cfg.window);
  r.read("normalize_embeddings", cfg.normalize_embeddings);

  if (const json* corpus = r.child("corpus")) {
    ObjectReader c(*corpus, "corpus");
    std::string preset = "canonical";
    c.read("preset", preset);
    apply_preset(preset, cfg.mapping);
    c.read("path", cfg.corpus_path);
    c.read("id_field", cfg.mapping.id_field);
    c.read("timestamp_field", cfg.mapping.timestamp_field);
    c.read("text_field", cfg.mapping.text_field);
    c.read("label_field", cfg.mapping.label_field);
    c.read("label_offset", cfg.mapping.label_offset);
    c.read("label_values", cfg.mapping.label_values);
    int num_labels = 0;
    c.read("num_labels", num_labels);
    if (num_labels != 0) cfg.mapping.num_labels = num_labels;
    c.finish();
  }

  std::size_t count = 10;
  if (const json* subsets = r.child("subsets")) {
    ObjectReader s(*subsets, "subsets");
    std::uint64_t base_seed = 0;
    s.read("count", count);
    s.read("target_length", cfg.target_length);
    s.read("base_seed", base_seed);
    s.read("seeds", cfg.seeds);
    s.finish();
    if (cfg.seeds.empty())
      for (std::size_t i = 0; i < count; ++i) cfg.seeds.push_back(base_seed + i);
  } else {
    for (std::size_t i = 0; i < count; ++i) cfg.seeds.push_back(i);
  }

  if (const json* scenarios = r.child("scenarios")) {
    if (!scenarios->is_array()) throw Error("scenarios: expected an array");
    for (std::size_t i = 0; i < scenarios->size(); ++i) cfg.scenarios.push_back(parse_scenario((*scenarios)[i], i));
  } else {
    cfg.scenarios = default_scenarios();
  }

  if (const json* vec = r.child("vectorizer")) {
    ObjectReader v(*vec, "vectorizer");
    std::string type = "hashing";
    v.read("type", type);
    v.read("dim", cfg.vectorizer.dim);
    v.read("seed", cfg.vectorizer.seed);
    v.read("dir", cfg.vectorizer.embedding_dir);
    v.finish();
    if (type == "hashing") {
      cfg.vectorizer.type = VectorizerSpec::Type::Hashing;
    } else if (type == "embedding") {
      cfg.vectorizer.type = VectorizerSpec::Type::Embedding;
    } else {
      throw Error(fmt::format("vectorizer.type: unknown type \"{}\" (hashing, embedding)", type));
    }
  }

  if (const json* learners = r.child("learners")) {
    if (!learners->is_array()) throw Error("learners: expected an array");
    for (std::size_t i = 0; i < learners->size(); ++i) cfg.learners.push_back(parse_learner((*learners)[i], i));
  } else {
    cfg.learners = default_learners();
  }
  r.finish();

  cfg.corpus_path = resolve_path(cfg.corpus_path, base_dir);
  cfg.wordnet_dir = resolve_path(cfg.wordnet_dir, base_dir);
  cfg.vectorizer.embedding_dir = resolve_path(cfg.vectorizer.embedding_dir, base_dir);
  if (cfg.dataset.empty() && !cfg.corpus_path.empty()) cfg.dataset = fs::path(cfg.corpus_path).stem().string();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config \"{}\"", path));
  std::stringstream ss;
  ss << in.rdbuf();
  const auto base = fs::path(path).parent_path();
  try {
    return parse_config(ss.str(), base.empty() ? "." : base.string());
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

void validate(const ExperimentConfig& cfg, ConfigUse use) {
  std::vector<std::string> problems;
  const auto problem = [&](std::string msg) { problems.push_back(std::move(msg)); };

  if (cfg.dataset.empty()) problem("dataset name is empty");
  if (cfg.dataset.find_first_of("/\\,\"") != std::string::npos) problem("dataset name contains '/', '\\', ',' or '\"'");
  if (cfg.window == 0) problem("window must be at least 1");
  if (cfg.target_length == 0) problem("subsets.target_length must be at least 1");
  if (cfg.seeds.empty()) problem("subsets: no seeds (count must be at least 1)");
  if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size())
    problem("subsets.seeds contains duplicates");
  if (cfg.mapping.num_labels && *cfg.mapping.num_labels < 2) problem("corpus.num_labels must be at least 2");

  if (cfg.scenarios.empty()) problem("no scenarios");
  std::set<std::string> names;
  for (const auto& s : cfg.scenarios) {
    if (s.name.empty() || s.name.find_first_of("/\\,\" ") != std::string::npos)
      problem(fmt::format("scenario name \"{}\" is empty or contains '/', '\\', ',', '\"' or spaces", s.name));
    if (!names.insert(s.name).second) problem(fmt::format("duplicate scenario name \"{}\"", s.name));
    const auto& pts = s.drift.drift_points;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i] <= pts[i - 1]) problem(fmt::format("scenario \"{}\": drift points must be strictly increasing", s.name));
    }
    switch (s.drift.method) {
      case DriftMethod::ClassSwap:
        if (pts.size() != 1) problem(fmt::format("scenario \"{}\": class_swap takes exactly one drift point", s.name));
        break;
      case DriftMethod::ClassShift:
      case DriftMethod::AdjectiveSwap:
        if (pts.empty()) problem(fmt::format("scenario \"{}\": needs at least one drift point", s.name));
        break;
      case DriftMethod::TimeSliceRemoval:
      case DriftMethod::None:
        if (!pts.empty()) problem(fmt::format("scenario \"{}\": drift points are not used by this method", s.name));
        break;
    }
  }

  if (cfg.vectorizer.dim == 0) problem("vectorizer.dim must be at least 1");
  if (cfg.learners.empty()) problem("no learners");
  std::set<LearnerKind> kinds;
  for (const auto& l : cfg.learners) {
    if (!kinds.insert(l.kind).second) problem(fmt::format("learner {} listed twice", to_string(l.kind)));
    if (!(l.svm.alpha > 0)) problem("ISVM alpha must be positive");
    if (l.arf.n_models < 1) problem("ARF n_models must be at least 1");
    if (l.arf.subspace_size > cfg.vectorizer.dim) problem("ARF subspace_size exceeds the vector dimension");
    if (!(l.arf.warning_delta > 0 && l.arf.warning_delta < 1)) problem("ARF warning_delta must lie in (0, 1)");
    if (!(l.arf.drift_delta > 0 && l.arf.drift_delta < 1)) problem("ARF drift_delta must lie in (0, 1)");
    if (!(l.arf.tree.split_confidence > 0 && l.arf.tree.split_confidence < 1))
      problem("split_confidence must lie in (0, 1)");
    if (l.arf.tree.grace_period < 1) problem("grace_period must be at least 1");
  }

  if (use == ConfigUse::Generate) {
    if (cfg.corpus_path.empty()) {
      problem("corpus.path is required");
    } else if (!file_exists(cfg.corpus_path)) {
      problem(fmt::format("corpus file \"{}\" does not exist", cfg.corpus_path));
    }
    if (cfg.needs_wordnet()) {
      std::string dir = cfg.wordnet_dir;
      if (dir.empty()) {
        if (const char* env = std::getenv("DRIFTFORGE_WORDNET_DIR")) dir = env;
      }
      if (dir.empty()) {
        problem("adjective_swap scenarios need wordnet_dir or DRIFTFORGE_WORDNET_DIR");
      } else if (!file_exists((fs::path(dir) / "index.adj").string()) ||
                 !file_exists((fs::path(dir) / "data.adj").string())) {
        problem(fmt::format("WordNet directory \"{}\" lacks index.adj or data.adj", dir));
      }
    }
  } else if (cfg.vectorizer.type == VectorizerSpec::Type::Embedding) {
    if (cfg.vectorizer.embedding_dir.empty()) {
      problem("vectorizer.dir is required for embedding vectors");
    } else if (!dir_exists(cfg.vectorizer.embedding_dir)) {
      problem(fmt::format("embedding directory \"{}\" does not exist", cfg.vectorizer.embedding_dir));
    }
  }

  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw Error(msg);
  }
}

}  // namespace driftforge
