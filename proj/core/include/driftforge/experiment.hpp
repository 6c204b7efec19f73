#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "driftforge/adaptive_random_forest.hpp"
#include "driftforge/corpus.hpp"
#include "driftforge/driftgen.hpp"
#include "driftforge/learner.hpp"
#include "driftforge/linear_svm.hpp"

namespace driftforge {

enum class LearnerKind { GNB, ISVM, ARF, ARF_DD };

std::string_view to_string(LearnerKind kind);
LearnerKind parse_learner_kind(std::string_view name);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::GNB;
  LinearSvmConfig svm;
  ArfConfig arf;
};

// The run seed is mixed into the ARF seed so every subset gets its own
// bagging and subspace draws.
std::unique_ptr<Classifier> make_learner(const LearnerSpec& spec, std::size_t dim, int num_labels,
                                         std::uint64_t run_seed = 0);

struct ScenarioSpec {
  std::string name;
  DriftSpec drift;
};

// No drift, Class Swap at 50000, Class Shift at {50000, 100000, 150000},
// Time-slice Removal of 3 years, Adjective Swap at 50000 and at
// {50000, 100000, 150000}.
std::vector<ScenarioSpec> default_scenarios();
std::vector<LearnerSpec> default_learners();

struct VectorizerSpec {
  enum class Type { Hashing, Embedding };
  Type type = Type::Hashing;
  std::size_t dim = 384;
  std::uint64_t seed = 0;
  // Embedding: directory holding <stream>.dfe files.
  std::string embedding_dir;
};

struct ExperimentConfig {
  std::string dataset;
  std::string corpus_path;
  FieldMapping mapping;
  std::size_t target_length = 200000;
  std::vector<std::uint64_t> seeds;
  std::vector<ScenarioSpec> scenarios;
  std::string wordnet_dir;
  VectorizerSpec vectorizer;
  std::vector<LearnerSpec> learners;
  std::size_t window = 1000;
  bool normalize_embeddings = false;

  bool needs_wordnet() const;
};

// Parses the JSON config. Relative paths resolve against base_dir. Missing
// sections take the defaults above; unknown keys are errors.
ExperimentConfig parse_config(std::string_view json_text, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

enum class ConfigUse { Generate, Evaluate };

// Checks everything a run could trip over later: ranges, enum values, name
// uniqueness and the existence of every referenced path. Throws an Error
// listing all problems.
void validate(const ExperimentConfig& config, ConfigUse use);

}  // namespace driftforge
