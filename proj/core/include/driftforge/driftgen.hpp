#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "driftforge/corpus.hpp"

namespace driftforge {

class AdjectiveLexicon;
class Tagger;

enum class DriftMethod { None, ClassSwap, ClassShift, TimeSliceRemoval, AdjectiveSwap };

std::string_view to_string(DriftMethod method);
DriftMethod parse_drift_method(std::string_view name);

enum class DriftKind { Swap, Shift, Gap, AdjSwap };

std::string_view to_string(DriftKind kind);
DriftKind parse_drift_kind(std::string_view name);

struct DriftSpec {
  DriftMethod method = DriftMethod::None;
  // Strictly increasing stream indices.
  std::vector<std::size_t> drift_points;
  // TimeSliceRemoval only. When empty, removal_count years are drawn with seed.
  std::set<int> removed_years;
  std::size_t removal_count = 3;
  std::uint64_t seed = 0;
};

struct DriftAnnotation {
  std::size_t index = 0;
  DriftKind kind = DriftKind::Swap;

  friend bool operator==(const DriftAnnotation&, const DriftAnnotation&) = default;
};

struct DriftedStream {
  Corpus stream;
  std::vector<DriftAnnotation> annotations;
  DriftSpec spec;
  std::string source;
  // Non-fatal conditions, e.g. a drift point past the end of the stream.
  std::vector<std::string> warnings;
};

// Class Swap: from index t on, label c becomes (K - 1) - c.
DriftedStream class_swap(const Corpus& stream, std::size_t t);

// Class Shift: after the j-th point (1-based), label c becomes (c + j) mod K.
DriftedStream class_shift(const Corpus& stream, const std::vector<std::size_t>& points);

// Draws k distinct years from the corpus's years, excluding the first and
// the last year it spans.
std::set<int> select_removal_years(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Deletes every instance from the given years, then samples. One gap
// annotation per contiguous removed block that the sampled stream crosses.
DriftedStream time_slice_removal(const Corpus& corpus, const std::set<int>& years,
                                 const SampleSpec& spec);

struct DriftDependencies {
  // Required for AdjectiveSwap.
  const AdjectiveLexicon* lexicon = nullptr;
  // Defaults to the lexicon tagger when null.
  const Tagger* tagger = nullptr;
  // TimeSliceRemoval deletes from this corpus and re-samples. When null the
  // stream itself is used.
  const Corpus* source = nullptr;
  // Target length of the TimeSliceRemoval sample; 0 keeps every remaining
  // instance.
  std::size_t sample_length = 0;
};

DriftedStream apply_drift(const Corpus& stream, const DriftSpec& spec,
                          const DriftDependencies& deps = {});

// Sidecar format: one "index<TAB>kind" line per annotation.
void write_annotations(std::ostream& out, const std::vector<DriftAnnotation>& annotations);
std::vector<DriftAnnotation> read_annotations(std::istream& in);

}  // namespace driftforge
