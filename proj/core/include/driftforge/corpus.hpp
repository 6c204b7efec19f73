#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace driftforge {

// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

// Parses an ISO-8601 date or date-time ("2016-03-09", "2016-03-09T00:44:42Z",
// "2016-03-09 00:44:42", "2016-03-09T00:44:42.123+02:00") and normalizes it to
// UTC seconds. Fractional seconds are truncated. Throws Error on bad input.
Timestamp parse_timestamp(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_timestamp(Timestamp ts);

int year_of(Timestamp ts);

struct TextInstance {
  std::string id;
  Timestamp timestamp = 0;
  std::string text;
  int label = 0;

  friend bool operator==(const TextInstance&, const TextInstance&) = default;
};

// A labeled stream ordered by timestamp (ties keep input order).
struct Corpus {
  std::string name;
  int num_labels = 0;
  std::vector<TextInstance> instances;

  std::size_t size() const { return instances.size(); }
  bool empty() const { return instances.empty(); }
};

// Maps a source record's fields onto the canonical instance fields.
//
// Yelp reviews use {"review_id", "date", "text", "stars"} with stars in 1..5,
// which maps to labels 0..4 with label_offset = -1. Sources with string labels
// list them in label_values; the position in that list is the label.
struct FieldMapping {
  std::string id_field = "id";
  std::string timestamp_field = "ts";
  std::string text_field = "text";
  std::string label_field = "label";
  int label_offset = 0;
  std::vector<std::string> label_values;
  std::optional<int> num_labels;
};

// Reads a JSONL corpus and returns it sorted by timestamp. Blank lines are
// skipped. K is the mapping's num_labels when given, else max label + 1.
Corpus load_corpus(const std::string& path, const FieldMapping& mapping = {});
Corpus read_corpus(std::istream& in, const FieldMapping& mapping = {},
                   std::string name = "corpus");

// Canonical JSONL: {"id","ts","text","label"} per line.
void write_corpus(std::ostream& out, const std::vector<TextInstance>& instances);
std::string to_jsonl_line(const TextInstance& instance);

struct SampleSpec {
  std::size_t target_length = 200000;
  std::uint64_t seed = 0;
};

// Per-label quotas: floor(target * fraction) plus one extra item for the
// labels with the largest fractional remainders (ties to the smaller label).
std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& label_counts,
                                           std::size_t target_length);

std::vector<std::size_t> label_counts(const Corpus& corpus);

// Draws target_length instances, stratified by label, uniformly without
// replacement within each label, and returns them in the corpus order.
Corpus sample_stratified_temporal(const Corpus& corpus, const SampleSpec& spec);

}  // namespace driftforge
