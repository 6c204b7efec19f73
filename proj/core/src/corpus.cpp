#include "driftforge/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <json.hpp>

#include "driftforge/error.hpp"
#include "driftforge/rng.hpp"

namespace driftforge {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

class TimestampCursor {
 public:
  explicit TimestampCursor(std::string_view text) : text_(text) {}

  int digits(std::size_t count) {
    if (pos_ + count > text_.size()) fail();
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
      const char c = text_[pos_ + i];
      if (c < '0' || c > '9') fail();
      value = value * 10 + (c - '0');
    }
    pos_ += count;
    return value;
  }

  void expect(char c) {
    if (!accept(c)) fail();
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool done() const { return pos_ == text_.size(); }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_digits() {
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail() const {
    throw Error(fmt::format("unparseable timestamp \"{}\"", text_));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::string field_text(const json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_number_float()) return value.dump();
  throw Error("expected a string or number");
}

int label_from(const json& value, const FieldMapping& mapping) {
  if (value.is_string()) {
    const auto& s = value.get_ref<const std::string&>();
    if (!mapping.label_values.empty()) {
      const auto it = std::find(mapping.label_values.begin(), mapping.label_values.end(), s);
      if (it == mapping.label_values.end()) throw Error(fmt::format("unknown label value \"{}\"", s));
      return static_cast<int>(it - mapping.label_values.begin());
    }
    int parsed = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), parsed);
    if (ec != std::errc{} || ptr != s.data() + s.size())
      throw Error(fmt::format("label \"{}\" is not an integer", s));
    return parsed + mapping.label_offset;
  }
  if (value.is_number_integer() || value.is_number_unsigned())
    return static_cast<int>(value.get<std::int64_t>()) + mapping.label_offset;
  if (value.is_number_float()) {
    const double d = value.get<double>();
    if (std::floor(d) != d) throw Error(fmt::format("label {} is not an integer", d));
    return static_cast<int>(d) + mapping.label_offset;
  }
  throw Error("label must be an integer or string");
}

const json& require(const json& record, const std::string& field, std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null())
    throw Error(fmt::format("line {}: missing field \"{}\"", line, field));
  return *it;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  TimestampCursor cur(text);
  const int y = cur.digits(4);
  cur.expect('-');
  const int mo = cur.digits(2);
  cur.expect('-');
  const int d = cur.digits(2);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) cur.fail();

  int hh = 0, mm = 0, ss = 0;
  if (!cur.done()) {
    if (!cur.accept('T') && !cur.accept(' ')) cur.fail();
    hh = cur.digits(2);
    cur.expect(':');
    mm = cur.digits(2);
    if (cur.accept(':')) {
      ss = cur.digits(2);
      if (cur.accept('.')) cur.skip_digits();
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) cur.fail();

  int offset_seconds = 0;
  if (!cur.done()) {
    if (cur.accept('Z')) {
    } else if (cur.peek() == '+' || cur.peek() == '-') {
      const int sign = cur.accept('+') ? 1 : (cur.accept('-'), -1);
      const int oh = cur.digits(2);
      int om = 0;
      if (cur.accept(':')) {
        om = cur.digits(2);
      } else if (!cur.done()) {
        om = cur.digits(2);
      }
      if (oh > 23 || om > 59) cur.fail();
      offset_seconds = sign * (oh * 3600 + om * 60);
    } else {
      cur.fail();
    }
  }
  if (!cur.done()) cur.fail();

  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + hh * 3600 + mm * 60 + ss - offset_seconds;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const auto secs = sys_seconds{seconds{ts}};
  const auto day_point = floor<days>(secs);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{secs - day_point};
  return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                     static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                     hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

int year_of(Timestamp ts) {
  using namespace std::chrono;
  const auto day_point = floor<days>(sys_seconds{seconds{ts}});
  return static_cast<int>(year_month_day{day_point}.year());
}

Corpus read_corpus(std::istream& in, const FieldMapping& mapping, std::string name) {
  Corpus corpus;
  corpus.name = std::move(name);
  std::string line;
  std::size_t line_no = 0;
  int max_label = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;

    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(fmt::format("line {}: malformed record: {}", line_no, e.what()));
    }
    if (!record.is_object()) throw Error(fmt::format("line {}: record is not an object", line_no));

    TextInstance inst;
    try {
      inst.id = field_text(require(record, mapping.id_field, line_no));
      const auto& ts = require(record, mapping.timestamp_field, line_no);
      if (!ts.is_string()) throw Error("timestamp must be a string");
      inst.timestamp = parse_timestamp(ts.get_ref<const std::string&>());
      const auto& text = require(record, mapping.text_field, line_no);
      if (!text.is_string()) throw Error(fmt::format("field \"{}\" is not a string", mapping.text_field));
      inst.text = text.get<std::string>();
      inst.label = label_from(require(record, mapping.label_field, line_no), mapping);
    } catch (const Error& e) {
      const std::string_view msg = e.what();
      if (msg.starts_with("line ")) throw;
      throw Error(fmt::format("line {}: {}", line_no, msg));
    }

    if (inst.label < 0) throw Error(fmt::format("line {}: negative label {}", line_no, inst.label));
    if (mapping.num_labels && inst.label >= *mapping.num_labels)
      throw Error(fmt::format("line {}: label {} outside declared K = {}", line_no, inst.label,
                              *mapping.num_labels));
    max_label = std::max(max_label, inst.label);
    corpus.instances.push_back(std::move(inst));
  }
  if (corpus.instances.empty()) throw Error("empty corpus");

  corpus.num_labels = mapping.num_labels.value_or(max_label + 1);
  std::stable_sort(corpus.instances.begin(), corpus.instances.end(),
                   [](const TextInstance& a, const TextInstance& b) { return a.timestamp < b.timestamp; });
  return corpus;
}

Corpus load_corpus(const std::string& path, const FieldMapping& mapping) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open corpus \"{}\"", path));
  std::string name = path;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos && dot > 0) name.resize(dot);
  try {
    return read_corpus(in, mapping, std::move(name));
  } catch (const Error& e) {
    throw Error(fmt::format("{}: {}", path, e.what()));
  }
}

std::string to_jsonl_line(const TextInstance& instance) {
  ordered_json record;
  record["id"] = instance.id;
  record["ts"] = format_timestamp(instance.timestamp);
  record["text"] = instance.text;
  record["label"] = instance.label;
  return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

void write_corpus(std::ostream& out, const std::vector<TextInstance>& instances) {
  for (const auto& inst : instances) out << to_jsonl_line(inst) << '\n';
}

std::vector<std::size_t> label_counts(const Corpus& corpus) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(corpus.num_labels, 0)), 0);
  for (const auto& inst : corpus.instances) {
    if (inst.label < 0 || inst.label >= corpus.num_labels)
      throw Error(fmt::format("instance \"{}\" has label {} outside [0, {})", inst.id, inst.label,
                              corpus.num_labels));
    ++counts[static_cast<std::size_t>(inst.label)];
  }
  return counts;
}

std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& counts,
                                           std::size_t target_length) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  std::vector<std::size_t> quotas(counts.size(), 0);
  if (total == 0) return quotas;

  // Integer arithmetic: target * count / total, remainder target * count % total.
  __extension__ using u128 = unsigned __int128;
  std::vector<std::pair<u128, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t label = 0; label < counts.size(); ++label) {
    const u128 scaled = static_cast<u128>(target_length) * counts[label];
    quotas[label] = static_cast<std::size_t>(scaled / total);
    assigned += quotas[label];
    remainders.emplace_back(scaled % total, label);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < target_length && i < remainders.size(); ++i) {
    if (remainders[i].first == 0) break;
    ++quotas[remainders[i].second];
    ++assigned;
  }
  return quotas;
}

Corpus sample_stratified_temporal(const Corpus& corpus, const SampleSpec& spec) {
  if (spec.target_length == 0) throw Error("target_length must be positive");
  if (spec.target_length > corpus.size())
    throw Error(fmt::format("target_length {} exceeds corpus length {}", spec.target_length, corpus.size()));

  const auto counts = label_counts(corpus);
  const auto quotas = stratified_quotas(counts, spec.target_length);

  std::vector<std::vector<std::size_t>> positions(counts.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    positions[static_cast<std::size_t>(corpus.instances[i].label)].push_back(i);

  std::string short_labels;
  for (std::size_t label = 0; label < counts.size(); ++label) {
    if (quotas[label] > counts[label]) short_labels += fmt::format(" {}", label);
  }
  if (!short_labels.empty()) throw Error(fmt::format("label quota exceeds availability for labels:{}", short_labels));

  std::vector<std::size_t> chosen;
  chosen.reserve(spec.target_length);
  for (std::size_t label = 0; label < counts.size(); ++label) {
    // Independent generator per label so one label's draw does not shift another's.
    Rng rng(mix_seed(spec.seed, label));
    auto& pool = positions[label];
    const std::size_t quota = quotas[label];
    for (std::size_t i = 0; i < quota; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    chosen.insert(chosen.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(quota));
  }
  std::sort(chosen.begin(), chosen.end());

  Corpus out;
  out.name = corpus.name;
  out.num_labels = corpus.num_labels;
  out.instances.reserve(chosen.size());
  for (const std::size_t i : chosen) out.instances.push_back(corpus.instances[i]);
  return out;
}

}  // namespace driftforge
