// WNdb (WordNet 3.0 plain-text database) reader for the adjective files.
//
// index.adj:  lemma pos synset_cnt p_cnt [ptr_symbol...] sense_cnt
//             tagsense_cnt synset_offset...
// data.adj:   synset_offset lex_filenum ss_type w_cnt(hex) [word lex_id(hex)]...
//             p_cnt [ptr_symbol synset_offset pos source/target(hex)]... | gloss
//
// Lines starting with a space are the license preamble.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "driftforge/error.hpp"
#include "driftforge/lexswap.hpp"

namespace driftforge {

namespace {

struct AntonymPointer {
  std::uint64_t target = 0;
  unsigned source_word = 0;  // 0: applies to every word of the synset
  unsigned target_word = 0;
};

struct Synset {
  std::vector<std::string> words;
  std::vector<AntonymPointer> antonyms;
};

class Fields {
 public:
  Fields(std::string_view line, std::size_t byte_offset, std::string_view file)
      : line_(line), offset_(byte_offset), file_(file) {}

  std::string_view next() {
    while (pos_ < line_.size() && line_[pos_] == ' ') ++pos_;
    if (pos_ >= line_.size()) fail("unexpected end of line");
    const std::size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ') ++pos_;
    return line_.substr(start, pos_ - start);
  }

  template <typename T>
  T number(int base = 10) {
    const auto field = next();
    T value{};
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value, base);
    if (ec != std::errc{} || ptr != field.data() + field.size())
      fail(fmt::format("expected a number, found \"{}\"", field));
    return value;
  }

  [[noreturn]] void fail(std::string_view what) const {
    throw Error(fmt::format("{}: malformed line at byte offset {}: {}", file_, offset_, what));
  }

 private:
  std::string_view line_;
  std::size_t pos_ = 0;
  std::size_t offset_;
  std::string_view file_;
};

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// "galore(ip)" -> "galore"
std::string strip_marker(std::string_view word) {
  if (word.ends_with(")")) {
    const auto open = word.rfind('(');
    if (open != std::string_view::npos) word = word.substr(0, open);
  }
  return lowercase(word);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open WordNet file \"{}\"", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty() && line.front() != ' ') fn(line, start);
    start = end + 1;
  }
}

std::unordered_map<std::uint64_t, Synset> parse_data(std::string_view content, std::string_view file) {
  std::unordered_map<std::uint64_t, Synset> synsets;
  for_each_line(content, [&](std::string_view line, std::size_t offset) {
    Fields f(line, offset, file);
    const auto synset_offset = f.number<std::uint64_t>();
    f.next();  // lex_filenum
    const auto ss_type = f.next();
    if (ss_type != "a" && ss_type != "s") f.fail(fmt::format("unexpected synset type \"{}\"", ss_type));
    const auto w_cnt = f.number<unsigned>(16);
    if (w_cnt == 0) f.fail("synset without words");

    Synset synset;
    synset.words.reserve(w_cnt);
    for (unsigned i = 0; i < w_cnt; ++i) {
      synset.words.push_back(strip_marker(f.next()));
      f.number<unsigned>(16);  // lex_id
    }
    const auto p_cnt = f.number<unsigned>();
    for (unsigned i = 0; i < p_cnt; ++i) {
      const auto symbol = f.next();
      const auto target = f.number<std::uint64_t>();
      const auto pos = f.next();
      const auto source_target = f.next();
      if (source_target.size() != 4) f.fail(fmt::format("bad source/target field \"{}\"", source_target));
      if (symbol != "!") continue;
      if (pos != "a" && pos != "s") continue;
      unsigned src = 0, tgt = 0;
      std::from_chars(source_target.data(), source_target.data() + 2, src, 16);
      std::from_chars(source_target.data() + 2, source_target.data() + 4, tgt, 16);
      if (src > w_cnt) f.fail(fmt::format("pointer source word {} out of range", src));
      synset.antonyms.push_back({target, src, tgt});
    }
    if (!synsets.emplace(synset_offset, std::move(synset)).second)
      f.fail(fmt::format("duplicate synset offset {}", synset_offset));
  });
  return synsets;
}

}  // namespace

AdjectiveLexicon parse_wordnet_adjectives(const std::string& index_path, const std::string& data_path) {
  const std::string data = read_file(data_path);
  const auto synsets = parse_data(data, data_path);

  const auto resolve = [&](std::uint64_t offset) -> const Synset* {
    const auto it = synsets.find(offset);
    return it == synsets.end() ? nullptr : &it->second;
  };

  std::unordered_map<std::string, std::vector<AdjectiveLexicon::Sense>> entries;
  const std::string index = read_file(index_path);
  for_each_line(index, [&](std::string_view line, std::size_t offset) {
    Fields f(line, offset, index_path);
    const std::string lemma = lowercase(f.next());
    const auto pos = f.next();
    if (pos != "a") f.fail(fmt::format("expected part of speech \"a\", found \"{}\"", pos));
    const auto synset_cnt = f.number<unsigned>();
    const auto p_cnt = f.number<unsigned>();
    for (unsigned i = 0; i < p_cnt; ++i) f.next();
    f.number<unsigned>();  // sense_cnt, equal to synset_cnt
    f.number<unsigned>();  // tagsense_cnt

    std::vector<AdjectiveLexicon::Sense> senses;
    senses.reserve(synset_cnt);
    for (unsigned s = 0; s < synset_cnt; ++s) {
      const auto synset_offset = f.number<std::uint64_t>();
      const Synset* synset = resolve(synset_offset);
      if (!synset) f.fail(fmt::format("dangling synset offset {} for \"{}\"", synset_offset, lemma));

      AdjectiveLexicon::Sense antonyms;
      for (const auto& ptr : synset->antonyms) {
        if (ptr.source_word != 0 && synset->words[ptr.source_word - 1] != lemma) continue;
        const Synset* target = resolve(ptr.target);
        if (!target) f.fail(fmt::format("dangling antonym pointer {} from synset {}", ptr.target, synset_offset));
        if (ptr.target_word > target->words.size())
          f.fail(fmt::format("antonym target word {} out of range in synset {}", ptr.target_word, ptr.target));
        const auto add = [&](const std::string& word) {
          if (std::find(antonyms.begin(), antonyms.end(), word) == antonyms.end()) antonyms.push_back(word);
        };
        if (ptr.target_word == 0) {
          for (const auto& w : target->words) add(w);
        } else {
          add(target->words[ptr.target_word - 1]);
        }
      }
      senses.push_back(std::move(antonyms));
    }
    entries[lemma] = std::move(senses);
  });
  return AdjectiveLexicon(std::move(entries));
}

std::string resolve_wordnet_dir(const std::string& dir) {
  if (!dir.empty()) return dir;
  if (const char* env = std::getenv("DRIFTFORGE_WORDNET_DIR"); env && *env) return env;
  throw Error("no WordNet directory given and DRIFTFORGE_WORDNET_DIR is not set");
}

AdjectiveLexicon load_wordnet_adjectives(const std::string& dir) {
  const std::filesystem::path root = resolve_wordnet_dir(dir);
  return parse_wordnet_adjectives((root / "index.adj").string(), (root / "data.adj").string());
}

}  // namespace driftforge
