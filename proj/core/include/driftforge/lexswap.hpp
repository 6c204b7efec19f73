#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "driftforge/driftgen.hpp"

namespace driftforge {

struct Token {
  std::string surface;
  // Byte range [begin, end) in the source text.
  std::size_t begin = 0;
  std::size_t end = 0;
  // ASCII-lowercased surface.
  std::string norm;
  bool is_word = false;
};

// Word tokens are maximal runs of ASCII letters, digits, apostrophes and
// non-ASCII bytes (so UTF-8 letters stay inside words). Every other
// non-space byte is a single-byte punctuation token. Whitespace is dropped;
// spans make the tokenization lossless.
std::vector<Token> tokenize(std::string_view text);

bool is_word_byte(unsigned char c);

enum class PosTag { Adjective, Other };

// Adjective lemma -> senses in WordNet sense-rank order -> antonym lemmas.
class AdjectiveLexicon {
 public:
  using Sense = std::vector<std::string>;

  AdjectiveLexicon() = default;
  explicit AdjectiveLexicon(std::unordered_map<std::string, std::vector<Sense>> entries);

  // nullptr when the lemma is not an adjective.
  const std::vector<Sense>* find(std::string_view lemma) const;
  bool contains(std::string_view lemma) const { return find(lemma) != nullptr; }

  // First antonym of the first sense that has a single-word antonym.
  std::optional<std::string> antonym_for(std::string_view lemma) const;

  std::size_t size() const { return entries_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, std::vector<Sense>, Hash, std::equal_to<>> entries_;
  std::unordered_map<std::string, std::string, Hash, std::equal_to<>> replacement_;
};

// True when the lemma would survive tokenization as one word token.
bool is_single_word(std::string_view lemma);

// Reads WNdb-format index.adj and data.adj.
AdjectiveLexicon parse_wordnet_adjectives(const std::string& index_path,
                                          const std::string& data_path);

// Loads index.adj/data.adj from dir, or from $DRIFTFORGE_WORDNET_DIR when dir is
// empty. Throws when neither yields readable files.
AdjectiveLexicon load_wordnet_adjectives(const std::string& dir = {});
std::string resolve_wordnet_dir(const std::string& dir);

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<PosTag> tag(const std::vector<Token>& tokens) const = 0;
};

// Adjectivehood by lexicon membership. Determiners and copulas that WordNet
// does not list as adjectives anyway ({a, the, this, that, is, are}) are
// never tagged.
class LexiconTagger final : public Tagger {
 public:
  explicit LexiconTagger(const AdjectiveLexicon& lexicon) : lexicon_(&lexicon) {}
  std::vector<PosTag> tag(const std::vector<Token>& tokens) const override;

 private:
  const AdjectiveLexicon* lexicon_;
};

std::vector<PosTag> tag(const std::vector<Token>& tokens, const AdjectiveLexicon& lexicon);

struct SwapResult {
  std::string text;
  std::size_t replaced = 0;
};

SwapResult adjective_swap(std::string_view text, const AdjectiveLexicon& lexicon,
                          const Tagger& tagger);
SwapResult adjective_swap(std::string_view text, const AdjectiveLexicon& lexicon);

// Regions after an odd number of points are swapped; regions after an even
// number keep the original text. Labels are never changed.
DriftedStream adjective_swap_stream(const Corpus& stream, const std::vector<std::size_t>& points,
                                    const AdjectiveLexicon& lexicon, const Tagger& tagger);

}  // namespace driftforge
