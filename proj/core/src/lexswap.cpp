#include "driftforge/lexswap.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <fmt/format.h>

#include "driftforge/error.hpp"

namespace driftforge {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c >= 0x80;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    Token tok;
    tok.begin = i;
    if (is_word_byte(c)) {
      while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
      tok.is_word = true;
    } else {
      ++i;
    }
    tok.end = i;
    tok.surface = std::string(text.substr(tok.begin, tok.end - tok.begin));
    tok.norm = tok.surface;
    std::transform(tok.norm.begin(), tok.norm.end(), tok.norm.begin(), [](unsigned char ch) {
      return ch < 0x80 ? static_cast<char>(std::tolower(ch)) : static_cast<char>(ch);
    });
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

bool is_single_word(std::string_view lemma) {
  return !lemma.empty() && std::all_of(lemma.begin(), lemma.end(), [](char c) {
    return is_word_byte(static_cast<unsigned char>(c));
  });
}

AdjectiveLexicon::AdjectiveLexicon(std::unordered_map<std::string, std::vector<Sense>> entries) {
  for (auto& [lemma, senses] : entries) {
    for (const auto& sense : senses) {
      const auto it = std::find_if(sense.begin(), sense.end(),
                                   [](const std::string& a) { return is_single_word(a); });
      if (it != sense.end()) {
        replacement_.emplace(lemma, *it);
        break;
      }
    }
    entries_.emplace(lemma, std::move(senses));
  }
}

const std::vector<AdjectiveLexicon::Sense>* AdjectiveLexicon::find(std::string_view lemma) const {
  const auto it = entries_.find(lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::string> AdjectiveLexicon::antonym_for(std::string_view lemma) const {
  const auto it = replacement_.find(lemma);
  if (it == replacement_.end()) return std::nullopt;
  return it->second;
}

std::vector<PosTag> LexiconTagger::tag(const std::vector<Token>& tokens) const {
  static constexpr std::array<std::string_view, 6> kNever = {"a", "the", "this", "that", "is", "are"};
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const bool adjective = tok.is_word && lexicon_->contains(tok.norm) &&
                           std::find(kNever.begin(), kNever.end(), tok.norm) == kNever.end();
    tags.push_back(adjective ? PosTag::Adjective : PosTag::Other);
  }
  return tags;
}

std::vector<PosTag> tag(const std::vector<Token>& tokens, const AdjectiveLexicon& lexicon) {
  return LexiconTagger(lexicon).tag(tokens);
}

SwapResult adjective_swap(std::string_view text, const AdjectiveLexicon& lexicon, const Tagger& tagger) {
  const auto tokens = tokenize(text);
  const auto tags = tagger.tag(tokens);
  if (tags.size() != tokens.size())
    throw Error(fmt::format("tagger returned {} tags for {} tokens", tags.size(), tokens.size()));

  SwapResult result;
  result.text.reserve(text.size() + 16);
  std::size_t copied = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tags[i] != PosTag::Adjective) continue;
    auto antonym = lexicon.antonym_for(tokens[i].norm);
    if (!antonym) continue;
    if (std::isupper(static_cast<unsigned char>(tokens[i].surface.front())))
      (*antonym)[0] = static_cast<char>(std::toupper(static_cast<unsigned char>((*antonym)[0])));
    result.text.append(text.substr(copied, tokens[i].begin - copied));
    result.text.append(*antonym);
    copied = tokens[i].end;
    ++result.replaced;
  }
  result.text.append(text.substr(copied));
  return result;
}

SwapResult adjective_swap(std::string_view text, const AdjectiveLexicon& lexicon) {
  return adjective_swap(text, lexicon, LexiconTagger(lexicon));
}

DriftedStream adjective_swap_stream(const Corpus& stream, const std::vector<std::size_t>& points,
                                    const AdjectiveLexicon& lexicon, const Tagger& tagger) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i] <= points[i - 1])
      throw Error(fmt::format("drift points must be strictly increasing ({} then {})", points[i - 1], points[i]));
  }
  DriftedStream out;
  out.stream = stream;
  out.spec.method = DriftMethod::AdjectiveSwap;
  out.spec.drift_points = points;
  out.source = stream.name;

  std::vector<std::size_t> active;
  for (const auto p : points) {
    if (p > stream.size()) {
      out.warnings.push_back(
          fmt::format("adjective swap point {} is beyond stream length {}; ignored", p, stream.size()));
      continue;
    }
    active.push_back(p);
    out.annotations.push_back({p, DriftKind::AdjSwap});
  }

  // Regions alternate: swapped after the 1st point, original after the 2nd, ...
  for (std::size_t r = 0; r < active.size(); r += 2) {
    const std::size_t end = r + 1 < active.size() ? active[r + 1] : stream.size();
    for (std::size_t i = active[r]; i < end; ++i) {
      auto& text = out.stream.instances[i].text;
      text = adjective_swap(text, lexicon, tagger).text;
    }
  }
  return out;
}

}  // namespace driftforge
