#include <gtest/gtest.h>

#include <algorithm>

#include "driftforge/error.hpp"
#include "driftforge/lexswap.hpp"
#include "driftforge/rng.hpp"
#include "synthetic.hpp"

using namespace driftforge;

namespace {

constexpr const char* kGolden = "Good prices and friendly service, this is the epitome of a neighborhood hotspot.";

const AdjectiveLexicon& wordnet() {
  static const AdjectiveLexicon lexicon = load_wordnet_adjectives(DRIFTFORGE_TEST_WORDNET_DIR);
  return lexicon;
}

std::vector<std::string> surfaces(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& t : tokenize(text)) out.push_back(t.surface);
  return out;
}

std::size_t word_count(std::string_view text) {
  const auto tokens = tokenize(text);
  return static_cast<std::size_t>(std::count_if(tokens.begin(), tokens.end(), [](const Token& t) { return t.is_word; }));
}

// Tiny WNdb pair: "warm" (sense 1 antonym "cool"; sense 2 none), "cool",
// "lukewarm" (multiword antonym only), "hot" (lemma-specific pointer).
struct MiniWordNet {
  std::string dir;
  MiniWordNet(const std::string& name, const std::string& index, const std::string& data) {
    dir = fixtures::fresh_temp_dir(name);
    fixtures::write_text(dir + "/index.adj", index);
    fixtures::write_text(dir + "/data.adj", data);
  }
};

const char* kMiniData =
    "  1 license preamble line\n"
    "00000100 00 a 01 warm 0 001 ! 00000200 a 0101 | sense one\n"
    "00000200 00 a 01 cool 0 001 ! 00000100 a 0101 | opposite\n"
    "00000300 00 s 01 warm 1 000 | sense two without antonym\n"
    "00000400 00 a 01 lukewarm 0 001 ! 00000500 a 0101 | tepid\n"
    "00000500 00 a 01 piping_hot(a) 0 000 | multiword\n"
    "00000600 00 a 02 hot 0 red-hot 0 001 ! 00000200 a 0101 | only hot points to cool\n";

const char* kMiniIndex =
    "  1 license preamble line\n"
    "cool a 1 1 ! 1 0 00000200\n"
    "hot a 1 1 ! 1 0 00000600\n"
    "lukewarm a 1 1 ! 1 0 00000400\n"
    "red-hot a 1 0 1 0 00000600\n"
    "warm a 2 1 ! 2 0 00000300 00000100\n";

}  // namespace

TEST(Tokenize, Basics) {
  EXPECT_EQ(surfaces("Good prices and friendly service,"),
            (std::vector<std::string>{"Good", "prices", "and", "friendly", "service", ","}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(surfaces("co-op"), (std::vector<std::string>{"co", "-", "op"}));
  EXPECT_EQ(surfaces("don't  stop!!"), (std::vector<std::string>{"don't", "stop", "!", "!"}));
  EXPECT_EQ(surfaces("café olé"), (std::vector<std::string>{"café", "olé"}));
  const auto t = tokenize("Hi, BOB");
  EXPECT_EQ(t[2].norm, "bob");
  EXPECT_FALSE(t[1].is_word);
  EXPECT_EQ(t[2].begin, 4u);
  EXPECT_EQ(t[2].end, 7u);
}

TEST(Tokenize, LosslessOnRandomBytes) {
  Rng rng(3);
  const std::string alphabet = "ab Z9'-,.!?\t\n\xc3\xa9";
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    const auto n = rng.uniform_index(40);
    for (std::size_t i = 0; i < n; ++i) text += alphabet[rng.uniform_index(alphabet.size())];
    const auto tokens = tokenize(text);
    std::string rebuilt;
    std::size_t pos = 0;
    for (const auto& tok : tokens) {
      ASSERT_GE(tok.begin, pos);
      rebuilt += text.substr(pos, tok.begin - pos);
      EXPECT_EQ(text.substr(tok.begin, tok.end - tok.begin), tok.surface);
      for (std::size_t i = pos; i < tok.begin; ++i) EXPECT_TRUE(std::isspace(static_cast<unsigned char>(text[i])));
      rebuilt += tok.surface;
      pos = tok.end;
    }
    rebuilt += text.substr(pos);
    EXPECT_EQ(rebuilt, text);
  }
}

TEST(WordNet, KnownAntonyms) {
  const auto& wn = wordnet();
  EXPECT_GT(wn.size(), 20000u);
  const auto* friendly = wn.find("friendly");
  ASSERT_NE(friendly, nullptr);
  ASSERT_FALSE(friendly->empty());
  ASSERT_FALSE(friendly->front().empty());
  EXPECT_EQ(friendly->front().front(), "unfriendly");

  const auto* good = wn.find("good");
  ASSERT_NE(good, nullptr);
  EXPECT_TRUE(std::any_of(good->begin(), good->end(), [](const auto& sense) {
    return std::find(sense.begin(), sense.end(), "bad") != sense.end();
  }));
  EXPECT_EQ(wn.antonym_for("good"), "bad");
  EXPECT_EQ(wn.antonym_for("friendly"), "unfriendly");
  EXPECT_EQ(wn.find("zzzyqx"), nullptr);
  EXPECT_FALSE(wn.antonym_for("epitome").has_value());
}

TEST(WordNet, MiniDatabase) {
  const MiniWordNet mini("wn_ok", kMiniIndex, kMiniData);
  const auto lex = load_wordnet_adjectives(mini.dir);
  EXPECT_EQ(lex.size(), 5u);
  const auto* warm = lex.find("warm");
  ASSERT_NE(warm, nullptr);
  ASSERT_EQ(warm->size(), 2u);
  EXPECT_TRUE((*warm)[0].empty());
  EXPECT_EQ((*warm)[1], (AdjectiveLexicon::Sense{"cool"}));
  EXPECT_EQ(lex.antonym_for("warm"), "cool");
  EXPECT_EQ(lex.find("lukewarm")->front(), (AdjectiveLexicon::Sense{"piping_hot"}));
  EXPECT_FALSE(lex.antonym_for("lukewarm").has_value());
  EXPECT_EQ(lex.antonym_for("hot"), "cool");
  EXPECT_FALSE(lex.antonym_for("red-hot").has_value());
}

TEST(WordNet, Errors) {
  const MiniWordNet dangling("wn_dangling", "warm a 1 0 1 0 00000999\n", kMiniData);
  try {
    load_wordnet_adjectives(dangling.dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("dangling"), std::string::npos) << e.what();
  }
  const MiniWordNet malformed("wn_malformed", kMiniIndex, std::string(kMiniData) + "00000700 00 a zz\n");
  try {
    load_wordnet_adjectives(malformed.dir);
    FAIL();
  } catch (const Error& e) {
    const std::string offset = std::to_string(std::string(kMiniData).size());
    EXPECT_NE(std::string(e.what()).find("byte offset " + offset), std::string::npos) << e.what();
  }
  EXPECT_THROW(load_wordnet_adjectives(fixtures::fresh_temp_dir("wn_empty")), Error);
}

TEST(Tagger, GoldenSentence) {
  const auto tokens = tokenize(kGolden);
  const auto tags = tag(tokens, wordnet());
  std::vector<std::string> adjectives;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tags[i] == PosTag::Adjective) adjectives.push_back(tokens[i].surface);
  EXPECT_EQ(adjectives, (std::vector<std::string>{"Good", "friendly"}));
}

TEST(Tagger, PunctuationAndOverTrigger) {
  for (auto t : tag(tokenize("?!, ... ;"), wordnet())) EXPECT_EQ(t, PosTag::Other);
  EXPECT_EQ(tag(tokenize("the good"), wordnet())[1], PosTag::Adjective);
  EXPECT_EQ(tag(tokenize("the good man"), wordnet())[1], PosTag::Adjective);
  for (const char* word : {"a", "the", "this", "that", "is", "are"})
    EXPECT_EQ(tag(tokenize(word), wordnet())[0], PosTag::Other) << word;
}

TEST(AdjectiveSwap, GoldenSentence) {
  const auto r = adjective_swap(kGolden, wordnet());
  EXPECT_EQ(r.text, "Bad prices and unfriendly service, this is the epitome of a neighborhood hotspot.");
  EXPECT_EQ(r.replaced, 2u);
}

TEST(AdjectiveSwap, NothingToSwap) {
  const auto r = adjective_swap("12345 !!!", wordnet());
  EXPECT_EQ(r.text, "12345 !!!");
  EXPECT_EQ(r.replaced, 0u);
}

TEST(AdjectiveSwap, CapitalizationAndLexiconMembership) {
  const MiniWordNet mini("wn_swap", kMiniIndex, kMiniData);
  const auto lex = load_wordnet_adjectives(mini.dir);
  EXPECT_EQ(adjective_swap("Warm tea, warm  HOT; lukewarm.", lex).text, "Cool tea, cool  Cool; lukewarm.");
}

TEST(AdjectiveSwap, TokenCountAndBytesOutsideSpans) {
  Rng rng(17);
  const std::vector<std::string> vocab{"good", "bad", "friendly", "service", "the", "price", "happy", "Cold",
                                       "hot", "room", ",", ".", "and", "very", "clean", "quiet", "!"};
  const auto& wn = wordnet();
  const LexiconTagger tagger(wn);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const auto n = 1 + rng.uniform_index(12);
    for (std::size_t i = 0; i < n; ++i) text += (i ? " " : "") + vocab[rng.uniform_index(vocab.size())];
    const auto r = adjective_swap(text, wn, tagger);
    ASSERT_EQ(word_count(r.text), word_count(text)) << text;

    const auto before = tokenize(text);
    const auto after = tokenize(r.text);
    ASSERT_EQ(before.size(), after.size());
    const auto tags = tagger.tag(before);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < before.size(); ++i) {
      if (before[i].surface == after[i].surface) continue;
      ++changed;
      EXPECT_EQ(tags[i], PosTag::Adjective);
      const auto antonym = wn.antonym_for(before[i].norm);
      ASSERT_TRUE(antonym.has_value());
      EXPECT_EQ(after[i].norm, *antonym);
      bool registered = false;
      for (const auto& sense : *wn.find(before[i].norm))
        registered |= std::find(sense.begin(), sense.end(), *antonym) != sense.end();
      EXPECT_TRUE(registered);
    }
    EXPECT_EQ(changed, r.replaced);
    EXPECT_EQ(adjective_swap(text, wn, tagger).text, r.text);
  }
}

TEST(AdjectiveSwapStream, Regions) {
  auto c = fixtures::random_stream(9, 3, 2);
  for (auto& inst : c.instances) inst.text = "good food";
  const LexiconTagger tagger(wordnet());

  const auto one = adjective_swap_stream(c, {4}, wordnet(), tagger);
  for (std::size_t i = 0; i < 9; ++i) {
    EXPECT_EQ(one.stream.instances[i].text, i < 4 ? "good food" : "bad food");
    EXPECT_EQ(one.stream.instances[i].label, c.instances[i].label);
  }
  EXPECT_EQ(one.annotations, (std::vector<DriftAnnotation>{{4, DriftKind::AdjSwap}}));

  const auto three = adjective_swap_stream(c, {2, 4, 6}, wordnet(), tagger);
  const std::vector<std::string> expected{"good food", "good food", "bad food", "bad food", "good food",
                                          "good food", "bad food",  "bad food", "bad food"};
  for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(three.stream.instances[i].text, expected[i]);

  const auto beyond = adjective_swap_stream(c, {20}, wordnet(), tagger);
  EXPECT_EQ(beyond.stream.instances, c.instances);
  EXPECT_THROW(adjective_swap_stream(c, {3, 3}, wordnet(), tagger), Error);
}
