#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "driftforge/corpus.hpp"
#include "driftforge/error.hpp"
#include "synthetic.hpp"

using namespace driftforge;

namespace {

Corpus read(const std::string& text, const FieldMapping& mapping = {}) {
  std::istringstream in(text);
  return read_corpus(in, mapping, "t");
}

std::string error_of(const std::string& text, const FieldMapping& mapping = {}) {
  try {
    read(text, mapping);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Timestamp, ParsesDatesAndOffsets) {
  EXPECT_EQ(parse_timestamp("1970-01-01"), 0);
  EXPECT_EQ(parse_timestamp("1970-01-02T00:00:00Z"), 86400);
  EXPECT_EQ(parse_timestamp("2016-03-09 00:44:42"), parse_timestamp("2016-03-09T00:44:42Z"));
  EXPECT_EQ(parse_timestamp("2016-03-09T02:44:42.999+02:00"), parse_timestamp("2016-03-09T00:44:42Z"));
  EXPECT_EQ(parse_timestamp("2016-03-09T00:44-0130"), parse_timestamp("2016-03-09T02:14:00Z"));
  EXPECT_EQ(format_timestamp(parse_timestamp("2012-02-29T23:59:59Z")), "2012-02-29T23:59:59Z");
  EXPECT_EQ(year_of(parse_timestamp("2019-12-31T23:59:59Z")), 2019);
  EXPECT_EQ(year_of(parse_timestamp("1969-12-31T23:59:59Z")), 1969);
}

TEST(Timestamp, RejectsGarbage) {
  for (const char* bad : {"", "2016", "2016-13-01", "2016-02-30", "2016-03-09T25:00", "2016-03-09X", "yesterday"})
    EXPECT_THROW(parse_timestamp(bad), Error) << bad;
}

TEST(LoadCorpus, SortsByTimeAndInfersK) {
  const auto c = read(R"({"id":"a","ts":"2020-01-03","text":"x","label":2}
{"id":"b","ts":"2020-01-01","text":"y","label":0}

{"id":"c","ts":"2020-01-02","text":"z","label":1}
)");
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c.num_labels, 3);
  EXPECT_EQ(c.instances[0].id, "b");
  EXPECT_EQ(c.instances[1].id, "c");
  EXPECT_EQ(c.instances[2].id, "a");
}

TEST(LoadCorpus, TiesKeepFileOrder) {
  const auto c = read(R"({"id":"2","ts":"2020-01-01","text":"x","label":0}
{"id":"1","ts":"2020-01-01","text":"y","label":1}
{"id":"0","ts":"2019-01-01","text":"z","label":1}
)");
  EXPECT_EQ(c.instances[0].id, "0");
  EXPECT_EQ(c.instances[1].id, "2");
  EXPECT_EQ(c.instances[2].id, "1");
}

TEST(LoadCorpus, Errors) {
  EXPECT_NE(error_of("").find("empty corpus"), std::string::npos);
  EXPECT_NE(error_of("\n\n").find("empty corpus"), std::string::npos);
  const auto missing = error_of(R"({"id":"a","ts":"2020-01-01","text":"x","label":0}
{"id":"b","ts":"2020-01-01","label":0}
)");
  EXPECT_NE(missing.find("line 2"), std::string::npos) << missing;
  EXPECT_NE(missing.find("\"text\""), std::string::npos) << missing;
  EXPECT_NE(error_of("{not json}\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of(R"({"id":"a","ts":"soon","text":"x","label":0})").find("line 1"), std::string::npos);

  FieldMapping k2;
  k2.num_labels = 2;
  EXPECT_NE(error_of(R"({"id":"a","ts":"2020-01-01","text":"x","label":2})", k2).find("outside"), std::string::npos);
}

TEST(LoadCorpus, YelpStyleMapping) {
  FieldMapping m;
  m.id_field = "review_id";
  m.timestamp_field = "date";
  m.label_field = "stars";
  m.label_offset = -1;
  m.num_labels = 5;
  const auto c = read(R"({"review_id":"r1","date":"2016-03-09 00:44:42","text":"ok","stars":5,"useful":3}
{"review_id":"r2","date":"2015-01-01 10:00:00","text":"meh","stars":1.0})",
                      m);
  EXPECT_EQ(c.num_labels, 5);
  EXPECT_EQ(c.instances[0].label, 0);
  EXPECT_EQ(c.instances[1].label, 4);
}

TEST(LoadCorpus, StringLabels) {
  FieldMapping m;
  m.label_values = {"negative", "neutral", "positive"};
  const auto c = read(R"({"id":"a","ts":"2020-01-01","text":"x","label":"positive"}
{"id":"b","ts":"2020-01-02","text":"x","label":"negative"})",
                      m);
  EXPECT_EQ(c.num_labels, 3);
  EXPECT_EQ(c.instances[0].label, 2);
  EXPECT_EQ(c.instances[1].label, 0);
  EXPECT_NE(error_of(R"({"id":"a","ts":"2020-01-01","text":"x","label":"great"})", m).find("line 1"),
            std::string::npos);
}

TEST(LoadCorpus, CanonicalRoundTrip) {
  const auto c = fixtures::make_corpus(50, {0.5, 0.5}, 2014, 2016, 3);
  std::ostringstream out;
  write_corpus(out, c.instances);
  FieldMapping m;
  m.num_labels = 2;
  const auto back = read(out.str(), m);
  EXPECT_EQ(back.instances, c.instances);
  EXPECT_EQ(to_jsonl_line(c.instances[0]).find("{\"id\":"), 0u);
}

TEST(Quotas, LargestRemainder) {
  EXPECT_EQ(stratified_quotas({800, 150, 50}, 1000), (std::vector<std::size_t>{800, 150, 50}));
  EXPECT_EQ(stratified_quotas({1, 1, 1}, 2), (std::vector<std::size_t>{1, 1, 0}));
  EXPECT_EQ(stratified_quotas({5, 5}, 100), (std::vector<std::size_t>{50, 50}));
  const std::vector<std::size_t> counts{7, 13, 29, 51};
  for (std::size_t target = 1; target <= 100; ++target) {
    const auto q = stratified_quotas(counts, target);
    std::size_t sum = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
      const double exact = static_cast<double>(target) * counts[c] / 100.0;
      EXPECT_LT(std::abs(static_cast<double>(q[c]) - exact), 1.0);
      sum += q[c];
    }
    EXPECT_EQ(sum, target);
  }
}

TEST(Sampling, HalfAndHalf) {
  const auto c = fixtures::make_corpus(400, {0.5, 0.5}, 2014, 2016, 1);
  const auto s = sample_stratified_temporal(c, {100, 9});
  EXPECT_EQ(label_counts(s), (std::vector<std::size_t>{50, 50}));
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s.instances[i - 1].timestamp, s.instances[i].timestamp);
}

TEST(Sampling, FullLengthIsIdentity) {
  const auto c = fixtures::make_corpus(300, {0.2, 0.3, 0.5}, 2014, 2016, 2);
  const auto s = sample_stratified_temporal(c, {300, 4});
  EXPECT_EQ(s.instances, c.instances);
}

TEST(Sampling, SkewedProportionsBruteForceCount) {
  const auto c = fixtures::make_corpus(10000, {0.8, 0.15, 0.05}, 2010, 2020, 11);
  const auto s = sample_stratified_temporal(c, {1000, 7});
  std::map<int, std::size_t> counted;
  for (const auto& inst : s.instances) ++counted[inst.label];
  EXPECT_EQ(counted[0], 800u);
  EXPECT_EQ(counted[1], 150u);
  EXPECT_EQ(counted[2], 50u);
}

TEST(Sampling, SubsetDeterministicAndSeedSensitive) {
  const auto c = fixtures::make_corpus(2000, {0.6, 0.4}, 2014, 2016, 5);
  const auto a = sample_stratified_temporal(c, {500, 1});
  const auto b = sample_stratified_temporal(c, {500, 1});
  const auto other = sample_stratified_temporal(c, {500, 2});
  EXPECT_EQ(a.instances, b.instances);
  EXPECT_NE(a.instances, other.instances);
  std::set<std::string> ids;
  for (const auto& i : c.instances) ids.insert(i.id);
  std::set<std::string> seen;
  for (const auto& i : a.instances) {
    EXPECT_TRUE(ids.contains(i.id));
    EXPECT_TRUE(seen.insert(i.id).second);
  }
}

TEST(Sampling, Errors) {
  const auto c = fixtures::make_corpus(10, {0.5, 0.5}, 2014, 2016, 5);
  EXPECT_THROW(sample_stratified_temporal(c, {11, 0}), Error);
  EXPECT_THROW(sample_stratified_temporal(c, {0, 0}), Error);
}
