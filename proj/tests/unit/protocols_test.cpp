#include <gtest/gtest.h>

#include <sstream>

#include "expose/protocols.hpp"
#include "expose/streamgen.hpp"

namespace expose {
namespace {

std::shared_ptr<const FeatureMap> rks2(std::size_t r = 500) {
  return std::make_shared<const FeatureMap>(RksProjection::fit(2, r, 1.0, 3));
}

std::vector<LabeledInstance> separable_stream(std::size_t n) {
  std::vector<LabeledInstance> s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 10 == 9) s.push_back({{50.0, 50.0}, Label::anomaly, 0});
    else s.push_back({{0.0, 0.0}, Label::normal, 0});
  }
  return s;
}

TEST(Prequential, EmptyStream) {
  ExposeModel m(rks2(), OnlineMode{});
  EXPECT_TRUE(prequential_eval({}, m, {}).empty());
}

TEST(Prequential, PerfectSeparationGivesOne) {
  const auto stream = separable_stream(300);
  ExposeModel m(rks2(), OnlineMode{});
  PrequentialOptions o;
  o.theta = 0.5;
  const auto records = prequential_eval(stream, m, o);
  ASSERT_EQ(records.size(), 300u);
  for (const auto& r : records) {
    ASSERT_EQ(r.metrics.size(), 1u);
    EXPECT_EQ(r.metrics[0].name, "balanced_accuracy");
    EXPECT_EQ(r.metrics[0].value, 1.0) << r.index;
  }
  EXPECT_EQ(records.front().index, 1u);
  EXPECT_EQ(records.back().index, 300u);
  EXPECT_EQ(m.count(), 300u);
}

TEST(Prequential, TrailingWindowForgetsOldMistakes) {
  // theta above any attainable score: every call is "anomaly".
  const auto stream = separable_stream(50);
  ExposeModel m(rks2(), OnlineMode{});
  PrequentialOptions o;
  o.theta = 1e9;
  o.trailing_window = 10;
  const auto records = prequential_eval(stream, m, o);
  // Window of 10 holds 9 normals (recall 0) and 1 anomaly (recall 1) once full.
  EXPECT_EQ(records[29].metrics[0].value, 0.5);
  // The first instance is called normal before any observation.
  EXPECT_EQ(records[0].metrics[0].value, 1.0);
  EXPECT_EQ(records[1].metrics[0].value, 0.5);
}

TEST(Prequential, ScoreStrictlyPrecedesUpdate) {
  auto stream = separable_stream(40);
  stream[25] = {{-30.0, 10.0}, Label::anomaly, 0};
  ExposeModel replay(rks2(), OnlineMode{});
  for (std::size_t i = 0; i < 25; ++i) replay.update(stream[i].x);
  const double before = replay.score(stream[25].x).raw;

  ExposeModel m(rks2(), OnlineMode{});
  PrequentialOptions o;
  o.theta = 0.5;
  double seen = -1.0;
  o.on_score = [&](std::size_t t, const ScoredInstance& s) {
    if (t == 25) seen = s.raw;
  };
  prequential_eval(stream, m, o);
  EXPECT_EQ(seen, before);
  EXPECT_LT(std::abs(seen), 0.2);
}

TEST(Holdout, RecordCount) {
  StreamSpec spec;
  spec.concepts = {Concept{{{{0.0, 0.0}, 1.0, 1.0}}}};
  spec.lengths = {9000};
  spec.anomaly_rate = 0.01;
  spec.seed = 2;
  const auto stream = generate(spec);
  std::map<std::size_t, std::vector<LabeledInstance>> sets{{0, holdout_for_concept(spec, 0, 20, 20, 9)}};
  ExposeModel m(rks2(20), DecayMode(0.05));
  HoldoutOptions o;
  o.theta = 0.5;
  o.every = 25;
  const auto records = holdout_eval(stream, m, sets, o);
  ASSERT_EQ(records.size(), 360u);
  EXPECT_EQ(records[0].index, 25u);
  EXPECT_EQ(records.back().index, 9000u);
  for (const auto& r : records) {
    ASSERT_EQ(r.metrics.size(), 2u);
    EXPECT_EQ(r.metrics[0].name, "auc");
    EXPECT_GE(r.metrics[0].value, 0.0);
    EXPECT_LE(r.metrics[0].value, 1.0);
    EXPECT_GE(r.metrics[1].value, 0.0);
    EXPECT_LE(r.metrics[1].value, 1.0);
  }
}

TEST(Holdout, MissingIntervalThrows) {
  const auto stream = separable_stream(30);
  ExposeModel m(rks2(), OnlineMode{});
  HoldoutOptions o;
  o.every = 10;
  EXPECT_THROW(holdout_eval(stream, m, {}, o), std::invalid_argument);
  ExposeModel m2(rks2(), OnlineMode{});
  EXPECT_TRUE(holdout_eval({}, m2, {}, o).empty());
}

TEST(Holdout, UsesIntervalMapping) {
  const auto stream = separable_stream(20);
  std::map<std::size_t, std::vector<LabeledInstance>> sets{
      {7, {{{0.0, 0.0}, Label::normal, 7}, {{40.0, 40.0}, Label::anomaly, 7}}}};
  ExposeModel m(rks2(), OnlineMode{});
  HoldoutOptions o;
  o.theta = 0.5;
  o.every = 5;
  const auto records = holdout_eval(stream, m, sets, o, [](std::size_t) { return std::size_t{7}; });
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].metrics[0].value, 1.0);
  EXPECT_EQ(records[0].metrics[1].value, 1.0);
}

TEST(Records, DelimitedRows) {
  std::vector<EvalRecord> r{{25, Protocol::holdout, {{"auc", 0.75}, {"balanced_accuracy", 0.1}}}};
  std::ostringstream out;
  write_records(out, r);
  EXPECT_EQ(out.str(), "index,protocol,metric,value\n25,holdout,auc,0.75\n25,holdout,balanced_accuracy,0.1\n");
}

}  // namespace
}  // namespace expose
