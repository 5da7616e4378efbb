#include <gtest/gtest.h>

#include <sstream>

#include "cpac/harness.hpp"

using namespace cpac;

namespace {

Experiment make(HypothesisClass c, Learner a, FiniteDistribution d, std::uint64_t trials, std::uint64_t seed,
                std::optional<std::uint64_t> m = std::nullopt) {
  return {std::move(c), std::move(a), std::move(d), Rational(1, 10), Rational(1, 10), trials, RandomSeed{seed}, m};
}

std::string render(const ExperimentReport& r) {
  std::ostringstream out;
  emit_report(out, r);
  return out.str();
}

// Minimal independent reader for the report: rows and footer by key.
struct ParsedReport {
  std::vector<std::vector<std::string>> rows;
  std::map<std::string, std::string> footer;
};

ParsedReport parse_report(const std::string& text) {
  ParsedReport p;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto comma = line.find(',');
      p.footer[line.substr(2, comma - 2)] = line.substr(comma + 1);
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    p.rows.push_back(cells);
  }
  return p;
}

}  // namespace

TEST(BayesRisk, Examples) {
  const auto realizable = resolve_distribution("realizable-threshold:3", 8);
  EXPECT_EQ(bayes_risk(build_threshold_class(8), realizable), 0);
  EXPECT_EQ(bayes_risk(build_monotone_class(8), realizable), 0);

  const HypothesisClass only_zero = EnumeratedClass::from_list(4, {Hypothesis::constant_zero(4)});
  EXPECT_EQ(bayes_risk(only_zero, FiniteDistribution::point_mass({Point{3}, Label::one})), 1);

  const auto split = FiniteDistribution::uniform({{Point{0}, Label::one}, {Point{3}, Label::zero}});
  EXPECT_EQ(bayes_risk(build_monotone_class(4), split), Rational(1, 2));
  EXPECT_EQ(bayes_risk(build_threshold_class(4), split), Rational(1, 2));
}

TEST(BayesRisk, TreeMatchesMaterializedScan) {
  Rng rng(RandomSeed{77});
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint64_t w = 2 + rng.below(6);
    std::vector<FiniteDistribution::Atom> atoms;
    std::set<Point> used;
    for (std::size_t i = 0, n = 1 + rng.below(4); i < n; ++i) {
      const Point x{rng.below(w)};
      if (!used.insert(x).second) continue;
      atoms.push_back({{x, label_of(rng.coin())}, Rational(1 + rng.below(5))});
    }
    Rational total = 0;
    for (const auto& a : atoms) total += a.weight;
    for (auto& a : atoms) a.weight /= total;
    const FiniteDistribution d(atoms);
    for (const HypothesisClass& c : {HypothesisClass(build_cut_class(w)), HypothesisClass(build_monotone_class(w))}) {
      Rational best = 1;
      for (const auto& h : materialize(c)) best = std::min(best, true_error(h, d));
      EXPECT_EQ(bayes_risk(c, d), best);
    }
  }
}

TEST(PacExperiment, PointMassAlwaysSucceeds) {
  const HypothesisClass c = build_threshold_class(8);
  const auto r = run_pac_experiment(make(c, erm(c), FiniteDistribution::point_mass({Point{2}, Label::one}), 1, 5));
  ASSERT_EQ(r.trials.size(), 1u);
  EXPECT_EQ(r.success_rate, 1);
  EXPECT_TRUE(r.verdict);
  EXPECT_EQ(r.vc_dimension, 1u);
  EXPECT_EQ(r.m, sample_size(Rational(1, 10), Rational(1, 10), 1));
}

TEST(PacExperiment, WrongConstantLearnerAlwaysFails) {
  const HypothesisClass c = build_threshold_class(8);
  const auto r = run_pac_experiment(
      make(c, constant_learner(Hypothesis::constant_zero(8)), FiniteDistribution::point_mass({Point{2}, Label::one}), 20, 5, 3));
  EXPECT_EQ(r.success_rate, 0);
  EXPECT_FALSE(r.verdict);
  for (const auto& t : r.trials) EXPECT_EQ(t.regret, 1);
}

TEST(PacExperiment, ReproducibleAndSeeded) {
  const HypothesisClass c = build_threshold_class(10);
  const auto d = resolve_distribution("uniform-labels", 10);
  const auto a = run_pac_experiment(make(c, erm(c), d, 30, 11, 20));
  const auto b = run_pac_experiment(make(c, erm(c), d, 30, 11, 20));
  EXPECT_EQ(render(a), render(b));
  const auto other = run_pac_experiment(make(c, erm(c), d, 30, 12, 20));
  EXPECT_NE(render(a), render(other));
  for (const auto& t : a.trials) {
    EXPECT_EQ(t.seed, derive_seed(RandomSeed{11}, t.trial));
    EXPECT_GE(t.regret, 0);
    EXPECT_EQ(t.true_error, true_error(erm(c)(draw_sample(d, 20, t.seed)), d));
  }
}

TEST(Report, RowsFooterAndRoundTrip) {
  const HypothesisClass c = build_threshold_class(6);
  const auto r = run_pac_experiment(make(c, erm(c), resolve_distribution("uniform-labels", 6), 3, 9, 4));
  const auto text = render(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), "trial,seed,true_error,regret,success,true_error_decimal,regret_decimal");
  const auto p = parse_report(text);
  ASSERT_EQ(p.rows.size(), 3u);
  std::uint64_t successes = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    ASSERT_EQ(p.rows[i].size(), 7u);
    EXPECT_EQ(p.rows[i][0], std::to_string(i));
    EXPECT_EQ(std::stoull(p.rows[i][1]), r.trials[i].seed.value);
    EXPECT_EQ(parse_rational(p.rows[i][2]), r.trials[i].true_error);
    EXPECT_EQ(parse_rational(p.rows[i][3]), r.trials[i].regret);
    successes += p.rows[i][4] == "1";
  }
  EXPECT_EQ(p.footer.at("m"), "4");
  EXPECT_EQ(p.footer.at("bayes_risk"), "1/2");
  EXPECT_EQ(std::stoull(p.footer.at("successes")), successes);
  EXPECT_EQ(parse_rational(p.footer.at("success_rate")), Rational(successes, 3));
  EXPECT_EQ(p.footer.at("verdict"), r.verdict ? "true" : "false");
  EXPECT_EQ(p.footer.count("note"), 1u);
}

TEST(Config, ParseOverrideAndValidate) {
  std::istringstream in("# experiment\nclass = monotone\nwindow = 12\ndistribution = realizable-threshold:4\n"
                        "epsilon = 1/5\ntrials=7\nseed = 3\n");
  auto cfg = read_config(in);
  EXPECT_EQ(cfg.class_spec, "monotone");
  EXPECT_EQ(cfg.window, 12u);
  EXPECT_EQ(cfg.epsilon, Rational(1, 5));
  EXPECT_EQ(cfg.trials, 7u);
  EXPECT_EQ(cfg.seed.value, 3u);
  cfg.set("learner", "zero");
  EXPECT_EQ(cfg.learner_spec, "zero");
  EXPECT_NO_THROW(cfg.validate());

  const auto ex = resolve(cfg);
  EXPECT_TRUE(std::holds_alternative<TreeClass>(ex.cls));
  EXPECT_EQ(ex.learner.proper_for(), nullptr);

  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(read_config(unknown), ParseError);
  std::istringstream no_eq("class monotone\n");
  EXPECT_THROW(read_config(no_eq), ParseError);
  ExperimentConfig bad;
  bad.distribution_spec = "uniform-labels";
  bad.epsilon = 0;
  EXPECT_THROW(bad.validate(), ParseError);
  bad.epsilon = Rational(1, 2);
  bad.trials = 0;
  EXPECT_THROW(bad.validate(), ParseError);
  EXPECT_THROW(ExperimentConfig{}.validate(), ParseError);
}

TEST(Resolve, LearnersAndDistributions) {
  const HypothesisClass c = build_threshold_class(5);
  EXPECT_EQ(to_string(resolve_learner("const:2", c)(Sample{}).table()), "00111");
  EXPECT_THROW(resolve_learner("const:9", c), ParseError);
  EXPECT_THROW(resolve_learner("bogus", c), ParseError);
  EXPECT_THROW(resolve_learner("prefix-m", HypothesisClass(build_cut_class(5))), ParseError);
  EXPECT_EQ(to_string(resolve_learner("stage:1", c)(Sample(2, Example{Point{0}, Label::zero})).table()), "11111");

  EXPECT_EQ(resolve_distribution("uniform-labels", 3).support().size(), 6u);
  EXPECT_EQ(resolve_distribution("point-mass:7:1", 3).support().size(), 1u);
  EXPECT_THROW(resolve_distribution("/nonexistent/dist.txt", 3), Error);
}
