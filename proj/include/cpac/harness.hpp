#pragma once

// Monte-Carlo PAC experiments: resolve a textual configuration into a class,
// learner and distribution, run seeded trials, and emit a CSV report.

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cpac/classes.hpp"
#include "cpac/learners.hpp"
#include "cpac/machine.hpp"
#include "cpac/vc.hpp"

namespace cpac {

// min over the class of the true error. Trees are scanned through their
// realizable labelings of the support points rather than path by path.
inline Rational bayes_risk(const HypothesisClass& c, const FiniteDistribution& d) {
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) {
    const auto hs = enumerate(*e);
    if (hs.empty()) throw EmptyClass();
    Rational best = true_error(hs[0], d);
    for (std::size_t i = 1; i < hs.size(); ++i) best = std::min(best, true_error(hs[i], d));
    return best;
  }
  std::map<Point, std::pair<Rational, Rational>> mass;  // point -> (weight on 0, weight on 1)
  for (const auto& [pair, w] : d.support()) (pair.y == Label::one ? mass[pair.x].second : mass[pair.x].first) += w;
  std::vector<Point> points;
  for (const auto& [x, _] : mass) points.push_back(x);
  const auto labelings = realizable_labelings(c, points);
  if (labelings.empty()) throw EmptyClass();
  std::optional<Rational> best;
  for (const auto& v : labelings) {
    Rational err = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      const auto& [w0, w1] = mass[points[j]];
      err += v[j] == Label::one ? w0 : w1;
    }
    if (!best || err < *best) best = err;
  }
  return *best;
}

// ---- configuration ----------------------------------------------------------

// Text-level experiment description; one `key = value` per line in files.
struct ExperimentConfig {
  std::string class_spec = "thresholds";
  std::string learner_spec = "erm";
  std::string distribution_spec;
  std::uint64_t window = 16;
  std::uint64_t budget = 32;
  std::uint64_t max_index = 16;
  Rational epsilon{1, 10};
  Rational delta{1, 10};
  std::uint64_t trials = 100;
  RandomSeed seed{0};
  std::optional<std::uint64_t> m_override;

  void set(const std::string& key, const std::string& value) {
    if (key == "class")
      class_spec = value;
    else if (key == "learner")
      learner_spec = value;
    else if (key == "distribution")
      distribution_spec = value;
    else if (key == "window")
      window = detail::parse_natural(value);
    else if (key == "budget")
      budget = detail::parse_natural(value);
    else if (key == "max")
      max_index = detail::parse_natural(value);
    else if (key == "epsilon")
      epsilon = parse_rational(value);
    else if (key == "delta")
      delta = parse_rational(value);
    else if (key == "trials")
      trials = detail::parse_natural(value);
    else if (key == "seed")
      seed = RandomSeed{detail::parse_natural(value)};
    else if (key == "m")
      m_override = detail::parse_natural(value);
    else
      throw ParseError("unknown config key '" + key + "'");
  }

  void validate() const {
    if (trials < 1) throw ParseError("trials must be at least 1");
    if (epsilon <= 0 || epsilon >= 1) throw ParseError("epsilon must lie in (0,1)");
    if (delta <= 0 || delta >= 1) throw ParseError("delta must lie in (0,1)");
    if (distribution_spec.empty()) throw ParseError("no distribution given");
  }
};

inline ExperimentConfig read_config(std::istream& in, ExperimentConfig cfg = {}) {
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line must be 'key = value': '" + line + "'");
    cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ExperimentConfig read_config_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_config(in);
}

// Built-in families by name, otherwise a class file.
//   thresholds, monotone, cut, full, all-functions, counterexample
inline HypothesisClass resolve_class(const std::string& spec, std::uint64_t window, std::uint64_t budget,
                                     std::uint64_t max_index) {
  if (spec == "thresholds") return build_threshold_class(window);
  if (spec == "monotone") return build_monotone_class(window);
  if (spec == "cut") return build_cut_class(window);
  if (spec == "full") return build_full_tree(window);
  if (spec == "all-functions") return build_all_functions_class(window);
  if (spec == "counterexample") {
    const std::uint64_t w = std::max(window, counterexample_window(max_index, budget));
    return build_counterexample_class(max_index, budget, w);
  }
  return read_class_file(spec);
}

inline HypothesisClass resolve_class(const ExperimentConfig& cfg) {
  return resolve_class(cfg.class_spec, cfg.window, cfg.budget, cfg.max_index);
}

// Learner specs:
//   erm        exact ERM (tree ERM for tree classes)
//   prefix-m   ERM over the first min(m, B) hypotheses on size-m samples
//   stage:K    ERM over the first K hypotheses
//   const:I    always the I-th hypothesis of the class
//   zero       the all-zero hypothesis on the class window (may leave the class)
inline Learner resolve_learner(const std::string& spec, const HypothesisClass& c) {
  if (spec == "erm") return erm(c);
  if (spec == "zero") return constant_learner(Hypothesis::constant_zero(window_of(c)));
  if (spec.rfind("const:", 0) == 0) {
    const auto index = detail::parse_natural(spec.substr(6));
    const auto members = materialize(c);
    if (index >= members.size()) throw ParseError("learner index out of range: " + spec);
    return constant_learner(members[index]);
  }
  const auto* e = std::get_if<EnumeratedClass>(&c);
  if (spec == "prefix-m" || spec.rfind("stage:", 0) == 0) {
    if (e == nullptr) throw ParseError("learner '" + spec + "' needs an enumerated class");
    if (spec == "prefix-m") return asymptotic_erm(*e, [](std::size_t m) { return std::uint64_t{m}; }, {}).learner;
    const auto k = detail::parse_natural(spec.substr(6));
    return asymptotic_erm(*e, [k](std::size_t) { return k; }, {}).learner;
  }
  throw ParseError("unknown learner '" + spec + "'");
}

// Distribution scenarios on window W:
//   realizable-threshold:K   uniform over x < W, labeled [x >= K]
//   uniform-labels           uniform over all (x, y) with x < W
//   point-mass:X:Y           all weight on (X, Y)
// anything else is read as a distribution file.
inline FiniteDistribution resolve_distribution(const std::string& spec, std::uint64_t window) {
  const auto fields = detail::split(spec, ':');
  if (fields[0] == "realizable-threshold" && fields.size() == 2) {
    const auto k = detail::parse_natural(fields[1]);
    std::vector<Example> pairs;
    for (std::uint64_t x = 0; x < window; ++x) pairs.push_back({Point{x}, label_of(x >= k)});
    return FiniteDistribution::uniform(pairs);
  }
  if (fields[0] == "uniform-labels" && fields.size() == 1) {
    std::vector<Example> pairs;
    for (std::uint64_t x = 0; x < window; ++x)
      for (Label y : {Label::zero, Label::one}) pairs.push_back({Point{x}, y});
    return FiniteDistribution::uniform(pairs);
  }
  if (fields[0] == "point-mass" && fields.size() == 3)
    return FiniteDistribution::point_mass({Point{detail::parse_natural(fields[1])}, detail::parse_label(fields[2])});
  return read_distribution_file(spec);
}

struct Experiment {
  HypothesisClass cls;
  Learner learner;
  FiniteDistribution distribution;
  Rational epsilon;
  Rational delta;
  std::uint64_t trials;
  RandomSeed seed;
  std::optional<std::uint64_t> m_override;
};

inline Experiment resolve(const ExperimentConfig& cfg) {
  cfg.validate();
  HypothesisClass cls = resolve_class(cfg);
  Learner learner = resolve_learner(cfg.learner_spec, cls);
  return {std::move(cls),
          std::move(learner),
          resolve_distribution(cfg.distribution_spec, cfg.window),
          cfg.epsilon,
          cfg.delta,
          cfg.trials,
          cfg.seed,
          cfg.m_override};
}

// ---- running ----------------------------------------------------------------

struct TrialRecord {
  std::uint64_t trial = 0;
  RandomSeed seed;
  Rational true_error;
  Rational regret;
  bool success = false;
};

struct ExperimentReport {
  std::uint64_t m = 0;
  std::uint64_t vc_dimension = 0;
  Rational epsilon;
  Rational delta;
  Rational bayes_risk;
  RandomSeed seed;
  std::vector<TrialRecord> trials;
  std::uint64_t successes = 0;
  Rational success_rate;
  bool verdict = false;
};

// Trial i draws its sample with derive_seed(seed, i).
inline ExperimentReport run_pac_experiment(const Experiment& ex) {
  if (ex.trials < 1) throw DomainError("an experiment needs at least one trial");
  ExperimentReport r;
  r.epsilon = ex.epsilon;
  r.delta = ex.delta;
  r.seed = ex.seed;
  r.vc_dimension = vc_dimension(ex.cls, window_of(ex.cls), 4).dimension;
  r.m = ex.m_override ? *ex.m_override : sample_size(ex.epsilon, ex.delta, r.vc_dimension);
  r.bayes_risk = bayes_risk(ex.cls, ex.distribution);
  r.trials.reserve(ex.trials);
  for (std::uint64_t i = 0; i < ex.trials; ++i) {
    TrialRecord t;
    t.trial = i;
    t.seed = derive_seed(ex.seed, i);
    const Sample s = draw_sample(ex.distribution, r.m, t.seed);
    t.true_error = true_error(ex.learner(s), ex.distribution);
    t.regret = t.true_error - r.bayes_risk;
    // Improper learners can beat the class optimum; proper ones cannot.
    if (t.regret < 0 && ex.learner.proper_for() != nullptr)
      throw InvariantViolation("proper learner beat the best-in-class true error");
    t.success = t.regret <= ex.epsilon;
    r.successes += t.success ? 1 : 0;
    r.trials.push_back(std::move(t));
  }
  r.success_rate = Rational(r.successes, ex.trials);
  r.verdict = r.success_rate >= 1 - ex.delta;
  return r;
}

// ---- reports ----------------------------------------------------------------

// CSV rows "trial,seed,true_error,regret,success,true_error_decimal,regret_decimal"
// followed by '#'-prefixed "key,value" aggregate lines.
inline void emit_report(std::ostream& out, const ExperimentReport& r) {
  out << "trial,seed,true_error,regret,success,true_error_decimal,regret_decimal\n";
  for (const auto& t : r.trials)
    out << t.trial << ',' << t.seed.value << ',' << to_fraction_string(t.true_error) << ','
        << to_fraction_string(t.regret) << ',' << (t.success ? 1 : 0) << ',' << to_decimal_string(t.true_error)
        << ',' << to_decimal_string(t.regret) << '\n';
  out << "# m," << r.m << '\n'
      << "# vc_dimension," << r.vc_dimension << '\n'
      << "# epsilon," << to_fraction_string(r.epsilon) << '\n'
      << "# delta," << to_fraction_string(r.delta) << '\n'
      << "# bayes_risk," << to_fraction_string(r.bayes_risk) << '\n'
      << "# seed," << r.seed.value << '\n'
      << "# trials," << r.trials.size() << '\n'
      << "# successes," << r.successes << '\n'
      << "# success_rate," << to_fraction_string(r.success_rate) << '\n'
      << "# success_rate_decimal," << to_decimal_string(r.success_rate) << '\n'
      << "# verdict," << (r.verdict ? "true" : "false") << '\n'
      << "# note,spot check over one distribution; PAC learnability quantifies over all distributions\n";
}

inline void emit_report(const std::string& path, const ExperimentReport& r) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  emit_report(out, r);
  out.flush();
  if (!out) throw Error("failed writing report to '" + path + "'");
}

}  // namespace cpac
