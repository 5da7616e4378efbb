#pragma once

// Proper learners over enumerated and tree classes, and validators that check
// a learner's outputs against brute-force empirical risk minimization.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cpac/classes.hpp"

namespace cpac {

// A deterministic map from samples to hypotheses, optionally tagged with the
// class its outputs are supposed to stay in.
class Learner {
 public:
  using Apply = std::function<Hypothesis(const Sample&)>;

  explicit Learner(Apply apply, std::shared_ptr<const HypothesisClass> proper_for = nullptr)
      : apply_(std::move(apply)), proper_for_(std::move(proper_for)) {}

  Hypothesis operator()(const Sample& s) const { return apply_(s); }

  const HypothesisClass* proper_for() const { return proper_for_.get(); }

 private:
  Apply apply_;
  std::shared_ptr<const HypothesisClass> proper_for_;
};

namespace detail {

// Per-point label counts of a sample, sorted by point.
struct PointTally {
  Point x;
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

inline std::vector<PointTally> tally(const Sample& s) {
  std::map<Point, PointTally> by_point;
  for (const auto& [x, y] : s) {
    auto& t = by_point.try_emplace(x, PointTally{x}).first->second;
    (y == Label::one ? t.ones : t.zeros) += 1;
  }
  std::vector<PointTally> out;
  out.reserve(by_point.size());
  for (auto& [_, t] : by_point) out.push_back(t);
  return out;
}

inline std::size_t mistakes_on(const Hypothesis& h, const std::vector<PointTally>& tallies) {
  std::size_t m = 0;
  for (const auto& t : tallies) m += h(t.x) == Label::one ? t.zeros : t.ones;
  return m;
}

// Least index attaining the fewest mistakes.
inline std::size_t argmin_mistakes(const std::vector<Hypothesis>& hs, std::size_t count,
                                   const std::vector<PointTally>& tallies) {
  std::size_t best = 0;
  std::size_t best_mistakes = mistakes_on(hs[0], tallies);
  for (std::size_t i = 1; i < count && best_mistakes > 0; ++i) {
    const std::size_t m = mistakes_on(hs[i], tallies);
    if (m < best_mistakes) {
      best = i;
      best_mistakes = m;
    }
  }
  return best;
}

}  // namespace detail

// Exact ERM over the materialized enumeration; ties go to the least index and
// the empty sample yields index 0.
inline Learner erm_enumerated(const EnumeratedClass& c) {
  auto hs = std::make_shared<const std::vector<Hypothesis>>(enumerate(c));
  if (hs->empty()) throw EmptyClass();
  return Learner(
      [hs](const Sample& s) {
        if (s.empty()) return (*hs)[0];
        return (*hs)[detail::argmin_mistakes(*hs, hs->size(), detail::tally(s))];
      },
      std::make_shared<const HypothesisClass>(c));
}

// Lexicographically least member of length horizon that agrees with
// `labeling` on `points`, or nullopt when none exists.
inline std::optional<BitString> leftmost_agreeing_path(const TreeClass& t, std::span<const Point> points,
                                                       const LabelVector& labeling) {
  const std::uint64_t depth = points.empty() ? 0 : detail::max_point(points) + 1;
  if (depth > t.horizon()) throw HorizonExceeded("sample point beyond the tree horizon");
  std::vector<int> required(depth, -1);
  for (std::size_t j = 0; j < points.size(); ++j) required[points[j].value] = labeling[j] == Label::one ? 1 : 0;

  std::optional<BitString> prefix;
  for_each_live_string(t, depth, [&](const BitString& s) {
    for (std::uint64_t i = 0; i < depth; ++i)
      if (required[i] != -1 && required[i] != static_cast<int>(s[i])) return true;
    prefix = s;
    return false;
  });
  if (!prefix) return std::nullopt;

  BitString path = std::move(*prefix);
  while (path.size() < t.horizon()) {
    path.push_back(Label::zero);
    if (t.extends_to_horizon(path)) continue;
    path.back() = Label::one;
    if (!t.extends_to_horizon(path)) throw InvariantViolation("live tree node without a live child");
  }
  return path;
}

// ERM through a pruned tree: pick the realizable labeling of the sample's
// points with the fewest mistakes (ties: lexicographically least), then the
// leftmost path carrying it.
inline Learner erm_tree(const TreeClass& t) {
  if (!t.pruned()) throw DomainError("tree ERM needs a pruned tree");
  if (!t.extends_to_horizon(BitString{})) throw EmptyClass();
  auto tree = std::make_shared<const HypothesisClass>(t);
  return Learner(
      [tree](const Sample& s) {
        const auto& t = std::get<TreeClass>(*tree);
        const auto tallies = detail::tally(s);
        std::vector<Point> points;
        for (const auto& tl : tallies) {
          if (tl.x.value >= t.horizon())
            throw HorizonExceeded("sample point " + std::to_string(tl.x.value) + " beyond tree horizon " +
                                  std::to_string(t.horizon()));
          points.push_back(tl.x);
        }
        const auto labelings = realizable_labelings(*tree, points);
        const LabelVector* best = nullptr;
        std::size_t best_mistakes = 0;
        for (const auto& v : labelings) {
          std::size_t m = 0;
          for (std::size_t j = 0; j < v.size(); ++j) m += v[j] == Label::one ? tallies[j].zeros : tallies[j].ones;
          if (best == nullptr || m < best_mistakes) {
            best = &v;
            best_mistakes = m;
          }
        }
        if (best == nullptr) throw InvariantViolation("nonempty pruned tree realizes no labeling");
        auto path = leftmost_agreeing_path(t, points, *best);
        if (!path) throw InvariantViolation("realizable labeling has no agreeing path");
        return path_hypothesis(std::move(*path));
      },
      tree);
}

inline Learner erm(const HypothesisClass& c) {
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) return erm_enumerated(*e);
  return erm_tree(std::get<TreeClass>(c));
}

inline Learner constant_learner(Hypothesis h) {
  return Learner([h = std::move(h)](const Sample&) { return h; });
}

// Declared bound on the regret of an asymptotic ERM at each sample size.
// Sizes without an explicit entry get `fallback`.
class EpsilonSchedule {
 public:
  explicit EpsilonSchedule(std::map<std::size_t, Rational> values = {}, Rational fallback = 1)
      : values_(std::move(values)), fallback_(std::move(fallback)) {
    const auto check = [](const Rational& r) {
      if (r < 0 || r > 1) throw DomainError("epsilon schedule values must lie in [0,1]");
    };
    for (const auto& [_, v] : values_) check(v);
    check(fallback_);
  }

  static EpsilonSchedule constant(Rational eps) { return EpsilonSchedule({}, std::move(eps)); }

  Rational at(std::size_t m) const {
    const auto it = values_.find(m);
    return it == values_.end() ? fallback_ : it->second;
  }

  const std::map<std::size_t, Rational>& values() const { return values_; }
  const Rational& fallback() const { return fallback_; }

  // eps_m <= envelope(m) for 1 <= m <= horizon.
  template <typename Envelope>
  bool within_envelope(Envelope&& envelope, std::size_t horizon) const {
    for (std::size_t m = 1; m <= horizon; ++m)
      if (at(m) > envelope(m)) return false;
    return true;
  }

 private:
  std::map<std::size_t, Rational> values_;
  Rational fallback_;
};

// Lines "m,p/q"; an optional "*,p/q" line sets the fallback.
inline EpsilonSchedule read_epsilon_schedule(std::istream& in) {
  std::map<std::size_t, Rational> values;
  Rational fallback = 1;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2) throw ParseError("epsilon schedule line must be 'm,p/q': '" + line + "'");
    if (fields[0] == "*")
      fallback = parse_rational(fields[1]);
    else
      values[detail::parse_natural(fields[0])] = parse_rational(fields[1]);
  }
  try {
    return EpsilonSchedule(std::move(values), std::move(fallback));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline void write_epsilon_schedule(std::ostream& out, const EpsilonSchedule& eps) {
  for (const auto& [m, v] : eps.values()) out << m << ',' << to_fraction_string(v) << '\n';
  out << "*," << to_fraction_string(eps.fallback()) << '\n';
}

using StageSchedule = std::function<std::uint64_t(std::size_t)>;

struct AsymptoticErm {
  Learner learner;
  EpsilonSchedule epsilon;
  // Samples the epsilon schedule was measured on.
  std::vector<Sample> battery;
};

// Minimum empirical risk over an explicit list of hypotheses.
inline Rational min_empirical_risk(const std::vector<Hypothesis>& hs, const Sample& s) {
  if (hs.empty()) throw EmptyClass();
  Rational best = empirical_risk(hs[0], s);
  for (std::size_t i = 1; i < hs.size(); ++i) best = std::min(best, empirical_risk(hs[i], s));
  return best;
}

inline Rational min_empirical_risk(const HypothesisClass& c, const Sample& s) {
  return min_empirical_risk(materialize(c), s);
}

// On size-m samples, exact ERM over the first stages(m) hypotheses. eps_m is
// the largest regret against the full class seen on battery samples of size m.
inline AsymptoticErm asymptotic_erm(const EnumeratedClass& c, StageSchedule stages, std::vector<Sample> battery) {
  auto hs = std::make_shared<const std::vector<Hypothesis>>(enumerate(c));
  Learner learner(
      [hs, stages](const Sample& s) {
        const std::size_t stage = std::min<std::uint64_t>(stages(s.size()), hs->size());
        if (stage == 0) throw EmptyClass("stage schedule selects no hypotheses at sample size " + std::to_string(s.size()));
        if (s.empty()) return (*hs)[0];
        return (*hs)[detail::argmin_mistakes(*hs, stage, detail::tally(s))];
      },
      std::make_shared<const HypothesisClass>(c));

  std::map<std::size_t, Rational> eps;
  for (const auto& s : battery) {
    if (s.empty()) continue;
    Rational regret = empirical_risk(learner(s), s) - min_empirical_risk(*hs, s);
    regret = std::clamp(regret, Rational(0), Rational(1));
    auto [it, inserted] = eps.try_emplace(s.size(), regret);
    if (!inserted) it->second = std::max(it->second, regret);
  }
  return {std::move(learner), EpsilonSchedule(std::move(eps)), std::move(battery)};
}

struct ValidationResult {
  bool ok = true;
  std::optional<Sample> counterexample;
  std::string reason;

  explicit operator bool() const { return ok; }
};

namespace detail {

inline bool member_on_window(const HypothesisClass& c, const std::vector<Hypothesis>& members, const Hypothesis& h) {
  const std::uint64_t w = window_of(c);
  if (std::holds_alternative<TreeClass>(c)) {
    const auto& t = std::get<TreeClass>(c);
    if (h.window() < w) return false;
    const std::span<const Label> table(h.table().data(), w);
    for (std::uint64_t k = 0; k <= w; ++k)
      if (!t.contains(table.first(k))) return false;
    return true;
  }
  return std::any_of(members.begin(), members.end(), [&](const Hypothesis& g) { return agree_up_to(g, h, w); });
}

template <typename Bound>
ValidationResult validate_against(const Learner& a, const HypothesisClass& c, const std::vector<Sample>& samples,
                                  Bound&& bound) {
  const std::vector<Hypothesis> members = materialize(c);
  for (const auto& s : samples) {
    try {
      const Hypothesis out = a(s);
      if (!member_on_window(c, members, out)) return {false, s, "output is not a member of the class"};
      if (s.empty()) continue;
      const Rational best = min_empirical_risk(members, s);
      const Rational risk = empirical_risk(out, s);
      if (!bound(risk, best, s.size()))
        return {false, s,
                "empirical risk " + to_fraction_string(risk) + " exceeds allowed bound over minimum " +
                    to_fraction_string(best)};
    } catch (const Error& e) {
      return {false, s, e.what()};
    }
  }
  return {};
}

}  // namespace detail

// Every output is a class member and attains the brute-force minimum risk.
inline ValidationResult validate_erm(const Learner& a, const HypothesisClass& c, const std::vector<Sample>& samples) {
  return detail::validate_against(a, c, samples,
                                  [](const Rational& risk, const Rational& best, std::size_t) { return risk == best; });
}

// Every output is a class member with risk at most min + eps_{|S|}.
inline ValidationResult validate_asymptotic_erm(const Learner& a, const HypothesisClass& c, const EpsilonSchedule& eps,
                                                const std::vector<Sample>& samples) {
  return detail::validate_against(a, c, samples, [&eps](const Rational& risk, const Rational& best, std::size_t m) {
    return risk <= best + eps.at(m);
  });
}

// Points uniform on [0, window), labels fair coins.
inline std::vector<Sample> random_samples(std::uint64_t window, std::size_t count, std::size_t size, RandomSeed seed) {
  Rng rng(seed);
  std::vector<Sample> out(count);
  for (auto& s : out) {
    s.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
      const Point x{rng.below(window)};
      s.push_back({x, label_of(rng.coin())});
    }
  }
  return out;
}

}  // namespace cpac
