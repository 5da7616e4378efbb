#pragma once

// Domain types shared by every module: points, labels, hypotheses on a finite
// window, samples, exact finite distributions, risk functionals and seeded
// i.i.d. sampling.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cpac/error.hpp"
#include "cpac/rational.hpp"

namespace cpac {

struct Point {
  std::uint64_t value = 0;

  constexpr Point() = default;
  constexpr explicit Point(std::uint64_t v) : value(v) {}
  friend constexpr auto operator<=>(Point, Point) = default;
};

enum class Label : std::uint8_t { zero = 0, one = 1 };

constexpr Label label_of(bool bit) { return bit ? Label::one : Label::zero; }
constexpr char to_char(Label l) { return l == Label::one ? '1' : '0'; }
constexpr Label flip(Label l) { return l == Label::one ? Label::zero : Label::one; }

using LabelVector = std::vector<Label>;

inline std::string to_string(const LabelVector& bits) {
  std::string s;
  s.reserve(bits.size());
  for (Label l : bits) s.push_back(to_char(l));
  return s;
}

inline LabelVector parse_bits(std::string_view text) {
  LabelVector bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw ParseError("expected a binary string, got '" + std::string(text) + "'");
    bits.push_back(label_of(c == '1'));
  }
  return bits;
}

// How a hypothesis is defined at points at or beyond its window.
enum class Completion {
  constant_zero,
  // Undefined past the window: the hypothesis is a finite path through a tree.
  leftmost_tree,
  // h(x) = 1 iff x >= cutoff.
  formula,
};

// A total {0,1}-valued function, tabulated on [0, window) and extended by a
// completion rule.
class Hypothesis {
 public:
  Hypothesis(LabelVector table, Completion completion, std::uint64_t cutoff = 0)
      : table_(std::move(table)), completion_(completion), cutoff_(cutoff) {}

  static Hypothesis constant_zero(std::uint64_t window) {
    return Hypothesis(LabelVector(window, Label::zero), Completion::constant_zero);
  }

  // h(x) = 1 iff x >= k, tabulated on [0, window).
  static Hypothesis threshold(std::uint64_t k, std::uint64_t window) {
    LabelVector table(window);
    for (std::uint64_t x = 0; x < window; ++x) table[x] = label_of(x >= k);
    return Hypothesis(std::move(table), Completion::formula, k);
  }

  std::uint64_t window() const { return table_.size(); }
  const LabelVector& table() const { return table_; }
  Completion completion() const { return completion_; }
  std::uint64_t cutoff() const { return cutoff_; }

  Label operator()(Point x) const {
    if (x.value < table_.size()) return table_[x.value];
    switch (completion_) {
      case Completion::constant_zero:
        return Label::zero;
      case Completion::formula:
        return label_of(x.value >= cutoff_);
      case Completion::leftmost_tree:
        break;
    }
    throw HorizonExceeded("point " + std::to_string(x.value) + " is beyond the tree horizon " +
                          std::to_string(table_.size()));
  }

  // Extensional agreement on [0, horizon).
  friend bool agree_up_to(const Hypothesis& a, const Hypothesis& b, std::uint64_t horizon) {
    for (std::uint64_t x = 0; x < horizon; ++x)
      if (a(Point{x}) != b(Point{x})) return false;
    return true;
  }

  // Extensional equality on all of N. Decidable here because every completion
  // is eventually constant; leftmost-tree completions only compare on windows.
  friend bool extensionally_equal(const Hypothesis& a, const Hypothesis& b) {
    const bool a_tree = a.completion_ == Completion::leftmost_tree;
    const bool b_tree = b.completion_ == Completion::leftmost_tree;
    if (a_tree || b_tree)
      return a_tree && b_tree && a.window() == b.window() && a.table_ == b.table_;
    const std::uint64_t horizon =
        std::max({a.window(), b.window(), a.settle_point(), b.settle_point()}) + 1;
    return agree_up_to(a, b, horizon);
  }

 private:
  // Every point at or after this one has the same value.
  std::uint64_t settle_point() const {
    return completion_ == Completion::formula ? std::max(cutoff_, window()) : window();
  }

  LabelVector table_;
  Completion completion_;
  std::uint64_t cutoff_;
};

inline Label evaluate(const Hypothesis& h, Point x) { return h(x); }

struct Example {
  Point x;
  Label y;
  friend constexpr auto operator<=>(const Example&, const Example&) = default;
};

// Samples are sequences: order is kept and duplicates are allowed.
using Sample = std::vector<Example>;

inline std::size_t count_mistakes(const Hypothesis& h, const Sample& sample) {
  std::size_t mistakes = 0;
  for (const auto& [x, y] : sample)
    if (h(x) != y) ++mistakes;
  return mistakes;
}

inline Rational empirical_risk(const Hypothesis& h, const Sample& sample) {
  if (sample.empty()) throw EmptySample();
  return Rational(count_mistakes(h, sample), sample.size());
}

struct RandomSeed {
  std::uint64_t value = 0;
  friend constexpr bool operator==(RandomSeed, RandomSeed) = default;
};

// SplitMix64 output number `index` (0-based) of the stream started at `master`.
// Used to derive per-trial seeds so that trial order never affects results.
inline RandomSeed derive_seed(RandomSeed master, std::uint64_t index) {
  std::uint64_t z = master.value + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return RandomSeed{z ^ (z >> 31)};
}

// Pinned generator: std::mt19937_64 (its output sequence is fixed by the C++
// standard). Bounded draws use rejection on the raw 64-bit output, never
// std::uniform_int_distribution, whose algorithm is implementation-defined.
class Rng {
 public:
  explicit Rng(RandomSeed seed) : engine_(seed.value) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t reject_under = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= reject_under) return r % bound;
    }
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Rational-weighted distribution over labeled points.
class FiniteDistribution {
 public:
  struct Atom {
    Example pair;
    Rational weight;
  };

  explicit FiniteDistribution(std::vector<Atom> support) : support_(std::move(support)) {
    if (support_.empty()) throw DomainError("distribution needs a nonempty support");
    std::sort(support_.begin(), support_.end(),
              [](const Atom& a, const Atom& b) { return a.pair < b.pair; });
    Rational total = 0;
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i].weight <= 0) throw DomainError("distribution weights must be positive");
      if (i > 0 && support_[i - 1].pair == support_[i].pair)
        throw DomainError("distribution support points must be distinct");
      total += support_[i].weight;
    }
    if (total != 1) throw DomainError("distribution weights sum to " + to_fraction_string(total) + ", not 1");
    build_cdf();
  }

  static FiniteDistribution point_mass(Example pair) { return FiniteDistribution({{pair, Rational(1)}}); }

  static FiniteDistribution uniform(const std::vector<Example>& pairs) {
    std::vector<Atom> atoms;
    atoms.reserve(pairs.size());
    for (const auto& p : pairs) atoms.push_back({p, Rational(1, pairs.size())});
    return FiniteDistribution(std::move(atoms));
  }

  // Sorted by (point, label).
  const std::vector<Atom>& support() const { return support_; }

  std::uint64_t max_point() const {
    std::uint64_t m = 0;
    for (const auto& a : support_) m = std::max(m, a.pair.x.value);
    return m;
  }

  // Inverse-CDF draw over the sorted support, exact in the common denominator.
  Example draw(Rng& rng) const {
    const std::uint64_t r = rng.below(common_denominator_);
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    return support_[static_cast<std::size_t>(it - cumulative_.begin())].pair;
  }

 private:
  void build_cdf() {
    BigInt lcm = 1;
    for (const auto& a : support_) {
      const BigInt d = boost::multiprecision::denominator(a.weight);
      lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
    }
    if (lcm > std::numeric_limits<std::uint64_t>::max())
      throw DomainError("distribution weights need a common denominator below 2^64");
    common_denominator_ = lcm.convert_to<std::uint64_t>();
    std::uint64_t running = 0;
    cumulative_.reserve(support_.size());
    for (const auto& a : support_) {
      const Rational scaled = a.weight * lcm;
      running += boost::multiprecision::numerator(scaled).convert_to<std::uint64_t>();
      cumulative_.push_back(running);
    }
  }

  std::vector<Atom> support_;
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t common_denominator_ = 1;
};

inline Rational true_error(const Hypothesis& h, const FiniteDistribution& dist) {
  Rational err = 0;
  for (const auto& [pair, weight] : dist.support())
    if (h(pair.x) != pair.y) err += weight;
  return err;
}

inline Sample draw_sample(const FiniteDistribution& dist, std::size_t m, RandomSeed seed) {
  Rng rng(seed);
  Sample s;
  s.reserve(m);
  for (std::size_t i = 0; i < m; ++i) s.push_back(dist.draw(rng));
  return s;
}

// ceil(8 * (d + ln(1/delta)) / epsilon^2), defined for epsilon, delta in (0,1).
inline std::uint64_t sample_size(const Rational& epsilon, const Rational& delta, std::uint64_t d) {
  if (epsilon <= 0 || epsilon >= 1) throw DomainError("epsilon must lie in (0,1)");
  if (delta <= 0 || delta >= 1) throw DomainError("delta must lie in (0,1)");
  const long double eps = to_long_double(epsilon);
  const long double bound =
      8.0L * (static_cast<long double>(d) + std::log(1.0L / to_long_double(delta))) / (eps * eps);
  return static_cast<std::uint64_t>(std::ceil(bound));
}

// ---- text formats -------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline std::uint64_t parse_natural(std::string_view text) {
  if (text.empty() || text.size() > 19) throw ParseError("expected a natural number, got '" + std::string(text) + "'");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("expected a natural number, got '" + std::string(text) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

inline Label parse_label(std::string_view text) {
  if (text == "0") return Label::zero;
  if (text == "1") return Label::one;
  throw ParseError("expected a label 0 or 1, got '" + std::string(text) + "'");
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

}  // namespace detail

// One "x,y" pair per line; blank lines and '#' comments are skipped.
inline Sample read_sample(std::istream& in) {
  Sample s;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 2) throw ParseError("sample line must be 'x,y': '" + line + "'");
    s.push_back({Point{detail::parse_natural(fields[0])}, detail::parse_label(fields[1])});
  }
  return s;
}

inline Sample read_sample_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_sample(in);
}

inline void write_sample(std::ostream& out, const Sample& s) {
  for (const auto& [x, y] : s) out << x.value << ',' << to_char(y) << '\n';
}

// One "x,y,p/q" line per atom; the constructor enforces that weights sum to 1.
inline FiniteDistribution read_distribution(std::istream& in) {
  std::vector<FiniteDistribution::Atom> atoms;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = detail::split(line, ',');
    if (fields.size() != 3) throw ParseError("distribution line must be 'x,y,p/q': '" + line + "'");
    const auto slash = fields[2].find('/');
    if (slash == std::string::npos) throw ParseError("weight must be written p/q: '" + line + "'");
    const Rational w = parse_rational(fields[2]);
    if (to_fraction_string(w) != fields[2]) throw ParseError("weight is not a reduced fraction: '" + line + "'");
    atoms.push_back({{Point{detail::parse_natural(fields[0])}, detail::parse_label(fields[1])}, w});
  }
  try {
    return FiniteDistribution(std::move(atoms));
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline FiniteDistribution read_distribution_file(const std::string& path) {
  auto in = detail::open_input(path);
  return read_distribution(in);
}

inline void write_distribution(std::ostream& out, const FiniteDistribution& d) {
  for (const auto& [pair, w] : d.support())
    out << pair.x.value << ',' << to_char(pair.y) << ',' << to_fraction_string(w) << '\n';
}

}  // namespace cpac
