#pragma once

// Hypothesis-class representations: finitely staged enumerations of
// hypotheses, and binary trees whose horizon-length strings are the class
// members restricted to a window.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpac/core.hpp"

namespace cpac {

// Indices 0..stage_bound-1 of a total generator, all sharing one window.
class EnumeratedClass {
 public:
  using Generator = std::function<Hypothesis(std::uint64_t)>;

  EnumeratedClass(std::uint64_t window, std::uint64_t stage_bound, Generator generator, bool dedup = false)
      : window_(window), stage_bound_(stage_bound), generator_(std::move(generator)), dedup_(dedup) {}

  static EnumeratedClass from_list(std::uint64_t window, std::vector<Hypothesis> hypotheses, bool dedup = false) {
    auto shared = std::make_shared<const std::vector<Hypothesis>>(std::move(hypotheses));
    const auto n = shared->size();
    return EnumeratedClass(
        window, n, [shared](std::uint64_t i) { return (*shared)[i]; }, dedup);
  }

  std::uint64_t window() const { return window_; }
  std::uint64_t stage_bound() const { return stage_bound_; }
  bool dedup() const { return dedup_; }

  // The same generator cut off at an earlier stage.
  EnumeratedClass truncated(std::uint64_t stage) const {
    return EnumeratedClass(window_, std::min(stage, stage_bound_), generator_, dedup_);
  }

  Hypothesis at(std::uint64_t index) const {
    Hypothesis h = generator_(index);
    if (h.window() != window_)
      throw InvariantViolation("generator produced a hypothesis with window " + std::to_string(h.window()) +
                               " in a class with window " + std::to_string(window_));
    return h;
  }

 private:
  std::uint64_t window_;
  std::uint64_t stage_bound_;
  Generator generator_;
  bool dedup_;
};

// Hypotheses for indices 0..B-1 in index order; with dedup the first of each
// extensionally equal group is kept.
inline std::vector<Hypothesis> enumerate(const EnumeratedClass& c) {
  std::vector<Hypothesis> out;
  out.reserve(c.stage_bound());
  for (std::uint64_t i = 0; i < c.stage_bound(); ++i) {
    Hypothesis h = c.at(i);
    if (c.dedup() &&
        std::any_of(out.begin(), out.end(), [&](const Hypothesis& g) { return extensionally_equal(g, h); }))
      continue;
    out.push_back(std::move(h));
  }
  return out;
}

using BitString = std::vector<Label>;

// Downward-closed set of binary strings of length <= horizon. Pruned means
// every member shorter than the horizon extends to a member at the horizon.
class TreeClass {
 public:
  using Membership = std::function<bool(std::span<const Label>)>;

  TreeClass(std::uint64_t horizon, Membership membership, bool pruned, std::string name = "tree")
      : horizon_(horizon), membership_(std::move(membership)), pruned_(pruned), name_(std::move(name)) {}

  std::uint64_t horizon() const { return horizon_; }
  bool pruned() const { return pruned_; }
  const std::string& name() const { return name_; }

  bool contains(std::span<const Label> s) const { return s.size() <= horizon_ && membership_(s); }

  // Whether s is a member that extends to some member of length horizon.
  bool extends_to_horizon(std::span<const Label> s) const {
    if (!contains(s)) return false;
    if (pruned_ || s.size() == horizon_) return true;
    BitString buf(s.begin(), s.end());
    return dead_end_free(buf);
  }

 private:
  bool dead_end_free(BitString& buf) const {
    if (buf.size() == horizon_) return true;
    for (Label b : {Label::zero, Label::one}) {
      buf.push_back(b);
      const bool ok = contains(buf) && dead_end_free(buf);
      buf.pop_back();
      if (ok) return true;
    }
    return false;
  }

  std::uint64_t horizon_;
  Membership membership_;
  bool pruned_;
  std::string name_;
};

// Calls visit(s) for every live member s of length `depth`, in lexicographic
// order. Stops early and returns false once visit returns false.
template <typename Visit>
bool for_each_live_string(const TreeClass& t, std::uint64_t depth, Visit&& visit) {
  BitString buf;
  buf.reserve(depth);
  const std::function<bool()> walk = [&]() -> bool {
    if (buf.size() == depth) return visit(std::as_const(buf));
    for (Label b : {Label::zero, Label::one}) {
      buf.push_back(b);
      bool keep_going = true;
      if (t.extends_to_horizon(buf)) keep_going = walk();
      buf.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  if (depth > t.horizon()) throw HorizonExceeded("depth beyond tree horizon");
  if (!t.extends_to_horizon(buf)) return true;
  return walk();
}

// All members of length horizon, lexicographically sorted.
inline std::vector<BitString> horizon_members(const TreeClass& t) {
  std::vector<BitString> out;
  for_each_live_string(t, t.horizon(), [&](const BitString& s) {
    out.push_back(s);
    return true;
  });
  return out;
}

inline Hypothesis path_hypothesis(BitString path) { return Hypothesis(std::move(path), Completion::leftmost_tree); }

using HypothesisClass = std::variant<EnumeratedClass, TreeClass>;

inline std::uint64_t window_of(const HypothesisClass& c) {
  return std::visit(
      [](const auto& cls) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(cls)>, EnumeratedClass>)
          return cls.window();
        else
          return cls.horizon();
      },
      c);
}

// Every hypothesis of the class, tree members as leftmost-tree paths.
inline std::vector<Hypothesis> materialize(const HypothesisClass& c) {
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) return enumerate(*e);
  std::vector<Hypothesis> out;
  for (auto& s : horizon_members(std::get<TreeClass>(c))) out.push_back(path_hypothesis(std::move(s)));
  return out;
}

namespace detail {

inline void require_in_window(std::span<const Point> points, std::uint64_t window) {
  for (Point p : points)
    if (p.value >= window)
      throw HorizonExceeded("point " + std::to_string(p.value) + " outside window " + std::to_string(window));
}

inline void require_distinct(std::span<const Point> points) {
  std::vector<Point> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("points must be distinct");
}

inline std::uint64_t max_point(std::span<const Point> points) {
  std::uint64_t m = 0;
  for (Point p : points) m = std::max(m, p.value);
  return m;
}

}  // namespace detail

// Label vectors achieved on `points` (in the given order) by some member.
inline std::set<LabelVector> realizable_labelings(const HypothesisClass& c, std::span<const Point> points) {
  detail::require_distinct(points);
  detail::require_in_window(points, window_of(c));
  std::set<LabelVector> out;
  const std::size_t full = std::size_t{1} << std::min<std::size_t>(points.size(), 63);
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) {
    for (std::uint64_t i = 0; i < e->stage_bound() && out.size() < full; ++i) {
      const Hypothesis h = e->at(i);
      LabelVector v;
      v.reserve(points.size());
      for (Point p : points) v.push_back(h(p));
      out.insert(std::move(v));
    }
    return out;
  }
  const auto& t = std::get<TreeClass>(c);
  if (points.empty()) {
    if (t.extends_to_horizon(BitString{})) out.insert(LabelVector{});
    return out;
  }
  for_each_live_string(t, detail::max_point(points) + 1, [&](const BitString& s) {
    LabelVector v;
    v.reserve(points.size());
    for (Point p : points) v.push_back(s[p.value]);
    out.insert(std::move(v));
    return out.size() < full;
  });
  return out;
}

// Whether one specific labeling is achieved; walks the class directly rather
// than building the realizable set.
inline bool realizes(const HypothesisClass& c, std::span<const Point> points, const LabelVector& labeling) {
  detail::require_in_window(points, window_of(c));
  if (labeling.size() != points.size()) throw DomainError("labeling length does not match the point tuple");
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) {
    for (std::uint64_t i = 0; i < e->stage_bound(); ++i) {
      const Hypothesis h = e->at(i);
      bool match = true;
      for (std::size_t j = 0; j < points.size() && match; ++j) match = h(points[j]) == labeling[j];
      if (match) return true;
    }
    return false;
  }
  const auto& t = std::get<TreeClass>(c);
  const std::uint64_t depth = points.empty() ? 0 : detail::max_point(points) + 1;
  // Required bit per depth; points may repeat only with consistent labels.
  std::vector<int> required(depth, -1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    int& slot = required[points[j].value];
    const int bit = labeling[j] == Label::one ? 1 : 0;
    if (slot != -1 && slot != bit) return false;
    slot = bit;
  }
  BitString buf;
  const std::function<bool()> search = [&]() -> bool {
    if (!t.extends_to_horizon(buf)) return false;
    if (buf.size() == depth) return true;
    const int need = required[buf.size()];
    for (int bit : {0, 1}) {
      if (need != -1 && need != bit) continue;
      buf.push_back(label_of(bit == 1));
      const bool found = search();
      buf.pop_back();
      if (found) return true;
    }
    return false;
  };
  return search();
}

// ---- tree checks ----------------------------------------------------------

inline bool is_downward_closed(const TreeClass& t) {
  BitString buf;
  const std::function<bool()> walk = [&]() -> bool {
    if (buf.size() == t.horizon()) return true;
    for (Label b : {Label::zero, Label::one}) {
      buf.push_back(b);
      bool ok = true;
      if (t.contains(buf)) {
        for (std::size_t k = 0; k < buf.size() && ok; ++k) ok = t.contains(std::span(buf).first(k));
        ok = ok && walk();
      }
      buf.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return walk();
}

// Exhaustive: every member shorter than the horizon has an extension at it.
inline bool is_pruned(const TreeClass& t) {
  const TreeClass unasserted(
      t.horizon(), [&t](std::span<const Label> s) { return t.contains(s); }, false);
  BitString buf;
  const std::function<bool()> walk = [&]() -> bool {
    if (!unasserted.extends_to_horizon(buf)) return false;
    if (buf.size() == t.horizon()) return true;
    for (Label b : {Label::zero, Label::one}) {
      buf.push_back(b);
      const bool ok = !t.contains(buf) || walk();
      buf.pop_back();
      if (!ok) return false;
    }
    return true;
  };
  return !t.contains(buf) || walk();
}

// ---- builders -------------------------------------------------------------

inline EnumeratedClass build_threshold_class(std::uint64_t window) {
  return EnumeratedClass(window, window + 1, [window](std::uint64_t k) { return Hypothesis::threshold(k, window); });
}

// Every function on [0, window); index bits read with point 0 most significant.
inline EnumeratedClass build_all_functions_class(std::uint64_t window) {
  if (window >= 63) throw DomainError("all-functions class needs a window below 63");
  return EnumeratedClass(window, std::uint64_t{1} << window, [window](std::uint64_t index) {
    LabelVector table(window);
    for (std::uint64_t x = 0; x < window; ++x) table[x] = label_of(((index >> (window - 1 - x)) & 1U) != 0);
    return Hypothesis(std::move(table), Completion::constant_zero);
  });
}

inline TreeClass build_full_tree(std::uint64_t horizon) {
  return TreeClass(
      horizon, [](std::span<const Label>) { return true; }, true, "full");
}

// Non-decreasing strings: once a point is labeled 1, every later point is too.
inline TreeClass build_monotone_class(std::uint64_t window) {
  if (window < 1) throw DomainError("monotone class needs a window of at least 1");
  return TreeClass(
      window,
      [](std::span<const Label> s) { return std::is_sorted(s.begin(), s.end()); },
      true, "monotone");
}

// Cuts: a block of 1s followed by a block of 0s, with both blocks nonempty at
// full length.
inline TreeClass build_cut_class(std::uint64_t window) {
  if (window < 2) throw DomainError("cut class needs a window of at least 2");
  return TreeClass(
      window,
      [window](std::span<const Label> s) {
        if (!std::is_sorted(s.rbegin(), s.rend())) return false;
        const bool has_one = !s.empty() && s.front() == Label::one;
        const bool has_zero = !s.empty() && s.back() == Label::zero;
        if (has_zero && !has_one) return false;
        if (s.size() == window && !has_zero) return false;
        return true;
      },
      true, "cut");
}

// Prefix trie over a set of equal-length strings.
class PrefixTrie {
 public:
  void insert(std::span<const Label> s) {
    std::size_t node = 0;
    for (Label b : s) {
      const auto bit = static_cast<std::size_t>(b);
      if (nodes_[node][bit] == 0) {
        nodes_[node][bit] = nodes_.size();
        nodes_.push_back({0, 0});
      }
      node = nodes_[node][bit];
    }
  }

  bool contains_prefix(std::span<const Label> s) const {
    if (empty_) return false;
    std::size_t node = 0;
    for (Label b : s) {
      node = nodes_[node][static_cast<std::size_t>(b)];
      if (node == 0) return false;
    }
    return true;
  }

  void mark_nonempty() { empty_ = false; }

 private:
  std::vector<std::array<std::size_t, 2>> nodes_{{0, 0}};
  bool empty_ = true;
};

// Downward closure of a set of horizon-length strings; pruned by construction.
inline TreeClass tree_from_leaves(std::uint64_t horizon, const std::vector<BitString>& leaves) {
  auto trie = std::make_shared<PrefixTrie>();
  for (const auto& leaf : leaves) {
    if (leaf.size() != horizon)
      throw DomainError("tree leaf '" + to_string(leaf) + "' does not have length " + std::to_string(horizon));
    trie->insert(leaf);
    trie->mark_nonempty();
  }
  std::shared_ptr<const PrefixTrie> frozen = std::move(trie);
  return TreeClass(
      horizon, [frozen](std::span<const Label> s) { return frozen->contains_prefix(s); }, true, "file");
}

// h(k) = 1 iff k = 2e or k = 2s + 1.
inline Hypothesis point_pair_hypothesis(std::uint64_t s, std::uint64_t e, std::uint64_t window) {
  if (2 * e >= window || 2 * s + 1 >= window)
    throw DomainError("h_{s,e} needs 2e and 2s+1 inside window " + std::to_string(window));
  LabelVector table(window, Label::zero);
  table[2 * e] = Label::one;
  table[2 * s + 1] = Label::one;
  return Hypothesis(std::move(table), Completion::constant_zero);
}

// ---- file formats ---------------------------------------------------------

// "horizon D" then the member strings of length D.
inline TreeClass read_tree(std::istream& in) {
  std::string line;
  std::optional<std::uint64_t> horizon;
  std::vector<BitString> leaves;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!horizon) {
      if (line.rfind("horizon", 0) != 0) throw ParseError("tree file must start with 'horizon D'");
      horizon = detail::parse_natural(detail::trim(line.substr(7)));
      continue;
    }
    leaves.push_back(parse_bits(line));
  }
  if (!horizon) throw ParseError("tree file is missing its 'horizon D' header");
  try {
    return tree_from_leaves(*horizon, leaves);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

inline void write_tree(std::ostream& out, const TreeClass& t) {
  out << "horizon " << t.horizon() << '\n';
  for (const auto& leaf : horizon_members(t)) out << to_string(leaf) << '\n';
}

// "window W" then one W-bit table per hypothesis (constant-zero completion).
inline EnumeratedClass read_enumerated(std::istream& in) {
  std::string line;
  std::optional<std::uint64_t> window;
  std::vector<Hypothesis> hs;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (!window) {
      if (line.rfind("window", 0) != 0) throw ParseError("class file must start with 'window W'");
      window = detail::parse_natural(detail::trim(line.substr(6)));
      continue;
    }
    LabelVector table = parse_bits(line);
    if (table.size() != *window)
      throw ParseError("hypothesis '" + line + "' does not have " + std::to_string(*window) + " bits");
    hs.emplace_back(std::move(table), Completion::constant_zero);
  }
  if (!window) throw ParseError("class file is missing its 'window W' header");
  return EnumeratedClass::from_list(*window, std::move(hs));
}

inline void write_enumerated(std::ostream& out, const EnumeratedClass& c) {
  out << "window " << c.window() << '\n';
  for (const auto& h : enumerate(c)) out << to_string(h.table()) << '\n';
}

// Dispatches on the header line.
inline HypothesisClass read_class_file(const std::string& path) {
  auto in = detail::open_input(path);
  std::string first;
  const auto start = in.tellg();
  while (std::getline(in, first)) {
    first = detail::trim(first);
    if (!first.empty() && first.front() != '#') break;
  }
  in.clear();
  in.seekg(start);
  if (first.rfind("horizon", 0) == 0) return read_tree(in);
  if (first.rfind("window", 0) == 0) return read_enumerated(in);
  throw ParseError("'" + path + "' is neither a tree file nor an enumerated-class file");
}

}  // namespace cpac
