#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cpac/classes.hpp"

namespace cpac {

inline bool shatters(const HypothesisClass& c, std::span<const Point> points) {
  if (points.size() >= 63) return false;
  return realizable_labelings(c, points).size() == (std::size_t{1} << points.size());
}

namespace detail {

// Column bitsets over the distinct window tables of an enumerated class: bit i
// of column x is h_i(x). A labeling is realizable iff the AND of the matching
// columns (or their complements) is nonzero.
class ColumnIndex {
 public:
  ColumnIndex(const EnumeratedClass& c, std::uint64_t window) : window_(window) {
    std::set<LabelVector> tables;
    for (std::uint64_t i = 0; i < c.stage_bound(); ++i) {
      const Hypothesis h = c.at(i);
      tables.emplace(h.table().begin(), h.table().begin() + static_cast<std::ptrdiff_t>(window));
    }
    count_ = tables.size();
    words_ = (count_ + 63) / 64;
    columns_.assign(window * words_, 0);
    std::size_t row = 0;
    for (const auto& t : tables) {
      for (std::uint64_t x = 0; x < window; ++x)
        if (t[x] == Label::one) columns_[x * words_ + row / 64] |= std::uint64_t{1} << (row % 64);
      ++row;
    }
  }

  bool shattered(std::span<const Point> points) const {
    const std::size_t k = points.size();
    if (k >= 63 || count_ < (std::size_t{1} << k)) return false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
      if (!realizable(points, mask)) return false;
    return true;
  }

 private:
  // Bit (k-1-j) of mask is the label of points[j].
  bool realizable(std::span<const Point> points, std::uint64_t mask) const {
    const std::size_t k = points.size();
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t acc = w + 1 == words_ && count_ % 64 != 0 ? (std::uint64_t{1} << (count_ % 64)) - 1 : ~std::uint64_t{0};
      for (std::size_t j = 0; j < k && acc != 0; ++j) {
        const std::uint64_t col = columns_[points[j].value * words_ + w];
        acc &= ((mask >> (k - 1 - j)) & 1U) != 0 ? col : ~col;
      }
      if (acc != 0) return true;
    }
    return false;
  }

  std::uint64_t window_;
  std::size_t count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> columns_;
};

}  // namespace detail

struct VcResult {
  // Largest shattered size found, at most the cap.
  std::uint64_t dimension = 0;
  // True when a cap-sized set is shattered, i.e. the dimension is ">= cap".
  bool reached_cap = false;
  // The lexicographically first shattered set of that size.
  std::vector<Point> shattered_set;
};

// Exhaustive search over subsets of [0, window), clamped to the class window.
// Sizes are tried in increasing order and subsets lexicographically; a
// k-subset is only tested when all its (k-1)-subsets are shattered.
inline VcResult vc_dimension(const HypothesisClass& c, std::uint64_t window, std::uint64_t cap = 4) {
  if (cap < 1) throw DomainError("vc cap must be at least 1");
  const std::uint64_t w = std::min(window, window_of(c));

  std::optional<detail::ColumnIndex> columns;
  if (const auto* e = std::get_if<EnumeratedClass>(&c)) columns.emplace(*e, w);
  const auto is_shattered = [&](std::span<const Point> pts) {
    return columns ? columns->shattered(pts) : shatters(c, pts);
  };

  VcResult result;
  std::vector<std::vector<Point>> level{{}};
  std::set<std::vector<Point>> level_set{{}};
  for (std::uint64_t k = 1; k <= cap; ++k) {
    std::vector<std::vector<Point>> next;
    for (const auto& base : level) {
      const std::uint64_t start = base.empty() ? 0 : base.back().value + 1;
      for (std::uint64_t x = start; x < w; ++x) {
        std::vector<Point> candidate = base;
        candidate.push_back(Point{x});
        bool subsets_ok = true;
        for (std::size_t drop = 0; drop + 1 < candidate.size() && subsets_ok; ++drop) {
          std::vector<Point> sub;
          for (std::size_t j = 0; j < candidate.size(); ++j)
            if (j != drop) sub.push_back(candidate[j]);
          subsets_ok = level_set.count(sub) != 0;
        }
        if (subsets_ok && is_shattered(candidate)) next.push_back(std::move(candidate));
      }
    }
    if (next.empty()) break;
    result.dimension = k;
    result.shattered_set = next.front();
    level = std::move(next);
    level_set = std::set<std::vector<Point>>(level.begin(), level.end());
  }
  result.reached_cap = result.dimension == cap;
  return result;
}

// Labelings of length n in lexicographic order (coordinate 0 most significant).
inline LabelVector labeling_from_index(std::uint64_t index, std::size_t n) {
  LabelVector v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = label_of(((index >> (n - 1 - j)) & 1U) != 0);
  return v;
}

// Lexicographically least labeling of u that no member realizes.
inline LabelVector d_witness(const HypothesisClass& c, std::uint64_t d, std::span<const Point> u) {
  if (u.size() != d + 1) throw DomainError("a d-witness takes a tuple of exactly d+1 points");
  if (u.size() >= 63) throw DomainError("tuple too long");
  const auto realizable = realizable_labelings(c, u);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << u.size()); ++i) {
    LabelVector v = labeling_from_index(i, u.size());
    if (realizable.count(v) == 0) return v;
  }
  std::string tuple;
  for (Point p : u) tuple += (tuple.empty() ? "" : ",") + std::to_string(p.value);
  throw NoWitness("tuple (" + tuple + ") is shattered, so the class has VC dimension above " + std::to_string(d));
}

struct WitnessCertificate {
  std::uint64_t d = 0;
  std::map<std::vector<Point>, LabelVector> entries;
};

// Increasing (k)-subsets of [0, window) in lexicographic order.
inline std::vector<std::vector<Point>> all_tuples(std::uint64_t window, std::size_t k) {
  std::vector<std::vector<Point>> out;
  if (k > window) return out;
  std::vector<std::uint64_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    std::vector<Point> t;
    for (auto v : idx) t.push_back(Point{v});
    out.push_back(std::move(t));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == window - k + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline WitnessCertificate make_certificate(const HypothesisClass& c, std::uint64_t d,
                                           const std::vector<std::vector<Point>>& tuples) {
  WitnessCertificate cert{d, {}};
  for (const auto& u : tuples) cert.entries.emplace(u, d_witness(c, d, u));
  return cert;
}

// Re-derives each entry against the class one labeling at a time: the stored
// labeling must be unrealizable and every smaller one realizable.
inline bool check_witness(const HypothesisClass& c, const WitnessCertificate& cert) {
  try {
    for (const auto& [u, labeling] : cert.entries) {
      if (u.size() != cert.d + 1 || labeling.size() != u.size()) return false;
      std::vector<Point> sorted = u;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
      if (realizes(c, u, labeling)) return false;
      for (LabelVector smaller(u.size(), Label::zero); smaller < labeling;) {
        if (!realizes(c, u, smaller)) return false;
        // Binary increment, last coordinate least significant.
        std::size_t j = smaller.size();
        while (j > 0 && smaller[j - 1] == Label::one) smaller[--j] = Label::zero;
        if (j == 0) break;
        smaller[j - 1] = Label::one;
      }
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

// Lines "u_0,...,u_d : l_0...l_d", preceded by a "# d=D" comment.
inline void write_certificate(std::ostream& out, const WitnessCertificate& cert) {
  out << "# d=" << cert.d << '\n';
  for (const auto& [u, labeling] : cert.entries) {
    for (std::size_t i = 0; i < u.size(); ++i) out << (i ? "," : "") << u[i].value;
    out << " : " << to_string(labeling) << '\n';
  }
}

inline WitnessCertificate read_certificate(std::istream& in) {
  WitnessCertificate cert;
  std::optional<std::uint64_t> d;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# d=", 0) == 0) d = detail::parse_natural(line.substr(4));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("certificate line must be 'u_0,...,u_d : bits': '" + line + "'");
    std::vector<Point> u;
    for (const auto& f : detail::split(detail::trim(line.substr(0, colon)), ','))
      u.push_back(Point{detail::parse_natural(f)});
    LabelVector labeling = parse_bits(detail::trim(line.substr(colon + 1)));
    if (!d) d = u.empty() ? 0 : u.size() - 1;
    cert.entries[std::move(u)] = std::move(labeling);
  }
  cert.d = d.value_or(0);
  return cert;
}

// Tuple files: one comma-separated tuple per line.
inline std::vector<std::vector<Point>> read_tuples(std::istream& in) {
  std::vector<std::vector<Point>> out;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::vector<Point> u;
    for (const auto& f : detail::split(line, ',')) u.push_back(Point{detail::parse_natural(f)});
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace cpac
