#include <gtest/gtest.h>

#include <sstream>

#include "cpac/classes.hpp"

using namespace cpac;

namespace {

std::vector<std::string> leaves(const TreeClass& t) {
  std::vector<std::string> out;
  for (const auto& s : horizon_members(t)) out.push_back(to_string(s));
  return out;
}

std::set<std::string> as_strings(const std::set<LabelVector>& labelings) {
  std::set<std::string> out;
  for (const auto& v : labelings) out.insert(to_string(v));
  return out;
}

std::vector<Point> pts(std::initializer_list<std::uint64_t> xs) {
  std::vector<Point> out;
  for (auto x : xs) out.push_back(Point{x});
  return out;
}

// Every binary string of length n, as bits.
std::vector<BitString> all_strings(std::size_t n) {
  std::vector<BitString> out;
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << n); ++i) {
    BitString s(n);
    for (std::size_t j = 0; j < n; ++j) s[j] = label_of(((i >> (n - 1 - j)) & 1U) != 0);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(Enumerate, Thresholds) {
  const auto hs = enumerate(build_threshold_class(3));
  ASSERT_EQ(hs.size(), 4u);
  EXPECT_EQ(to_string(hs[0].table()), "111");
  EXPECT_EQ(to_string(hs[1].table()), "011");
  EXPECT_EQ(to_string(hs[2].table()), "001");
  EXPECT_EQ(to_string(hs[3].table()), "000");
}

TEST(Enumerate, Dedup) {
  const auto h = Hypothesis::threshold(1, 4);
  EXPECT_EQ(enumerate(EnumeratedClass::from_list(4, {h, h}, true)).size(), 1u);
  EXPECT_EQ(enumerate(EnumeratedClass::from_list(4, {h, h}, false)).size(), 2u);
  // Equal on the window but not beyond: kept apart.
  const auto far = Hypothesis::threshold(9, 4);
  EXPECT_EQ(enumerate(EnumeratedClass::from_list(4, {Hypothesis::constant_zero(4), far}, true)).size(), 2u);
}

TEST(Enumerate, WindowMismatchIsInvariantViolation) {
  const EnumeratedClass bad(4, 2, [](std::uint64_t i) { return Hypothesis::constant_zero(4 + i); });
  EXPECT_THROW(enumerate(bad), InvariantViolation);
}

TEST(MonotoneClass, Members) {
  EXPECT_EQ(leaves(build_monotone_class(1)), (std::vector<std::string>{"0", "1"}));
  const auto t = build_monotone_class(3);
  EXPECT_EQ(leaves(t), (std::vector<std::string>{"000", "001", "011", "111"}));
  EXPECT_FALSE(t.contains(parse_bits("010")));
  EXPECT_TRUE(t.contains(BitString{}));
  EXPECT_THROW(build_monotone_class(0), DomainError);
}

TEST(CutClass, Members) {
  EXPECT_EQ(leaves(build_cut_class(2)), (std::vector<std::string>{"10"}));
  EXPECT_EQ(leaves(build_cut_class(3)), (std::vector<std::string>{"100", "110"}));
  EXPECT_FALSE(build_cut_class(3).contains(parse_bits("011")));
  EXPECT_THROW(build_cut_class(1), DomainError);
}

TEST(CutClass, MatchesBruteForceConditions) {
  // Conditions checked directly on every full-length string: some 0 and some
  // 1, and no 0 strictly before a 1.
  for (std::size_t w = 2; w <= 9; ++w) {
    std::vector<std::string> expected;
    for (const auto& s : all_strings(w)) {
      const bool has0 = std::count(s.begin(), s.end(), Label::zero) > 0;
      const bool has1 = std::count(s.begin(), s.end(), Label::one) > 0;
      bool ordered = true;
      for (std::size_t p = 0; p < w; ++p)
        for (std::size_t q = p + 1; q < w; ++q)
          if (s[p] == Label::zero && s[q] == Label::one) ordered = false;
      if (has0 && has1 && ordered) expected.push_back(to_string(s));
    }
    EXPECT_EQ(leaves(build_cut_class(w)), expected) << "w=" << w;
  }
}

TEST(Trees, BuildersAreDownwardClosedAndPruned) {
  for (std::uint64_t w = 2; w <= 8; ++w) {
    for (const auto& t : {build_monotone_class(w), build_cut_class(w), build_full_tree(w)}) {
      EXPECT_TRUE(is_downward_closed(t)) << t.name() << " w=" << w;
      EXPECT_TRUE(is_pruned(t)) << t.name() << " w=" << w;
    }
  }
}

TEST(Trees, PrunedCheckDetectsDeadEnds) {
  // Members: everything of length <= 3 that does not start with "1" past depth 1.
  const TreeClass dead_end(
      3, [](std::span<const Label> s) { return s.size() <= 1 || s[0] == Label::zero; }, false);
  EXPECT_FALSE(is_pruned(dead_end));
  EXPECT_TRUE(is_downward_closed(dead_end));
  EXPECT_FALSE(dead_end.extends_to_horizon(parse_bits("1")));
  EXPECT_TRUE(dead_end.extends_to_horizon(parse_bits("0")));
  // Live-string search skips the dead branch.
  EXPECT_EQ(leaves(dead_end).size(), 4u);
  EXPECT_EQ(as_strings(realizable_labelings(dead_end, pts({0}))), (std::set<std::string>{"0"}));
}

TEST(RealizableLabelings, Examples) {
  const HypothesisClass mono = build_monotone_class(8);
  EXPECT_EQ(as_strings(realizable_labelings(mono, pts({0, 1, 2}))),
            (std::set<std::string>{"000", "001", "011", "111"}));
  const HypothesisClass full = build_full_tree(10);
  EXPECT_EQ(realizable_labelings(full, pts({5, 9})).size(), 4u);
  for (std::uint64_t p = 0; p < 8; ++p)
    for (std::uint64_t q = p + 1; q < 8; ++q) {
      const auto r = as_strings(realizable_labelings(mono, pts({p, q})));
      EXPECT_EQ(r.count("10"), 0u);
      EXPECT_EQ(r.size(), 3u);
    }
}

TEST(RealizableLabelings, Errors) {
  const HypothesisClass mono = build_monotone_class(4);
  EXPECT_THROW(realizable_labelings(mono, pts({1, 4})), HorizonExceeded);
  EXPECT_THROW(realizable_labelings(mono, pts({1, 1})), DomainError);
  const HypothesisClass thr = build_threshold_class(4);
  EXPECT_THROW(realizable_labelings(thr, pts({7})), HorizonExceeded);
}

TEST(RealizableLabelings, EnumerationMatchesTreeForThresholds) {
  // Thresholds on W points as an enumeration and as the monotone tree.
  Rng rng(RandomSeed{11});
  for (std::uint64_t w = 1; w <= 10; ++w) {
    const HypothesisClass as_list = build_threshold_class(w);
    const HypothesisClass as_tree = build_monotone_class(w);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t k = 1 + rng.below(std::min<std::uint64_t>(w, 4));
      std::vector<Point> u;
      while (u.size() < k) {
        const Point p{rng.below(w)};
        if (std::find(u.begin(), u.end(), p) == u.end()) u.push_back(p);
      }
      EXPECT_EQ(realizable_labelings(as_list, u), realizable_labelings(as_tree, u));
    }
  }
}

TEST(RealizableLabelings, BoundedBySizes) {
  Rng rng(RandomSeed{3});
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint64_t w = 2 + rng.below(8);
    const std::size_t n = 1 + rng.below(6);
    std::vector<Hypothesis> hs;
    for (std::size_t i = 0; i < n; ++i) {
      LabelVector t(w);
      for (auto& b : t) b = label_of(rng.coin());
      hs.emplace_back(t, Completion::constant_zero);
    }
    const HypothesisClass c = EnumeratedClass::from_list(w, hs);
    const std::vector<Point> u = {Point{0}, Point{w - 1}};
    EXPECT_LE(realizable_labelings(c, u).size(), std::min<std::size_t>(4, n));
  }
}

TEST(Realizes, AgreesWithRealizableSet) {
  for (const HypothesisClass& c : {HypothesisClass(build_cut_class(6)), HypothesisClass(build_monotone_class(6)),
                                   HypothesisClass(build_threshold_class(6))}) {
    for (std::uint64_t p = 0; p < 6; ++p)
      for (std::uint64_t q = p + 1; q < 6; ++q) {
        const auto u = pts({p, q});
        const auto r = realizable_labelings(c, u);
        for (const char* bits : {"00", "01", "10", "11"})
          EXPECT_EQ(realizes(c, u, parse_bits(bits)), r.count(parse_bits(bits)) == 1);
      }
  }
}

TEST(PointPair, Definition) {
  const auto h = point_pair_hypothesis(2, 3, 16);
  EXPECT_EQ(h(Point{6}), Label::one);
  EXPECT_EQ(h(Point{5}), Label::one);
  EXPECT_EQ(h(Point{0}), Label::zero);
  EXPECT_EQ(h(Point{100}), Label::zero);
  EXPECT_THROW(point_pair_hypothesis(2, 8, 16), DomainError);
  EXPECT_THROW(point_pair_hypothesis(8, 1, 16), DomainError);
}

TEST(PointPair, ExactlyTwoOnesAndNoCollisions) {
  const std::uint64_t w = 24;
  std::vector<Hypothesis> seen;
  for (std::uint64_t s = 0; 2 * s + 1 < w; ++s)
    for (std::uint64_t e = 0; 2 * e < w; ++e) {
      const auto h = point_pair_hypothesis(s, e, w);
      std::vector<std::uint64_t> ones;
      for (std::uint64_t x = 0; x < w; ++x)
        if (h(Point{x}) == Label::one) ones.push_back(x);
      ASSERT_EQ(ones.size(), 2u);
      EXPECT_EQ(ones[0] % 2 + ones[1] % 2, 1u);
      for (const auto& g : seen) EXPECT_FALSE(agree_up_to(g, h, w));
      seen.push_back(h);
    }
}

TEST(Formats, TreeRoundTrip) {
  std::ostringstream out;
  write_tree(out, build_cut_class(4));
  EXPECT_EQ(out.str(), "horizon 4\n1000\n1100\n1110\n");
  std::istringstream in(out.str());
  const auto t = read_tree(in);
  EXPECT_EQ(leaves(t), leaves(build_cut_class(4)));
  EXPECT_TRUE(t.contains(parse_bits("11")));
  EXPECT_FALSE(t.contains(parse_bits("01")));
  EXPECT_TRUE(is_pruned(t));
  EXPECT_TRUE(is_downward_closed(t));
}

TEST(Formats, EnumeratedRoundTripAndErrors) {
  std::ostringstream out;
  write_enumerated(out, build_threshold_class(3));
  EXPECT_EQ(out.str(), "window 3\n111\n011\n001\n000\n");
  std::istringstream in(out.str());
  const auto c = read_enumerated(in);
  EXPECT_EQ(enumerate(c).size(), 4u);

  std::istringstream short_row("window 3\n11\n");
  EXPECT_THROW(read_enumerated(short_row), ParseError);
  std::istringstream no_header("101\n");
  EXPECT_THROW(read_enumerated(no_header), ParseError);
  std::istringstream bad_leaf("horizon 3\n10\n");
  EXPECT_THROW(read_tree(bad_leaf), ParseError);
}

TEST(Formats, EmptyTreeFile) {
  std::istringstream in("horizon 3\n");
  const auto t = read_tree(in);
  EXPECT_TRUE(horizon_members(t).empty());
  EXPECT_TRUE(realizable_labelings(HypothesisClass(t), pts({0})).empty());
}
