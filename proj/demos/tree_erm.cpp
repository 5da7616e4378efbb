// Tree ERM on the monotone family: realizable labelings of the sample points,
// the chosen labeling, and the leftmost path that carries it.

#include <iostream>

#include "cpac/cpac.hpp"

int main() {
  const auto tree = cpac::build_monotone_class(8);
  const cpac::HypothesisClass cls = tree;
  const cpac::Sample sample{{cpac::Point{1}, cpac::Label::one},
                            {cpac::Point{3}, cpac::Label::zero},
                            {cpac::Point{5}, cpac::Label::one},
                            {cpac::Point{6}, cpac::Label::one}};

  const std::vector<cpac::Point> points{cpac::Point{1}, cpac::Point{3}, cpac::Point{5}, cpac::Point{6}};
  std::cout << "realizable labelings on (1,3,5,6):";
  for (const auto& v : cpac::realizable_labelings(cls, points)) std::cout << ' ' << cpac::to_string(v);
  std::cout << '\n';

  const auto h = cpac::erm_tree(tree)(sample);
  std::cout << "ERM output " << cpac::to_string(h.table()) << " with empirical risk "
            << cpac::to_fraction_string(cpac::empirical_risk(h, sample)) << '\n';
}
