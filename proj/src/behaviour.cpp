#include "pcl/behaviour.hpp"

#include <algorithm>
#include <cmath>

namespace pcl {

double max_mass_diff(const Behaviour& a, const Behaviour& b) {
  double worst = 0.0;
  for (const auto& e : a.dist().atoms())
    worst = std::max(worst, std::abs(e.second - b.dist().mass(e.first)));
  for (const auto& e : b.dist().atoms())
    worst = std::max(worst, std::abs(e.second - a.dist().mass(e.first)));
  return worst;
}

bool dcpo_leq(const Behaviour& a, const Behaviour& b, double tol) {
  for (const auto& e : a.dist().atoms())
    if (!e.first.is_bottom() && e.second > b.dist().mass(e.first) + tol) return false;
  return true;
}

}  // namespace pcl
