#include "hdual/heisenberg.hpp"

#include <ostream>

namespace hdual {

std::ostream& operator<<(std::ostream& os, const GroupElement& g) {
  return os << '(' << g.s << ", " << g.x << ", " << g.y << ')';
}

GroupElement random_group_element(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const double s = u(rng);
  const double x = u(rng);
  const double y = u(rng);
  return {s, x, y};
}

}  // namespace hdual
