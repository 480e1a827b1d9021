#pragma once

// The Heisenberg group H^1 on R^3 with the symplectic cocycle:
//   (s,x,y) * (s',x',y') = (s + s' + omega(x,y;x',y')/2, x + x', y + y').

#include <iosfwd>
#include <random>

namespace hdual {

struct GroupElement {
  double s = 0.0;  // central coordinate
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline constexpr GroupElement kIdentity{0.0, 0.0, 0.0};

/// omega(x,y;x2,y2) = x*y2 - x2*y.
constexpr double symplectic(double x, double y, double x2, double y2) { return x * y2 - x2 * y; }

constexpr GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  return {g.s + h.s + 0.5 * symplectic(g.x, g.y, h.x, h.y), g.x + h.x, g.y + h.y};
}

constexpr GroupElement inverse(const GroupElement& g) { return {-g.s, -g.x, -g.y}; }

/// Points (s,0,0) form the centre.
constexpr bool is_central(const GroupElement& g) { return g.x == 0.0 && g.y == 0.0; }

constexpr GroupElement operator*(const GroupElement& g, const GroupElement& h) { return multiply(g, h); }

std::ostream& operator<<(std::ostream& os, const GroupElement& g);

/// Components uniform in [-scale, scale].
GroupElement random_group_element(std::mt19937_64& rng, double scale = 1.0);

}  // namespace hdual
