#pragma once

#include <string_view>

#include "stfem/types.hpp"

namespace stfem {

/// Space-time domains covered by the structured mesh builders.
///
/// UnitSquare:  (0,1) x (0,1), one spatial dimension.
/// UnitCube:    (0,1)^2 x (0,1), two spatial dimensions.
/// Trapezoid:   moving 1d domain -t < x < 0.5 + t over t in (0,1).
enum class Geometry { UnitSquare, UnitCube, Trapezoid };

enum class BoundaryTag { Lateral, Initial, Terminal };

constexpr int spatial_dim(Geometry g) {
  return g == Geometry::UnitCube ? 2 : 1;
}

constexpr std::string_view to_string(Geometry g) {
  switch (g) {
    case Geometry::UnitSquare: return "unit-square";
    case Geometry::UnitCube: return "unit-cube";
    case Geometry::Trapezoid: return "trapezoid";
  }
  return "?";
}

constexpr std::string_view to_string(BoundaryTag t) {
  switch (t) {
    case BoundaryTag::Lateral: return "lateral";
    case BoundaryTag::Initial: return "initial";
    case BoundaryTag::Terminal: return "terminal";
  }
  return "?";
}

/// Maps reference coordinates (xi, tau) in [0,1]^2 onto the trapezoid
/// x in (-t, 0.5 + t), t = tau. The boundary is piecewise linear, so
/// mapping vertices only covers the domain exactly.
inline Point<2> trapezoid_map(double xi, double tau) {
  return {-tau + xi * (0.5 + 2.0 * tau), tau};
}

/// Reference (xi..., tau) to physical coordinates for any geometry.
/// Identity except for the trapezoid.
template <int M>
inline Point<M> map_reference_point(Geometry g, const Point<M>& ref) {
  if constexpr (M == 2) {
    if (g == Geometry::Trapezoid) return trapezoid_map(ref[0], ref[1]);
  }
  return ref;
}

}  // namespace stfem
