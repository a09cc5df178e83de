#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "stfem/types.hpp"

namespace stfem {

/// Quadrature rule on the unit reference simplex of dimension M
/// (M=1 interval, M=2 triangle, M=3 tetrahedron). Weights sum to the
/// reference volume 1/M! and are all positive.
template <int M>
struct QuadratureRule {
  int degree = 0;  // every polynomial up to this total degree is integrated exactly
  std::vector<Point<M>> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
};

namespace detail {

// Three-point symmetric orbit (b, b, 1-2b) in barycentric coordinates,
// emitted as reference coordinates (second and third barycentric).
inline void tri_orbit3(std::vector<Point<2>>& pts, std::vector<double>& ws,
                       double b, double w_ref) {
  const double a = 1.0 - 2.0 * b;
  pts.push_back({a, b});
  pts.push_back({b, a});
  pts.push_back({b, b});
  ws.insert(ws.end(), 3, w_ref);
}

inline void tet_orbit4(std::vector<Point<3>>& pts, std::vector<double>& ws,
                       double a, double b, double w_ref) {
  pts.push_back({b, b, b});
  pts.push_back({a, b, b});
  pts.push_back({b, a, b});
  pts.push_back({b, b, a});
  ws.insert(ws.end(), 4, w_ref);
}

// Six-point orbit of barycentric (c, c, d, d) with c + d = 1/2.
inline void tet_orbit6(std::vector<Point<3>>& pts, std::vector<double>& ws,
                       double c, double d, double w_ref) {
  pts.push_back({c, d, d});
  pts.push_back({d, c, d});
  pts.push_back({d, d, c});
  pts.push_back({c, c, d});
  pts.push_back({c, d, c});
  pts.push_back({d, c, c});
  ws.insert(ws.end(), 6, w_ref);
}

inline QuadratureRule<1> gauss_interval(int n_points, int degree) {
  // Gauss-Legendre on [0,1].
  QuadratureRule<1> rule;
  rule.degree = degree;
  auto add = [&rule](double x_sym, double w_sym) {
    rule.points.push_back({0.5 * (x_sym + 1.0)});
    rule.weights.push_back(0.5 * w_sym);
  };
  switch (n_points) {
    case 1:
      add(0.0, 2.0);
      break;
    case 2: {
      const double x = 1.0 / std::sqrt(3.0);
      add(-x, 1.0);
      add(x, 1.0);
      break;
    }
    case 3: {
      const double x = std::sqrt(3.0 / 5.0);
      add(0.0, 8.0 / 9.0);
      add(-x, 5.0 / 9.0);
      add(x, 5.0 / 9.0);
      break;
    }
    case 4: {
      const double x1 = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double x2 = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
      const double w1 = (18.0 + std::sqrt(30.0)) / 36.0;
      const double w2 = (18.0 - std::sqrt(30.0)) / 36.0;
      add(-x1, w1);
      add(x1, w1);
      add(-x2, w2);
      add(x2, w2);
      break;
    }
    default:
      throw std::invalid_argument("gauss_interval: unsupported point count");
  }
  return rule;
}

inline QuadratureRule<2> triangle_rule(int degree) {
  QuadratureRule<2> rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(0.5);
      break;
    case 2:
      rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
      rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
      break;
    case 4: {
      const double s10 = std::sqrt(10.0);
      const double t = std::sqrt(38.0 - 44.0 * std::sqrt(2.0 / 5.0));
      const double u = std::sqrt(213125.0 - 53320.0 * s10);
      tri_orbit3(rule.points, rule.weights, (8.0 - s10 + t) / 18.0, 0.5 * (620.0 + u) / 3720.0);
      tri_orbit3(rule.points, rule.weights, (8.0 - s10 - t) / 18.0, 0.5 * (620.0 - u) / 3720.0);
      break;
    }
    case 5: {
      const double s15 = std::sqrt(15.0);
      rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
      rule.weights.push_back(9.0 / 80.0);
      tri_orbit3(rule.points, rule.weights, (6.0 + s15) / 21.0, 0.5 * (155.0 + s15) / 1200.0);
      tri_orbit3(rule.points, rule.weights, (6.0 - s15) / 21.0, 0.5 * (155.0 - s15) / 1200.0);
      break;
    }
    default:
      throw std::invalid_argument("triangle_rule: no rule of degree " + std::to_string(degree));
  }
  return rule;
}

inline QuadratureRule<3> tetrahedron_rule(int degree) {
  QuadratureRule<3> rule;
  rule.degree = degree;
  switch (degree) {
    case 1:
      rule.points.push_back({0.25, 0.25, 0.25});
      rule.weights.push_back(1.0 / 6.0);
      break;
    case 2: {
      const double s5 = std::sqrt(5.0);
      tet_orbit4(rule.points, rule.weights, (5.0 + 3.0 * s5) / 20.0, (5.0 - s5) / 20.0,
                 1.0 / 24.0);
      break;
    }
    case 5: {
      // Symmetric positive 14-point rule, exact through degree 5.
      tet_orbit4(rule.points, rule.weights, 0.7217942490673264, 0.0927352503108912,
                 0.0734930431163619 / 6.0);
      tet_orbit4(rule.points, rule.weights, 0.0673422422100983, 0.3108859192633005,
                 0.1126879257180158 / 6.0);
      tet_orbit6(rule.points, rule.weights, 0.4544962958743506, 0.0455037041256494,
                 0.0425460207770812 / 6.0);
      break;
    }
    default:
      throw std::invalid_argument("tetrahedron_rule: no rule of degree " + std::to_string(degree));
  }
  return rule;
}

}  // namespace detail

/// Returns a rule exact for all polynomials of total degree <= `degree`
/// on the reference simplex of dimension M. Requests between catalog
/// entries are served by the next stronger rule; degrees outside [1,6]
/// (or beyond the catalog) raise std::invalid_argument.
template <int M>
QuadratureRule<M> quadrature(int degree) {
  static_assert(M >= 1 && M <= 3, "quadrature: simplex dimension must be 1, 2 or 3");
  if (degree < 1 || degree > 6)
    throw std::invalid_argument("quadrature: degree must be in [1,6], got " +
                                std::to_string(degree));
  if constexpr (M == 1) {
    const int n_points = degree / 2 + 1;  // n-point Gauss is exact to 2n-1
    return detail::gauss_interval(n_points, 2 * n_points - 1);
  } else if constexpr (M == 2) {
    if (degree <= 2) return detail::triangle_rule(degree);
    if (degree <= 4) return detail::triangle_rule(4);
    if (degree <= 5) return detail::triangle_rule(5);
    throw std::invalid_argument("quadrature<2>: degree 6 not in catalog");
  } else {
    if (degree <= 2) return detail::tetrahedron_rule(degree);
    if (degree <= 5) return detail::tetrahedron_rule(5);
    throw std::invalid_argument("quadrature<3>: degree 6 not in catalog");
  }
}

}  // namespace stfem
