#pragma once

#include <functional>
#include <span>
#include <vector>

#include "radxray/body.hpp"

namespace radxray {

/// Discriminant of Q~(s, t) = Q(s perp + t xi) with respect to s, and its
/// zero set: the branch locus of the boundary points over the line height t.
struct DiscriminantSet {
  Direction xi = Direction::from_angle(0.0);
  /// Q in the (s, t) frame of xi.
  BiPoly frame_poly;
  RealPoly d;
  /// Zeros of d, clustered, with multiplicities.
  RootSet zeros;
  /// Real zeros (|Im| <= 1e-9), ascending.
  std::vector<double> real_zeros;
};

/// Throws DegenerateDirection when xi^perp is a zero of the leading form
/// Q_N (the leading coefficient of Q~ in s vanishes identically).
DiscriminantSet discriminant_set(const AlgebraicBody& body, const Direction& xi);

/// Polyline from a real t0 to |t| = R along the real axis, detouring through
/// the upper half plane around every zero of D closer than delta.
struct ComplexPath {
  std::vector<cplx> waypoints;
  /// Minimum distance from the polyline to any zero of D.
  double clearance = 0.0;
  /// Number of leading waypoints on the real axis (the initial segment).
  std::size_t real_prefix = 0;
};

/// Throws StartTooCloseToZ when some zero lies within delta of t0 (or every
/// route away from t0 has to start inside a detour), InvalidArgument when
/// R <= max |zero| + 1 or delta <= 0.
ComplexPath build_path(const DiscriminantSet& ds, double t0, double radius, double delta);

/// R = 100 (1 + max |zero of D|).
double default_path_radius(const DiscriminantSet& ds);

/// The two boundary branches f^a, f^b (perpendicular coordinates of the
/// chord endpoints), continued along a path in the complex t plane.
struct TrackedBranches {
  ComplexPath path;
  std::vector<cplx> fa;
  std::vector<cplx> fb;
  /// max |Q~(f, t)| over both branches, per waypoint.
  std::vector<double> residuals;
  /// max |Q~(f, t)| over all waypoints and both branches.
  double residual = 0.0;
  /// Same, divided by the coefficient magnitude sum_k |c_k| |s|^i |t|^j.
  double relative_residual = 0.0;
  double min_separation = 0.0;
  int steps = 0;

  /// <xi^perp, F^a(t) - F^b(t)> at waypoint i.
  cplx bracket(std::size_t i) const { return fa[i] - fb[i]; }
};

/// Euler predictor dz/dt = -Q_t / Q_s with Newton correction, step halving
/// on stalls or near-collisions (floor 1e-12). Throws TrackingFailure with
/// the waypoint index, InvalidArgument when the chord at t0 is not
/// transversal.
TrackedBranches track_branches(const AlgebraicBody& body, const Direction& xi, double t0, const ComplexPath& path);
TrackedBranches track_branches(const DiscriminantSet& ds, const AlgebraicBody& body, double t0,
                               const ComplexPath& path);

struct ResidueCount {
  int count = 0;
  double raw = 0.0;
  /// |raw - count| before rounding.
  double rounding_distance = 0.0;
  int nodes = 0;
};

/// Psi(w, s) = sum_j s^{N-j} Q_j(w, 1) from the homogeneous parts of q.
ComplexPoly psi_polynomial(const BiPoly& q, cplx s);

/// Number of zeros of Psi(., s) inside |w - center| < eps by the argument
/// principle (trapezoid rule, 256 nodes, refined x4 once). Throws
/// ZeroOnContour, or NonConvergence if no integer is reached.
ResidueCount log_residue_count(const BiPoly& q, cplx center, double eps, cplx s);

struct GrowthReport {
  /// max |P(t)| / |t|^m over the outer half of the path.
  double ratio_max = 0.0;
  /// Ratio at the last waypoint.
  double plateau = 0.0;
  bool bounded = false;
};

/// |bracket|^m / |t|^m; bounded when it never exceeds 1.2 times its value at
/// the start of the last decade of |t|.
GrowthReport growth_check(const TrackedBranches& tb, int m);
GrowthReport growth_check(std::span<const cplx> ts, std::span<const cplx> p_values, int m);

/// max over waypoints with |t| > t_min of the distance from f/t to the
/// nearest leading root direction w_j of the frame polynomial.
double direction_cluster_deviation(const TrackedBranches& tb, const BiPoly& frame_poly, double t_min);

}  // namespace radxray
