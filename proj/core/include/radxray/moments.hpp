#pragma once

#include <optional>
#include <span>
#include <vector>

#include "radxray/radicalfit.hpp"

namespace radxray {

/// alpha_k = integral over [-1, 1] of sqrt(1 - v^2) v^k dv.
double alpha_constant(int k);

/// Chord moments M_k(xi) = integral of A(xi, t) t^k dt.
struct MomentTable {
  int k_max = 0;
  std::vector<double> thetas;
  /// values[k][i] = M_k(xi(thetas[i])).
  std::vector<std::vector<double>> values;
  std::vector<SupportData> supports;
  bool used_fallback = false;

  double area() const;
};

/// Needs k_max >= 2 and at least 64 directions. Directions that are exact
/// opposites of another grid direction reuse its quadrature with the sign
/// (-1)^k, so the parity relation holds bit for bit.
MomentTable compute_moments(const AlgebraicBody& body, int k_max, std::span<const double> thetas);

enum class RangeStatus { Pass, Inconclusive, Fail };
const char* to_string(RangeStatus s);

struct RangeTolerances {
  double pass = 1e-6;
  double fail = 1e-3;
};

struct SpectrumLeakage {
  /// Moment order, or 2 for the quadratic-form stage.
  int k = 0;
  /// Least-squares amplitude per frequency 0..max_frequency.
  std::vector<double> amplitudes;
  /// Energy fraction outside the allowed frequencies, in [0, 1].
  double leakage = 0.0;
  RangeStatus status = RangeStatus::Pass;
};

/// Least-squares trig fit of values(theta) with frequencies 0..max_frequency.
/// Leakage is |v - P_allowed v|^2 / max(|v|^2, energy_floor).
SpectrumLeakage trig_leakage(std::span<const double> thetas, std::span<const double> values,
                             std::span<const int> allowed, int max_frequency, double energy_floor = 0.0);

struct RangeConditionReport {
  /// One entry per k = 0..k_max; allowed frequencies k, k-2, ... >= 0.
  std::vector<SpectrumLeakage> moments;
  /// Quadratic-form test on C^2 = (half the support width)^2.
  SpectrumLeakage quadratic;

  bool pass_through(int k) const;
  RangeStatus status_through(int k) const;
};

RangeConditionReport range_condition(const MomentTable& table, const RangeTolerances& tol = {});

/// Frequencies {0, 2} test of ((rho_+ - rho_-) / 2)^2 over the table's directions.
SpectrumLeakage support_width_leakage(const MomentTable& table, const RangeTolerances& tol = {});

struct EllipseModel {
  Vec2 center;
  /// Direction of the c1 axis, in [0, pi).
  double angle = 0.0;
  /// Squared semi-axes, c1 >= c2.
  double c1 = 0.0;
  double c2 = 0.0;
  /// M_0 / alpha_0.
  double G = 0.0;
  /// max over directions of |sqrt(q(xi)) + <xi, center> - rho_+(xi)|.
  double support_residual = 0.0;
  /// C^2(xi) from the recentred second moment, per direction.
  std::vector<double> c_squared;
  bool is_ellipse = false;
};

struct ReconstructOptions {
  /// Require a fitting hypothesis and passing range conditions for k <= 2.
  bool check_prerequisites = true;
  /// Ellipse when support_residual <= support_tol * body scale.
  double support_tol = 1e-6;
  RangeTolerances range;
};

/// Throws PrerequisiteFailed or NonPositiveForm.
EllipseModel reconstruct(const MomentTable& table, const HypothesisVerdict& fits, const ReconstructOptions& options = {});

}  // namespace radxray
