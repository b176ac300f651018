#pragma once

#include <optional>
#include <span>
#include <vector>

#include "radxray/xray.hpp"

namespace radxray {

/// Relative RMS thresholds separating "fits", "inconclusive" and "rejected".
struct FitTolerances {
  double accept = 1e-6;
  double reject = 1e-3;
  /// Chebyshev coefficients below this fraction of the largest are noise.
  double degree_threshold = 1e-7;
};

enum class FitStatus { Fits, Inconclusive, Rejected };
const char* to_string(FitStatus s);

/// Least-squares polynomial, stored in the Chebyshev basis of
/// x = (t - center) / half_width and also expanded in monomials of t.
struct FittedPolynomial {
  double center = 0.0;
  double half_width = 1.0;
  std::vector<double> chebyshev;
  RealPoly monomial;

  double operator()(double t) const;
  cplx operator()(cplx t) const;
};

struct RadicalFitReport {
  Direction xi = Direction::from_angle(0.0);
  int m = 1;
  int degree_cap = 1;
  FittedPolynomial fit;
  /// RMS of A^m - P over the interior samples divided by max |A^m|.
  double rel_residual = 0.0;
  int degree_estimate = 0;
  FitStatus status = FitStatus::Rejected;
  std::optional<double> exponent_minus;
  std::optional<double> exponent_plus;
  /// Only set for fitting reports with even m.
  std::optional<double> c_xi;
  std::optional<double> d_xi;
  /// Excluded from the verdict (non-Morse tangency).
  bool skipped = false;

  const RealPoly& coeffs() const { return fit.monomial; }
};

/// Fits A^m over the interior samples by a polynomial of degree <= degree_cap.
/// Throws InvalidArgument for m < 1 or cap < m and InsufficientSamples when
/// fewer than degree_cap + 8 interior samples are present.
RadicalFitReport fit_power(const ChordSamples& samples, int m, int degree_cap, const FitTolerances& tol = {});

enum class Side { Minus, Plus };
enum class NonMorsePolicy { Skip, Measure };

/// Log-log slope of A against the distance to rho_-/+ over the tail samples.
/// Throws NonMorseSkipped for a flagged side unless policy is Measure.
double endpoint_exponent(const ChordSamples& samples, Side side, NonMorsePolicy policy = NonMorsePolicy::Skip);

struct FactoredForm {
  double c_xi = 0.0;
  double d_xi = 0.0;
  /// max |P - c ((rho_+ - t)(t - rho_-))^{m/2}| / max |P| on the fit grid.
  double max_dev = 0.0;
};

/// Matches a fitting report against c ((rho_+ - t)(t - rho_-))^{m/2}.
/// Throws OddM for odd m and PrerequisiteFailed when the report does not fit
/// with degree exactly m.
FactoredForm factored_form(const RadicalFitReport& report, const SupportData& sd, const FitTolerances& tol = {});

struct PowerScan {
  int m = 1;
  double worst_residual = 0.0;
  bool degrees_match = true;
  FitStatus status = FitStatus::Rejected;
};

struct HypothesisVerdict {
  /// Per-direction reports for m_selected, or for the best-scoring m when
  /// nothing fits.
  std::vector<RadicalFitReport> reports;
  std::vector<PowerScan> scans;
  std::optional<int> m_selected;
  bool fits = false;
  FitStatus status = FitStatus::Rejected;
  double worst_residual = 0.0;
  int skipped_directions = 0;
};

struct ScanOptions {
  int m_max = 8;
  FitTolerances tol;
};

/// Scans m = 1..m_max with degree cap m over every direction that is not
/// flagged non-Morse and selects the smallest m that fits everywhere.
HypothesisVerdict scan_hypothesis(std::span<const ChordSamples> directions, const ScanOptions& options = {});

}  // namespace radxray
