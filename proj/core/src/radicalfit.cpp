#include "radxray/radicalfit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "radxray/error.hpp"

namespace radxray {
namespace {

template <class T>
T clenshaw(const std::vector<double>& c, T x) {
  T b1(0), b2(0);
  for (std::size_t k = c.size(); k-- > 1;) {
    const T b0 = T(c[k]) + T(2.0) * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return T(c.empty() ? 0.0 : c[0]) + x * b1 - b2;
}

RealPoly chebyshev_to_monomial(const std::vector<double>& c) {
  RealPoly result;
  RealPoly t_prev = RealPoly::constant(1.0);
  RealPoly t_cur({0.0, 1.0});
  const RealPoly two_x({0.0, 2.0});
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k == 0) {
      result += t_prev * c[0];
      continue;
    }
    if (k >= 2) {
      RealPoly next = two_x * t_cur - t_prev;
      t_prev = std::move(t_cur);
      t_cur = std::move(next);
    }
    result += t_cur * c[k];
  }
  return result;
}

FitStatus classify(double residual, int degree, int m, const FitTolerances& tol) {
  if (residual <= tol.accept && degree == m) return FitStatus::Fits;
  if (residual > tol.reject) return FitStatus::Rejected;
  return FitStatus::Inconclusive;
}

}  // namespace

const char* to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Fits: return "fits";
    case FitStatus::Inconclusive: return "inconclusive";
    case FitStatus::Rejected: return "rejected";
  }
  return "unknown";
}

double FittedPolynomial::operator()(double t) const { return clenshaw(chebyshev, (t - center) / half_width); }

cplx FittedPolynomial::operator()(cplx t) const { return clenshaw(chebyshev, (t - center) / half_width); }

RadicalFitReport fit_power(const ChordSamples& samples, int m, int degree_cap, const FitTolerances& tol) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  if (degree_cap < m) throw Error(ErrorKind::InvalidArgument, "degree cap must be >= m");
  std::vector<double> ts, values;
  samples.interior(ts, values);
  if (static_cast<int>(ts.size()) < degree_cap + 8)
    throw Error(ErrorKind::InsufficientSamples, "need at least degree_cap + 8 interior samples, have " +
                                                    std::to_string(ts.size()));

  RadicalFitReport r;
  r.xi = samples.xi;
  r.m = m;
  r.degree_cap = degree_cap;
  r.skipped = samples.support.any_non_morse();

  const double center = samples.support.center();
  double half = 0.0;
  for (double t : ts) half = std::max(half, std::abs(t - center));
  r.fit.center = center;
  r.fit.half_width = half;

  const Eigen::Index n = static_cast<Eigen::Index>(ts.size());
  const Eigen::Index cols = degree_cap + 1;
  Eigen::MatrixXd basis(n, cols);
  Eigen::VectorXd y(n);
  double y_max = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = (ts[static_cast<std::size_t>(i)] - center) / half;
    basis(i, 0) = 1.0;
    if (cols > 1) basis(i, 1) = x;
    for (Eigen::Index k = 2; k < cols; ++k) basis(i, k) = 2.0 * x * basis(i, k - 1) - basis(i, k - 2);
    y(i) = std::pow(values[static_cast<std::size_t>(i)], m);
    y_max = std::max(y_max, std::abs(y(i)));
  }
  const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd residual = basis * coeffs - y;
  r.rel_residual = y_max > 0.0 ? std::sqrt(residual.squaredNorm() / static_cast<double>(n)) / y_max : 0.0;

  r.fit.chebyshev.assign(coeffs.data(), coeffs.data() + coeffs.size());
  r.fit.monomial = compose_affine(chebyshev_to_monomial(r.fit.chebyshev), -center / half, 1.0 / half);

  const double c_max = coeffs.cwiseAbs().maxCoeff();
  r.degree_estimate = 0;
  for (Eigen::Index k = cols - 1; k >= 0; --k) {
    if (std::abs(coeffs(k)) > tol.degree_threshold * c_max) {
      r.degree_estimate = static_cast<int>(k);
      break;
    }
  }
  r.status = classify(r.rel_residual, r.degree_estimate, m, tol);

  if (!samples.support.non_morse_minus) r.exponent_minus = endpoint_exponent(samples, Side::Minus);
  if (!samples.support.non_morse_plus) r.exponent_plus = endpoint_exponent(samples, Side::Plus);
  if (r.status == FitStatus::Fits && m % 2 == 0) {
    const FactoredForm f = factored_form(r, samples.support, tol);
    r.c_xi = f.c_xi;
    r.d_xi = f.d_xi;
  }
  return r;
}

double endpoint_exponent(const ChordSamples& samples, Side side, NonMorsePolicy policy) {
  const bool flagged = side == Side::Minus ? samples.support.non_morse_minus : samples.support.non_morse_plus;
  if (flagged && policy == NonMorsePolicy::Skip)
    throw Error(ErrorKind::NonMorseSkipped, "tangency on this side is non-Morse");
  const SampleKind kind = side == Side::Minus ? SampleKind::TailMinus : SampleKind::TailPlus;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < samples.ts.size(); ++i) {
    if (samples.kinds[i] != kind || !(samples.values[i] > 0.0)) continue;
    const double d = side == Side::Minus ? samples.ts[i] - samples.rho_minus() : samples.rho_plus() - samples.ts[i];
    if (!(d > 0.0)) continue;
    const double x = std::log(d);
    const double y = std::log(samples.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) throw Error(ErrorKind::InsufficientSamples, "need at least three tail samples");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

FactoredForm factored_form(const RadicalFitReport& report, const SupportData& sd, const FitTolerances& tol) {
  if (report.m % 2 != 0) throw Error(ErrorKind::OddM, "a radical-polynomial chord function forces even m");
  if (report.rel_residual > tol.accept || report.degree_estimate != report.m)
    throw Error(ErrorKind::PrerequisiteFailed, "factored form needs a fitting report of degree m");
  constexpr int kGrid = 64;
  const int half_m = report.m / 2;
  std::vector<double> p(kGrid), f(kGrid);
  double pf = 0.0, ff = 0.0, p_max = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = report.fit.center + report.fit.half_width * std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * kGrid));
    p[i] = report.fit(t);
    f[i] = std::pow((sd.rho_plus - t) * (t - sd.rho_minus), half_m);
    pf += p[i] * f[i];
    ff += f[i] * f[i];
    p_max = std::max(p_max, std::abs(p[i]));
  }
  FactoredForm out;
  out.c_xi = pf / ff;
  for (int i = 0; i < kGrid; ++i) out.max_dev = std::max(out.max_dev, std::abs(p[i] - out.c_xi * f[i]));
  out.max_dev /= p_max;
  out.d_xi = std::pow(out.c_xi, 1.0 / report.m);
  return out;
}

HypothesisVerdict scan_hypothesis(std::span<const ChordSamples> directions, const ScanOptions& options) {
  HypothesisVerdict verdict;
  for (const auto& d : directions)
    if (d.support.any_non_morse()) ++verdict.skipped_directions;
  if (verdict.skipped_directions == static_cast<int>(directions.size())) {
    verdict.status = FitStatus::Inconclusive;
    return verdict;
  }

  bool all_rejected = true;
  double best_worst = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= options.m_max; ++m) {
    std::vector<RadicalFitReport> reports;
    reports.reserve(directions.size());
    PowerScan scan;
    scan.m = m;
    bool any_rejected = false, all_fit = true;
    for (const auto& d : directions) {
      reports.push_back(fit_power(d, m, m, options.tol));
      const auto& r = reports.back();
      if (r.skipped) continue;
      scan.worst_residual = std::max(scan.worst_residual, r.rel_residual);
      if (r.degree_estimate != m) scan.degrees_match = false;
      if (r.status != FitStatus::Fits) all_fit = false;
      if (r.status == FitStatus::Rejected) any_rejected = true;
    }
    scan.status = all_fit ? FitStatus::Fits : (any_rejected ? FitStatus::Rejected : FitStatus::Inconclusive);
    verdict.scans.push_back(scan);

    if (scan.status == FitStatus::Fits && !verdict.m_selected) {
      verdict.m_selected = m;
      verdict.fits = true;
      verdict.status = FitStatus::Fits;
      verdict.worst_residual = scan.worst_residual;
      verdict.reports = std::move(reports);
      continue;
    }
    if (scan.status != FitStatus::Rejected) all_rejected = false;
    if (!verdict.m_selected && scan.worst_residual < best_worst) {
      best_worst = scan.worst_residual;
      verdict.worst_residual = scan.worst_residual;
      verdict.reports = std::move(reports);
    }
  }
  if (!verdict.m_selected) verdict.status = all_rejected ? FitStatus::Rejected : FitStatus::Inconclusive;
  return verdict;
}

}  // namespace radxray
