#include "radxray/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "parallel.hpp"
#include "radxray/error.hpp"

namespace radxray {
namespace {

bool is_canonical(const Direction& d) {
  const Vec2 v = d.xi();
  return v.y > 0.0 || (v.y == 0.0 && v.x > 0.0);
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a < 0.0) a += 2.0 * M_PI;
  return a;
}

RangeStatus classify(double leakage, const RangeTolerances& tol) {
  if (leakage <= tol.pass) return RangeStatus::Pass;
  if (leakage > tol.fail) return RangeStatus::Fail;
  return RangeStatus::Inconclusive;
}

Eigen::MatrixXd trig_basis(std::span<const double> thetas, std::span<const int> freqs) {
  std::vector<std::pair<int, bool>> cols;
  for (int f : freqs) {
    cols.emplace_back(f, false);
    if (f > 0) cols.emplace_back(f, true);
  }
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(thetas.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < thetas.size(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const double arg = cols[c].first * thetas[i];
      basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = cols[c].second ? std::sin(arg) : std::cos(arg);
    }
  return basis;
}

}  // namespace

double alpha_constant(int k) {
  if (k < 0) throw Error(ErrorKind::InvalidArgument, "alpha_k needs k >= 0");
  if (k % 2 == 1) return 0.0;
  double a = M_PI / 2.0;
  for (int j = 0; j < k; j += 2) a *= (j + 1.0) / (j + 4.0);
  return a;
}

double MomentTable::area() const {
  if (values.empty() || values[0].empty()) return 0.0;
  return std::accumulate(values[0].begin(), values[0].end(), 0.0) / static_cast<double>(values[0].size());
}

const char* to_string(RangeStatus s) {
  switch (s) {
    case RangeStatus::Pass: return "pass";
    case RangeStatus::Inconclusive: return "inconclusive";
    case RangeStatus::Fail: return "fail";
  }
  return "unknown";
}

MomentTable compute_moments(const AlgebraicBody& body, int k_max, std::span<const double> thetas) {
  if (k_max < 2) throw Error(ErrorKind::InvalidArgument, "moments need k_max >= 2");
  if (thetas.size() < 64) throw Error(ErrorKind::InvalidArgument, "moments need at least 64 directions");
  const std::size_t n = thetas.size();

  // For each direction, the index whose quadrature it reuses and whether the
  // direction is that one's exact opposite.
  std::vector<std::size_t> source(n);
  std::vector<bool> flipped(n, false);
  std::vector<Direction> dirs;
  dirs.reserve(n);
  for (double th : thetas) dirs.push_back(Direction::from_angle(th));
  for (std::size_t i = 0; i < n; ++i) {
    source[i] = i;
    const double target = wrap_angle(thetas[i] - M_PI);
    for (std::size_t j = 0; j < i; ++j) {
      if (source[j] != j) continue;
      const double diff = std::abs(wrap_angle(thetas[j]) - target);
      if (std::min(diff, 2.0 * M_PI - diff) <= 1e-12) {
        source[i] = j;
        flipped[i] = true;
        break;
      }
    }
  }

  std::vector<QuadratureResult> results(n);
  std::vector<SupportData> sds(n);
  detail::parallel_for(n, [&](std::size_t i) {
    if (source[i] != i) return;
    const Direction d = is_canonical(dirs[i]) ? dirs[i] : dirs[i].opposite();
    sds[i] = support(body, d);
    results[i] = integrate_chord_moments(body, d, sds[i], k_max, sds[i].rho_plus);
  });

  MomentTable table;
  table.k_max = k_max;
  table.thetas.assign(thetas.begin(), thetas.end());
  table.values.assign(static_cast<std::size_t>(k_max) + 1, std::vector<double>(n, 0.0));
  table.supports.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = source[i];
    // Non-canonical sources were computed on their opposite.
    const bool negate = flipped[i] != !is_canonical(dirs[s]);
    const SupportData& base = sds[s];
    SupportData sd = base;
    if (negate) {
      sd.rho_plus = -base.rho_minus;
      sd.rho_minus = -base.rho_plus;
      sd.m_plus = base.m_minus;
      sd.m_minus = base.m_plus;
      sd.non_morse_plus = base.non_morse_minus;
      sd.non_morse_minus = base.non_morse_plus;
      sd.curvature_plus = base.curvature_minus;
      sd.curvature_minus = base.curvature_plus;
    }
    table.supports[i] = sd;
    for (int k = 0; k <= k_max; ++k) {
      const double v = results[s].values[static_cast<std::size_t>(k)];
      table.values[static_cast<std::size_t>(k)][i] = negate && k % 2 == 1 ? -v : v;
    }
    table.used_fallback = table.used_fallback || results[s].used_fallback;
  }
  return table;
}

SpectrumLeakage trig_leakage(std::span<const double> thetas, std::span<const double> values,
                             std::span<const int> allowed, int max_frequency, double energy_floor) {
  if (thetas.size() != values.size()) throw Error(ErrorKind::InvalidArgument, "thetas/values size mismatch");
  if (static_cast<int>(thetas.size()) < 2 * max_frequency + 1)
    throw Error(ErrorKind::InvalidArgument, "too few directions for the requested frequencies");
  SpectrumLeakage out;
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));

  std::vector<int> all(static_cast<std::size_t>(max_frequency) + 1);
  std::iota(all.begin(), all.end(), 0);
  const Eigen::MatrixXd full = trig_basis(thetas, all);
  const Eigen::VectorXd coef = full.colPivHouseholderQr().solve(v);
  out.amplitudes.assign(all.size(), 0.0);
  out.amplitudes[0] = std::abs(coef(0));
  for (int f = 1; f <= max_frequency; ++f)
    out.amplitudes[static_cast<std::size_t>(f)] = std::hypot(coef(2 * f - 1), coef(2 * f));

  const double energy = std::max(v.squaredNorm(), energy_floor);
  if (energy == 0.0) return out;
  Eigen::VectorXd rest = v;
  if (!allowed.empty()) {
    const Eigen::MatrixXd part = trig_basis(thetas, allowed);
    rest -= part * part.colPivHouseholderQr().solve(v);
  }
  out.leakage = std::clamp(rest.squaredNorm() / energy, 0.0, 1.0);
  return out;
}

bool RangeConditionReport::pass_through(int k) const { return status_through(k) == RangeStatus::Pass; }

RangeStatus RangeConditionReport::status_through(int k) const {
  RangeStatus worst = RangeStatus::Pass;
  for (const auto& m : moments) {
    if (m.k > k) continue;
    if (m.status == RangeStatus::Fail) return RangeStatus::Fail;
    if (m.status == RangeStatus::Inconclusive) worst = RangeStatus::Inconclusive;
  }
  return worst;
}

RangeConditionReport range_condition(const MomentTable& table, const RangeTolerances& tol) {
  RangeConditionReport report;
  const int max_frequency = table.k_max + 2;
  double radius = 0.0;
  for (const auto& sd : table.supports) radius = std::max({radius, std::abs(sd.rho_plus), std::abs(sd.rho_minus)});
  const double area = std::abs(table.area());
  for (int k = 0; k <= table.k_max; ++k) {
    std::vector<int> allowed;
    for (int f = k; f >= 0; f -= 2) allowed.push_back(f);
    const double ref = 1e-6 * area * std::pow(radius, k);
    const double floor = static_cast<double>(table.thetas.size()) * ref * ref;
    SpectrumLeakage s = trig_leakage(table.thetas, table.values[static_cast<std::size_t>(k)], allowed, max_frequency, floor);
    s.k = k;
    s.status = classify(s.leakage, tol);
    report.moments.push_back(std::move(s));
  }
  report.quadratic = support_width_leakage(table, tol);
  return report;
}

SpectrumLeakage support_width_leakage(const MomentTable& table, const RangeTolerances& tol) {
  std::vector<double> c2(table.supports.size());
  for (std::size_t i = 0; i < c2.size(); ++i) {
    const double c = 0.5 * table.supports[i].width();
    c2[i] = c * c;
  }
  const int allowed[] = {0, 2};
  SpectrumLeakage s = trig_leakage(table.thetas, c2, allowed, std::max(4, table.k_max + 2));
  s.k = 2;
  s.status = classify(s.leakage, tol);
  return s;
}

EllipseModel reconstruct(const MomentTable& table, const HypothesisVerdict& fits, const ReconstructOptions& options) {
  if (options.check_prerequisites) {
    if (!fits.fits) throw Error(ErrorKind::PrerequisiteFailed, "reconstruction needs a fitting radical hypothesis");
    if (!range_condition(table, options.range).pass_through(2))
      throw Error(ErrorKind::PrerequisiteFailed, "range conditions fail for k <= 2");
  }
  const std::size_t n = table.thetas.size();
  const auto& m0 = table.values[0];
  const auto& m1 = table.values[1];
  const auto& m2 = table.values[2];
  const double a0 = alpha_constant(0);
  const double a2 = alpha_constant(2);

  Eigen::MatrixXd lin(static_cast<Eigen::Index>(n), 2);
  Eigen::MatrixXd quad(static_cast<Eigen::Index>(n), 3);
  Eigen::VectorXd bvals(static_cast<Eigen::Index>(n));
  Eigen::VectorXd c2vals(static_cast<Eigen::Index>(n));
  EllipseModel model;
  model.c_squared.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double c = std::cos(table.thetas[i]);
    const double s = std::sin(table.thetas[i]);
    const double b = m1[i] / m0[i];
    const double centred = m2[i] - 2.0 * b * m1[i] + b * b * m0[i];
    model.c_squared[i] = centred * a0 / (m0[i] * a2);
    lin(r, 0) = c;
    lin(r, 1) = s;
    bvals(r) = b;
    quad(r, 0) = c * c;
    quad(r, 1) = 2.0 * c * s;
    quad(r, 2) = s * s;
    c2vals(r) = model.c_squared[i];
  }
  const Eigen::Vector2d center = lin.colPivHouseholderQr().solve(bvals);
  const Eigen::Vector3d form = quad.colPivHouseholderQr().solve(c2vals);
  model.center = {center(0), center(1)};
  model.G = table.area() / a0;

  const double p = form(0), r = form(1), q = form(2);
  double angle = 0.5 * std::atan2(2.0 * r, p - q);
  const double ca = std::cos(angle), sa = std::sin(angle);
  model.c1 = p * ca * ca + 2.0 * r * sa * ca + q * sa * sa;
  model.c2 = p * sa * sa - 2.0 * r * sa * ca + q * ca * ca;
  if (angle < 0.0) angle += M_PI;
  if (angle >= M_PI) angle -= M_PI;
  model.angle = angle;
  if (!(model.c2 > 0.0) || !(model.c1 > 0.0))
    throw Error(ErrorKind::NonPositiveForm, "fitted C^2 form is not positive definite");

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = std::cos(table.thetas[i]);
    const double s = std::sin(table.thetas[i]);
    const double h = std::sqrt(p * c * c + 2.0 * r * c * s + q * s * s) + c * center(0) + s * center(1);
    model.support_residual = std::max(model.support_residual, std::abs(h - table.supports[i].rho_plus));
    scale = std::max(scale, table.supports[i].width());
  }
  model.is_ellipse = model.support_residual <= options.support_tol * scale;
  return model;
}

}  // namespace radxray
