#include "radxray/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "radxray/error.hpp"

namespace radxray {
namespace {

constexpr double kStepFloor = 1e-12;
constexpr double kMinSeparation = 1e-6;
constexpr int kNewtonIterations = 8;
constexpr int kContourNodes = 256;

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double u = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + u * ab));
}

double polyline_distance(cplx p, const std::vector<cplx>& pts) {
  if (pts.size() == 1) return std::abs(p - pts.front());
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) d = std::min(d, segment_distance(p, pts[i], pts[i + 1]));
  return d;
}

struct Interval {
  double lo, hi;
};

// Builds the path in a mirrored copy where the route heads towards +R.
// Returns false when t0 sits inside a detour (route blocked).
bool route_right(const std::vector<cplx>& zeros, double t0, double radius, double delta, std::vector<cplx>& pts,
                 std::size_t& real_prefix) {
  std::vector<bool> obstacle(zeros.size(), false);
  for (std::size_t i = 0; i < zeros.size(); ++i)
    obstacle[i] = std::abs(zeros[i].imag()) < delta && zeros[i].real() > t0;

  for (std::size_t attempt = 0; attempt <= zeros.size(); ++attempt) {
    std::vector<Interval> spans;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      if (!obstacle[i]) continue;
      const double r = 1.05 * (delta + std::abs(zeros[i].imag()));
      spans.push_back({zeros[i].real() - r, zeros[i].real() + r});
    }
    std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& s : spans) {
      if (!merged.empty() && s.lo <= merged.back().hi) {
        merged.back().hi = std::max(merged.back().hi, s.hi);
      } else {
        merged.push_back(s);
      }
    }
    if (!merged.empty() && merged.front().lo <= t0) return false;
    if (!merged.empty() && merged.back().hi >= radius) return false;

    pts.clear();
    pts.emplace_back(t0, 0.0);
    auto append_real = [&](double to) {
      double x = pts.back().real();
      while (x < to) {
        x = std::min(to, x + std::max(0.25 * delta, 0.05 * std::abs(x)));
        pts.emplace_back(x, 0.0);
      }
    };
    real_prefix = 0;
    for (const Interval& s : merged) {
      append_real(s.lo);
      if (real_prefix == 0) real_prefix = pts.size();
      const double c = 0.5 * (s.lo + s.hi);
      const double r = 0.5 * (s.hi - s.lo);
      const int n = std::max(24, static_cast<int>(std::ceil(M_PI * r / (0.25 * delta))));
      for (int k = 1; k <= n; ++k) pts.push_back(cplx(c, 0.0) + std::polar(r, M_PI * (1.0 - double(k) / n)));
      pts.back() = cplx(s.hi, 0.0);
    }
    append_real(radius);
    if (real_prefix == 0) real_prefix = pts.size();

    bool changed = false;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      if (polyline_distance(zeros[i], pts) < delta && !obstacle[i]) {
        obstacle[i] = true;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

}  // namespace

DiscriminantSet discriminant_set(const AlgebraicBody& body, const Direction& xi) {
  DiscriminantSet ds;
  ds.xi = xi;
  ds.frame_poly = body.in_frame(xi);
  const int n = ds.frame_poly.total_degree();
  const BiPoly lead = homogeneous_parts(ds.frame_poly).back();
  if (std::abs(ds.frame_poly.coeff(n, 0)) <= kTrimTolerance * lead.max_abs_coeff())
    throw Error(ErrorKind::DegenerateDirection,
                "xi^perp is a zero of the leading form; choose another direction");
  ds.d = discriminant_x1(ds.frame_poly);
  const double scale = std::max(1.0, body.scale());
  if (ds.d.degree() >= 1) ds.zeros = cluster_roots(ds.d, roots_all(ds.d), 1e-4 * scale);
  ds.real_zeros = real_roots(ds.zeros, 1e-9 * scale);
  return ds;
}

double default_path_radius(const DiscriminantSet& ds) {
  double m = 0.0;
  for (const auto& z : ds.zeros.roots) m = std::max(m, std::abs(z.value));
  return 100.0 * (1.0 + m);
}

ComplexPath build_path(const DiscriminantSet& ds, double t0, double radius, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::InvalidArgument, "delta must be positive");
  double max_zero = 0.0;
  double nearest = std::numeric_limits<double>::infinity();
  std::vector<cplx> zeros;
  for (const auto& z : ds.zeros.roots) {
    zeros.push_back(z.value);
    max_zero = std::max(max_zero, std::abs(z.value));
    nearest = std::min(nearest, std::abs(z.value - cplx(t0, 0.0)));
  }
  if (!(radius > max_zero + 1.0)) throw Error(ErrorKind::InvalidArgument, "path radius must exceed max|zero| + 1");
  if (std::abs(t0) >= radius) throw Error(ErrorKind::InvalidArgument, "t0 must lie inside the path radius");
  if (nearest <= delta) {
    std::ostringstream msg;
    msg << "t0 = " << t0 << " is within " << nearest << " < delta = " << delta
        << " of a discriminant zero; perturb t0 by at least " << (delta - nearest) + 0.1 * delta;
    throw Error(ErrorKind::StartTooCloseToZ, msg.str());
  }

  ComplexPath path;
  for (const double sign : {1.0, -1.0}) {
    std::vector<cplx> mirrored;
    for (const cplx& z : zeros) mirrored.emplace_back(sign * z.real(), z.imag());
    std::vector<cplx> pts;
    std::size_t prefix = 0;
    if (!route_right(mirrored, sign * t0, radius, delta, pts, prefix)) continue;
    for (auto& p : pts) p = cplx(sign * p.real(), p.imag());
    path.waypoints = std::move(pts);
    path.real_prefix = prefix;
    path.clearance = std::numeric_limits<double>::infinity();
    for (const cplx& z : zeros) path.clearance = std::min(path.clearance, polyline_distance(z, path.waypoints));
    return path;
  }
  throw Error(ErrorKind::StartTooCloseToZ,
              "every route from t0 starts inside a detour around a discriminant zero; perturb t0");
}

// ---------------------------------------------------------------------------

TrackedBranches track_branches(const AlgebraicBody& body, const Direction& xi, double t0, const ComplexPath& path) {
  return track_branches(discriminant_set(body, xi), body, t0, path);
}

TrackedBranches track_branches(const DiscriminantSet& ds, const AlgebraicBody& body, double t0,
                               const ComplexPath& path) {
  if (path.waypoints.empty() || path.waypoints.front() != cplx(t0, 0.0))
    throw Error(ErrorKind::InvalidArgument, "path must start at t0");
  const auto chord = chord_endpoints(body, ds.xi, t0);
  if (!chord || chord->grazing)
    throw Error(ErrorKind::InvalidArgument, "chord at t0 is not transversal (two distinct endpoints needed)");

  const BiPoly& q = ds.frame_poly;
  const BiPoly qs = q.d_x1();
  const BiPoly qt = q.d_x2();
  const Vec2 perp = ds.xi.perp();

  TrackedBranches tb;
  tb.path = path;
  cplx za = dot(chord->a, perp);
  cplx zb = dot(chord->b, perp);
  tb.fa.push_back(za);
  tb.fb.push_back(zb);

  auto newton = [&](cplx z, cplx t, bool& ok) {
    ok = false;
    for (int it = 0; it < kNewtonIterations; ++it) {
      const cplx d = qs.evaluate(z, t);
      if (d == cplx(0.0)) return z;
      const cplx step = q.evaluate(z, t) / d;
      z -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(z))) {
        ok = true;
        return z;
      }
    }
    ok = std::abs(q.evaluate(z, t)) <= 1e-12 * q.magnitude(z, t);
    return z;
  };
  auto slope = [&](cplx z, cplx t) { return -qt.evaluate(z, t) / qs.evaluate(z, t); };

  double residual = 0.0, relative = 0.0;
  auto record_residual = [&](cplx z, cplx t) {
    const double r = std::abs(q.evaluate(z, t));
    residual = std::max(residual, r);
    relative = std::max(relative, r / std::max(q.magnitude(z, t), 1e-300));
    return r;
  };
  tb.residuals.push_back(std::max(record_residual(za, t0), record_residual(zb, t0)));
  double min_sep = std::abs(za - zb);

  const double h_max = std::isfinite(path.clearance) ? path.clearance / 10.0 : 0.1;
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const cplx from = path.waypoints[i];
    const cplx to = path.waypoints[i + 1];
    const double length = std::abs(to - from);
    const cplx unit = length > 0.0 ? (to - from) / length : cplx(0.0);
    double done = 0.0;
    double h = h_max;
    cplx t = from;
    while (done < length) {
      const double step = std::min(h, length - done);
      const cplx t_new = done + step >= length ? to : from + unit * (done + step);
      const cplx dt = t_new - t;
      const cplx va = slope(za, t), vb = slope(zb, t);
      const cplx pa = za + dt * va;
      const cplx pb = zb + dt * vb;
      bool ok_a = false, ok_b = false;
      const cplx na = newton(pa, t_new, ok_a);
      const cplx nb = newton(pb, t_new, ok_b);
      const double gap = std::abs(pa - pb);
      const bool accept = ok_a && ok_b && std::abs(na - pa) <= 0.1 * gap && std::abs(nb - pb) <= 0.1 * gap &&
                          std::abs(na - pa) <= 0.5 * step * (std::abs(va) + 1.0) &&
                          std::abs(nb - pb) <= 0.5 * step * (std::abs(vb) + 1.0) &&
                          std::abs(na - nb) >= kMinSeparation;
      if (!accept) {
        h *= 0.5;
        if (h < kStepFloor) {
          throw Error(ErrorKind::TrackingFailure,
                      "step size underflow between waypoints " + std::to_string(i) + " and " + std::to_string(i + 1));
        }
        continue;
      }
      za = na;
      zb = nb;
      t = t_new;
      done += step;
      ++tb.steps;
      min_sep = std::min(min_sep, std::abs(za - zb));
      h = std::min(2.0 * h, h_max);
    }
    tb.fa.push_back(za);
    tb.fb.push_back(zb);
    tb.residuals.push_back(std::max(record_residual(za, to), record_residual(zb, to)));
  }
  tb.residual = residual;
  tb.relative_residual = relative;
  tb.min_separation = min_sep;
  return tb;
}

// ---------------------------------------------------------------------------

ComplexPoly psi_polynomial(const BiPoly& q, cplx s) {
  const int n = q.total_degree();
  if (n < 0) return {};
  std::vector<cplx> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& [e, v] : q.terms()) c[static_cast<std::size_t>(e.first)] += v * std::pow(s, n - e.first - e.second);
  return ComplexPoly(std::move(c));
}

ResidueCount log_residue_count(const BiPoly& q, cplx center, double eps, cplx s) {
  if (!(eps > 0.0)) throw Error(ErrorKind::InvalidArgument, "contour radius must be positive");
  const ComplexPoly psi = psi_polynomial(q, s);
  if (psi.is_zero()) throw Error(ErrorKind::ZeroOnContour, "Psi vanishes identically");
  const ComplexPoly dpsi = psi.derivative();

  double scale = 0.0;
  for (const auto& c : psi.coeffs()) scale += std::abs(c) * std::pow(std::abs(center) + eps, 0);
  scale = 0.0;
  for (std::size_t k = 0; k < psi.coeffs().size(); ++k)
    scale += std::abs(psi.coeffs()[k]) * std::pow(std::abs(center) + eps, static_cast<double>(k));

  ResidueCount out;
  for (const int nodes : {kContourNodes, 4 * kContourNodes}) {
    cplx acc = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const cplx offset = std::polar(eps, 2.0 * M_PI * k / nodes);
      const cplx w = center + offset;
      const cplx value = psi(w);
      if (std::abs(value) <= 1e-12 * scale)
        throw Error(ErrorKind::ZeroOnContour, "Psi vanishes on the contour; perturb eps");
      acc += dpsi(w) / value * offset;
    }
    out.raw = (acc / static_cast<double>(nodes)).real();
    out.count = static_cast<int>(std::lround(out.raw));
    out.rounding_distance = std::abs(out.raw - out.count);
    out.nodes = nodes;
    if (out.rounding_distance <= 0.01) return out;
  }
  throw Error(ErrorKind::NonConvergence, "contour integral did not settle near an integer");
}

GrowthReport growth_check(std::span<const cplx> ts, std::span<const cplx> p_values, int m) {
  if (ts.size() != p_values.size() || ts.empty())
    throw Error(ErrorKind::InvalidArgument, "growth_check needs matching, nonempty sequences");
  double r_max_abs = 0.0;
  for (const cplx& t : ts) r_max_abs = std::max(r_max_abs, std::abs(t));
  auto ratio = [&](std::size_t i) { return std::abs(p_values[i]) / std::pow(std::abs(ts[i]), m); };

  GrowthReport g;
  std::size_t decade_start = ts.size() - 1;
  for (std::size_t i = ts.size(); i-- > 0;) {
    if (std::abs(ts[i]) < 0.1 * r_max_abs) break;
    decade_start = i;
  }
  const double reference = ratio(decade_start);
  bool bounded = reference > 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double a = std::abs(ts[i]);
    if (a >= 0.5 * r_max_abs) g.ratio_max = std::max(g.ratio_max, ratio(i));
    if (i >= decade_start && ratio(i) > 1.2 * reference) bounded = false;
  }
  g.plateau = ratio(ts.size() - 1);
  g.bounded = bounded;
  return g;
}

GrowthReport growth_check(const TrackedBranches& tb, int m) {
  std::vector<cplx> values(tb.fa.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::pow(tb.bracket(i), m);
  return growth_check(tb.path.waypoints, values, m);
}

double direction_cluster_deviation(const TrackedBranches& tb, const BiPoly& frame_poly, double t_min) {
  const LeadingDirections lead = leading_root_directions(frame_poly);
  double worst = 0.0;
  for (std::size_t i = 0; i < tb.path.waypoints.size(); ++i) {
    const cplx t = tb.path.waypoints[i];
    if (std::abs(t) <= t_min) continue;
    for (const cplx f : {tb.fa[i], tb.fb[i]}) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& w : lead.roots.roots) best = std::min(best, std::abs(f / t - w.value));
      worst = std::max(worst, best);
    }
  }
  return worst;
}

}  // namespace radxray
