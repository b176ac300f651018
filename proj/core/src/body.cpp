#include "radxray/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "radxray/error.hpp"

namespace radxray {
namespace {

constexpr int kBoundarySamples = 360;
// Curvature times body scale below which a tangency counts as non-Morse.
constexpr double kNonMorseCurvature = 1e-6;

struct FrameDerivatives {
  BiPoly q, qs, qt, qss, qst;
  explicit FrameDerivatives(BiPoly frame)
      : q(std::move(frame)), qs(q.d_x1()), qt(q.d_x2()), qss(qs.d_x1()), qst(qs.d_x2()) {}
};

// Newton on (Q~, dQ~/ds) = 0 in (s, t). Only used at Morse points, where the
// Jacobian [[Q_s, Q_t], [Q_ss, Q_st]] has determinant -Q_t Q_ss != 0.
// Newton on (q, q_s) = 0. Keeps the result when it converged within max_move.
bool polish_tangency(const FrameDerivatives& f, double& s, double& t, double scale, double max_move) {
  double s_new = s, t_new = t;
  bool converged = false;
  for (int it = 0; it < 30; ++it) {
    const double f1 = f.q(s_new, t_new);
    const double f2 = f.qs(s_new, t_new);
    const double j11 = f2, j12 = f.qt(s_new, t_new);
    const double j21 = f.qss(s_new, t_new), j22 = f.qst(s_new, t_new);
    const double det = j11 * j22 - j12 * j21;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double ds = (f1 * j22 - f2 * j12) / det;
    const double dt = (j11 * f2 - j21 * f1) / det;
    s_new -= ds;
    t_new -= dt;
    if (std::abs(ds) + std::abs(dt) <= 1e-15 * std::max(1.0, scale)) {
      converged = true;
      break;
    }
  }
  if (!converged || std::abs(s_new - s) + std::abs(t_new - t) > max_move) return false;
  s = s_new;
  t = t_new;
  return true;
}

double polish_real_root(const RealPoly& p, const RealPoly& dp, double x) {
  double best = x;
  double best_res = std::abs(p(x));
  for (int it = 0; it < 3; ++it) {
    const double d = dp(x);
    if (d == 0.0) break;
    x -= p(x) / d;
    const double res = std::abs(p(x));
    if (res < best_res) {
      best = x;
      best_res = res;
    } else {
      break;
    }
  }
  return best;
}

}  // namespace

Direction Direction::from_angle(double theta) { return Direction(theta, {std::cos(theta), std::sin(theta)}); }

Direction Direction::from_vector(Vec2 v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) throw Error(ErrorKind::InvalidArgument, "direction vector must be nonzero");
  const Vec2 u = v * (1.0 / n);
  return Direction(std::atan2(u.y, u.x), u);
}

Direction Direction::opposite() const {
  double th = theta_ + M_PI;
  if (th > M_PI) th -= 2.0 * M_PI;
  return Direction(th, -xi_);
}

// ---------------------------------------------------------------------------

AlgebraicBody AlgebraicBody::create(BiPoly q, Vec2 interior_point, std::string id) {
  if (q.total_degree() < 2)
    throw Error(ErrorKind::InvalidBody, "Q must have total degree >= 2 to bound a compact body");
  AlgebraicBody body(std::move(q), interior_point, std::move(id));
  if (!(body.value(interior_point) < 0.0))
    throw Error(ErrorKind::InvalidBody, "invariant Q(interior_point) < 0 violated");

  const BiPoly qx = body.q_.d_x1();
  const BiPoly qy = body.q_.d_x2();
  const BiPoly qxx = qx.d_x1(), qxy = qx.d_x2(), qyy = qy.d_x2();

  std::vector<Vec2> boundary;
  boundary.reserve(kBoundarySamples);
  double max_r = 0.0;
  for (int k = 0; k < kBoundarySamples; ++k) {
    const double ang = 2.0 * M_PI * k / kBoundarySamples;
    const Vec2 u{std::cos(ang), std::sin(ang)};
    const double r = body.ray_exit(u);
    max_r = std::max(max_r, r);
    boundary.push_back(interior_point + u * r);
  }

  bool any_positive_curvature = false;
  for (int k = 0; k < kBoundarySamples; ++k) {
    const Vec2 b = boundary[static_cast<std::size_t>(k)];
    const Vec2 u = (b - interior_point) * (1.0 / norm(b - interior_point));
    const double gx = qx(b.x, b.y), gy = qy(b.x, b.y);
    const double g = std::hypot(gx, gy);
    const double mag = body.q_.magnitude(b.x, b.y);
    if (!(g * max_r > 1e-8 * mag))
      throw Error(ErrorKind::InvalidBody, "invariant |grad Q| > 0 on the boundary violated (singular point)");
    if (!(gx * u.x + gy * u.y > 0.0))
      throw Error(ErrorKind::InvalidBody, "boundary crossing is not transversal; body is not star-shaped");
    const double num = qxx(b.x, b.y) * gy * gy - 2.0 * qxy(b.x, b.y) * gx * gy + qyy(b.x, b.y) * gx * gx;
    const double kappa = num / (g * g * g);
    if (kappa * max_r < -1e-6)
      throw Error(ErrorKind::InvalidBody, "convexity violated: boundary curvature changes sign");
    if (kappa * max_r > 1e-6) any_positive_curvature = true;
  }
  if (!any_positive_curvature)
    throw Error(ErrorKind::InvalidBody, "convexity violated: boundary has no strictly convex point");

  // Provisional box from the sample; support() refines it.
  BoundingBox box{boundary.front(), boundary.front()};
  for (const Vec2& b : boundary) {
    box.lo = {std::min(box.lo.x, b.x), std::min(box.lo.y, b.y)};
    box.hi = {std::max(box.hi.x, b.x), std::max(box.hi.y, b.y)};
  }
  body.bbox_ = box;
  const SupportData sx = support(body, Direction::from_vector({1.0, 0.0}));
  const SupportData sy = support(body, Direction::from_vector({0.0, 1.0}));
  body.bbox_ = BoundingBox{{sx.rho_minus, sy.rho_minus}, {sx.rho_plus, sy.rho_plus}};
  return body;
}

BiPoly AlgebraicBody::in_frame(const Direction& xi) const {
  const Vec2 p = xi.perp();
  const Vec2 x = xi.xi();
  return q_.linear_substitution(p.x, x.x, p.y, x.y);
}

double AlgebraicBody::ray_exit(Vec2 u) const {
  const RealPoly along = q_.restrict_to_line(interior_.x, interior_.y, u.x, u.y).trimmed();
  if (along.degree() < 1) throw Error(ErrorKind::InvalidBody, "body is unbounded along a ray");
  const RootSet roots = roots_all(along);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : roots.roots) {
    const double re = r.value.real();
    if (re > 0.0 && std::abs(r.value.imag()) <= 1e-8 * (1.0 + std::abs(re))) best = std::min(best, re);
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::InvalidBody, "body is unbounded along a ray");
  return polish_real_root(along, along.derivative(), best);
}

AlgebraicBody AlgebraicBody::translated(Vec2 v) const {
  return create(q_.linear_substitution(1.0, 0.0, 0.0, 1.0, -v.x, -v.y), interior_ + v, id_);
}

AlgebraicBody AlgebraicBody::rotated(double phi) const {
  const double c = std::cos(phi), s = std::sin(phi);
  const Vec2 p{c * interior_.x - s * interior_.y, s * interior_.x + c * interior_.y};
  return create(q_.linear_substitution(c, s, -s, c), p, id_);
}

AlgebraicBody make_ellipse_body(double a, double b, Vec2 center, double angle) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::NonPositiveAxis, "ellipse semi-axes must be positive");
  const BiPoly principal{{2, 0, b * b}, {0, 2, a * a}, {0, 0, -a * a * b * b}};
  const double c = std::cos(angle), s = std::sin(angle);
  // u = c (x - cx) + s (y - cy), v = -s (x - cx) + c (y - cy)
  BiPoly q = principal.linear_substitution(c, s, -s, c, -(c * center.x + s * center.y), s * center.x - c * center.y);
  const bool circle = a == b;
  std::string id = circle ? "disk" : "ellipse";
  return AlgebraicBody::create(std::move(q), center, std::move(id));
}

AlgebraicBody make_disk_body(double radius, Vec2 center) { return make_ellipse_body(radius, radius, center, 0.0); }

AlgebraicBody make_superellipse_body() {
  return AlgebraicBody::create(BiPoly{{4, 0, 1.0}, {0, 4, 1.0}, {0, 0, -1.0}}, {0.0, 0.0}, "superellipse");
}

// ---------------------------------------------------------------------------

SupportData support(const AlgebraicBody& body, const Direction& xi) {
  const double scale = std::max(body.scale(), 1e-300);
  const Vec2 perp = xi.perp();
  const Vec2 dir = xi.xi();
  const Vec2 p0 = body.interior_point();
  // Rotated frame with its origin at the interior point.
  const FrameDerivatives f(body.polynomial().linear_substitution(perp.x, dir.x, perp.y, dir.y, p0.x, p0.y));
  const RealPoly disc = discriminant_x1(f.q);
  if (disc.degree() < 1) throw Error(ErrorKind::TangencySolveFailure, "discriminant has no zeros");

  // Clustered roots resolve exact multiple roots. Near-multiple roots come out
  // of the solver with small spurious imaginary parts; their real parts seed
  // Newton on the tangency system. Everything is validated below.
  const double seed_tol = 1e-3 * scale;
  struct Root1 {
    double x;
    bool seed;
  };
  auto candidates = [&](const RealPoly& p, double imag_tol) {
    const RootSet raw = roots_all(p);
    std::vector<Root1> out;
    for (const double x : real_roots(cluster_roots(p, raw, 1e-4 * scale), imag_tol)) out.push_back({x, false});
    for (const double x : real_roots(raw, seed_tol)) out.push_back({x, true});
    return out;
  };

  struct Candidate {
    double s, t;
  };
  std::vector<Candidate> valid;
  for (const Root1 rt : candidates(disc, 1e-8 * scale)) {
    const RealPoly ds = f.qs.at_x2(rt.x).trimmed();
    if (ds.degree() < 1) continue;
    for (const Root1 rs : candidates(ds, 1e-6 * scale)) {
      double s = rs.x, t = rt.x;
      if (!polish_tangency(f, s, t, scale, seed_tol) && (rt.seed || rs.seed)) continue;
      if (std::abs(f.q(s, t)) > 1e-6 * f.q.magnitude(s, t)) continue;
      const Vec2 m = perp * s + dir * t;
      const double dist = norm(m);
      if (dist == 0.0) continue;
      double exit = 0.0;
      try {
        exit = body.ray_exit(m * (1.0 / dist));
      } catch (const Error&) {
        continue;
      }
      if (std::abs(exit - dist) <= 1e-6 * scale) valid.push_back({s, t});
    }
  }
  if (valid.size() < 2) throw Error(ErrorKind::TangencySolveFailure, "fewer than two tangency points on the oval");

  auto by_t = [](const Candidate& a, const Candidate& b) { return a.t < b.t; };
  Candidate lo = *std::min_element(valid.begin(), valid.end(), by_t);
  Candidate hi = *std::max_element(valid.begin(), valid.end(), by_t);
  if (!(hi.t > lo.t)) throw Error(ErrorKind::TangencySolveFailure, "support interval is degenerate");

  auto curvature = [&](const Candidate& c) {
    const double qt = f.qt(c.s, c.t);
    return qt == 0.0 ? 0.0 : std::abs(f.qss(c.s, c.t) / qt);
  };

  SupportData sd;
  sd.curvature_plus = curvature(hi);
  sd.curvature_minus = curvature(lo);
  sd.non_morse_plus = sd.curvature_plus * scale < kNonMorseCurvature;
  sd.non_morse_minus = sd.curvature_minus * scale < kNonMorseCurvature;
  if (!sd.non_morse_plus) polish_tangency(f, hi.s, hi.t, scale, 1e-6 * std::max(1.0, scale));
  if (!sd.non_morse_minus) polish_tangency(f, lo.s, lo.t, scale, 1e-6 * std::max(1.0, scale));
  const double shift = dot(p0, dir);
  sd.rho_plus = hi.t + shift;
  sd.rho_minus = lo.t + shift;
  sd.m_plus = p0 + perp * hi.s + dir * hi.t;
  sd.m_minus = p0 + perp * lo.s + dir * lo.t;
  return sd;
}

std::optional<Chord> chord_endpoints(const AlgebraicBody& body, const Direction& xi, double t) {
  return chord_endpoints(body, xi, t, support(body, xi));
}

std::optional<Chord> chord_endpoints(const AlgebraicBody& body, const Direction& xi, double t,
                                     const SupportData& sd) {
  const double scale = body.scale();
  const double tol_t = 1e-12 * scale;
  if (t < sd.rho_minus - tol_t || t > sd.rho_plus + tol_t) return std::nullopt;
  const Vec2 perp = xi.perp();
  // Osculating parabola at a Morse tangency: half-length sqrt(2 gap / kappa).
  auto near_tangent = [&](Vec2 m, double gap, double kappa, bool flat) {
    gap = std::max(gap, 0.0);
    if (flat || gap == 0.0) return Chord{m, m, true};
    const double half = std::sqrt(2.0 * gap / kappa);
    const Vec2 base = m - xi.xi() * gap;
    return Chord{base + perp * half, base - perp * half, false};
  };
  if (std::abs(t - sd.rho_plus) <= tol_t)
    return near_tangent(sd.m_plus, sd.rho_plus - t, sd.curvature_plus, sd.non_morse_plus);
  if (std::abs(t - sd.rho_minus) <= tol_t)
    return near_tangent(sd.m_minus, t - sd.rho_minus, sd.curvature_minus, sd.non_morse_minus);

  const Vec2 dir = xi.xi();
  const Vec2 p0 = body.interior_point();
  const double tp = dot(p0, dir);
  // A point of the chord: on the segment from p0 to the tangency point on
  // the same side, which lies in K by convexity.
  Vec2 ref;
  if (t >= tp) {
    ref = p0 + (sd.m_plus - p0) * ((t - tp) / (sd.rho_plus - tp));
  } else {
    ref = p0 + (sd.m_minus - p0) * ((tp - t) / (tp - sd.rho_minus));
  }
  const double s_ref = dot(ref, perp);

  const RealPoly line = body.polynomial().restrict_to_line(dir.x * t, dir.y * t, perp.x, perp.y).trimmed();
  const RealPoly dline = line.derivative();
  double above = std::numeric_limits<double>::infinity();
  double below = -std::numeric_limits<double>::infinity();
  if (line.degree() >= 1) {
    for (const double s : real_roots(roots_all(line), 1e-7 * scale)) {
      if (s >= s_ref) above = std::min(above, s);
      if (s <= s_ref) below = std::max(below, s);
    }
  }
  if (!std::isfinite(above) || !std::isfinite(below)) {
    const bool plus_side = std::abs(t - sd.rho_plus) < std::abs(t - sd.rho_minus);
    const Vec2 m = plus_side ? sd.m_plus : sd.m_minus;
    return Chord{m, m, true};
  }
  above = polish_real_root(line, dline, above);
  below = polish_real_root(line, dline, below);
  Chord c{perp * above + dir * t, perp * below + dir * t, false};
  c.grazing = std::abs(above - below) <= 1e-9 * scale;
  return c;
}

}  // namespace radxray
