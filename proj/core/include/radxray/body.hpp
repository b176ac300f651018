#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "radxray/algebra.hpp"

namespace radxray {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

/// Unit vector xi = (cos theta, sin theta). The perpendicular (xi2, -xi1)
/// completes it to a positively oriented frame (perp, xi), so that for
/// xi = (0, 1) the perpendicular coordinate is plain x1.
class Direction {
 public:
  static Direction from_angle(double theta);
  /// Normalizes v; throws InvalidArgument for the zero vector.
  static Direction from_vector(Vec2 v);

  double theta() const { return theta_; }
  Vec2 xi() const { return xi_; }
  Vec2 perp() const { return {xi_.y, -xi_.x}; }
  /// Exact negation of xi (not recomputed from theta + pi).
  Direction opposite() const;

 private:
  Direction(double theta, Vec2 xi) : theta_(theta), xi_(xi) {}
  double theta_;
  Vec2 xi_;
};

struct BoundingBox {
  Vec2 lo;
  Vec2 hi;
  double diameter() const { return norm(hi - lo); }
  bool contains(Vec2 p, double slack = 0.0) const {
    return p.x >= lo.x - slack && p.x <= hi.x + slack && p.y >= lo.y - slack && p.y <= hi.y + slack;
  }
};

/// Compact convex body {Q <= 0} whose boundary is the oval of Q = 0 around
/// interior_point. Construction validates the sign convention, a 360-ray
/// boundary sample (nonvanishing gradient, transversal crossings, curvature
/// sign) and computes the bounding box from axis support values.
class AlgebraicBody {
 public:
  /// Throws InvalidBody naming the failed invariant.
  static AlgebraicBody create(BiPoly q, Vec2 interior_point, std::string id = "custom");

  const BiPoly& polynomial() const { return q_; }
  Vec2 interior_point() const { return interior_; }
  const BoundingBox& bbox() const { return bbox_; }
  const std::string& id() const { return id_; }
  /// Length scale of the body (bounding box diagonal).
  double scale() const { return bbox_.diameter(); }

  double value(Vec2 p) const { return q_(p.x, p.y); }

  /// Q expressed in the frame of the direction: Q~(s, t) = Q(s perp + t xi).
  BiPoly in_frame(const Direction& xi) const;

  /// Distance from the interior point to the boundary along the unit vector u.
  double ray_exit(Vec2 u) const;

  AlgebraicBody translated(Vec2 v) const;
  /// Rotation by phi about the origin.
  AlgebraicBody rotated(double phi) const;

 private:
  AlgebraicBody(BiPoly q, Vec2 interior, std::string id)
      : q_(std::move(q)), interior_(interior), id_(std::move(id)) {}

  BiPoly q_;
  Vec2 interior_;
  std::string id_;
  BoundingBox bbox_;
};

/// Ellipse with semi-axes a (along angle) and b, in the scaled form
/// b^2 u^2 + a^2 v^2 - a^2 b^2 with (u, v) the principal coordinates.
AlgebraicBody make_ellipse_body(double a, double b, Vec2 center = {}, double angle = 0.0);
AlgebraicBody make_disk_body(double radius = 1.0, Vec2 center = {});
/// x1^4 + x2^4 - 1.
AlgebraicBody make_superellipse_body();

struct SupportData {
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  Vec2 m_plus;
  Vec2 m_minus;
  /// Set when the tangency at M_+ / M_- is degenerate (zero curvature).
  bool non_morse_plus = false;
  bool non_morse_minus = false;
  double curvature_plus = 0.0;
  double curvature_minus = 0.0;

  double width() const { return rho_plus - rho_minus; }
  double center() const { return 0.5 * (rho_plus + rho_minus); }
  bool any_non_morse() const { return non_morse_plus || non_morse_minus; }
};

/// Support values rho_+/- and tangency points M_+/- by eliminating s from
/// Q~ = dQ~/ds = 0, keeping only tangency points on the oval.
SupportData support(const AlgebraicBody& body, const Direction& xi);

/// Endpoints of the chord {<xi, x> = t} cut by the body. `a` is the endpoint
/// with the larger perpendicular coordinate. `grazing` is set when the line
/// is tangent (both endpoints are the tangency point).
struct Chord {
  Vec2 a;
  Vec2 b;
  bool grazing = false;
  double length() const { return norm(a - b); }
};

std::optional<Chord> chord_endpoints(const AlgebraicBody& body, const Direction& xi, double t);
std::optional<Chord> chord_endpoints(const AlgebraicBody& body, const Direction& xi, double t,
                                     const SupportData& sd);

}  // namespace radxray
