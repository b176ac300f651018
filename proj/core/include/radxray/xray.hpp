#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "radxray/body.hpp"

namespace radxray {

/// Chord length A_K(xi, t); zero when the line misses the body. The
/// direction is canonicalized (upper half circle) so that
/// chord_length(K, xi, t) == chord_length(K, xi.opposite(), -t) bit for bit.
double chord_length(const AlgebraicBody& body, const Direction& xi, double t);
/// Same, reusing precomputed support data for xi (no canonicalization).
double chord_length(const AlgebraicBody& body, const Direction& xi, double t, const SupportData& sd);

enum class SampleKind { TailMinus, Interior, TailPlus };

/// Chord lengths along one direction: Chebyshev-distributed interior nodes
/// plus geometric tails approaching each support value.
struct ChordSamples {
  Direction xi = Direction::from_angle(0.0);
  SupportData support;
  /// Strictly increasing, all inside (rho_-, rho_+).
  std::vector<double> ts;
  std::vector<double> values;
  std::vector<SampleKind> kinds;

  double rho_minus() const { return support.rho_minus; }
  double rho_plus() const { return support.rho_plus; }
  std::size_t interior_count() const;
  /// Interior samples only, in increasing t.
  void interior(std::vector<double>& ts_out, std::vector<double>& values_out) const;
};

/// Tail distances are width * 10^(-2 - 4k/16), k = 0..16 on each side.
inline constexpr int kTailPointsPerSide = 17;

/// Throws InvalidArgument unless n >= 16 and 0 < margin < 0.5.
ChordSamples sample_chords(const AlgebraicBody& body, const Direction& xi, int n, double margin = 0.01);

struct Sinogram {
  std::vector<double> thetas;
  std::vector<ChordSamples> rows;
  std::string body_id;
};

/// Samples every direction (independently, possibly concurrently).
Sinogram build_sinogram(const AlgebraicBody& body, std::span<const double> thetas, int n, double margin = 0.01);

/// `theta,t,chord` rows, theta-major, t ascending, 17 significant digits.
void write_sinogram_csv(std::ostream& os, const Sinogram& sinogram);

/// Uniform angle grid k * 2 pi / count, optionally jittered by up to
/// `jitter` grid spacings with a seeded generator.
std::vector<double> direction_grid(int count, double jitter = 0.0, unsigned long long seed = 0);

struct QuadratureResult {
  /// integral of A(xi, t) t^k dt for k = 0..k_max.
  std::vector<double> values;
  int evaluations = 0;
  bool used_fallback = false;
};

/// Moments of the chord function over [rho_-, upper]. The full interval uses
/// nested Gauss-Chebyshev (second kind) rules, whose weight sqrt(1 - x^2)
/// absorbs the square-root endpoint behaviour; partial intervals and
/// non-converging cases fall back to adaptive Simpson in the angle variable
/// t = B + C cos(phi). Throws QuadratureNonConvergence.
QuadratureResult integrate_chord_moments(const AlgebraicBody& body, const Direction& xi, const SupportData& sd,
                                         int k_max, double upper);

/// Solid area V(xi, t): the area of K on the side {<xi, x> <= t}.
double solid_area(const AlgebraicBody& body, const Direction& xi, double t);
QuadratureResult solid_area_detailed(const AlgebraicBody& body, const Direction& xi, double t);

}  // namespace radxray
