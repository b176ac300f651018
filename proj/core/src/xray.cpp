#include "radxray/xray.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <random>

#include "parallel.hpp"
#include "radxray/error.hpp"

namespace radxray {

double chord_length(const AlgebraicBody& body, const Direction& xi, double t) {
  const Vec2 v = xi.xi();
  const bool flip = v.y < 0.0 || (v.y == 0.0 && v.x < 0.0);
  const Direction canonical = flip ? xi.opposite() : xi;
  const double tc = flip ? -t : t;
  return chord_length(body, canonical, tc, support(body, canonical));
}

double chord_length(const AlgebraicBody& body, const Direction& xi, double t, const SupportData& sd) {
  const auto chord = chord_endpoints(body, xi, t, sd);
  if (!chord || chord->grazing) return 0.0;
  return chord->length();
}

std::size_t ChordSamples::interior_count() const {
  return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), SampleKind::Interior));
}

void ChordSamples::interior(std::vector<double>& ts_out, std::vector<double>& values_out) const {
  ts_out.clear();
  values_out.clear();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (kinds[i] != SampleKind::Interior) continue;
    ts_out.push_back(ts[i]);
    values_out.push_back(values[i]);
  }
}

ChordSamples sample_chords(const AlgebraicBody& body, const Direction& xi, int n, double margin) {
  if (n < 16) throw Error(ErrorKind::InvalidArgument, "sample_chords needs n >= 16");
  if (!(margin > 0.0 && margin < 0.5)) throw Error(ErrorKind::InvalidArgument, "sample_chords needs 0 < margin < 0.5");

  ChordSamples out;
  out.xi = xi;
  out.support = support(body, xi);
  const double lo = out.rho_minus();
  const double hi = out.rho_plus();
  const double width = hi - lo;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * width * (1.0 - 2.0 * margin);

  struct Node {
    double t;
    SampleKind kind;
  };
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(n) + 2 * kTailPointsPerSide);
  for (int k = 0; k < n; ++k) nodes.push_back({mid + half * std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * n)), SampleKind::Interior});
  for (int k = 0; k < kTailPointsPerSide; ++k) {
    const double d = width * std::pow(10.0, -2.0 - 4.0 * k / (kTailPointsPerSide - 1));
    nodes.push_back({lo + d, SampleKind::TailMinus});
    nodes.push_back({hi - d, SampleKind::TailPlus});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });

  out.ts.reserve(nodes.size());
  out.values.reserve(nodes.size());
  out.kinds.reserve(nodes.size());
  for (const Node& node : nodes) {
    out.ts.push_back(node.t);
    out.kinds.push_back(node.kind);
    out.values.push_back(chord_length(body, xi, node.t, out.support));
  }
  return out;
}

Sinogram build_sinogram(const AlgebraicBody& body, std::span<const double> thetas, int n, double margin) {
  Sinogram s;
  s.thetas.assign(thetas.begin(), thetas.end());
  s.body_id = body.id();
  s.rows.resize(thetas.size());
  detail::parallel_for(thetas.size(), [&](std::size_t i) {
    s.rows[i] = sample_chords(body, Direction::from_angle(thetas[i]), n, margin);
  });
  return s;
}

void write_sinogram_csv(std::ostream& os, const Sinogram& sinogram) {
  os << "theta,t,chord\n";
  char buf[96];
  for (std::size_t i = 0; i < sinogram.rows.size(); ++i) {
    const auto& row = sinogram.rows[i];
    for (std::size_t j = 0; j < row.ts.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", sinogram.thetas[i], row.ts[j], row.values[j]);
      os << buf;
    }
  }
}

std::vector<double> direction_grid(int count, double jitter, unsigned long long seed) {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "direction count must be positive");
  std::vector<double> thetas(static_cast<std::size_t>(count));
  const double step = 2.0 * M_PI / count;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  for (int k = 0; k < count; ++k) {
    thetas[static_cast<std::size_t>(k)] = k * step;
    if (jitter > 0.0) thetas[static_cast<std::size_t>(k)] += jitter * step * unit(rng);
  }
  return thetas;
}

}  // namespace radxray
