#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "radxray/algebra.hpp"
#include "radxray/error.hpp"

namespace radxray {
namespace {

constexpr int kMaxSweeps = 200;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct HornerPair {
  cplx value;
  cplx derivative;
  double magnitude;  // sum |a_k| |z|^k
};

HornerPair horner(const std::vector<cplx>& a, cplx z) {
  cplx p = a.back();
  cplx dp = 0.0;
  double mag = std::abs(a.back());
  const double az = std::abs(z);
  for (std::size_t k = a.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + a[k];
    mag = mag * az + std::abs(a[k]);
  }
  return {p, dp, mag};
}

}  // namespace

int RootSet::count() const {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

RootSet roots_all(const ComplexPoly& p, double tol) {
  if (p.degree() < 1) throw Error(ErrorKind::InvalidArgument, "roots_all needs a polynomial of degree >= 1");

  const auto& c = p.coeffs();
  std::size_t zeros_at_origin = 0;
  while (c[zeros_at_origin] == cplx(0.0)) ++zeros_at_origin;

  RootSet out;
  for (std::size_t k = 0; k < zeros_at_origin; ++k) out.roots.push_back({cplx(0.0), 1});

  const std::vector<cplx> a(c.begin() + static_cast<std::ptrdiff_t>(zeros_at_origin), c.end());
  const int n = static_cast<int>(a.size()) - 1;
  if (n == 0) return out;
  if (n == 1) {
    out.roots.push_back({-a[0] / a[1], 1});
    return out;
  }

  // Start on a circle whose radius is the geometric mean of the root moduli.
  const double radius = std::pow(std::abs(a.front()) / std::abs(a.back()), 1.0 / n);
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) z[k] = std::polar(radius, 2.0 * M_PI * k / n + 0.7);
  std::vector<bool> done(static_cast<std::size_t>(n), false);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool all_done = true;
    for (int i = 0; i < n; ++i) {
      if (done[i]) continue;
      const HornerPair h = horner(a, z[i]);
      if (std::abs(h.value) <= 8.0 * n * kEps * h.magnitude) {
        done[i] = true;
        continue;
      }
      cplx ratio = h.derivative == cplx(0.0) ? cplx(1e-8 * (1.0 + std::abs(z[i]))) : h.value / h.derivative;
      cplx repulsion = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      const cplx step = ratio / (1.0 - ratio * repulsion);
      z[i] -= step;
      if (std::abs(step) <= 2.0 * kEps * std::abs(z[i])) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }

  for (const cplx& root : z) {
    const HornerPair h = horner(a, root);
    if (std::abs(h.value) > tol * h.magnitude)
      throw Error(ErrorKind::NonConvergence,
                  "Aberth iteration did not converge for a degree-" + std::to_string(n) + " polynomial");
    out.residual_bound = std::max(out.residual_bound, std::abs(p(root)));
    out.roots.push_back({root, 1});
  }
  return out;
}

RootSet roots_all(const RealPoly& p, double tol) { return roots_all(to_complex(p), tol); }

namespace {

// Single-linkage groups of root indices.
std::vector<std::vector<std::size_t>> link_groups(const RootSet& raw, double abs_tol) {
  const std::size_t n = raw.roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(raw.roots[i].value - raw.roots[j].value) <= abs_tol) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> by_root(n);
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : by_root)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

Root merge(const RootSet& raw, const std::vector<std::size_t>& group) {
  cplx sum = 0.0;
  int mult = 0;
  for (const std::size_t i : group) {
    sum += raw.roots[i].value * static_cast<double>(raw.roots[i].multiplicity);
    mult += raw.roots[i].multiplicity;
  }
  return {sum / static_cast<double>(mult), mult};
}

}  // namespace

RootSet cluster_roots(const RootSet& raw, double abs_tol) {
  RootSet out;
  out.residual_bound = raw.residual_bound;
  for (const auto& g : link_groups(raw, abs_tol)) out.roots.push_back(merge(raw, g));
  return out;
}

namespace {

// Newton on the (k-1)-th derivative, where a k-fold root is simple.
std::optional<cplx> polish_multiple(const ComplexPoly& p, cplx z, int k) {
  ComplexPoly d = p;
  for (int j = 1; j < k; ++j) d = d.derivative();
  const ComplexPoly dd = d.derivative();
  for (int it = 0; it < 30; ++it) {
    const cplx slope = dd(z);
    if (slope == cplx(0.0)) return std::nullopt;
    const cplx step = d(z) / slope;
    z -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) return z;
  }
  return std::nullopt;
}

}  // namespace

RootSet cluster_roots(const ComplexPoly& p, const RootSet& raw, double abs_tol) {
  RootSet out = cluster_roots(raw, abs_tol);
  for (auto& r : out.roots) {
    if (r.multiplicity < 2) continue;
    const auto z = polish_multiple(p, r.value, r.multiplicity);
    if (z && std::abs(*z - r.value) <= abs_tol) r.value = *z;
  }
  return out;
}

RootSet cluster_roots(const RealPoly& p, const RootSet& raw, double abs_tol) {
  return cluster_roots(to_complex(p), raw, abs_tol);
}

std::vector<double> real_roots(const RootSet& roots, double imag_tol) {
  std::vector<double> out;
  for (const auto& r : roots.roots)
    if (std::abs(r.value.imag()) <= imag_tol) out.push_back(r.value.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace radxray
