#include <Eigen/Dense>
#include <cmath>

#include "radxray/algebra.hpp"
#include "radxray/error.hpp"

namespace radxray {
namespace {

int max_degree(const std::vector<RealPoly>& coeffs) {
  int d = 0;
  for (const auto& c : coeffs) d = std::max(d, c.degree());
  return d;
}

// Sylvester resultant in x1 by evaluation at roots of unity and discrete
// Fourier interpolation. Either polynomial may be constant in x1 here.
RealPoly sylvester_resultant(const std::vector<RealPoly>& p, const std::vector<RealPoly>& r) {
  const int m = static_cast<int>(p.size()) - 1;
  const int k = static_cast<int>(r.size()) - 1;
  const int size = m + k;
  if (size == 0) return RealPoly::constant(1.0);

  // Each Sylvester row contributes at most the x2-degree of its entries.
  const int bound = k * max_degree(p) + m * max_degree(r);
  const int samples = bound + 1;

  Eigen::MatrixXcd sylvester(size, size);
  std::vector<cplx> values(static_cast<std::size_t>(samples));
  double scale = 0.0;
  for (int s = 0; s < samples; ++s) {
    const cplx t = std::polar(1.0, 2.0 * M_PI * s / samples);
    sylvester.setZero();
    for (int row = 0; row < k; ++row)
      for (int j = 0; j <= m; ++j) sylvester(row, row + j) = p[static_cast<std::size_t>(m - j)](t);
    for (int row = 0; row < m; ++row)
      for (int j = 0; j <= k; ++j) sylvester(k + row, row + j) = r[static_cast<std::size_t>(k - j)](t);
    double hadamard = 1.0;
    for (int row = 0; row < size; ++row) hadamard *= sylvester.row(row).norm();
    scale = std::max(scale, hadamard);
    values[static_cast<std::size_t>(s)] = sylvester.partialPivLu().determinant();
  }

  std::vector<double> coeffs(static_cast<std::size_t>(samples));
  for (int j = 0; j < samples; ++j) {
    cplx acc = 0.0;
    for (int s = 0; s < samples; ++s)
      acc += values[static_cast<std::size_t>(s)] * std::polar(1.0, -2.0 * M_PI * j * s / samples);
    coeffs[static_cast<std::size_t>(j)] = acc.real() / samples;
  }
  for (auto& c : coeffs)
    if (std::abs(c) <= kTrimTolerance * scale) c = 0.0;
  return RealPoly(std::move(coeffs));
}

}  // namespace

RealPoly resultant_x1(const BiPoly& p, const BiPoly& r) {
  if (p.degree_x1() < 1 || r.degree_x1() < 1)
    throw Error(ErrorKind::DegenerateInput, "resultant_x1 needs both polynomials to depend on x1");
  return sylvester_resultant(p.coefficients_in_x1(), r.coefficients_in_x1());
}

RealPoly discriminant_x1(const BiPoly& q) {
  const int m = q.degree_x1();
  if (m < 1) throw Error(ErrorKind::DegenerateInput, "discriminant_x1 needs deg_x1 Q >= 1");
  const auto coeffs = q.coefficients_in_x1();
  const RealPoly& lead = coeffs.back();
  if (m == 1) return RealPoly::constant(1.0);

  const RealPoly res = sylvester_resultant(coeffs, q.d_x1().coefficients_in_x1());
  auto [quot, rem] = divide(res, lead);
  const RealPoly d = quot.trimmed();
  if (d.is_zero())
    throw Error(ErrorKind::IdenticallyZeroDiscriminant,
                "discriminant vanishes identically; Q is reducible or degenerate in x1");
  return d;
}

std::vector<BiPoly> homogeneous_parts(const BiPoly& q) {
  const int n = q.total_degree();
  if (n < 0) return {};
  std::vector<BiPoly> parts(static_cast<std::size_t>(n) + 1);
  for (const auto& [e, c] : q.terms()) parts[static_cast<std::size_t>(e.first + e.second)].add_term(e.first, e.second, c);
  return parts;
}

LeadingDirections leading_root_directions(const BiPoly& q) {
  LeadingDirections out;
  const int n = q.total_degree();
  out.total_degree = std::max(n, 0);
  if (n <= 0) return out;
  std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
  for (const auto& [e, v] : q.terms())
    if (e.first + e.second == n) c[static_cast<std::size_t>(e.first)] = v;
  const RealPoly restricted = RealPoly(std::move(c)).trimmed();
  out.degree_drop = n - std::max(restricted.degree(), 0);
  if (restricted.degree() >= 1) {
    const RootSet raw = roots_all(restricted);
    double scale = 1.0;
    for (const auto& r : raw.roots) scale = std::max(scale, std::abs(r.value));
    out.roots = cluster_roots(restricted, raw, 1e-5 * scale);
  }
  return out;
}

}  // namespace radxray
