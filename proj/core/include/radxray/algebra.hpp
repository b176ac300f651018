#pragma once

// Polynomial arithmetic used throughout: dense univariate polynomials over
// R or C, sparse bivariate real polynomials, Sylvester resultants,
// discriminants and a simultaneous (Aberth-Ehrlich) root solver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace radxray {

using cplx = std::complex<double>;

/// Coefficients below this fraction of the largest coefficient are dropped
/// when a polynomial is trimmed.
inline constexpr double kTrimTolerance = 1e-12;

/// Dense univariate polynomial, coefficients in ascending degree.
template <class T>
class Polynomial {
 public:
  using value_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { drop_exact_zeros(); }
  Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { drop_exact_zeros(); }

  static Polynomial constant(T c) { return Polynomial({c}); }
  static Polynomial monomial(int degree, T c = T(1)) {
    std::vector<T> v(static_cast<std::size_t>(degree) + 1, T(0));
    v.back() = c;
    return Polynomial(std::move(v));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<T>& coeffs() const { return coeffs_; }
  T operator[](std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : T(0); }
  T leading() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Horner evaluation; the argument may be real or complex.
  template <class U>
  auto operator()(const U& z) const {
    using R = decltype(T{} * U{});
    R acc{0};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + R(*it);
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }

  /// Drops leading coefficients whose magnitude is at most rel_tol times the
  /// largest coefficient.
  Polynomial trimmed(double rel_tol = kTrimTolerance) const {
    return trimmed_against(rel_tol * max_abs_coeff());
  }

  Polynomial trimmed_against(double abs_tol) const {
    std::vector<T> c = coeffs_;
    while (!c.empty() && std::abs(c.back()) <= abs_tol) c.pop_back();
    return Polynomial(std::move(c));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    drop_exact_zeros();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    drop_exact_zeros();
    return *this;
  }
  Polynomial& operator*=(T s) {
    for (auto& c : coeffs_) c *= s;
    drop_exact_zeros();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, T s) { return a *= s; }
  friend Polynomial operator*(T s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> c(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
  }

 private:
  void drop_exact_zeros() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

using RealPoly = Polynomial<double>;
using ComplexPoly = Polynomial<cplx>;

cplx evaluate(const ComplexPoly& p, cplx z);
cplx evaluate(const RealPoly& p, cplx z);

ComplexPoly to_complex(const RealPoly& p);

/// Long division num = quotient * den + remainder.
template <class T>
struct DivisionResult {
  Polynomial<T> quotient;
  Polynomial<T> remainder;
};
DivisionResult<double> divide(const RealPoly& num, const RealPoly& den);

/// Coefficients of p(center + scale * x) in x.
RealPoly compose_affine(const RealPoly& p, double center, double scale);

// ---------------------------------------------------------------------------

/// Sparse real polynomial in (x1, x2). Zero coefficients are never stored.
class BiPoly {
 public:
  using Exponent = std::pair<int, int>;
  struct Term {
    int i;
    int j;
    double c;
  };

  BiPoly() = default;
  BiPoly(std::initializer_list<Term> terms);

  void add_term(int i, int j, double c);
  double coeff(int i, int j) const;
  const std::map<Exponent, double>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Max of i+j over stored terms, -1 for the zero polynomial.
  int total_degree() const;
  int degree_x1() const;
  int degree_x2() const;
  double max_abs_coeff() const;

  template <class U>
  U evaluate(const U& x1, const U& x2) const;
  double operator()(double x1, double x2) const { return evaluate<double>(x1, x2); }

  /// Sum of |c| |x1|^i |x2|^j; the natural scale for residuals at a point.
  double magnitude(double x1, double x2) const;
  double magnitude(cplx x1, cplx x2) const;

  BiPoly d_x1() const;
  BiPoly d_x2() const;

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly operator*(double s) const;

  /// Q(A y + shift) as a polynomial in y, with A = [[a11, a12], [a21, a22]].
  /// Coefficients that cancel to below kTrimTolerance * max are dropped.
  BiPoly linear_substitution(double a11, double a12, double a21, double a22, double shift1 = 0.0,
                             double shift2 = 0.0) const;

  /// Q(base + s dir) as a univariate polynomial in s.
  RealPoly restrict_to_line(double base1, double base2, double dir1, double dir2) const;

  /// Q = sum_j q_j(x2) x1^j; element j of the result is q_j.
  std::vector<RealPoly> coefficients_in_x1() const;

  /// Q(x1, x2) at fixed x2 as a polynomial in x1.
  RealPoly at_x2(double x2) const;
  ComplexPoly at_x2(cplx x2) const;

  bool operator==(const BiPoly& o) const { return terms_ == o.terms_; }

 private:
  std::map<Exponent, double> terms_;
};

template <class U>
U BiPoly::evaluate(const U& x1, const U& x2) const {
  if (terms_.empty()) return U(0);
  const int d1 = degree_x1();
  const int d2 = degree_x2();
  std::vector<U> p1(static_cast<std::size_t>(d1) + 1), p2(static_cast<std::size_t>(d2) + 1);
  p1[0] = U(1);
  p2[0] = U(1);
  for (int k = 1; k <= d1; ++k) p1[k] = p1[k - 1] * x1;
  for (int k = 1; k <= d2; ++k) p2[k] = p2[k - 1] * x2;
  U acc(0);
  for (const auto& [e, c] : terms_) acc += U(c) * p1[e.first] * p2[e.second];
  return acc;
}

// ---------------------------------------------------------------------------

struct Root {
  cplx value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;
  /// max |p(root)| over the returned roots.
  double residual_bound = 0.0;

  int count() const;
};

/// All complex roots by Aberth-Ehrlich simultaneous iteration (at most 200
/// sweeps). Each root is reported with multiplicity 1; use cluster_roots to
/// merge numerically coincident roots. Throws NonConvergence when some root
/// fails |p(z)| <= tol * sum_k |a_k| |z|^k.
RootSet roots_all(const ComplexPoly& p, double tol = 1e-10);
RootSet roots_all(const RealPoly& p, double tol = 1e-10);

/// Merges roots closer than abs_tol (single linkage). A cluster is replaced
/// by its centroid, which stays well conditioned even when the individual
/// members of a multiple root are not.
RootSet cluster_roots(const RootSet& raw, double abs_tol);
/// Same, then refines each k-fold cluster by Newton on the (k-1)-th
/// derivative of p, where an exact multiple root is simple.
RootSet cluster_roots(const ComplexPoly& p, const RootSet& raw, double abs_tol);
RootSet cluster_roots(const RealPoly& p, const RootSet& raw, double abs_tol);

/// Real roots (|Im| <= imag_tol) in ascending order.
std::vector<double> real_roots(const RootSet& roots, double imag_tol);

/// Resultant of P and R with respect to x1 as a polynomial in x2, computed
/// as the Sylvester determinant (P rows first). Throws DegenerateInput when
/// either polynomial is constant in x1.
RealPoly resultant_x1(const BiPoly& p, const BiPoly& r);

/// D(t) = Res_{x1}(Q, dQ/dx1)(t) / q_M(t), with q_M the leading coefficient
/// of Q in x1. This differs from the classical discriminant by the sign
/// (-1)^{M(M-1)/2}; for the unit circle it is 4(t^2 - 1). Throws
/// IdenticallyZeroDiscriminant when D vanishes identically.
RealPoly discriminant_x1(const BiPoly& q);

/// Q_0, ..., Q_N with Q = sum Q_j and Q_j homogeneous of degree j.
std::vector<BiPoly> homogeneous_parts(const BiPoly& q);

struct LeadingDirections {
  /// Roots w_j of Q_N(w, 1), clustered, with multiplicities m_j.
  RootSet roots;
  /// N - deg_w Q_N(w, 1); nonzero when Q_N is divisible by x2.
  int degree_drop = 0;
  int total_degree = 0;
};

LeadingDirections leading_root_directions(const BiPoly& q);

}  // namespace radxray
