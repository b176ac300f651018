#include "radxray/algebra.hpp"
#include "radxray/error.hpp"

namespace radxray {

cplx evaluate(const ComplexPoly& p, cplx z) { return p(z); }

cplx evaluate(const RealPoly& p, cplx z) { return p(z); }

ComplexPoly to_complex(const RealPoly& p) {
  std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
  return ComplexPoly(std::move(c));
}

DivisionResult<double> divide(const RealPoly& num, const RealPoly& den) {
  if (den.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  const int dn = num.degree();
  const int dd = den.degree();
  if (dn < dd) return {RealPoly{}, num};
  std::vector<double> rem = num.coeffs();
  std::vector<double> quot(static_cast<std::size_t>(dn - dd) + 1, 0.0);
  const double lead = den.leading();
  for (int k = dn - dd; k >= 0; --k) {
    const double q = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * den[static_cast<std::size_t>(j)];
    rem[static_cast<std::size_t>(k + dd)] = 0.0;
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {RealPoly(std::move(quot)), RealPoly(std::move(rem))};
}

RealPoly compose_affine(const RealPoly& p, double center, double scale) {
  // Horner in polynomial arithmetic: acc = acc * (center + scale x) + c_k.
  const RealPoly lin({center, scale});
  RealPoly acc;
  const auto& c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * lin + RealPoly::constant(*it);
  return acc;
}

}  // namespace radxray
