#include <cmath>

#include "radxray/algebra.hpp"

namespace radxray {

BiPoly::BiPoly(std::initializer_list<Term> terms) {
  for (const auto& t : terms) add_term(t.i, t.j, t.c);
}

void BiPoly::add_term(int i, int j, double c) {
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace({i, j}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double BiPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

int BiPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first + e.second);
  return d;
}

int BiPoly::degree_x1() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first);
  return d;
}

int BiPoly::degree_x2() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second);
  return d;
}

double BiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

double BiPoly::magnitude(double x1, double x2) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_)
    acc += std::abs(c) * std::pow(std::abs(x1), e.first) * std::pow(std::abs(x2), e.second);
  return acc;
}

double BiPoly::magnitude(cplx x1, cplx x2) const { return magnitude(std::abs(x1), std::abs(x2)); }

BiPoly BiPoly::d_x1() const {
  BiPoly out;
  for (const auto& [e, c] : terms_)
    if (e.first > 0) out.add_term(e.first - 1, e.second, c * e.first);
  return out;
}

BiPoly BiPoly::d_x2() const {
  BiPoly out;
  for (const auto& [e, c] : terms_)
    if (e.second > 0) out.add_term(e.first, e.second - 1, c * e.second);
  return out;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e.first, e.second, c);
  return out;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
  BiPoly out = *this;
  for (const auto& [e, c] : o.terms_) out.add_term(e.first, e.second, -c);
  return out;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  BiPoly out;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
  return out;
}

BiPoly BiPoly::operator*(double s) const {
  BiPoly out;
  for (const auto& [e, c] : terms_) out.add_term(e.first, e.second, c * s);
  return out;
}

BiPoly BiPoly::linear_substitution(double a11, double a12, double a21, double a22, double shift1,
                                   double shift2) const {
  if (terms_.empty()) return {};
  // x1 = a11 y1 + a12 y2 + shift1, x2 = a21 y1 + a22 y2 + shift2
  const BiPoly x1{{1, 0, a11}, {0, 1, a12}, {0, 0, shift1}};
  const BiPoly x2{{1, 0, a21}, {0, 1, a22}, {0, 0, shift2}};
  const int d1 = degree_x1();
  const int d2 = degree_x2();
  std::vector<BiPoly> p1(static_cast<std::size_t>(d1) + 1), p2(static_cast<std::size_t>(d2) + 1);
  p1[0] = BiPoly{{0, 0, 1.0}};
  p2[0] = BiPoly{{0, 0, 1.0}};
  for (int k = 1; k <= d1; ++k) p1[k] = p1[k - 1] * x1;
  for (int k = 1; k <= d2; ++k) p2[k] = p2[k - 1] * x2;

  std::map<Exponent, double> acc;
  for (const auto& [e, c] : terms_) {
    const BiPoly prod = p1[e.first] * p2[e.second];
    for (const auto& [ep, cp] : prod.terms_) acc[ep] += c * cp;
  }
  double scale = 0.0;
  for (const auto& [e, c] : acc) scale = std::max(scale, std::abs(c));
  BiPoly out;
  for (const auto& [e, c] : acc)
    if (std::abs(c) > kTrimTolerance * scale) out.add_term(e.first, e.second, c);
  return out;
}

RealPoly BiPoly::restrict_to_line(double base1, double base2, double dir1, double dir2) const {
  if (terms_.empty()) return {};
  const RealPoly l1({base1, dir1});
  const RealPoly l2({base2, dir2});
  const int d1 = degree_x1();
  const int d2 = degree_x2();
  std::vector<RealPoly> p1(static_cast<std::size_t>(d1) + 1), p2(static_cast<std::size_t>(d2) + 1);
  p1[0] = RealPoly::constant(1.0);
  p2[0] = RealPoly::constant(1.0);
  for (int k = 1; k <= d1; ++k) p1[k] = p1[k - 1] * l1;
  for (int k = 1; k <= d2; ++k) p2[k] = p2[k - 1] * l2;
  RealPoly out;
  for (const auto& [e, c] : terms_) out += (p1[e.first] * p2[e.second]) * c;
  return out;
}

std::vector<RealPoly> BiPoly::coefficients_in_x1() const {
  const int d1 = degree_x1();
  if (d1 < 0) return {};
  std::vector<std::vector<double>> raw(static_cast<std::size_t>(d1) + 1);
  for (const auto& [e, c] : terms_) {
    auto& v = raw[static_cast<std::size_t>(e.first)];
    if (v.size() <= static_cast<std::size_t>(e.second)) v.resize(static_cast<std::size_t>(e.second) + 1, 0.0);
    v[static_cast<std::size_t>(e.second)] += c;
  }
  std::vector<RealPoly> out;
  out.reserve(raw.size());
  for (auto& v : raw) out.emplace_back(std::move(v));
  return out;
}

RealPoly BiPoly::at_x2(double x2) const {
  const auto q = coefficients_in_x1();
  std::vector<double> c(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) c[j] = q[j](x2);
  return RealPoly(std::move(c));
}

ComplexPoly BiPoly::at_x2(cplx x2) const {
  const auto q = coefficients_in_x1();
  std::vector<cplx> c(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) c[j] = q[j](x2);
  return ComplexPoly(std::move(c));
}

}  // namespace radxray
