#include <algorithm>
#include <cmath>
#include <vector>

#include "radxray/error.hpp"
#include "radxray/xray.hpp"

namespace radxray {
namespace {

constexpr int kFirstPanels = 16;
constexpr int kMaxPanels = 1024;
constexpr double kChebyshevRelTol = 1e-12;
constexpr double kSimpsonRelTol = 1e-11;
constexpr int kSimpsonMaxDepth = 40;
constexpr int kSimpsonMaxEvaluations = 400000;

using Vec = std::vector<double>;

// Integrand in the angle variable: t = B + C cos(phi), dt = -C sin(phi) dphi.
class AngleIntegrand {
 public:
  AngleIntegrand(const AlgebraicBody& body, const Direction& xi, const SupportData& sd, int k_max)
      : body_(body), xi_(xi), sd_(sd), k_max_(k_max), b_(sd.center()), c_(0.5 * sd.width()) {}

  Vec operator()(double phi) {
    ++evaluations;
    Vec out(static_cast<std::size_t>(k_max_) + 1, 0.0);
    const double sin_phi = std::sin(phi);
    if (sin_phi <= 0.0) return out;
    const double t = b_ + c_ * std::cos(phi);
    const double w = chord_length(body_, xi_, t, sd_) * c_ * sin_phi;
    double tk = 1.0;
    for (int k = 0; k <= k_max_; ++k) {
      out[static_cast<std::size_t>(k)] = w * tk;
      tk *= t;
    }
    return out;
  }

  double phi_of(double t) const { return std::acos(std::clamp((t - b_) / c_, -1.0, 1.0)); }

  int evaluations = 0;

 private:
  const AlgebraicBody& body_;
  const Direction& xi_;
  const SupportData& sd_;
  int k_max_;
  double b_, c_;
};

void axpy(Vec& y, double a, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

bool within(const Vec& a, const Vec& b, const Vec& tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol[i]) return false;
  return true;
}

// Magnitude reference per moment: area-like scale times |t|^k.
Vec reference_scale(const SupportData& sd, int k_max) {
  const double width = sd.width();
  const double tmax = std::max({std::abs(sd.rho_plus), std::abs(sd.rho_minus), width});
  Vec ref(static_cast<std::size_t>(k_max) + 1);
  double tk = width * width;
  for (int k = 0; k <= k_max; ++k) {
    ref[static_cast<std::size_t>(k)] = tk;
    tk *= tmax;
  }
  return ref;
}

// Nested trapezoid in phi over [0, pi], i.e. Gauss-Chebyshev of the second
// kind in x = cos(phi). Returns false when the cap is reached unconverged.
bool gauss_chebyshev(AngleIntegrand& f, const Vec& ref, Vec& result) {
  const std::size_t dim = ref.size();
  Vec sum(dim, 0.0);
  for (int j = 1; j < kFirstPanels; ++j) axpy(sum, 1.0, f(M_PI * j / kFirstPanels));
  Vec previous = sum;
  for (auto& v : previous) v *= M_PI / kFirstPanels;

  for (int panels = 2 * kFirstPanels; panels <= kMaxPanels; panels *= 2) {
    for (int j = 1; j < panels; j += 2) axpy(sum, 1.0, f(M_PI * j / panels));
    Vec current = sum;
    for (auto& v : current) v *= M_PI / panels;
    Vec tol(dim);
    for (std::size_t i = 0; i < dim; ++i) tol[i] = kChebyshevRelTol * std::max(std::abs(current[i]), ref[i]);
    if (within(current, previous, tol)) {
      result = std::move(current);
      return true;
    }
    previous = std::move(current);
  }
  return false;
}

struct Simpson {
  AngleIntegrand& f;
  Vec ref;

  Vec rule(double a, double b, const Vec& fa, const Vec& fm, const Vec& fb) const {
    Vec out(fa.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (b - a) / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i]);
    return out;
  }

  Vec recurse(double a, double b, const Vec& fa, const Vec& fm, const Vec& fb, const Vec& whole, const Vec& tol,
              int depth) {
    if (f.evaluations > kSimpsonMaxEvaluations)
      throw Error(ErrorKind::QuadratureNonConvergence, "adaptive Simpson exceeded its evaluation budget");
    const double m = 0.5 * (a + b);
    const Vec flm = f(0.5 * (a + m));
    const Vec frm = f(0.5 * (m + b));
    const Vec left = rule(a, m, fa, flm, fm);
    const Vec right = rule(m, b, fm, frm, fb);
    Vec sum(left.size());
    bool ok = true;
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] = left[i] + right[i];
      if (std::abs(sum[i] - whole[i]) > 15.0 * tol[i]) ok = false;
    }
    if (ok) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (sum[i] - whole[i]) / 15.0;
      return sum;
    }
    if (depth >= kSimpsonMaxDepth)
      throw Error(ErrorKind::QuadratureNonConvergence, "adaptive Simpson reached its depth limit");
    Vec half_tol = tol;
    for (auto& v : half_tol) v *= 0.5;
    Vec l = recurse(a, m, fa, flm, fm, left, half_tol, depth + 1);
    const Vec r = recurse(m, b, fm, frm, fb, right, half_tol, depth + 1);
    axpy(l, 1.0, r);
    return l;
  }

  Vec integrate(double a, double b) {
    constexpr int kPieces = 16;
    Vec total(ref.size(), 0.0);
    Vec tol(ref.size());
    for (std::size_t i = 0; i < tol.size(); ++i) tol[i] = kSimpsonRelTol * ref[i] / kPieces;
    const double h = (b - a) / kPieces;
    Vec fa = f(a);
    for (int p = 0; p < kPieces; ++p) {
      const double lo = a + p * h;
      const double hi = p + 1 == kPieces ? b : a + (p + 1) * h;
      const Vec fm = f(0.5 * (lo + hi));
      const Vec fb = f(hi);
      const Vec whole = rule(lo, hi, fa, fm, fb);
      axpy(total, 1.0, recurse(lo, hi, fa, fm, fb, whole, tol, 0));
      fa = fb;
    }
    return total;
  }
};

}  // namespace

QuadratureResult integrate_chord_moments(const AlgebraicBody& body, const Direction& xi, const SupportData& sd,
                                         int k_max, double upper) {
  if (k_max < 0) throw Error(ErrorKind::InvalidArgument, "k_max must be >= 0");
  QuadratureResult out;
  out.values.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (upper <= sd.rho_minus) return out;

  AngleIntegrand f(body, xi, sd, k_max);
  const Vec ref = reference_scale(sd, k_max);
  const bool full = upper >= sd.rho_plus;
  if (full && gauss_chebyshev(f, ref, out.values)) {
    out.evaluations = f.evaluations;
    return out;
  }
  out.used_fallback = true;
  Simpson simpson{f, ref};
  out.values = simpson.integrate(full ? 0.0 : f.phi_of(upper), M_PI);
  out.evaluations = f.evaluations;
  return out;
}

QuadratureResult solid_area_detailed(const AlgebraicBody& body, const Direction& xi, double t) {
  const SupportData sd = support(body, xi);
  return integrate_chord_moments(body, xi, sd, 0, t);
}

double solid_area(const AlgebraicBody& body, const Direction& xi, double t) {
  return solid_area_detailed(body, xi, t).values[0];
}

}  // namespace radxray
