// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "radxray/error.hpp"
#include "radxray/io.hpp"

using namespace radxray;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<ChordSamples> sweep(const AlgebraicBody& k, const std::vector<double>& thetas) {
  std::vector<ChordSamples> rows;
  for (double th : thetas) rows.push_back(sample_chords(k, Direction::from_angle(th), 64));
  return rows;
}

double angle_distance_mod_pi(double a, double b) {
  const double d = std::fmod(std::abs(a - b), M_PI);
  return std::min(d, M_PI - d);
}

nlohmann::json run_analyze(const std::vector<std::string>& flags, const fs::path& out, int& code, double& seconds) {
  std::vector<std::string> args{"radxray", "analyze"};
  args.insert(args.end(), flags.begin(), flags.end());
  args.push_back("--out");
  args.push_back(out.string());
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, err;
  const auto start = std::chrono::steady_clock::now();
  code = cli::run(static_cast<int>(argv.size()), argv.data(), log, err);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ifstream in(out / "verdict.json");
  return nlohmann::json::parse(in);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("radxray_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

Outcome disk_radical_fit() {
  Outcome o;
  const auto s = sample_chords(make_disk_body(), Direction::from_angle(M_PI / 2), 64);
  const auto r2 = fit_power(s, 2, 2);
  const double coeff_err = std::max({std::abs(r2.coeffs()[0] - 4.0), std::abs(r2.coeffs()[1]),
                                     std::abs(r2.coeffs()[2] + 4.0)});
  o.check(r2.rel_residual <= 1e-8, "m=2 residual " + num(r2.rel_residual) + " <= 1e-8");
  o.check(coeff_err <= 1e-7, "coefficient error " + num(coeff_err) + " <= 1e-7");
  const auto r1 = fit_power(s, 1, 1);
  o.check(r1.status == FitStatus::Rejected && r1.rel_residual > 1e-2, "m=1 residual " + num(r1.rel_residual) + " > 1e-2");
  return o;
}

Outcome ellipse_round_trip() {
  Outcome o;
  int code = 0;
  double seconds = 0.0;
  const auto v = run_analyze({"--body", "ellipse", "--a", "2", "--b", "1", "--cx", "0.3", "--cy", "-0.2", "--angle",
                              "0.52359877559829882", "--dirs", "64", "--samples", "64"},
                             scratch("ellipse"), code, seconds);
  o.check(code == 0 && v["verdict"] == "ellipse", "verdict " + v["verdict"].get<std::string>());
  const double center_err = std::hypot(v["center"][0].get<double>() - 0.3, v["center"][1].get<double>() + 0.2);
  o.check(center_err <= 1e-6, "center error " + num(center_err));
  const double c_err = std::max(std::abs(v["c1"].get<double>() - 4.0), std::abs(v["c2"].get<double>() - 1.0));
  o.check(c_err <= 1e-6, "{c1,c2} error " + num(c_err));
  const double a_err = angle_distance_mod_pi(v["angle"].get<double>(), M_PI / 6);
  o.check(a_err <= 1e-5, "angle error " + num(a_err));
  o.check(seconds <= 10.0, "runtime " + num(seconds) + " s");
  return o;
}

Outcome non_ellipse_rejection() {
  Outcome o;
  int code = 0;
  double seconds = 0.0;
  const auto v = run_analyze({"--body", "superellipse"}, scratch("superellipse"), code, seconds);
  o.check(code == 3 && v["verdict"] == "not-ellipse", "verdict " + v["verdict"].get<std::string>());
  double min_worst = 1e300;
  for (const auto& scan : v["radical_fit"]["scans"]) min_worst = std::min(min_worst, scan["worst_residual"].get<double>());
  o.check(v["radical_fit"]["scans"].size() == 8 && min_worst > 1e-3,
          "radical-fit residual over m=1..8 (non-skipped directions) >= " + num(min_worst));
  const double leak = v["range_conditions"]["quadratic_form"]["leakage"].get<double>();
  o.check(leak > 1e-3, "C^2 frequency-4 leakage " + num(leak) + " > 1e-3");
  const double area_ref = 4.0 * std::pow(std::tgamma(1.25), 2) / std::tgamma(1.5);
  const double area_err = std::abs(v["area"].get<double>() - area_ref);
  o.check(area_err <= 1e-6, "area error " + num(area_err));
  return o;
}

Outcome vanishing_order() {
  Outcome o;
  double lo = 1.0, hi = 0.0;
  int measured = 0;
  for (const AlgebraicBody& k : {make_disk_body(), make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6)}) {
    for (const auto& s : sweep(k, direction_grid(64))) {
      if (s.support.any_non_morse()) continue;
      for (Side side : {Side::Minus, Side::Plus}) {
        const double e = endpoint_exponent(s, side);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
        ++measured;
      }
    }
  }
  o.check(measured == 256 && lo >= 0.48 && hi <= 0.52,
          "disk/ellipse exponents in [" + num(lo) + ", " + num(hi) + "] over " + std::to_string(measured) + " endpoints");
  const auto s = sample_chords(make_superellipse_body(), Direction::from_angle(M_PI / 2), 64);
  const double ep = endpoint_exponent(s, Side::Plus, NonMorsePolicy::Measure);
  const double em = endpoint_exponent(s, Side::Minus, NonMorsePolicy::Measure);
  o.check(s.support.non_morse_plus && ep >= 0.23 && ep <= 0.27 && em >= 0.23 && em <= 0.27,
          "superellipse flat exponents " + num(em) + ", " + num(ep));
  return o;
}

Outcome continuation_consistency() {
  Outcome o;
  double worst_rel = 0.0, worst_res = 0.0;
  struct Case {
    AlgebraicBody body;
    double theta;
  };
  const std::vector<Case> cases{{make_disk_body(), M_PI / 2},
                                {make_disk_body(), 0.4},
                                {make_ellipse_body(2.0, 1.0), 0.0},
                                {make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6), 1.1},
                                {make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6), 2.7}};
  for (const auto& c : cases) {
    const Direction xi = Direction::from_angle(c.theta);
    const auto fit = fit_power(sample_chords(c.body, xi, 64), 2, 2);
    const DiscriminantSet ds = discriminant_set(c.body, xi);
    const double t0 = support(c.body, xi).center() + 0.05;
    const ComplexPath path = build_path(ds, t0, default_path_radius(ds), 0.2);
    const TrackedBranches tb = track_branches(ds, c.body, t0, path);
    worst_res = std::max(worst_res, tb.residual);
    for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
      const cplx p = fit.fit(path.waypoints[i]);
      worst_rel = std::max(worst_rel, std::abs(p - std::pow(tb.bracket(i), 2)) / std::abs(p));
    }
  }
  o.check(worst_rel <= 1e-6, "max relative |P - bracket^m| " + num(worst_rel));
  o.check(worst_res <= 1e-9, "max tracking residual " + num(worst_res));
  return o;
}

Outcome degree_growth() {
  Outcome o;
  auto plateau = [&](const AlgebraicBody& k, double theta, double expected, const char* label) {
    const Direction xi = Direction::from_angle(theta);
    const DiscriminantSet ds = discriminant_set(k, xi);
    const TrackedBranches tb = track_branches(ds, k, 0.1, build_path(ds, 0.1, 100.0, 0.2));
    const GrowthReport g = growth_check(tb, 2);
    o.check(std::abs(g.plateau - expected) <= 0.05 * expected && g.bounded,
            std::string(label) + " plateau " + num(g.plateau) + (g.bounded ? " bounded" : " unbounded"));

    const auto fit = fit_power(sample_chords(k, xi, 64), 2, 2);
    const RealPoly perturbed = fit.fit.monomial + RealPoly::monomial(3, 1e-2 * fit.fit.monomial.leading());
    std::vector<cplx> values;
    for (const cplx& t : tb.path.waypoints) values.push_back(perturbed(t));
    const GrowthReport bad = growth_check(tb.path.waypoints, values, 2);
    o.check(!bad.bounded, std::string(label) + " degree-3 perturbation (1e-2 x leading) flagged unbounded, plateau " +
                              num(bad.plateau));
  };
  plateau(make_disk_body(), M_PI / 2, 4.0, "disk");
  plateau(make_ellipse_body(2.0, 1.0), M_PI / 2, 16.0, "ellipse xi=(0,1)");
  return o;
}

Outcome discriminant_residues() {
  Outcome o;
  const DiscriminantSet ds = discriminant_set(make_disk_body(), Direction::from_angle(M_PI / 2));
  const bool zeros_ok = ds.real_zeros.size() == 2 && std::abs(ds.real_zeros[0] + 1.0) <= 1e-10 &&
                        std::abs(ds.real_zeros[1] - 1.0) <= 1e-10;
  o.check(zeros_ok, "disk D zeros {-1, 1}");
  for (const auto& [name, k] : {std::pair{"disk", make_disk_body()}, std::pair{"superellipse", make_superellipse_body()}}) {
    const BiPoly& q = k.polynomial();
    int total = 0;
    double worst_round = 0.0;
    for (const auto& w : leading_root_directions(q).roots.roots) {
      const ResidueCount rc = log_residue_count(q, w.value, 0.3, 0.0);
      total += rc.count;
      worst_round = std::max(worst_round, rc.rounding_distance);
    }
    const int n = psi_polynomial(q, 0.0).degree();
    o.check(total == n && worst_round <= 0.01,
            std::string(name) + " residues sum " + std::to_string(total) + " = N " + std::to_string(n) +
                ", rounding " + num(worst_round));
  }
  return o;
}

Outcome moment_identities() {
  Outcome o;
  const MomentTable t = compute_moments(make_disk_body(), 2, direction_grid(64));
  double e0 = 0.0, e2 = 0.0, ea = 0.0;
  for (std::size_t i = 0; i < t.thetas.size(); ++i) {
    e0 = std::max(e0, std::abs(t.values[0][i] - M_PI));
    e2 = std::max(e2, std::abs(t.values[2][i] - M_PI / 4));
    // The unit disk has A = 2 sqrt(1 - t^2), so M_k = 2 alpha_k.
    for (int k = 0; k <= 2; ++k) ea = std::max(ea, std::abs(0.5 * t.values[k][i] - alpha_constant(k)));
  }
  o.check(e0 <= 1e-8 && e2 <= 1e-8, "disk M0 error " + num(e0) + ", M2 error " + num(e2));
  const bool closed = alpha_constant(0) == M_PI / 2 && alpha_constant(1) == 0.0 &&
                      std::abs(alpha_constant(2) - M_PI / 8) <= 1e-15;
  o.check(closed && ea <= 1e-10, "alpha_0..2 vs quadrature " + num(ea));
  return o;
}

Outcome equivariance() {
  Outcome o;
  const auto th = direction_grid(64);
  const AlgebraicBody base = make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6);
  auto model = [&](const AlgebraicBody& k) { return reconstruct(compute_moments(k, 2, th), scan_hypothesis(sweep(k, th))); };
  const EllipseModel m0 = model(base);
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> shift(-1.0, 1.0), turn(0.0, M_PI);
  double worst = 0.0;
  double worst_parity = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double phi = turn(rng);
    const Vec2 v{shift(rng), shift(rng)};
    const AlgebraicBody rotated = base.rotated(phi);
    const AlgebraicBody moved = rotated.translated(v);
    const EllipseModel mr = model(rotated);
    const EllipseModel mm = model(moved);
    const Vec2 c{std::cos(phi) * m0.center.x - std::sin(phi) * m0.center.y,
                 std::sin(phi) * m0.center.x + std::cos(phi) * m0.center.y};
    worst = std::max({worst, std::hypot(mr.center.x - c.x, mr.center.y - c.y),
                      std::hypot(mm.center.x - mr.center.x - v.x, mm.center.y - mr.center.y - v.y),
                      std::abs(mr.c1 - m0.c1), std::abs(mr.c2 - m0.c2), std::abs(mm.c1 - mr.c1),
                      std::abs(mm.c2 - mr.c2), angle_distance_mod_pi(mr.angle, m0.angle + phi),
                      angle_distance_mod_pi(mm.angle, mr.angle)});
    const MomentTable t = compute_moments(moved, 3, th);
    for (std::size_t i = 0; i < 32; ++i)
      for (int k = 0; k <= 3; ++k)
        worst_parity = std::max(worst_parity, std::abs(t.values[k][i + 32] - (k % 2 ? -1.0 : 1.0) * t.values[k][i]));
  }
  o.check(worst <= 1e-7, "5 rigid motions, max deviation " + num(worst));
  o.check(worst_parity == 0.0, "parity M_k(-xi) = (-1)^k M_k(xi) exact");
  return o;
}

Outcome g_discrepancy_guard() {
  Outcome o;
  const auto th = direction_grid(64);
  double worst_squared = 0.0, best_linear = 1e300;
  for (const AlgebraicBody& k : {make_ellipse_body(2.0, 1.0, {0.3, -0.2}, M_PI / 6), make_ellipse_body(3.0, 0.5)}) {
    const MomentTable t = compute_moments(k, 2, th);
    double worst_linear = 0.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
      const auto r = fit_power(sample_chords(k, Direction::from_angle(th[i]), 64), 2, 2);
      const double c = 0.5 * t.supports[i].width();
      const double m0 = t.values[0][i];
      worst_squared = std::max(worst_squared, std::abs(*r.d_xi * c * c * alpha_constant(0) - m0) / m0);
      worst_linear = std::max(worst_linear, std::abs(*r.d_xi * c * alpha_constant(0) - m0) / m0);
    }
    best_linear = std::min(best_linear, worst_linear);
  }
  o.check(worst_squared <= 1e-7, "G = d C^2: max |M0 - G alpha0| / M0 " + num(worst_squared));
  o.check(best_linear > 1e-2, "negative check G = d C violates it by " + num(best_linear));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"disk radical fit", disk_radical_fit},
      {"ellipse round-trip", ellipse_round_trip},
      {"non-ellipse rejection", non_ellipse_rejection},
      {"vanishing order", vanishing_order},
      {"continuation consistency", continuation_consistency},
      {"degree/growth", degree_growth},
      {"discriminant and residues", discriminant_residues},
      {"moment identities", moment_identities},
      {"equivariance", equivariance},
      {"G = d C^2 guard", g_discrepancy_guard},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %-26s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
