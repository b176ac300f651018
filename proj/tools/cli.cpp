#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "radxray/error.hpp"
#include "radxray/io.hpp"

namespace radxray::cli {
namespace {

using nlohmann::json;

// Every artifact is serialized once, at the end of a command.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string text) { files_.emplace_back(name, std::move(text)); }
  void add_json(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }

  void flush(std::ostream& log) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir_.string() + ": " + ec.message());
    for (const auto& [name, text] : files_) {
      write_text_file(dir_ / name, text);
      log << "wrote " << (dir_ / name).string() << "\n";
    }
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

json config_json(const RunConfig& cfg) {
  json j = {{"command", cfg.command}, {"body", cfg.body},         {"a", cfg.a},
            {"b", cfg.b},             {"cx", cfg.cx},             {"cy", cfg.cy},
            {"angle", cfg.angle},     {"dirs", cfg.dirs},         {"samples", cfg.samples},
            {"margin", cfg.margin},   {"m_max", cfg.m_max},       {"k_max", cfg.k_max},
            {"fit_tol", cfg.fit_tol}, {"range_tol", cfg.range_tol}, {"track_tol", cfg.track_tol},
            {"seed", cfg.seed},       {"jitter", cfg.jitter}};
  j["body_file"] = cfg.body_file ? json(cfg.body_file->string()) : json(nullptr);
  if (cfg.command == "track" || cfg.command == "discriminant") {
    j["theta"] = cfg.theta;
    j["t0"] = cfg.t0;
    j["delta"] = cfg.delta;
    j["radius"] = cfg.radius;
  }
  return j;
}

FitTolerances fit_tolerances(const RunConfig& cfg) {
  FitTolerances tol;
  tol.accept = cfg.fit_tol;
  return tol;
}

std::vector<double> grid(const RunConfig& cfg) { return direction_grid(cfg.dirs, cfg.jitter, cfg.seed); }

std::string csv(const Sinogram& s) {
  std::ostringstream os;
  write_sinogram_csv(os, s);
  return os.str();
}

bool is_input_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NonPositiveAxis:
    case ErrorKind::InvalidBody:
    case ErrorKind::DegenerateDirection:
    case ErrorKind::StartTooCloseToZ:
    case ErrorKind::InsufficientSamples:
    case ErrorKind::ParseError:
    case ErrorKind::IoError:
      return true;
    default:
      return false;
  }
}

int exit_code_for(const std::string& verdict) {
  if (verdict == "ellipse") return kEllipse;
  if (verdict == "not-ellipse") return kNotEllipse;
  return kInconclusive;
}

}  // namespace

void validate(const RunConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
  };
  require(cfg.dirs >= 3, "--dirs must be at least 3");
  require(cfg.samples >= 16, "--samples must be at least 16");
  require(cfg.margin > 0.0 && cfg.margin < 0.5, "--margin must lie in (0, 0.5)");
  require(cfg.m_max >= 1, "--m-max must be at least 1");
  require(cfg.k_max >= 2, "--k-max must be at least 2");
  require(cfg.fit_tol > 0.0 && cfg.range_tol > 0.0 && cfg.track_tol > 0.0, "tolerances must be positive");
  require(cfg.jitter >= 0.0 && cfg.jitter < 0.5, "--jitter must lie in [0, 0.5)");
  require(cfg.delta > 0.0, "--delta must be positive");
  require(cfg.radius >= 0.0, "--radius must be nonnegative");
  if (cfg.command == "analyze" || cfg.command == "moments")
    require(cfg.dirs >= 64, "moment analysis needs --dirs >= 64");
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
  try {
    for (const auto& [raw_key, value] : j.items()) {
      std::string key = raw_key;
      std::replace(key.begin(), key.end(), '-', '_');
      if (key == "body") cfg.body = value.get<std::string>();
      else if (key == "body_file") cfg.body_file = value.get<std::string>();
      else if (key == "a") cfg.a = value.get<double>();
      else if (key == "b") cfg.b = value.get<double>();
      else if (key == "cx") cfg.cx = value.get<double>();
      else if (key == "cy") cfg.cy = value.get<double>();
      else if (key == "angle") cfg.angle = value.get<double>();
      else if (key == "dirs") cfg.dirs = value.get<int>();
      else if (key == "samples") cfg.samples = value.get<int>();
      else if (key == "margin") cfg.margin = value.get<double>();
      else if (key == "m_max") cfg.m_max = value.get<int>();
      else if (key == "k_max") cfg.k_max = value.get<int>();
      else if (key == "fit_tol") cfg.fit_tol = value.get<double>();
      else if (key == "range_tol") cfg.range_tol = value.get<double>();
      else if (key == "track_tol") cfg.track_tol = value.get<double>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else if (key == "seed") cfg.seed = value.get<unsigned long long>();
      else if (key == "jitter") cfg.jitter = value.get<double>();
      else if (key == "theta") cfg.theta = value.get<double>();
      else if (key == "t0") cfg.t0 = value.get<double>();
      else if (key == "delta") cfg.delta = value.get<double>();
      else if (key == "radius") cfg.radius = value.get<double>();
      else throw Error(ErrorKind::ParseError, "unknown config key \"" + raw_key + "\"");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

AlgebraicBody make_body(const RunConfig& cfg) {
  try {
    if (cfg.body_file) return load_body_file(*cfg.body_file);
    const Vec2 center{cfg.cx, cfg.cy};
    if (cfg.body == "disk") return make_disk_body(cfg.a, center);
    if (cfg.body == "ellipse") return make_ellipse_body(cfg.a, cfg.b, center, cfg.angle);
    if (cfg.body == "superellipse") {
      AlgebraicBody k = make_superellipse_body();
      if (cfg.angle != 0.0) k = k.rotated(cfg.angle);
      if (cfg.cx != 0.0 || cfg.cy != 0.0) k = k.translated(center);
      return k;
    }
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("body: ") + e.what());
  }
  throw Error(ErrorKind::InvalidArgument, "unknown body \"" + cfg.body + "\" (disk, ellipse, superellipse)");
}

int cmd_sinogram(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const AlgebraicBody body = make_body(cfg);
  const std::vector<double> thetas = grid(cfg);
  const Sinogram s = build_sinogram(body, thetas, cfg.samples, cfg.margin);

  json supports = json::array();
  std::size_t rows = 0;
  for (const auto& r : s.rows) {
    supports.push_back(to_json(r.support));
    rows += r.ts.size();
  }
  json meta = {{"body", body.id()},
               {"polynomial", to_json(body.polynomial())},
               {"interior_point", {body.interior_point().x, body.interior_point().y}},
               {"rows", rows},
               {"thetas", thetas},
               {"supports", supports},
               {"config", config_json(cfg)}};
  OutputSet out(cfg.out);
  out.add("sinogram.csv", csv(s));
  out.add_json("sinogram.json", meta);
  out.flush(log);
  return kEllipse;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const AlgebraicBody body = make_body(cfg);
  const std::vector<double> thetas = grid(cfg);
  const Sinogram s = build_sinogram(body, thetas, cfg.samples, cfg.margin);

  ScanOptions scan;
  scan.m_max = cfg.m_max;
  scan.tol = fit_tolerances(cfg);
  const HypothesisVerdict fits = scan_hypothesis(s.rows, scan);

  RangeTolerances range_tol;
  range_tol.pass = cfg.range_tol;
  const MomentTable table = compute_moments(body, cfg.k_max, thetas);
  const RangeConditionReport range = range_condition(table, range_tol);

  std::string verdict = "ellipse";
  std::string failing_stage;
  json stages = json::array();
  auto stage = [&](const char* name, const char* status) {
    stages.push_back({{"name", name}, {"status", status}});
    if (!failing_stage.empty() || std::string(status) == "pass") return;
    failing_stage = name;
    verdict = std::string(status) == "fail" ? "not-ellipse" : "inconclusive";
  };
  stage("radical-fit", fits.status == FitStatus::Fits       ? "pass"
                       : fits.status == FitStatus::Rejected ? "fail"
                                                            : "inconclusive");
  stage("range-conditions", to_string(range.status_through(2)));
  stage("quadratic-form", to_string(range.quadratic.status));

  json model = nullptr;
  if (failing_stage.empty()) {
    try {
      ReconstructOptions opts;
      opts.range = range_tol;
      const EllipseModel m = reconstruct(table, fits, opts);
      model = to_json(m);
      double scale = 0.0;
      for (const auto& sd : table.supports) scale = std::max(scale, sd.width());
      stage("reconstruction", m.is_ellipse                           ? "pass"
                              : m.support_residual > 1e-2 * scale ? "fail"
                                                                   : "inconclusive");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonPositiveForm) throw;
      stage("reconstruction", "fail");
    }
  }

  json report = {{"body", body.id()}, {"verdict", verdict}, {"failing_stage", failing_stage.empty() ? json(nullptr) : json(failing_stage)}};
  report["m_selected"] = fits.m_selected ? json(*fits.m_selected) : json(nullptr);
  if (model.is_object())
    for (const auto& [k, v] : model.items()) report[k] = v;
  else
    report["model"] = nullptr;
  report["area"] = table.area();
  report["stages"] = stages;
  report["range_conditions"] = to_json(range);
  report["radical_fit"] = to_json(fits);
  report["config"] = config_json(cfg);

  OutputSet out(cfg.out);
  out.add_json("verdict.json", report);
  out.flush(log);
  log << "verdict: " << verdict;
  if (!failing_stage.empty()) log << " (stage " << failing_stage << ")";
  log << "\n";
  return exit_code_for(verdict);
}

int cmd_track(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const AlgebraicBody body = make_body(cfg);
  const Direction xi = Direction::from_angle(cfg.theta);
  const SupportData sd = support(body, xi);
  if (!(cfg.t0 > sd.rho_minus && cfg.t0 < sd.rho_plus))
    throw Error(ErrorKind::InvalidArgument, "t0 must lie strictly inside (rho_-, rho_+) = (" +
                                                format_double(sd.rho_minus) + ", " + format_double(sd.rho_plus) + ")");
  const DiscriminantSet ds = discriminant_set(body, xi);
  const double radius = cfg.radius > 0.0 ? cfg.radius : default_path_radius(ds);
  const ComplexPath path = build_path(ds, cfg.t0, radius, cfg.delta);
  const TrackedBranches tb = track_branches(ds, body, cfg.t0, path);

  const ChordSamples samples = sample_chords(body, xi, cfg.samples, cfg.margin);
  std::optional<RadicalFitReport> fit;
  for (int m = 1; m <= cfg.m_max && !fit; ++m) {
    RadicalFitReport r = fit_power(samples, m, m, fit_tolerances(cfg));
    if (r.status == FitStatus::Fits) fit = std::move(r);
  }

  json summary = {{"theta", cfg.theta},
                  {"t0", cfg.t0},
                  {"radius", radius},
                  {"delta", cfg.delta},
                  {"waypoints", path.waypoints.size()},
                  {"clearance", path.clearance},
                  {"steps", tb.steps},
                  {"residual", tb.residual},
                  {"relative_residual", tb.relative_residual},
                  {"min_separation", tb.min_separation},
                  {"direction_deviation", direction_cluster_deviation(tb, ds.frame_poly, 0.1 * radius)}};
  int m = 2;
  if (fit) {
    m = fit->m;
    double worst = 0.0;
    for (std::size_t i = 0; i < path.waypoints.size(); ++i) {
      const cplx p = fit->fit(path.waypoints[i]);
      const cplx bm = std::pow(tb.bracket(i), m);
      worst = std::max(worst, std::abs(p - bm) / std::max(std::abs(p), 1e-300));
    }
    summary["m_selected"] = m;
    summary["coeffs"] = to_json(fit->fit.monomial);
    summary["continuation_rel_error"] = worst;
    summary["growth"] = to_json(growth_check(tb, m));
  } else {
    summary["m_selected"] = nullptr;
  }
  const bool ok = tb.residual <= cfg.track_tol;
  summary["residual_ok"] = ok;
  summary["config"] = config_json(cfg);

  std::ostringstream track_csv;
  write_track_csv(track_csv, tb);
  OutputSet out(cfg.out);
  out.add("track.csv", track_csv.str());
  out.add_json("discriminant.json", to_json(ds));
  out.add_json("track.json", summary);
  out.flush(log);
  if (fit) log << "growth plateau " << format_double(growth_check(tb, m).plateau) << "\n";
  if (!ok) {
    log << "tracking residual " << format_double(tb.residual) << " exceeds --track-tol\n";
    return kNumericalFailure;
  }
  return kEllipse;
}

int cmd_moments(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const AlgebraicBody body = make_body(cfg);
  const std::vector<double> thetas = grid(cfg);
  const MomentTable table = compute_moments(body, cfg.k_max, thetas);
  RangeTolerances tol;
  tol.pass = cfg.range_tol;
  std::ostringstream os;
  write_moments_csv(os, table);
  json meta = {{"body", body.id()},
               {"area", table.area()},
               {"alpha", {alpha_constant(0), alpha_constant(1), alpha_constant(2)}},
               {"range_conditions", to_json(range_condition(table, tol))},
               {"config", config_json(cfg)}};
  OutputSet out(cfg.out);
  out.add("moments.csv", os.str());
  out.add_json("moments.json", meta);
  out.flush(log);
  return kEllipse;
}

int cmd_discriminant(const RunConfig& cfg, std::ostream& log) {
  validate(cfg);
  const AlgebraicBody body = make_body(cfg);
  const DiscriminantSet ds = discriminant_set(body, Direction::from_angle(cfg.theta));
  json j = to_json(ds);

  const LeadingDirections lead = leading_root_directions(ds.frame_poly);
  double eps = 0.5;
  for (std::size_t a = 0; a < lead.roots.roots.size(); ++a)
    for (std::size_t b = a + 1; b < lead.roots.roots.size(); ++b)
      eps = std::min(eps, 0.4 * std::abs(lead.roots.roots[a].value - lead.roots.roots[b].value));
  json residues = json::array();
  int total = 0;
  for (const auto& w : lead.roots.roots) {
    const ResidueCount rc = log_residue_count(ds.frame_poly, w.value, eps, 0.0);
    total += rc.count;
    residues.push_back({{"re", w.value.real()},
                        {"im", w.value.imag()},
                        {"count", rc.count},
                        {"raw", rc.raw},
                        {"rounding_distance", rc.rounding_distance}});
  }
  j["residues"] = residues;
  j["residue_total"] = total;
  j["psi_degree"] = psi_polynomial(ds.frame_poly, 0.0).degree();
  j["total_degree"] = ds.frame_poly.total_degree();
  j["config"] = config_json(cfg);

  OutputSet out(cfg.out);
  out.add_json("discriminant.json", j);
  out.flush(log);
  return kEllipse;
}

int run(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  std::string body_file;
  std::string config_file;
  std::string out_dir = ".";

  CLI::App app{"Chord-length transforms of algebraic convex bodies"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("--body", cfg.body, "builtin body: disk, ellipse, superellipse")
        ->check(CLI::IsMember({"disk", "ellipse", "superellipse"}));
    sub->add_option("--a", cfg.a, "first semi-axis (disk radius)");
    sub->add_option("--b", cfg.b, "second semi-axis");
    sub->add_option("--cx", cfg.cx, "center x");
    sub->add_option("--cy", cfg.cy, "center y");
    sub->add_option("--angle", cfg.angle, "rotation of the body");
    sub->add_option("--body-file", body_file, "JSON body {poly, interior_point}");
    sub->add_option("--dirs", cfg.dirs, "number of directions");
    sub->add_option("--samples", cfg.samples, "interior samples per chord");
    sub->add_option("--margin", cfg.margin, "relative margin kept away from the support values");
    sub->add_option("--m-max", cfg.m_max, "largest power scanned");
    sub->add_option("--k-max", cfg.k_max, "largest moment order");
    sub->add_option("--fit-tol", cfg.fit_tol, "radical-fit acceptance residual");
    sub->add_option("--range-tol", cfg.range_tol, "range-condition leakage tolerance");
    sub->add_option("--track-tol", cfg.track_tol, "tracking residual tolerance");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", cfg.seed, "seed for direction jitter");
    sub->add_option("--jitter", cfg.jitter, "direction jitter in grid spacings");
    sub->add_option("--config", config_file, "JSON config whose keys override flags");
  };
  auto path_options = [&](CLI::App* sub) {
    sub->add_option("--theta", cfg.theta, "direction angle");
    sub->add_option("--t0", cfg.t0, "start of the path");
    sub->add_option("--delta", cfg.delta, "clearance from discriminant zeros");
    sub->add_option("--radius", cfg.radius, "path end |t| (default 100 (1 + max|zero|))");
  };

  CLI::App* sinogram = app.add_subcommand("sinogram", "sample the chord-length transform");
  CLI::App* analyze = app.add_subcommand("analyze", "ellipse test: radical fit, moments, reconstruction");
  CLI::App* track = app.add_subcommand("track", "continue the chord endpoints into the complex plane");
  CLI::App* moments = app.add_subcommand("moments", "chord moments and range conditions");
  CLI::App* discriminant = app.add_subcommand("discriminant", "discriminant zeros and residues at infinity");
  for (CLI::App* sub : {sinogram, analyze, track, moments, discriminant}) common(sub);
  path_options(track);
  path_options(discriminant);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, log, err);
    return code == 0 ? 0 : kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  if (!body_file.empty()) cfg.body_file = body_file;
  cfg.out = out_dir;
  try {
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    if (cfg.command == "sinogram") return cmd_sinogram(cfg, log);
    if (cfg.command == "analyze") return cmd_analyze(cfg, log);
    if (cfg.command == "track") return cmd_track(cfg, log);
    if (cfg.command == "moments") return cmd_moments(cfg, log);
    return cmd_discriminant(cfg, log);
  } catch (const Error& e) {
    err << "radxray " << cfg.command << ": " << e.what() << "\n";
    return is_input_error(e.kind()) ? kInputValidation : kNumericalFailure;
  }
}

}  // namespace radxray::cli
