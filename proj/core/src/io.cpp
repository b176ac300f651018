#include "radxray/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "radxray/error.hpp"

namespace radxray {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

BiPoly bipoly_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
      throw Error(ErrorKind::ParseError, "polynomial needs a \"terms\" array");
    BiPoly q;
    for (const auto& t : j.at("terms")) {
      const int i = t.at("i").get<int>();
      const int k = t.at("j").get<int>();
      if (i < 0 || k < 0) throw Error(ErrorKind::ParseError, "term exponents must be nonnegative");
      q.add_term(i, k, t.at("c").get<double>());
    }
    return q;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

json to_json(const BiPoly& q) {
  json terms = json::array();
  for (const auto& [e, c] : q.terms()) terms.push_back({{"i", e.first}, {"j", e.second}, {"c", c}});
  return {{"terms", terms}};
}

AlgebraicBody body_from_json(const json& j, const std::string& id) {
  try {
    if (!j.is_object() || !j.contains("poly")) throw Error(ErrorKind::ParseError, "body needs a \"poly\" object");
    const auto& p = j.at("interior_point");
    if (!p.is_array() || p.size() != 2) throw Error(ErrorKind::ParseError, "interior_point must be [x, y]");
    return AlgebraicBody::create(bipoly_from_json(j.at("poly")), {p[0].get<double>(), p[1].get<double>()}, id);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

AlgebraicBody load_body_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return body_from_json(j, path.stem().string());
}

json to_json(const RealPoly& p) { return p.coeffs(); }

json to_json(const SupportData& sd) {
  return {{"rho_plus", sd.rho_plus},
          {"rho_minus", sd.rho_minus},
          {"m_plus", {sd.m_plus.x, sd.m_plus.y}},
          {"m_minus", {sd.m_minus.x, sd.m_minus.y}},
          {"non_morse_plus", sd.non_morse_plus},
          {"non_morse_minus", sd.non_morse_minus}};
}

json to_json(const RadicalFitReport& r) {
  json j = {{"theta", r.xi.theta()},
            {"m", r.m},
            {"degree_cap", r.degree_cap},
            {"coeffs", to_json(r.fit.monomial)},
            {"rel_residual", r.rel_residual},
            {"degree_estimate", r.degree_estimate},
            {"status", to_string(r.status)},
            {"skipped", r.skipped}};
  j["exponent_minus"] = r.exponent_minus ? json(*r.exponent_minus) : json(nullptr);
  j["exponent_plus"] = r.exponent_plus ? json(*r.exponent_plus) : json(nullptr);
  j["c_xi"] = r.c_xi ? json(*r.c_xi) : json(nullptr);
  j["d_xi"] = r.d_xi ? json(*r.d_xi) : json(nullptr);
  return j;
}

json to_json(const HypothesisVerdict& v) {
  json scans = json::array();
  for (const auto& s : v.scans)
    scans.push_back({{"m", s.m},
                     {"worst_residual", s.worst_residual},
                     {"degrees_match", s.degrees_match},
                     {"status", to_string(s.status)}});
  json reports = json::array();
  for (const auto& r : v.reports) reports.push_back(to_json(r));
  return {{"fits", v.fits},
          {"status", to_string(v.status)},
          {"m_selected", v.m_selected ? json(*v.m_selected) : json(nullptr)},
          {"worst_residual", v.worst_residual},
          {"skipped_directions", v.skipped_directions},
          {"scans", scans},
          {"reports", reports}};
}

json to_json(const SpectrumLeakage& s) {
  return {{"k", s.k}, {"leakage", s.leakage}, {"status", to_string(s.status)}, {"amplitudes", s.amplitudes}};
}

json to_json(const RangeConditionReport& r) {
  json moments = json::array();
  for (const auto& m : r.moments) moments.push_back(to_json(m));
  return {{"moments", moments}, {"quadratic_form", to_json(r.quadratic)}};
}

json to_json(const EllipseModel& m) {
  return {{"center", {m.center.x, m.center.y}},
          {"angle", m.angle},
          {"c1", m.c1},
          {"c2", m.c2},
          {"G", m.G},
          {"support_residual", m.support_residual}};
}

json to_json(const DiscriminantSet& ds) {
  json zeros = json::array();
  for (const auto& z : ds.zeros.roots)
    zeros.push_back({{"re", z.value.real()}, {"im", z.value.imag()}, {"multiplicity", z.multiplicity}});
  return {{"theta", ds.xi.theta()},
          {"frame_poly", to_json(ds.frame_poly)},
          {"discriminant", to_json(ds.d)},
          {"zeros", zeros},
          {"real_zeros", ds.real_zeros}};
}

json to_json(const GrowthReport& g) {
  return {{"ratio_max", g.ratio_max}, {"plateau", g.plateau}, {"bounded", g.bounded}};
}

void write_moments_csv(std::ostream& os, const MomentTable& table) {
  os << "theta,k,moment\n";
  for (std::size_t i = 0; i < table.thetas.size(); ++i)
    for (int k = 0; k <= table.k_max; ++k)
      os << format_double(table.thetas[i]) << ',' << k << ','
         << format_double(table.values[static_cast<std::size_t>(k)][i]) << '\n';
}

void write_track_csv(std::ostream& os, const TrackedBranches& tb) {
  os << "re_t,im_t,re_fa,im_fa,re_fb,im_fb,residual\n";
  for (std::size_t i = 0; i < tb.path.waypoints.size(); ++i) {
    const cplx t = tb.path.waypoints[i];
    os << format_double(t.real()) << ',' << format_double(t.imag()) << ',' << format_double(tb.fa[i].real()) << ','
       << format_double(tb.fa[i].imag()) << ',' << format_double(tb.fb[i].real()) << ','
       << format_double(tb.fb[i].imag()) << ',' << format_double(tb.residuals[i]) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace radxray
