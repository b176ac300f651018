#pragma once

#include <filesystem>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "radxray/continuation.hpp"
#include "radxray/moments.hpp"

namespace radxray {

/// `{"terms": [{"i": 2, "j": 0, "c": 1.0}, ...]}`; throws ParseError.
BiPoly bipoly_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BiPoly& q);

/// `{"poly": {...}, "interior_point": [x, y]}`; throws ParseError or the
/// body validation errors.
AlgebraicBody body_from_json(const nlohmann::json& j, const std::string& id = "custom");
AlgebraicBody load_body_file(const std::filesystem::path& path);

nlohmann::json to_json(const RealPoly& p);
nlohmann::json to_json(const SupportData& sd);
nlohmann::json to_json(const RadicalFitReport& r);
nlohmann::json to_json(const HypothesisVerdict& v);
nlohmann::json to_json(const SpectrumLeakage& s);
nlohmann::json to_json(const RangeConditionReport& r);
nlohmann::json to_json(const EllipseModel& m);
nlohmann::json to_json(const DiscriminantSet& ds);
nlohmann::json to_json(const GrowthReport& g);

/// `theta,k,moment` rows.
void write_moments_csv(std::ostream& os, const MomentTable& table);
/// `re_t,im_t,re_fa,im_fa,re_fb,im_fb,residual` rows, one per waypoint.
void write_track_csv(std::ostream& os, const TrackedBranches& tb);

/// Shortest round-trip decimal form of x (at most 17 significant digits).
std::string format_double(double x);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace radxray
