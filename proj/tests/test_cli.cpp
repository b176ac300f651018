#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <nlohmann/json.hpp>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "radxray/io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string log;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "radxray");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream log, err;
  const int code = radxray::cli::run(static_cast<int>(argv.size()), argv.data(), log, err);
  return {code, log.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST(Cli, ExitCodeMatrix) {
  const auto dir = oracle::temp_dir("cli_exit");
  EXPECT_EQ(invoke({"analyze", "--body", "disk", "--out", (dir / "d").string()}).code, 0);
  EXPECT_EQ(invoke({"analyze", "--body", "superellipse", "--out", (dir / "s").string()}).code, 3);
  EXPECT_EQ(invoke({"analyze", "--body", "disk", "--fit-tol", "1e-30", "--out", (dir / "i").string()}).code, 4);
  EXPECT_EQ(invoke({"analyze", "--no-such-flag"}).code, 1);
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"analyze", "--body", "triangle"}).code, 1);
  EXPECT_EQ(invoke({"analyze", "--body", "ellipse", "--a", "-1", "--out", dir.string()}).code, 2);
  EXPECT_EQ(invoke({"analyze", "--dirs", "32", "--out", dir.string()}).code, 2);
}

TEST(Cli, InvalidBodyFileNamesTheInvariant) {
  const auto dir = oracle::temp_dir("cli_body");
  const json body = {{"poly", radxray::to_json(radxray::make_disk_body().polynomial())},
                     {"interior_point", {5.0, 0.0}}};
  std::ofstream(dir / "q.json") << body.dump();
  const Result r = invoke({"sinogram", "--body-file", (dir / "q.json").string(), "--out", dir.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InvalidBody"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("interior_point"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("body"), std::string::npos);
}

TEST(Cli, DiskSinogramMatchesFormula) {
  const auto dir = oracle::temp_dir("cli_sino");
  ASSERT_EQ(invoke({"sinogram", "--body", "disk", "--dirs", "64", "--samples", "64", "--out", dir.string()}).code, 0);
  std::istringstream csv(slurp(dir / "sinogram.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "theta,t,chord");
  int rows = 0;
  double worst = 0.0;
  while (std::getline(csv, line)) {
    double th, t, a;
    char c1, c2;
    std::istringstream(line) >> th >> c1 >> t >> c2 >> a;
    worst = std::max(worst, std::abs(a - oracle::disk_chord(t)));
    ++rows;
  }
  EXPECT_EQ(rows, 64 * (64 + 2 * radxray::kTailPointsPerSide));
  EXPECT_LE(worst, 1e-9);
  EXPECT_EQ(load(dir / "sinogram.json")["thetas"].size(), 64u);
}

TEST(Cli, SuperellipseSinogramCoversAllDirections) {
  const auto dir = oracle::temp_dir("cli_sino_se");
  ASSERT_EQ(invoke({"sinogram", "--body", "superellipse", "--out", dir.string()}).code, 0);
  std::istringstream csv(slurp(dir / "sinogram.csv"));
  std::string line;
  std::getline(csv, line);
  std::set<std::string> thetas;
  while (std::getline(csv, line)) thetas.insert(line.substr(0, line.find(',')));
  EXPECT_EQ(thetas.size(), 64u);
}

TEST(Cli, AnalyzeReports) {
  const auto dir = oracle::temp_dir("cli_analyze");
  ASSERT_EQ(invoke({"analyze", "--body", "disk", "--out", (dir / "d").string()}).code, 0);
  const json d = load(dir / "d" / "verdict.json");
  EXPECT_EQ(d["verdict"], "ellipse");
  EXPECT_EQ(d["m_selected"], 2);
  EXPECT_NEAR(d["c1"].get<double>(), 1.0, 1e-7);
  EXPECT_NEAR(d["c2"].get<double>(), 1.0, 1e-7);

  ASSERT_EQ(invoke({"analyze", "--body", "ellipse", "--a", "2", "--b", "1", "--cx", "0.3", "--cy", "-0.2", "--angle",
                    "0.52359877559829882", "--out", (dir / "e").string()})
                .code,
            0);
  const json e = load(dir / "e" / "verdict.json");
  EXPECT_NEAR(e["center"][0].get<double>(), 0.3, 1e-6);
  EXPECT_NEAR(e["center"][1].get<double>(), -0.2, 1e-6);
  EXPECT_NEAR(e["c1"].get<double>(), 4.0, 1e-6);
  EXPECT_NEAR(e["angle"].get<double>(), M_PI / 6, 1e-5);

  ASSERT_EQ(invoke({"analyze", "--body", "superellipse", "--out", (dir / "s").string()}).code, 3);
  const json s = load(dir / "s" / "verdict.json");
  EXPECT_EQ(s["verdict"], "not-ellipse");
  EXPECT_EQ(s["failing_stage"], "radical-fit");
  EXPECT_GT(s["range_conditions"]["quadratic_form"]["leakage"].get<double>(), 1e-3);
}

TEST(Cli, OutputsAreDeterministic) {
  const auto dir = oracle::temp_dir("cli_determinism");
  for (const char* sub : {"a", "b"}) {
    ASSERT_EQ(invoke({"analyze", "--body", "ellipse", "--a", "2", "--b", "1.5", "--jitter", "0.2", "--seed", "99",
                      "--out", (dir / sub).string()})
                  .code,
              0);
    ASSERT_EQ(invoke({"sinogram", "--body", "superellipse", "--jitter", "0.2", "--seed", "99", "--out",
                      (dir / sub).string()})
                  .code,
              0);
  }
  for (const char* f : {"verdict.json", "sinogram.csv", "sinogram.json"})
    EXPECT_EQ(slurp(dir / "a" / f), slurp(dir / "b" / f)) << f;
}

TEST(Cli, ConfigFileOverridesFlags) {
  const auto dir = oracle::temp_dir("cli_config");
  std::ofstream(dir / "run.json") << R"({"dirs": 80, "samples": 20, "body": "ellipse", "a": 1.5})";
  ASSERT_EQ(invoke({"sinogram", "--dirs", "64", "--config", (dir / "run.json").string(), "--out", dir.string()}).code,
            0);
  const json meta = load(dir / "sinogram.json");
  EXPECT_EQ(meta["thetas"].size(), 80u);
  EXPECT_EQ(meta["body"], "ellipse");
  std::ofstream(dir / "bad.json") << R"({"dirz": 80})";
  EXPECT_EQ(invoke({"sinogram", "--config", (dir / "bad.json").string(), "--out", dir.string()}).code, 2);
}

TEST(Cli, TrackDisk) {
  const auto dir = oracle::temp_dir("cli_track");
  ASSERT_EQ(invoke({"track", "--body", "disk", "--theta", "1.5707963267948966", "--t0", "0", "--out", dir.string()}).code,
            0);
  const json t = load(dir / "track.json");
  EXPECT_NEAR(t["growth"]["plateau"].get<double>(), 4.0, 0.2);
  EXPECT_TRUE(t["growth"]["bounded"].get<bool>());
  EXPECT_TRUE(fs::exists(dir / "track.csv"));
  EXPECT_EQ(load(dir / "discriminant.json")["real_zeros"].size(), 2u);

  const Result near = invoke({"track", "--body", "disk", "--t0", "0.999", "--out", dir.string()});
  EXPECT_EQ(near.code, 2);
  EXPECT_NE(near.err.find("perturb"), std::string::npos) << near.err;
}

TEST(Cli, TrackEllipseResiduals) {
  const auto dir = oracle::temp_dir("cli_track_e");
  ASSERT_EQ(invoke({"track", "--body", "ellipse", "--a", "2", "--b", "1", "--theta", "0", "--t0", "0.1", "--out",
                    dir.string()})
                .code,
            0);
  EXPECT_LE(load(dir / "track.json")["residual"].get<double>(), 1e-9);
}

TEST(Cli, MomentsAndDiscriminant) {
  const auto dir = oracle::temp_dir("cli_moments");
  ASSERT_EQ(invoke({"moments", "--body", "disk", "--out", dir.string()}).code, 0);
  EXPECT_NEAR(load(dir / "moments.json")["area"].get<double>(), M_PI, 1e-9);
  ASSERT_EQ(invoke({"discriminant", "--body", "superellipse", "--out", dir.string()}).code, 0);
  const json d = load(dir / "discriminant.json");
  EXPECT_EQ(d["residue_total"], 4);
  EXPECT_EQ(d["psi_degree"], 4);
}
