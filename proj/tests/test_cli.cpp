#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = AFOCAL_CLI;
const fs::path kJobs = AFOCAL_JOBS;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("afocal_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string err;
};

CliRun run(const std::string& args, const fs::path& out, const std::string& env = "") {
  const fs::path err = out / "stderr.txt";
  const std::string cmd = env + " " + kCli + " --out " + out.string() + " " + args + " 2> " + err.string() + " > " +
                          (out / "stdout.txt").string();
  const int rc = std::system(cmd.c_str());
  return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, slurp(err)};
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<double>> csv(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string c;
    std::vector<double> r;
    while (std::getline(ss, c, ',')) r.push_back(std::stod(c));
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::array<double, 3>> obj_vertices(const fs::path& p) {
  std::ifstream in(p);
  std::string tag;
  std::vector<std::array<double, 3>> v;
  std::string line;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    ss >> tag;
    if (tag != "v") continue;
    std::array<double, 3> x;
    ss >> x[0] >> x[1] >> x[2];
    v.push_back(x);
  }
  return v;
}

}  // namespace

TEST(Planar, EllipseRhoColumnIsConstant) {
  const auto out = scratch("ellipse");
  ASSERT_EQ(run("planar " + (kJobs / "planar_ellipse.json").string(), out).code, 0);
  const auto rows = csv(out / "invariants.csv");
  ASSERT_GE(rows.size(), 257u);
  for (const auto& r : rows) EXPECT_NEAR(r[1], std::pow(2.0, -2.0 / 3.0), 1e-6);
  EXPECT_TRUE(load(out / "vertices.json")["degenerate"].get<bool>());
  EXPECT_TRUE(fs::exists(out / "evolute.csv"));
  EXPECT_TRUE(fs::exists(out / "support.csv"));
}

TEST(Planar, OvalHasSixVertices) {
  for (const char* job : {"planar_support_oval.json", "planar_fourier_oval.json"}) {
    const auto out = scratch(job);
    ASSERT_EQ(run(std::string("planar ") + (kJobs / job).string(), out).code, 0);
    EXPECT_GE(load(out / "vertices.json")["count"].get<int>(), 6) << job;
  }
}

TEST(Planar, FlatPolarOvalIsANumericalFailure) {
  const auto out = scratch("flat");
  const CliRun r = run("planar " + (kJobs / "planar_fourier_oval_flat.json").string(), out);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("inflectionpoint"), std::string::npos);
}

TEST(SpecErrors, MalformedJsonReportsLineAndColumn) {
  const auto out = scratch("malformed");
  const CliRun r = run("planar " + (kJobs / "malformed.json").string(), out);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("malformed.json:2:"), std::string::npos) << r.err;
}

TEST(SpecErrors, ExitCodeMatrix) {
  const auto out = scratch("matrix");
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(out / name) << text;
    return (out / name).string();
  };
  struct Case {
    std::string args;
    int code;
  };
  const std::vector<Case> cases{
      {"planar " + write("kind.json", R"({"curve": {"kind": "spiral"}})"), 2},
      {"planar " + write("missing.json", R"({"curve": {"kind": "ellipse", "a": 1}})"), 2},
      {"planar " + write("type.json", R"({"curve": {"kind": "ellipse", "a": "one", "b": 1}})"), 2},
      {"planar " + write("dense.json", R"({"curve": {"kind": "circle"}, "intervals": 8})"), 2},
      {"planar " + write("space.json", R"({"curve": {"kind": "helix"}})"), 2},
      {"planar " + (out / "does_not_exist.json").string(), 2},
      {"planar", 2},
      {"--threads 0 planar " + (kJobs / "planar_ellipse.json").string(), 2},
      {"--tol-zero -1 planar " + (kJobs / "planar_ellipse.json").string(), 2},
      {"nonsense", 2},
      {"spatial " + write("plane.json", R"({"curve": {"kind": "circle"}})"), 2},
      {"darboux " + (kJobs / "darboux_off_surface.json").string(), 3},
      {"darboux " + write("gauge.json", R"({"fixture": "circle_on_cone", "gauge": -1})"), 2},
      {"focal " + write("asym.json", R"({"n": 2, "grid": [0], "mu": [[1, 2]], "sigma": [[[1, 2], [0, 1]]]})"), 2},
      {"umbilic " + write("origin.json", R"({"hypersurface": {"kind": "sphere"}, "O": [0, 0]})"), 2},
      {"fixtures list", 0},
  };
  for (const auto& c : cases) EXPECT_EQ(run(c.args, out).code, c.code) << c.args;
}

TEST(Spatial, HelixAndAreaLift) {
  const auto out = scratch("helix");
  ASSERT_EQ(run("spatial " + (kJobs / "spatial_helix.json").string(), out).code, 0);
  for (const auto& r : csv(out / "invariants.csv")) {
    EXPECT_NEAR(r[1], 1.0, 1e-6);
    EXPECT_NEAR(r[3], 0.0, 1e-6);
  }
  EXPECT_TRUE(load(out / "report.json")["cylindrical"].get<bool>());
  const auto lift = scratch("lift");
  ASSERT_EQ(run("spatial " + (kJobs / "spatial_area_lift.json").string(), lift).code, 0);
  const json r = load(lift / "report.json");
  EXPECT_TRUE(r["cylindrical"].get<bool>());
  EXPECT_LT(r["cylindricity_residual"].get<double>(), 1e-6);
}

TEST(Darboux, LatitudeSheetIsTheAxis) {
  const auto out = scratch("latitude");
  ASSERT_EQ(run("darboux " + (kJobs / "darboux_latitude.json").string(), out).code, 0);
  const json j = load(out / "labels.json");
  for (const auto& s : j["samples"]) EXPECT_EQ(s["label"], "Degenerate");
  EXPECT_TRUE(j["degenerate_sheet"].get<bool>());
  const std::string obj = slurp(out / "focal.obj");
  EXPECT_NE(obj.find("\nl "), std::string::npos);
  EXPECT_EQ(obj.find("\nf "), std::string::npos);
  for (const auto& v : obj_vertices(out / "focal.obj")) EXPECT_LT(std::hypot(v[0], v[1]), 1e-8);
  const auto rows = csv(out / "frame.csv");
  EXPECT_EQ(rows.size(), 257u);
}

TEST(Darboux, ConeSheetCollapsesToZAxis) {
  const auto out = scratch("cone");
  ASSERT_EQ(run("darboux " + (kJobs / "darboux_circle_on_cone.json").string(), out).code, 0);
  const json j = load(out / "labels.json");
  ASSERT_FALSE(j["visual_contour"].is_null());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(j["visual_contour"]["point"][i].get<double>(), 0.0, 1e-8);
  ASSERT_FALSE(j["constant_Q"].is_null());
  EXPECT_NEAR(j["constant_Q"]["point"][2].get<double>(), 1.0, 1e-8);
  for (const auto& v : obj_vertices(out / "focal.obj")) EXPECT_LT(std::hypot(v[0], v[1]), 1e-8);
}

TEST(Darboux, PerturbedEllipsoidHasCuspidalEdge) {
  const auto out = scratch("perturbed");
  ASSERT_EQ(run("darboux " + (kJobs / "darboux_perturbed_ellipsoid.json").string(), out).code, 0);
  const json j = load(out / "labels.json");
  int cusp = 0;
  for (const auto& s : j["samples"]) cusp += s["label"] == "CuspidalEdge";
  EXPECT_GT(cusp, 0);
  EXPECT_NE(slurp(out / "focal.obj").find("\nf "), std::string::npos);
}

TEST(Darboux, OffSurfaceCurveNamesContainment) {
  const auto out = scratch("off");
  const CliRun r = run("darboux " + (kJobs / "darboux_off_surface.json").string(), out);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("containment"), std::string::npos);
}

TEST(Darboux, Lambda0AndGaugeLeaveLabelsInvariant) {
  const auto a = scratch("l0"), b = scratch("l1");
  const std::string job = (kJobs / "darboux_perturbed_ellipsoid.json").string();
  ASSERT_EQ(run("darboux " + job, a).code, 0);
  ASSERT_EQ(run("--lambda0 0.7 darboux " + job, b).code, 0);
  const json ja = load(a / "labels.json"), jb = load(b / "labels.json");
  ASSERT_EQ(ja["samples"].size(), jb["samples"].size());
  for (size_t k = 0; k < ja["samples"].size(); ++k) EXPECT_EQ(ja["samples"][k]["label"], jb["samples"][k]["label"]);
  EXPECT_EQ(jb["lambda0"].get<double>(), 0.7);
}

TEST(Umbilic, SphereAndParaboloid) {
  const auto s = scratch("sphere");
  ASSERT_EQ(run("umbilic " + (kJobs / "umbilic_sphere.json").string(), s).code, 0);
  const json js = load(s / "verification.json");
  EXPECT_TRUE(js["hyperplanar"].get<bool>());
  EXPECT_FALSE(js["hyperplane"].is_null());
  EXPECT_LT(js["laplacian_residual"].get<double>(), 1e-6);
  EXPECT_LT(js["frame_det_residual"].get<double>(), 1e-8);
  const auto p = scratch("paraboloid");
  ASSERT_EQ(run("umbilic " + (kJobs / "umbilic_paraboloid.json").string(), p).code, 0);
  const json jp = load(p / "verification.json");
  EXPECT_FALSE(jp["hyperplanar"].get<bool>());
  EXPECT_FALSE(jp["proper_affine_sphere"].get<bool>());
  EXPECT_GT(jp["plane_residual"].get<double>(), 1e-2);
  const auto rows = csv(s / "phi.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().size(), 6u);  // u, v, phi_0..phi_3
}

TEST(Umbilic, RoundTrip) {
  for (const char* job : {"inverse_sphere_roundtrip.json", "inverse_ellipse_shift.json"}) {
    const auto out = scratch(job);
    ASSERT_EQ(run(std::string("umbilic-inverse ") + (kJobs / job).string(), out).code, 0);
    EXPECT_LT(load(out / "inverse_report.json")["max_abs_error"].get<double>(), 1e-6) << job;
  }
}

TEST(Umbilic, ConstantPsiIsSingular) {
  const auto out = scratch("singular");
  {
    std::ofstream c(out / "phi.csv");
    c << "u,x0,x1,x2\n";
    for (int k = 0; k <= 32; ++k) c << k / 32.0 << ",1,0," << k / 32.0 << "\n";
    std::ofstream(out / "inv.json") << R"({"phi_csv": "phi.csv", "O": [0, 0]})";
  }
  const CliRun r = run("umbilic-inverse " + (out / "inv.json").string(), out);
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("singularsystem"), std::string::npos);
}

TEST(Focal, UmbilicFactorIsOneLineOfMultiplicityN) {
  const auto out = scratch("fumb");
  ASSERT_EQ(run("focal " + (kJobs / "focal_umbilic_sphere.json").string(), out).code, 0);
  const json j = load(out / "summary.json");
  ASSERT_EQ(j["factors"].size(), 1u);
  EXPECT_EQ(j["factors"][0]["multiplicity"], j["n"]);
}

TEST(Focal, ProductOfCirclesGivesRAndSLines) {
  const auto out = scratch("fprod");
  ASSERT_EQ(run("focal " + (kJobs / "focal_product_circles.json").string(), out).code, 0);
  const json j = load(out / "summary.json");
  for (const auto& s : j["per_sample"]) {
    EXPECT_EQ(s["q_rs"], "1 - s - r + r*s");
    ASSERT_EQ(s["rs_lines"].size(), 2u);
  }
  EXPECT_FALSE(csv(out / "locus.csv").empty());
}

TEST(Focal, RandomDataRespectsDegreeBound) {
  const auto out = scratch("frand");
  ASSERT_EQ(run("focal " + (kJobs / "focal_random.json").string(), out).code, 0);
  const json j = load(out / "summary.json");
  EXPECT_TRUE(j["degree_bound_ok"].get<bool>());
  EXPECT_LE(j["max_degree"].get<int>(), 3);
}

TEST(Determinism, OutputsAreByteIdentical) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> jobs{
      {"darboux " + (kJobs / "darboux_perturbed_ellipsoid.json").string(), {"frame.csv", "focal.obj", "labels.json"}},
      {"focal " + (kJobs / "focal_product_oval.json").string(), {"q_coefficients.csv", "locus.csv", "summary.json"}},
      {"umbilic " + (kJobs / "umbilic_sphere.json").string(), {"phi.csv", "verification.json"}},
  };
  for (const auto& [args, files] : jobs) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    ASSERT_EQ(run(args, a).code, 0);
    ASSERT_EQ(run("--threads 4 " + args, b).code, 0);
    for (const auto& f : files) EXPECT_EQ(slurp(a / f), slurp(b / f)) << args << " " << f;
  }
}

TEST(Determinism, SeedComesFromEnvironment) {
  const std::string job = "focal " + (kJobs / "focal_random.json").string();
  const auto a = scratch("seed_a"), b = scratch("seed_b"), c = scratch("seed_c");
  ASSERT_EQ(run(job, a, "AFFINE_FOCAL_SEED=7").code, 0);
  ASSERT_EQ(run(job, b, "AFFINE_FOCAL_SEED=7").code, 0);
  ASSERT_EQ(run(job, c, "AFFINE_FOCAL_SEED=8").code, 0);
  EXPECT_EQ(slurp(a / "q_coefficients.csv"), slurp(b / "q_coefficients.csv"));
  EXPECT_NE(slurp(a / "q_coefficients.csv"), slurp(c / "q_coefficients.csv"));
  EXPECT_EQ(run(job, a, "AFFINE_FOCAL_SEED=x").code, 2);
}

TEST(Fixtures, ListNamesCatalog) {
  const auto out = scratch("list");
  ASSERT_EQ(run("fixtures list", out).code, 0);
  const std::string s = slurp(out / "stdout.txt");
  EXPECT_NE(s.find("latitude_on_sphere"), std::string::npos);
  EXPECT_NE(s.find("circle_on_cone"), std::string::npos);
}
