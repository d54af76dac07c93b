#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "envtool/commands.hpp"
#include "envtool/mesh.hpp"

using namespace envtool;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path freshDir(const std::string& name) {
    const fs::path dir = fs::path("test_cli_tmp") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

FamilyConfig fixtureConfig(const std::string& name, const std::string& extra = "") {
    return FamilyConfig::parseText("[fixture]\nname = " + name + "\n" + extra);
}

std::size_t countLines(const std::string& text, const std::string& prefix) {
    std::size_t n = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0) ++n;
    return n;
}

}  // namespace

TEST_CASE("config: full inline family") {
    const char* text =
        "# comment\n"
        "[surface]\n"
        "x = \"(u, v, 0)\"\n"
        "n = \"(0, 0, 1)\"\n"
        "s = \"(1, 0, 0)\"\n"
        "[radius]\n"
        "lambda = \"1\"\n"
        "[domain]\n"
        "u_min = -1\n"
        "u_max = 1\n"
        "v_min = -1\n"
        "v_max = 1\n"
        "[grid]\n"
        "nu = 11\n"
        "nv = 11\n";
    const FamilyConfig cfg = FamilyConfig::parseText(text);
    CHECK(cfg.grid.nu == 11);
    const SphereFamily fam = cfg.family();
    CHECK(fam.lambda.value(0.3, 0.4) == 1.0);
}

TEST_CASE("config: fixture reference with overrides") {
    const FamilyConfig cfg = fixtureConfig("axis-half", "[grid]\nnu = 9\nnv = 9\n");
    CHECK(cfg.fixtureName == "axis-half");
    CHECK(cfg.grid.nu == 9);
    CHECK(cfg.domain.vMin == doctest::Approx(0.5));
    const SphereFamily fam = cfg.family();
    CHECK(fam.lambda.value(0, 2) == doctest::Approx(1.0));
}

TEST_CASE("config: rejections") {
    CHECK_THROWS_AS(FamilyConfig::parseText("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(FamilyConfig::parseText("[surface]\nbogus = \"(u,v,0)\"\n"), ConfigError);
    CHECK_THROWS_AS(FamilyConfig::parseText("x = 1\n"), ConfigError);  // key outside section
    CHECK_THROWS_AS(FamilyConfig::parseText("[fixture]\nname = no-such\n"), ConfigError);
    CHECK_THROWS_AS(fixtureConfig("axis-half", "[grid]\nnu = 1\n"), ConfigError);
    CHECK_THROWS_AS(fixtureConfig("axis-half", "[tolerances]\neps_zero = -1\n"), ConfigError);
    // Missing pieces.
    CHECK_THROWS_AS(FamilyConfig::parseText("[surface]\nx = \"(u,v,0)\"\n"), ConfigError);
    // Bad expression caught at family construction.
    const FamilyConfig bad = FamilyConfig::parseText(
        "[surface]\nx = \"(u, v)\"\n[radius]\nlambda = \"1\"\n"
        "[domain]\nu_min = 0\nu_max = 1\nv_min = 0\nv_max = 1\n[grid]\nnu = 5\nnv = 5\n");
    CHECK_THROWS_AS(bad.family(), ConfigError);
}

TEST_CASE("config: exclusions and bindings") {
    const FamilyConfig cfg = FamilyConfig::parseText(
        "[surface]\nx = \"(u, v, 0)\"\nn = \"(0,0,1)\"\ns = \"(1,0,0)\"\n"
        "[radius]\nlambda = \"k\"\n"
        "[domain]\nu_min = -1\nu_max = 1\nv_min = -1\nv_max = 1\nexclude = \"u=0 & v=0; v<=-0.5\"\n"
        "[grid]\nnu = 5\nnv = 5\n"
        "[bindings]\nk = 2.0\n");
    const SphereFamily fam = cfg.family();
    CHECK(fam.lambda.value(0, 0) == 2.0);
    const Tolerances tol;
    CHECK(fam.fs.domain.excluded(0, 0, tol));
    CHECK(fam.fs.domain.excluded(0.3, -0.7, tol));
    CHECK_FALSE(fam.fs.domain.excluded(0.3, 0.7, tol));
}

TEST_CASE("cmdClassify: translated planes come out Sigma1 with count Two") {
    const fs::path dir = freshDir("classify_planes");
    const int rc = cmdClassify(fixtureConfig("translated-planes"), dir.string());
    CHECK(rc == kExitOk);
    const std::string csv = slurp(dir / "classify.csv");
    CHECK(csv.find("count=Two") != std::string::npos);
    CHECK(csv.find("Sigma2_count=0 ") != std::string::npos);
    CHECK(countLines(csv, "#") > 5);
    // Header plus one row per grid point.
    CHECK(countLines(csv, "") == 1 + 41 * 41 + countLines(csv, "#"));
    CHECK(csv.find(",NotCreative,") == std::string::npos);  // no row is labelled that way
    CHECK(csv.find("NotCreative_count=0 ") != std::string::npos);
}

TEST_CASE("cmdClassify: cone-distance reports count One") {
    const fs::path dir = freshDir("classify_cone");
    CHECK(cmdClassify(fixtureConfig("cone-distance"), dir.string()) == kExitOk);
    const std::string csv = slurp(dir / "classify.csv");
    CHECK(csv.find("count=One") != std::string::npos);
    CHECK(csv.find("dense_Sigma2=yes") != std::string::npos);
}

TEST_CASE("cmdClassify: concentric family exits 3") {
    const fs::path dir = freshDir("classify_concentric");
    CHECK(cmdClassify(fixtureConfig("concentric"), dir.string()) == kExitNotCreative);
    const std::string csv = slurp(dir / "classify.csv");
    CHECK(csv.find("count=NotCreative") != std::string::npos);
    CHECK(csv.find(",nan,nan") != std::string::npos);  // empty solutions have no representative
}

TEST_CASE("cmdEnvelope: both parabolic branches with tiny residual maxima") {
    const fs::path dir = freshDir("envelope_parabolic");
    const FamilyConfig cfg = fixtureConfig("parabolic-cylinder", "[grid]\nnu = 21\nnv = 21\n");
    CHECK(cmdEnvelope(cfg, "plus", dir.string()) == kExitOk);
    CHECK(cmdEnvelope(cfg, "minus", dir.string()) == kExitOk);
    for (const char* b : {"plus", "minus"}) {
        const std::string csv = slurp(dir / (std::string("envelope_") + b + "_residuals.csv"));
        for (const char* key : {"max_res_on_sphere=", "max_res_tan_u=", "max_res_tan_v="}) {
            const auto pos = csv.find(key);
            REQUIRE(pos != std::string::npos);
            const double v = std::stod(csv.substr(pos + std::string(key).size()));
            CHECK(v <= 1e-8);
        }
        const std::string obj = slurp(dir / (std::string("envelope_") + b + ".obj"));
        CHECK(countLines(obj, "v ") == 21 * 21);
        CHECK(countLines(obj, "f ") == 20 * 20);
        CHECK(countLines(obj, "o ") == 1);
    }
}

TEST_CASE("cmdEnvelope: unavailable branch maps to exit 4") {
    const fs::path dir = freshDir("envelope_unavail");
    const FamilyConfig cfg = fixtureConfig("cone-distance", "[grid]\nnu = 9\nnv = 9\n");
    try {
        cmdEnvelope(cfg, "plus", dir.string());
        FAIL("expected BranchUnavailableError");
    } catch (const std::exception& e) {
        CHECK(exitCodeFor(e) == kExitBranchUnavailable);
    }
}

TEST_CASE("cmdEnvelope: custom branch from the [branch] section") {
    const fs::path dir = freshDir("envelope_custom");
    const FamilyConfig cfg =
        fixtureConfig("axis-half", "[grid]\nnu = 9\nnv = 9\n[branch]\ntheta = \"0\"\n");
    CHECK(cmdEnvelope(cfg, "custom", dir.string()) == kExitOk);
    const std::string obj = slurp(dir / "envelope_custom.obj");
    CHECK(countLines(obj, "v ") == 81);
    // theta = 0 branch lies in the y = 0 half-plane: every vertex has y ~ 0.
    std::istringstream in(obj);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) != 0) continue;
        double x, y, z;
        REQUIRE(std::sscanf(line.c_str(), "v %lf %lf %lf", &x, &y, &z) == 3);
        CHECK(std::abs(y) <= 1e-14);
        CHECK(x >= 0.0);
    }
}

TEST_CASE("cmdEnvelope: custom branch angle from a plain binding") {
    const fs::path dir = freshDir("envelope_custom_binding");
    const FamilyConfig cfg =
        fixtureConfig("axis-half", "[grid]\nnu = 7\nnv = 7\n[bindings]\ntheta = 0\n");
    CHECK(cmdEnvelope(cfg, "custom", dir.string()) == kExitOk);
    const std::string obj = slurp(dir / "envelope_custom.obj");
    CHECK(countLines(obj, "v ") == 49);
}

TEST_CASE("cmdDiscriminant: fixed sphere gives a single sphere component") {
    const fs::path dir = freshDir("disc_sphere");
    const FamilyConfig cfg = fixtureConfig("fixed-sphere", "[grid]\nnu = 11\nnv = 11\n");
    CHECK(cmdDiscriminant(cfg, dir.string(), 64) == kExitOk);
    const std::string obj = slurp(dir / "discriminant.obj");
    CHECK(countLines(obj, "o ") == 1);
    CHECK(countLines(obj, "v ") == 64);
    CHECK(countLines(obj, "p ") == 64);
    const std::string csv = slurp(dir / "discriminant_summary.csv");
    CHECK(csv.find("sphere_0000,sphere,64,") != std::string::npos);
}

TEST_CASE("cmdDiscriminant: axis-half emits circles as closed polylines") {
    const fs::path dir = freshDir("disc_half");
    const FamilyConfig cfg = fixtureConfig("axis-half", "[grid]\nnu = 9\nnv = 9\n");
    CHECK(cmdDiscriminant(cfg, dir.string(), 16) == kExitOk);
    const std::string obj = slurp(dir / "discriminant.obj");
    CHECK(countLines(obj, "l ") == 9);  // one circle per v level
}

TEST_CASE("cmdEvolute: unit sphere reports the degenerate double root at -1") {
    const fs::path dir = freshDir("evolute_sphere");
    const FamilyConfig cfg = fixtureConfig("unit-sphere", "[grid]\nnu = 7\nnv = 7\n");
    CHECK(cmdEvolute(cfg, dir.string()) == kExitOk);
    const std::string csv = slurp(dir / "evolute.csv");
    CHECK(csv.find(",0,-1,nan,0,1,1,") != std::string::npos);  // delta=-1, degenerate rows
}

TEST_CASE("cmdPedal: doubled sphere-through-origin centres match 2(x.n)n column-by-column") {
    const fs::path dir = freshDir("pedal_sto");
    const char* text =
        "[surface]\n"
        "x = \"(2*cos(u)*cos(v), 2*cos(u)*sin(v), 2+2*sin(u))\"\n"
        "n = \"(cos(u)*cos(v), cos(u)*sin(v), sin(u))\"\n"
        "s = \"(-sin(u)*cos(v), -sin(u)*sin(v), cos(u))\"\n"
        "[radius]\nlambda = \"1\"\n"
        "[domain]\nu_min = -1.2\nu_max = 1.2\nv_min = 0\nv_max = 6.283185307179586\n"
        "[grid]\nnu = 9\nnv = 9\n";
    const FamilyConfig cfg = FamilyConfig::parseText(text);
    CHECK(cmdPedal(cfg, Vec3{0, 0, 0}, dir.string()) == kExitOk);
    const std::string csv = slurp(dir / "pedal.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        double u, v, px, py, pz;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &u, &v, &px, &py, &pz) == 5);
        const double w = 2.0 * (1.0 + std::sin(u));
        const Vec3 want{w * std::cos(u) * std::cos(v), w * std::cos(u) * std::sin(v),
                        w * std::sin(u)};
        CHECK(norm(Vec3{px, py, pz} - want) <= 1e-12);
        ++rows;
    }
    CHECK(rows == 81);
}

TEST_CASE("cmdVerify: shifted plane fails with the residual table") {
    const fs::path dir = freshDir("verify_fail");
    const FamilyConfig cfg = fixtureConfig("translated-planes", "[grid]\nnu = 11\nnv = 11\n");
    CHECK(cmdVerify(cfg, "(u+1, v, 0)", dir.string()) == kExitVerifyFailed);
    const std::string rep = slurp(dir / "verify_report.txt");
    CHECK(rep.find("verdict: FAIL") != std::string::npos);
    CHECK(rep.find("max |f_u.(f-x)|      : 1\n") != std::string::npos);
    // And a genuine envelope passes.
    CHECK(cmdVerify(cfg, "(u, v, 1)", dir.string()) == kExitOk);
    CHECK(slurp(dir / "verify_report.txt").find("verdict: PASS") != std::string::npos);
}

TEST_CASE("determinism: identical configs give byte-identical outputs") {
    const FamilyConfig cfg = fixtureConfig("parabolic-cylinder", "[grid]\nnu = 15\nnv = 15\n");
    const fs::path d1 = freshDir("det_a"), d2 = freshDir("det_b");
    cmdClassify(cfg, d1.string());
    cmdClassify(cfg, d2.string());
    CHECK(slurp(d1 / "classify.csv") == slurp(d2 / "classify.csv"));
    cmdEnvelope(cfg, "plus", d1.string());
    cmdEnvelope(cfg, "plus", d2.string());
    CHECK(slurp(d1 / "envelope_plus.obj") == slurp(d2 / "envelope_plus.obj"));
    cmdDiscriminant(cfg, d1.string(), 16);
    cmdDiscriminant(cfg, d2.string(), 16);
    CHECK(slurp(d1 / "discriminant.obj") == slurp(d2 / "discriminant.obj"));
}

TEST_CASE("output files use LF endings and 17-significant-digit floats") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(1.0) == "1");
    CHECK(fmt17(-2.5e-9) == "-2.5000000000000001e-09");
    const fs::path dir = freshDir("lf_check");
    cmdClassify(fixtureConfig("fixed-sphere", "[grid]\nnu = 5\nnv = 5\n"), dir.string());
    const std::string csv = slurp(dir / "classify.csv");
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("golden files: the CSV/OBJ formats are a frozen byte-exact contract") {
    const fs::path golden = fs::path(ENVTOOL_TESTS_DIR) / "golden";
    {
        const fs::path dir = freshDir("golden_classify");
        cmdClassify(fixtureConfig("fixed-sphere", "[grid]\nnu = 5\nnv = 5\n"), dir.string());
        CHECK(slurp(dir / "classify.csv") == slurp(golden / "classify_fixed_sphere_5x5.csv"));
    }
    {
        const fs::path dir = freshDir("golden_envelope");
        cmdEnvelope(fixtureConfig("translated-planes", "[grid]\nnu = 3\nnv = 3\n"), "plus",
                    dir.string());
        CHECK(slurp(dir / "envelope_plus.obj") == slurp(golden / "envelope_planes_plus_3x3.obj"));
    }
}

TEST_CASE("ENVELOPE_TOOL_THREADS changes parallelism, never the bytes") {
    const FamilyConfig cfg = fixtureConfig("parabolic-cylinder", "[grid]\nnu = 33\nnv = 33\n");
    const fs::path d1 = freshDir("threads_1"), d4 = freshDir("threads_4");
    setenv("ENVELOPE_TOOL_THREADS", "1", 1);
    cmdClassify(cfg, d1.string());
    setenv("ENVELOPE_TOOL_THREADS", "4", 1);
    cmdClassify(cfg, d4.string());
    unsetenv("ENVELOPE_TOOL_THREADS");
    CHECK(slurp(d1 / "classify.csv") == slurp(d4 / "classify.csv"));
}

TEST_CASE("exit code mapping") {
    CHECK(exitCodeFor(ConfigError("x")) == kExitConfig);
    CHECK(exitCodeFor(NotCreativeError("x")) == kExitNotCreative);
    CHECK(exitCodeFor(BranchUnavailableError("x")) == kExitBranchUnavailable);
    CHECK(exitCodeFor(HypothesisNotMetError("x")) == kExitHypothesisNotMet);
    CHECK(exitCodeFor(ParseError("x", 0, "y")) == kExitConfig);
}
