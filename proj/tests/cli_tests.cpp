// End-to-end checks of the command-line driver.  The binary path arrives in
// LAB_BIN (set by the test harness); when it is absent the cases degrade to
// no-ops so the suite can still run standalone.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "lab/json_io.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* labBinary() { return std::getenv("LAB_BIN"); }

#define SKIP_WITHOUT_LAB()                                       \
  do {                                                           \
    if (!labBinary()) {                                          \
      MESSAGE("LAB_BIN is not set; command-line checks skipped"); \
      return;                                                    \
    }                                                            \
  } while (0)

fs::path freshDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "lab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int runLab(const std::string& args) {
  const std::string cmd =
      std::string("\"") + labBinary() + "\" " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path writeConfig(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream out(p);
  REQUIRE(out);
  out << j.dump(2) << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Joint table of the worked preference-based model: uniform type and state
// priors, stance identical to the sender state, alignment 0.9 vs 0.3.
json preferenceTable() {
  return json::parse(R"({
    "schemaVersion": 1,
    "model": {"table": [0.225, 0.025, 0, 0, 0.075, 0.175, 0, 0,
                        0, 0, 0.025, 0.225, 0, 0, 0.175, 0.075]}
  })");
}

json simulateConfig(int nPerArm) {
  json j = json::parse(R"({
    "schemaVersion": 1,
    "seed": 20260814,
    "population": {"shareSP": 0.5, "prior": 0.5, "hatPi": 0.5,
                   "chiThreat": 0.3, "noiseScale": 0.5},
    "engine": {"identity": {"signal": {"accuracy": 0.6}, "piS1": 0.7, "piS0": 0.3}}
  })");
  j["nPerArm"] = nPerArm;
  return j;
}

}  // namespace

TEST_CASE("bayes subcommand reports the worked posteriors and backlash flags") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("bayes");
  const fs::path cfg = writeConfig(dir, "cfg.json", preferenceTable());
  const fs::path out = dir / "nested" / "out";  // created on demand

  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + out.string() +
               "\" --verify") == 0);
  const json r = json::parse(slurp(out / "bayes.json"));
  CHECK(r.at("classification").get<std::string>() == "PreferenceBased");
  CHECK(r.at("posteriors").at("prior").get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.at("posteriors").at("y1").get<double>() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.at("posteriors").at("y1A").get<double>() == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(r.at("posteriors").at("y1M").get<double>() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.at("spilloverGaps").at("y1").at("agreement").get<double>() ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r.at("spilloverGaps").at("y1").at("disagreement").get<double>() ==
        doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(r.at("backlash").at("y1M").get<bool>());
  CHECK_FALSE(r.at("backlash").at("y1A").get<bool>());

  const fs::path csvOut = dir / "csv";
  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + csvOut.string() +
               "\" --format csv") == 0);
  const std::string csv = slurp(csvOut / "bayes.csv");
  CHECK(csv.rfind("quantity,value\n", 0) == 0);
  CHECK(csv.find("classification,PreferenceBased\n") != std::string::npos);
  CHECK(csv.find("backlash_y1M,true\n") != std::string::npos);
}

TEST_CASE("bayes sampler honours the seed override") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("bayes_seed");
  const json cfgJson = json::parse(R"({
    "schemaVersion": 1,
    "model": {"sample": {"class": "CompetenceBased", "seed": 5}}
  })");
  const fs::path cfg = writeConfig(dir, "cfg.json", cfgJson);

  const fs::path outA = dir / "a";
  const fs::path outB = dir / "b";
  const fs::path outC = dir / "c";
  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + outA.string() + "\"") == 0);
  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + outB.string() + "\"") == 0);
  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + outC.string() +
               "\" --seed 123") == 0);

  // Same seed: byte-identical output.  New seed: a different model.
  CHECK(slurp(outA / "bayes.json") == slurp(outB / "bayes.json"));
  const double y1A = json::parse(slurp(outA / "bayes.json")).at("posteriors").at("y1").get<double>();
  const double y1C = json::parse(slurp(outC / "bayes.json")).at("posteriors").at("y1").get<double>();
  CHECK(y1A != y1C);
}

TEST_CASE("identity subcommand runs all three sections and the worked threshold") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("identity");
  const json cfgJson = json::parse(R"({
    "schemaVersion": 1,
    "distort": {"pi": 0.5, "refIn": 0.8, "refOut": 0.5, "chi": 0.3},
    "response": {"prior": 0.5, "hatPi": 0.5, "piS": 0.7, "chiThreat": 0.3,
                 "signal": {"accuracy": 0.6}, "stance": 1},
    "threshold": {"prior": 0.5, "rationalPost": 0.6, "hatPi": 0.5, "piS": 0.7, "k": 1}
  })");
  const fs::path cfg = writeConfig(dir, "cfg.json", cfgJson);
  const fs::path out = dir / "out";

  CHECK(runLab("identity --config \"" + cfg.string() + "\" --out \"" + out.string() +
               "\" --verify") == 0);
  const json r = json::parse(slurp(out / "identity.json"));
  CHECK(r.at("distort").at("residual").get<double>() <= 1e-12);
  CHECK(r.at("distort").at("distorted").get<double>() > 0.5);
  CHECK(r.at("response").at("rationalPosterior").get<double>() ==
        doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.at("response").at("inGroup").get<double>() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.at("response").at("outGroup").get<double>() ==
        doctest::Approx(0.4427501007665769).epsilon(1e-12));
  const double chiStar = r.at("threshold").at("chiStar").get<double>();
  CHECK(std::abs(chiStar - 0.2445170925694726) < 1e-9);
  CHECK(std::abs(chiStar - 0.244527) < 1e-4);

  // An identity config with none of the known sections is malformed.
  const fs::path empty = writeConfig(dir, "empty.json", json::parse(R"({"schemaVersion": 1})"));
  CHECK(runLab("identity --config \"" + empty.string() + "\" --out \"" + out.string() + "\"") ==
        2);
}

TEST_CASE("election subcommand reproduces the symmetric equilibrium") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("election");
  const json cfgJson = json::parse(R"({
    "schemaVersion": 1,
    "groups": {
      "sp": {"ideal": 1.0, "share": 0.5, "belief": 0.7},
      "sc": {"ideal": 0.0, "share": 0.5, "belief": 0.3}
    },
    "phi": 3.0, "hatPi": 0.5, "piS1": 0.9, "piS0": 0.6,
    "chiSP": 0.3, "chiSC": 0.3
  })");
  const fs::path cfg = writeConfig(dir, "cfg.json", cfgJson);
  const fs::path out = dir / "out";

  CHECK(runLab("election --config \"" + cfg.string() + "\" --out \"" + out.string() +
               "\" --verify") == 0);
  const json r = json::parse(slurp(out / "election.json"));
  CHECK(r.at("qSP").at("x").get<double>() ==
        doctest::Approx(0.7071067811865475).epsilon(1e-9));
  CHECK(r.at("qSC").at("x").get<double>() ==
        doctest::Approx(0.2928932188134525).epsilon(1e-9));
  CHECK(r.at("payoffClosedForm").get<double>() ==
        doctest::Approx(0.5331707558824032).epsilon(1e-9));
  CHECK(r.at("payoffA").get<double>() == doctest::Approx(0.5331707558824032).epsilon(1e-6));
  CHECK_FALSE(r.at("beliefsFromMessage").get<bool>());
  // With both distortion weights positive, pure economic messages lose to a
  // bundle, so the chosen message carries a tag.
  const std::string msg = r.at("optimalMessage").get<std::string>();
  CHECK(msg.find("stance") == 0);
  CHECK(msg.find("+None") == std::string::npos);

  // Replaying the optimal message shifts the group beliefs before solving.
  json replay = cfgJson;
  replay["useOptimalMessage"] = true;
  const fs::path cfg2 = writeConfig(dir, "replay.json", replay);
  const fs::path out2 = dir / "replay";
  CHECK(runLab("election --config \"" + cfg2.string() + "\" --out \"" + out2.string() +
               "\" --verify") == 0);
  const json r2 = json::parse(slurp(out2 / "election.json"));
  CHECK(r2.at("beliefsFromMessage").get<bool>());
  CHECK(r2.at("nuSP").get<double>() != r.at("nuSP").get<double>());
}

TEST_CASE("media subcommand sweeps the cost ladder into both price regimes") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("media");
  const json cfgJson = json::parse(R"({
    "schemaVersion": 1,
    "issues": 8, "socialGaps": 2, "economicGaps": 0,
    "priceHigh": 1.4, "priceLow": 1.0, "cost": 0.1
  })");
  const fs::path cfg = writeConfig(dir, "cfg.json", cfgJson);
  const fs::path out = dir / "out";

  CHECK(runLab("media --config \"" + cfg.string() + "\" --out \"" + out.string() +
               "\" --verify") == 0);
  const json r = json::parse(slurp(out / "media.json"));
  const json& sweep = r.at("sweep");
  REQUIRE(sweep.size() == 7);  // dE = 0 .. issues - socialGaps
  for (const json& point : sweep) {
    const int dE = point.at("dE").get<int>();
    const std::string regime = point.at("regime").get<std::string>();
    if (dE <= 2) {
      CHECK(regime == "Low");
      CHECK(point.at("profitA").get<double>() == 1.0);
    } else {
      CHECK(regime == "High");
      CHECK(point.at("profitA").get<double>() == doctest::Approx(1.4).epsilon(1e-12));
    }
    CHECK(point.at("profitA").get<double>() == point.at("profitB").get<double>());
    CHECK(point.at("D").get<int>() == 2 + dE);
  }

  const fs::path csvOut = dir / "csv";
  CHECK(runLab("media --config \"" + cfg.string() + "\" --out \"" + csvOut.string() +
               "\" --format csv") == 0);
  const std::string csv = slurp(csvOut / "media.csv");
  CHECK(csv.rfind("D_E,D,profitA,profitB,regime\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}

TEST_CASE("simulate subcommand writes deterministic tables") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("simulate");
  const fs::path cfg = writeConfig(dir, "cfg.json", simulateConfig(500));

  const fs::path outA = dir / "a";
  const fs::path outB = dir / "b";
  CHECK(runLab("simulate --config \"" + cfg.string() + "\" --out \"" + outA.string() +
               "\" --verify") == 0);
  CHECK(runLab("simulate --config \"" + cfg.string() + "\" --out \"" + outB.string() + "\"") ==
        0);
  CHECK(slurp(outA / "simulate.json") == slurp(outB / "simulate.json"));

  const json r = json::parse(slurp(outA / "simulate.json"));
  REQUIRE(r.at("arms").size() == 11);
  CHECK(r.at("arms")[0].at("arm").get<std::string>() == "NoMessage");
  CHECK(r.at("arms")[0].at("n").get<int>() == 500);
  // beta1..delta2, four control gaps, and the separate-sources gamma.
  REQUIRE(r.at("estimates").size() == 9);
  CHECK(r.at("estimates")[0].at("name").get<std::string>() == "beta1");
  CHECK(r.at("estimates")[8].at("name").get<std::string>() == "gamma");
  CHECK(r.at("correlations").size() == 11);

  const fs::path csvOut = dir / "csv";
  CHECK(runLab("simulate --config \"" + cfg.string() + "\" --out \"" + csvOut.string() +
               "\" --format csv") == 0);
  const std::string arms = slurp(csvOut / "simulate_arms.csv");
  CHECK(arms.rfind("arm,n,share,expectedShare\n", 0) == 0);
  CHECK(arms.find("\"Bundled(pro,SC)\"") != std::string::npos);
  const std::string est = slurp(csvOut / "simulate_estimates.csv");
  CHECK(est.rfind("estimate,value,se,z,n1,n2\n", 0) == 0);
  CHECK(est.find("gamma,") != std::string::npos);
  CHECK(est.find("proMisalignedVsControl,") != std::string::npos);
  const std::string corr = slurp(csvOut / "simulate_correlations.csv");
  CHECK(corr.rfind("arm,correlation,degenerate\n", 0) == 0);

  // The joint-table engine has no reference beliefs, hence no gamma row.
  json bayesCfg = simulateConfig(500);
  bayesCfg["engine"] = json::object();
  bayesCfg["engine"]["bayesian"] = preferenceTable()["model"];
  const fs::path cfgBayes = writeConfig(dir, "bayes.json", bayesCfg);
  const fs::path outBayes = dir / "bayes";
  CHECK(runLab("simulate --config \"" + cfgBayes.string() + "\" --out \"" +
               outBayes.string() + "\" --verify") == 0);
  const json rb = json::parse(slurp(outBayes / "simulate.json"));
  for (const json& e : rb.at("estimates")) {
    CHECK(e.at("name").get<std::string>() != "gamma");
  }
}

TEST_CASE("exit codes separate usage, config, and domain problems") {
  SKIP_WITHOUT_LAB();
  const fs::path dir = freshDir("exit_codes");
  const fs::path out = dir / "out";

  // Usage errors from the argument parser.
  CHECK(runLab("definitely-not-a-subcommand") == 2);
  CHECK(runLab("bayes --out \"" + out.string() + "\"") == 2);  // missing --config
  const fs::path cfg = writeConfig(dir, "ok.json", preferenceTable());
  CHECK(runLab("bayes --config \"" + cfg.string() + "\" --out \"" + out.string() +
               "\" --format yaml") == 2);
  CHECK(runLab("--help") == 0);

  // Unreadable or malformed documents.
  CHECK(runLab("bayes --config \"" + (dir / "missing.json").string() + "\" --out \"" +
               out.string() + "\"") == 2);
  const fs::path broken = dir / "broken.json";
  lab::writeTextFile(broken.string(), "{\"schemaVersion\": 1,,,\n");
  CHECK(runLab("bayes --config \"" + broken.string() + "\" --out \"" + out.string() + "\"") ==
        2);
  const fs::path unversioned = writeConfig(dir, "unversioned.json", json::parse(R"({"x": 1})"));
  CHECK(runLab("bayes --config \"" + unversioned.string() + "\" --out \"" + out.string() +
               "\"") == 2);

  // Structurally valid but mathematically inadmissible inputs.
  const fs::path badChi = writeConfig(dir, "bad_chi.json", json::parse(R"({
    "schemaVersion": 1,
    "distort": {"pi": 0.5, "refIn": 0.8, "refOut": 0.5, "chi": 0.6}
  })"));
  CHECK(runLab("identity --config \"" + badChi.string() + "\" --out \"" + out.string() +
               "\"") == 3);
  json tiny = simulateConfig(50);
  const fs::path tinyCfg = writeConfig(dir, "tiny.json", tiny);
  CHECK(runLab("simulate --config \"" + tinyCfg.string() + "\" --out \"" + out.string() +
               "\"") == 3);
}
