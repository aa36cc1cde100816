// Batch front end: every module is driven by a JSON config and writes its
// results into an output directory, deterministically for a fixed
// (config, seed) pair.  Exit codes: 0 ok, 2 malformed config, 3 violated
// model invariant, 4 failed --verify cross-check.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lab/election.hpp"
#include "lab/errors.hpp"
#include "lab/identity.hpp"
#include "lab/json_io.hpp"
#include "lab/media.hpp"
#include "lab/mental_model.hpp"
#include "lab/sim.hpp"

namespace {

using nlohmann::json;

struct RunManifest {
  std::string configPath;
  std::string outDir;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool verify = false;
};

constexpr int kExitOk = 0;
constexpr int kExitVerify = 4;

std::string outPath(const RunManifest& m, const std::string& name) {
  return (std::filesystem::path(m.outDir) / name).string();
}

void ensureOutDir(const RunManifest& m) {
  std::error_code ec;
  std::filesystem::create_directories(m.outDir, ec);
  if (ec) {
    throw lab::ConfigError("cannot create output directory: " + m.outDir);
  }
}

// ---------------------------------------------------------------------------
// bayes

int runBayes(const RunManifest& m) {
  const json cfg = lab::loadJsonFile(m.configPath);
  lab::checkSchemaVersion(cfg);
  const lab::MentalModel model =
      lab::mentalModelFromJson(cfg.contains("model") ? cfg.at("model") : cfg, m.seed);
  const lab::TrustClass cls = lab::classify(model);

  struct Row {
    std::string name;
    double p1;
  };
  std::vector<Row> posteriors;
  posteriors.push_back({"prior", lab::posterior(model, lab::Evidence::nothing()).p1()});
  const lab::Stance stances[2] = {lab::Stance::Stance0, lab::Stance::Stance1};
  const lab::CulturalTag thetas[2] = {lab::CulturalTag::InGroup, lab::CulturalTag::OutGroup};
  for (lab::Stance y : stances) {
    const int k = lab::stanceIndex(y);
    posteriors.push_back(
        {"y" + std::to_string(k), lab::posterior(model, lab::Evidence::stance(y)).p1()});
    for (lab::CulturalTag t : thetas) {
      posteriors.push_back({"y" + std::to_string(k) + (t == lab::CulturalTag::InGroup ? "A" : "M"),
                            lab::posterior(model, lab::Evidence::stanceAndType(y, t)).p1()});
    }
  }

  const lab::SpilloverGaps gaps0 = lab::spilloverGaps(model, lab::Stance::Stance0);
  const lab::SpilloverGaps gaps1 = lab::spilloverGaps(model, lab::Stance::Stance1);

  if (m.verify) {
    // Total-probability identity and the sandwich ordering, straight from
    // the joint table.
    for (lab::Stance y : stances) {
      const int k = lab::stanceIndex(y);
      const double base = lab::posterior(model, lab::Evidence::stance(y)).mass(k);
      const double inP =
          lab::posterior(model, lab::Evidence::stanceAndType(y, lab::CulturalTag::InGroup))
              .mass(k);
      const double outP =
          lab::posterior(model, lab::Evidence::stanceAndType(y, lab::CulturalTag::OutGroup))
              .mass(k);
      double pIn = 0.0, pAll = 0.0;
      for (int th = 0; th < 2; ++th) {
        for (int wS = 0; wS < 2; ++wS) {
          for (int wR = 0; wR < 2; ++wR) {
            const double v = model.cell(k, th, wS, wR);
            pAll += v;
            if (th == 0) pIn += v;
          }
        }
      }
      const double wIn = pIn / pAll;
      const double mix = wIn * inP + (1.0 - wIn) * outP;
      if (std::abs(mix - base) > 1e-12) {
        std::cerr << "verify: total-probability identity off by " << (mix - base) << "\n";
        return kExitVerify;
      }
      if (wIn > 0.0 && wIn < 1.0 && inP != outP &&
          !(std::min(inP, outP) < base && base < std::max(inP, outP))) {
        std::cerr << "verify: conditional posterior not between the type-posteriors\n";
        return kExitVerify;
      }
    }
  }

  const bool preference = cls == lab::TrustClass::PreferenceBased;
  if (m.format == "csv") {
    std::string csv = "quantity,value\n";
    csv += "classification," + std::string(lab::trustClassName(cls)) + "\n";
    for (const Row& r : posteriors) {
      csv += "posterior_" + r.name + "," + lab::formatDouble(r.p1) + "\n";
    }
    csv += "agreementGap_y0," + lab::formatDouble(gaps0.agreementGap) + "\n";
    csv += "disagreementGap_y0," + lab::formatDouble(gaps0.disagreementGap) + "\n";
    csv += "agreementGap_y1," + lab::formatDouble(gaps1.agreementGap) + "\n";
    csv += "disagreementGap_y1," + lab::formatDouble(gaps1.disagreementGap) + "\n";
    if (preference) {
      for (lab::Stance y : stances) {
        for (lab::CulturalTag t : thetas) {
          csv += "backlash_y" + std::to_string(lab::stanceIndex(y)) +
                 (t == lab::CulturalTag::InGroup ? "A," : "M,") +
                 (lab::backlashPredicate(model, y, t) ? "true" : "false") + "\n";
        }
      }
    }
    lab::writeTextFile(outPath(m, "bayes.csv"), csv);
  } else {
    lab::JsonWriter w;
    w.beginObject();
    w.key("classification").value(lab::trustClassName(cls));
    w.key("posteriors").beginObject();
    for (const Row& r : posteriors) w.key(r.name).value(r.p1);
    w.endObject();
    w.key("spilloverGaps").beginObject();
    w.key("y0").beginObject();
    w.key("agreement").value(gaps0.agreementGap);
    w.key("disagreement").value(gaps0.disagreementGap);
    w.endObject();
    w.key("y1").beginObject();
    w.key("agreement").value(gaps1.agreementGap);
    w.key("disagreement").value(gaps1.disagreementGap);
    w.endObject();
    w.endObject();
    if (preference) {
      w.key("backlash").beginObject();
      for (lab::Stance y : stances) {
        for (lab::CulturalTag t : thetas) {
          w.key("y" + std::to_string(lab::stanceIndex(y)) +
                (t == lab::CulturalTag::InGroup ? "A" : "M"))
              .value(lab::backlashPredicate(model, y, t));
        }
      }
      w.endObject();
    }
    w.endObject();
    lab::writeTextFile(outPath(m, "bayes.json"), w.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// identity

int runIdentity(const RunManifest& m) {
  const json cfg = lab::loadJsonFile(m.configPath);
  lab::checkSchemaVersion(cfg);
  if (!cfg.contains("distort") && !cfg.contains("response") && !cfg.contains("threshold")) {
    throw lab::ConfigError(
        "identity config needs at least one of \"distort\", \"response\", \"threshold\"");
  }

  lab::JsonWriter w;
  std::string csv = "quantity,value\n";
  w.beginObject();

  if (cfg.contains("distort")) {
    const json& d = cfg.at("distort");
    const lab::BinaryBelief pi(lab::jsonNumber(d, "pi"));
    const lab::BinaryBelief refIn(lab::jsonNumber(d, "refIn"));
    const lab::BinaryBelief refOut(lab::jsonNumber(d, "refOut"));
    const double chi = lab::jsonNumber(d, "chi");
    const lab::BinaryBelief distorted = lab::distortBelief(pi, refIn, refOut, chi);
    const auto [dIn, dOut] = lab::distortReference(refIn, refOut, chi);
    const double residual = lab::fixedPointResidual(distorted, pi, dIn, dOut, chi);
    if (m.verify && residual > 1e-12) {
      std::cerr << "verify: distortion fixed-point residual " << residual << "\n";
      return kExitVerify;
    }
    w.key("distort").beginObject();
    w.key("distorted").value(distorted.p1());
    w.key("distortedIn").value(dIn.p1());
    w.key("distortedOut").value(dOut.p1());
    w.key("residual").value(residual);
    w.endObject();
    csv += "distorted," + lab::formatDouble(distorted.p1()) + "\n";
    csv += "distortedIn," + lab::formatDouble(dIn.p1()) + "\n";
    csv += "distortedOut," + lab::formatDouble(dOut.p1()) + "\n";
    csv += "residual," + lab::formatDouble(residual) + "\n";
  }

  if (cfg.contains("response")) {
    const json& r = cfg.at("response");
    const lab::BinaryBelief prior(lab::jsonNumber(r, "prior"));
    const lab::BinaryBelief hatPi(lab::jsonNumber(r, "hatPi"));
    const lab::BinaryBelief piS(lab::jsonNumber(r, "piS"));
    const double chiThreat = lab::jsonNumber(r, "chiThreat");
    lab::SignalModel signal = lab::SignalModel::symmetric(0.5);
    if (r.contains("signal")) {
      const json& s = r.at("signal");
      if (s.contains("accuracy")) {
        signal = lab::SignalModel::symmetric(lab::jsonNumber(s, "accuracy"));
      } else {
        throw lab::ConfigError("response \"signal\" needs an \"accuracy\" field");
      }
    }
    lab::Stance stance = lab::Stance::Stance1;
    if (r.contains("stance") && lab::jsonInt(r, "stance") == 0) stance = lab::Stance::Stance0;

    const lab::BinaryBelief rational = lab::rationalPosterior(prior, signal, stance);
    const lab::Message inMsg = lab::Message::bundled(stance, piS, lab::CulturalTag::InGroup);
    const lab::Message outMsg = lab::Message::bundled(stance, piS, lab::CulturalTag::OutGroup);
    const lab::BinaryBelief inResp =
        lab::receiverResponse(prior, hatPi, signal, {0.0, chiThreat}, inMsg);
    const lab::BinaryBelief outResp =
        lab::receiverResponse(prior, hatPi, signal, {0.0, chiThreat}, outMsg);

    if (m.verify) {
      const auto [dIn, dOut] = lab::distortReference(hatPi, piS, chiThreat);
      const double residual = lab::fixedPointResidual(outResp, rational, dIn, dOut, chiThreat);
      if (residual > 1e-12) {
        std::cerr << "verify: response fixed-point residual " << residual << "\n";
        return kExitVerify;
      }
    }
    w.key("response").beginObject();
    w.key("rationalPosterior").value(rational.p1());
    w.key("inGroup").value(inResp.p1());
    w.key("outGroup").value(outResp.p1());
    w.endObject();
    csv += "rationalPosterior," + lab::formatDouble(rational.p1()) + "\n";
    csv += "inGroup," + lab::formatDouble(inResp.p1()) + "\n";
    csv += "outGroup," + lab::formatDouble(outResp.p1()) + "\n";
  }

  if (cfg.contains("threshold")) {
    const json& t = cfg.at("threshold");
    const lab::BinaryBelief prior(lab::jsonNumber(t, "prior"));
    const lab::BinaryBelief rationalPost(lab::jsonNumber(t, "rationalPost"));
    const lab::BinaryBelief hatPi(lab::jsonNumber(t, "hatPi"));
    const lab::BinaryBelief piS(lab::jsonNumber(t, "piS"));
    const int k = static_cast<int>(lab::jsonInt(t, "k"));
    const double chiStar = lab::backlashThreshold(prior, rationalPost, hatPi, piS, k);

    if (m.verify) {
      // Independent exponent-space solve of the same crossing.
      const double num = std::log(rationalPost.mass(k) / rationalPost.mass(1 - k)) -
                         std::log(prior.mass(k) / prior.mass(1 - k));
      const double den = std::log((piS.mass(k) / hatPi.mass(k)) *
                                  (hatPi.mass(1 - k) / piS.mass(1 - k)));
      const double a = num / den;
      const double closedForm = a / (1.0 + 2.0 * a);
      if (std::abs(chiStar - closedForm) > 1e-6) {
        std::cerr << "verify: threshold bisection " << chiStar << " vs closed form "
                  << closedForm << "\n";
        return kExitVerify;
      }
    }
    w.key("threshold").beginObject();
    w.key("chiStar").value(chiStar);
    w.endObject();
    csv += "chiStar," + lab::formatDouble(chiStar) + "\n";
  }

  w.endObject();
  if (m.format == "csv") {
    lab::writeTextFile(outPath(m, "identity.csv"), csv);
  } else {
    lab::writeTextFile(outPath(m, "identity.json"), w.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// election

int runElection(const RunManifest& m) {
  const json cfg = lab::loadJsonFile(m.configPath);
  lab::checkSchemaVersion(cfg);
  lab::ElectionConfig ec = lab::electionConfigFromJson(cfg);
  const lab::PartyUtility v = lab::partyUtilityFromJson(cfg);

  const lab::Message best = lab::optimalMessage(ec);
  std::pair<lab::BinaryBelief, lab::BinaryBelief> beliefs{ec.sp.belief, ec.sc.belief};
  bool beliefsFromMessage = false;
  if (lab::jsonBoolOr(cfg, "useOptimalMessage", false)) {
    beliefs = lab::propagandaBeliefs(best, ec);
    beliefsFromMessage = true;
    ec.sp.belief = beliefs.first;
    ec.sc.belief = beliefs.second;
  }

  const auto [qSP, qSC] = lab::equilibriumPlatforms(ec, beliefs, v);
  const double closed = lab::equilibriumPayoffClosedForm(qSP, qSC, ec.phi);
  const auto [va, vb] = lab::expectedPartyPayoff(qSP, qSC, ec, v);

  if (m.verify) {
    if (std::abs(va - closed) > 1e-9 * std::max(1.0, std::abs(closed)) ||
        std::abs(vb - closed) > 1e-9 * std::max(1.0, std::abs(closed))) {
      std::cerr << "verify: piecewise payoff (" << va << ", " << vb
                << ") disagrees with closed form " << closed << "\n";
      return kExitVerify;
    }
    const lab::GridSpec grid;
    const lab::Platform brSP = lab::bestResponseGrid(qSC, ec, v, grid);
    const lab::Platform brSC = lab::bestResponseGrid(qSP, ec, v, grid);
    const double stepX = (ec.sp.ideal - ec.sc.ideal + 2 * grid.margin) / (grid.pointsPerAxis - 1);
    const double stepY =
        (std::abs(ec.sp.belief.p1() - ec.sc.belief.p1()) + 2 * grid.margin) /
        (grid.pointsPerAxis - 1);
    if (std::abs(brSP.x - qSP.x) > stepX + 1e-12 || std::abs(brSP.y - qSP.y) > stepY + 1e-12 ||
        std::abs(brSC.x - qSC.x) > stepX + 1e-12 || std::abs(brSC.y - qSC.y) > stepY + 1e-12) {
      std::cerr << "verify: grid best response strays from the closed-form platforms\n";
      return kExitVerify;
    }
  }

  const std::string msgLabel =
      std::string(best.econ ? (*best.econ == lab::Stance::Stance1 ? "stance1" : "stance0")
                            : "none") +
      "+" + lab::tagName(best.cultural);

  if (m.format == "csv") {
    std::string csv = "quantity,value\n";
    csv += "optimalMessage," + lab::csvField(msgLabel) + "\n";
    csv += "beliefsFromMessage," + std::string(beliefsFromMessage ? "true" : "false") + "\n";
    csv += "nuSP," + lab::formatDouble(beliefs.first.p1()) + "\n";
    csv += "nuSC," + lab::formatDouble(beliefs.second.p1()) + "\n";
    csv += "qSP_x," + lab::formatDouble(qSP.x) + "\n";
    csv += "qSP_y," + lab::formatDouble(qSP.y) + "\n";
    csv += "qSC_x," + lab::formatDouble(qSC.x) + "\n";
    csv += "qSC_y," + lab::formatDouble(qSC.y) + "\n";
    csv += "payoffClosedForm," + lab::formatDouble(closed) + "\n";
    csv += "payoffA," + lab::formatDouble(va) + "\n";
    csv += "payoffB," + lab::formatDouble(vb) + "\n";
    lab::writeTextFile(outPath(m, "election.csv"), csv);
  } else {
    lab::JsonWriter w;
    w.beginObject();
    w.key("optimalMessage").value(msgLabel);
    w.key("beliefsFromMessage").value(beliefsFromMessage);
    w.key("nuSP").value(beliefs.first.p1());
    w.key("nuSC").value(beliefs.second.p1());
    w.key("qSP").beginObject();
    w.key("x").value(qSP.x);
    w.key("y").value(qSP.y);
    w.endObject();
    w.key("qSC").beginObject();
    w.key("x").value(qSC.x);
    w.key("y").value(qSC.y);
    w.endObject();
    w.key("payoffClosedForm").value(closed);
    w.key("payoffA").value(va);
    w.key("payoffB").value(vb);
    w.endObject();
    lab::writeTextFile(outPath(m, "election.json"), w.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// media

int runMedia(const RunManifest& m) {
  const json cfg = lab::loadJsonFile(m.configPath);
  lab::checkSchemaVersion(cfg);
  const lab::MediaConfig base = lab::mediaConfigFromJson(cfg);
  const bool sweep = lab::jsonBoolOr(cfg, "sweep", true);

  std::vector<lab::MediaConfig> points;
  if (sweep) {
    for (int dE = 0; dE <= base.issues - base.socialGaps; ++dE) {
      points.push_back(lab::MediaConfig::canonical(base.issues, base.socialGaps, dE,
                                                   base.priceHigh, base.priceLow,
                                                   base.misalignmentCost));
    }
  } else {
    points.push_back(base);
  }

  if (m.verify) {
    for (const lab::MediaConfig& p : points) {
      const lab::SpneOutcome outcome = lab::spneProfits(p);
      const lab::SlantPair segmented{p.xSP, p.xSC};
      const lab::PriceStageResult stage = lab::priceStageEquilibria(p, segmented);
      bool highHigh = false;
      for (const lab::PricePair& pp : stage.pure) {
        if (pp.a == lab::PriceLevel::High && pp.b == lab::PriceLevel::High) highHigh = true;
      }
      if ((outcome.regime == lab::PriceLevel::High) != highHigh) {
        std::cerr << "verify: regime at dE=" << p.economicGaps
                  << " disagrees with the price-stage oracle\n";
        return kExitVerify;
      }
      const lab::SlantPair identical{p.xSP, p.xSP};
      const lab::PriceStageResult same = lab::priceStageEquilibria(p, identical);
      if (same.pure.size() != 1 || same.pure[0].a != lab::PriceLevel::Low ||
          same.pure[0].b != lab::PriceLevel::Low) {
        std::cerr << "verify: identical slants must price low\n";
        return kExitVerify;
      }
    }
  }

  if (m.format == "csv") {
    std::string csv = "D_E,D,profitA,profitB,regime\n";
    for (const lab::MediaConfig& p : points) {
      const lab::SpneOutcome o = lab::spneProfits(p);
      csv += std::to_string(p.economicGaps) + "," + std::to_string(p.disagreements()) + "," +
             lab::formatDouble(o.profitA) + "," + lab::formatDouble(o.profitB) + "," +
             lab::priceLevelName(o.regime) + "\n";
    }
    lab::writeTextFile(outPath(m, "media.csv"), csv);
  } else {
    lab::JsonWriter w;
    w.beginObject();
    w.key("sweep").beginArray();
    for (const lab::MediaConfig& p : points) {
      const lab::SpneOutcome o = lab::spneProfits(p);
      w.beginObject();
      w.key("dE").value(p.economicGaps);
      w.key("D").value(p.disagreements());
      w.key("profitA").value(o.profitA);
      w.key("profitB").value(o.profitB);
      w.key("regime").value(lab::priceLevelName(o.regime));
      w.endObject();
    }
    w.endArray();
    w.endObject();
    lab::writeTextFile(outPath(m, "media.json"), w.str());
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

int runSimulate(const RunManifest& m) {
  const json cfg = lab::loadJsonFile(m.configPath);
  lab::checkSchemaVersion(cfg);
  const lab::SimConfig sim = lab::simConfigFromJson(cfg, m.seed);
  const lab::SimResult result = lab::runExperiment(sim);
  const std::vector<lab::ArmCorrelation> correlations = lab::armCorrelations(result);

  std::optional<lab::Estimate> gamma;
  if (sim.identity) {
    for (const lab::ArmSpec& arm : sim.arms) {
      if (arm.kind == lab::ArmKind::SeparateSources) {
        gamma = lab::separateSourcesContrast(sim);
        break;
      }
    }
  }

  if (m.verify) {
    for (const lab::ArmStats& arm : result.arms) {
      const double se =
          std::sqrt(arm.expectedShare * (1.0 - arm.expectedShare) / arm.n);
      if (std::abs(arm.share - arm.expectedShare) > 3.0 * se + 1e-15) {
        std::cerr << "verify: arm " << arm.spec.label() << " share " << arm.share
                  << " strays from expectation " << arm.expectedShare << "\n";
        return kExitVerify;
      }
    }
  }

  auto estimateRow = [](const lab::Estimate& e) {
    return lab::csvField(e.name) + "," + lab::formatDouble(e.value) + "," +
           lab::formatDouble(e.se) + "," + lab::formatDouble(e.z()) + "," +
           std::to_string(e.n1) + "," + std::to_string(e.n2) + "\n";
  };

  if (m.format == "csv") {
    std::string arms = "arm,n,share,expectedShare\n";
    for (const lab::ArmStats& a : result.arms) {
      arms += lab::csvField(a.spec.label()) + "," + std::to_string(a.n) + "," +
              lab::formatDouble(a.share) + "," + lab::formatDouble(a.expectedShare) + "\n";
    }
    lab::writeTextFile(outPath(m, "simulate_arms.csv"), arms);

    std::string est = "estimate,value,se,z,n1,n2\n";
    for (const lab::Estimate& e : result.estimates) est += estimateRow(e);
    for (const lab::Estimate& e : result.controlGaps) est += estimateRow(e);
    if (gamma) est += estimateRow(*gamma);
    lab::writeTextFile(outPath(m, "simulate_estimates.csv"), est);

    std::string corr = "arm,correlation,degenerate\n";
    for (const lab::ArmCorrelation& c : correlations) {
      corr += lab::csvField(c.arm) + "," +
              (c.degenerate ? "" : lab::formatDouble(c.value)) + "," +
              (c.degenerate ? "true" : "false") + "\n";
    }
    lab::writeTextFile(outPath(m, "simulate_correlations.csv"), corr);
  } else {
    lab::JsonWriter w;
    w.beginObject();
    w.key("arms").beginArray();
    for (const lab::ArmStats& a : result.arms) {
      w.beginObject();
      w.key("arm").value(a.spec.label());
      w.key("n").value(a.n);
      w.key("share").value(a.share);
      w.key("expectedShare").value(a.expectedShare);
      w.endObject();
    }
    w.endArray();
    w.key("estimates").beginArray();
    auto writeEstimate = [&w](const lab::Estimate& e) {
      w.beginObject();
      w.key("name").value(e.name);
      w.key("value").value(e.value);
      w.key("se").value(e.se);
      w.key("z").value(e.z());
      w.key("n1").value(e.n1);
      w.key("n2").value(e.n2);
      w.endObject();
    };
    for (const lab::Estimate& e : result.estimates) writeEstimate(e);
    for (const lab::Estimate& e : result.controlGaps) writeEstimate(e);
    if (gamma) writeEstimate(*gamma);
    w.endArray();
    w.key("correlations").beginArray();
    for (const lab::ArmCorrelation& c : correlations) {
      w.beginObject();
      w.key("arm").value(c.arm);
      if (c.degenerate) {
        w.key("degenerate").value(true);
      } else {
        w.key("correlation").value(c.value);
        w.key("degenerate").value(false);
      }
      w.endObject();
    }
    w.endArray();
    w.endObject();
    lab::writeTextFile(outPath(m, "simulate.json"), w.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"identity-driven persuasion toolkit"};
  app.require_subcommand(1);

  RunManifest m;
  auto addCommon = [&m](CLI::App* sub) {
    sub->add_option("--config", m.configPath, "JSON config file")->required();
    sub->add_option("--out", m.outDir, "output directory (created if absent)")->required();
    sub->add_option("--seed", m.seed, "override the config's RNG seed (nonzero)");
    sub->add_option("--format", m.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sub->add_flag("--verify", m.verify, "run oracle cross-checks; exit 4 on disagreement");
  };

  CLI::App* bayes = app.add_subcommand(
      "bayes", "joint-table receiver: classification, posteriors, spillover gaps");
  CLI::App* identity = app.add_subcommand(
      "identity", "belief distortion, response pipeline, backlash threshold");
  CLI::App* election = app.add_subcommand(
      "election", "platform equilibrium and optimal propaganda (CSV: quantity,value)");
  CLI::App* media = app.add_subcommand(
      "media", "price regime sweep (CSV columns: D_E,D,profitA,profitB,regime)");
  CLI::App* simulate = app.add_subcommand(
      "simulate",
      "population experiment (CSV: arm,n,share,expectedShare / estimate,value,se,z,n1,n2 / "
      "arm,correlation,degenerate)");
  for (CLI::App* sub : {bayes, identity, election, media, simulate}) addCommon(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    ensureOutDir(m);
    if (bayes->parsed()) return runBayes(m);
    if (identity->parsed()) return runIdentity(m);
    if (election->parsed()) return runElection(m);
    if (media->parsed()) return runMedia(m);
    if (simulate->parsed()) return runSimulate(m);
  } catch (const lab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const lab::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  }
  return kExitOk;
}
