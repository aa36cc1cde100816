#include "lab/sim.hpp"

#include <cmath>
#include <cstdio>

#include "lab/errors.hpp"
#include "lab/rng.hpp"

namespace lab {

namespace {

bool needsStance(ArmKind k) {
  return k == ArmKind::EconOnly || k == ArmKind::Bundled || k == ArmKind::SeparateSources;
}

bool needsCulture(ArmKind k) {
  return k == ArmKind::Bundled || k == ArmKind::CultureOnly || k == ArmKind::SeparateSources;
}

// Receiver-relative reading of the arm's cultural tag.
CulturalTag relativeTag(const ArmSpec& arm, bool isSP) {
  const bool matches = (arm.culture == CulturalTag::SP) == isSP;
  return matches ? CulturalTag::InGroup : CulturalTag::OutGroup;
}

Message messageFor(const SimConfig& cfg, const ArmSpec& arm, bool isSP) {
  const BinaryBelief payload =
      cfg.identity ? (arm.stance == Stance::Stance1 ? cfg.identity->piS1 : cfg.identity->piS0)
                   : BinaryBelief(0.5);
  switch (arm.kind) {
    case ArmKind::NoMessage:
      return Message::none();
    case ArmKind::EconOnly:
      return Message::econOnly(arm.stance);
    case ArmKind::Bundled:
      return Message::bundled(arm.stance, payload, relativeTag(arm, isSP));
    case ArmKind::CultureOnly:
      return Message::cultureOnly(relativeTag(arm, isSP));
    case ArmKind::SeparateSources:
      return Message::bundled(arm.stance, payload, relativeTag(arm, isSP), /*sameSource=*/false);
  }
  throw DomainError(errc::InvalidConfig, "unknown arm kind");
}

Evidence evidenceFor(const ArmSpec& arm, bool isSP) {
  switch (arm.kind) {
    case ArmKind::NoMessage:
      return Evidence::nothing();
    case ArmKind::EconOnly:
    case ArmKind::SeparateSources:
      // A culturally unrelated second source says nothing about this
      // sender's type, so only the stance enters the joint table.
      return Evidence::stance(arm.stance);
    case ArmKind::Bundled:
      return Evidence::stanceAndType(arm.stance, relativeTag(arm, isSP));
    case ArmKind::CultureOnly:
      return Evidence{std::nullopt, relativeTag(arm, isSP)};
  }
  throw DomainError(errc::InvalidConfig, "unknown arm kind");
}

struct Cell {
  int n = 0;
  int support = 0;

  double share() const { return n > 0 ? static_cast<double>(support) / n : 0.0; }
};

Estimate difference(const std::string& name, const Cell& lhs, const Cell& rhs) {
  Estimate e;
  e.name = name;
  const double p1 = lhs.share();
  const double p2 = rhs.share();
  e.value = p1 - p2;
  e.n1 = lhs.n;
  e.n2 = rhs.n;
  e.se = std::sqrt(p1 * (1.0 - p1) / lhs.n + p2 * (1.0 - p2) / rhs.n);
  return e;
}

}  // namespace

const char* armKindName(ArmKind k) noexcept {
  switch (k) {
    case ArmKind::NoMessage:
      return "NoMessage";
    case ArmKind::EconOnly:
      return "EconOnly";
    case ArmKind::Bundled:
      return "Bundled";
    case ArmKind::CultureOnly:
      return "CultureOnly";
    case ArmKind::SeparateSources:
      return "SeparateSources";
  }
  return "?";
}

std::string ArmSpec::label() const {
  std::string s = armKindName(kind);
  if (needsStance(kind)) {
    s += stance == Stance::Stance1 ? "(pro" : "(anti";
    if (needsCulture(kind)) {
      s += std::string(",") + tagName(culture);
    }
    s += ")";
  } else if (needsCulture(kind)) {
    s += std::string("(") + tagName(culture) + ")";
  }
  return s;
}

void ArmSpec::validate() const {
  if (needsCulture(kind)) {
    if (culture != CulturalTag::SP && culture != CulturalTag::SC) {
      throw DomainError(errc::InvalidConfig,
                        std::string(armKindName(kind)) + " arm needs an SP or SC tag");
    }
  } else if (culture != CulturalTag::None) {
    throw DomainError(errc::InvalidConfig,
                      std::string(armKindName(kind)) + " arm cannot carry a cultural tag");
  }
}

void PopulationSpec::validate() const {
  if (!std::isfinite(shareSP) || shareSP < 0.0 || shareSP > 1.0) {
    throw DomainError(errc::InvalidProbability, "shareSP must lie in [0,1]");
  }
  prior.requireFullSupport("PopulationSpec.prior");
  hatPi.requireFullSupport("PopulationSpec.hatPi");
  if (!std::isfinite(chiThreat) || chiThreat < 0.0 || chiThreat > 0.499) {
    throw DomainError(errc::ChiOutOfRange, "chiThreat outside [0, 0.499]");
  }
  if (!std::isfinite(noiseScale) || noiseScale <= 0.0) {
    throw DomainError(errc::NonPositiveScale, "noiseScale must be positive");
  }
}

void SimConfig::validate() const {
  if (nPerArm < 100) {
    throw DomainError(errc::InvalidConfig, "nPerArm must be at least 100");
  }
  if (arms.empty()) {
    throw DomainError(errc::InvalidConfig, "at least one arm is required");
  }
  if (identity.has_value() == bayesian.has_value()) {
    throw DomainError(errc::InvalidConfig, "exactly one updating engine must be configured");
  }
  population.validate();
  if (identity) {
    identity->signal.validate();
    identity->piS1.requireFullSupport("IdentityEngineSpec.piS1");
    identity->piS0.requireFullSupport("IdentityEngineSpec.piS0");
  }
  for (const ArmSpec& arm : arms) arm.validate();
}

BinaryBelief engineBelief(const SimConfig& cfg, const ArmSpec& arm, bool isSP) {
  if (cfg.identity) {
    return receiverResponse(cfg.population.prior, cfg.population.hatPi, cfg.identity->signal,
                            {0.0, cfg.population.chiThreat}, messageFor(cfg, arm, isSP));
  }
  return posterior(*cfg.bayesian, evidenceFor(arm, isSP));
}

double closedFormShare(const SimConfig& cfg, const ArmSpec& arm) {
  const double pSP =
      choiceProbability(engineBelief(cfg, arm, /*isSP=*/true), cfg.population.noiseScale);
  const double pSC =
      choiceProbability(engineBelief(cfg, arm, /*isSP=*/false), cfg.population.noiseScale);
  return cfg.population.shareSP * pSP + (1.0 - cfg.population.shareSP) * pSC;
}

SimResult runExperiment(const SimConfig& cfg) {
  cfg.validate();
  SimResult result;
  result.records.reserve(static_cast<std::size_t>(cfg.nPerArm) * cfg.arms.size());

  // Pooled cells for the estimands: [stance][aligned] over bundle arms.
  Cell bundle[2][2];
  Cell econ[2];  // untagged economic arms by stance
  Cell control;
  bool haveEcon[2] = {false, false};
  bool haveControl = false;

  for (std::size_t a = 0; a < cfg.arms.size(); ++a) {
    const ArmSpec& arm = cfg.arms[a];

    // The belief depends only on the group, so resolve both variants once.
    const double pSupport[2] = {
        choiceProbability(engineBelief(cfg, arm, false), cfg.population.noiseScale),
        choiceProbability(engineBelief(cfg, arm, true), cfg.population.noiseScale)};

    ArmStats stats;
    stats.spec = arm;
    stats.n = cfg.nPerArm;
    stats.expectedShare = closedFormShare(cfg, arm);

    int supports = 0;
    for (int i = 0; i < cfg.nPerArm; ++i) {
      RngStream agentRng(cfg.seed,
                         (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(i));
      const bool isSP = agentRng.bernoulli(cfg.population.shareSP);
      const bool support = agentRng.bernoulli(pSupport[isSP ? 1 : 0]);
      supports += support ? 1 : 0;

      AgentRecord rec;
      rec.arm = static_cast<int>(a);
      rec.isSP = isSP;
      rec.aligned = needsCulture(arm.kind) && (arm.culture == CulturalTag::SP) == isSP;
      rec.support = support;
      result.records.push_back(rec);

      const int s = stanceIndex(arm.stance);
      if (arm.kind == ArmKind::Bundled) {
        Cell& cell = bundle[s][rec.aligned ? 1 : 0];
        cell.n += 1;
        cell.support += support ? 1 : 0;
      } else if (arm.kind == ArmKind::EconOnly) {
        econ[s].n += 1;
        econ[s].support += support ? 1 : 0;
        haveEcon[s] = true;
      } else if (arm.kind == ArmKind::NoMessage) {
        control.n += 1;
        control.support += support ? 1 : 0;
        haveControl = true;
      }
    }
    stats.share = static_cast<double>(supports) / cfg.nPerArm;
    result.arms.push_back(stats);
  }

  const int pro = stanceIndex(Stance::Stance1);
  const int anti = stanceIndex(Stance::Stance0);
  if (haveEcon[pro]) {
    if (bundle[pro][1].n > 0) {
      result.estimates.push_back(difference("beta1", bundle[pro][1], econ[pro]));
    }
    if (bundle[pro][0].n > 0) {
      result.estimates.push_back(difference("beta2", bundle[pro][0], econ[pro]));
    }
  }
  if (haveEcon[anti]) {
    if (bundle[anti][1].n > 0) {
      result.estimates.push_back(difference("delta1", bundle[anti][1], econ[anti]));
    }
    if (bundle[anti][0].n > 0) {
      result.estimates.push_back(difference("delta2", bundle[anti][0], econ[anti]));
    }
  }
  if (haveControl) {
    const char* names[2][2] = {{"antiMisalignedVsControl", "antiAlignedVsControl"},
                               {"proMisalignedVsControl", "proAlignedVsControl"}};
    for (int s = 0; s < 2; ++s) {
      for (int al = 0; al < 2; ++al) {
        if (bundle[s][al].n > 0) {
          result.controlGaps.push_back(difference(names[s][al], bundle[s][al], control));
        }
      }
    }
  }
  return result;
}

std::vector<ArmCorrelation> armCorrelations(const SimResult& result) {
  std::vector<ArmCorrelation> out;
  for (std::size_t a = 0; a < result.arms.size(); ++a) {
    std::vector<double> group;
    std::vector<double> support;
    for (const AgentRecord& rec : result.records) {
      if (rec.arm != static_cast<int>(a)) continue;
      group.push_back(rec.isSP ? 1.0 : 0.0);
      support.push_back(rec.support ? 1.0 : 0.0);
    }
    ArmCorrelation corr;
    corr.arm = result.arms[a].spec.label();
    try {
      corr.value = pearson(group, support);
    } catch (const DomainError&) {
      corr.degenerate = true;
    }
    out.push_back(corr);
  }
  return out;
}

Estimate separateSourcesContrast(const SimConfig& cfg) {
  cfg.validate();
  if (!cfg.identity) {
    throw DomainError(errc::InvalidConfig, "the contrast is defined for the identity engine");
  }
  std::optional<Stance> stance;
  for (const ArmSpec& arm : cfg.arms) {
    if (arm.kind == ArmKind::SeparateSources) {
      stance = arm.stance;
      break;
    }
  }
  if (!stance) {
    throw DomainError(errc::InvalidConfig, "no separate-sources arm configured");
  }

  const SimResult result = runExperiment(cfg);
  Cell separate;
  Cell econ;
  for (const AgentRecord& rec : result.records) {
    const ArmSpec& arm = cfg.arms[static_cast<std::size_t>(rec.arm)];
    if (arm.kind == ArmKind::SeparateSources && arm.stance == *stance && !rec.aligned) {
      separate.n += 1;
      separate.support += rec.support ? 1 : 0;
    } else if (arm.kind == ArmKind::EconOnly && arm.stance == *stance) {
      econ.n += 1;
      econ.support += rec.support ? 1 : 0;
    }
  }
  if (separate.n == 0 || econ.n == 0) {
    throw DomainError(errc::InvalidConfig,
                      "need both a separate-sources arm and a matching economic arm");
  }
  return difference("gamma", separate, econ);
}

}  // namespace lab
