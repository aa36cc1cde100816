#include "lab/mental_model.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "lab/errors.hpp"

namespace lab {

namespace {

constexpr double kMassTol = 1e-9;

// th index for a receiver-relative tag: InGroup -> aligned (0),
// OutGroup -> misaligned (1).
int thetaIndex(CulturalTag tag) {
  switch (tag) {
    case CulturalTag::InGroup:
      return 0;
    case CulturalTag::OutGroup:
      return 1;
    default:
      throw DomainError(errc::WrongTagDomain,
                        std::string("expected a receiver-relative tag, got ") + tagName(tag));
  }
}

}  // namespace

double ExtendedReal::value() const {
  if (infinite_) {
    throw DomainError(errc::NonFinite, "extended real is infinite");
  }
  return value_;
}

const char* trustClassName(TrustClass c) noexcept {
  switch (c) {
    case TrustClass::CompetenceBased:
      return "CompetenceBased";
    case TrustClass::PreferenceBased:
      return "PreferenceBased";
    case TrustClass::Neither:
      return "Neither";
  }
  return "?";
}

MentalModel MentalModel::fromTable(const std::array<double, kCells>& cells) {
  KahanSum total;
  for (int i = 0; i < kCells; ++i) {
    const double v = cells[i];
    if (!std::isfinite(v)) {
      throw DomainError(errc::NonFinite, "joint table cell " + std::to_string(i));
    }
    if (v < 0.0) {
      throw DomainError(errc::InvalidProbability,
                        "joint table cell " + std::to_string(i) + " is negative");
    }
    total.add(v);
  }
  const double mass = total.value();
  if (mass <= 0.0 || std::abs(mass - 1.0) > kMassTol) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "joint table mass %.12g", mass);
    throw DomainError(errc::ZeroMass, buf);
  }

  std::array<double, kCells> norm = cells;
  for (double& v : norm) v /= mass;

  // Every (y, wR, th) combination must be possible, else some conditioning
  // event downstream has zero mass.
  for (int y = 0; y < 2; ++y) {
    for (int th = 0; th < 2; ++th) {
      for (int wR = 0; wR < 2; ++wR) {
        const double m = norm[cellIndex(y, th, 0, wR)] + norm[cellIndex(y, th, 1, wR)];
        if (m <= 0.0) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "marginal P(y=%d, th=%d, wR=%d) = 0", y, th, wR);
          throw DomainError(errc::ZeroMass, buf);
        }
      }
    }
  }

  // th must be independent of wR: P(th=A, wR=1) == P(th=A) P(wR=1).
  double pA = 0.0, pR1 = 0.0, pAR1 = 0.0;
  for (int y = 0; y < 2; ++y) {
    for (int th = 0; th < 2; ++th) {
      for (int wS = 0; wS < 2; ++wS) {
        for (int wR = 0; wR < 2; ++wR) {
          const double v = norm[cellIndex(y, th, wS, wR)];
          if (th == 0) pA += v;
          if (wR == 1) pR1 += v;
          if (th == 0 && wR == 1) pAR1 += v;
        }
      }
    }
  }
  if (std::abs(pAR1 - pA * pR1) > kMassTol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "type/receiver-state dependence %.3e", pAR1 - pA * pR1);
    throw DomainError(errc::InvalidConfig, buf);
  }

  return MentalModel(norm);
}

MentalModel MentalModel::fromConditionals(const Conditionals& c) {
  auto checkProb = [](double p, const char* what) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      throw DomainError(errc::InvalidProbability, what);
    }
  };
  checkProb(c.pA, "pA");
  checkProb(c.priorR, "priorR");
  for (int th = 0; th < 2; ++th) {
    for (int j = 0; j < 2; ++j) {
      checkProb(c.pS1given[th][j], "pS1given");
      checkProb(c.pY1given[th][j], "pY1given");
    }
  }

  std::array<double, kCells> cells{};
  for (int y = 0; y < 2; ++y) {
    for (int th = 0; th < 2; ++th) {
      for (int wS = 0; wS < 2; ++wS) {
        for (int wR = 0; wR < 2; ++wR) {
          const double pTh = th == 0 ? c.pA : 1.0 - c.pA;
          const double pWR = wR == 1 ? c.priorR : 1.0 - c.priorR;
          const double pWS = wS == 1 ? c.pS1given[th][wR] : 1.0 - c.pS1given[th][wR];
          const double pY = y == 1 ? c.pY1given[th][wS] : 1.0 - c.pY1given[th][wS];
          cells[cellIndex(y, th, wS, wR)] = pTh * pWR * pWS * pY;
        }
      }
    }
  }
  return fromTable(cells);
}

ExtendedReal informativeness(const MentalModel& model, Stance y, CulturalTag theta) {
  const int yk = stanceIndex(y);
  const int th = thetaIndex(theta);

  // P(y = y_k | wS, th) for wS = y_k (match) and wS = 1 - y_k (mismatch).
  double joint[2];   // joint[wS match? 1 : 0] = P(y_k, wS, th)
  double margin[2];  // margin[...] = P(wS, th)
  for (int match = 0; match < 2; ++match) {
    const int wS = match ? yk : 1 - yk;
    margin[match] = 0.0;
    joint[match] = 0.0;
    for (int wR = 0; wR < 2; ++wR) {
      for (int yy = 0; yy < 2; ++yy) {
        margin[match] += model.cell(yy, th, wS, wR);
      }
      joint[match] += model.cell(yk, th, wS, wR);
    }
    if (margin[match] <= 0.0) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "P(wS=%d, th=%d) = 0", wS, th);
      throw DomainError(errc::UndefinedConditional, buf);
    }
  }

  const double num = joint[1] / margin[1];
  const double den = joint[0] / margin[0];
  if (den == 0.0) return ExtendedReal::infinity();
  return ExtendedReal::finite(num / den);
}

double goalAlignment(const MentalModel& model, int omegaR, CulturalTag theta) {
  if (omegaR != 0 && omegaR != 1) {
    throw DomainError(errc::InvalidConfig, "omegaR must be 0 or 1");
  }
  const int th = thetaIndex(theta);
  double joint = 0.0, margin = 0.0;
  for (int y = 0; y < 2; ++y) {
    for (int wS = 0; wS < 2; ++wS) {
      const double v = model.cell(y, th, wS, omegaR);
      margin += v;
      if (wS == omegaR) joint += v;
    }
  }
  if (margin <= 0.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "P(wR=%d, th=%d) = 0", omegaR, th);
    throw DomainError(errc::UndefinedConditional, buf);
  }
  return joint / margin;
}

TrustClass classify(const MentalModel& model, double tol) {
  double g[2][2];  // [th][wR]
  ExtendedReal info[2][2] = {{ExtendedReal::finite(0), ExtendedReal::finite(0)},
                             {ExtendedReal::finite(0), ExtendedReal::finite(0)}};
  const CulturalTag tags[2] = {CulturalTag::InGroup, CulturalTag::OutGroup};
  try {
    for (int th = 0; th < 2; ++th) {
      for (int k = 0; k < 2; ++k) {
        g[th][k] = goalAlignment(model, k, tags[th]);
        info[th][k] = informativeness(model, k == 0 ? Stance::Stance0 : Stance::Stance1, tags[th]);
      }
    }
  } catch (const DomainError& e) {
    if (e.code() == errc::UndefinedConditional) return TrustClass::Neither;
    throw;
  }

  const bool perfectlyAligned = std::abs(g[0][0] - 1.0) <= tol && std::abs(g[0][1] - 1.0) <= tol &&
                                std::abs(g[1][0] - 1.0) <= tol && std::abs(g[1][1] - 1.0) <= tol;
  const bool alignedMoreInformative =
      info[0][0] > info[1][0] && info[0][1] > info[1][1];
  if (perfectlyAligned && alignedMoreInformative) return TrustClass::CompetenceBased;

  const bool allPerfectlyInformative =
      info[0][0].isInfinite() && info[0][1].isInfinite() &&
      info[1][0].isInfinite() && info[1][1].isInfinite();
  const bool alignedBetterAligned = g[0][0] > g[1][0] && g[0][1] > g[1][1];
  if (allPerfectlyInformative && alignedBetterAligned) return TrustClass::PreferenceBased;

  return TrustClass::Neither;
}

BinaryBelief posterior(const MentalModel& model, const Evidence& evidence) {
  const int yWant = evidence.y ? stanceIndex(*evidence.y) : -1;
  const int thWant = evidence.theta ? thetaIndex(*evidence.theta) : -1;

  double w[2] = {0.0, 0.0};  // mass of wR = 0 / 1 consistent with evidence
  for (int y = 0; y < 2; ++y) {
    if (yWant >= 0 && y != yWant) continue;
    for (int th = 0; th < 2; ++th) {
      if (thWant >= 0 && th != thWant) continue;
      for (int wS = 0; wS < 2; ++wS) {
        for (int wR = 0; wR < 2; ++wR) {
          w[wR] += model.cell(y, th, wS, wR);
        }
      }
    }
  }
  if (w[0] + w[1] <= 0.0) {
    throw DomainError(errc::ZeroProbabilityEvidence, "conditioning event has zero mass");
  }
  return normalize(w[1], w[0]);
}

SpilloverGaps spilloverGaps(const MentalModel& model, Stance y) {
  const int k = stanceIndex(y);
  const double base = posterior(model, Evidence::stance(y)).mass(k);
  const double agree = posterior(model, Evidence::stanceAndType(y, CulturalTag::InGroup)).mass(k);
  const double disagree =
      posterior(model, Evidence::stanceAndType(y, CulturalTag::OutGroup)).mass(k);
  return SpilloverGaps{agree - base, disagree - base};
}

bool backlashPredicate(const MentalModel& model, Stance y, CulturalTag theta) {
  if (classify(model) != TrustClass::PreferenceBased) {
    throw DomainError(errc::WrongTrustClass, "backlash is defined for preference-based models");
  }
  const int k = stanceIndex(y);
  const double gk = goalAlignment(model, k, theta);
  const double gOther = goalAlignment(model, 1 - k, theta);
  return gk < 1.0 - gOther;
}

MentalModel sampleModel(TrustClass cls, RngStream& rng) {
  MentalModel::Conditionals c{};
  c.pA = rng.uniform(0.1, 0.9);
  c.priorR = rng.uniform(0.1, 0.9);

  if (cls == TrustClass::CompetenceBased) {
    // Goal alignment identically 1: the sender state tracks the receiver
    // state exactly for both types.  Informativeness then reduces to the
    // stance channel; draw the misaligned type's stance accuracy first and
    // give the aligned type a strictly larger one (margin 0.02), keeping
    // both above 1/2 so informativeness stays >= 1 for the aligned type.
    for (int th = 0; th < 2; ++th) {
      c.pS1given[th][0] = 0.0;
      c.pS1given[th][1] = 1.0;
    }
    const double accM = rng.uniform(0.55, 0.93);
    const double accA = rng.uniform(accM + 0.02, 0.98);
    c.pY1given[0][1] = accA;
    c.pY1given[0][0] = 1.0 - accA;
    c.pY1given[1][1] = accM;
    c.pY1given[1][0] = 1.0 - accM;
  } else if (cls == TrustClass::PreferenceBased) {
    // Both types perfectly informed: stance equals sender state.  Trust
    // differences live entirely in the wS | wR, th channel; the aligned
    // type's match probability strictly exceeds the misaligned one's.
    for (int th = 0; th < 2; ++th) {
      c.pY1given[th][0] = 0.0;
      c.pY1given[th][1] = 1.0;
    }
    const double gM = rng.uniform(0.05, 0.9);
    const double gA = rng.uniform(gM + 0.02, 0.97);
    c.pS1given[0][1] = gA;
    c.pS1given[0][0] = 1.0 - gA;
    c.pS1given[1][1] = gM;
    c.pS1given[1][0] = 1.0 - gM;
  } else {
    throw DomainError(errc::WrongTrustClass, "cannot sample the Neither class");
  }

  return MentalModel::fromConditionals(c);
}

double choiceProbability(const BinaryBelief& belief, double noiseScale) {
  if (!std::isfinite(noiseScale) || noiseScale <= 0.0) {
    throw DomainError(errc::NonPositiveScale, "noiseScale must be positive");
  }
  const double z = (2.0 * belief.p1() - 1.0) / noiseScale;
  // Logistic CDF, evaluated stably for large |z|.
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace lab
