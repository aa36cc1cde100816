#include "lab/media.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "lab/errors.hpp"

namespace lab {

namespace {

// Exact-tie detection below feeds the undercutting logic, so the squared
// distance must be accumulated without fused contractions (see the build
// flags) and in index order.
double squaredDistance(std::span<const double> x, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - b[k];
    sum += d * d;
  }
  return sum;
}

double addShare(Choice c, Choice target) {
  if (c == Choice::Split) return 0.5;
  return c == target ? 1.0 : 0.0;
}

}  // namespace

const char* choiceName(Choice c) noexcept {
  switch (c) {
    case Choice::A:
      return "A";
    case Choice::B:
      return "B";
    case Choice::Split:
      return "Split";
  }
  return "?";
}

const char* priceLevelName(PriceLevel p) noexcept {
  return p == PriceLevel::Low ? "Low" : "High";
}

MediaConfig MediaConfig::canonical(int issues, int socialGaps, int economicGaps, double priceHigh,
                                   double priceLow, double misalignmentCost) {
  MediaConfig cfg;
  cfg.issues = issues;
  cfg.socialGaps = socialGaps;
  cfg.economicGaps = economicGaps;
  cfg.priceHigh = priceHigh;
  cfg.priceLow = priceLow;
  cfg.misalignmentCost = misalignmentCost;
  cfg.xSP.assign(static_cast<std::size_t>(issues > 0 ? issues : 0), 0.0);
  cfg.xSC = cfg.xSP;
  for (int k = 0; k < socialGaps + economicGaps && k < issues; ++k) {
    cfg.xSP[static_cast<std::size_t>(k)] = 1.0;
  }
  cfg.validate();
  return cfg;
}

void MediaConfig::validate() const {
  if (issues <= 1) {
    throw DomainError(errc::InvalidConfig, "issue count must exceed 1");
  }
  if (socialGaps <= 0 || socialGaps >= issues) {
    throw DomainError(errc::InvalidConfig, "social disagreements must lie strictly between 0 and K");
  }
  if (economicGaps < 0 || economicGaps > issues - socialGaps) {
    throw DomainError(errc::InvalidConfig, "economic disagreements must lie in [0, K - S]");
  }
  if (xSP.size() != static_cast<std::size_t>(issues) ||
      xSC.size() != static_cast<std::size_t>(issues)) {
    throw DomainError(errc::DimensionMismatch, "group positions must have K entries");
  }
  int hamming = 0;
  for (std::size_t k = 0; k < xSP.size(); ++k) {
    if ((xSP[k] != 0.0 && xSP[k] != 1.0) || (xSC[k] != 0.0 && xSC[k] != 1.0)) {
      throw DomainError(errc::InvalidConfig, "group positions must be 0/1 on every issue");
    }
    hamming += xSP[k] != xSC[k] ? 1 : 0;
  }
  if (hamming != disagreements()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "positions disagree on %d issues, expected S + dE = %d",
                  hamming, disagreements());
    throw DomainError(errc::InvalidConfig, buf);
  }
  if (!std::isfinite(priceLow) || !std::isfinite(priceHigh) || priceLow <= 0.0 ||
      priceHigh <= priceLow || priceHigh >= 1.5 * priceLow) {
    throw DomainError(errc::InvalidConfig, "prices must satisfy 0 < pL < pH < 1.5*pL");
  }
  if (!std::isfinite(misalignmentCost) || misalignmentCost <= 0.0) {
    throw DomainError(errc::InvalidConfig, "misalignment cost must be positive");
  }
}

Choice consumerChoice(std::span<const double> x, std::span<const double> bA,
                      std::span<const double> bB, double pA, double pB, double c) {
  if (x.size() != bA.size() || x.size() != bB.size()) {
    throw DomainError(errc::DimensionMismatch, "position/slant dimensions differ");
  }
  const double costA = pA + c * squaredDistance(x, bA);
  const double costB = pB + c * squaredDistance(x, bB);
  if (costA < costB) return Choice::A;
  if (costB < costA) return Choice::B;
  return Choice::Split;
}

std::pair<double, double> profits(const MediaConfig& cfg, const SlantPair& slants, double pA,
                                  double pB) {
  cfg.validate();
  for (double p : {pA, pB}) {
    if (p != cfg.priceLow && p != cfg.priceHigh) {
      throw DomainError(errc::InvalidConfig, "prices must be either the low or the high level");
    }
  }
  const double c = cfg.misalignmentCost;
  const Choice sp = consumerChoice(cfg.xSP, slants.bA, slants.bB, pA, pB, c);
  const Choice sc = consumerChoice(cfg.xSC, slants.bA, slants.bB, pA, pB, c);
  const double nA = addShare(sp, Choice::A) + addShare(sc, Choice::A);
  const double nB = addShare(sp, Choice::B) + addShare(sc, Choice::B);
  return {pA * nA, pB * nB};
}

PriceStageResult priceStageEquilibria(const MediaConfig& cfg, const SlantPair& slants) {
  PriceStageResult r{};
  const double level[2] = {cfg.priceLow, cfg.priceHigh};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const auto [profitA, profitB] = profits(cfg, slants, level[a], level[b]);
      r.payoffA[a][b] = profitA;
      r.payoffB[a][b] = profitB;
    }
  }

  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const bool aBest = r.payoffA[a][b] >= r.payoffA[1 - a][b];
      const bool bBest = r.payoffB[a][b] >= r.payoffB[a][1 - b];
      if (aBest && bBest) {
        r.pure.push_back({a == 0 ? PriceLevel::Low : PriceLevel::High,
                          b == 0 ? PriceLevel::Low : PriceLevel::High});
      }
    }
  }

  if (r.pure.empty()) {
    // Indifference conditions of the 2x2 game.  A mixes so that B's two
    // prices earn the same; the absence of a pure equilibrium guarantees the
    // denominators are nonzero and the probabilities interior.
    const double denomB =
        (r.payoffB[0][0] - r.payoffB[0][1]) - (r.payoffB[1][0] - r.payoffB[1][1]);
    const double denomA =
        (r.payoffA[0][0] - r.payoffA[1][0]) - (r.payoffA[0][1] - r.payoffA[1][1]);
    if (denomB == 0.0 || denomA == 0.0) {
      throw DomainError(errc::InvalidConfig, "degenerate price game without equilibrium");
    }
    MixedPriceEquilibrium mixed{};
    mixed.probLowA = (r.payoffB[1][1] - r.payoffB[1][0]) / denomB;
    mixed.probLowB = (r.payoffA[1][1] - r.payoffA[0][1]) / denomA;
    const double qa = mixed.probLowA;
    const double qb = mixed.probLowB;
    mixed.valueA = qb * (qa * r.payoffA[0][0] + (1 - qa) * r.payoffA[1][0]) +
                   (1 - qb) * (qa * r.payoffA[0][1] + (1 - qa) * r.payoffA[1][1]);
    mixed.valueB = qa * (qb * r.payoffB[0][0] + (1 - qb) * r.payoffB[0][1]) +
                   (1 - qa) * (qb * r.payoffB[1][0] + (1 - qb) * r.payoffB[1][1]);
    r.mixed = mixed;
  }
  return r;
}

SpneOutcome spneProfits(const MediaConfig& cfg) {
  cfg.validate();
  const double margin =
      cfg.misalignmentCost * cfg.disagreements() - (cfg.priceHigh - cfg.priceLow);
  // At an exact tie, undercutting still pays (the split half-market at the
  // low price beats the full high price since pH < 1.5*pL), so the high
  // regime needs a strictly positive margin; 1e-12 absorbs rounding in
  // c * D - (pH - pL).
  if (margin > 1e-12) {
    return {cfg.priceHigh, cfg.priceHigh, PriceLevel::High};
  }
  return {cfg.priceLow, cfg.priceLow, PriceLevel::Low};
}

}  // namespace lab
