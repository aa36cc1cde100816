#pragma once
// Two-outlet media market over K binary issues.
//
// Consumers come in two unit-mass groups (SP and SC) whose issue positions
// differ on S social and dE economic issues.  Outlets pick slants in
// [0,1]^K, then one of two prices; a consumer subscribes to whichever outlet
// minimizes price plus a quadratic misalignment cost, splitting on exact
// ties.  With segmented slants the price stage turns into a 2x2 game whose
// equilibrium prices flip from low to high once the groups disagree on
// enough issues.

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace lab {

struct MediaConfig {
  int issues = 2;          // K > 1
  int socialGaps = 1;      // S, 0 < S < K
  int economicGaps = 0;    // dE, 0 <= dE <= K - S
  std::vector<double> xSP; // group positions, entries in {0,1}
  std::vector<double> xSC; // Hamming(xSP, xSC) must equal S + dE
  double priceHigh = 1.4;
  double priceLow = 1.0;   // 0 < pL < pH < 1.5*pL
  double misalignmentCost = 0.1;  // c > 0

  // Positions with the canonical layout: both groups at 0 everywhere except
  // the first S + dE issues, where SP sits at 1.
  static MediaConfig canonical(int issues, int socialGaps, int economicGaps, double priceHigh,
                               double priceLow, double misalignmentCost);

  int disagreements() const noexcept { return socialGaps + economicGaps; }

  // errors: InvalidConfig on any violated field constraint (including the
  // undercutting condition pH < 1.5*pL and the Hamming consistency check).
  void validate() const;
};

struct SlantPair {
  std::vector<double> bA;
  std::vector<double> bB;
};

enum class Choice { A, B, Split };

const char* choiceName(Choice c) noexcept;

// Subscription choice of a consumer at position x: the outlet with the
// smaller total cost p_m + c * ||x - b_m||^2, Split on exact equality.
//   errors: DimensionMismatch.
Choice consumerChoice(std::span<const double> x, std::span<const double> bA,
                      std::span<const double> bB, double pA, double pB, double c);

// Group-unit profits (pA * subscribersA, pB * subscribersB); a split group
// contributes one half to each outlet.  Prices must be cfg.priceLow or
// cfg.priceHigh.
std::pair<double, double> profits(const MediaConfig& cfg, const SlantPair& slants, double pA,
                                  double pB);

enum class PriceLevel { Low, High };

const char* priceLevelName(PriceLevel p) noexcept;

struct PricePair {
  PriceLevel a;
  PriceLevel b;
};

struct MixedPriceEquilibrium {
  double probLowA;  // probability A charges the low price
  double probLowB;
  double valueA;    // expected profits at the mixed profile
  double valueB;
};

struct PriceStageResult {
  // Payoffs of the 2x2 price game, indexed [A's price][B's price] with
  // 0 = Low, 1 = High.
  double payoffA[2][2];
  double payoffB[2][2];
  std::vector<PricePair> pure;              // all pure Nash equilibria
  std::optional<MixedPriceEquilibrium> mixed;  // present iff pure is empty
};

// Full solution of the price stage at fixed slants.
PriceStageResult priceStageEquilibria(const MediaConfig& cfg, const SlantPair& slants);

struct SpneOutcome {
  double profitA;
  double profitB;
  PriceLevel regime;
};

// Equilibrium-path profits of the slant-then-price game: both outlets earn
// the high price iff c * (S + dE) exceeds pH - pL (ties resolve to Low).
SpneOutcome spneProfits(const MediaConfig& cfg);

}  // namespace lab
