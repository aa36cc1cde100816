#pragma once
// Trust-based Bayesian receiver.
//
// A receiver holds a joint "mental model" over
//   y  : the sender's expressed economic stance        {y0, y1}
//   th : the sender's cultural type                    {A (aligned), M (misaligned)}
//   wS : the state the sender cares about              {wS0, wS1}
//   wR : the state the receiver cares about            {wR0, wR1}
// and reacts to an observed stance (optionally together with the sender's
// cultural type) by exact conditioning.  The informativeness ratio and the
// goal-alignment functional are derived from the table on demand, never
// stored, so they cannot go stale.

#include <array>
#include <optional>

#include "lab/belief.hpp"
#include "lab/rng.hpp"

namespace lab {

// Value of the informativeness ratio: a nonnegative real or +infinity (the
// convention when the denominator vanishes).  Kept as a tagged value rather
// than a float infinity so comparisons stay total and no inf/inf NaNs appear.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) noexcept { return ExtendedReal(v, false); }
  static ExtendedReal infinity() noexcept { return ExtendedReal(0.0, true); }

  bool isInfinite() const noexcept { return infinite_; }

  // Finite value; calling this on infinity is a bug, guarded by DomainError.
  double value() const;

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) noexcept {
    return b < a;
  }

 private:
  ExtendedReal(double v, bool inf) noexcept : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

enum class TrustClass { CompetenceBased, PreferenceBased, Neither };

const char* trustClassName(TrustClass c) noexcept;

// Cell order of the flat table: y-major, then th, wS, wR, i.e.
// index = 8*y + 4*th + 2*wS + wR, with th: 0 = A (aligned), 1 = M.
class MentalModel {
 public:
  static constexpr int kCells = 16;

  static int cellIndex(int y, int th, int wS, int wR) noexcept {
    return ((y * 2 + th) * 2 + wS) * 2 + wR;
  }

  // Validates and renormalizes a joint table.  Requirements:
  //   - nonnegative finite cells with total mass within 1e-9 of 1,
  //   - every (y, wR, th) realization has strictly positive marginal mass,
  //   - th independent of wR (checked to 1e-9 after renormalization).
  static MentalModel fromTable(const std::array<double, kCells>& cells);

  // Factored construction from conditionals:
  //   P(th=A) = pA, P(wR=1) = priorR,
  //   P(wS=1 | wR, th) = pS1given[th][wR],
  //   P(y=1  | wS, th) = pY1given[th][wS].
  // All arguments are probabilities; the induced table is validated as above.
  struct Conditionals {
    double pA;
    double priorR;
    double pS1given[2][2];  // [th][wR]
    double pY1given[2][2];  // [th][wS]
  };
  static MentalModel fromConditionals(const Conditionals& c);

  double cell(int y, int th, int wS, int wR) const noexcept {
    return cells_[cellIndex(y, th, wS, wR)];
  }
  const std::array<double, kCells>& table() const noexcept { return cells_; }

 private:
  explicit MentalModel(const std::array<double, kCells>& cells) : cells_(cells) {}
  std::array<double, kCells> cells_;
};

// Observed evidence: any subset of {stance, cultural type}.  The cultural
// type must be a receiver-relative tag (InGroup = aligned, OutGroup =
// misaligned).
struct Evidence {
  std::optional<Stance> y;
  std::optional<CulturalTag> theta;

  static Evidence nothing() { return {}; }
  static Evidence stance(Stance s) { return {s, std::nullopt}; }
  static Evidence stanceAndType(Stance s, CulturalTag t) { return {s, t}; }
};

// P(y_k | wS_k, th) / P(y_k | wS_{-k}, th) for the stance y = y_k.
//   errors: UndefinedConditional when either conditioning event (wS, th) has
//           zero probability.
ExtendedReal informativeness(const MentalModel& model, Stance y, CulturalTag theta);

// P(wS_k | wR_k, th) for the receiver state wR_k.
//   errors: UndefinedConditional when P(wR_k, th) = 0.
double goalAlignment(const MentalModel& model, int omegaR, CulturalTag theta);

// CompetenceBased: goal alignment is identically 1 (within tol) and the
// aligned type is strictly more informative for both stances.
// PreferenceBased: both types are perfectly informed (all stance mass on the
// matching sender state) and the aligned type is strictly better
// goal-aligned for both receiver states.  Anything else: Neither.
TrustClass classify(const MentalModel& model, double tol = 1e-9);

// Exact conditioning of the joint table; empty evidence gives the prior
// marginal on wR.
//   errors: ZeroProbabilityEvidence.
BinaryBelief posterior(const MentalModel& model, const Evidence& evidence);

struct SpilloverGaps {
  double agreementGap;     // P(wR_k | y_k, A) - P(wR_k | y_k)
  double disagreementGap;  // P(wR_k | y_k, M) - P(wR_k | y_k)
};

SpilloverGaps spilloverGaps(const MentalModel& model, Stance y);

// True iff G(wR_k, th) < 1 - G(wR_{-k}, th) for the state matching the
// stance; defined only for preference-based models.
//   errors: WrongTrustClass.
bool backlashPredicate(const MentalModel& model, Stance y, CulturalTag theta);

// Random model of the requested class.  Parameters are drawn so the class's
// defining strict inequalities hold with margin >= 0.01 and all priors are
// interior; classify() is guaranteed to return the requested class.
//   errors: WrongTrustClass for Neither.
MentalModel sampleModel(TrustClass cls, RngStream& rng);

// Probability of expressing support given a belief: logistic link
// L((2*p1 - 1)/noiseScale) under the symmetric stance-utility default.
//   errors: NonPositiveScale.
double choiceProbability(const BinaryBelief& belief, double noiseScale);

}  // namespace lab
