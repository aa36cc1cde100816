#pragma once
// Identity-threatened belief updating.
//
// A receiver first updates rationally on the economic content of a message,
// then — if the message came bundled with an out-group cultural marker —
// distorts the result toward her in-group's reference belief and away from
// the out-group's.  The distortion strength chi sits in [0, 1/2); the closed
// forms below use the exponent chi/(1-2*chi), which blows up at the boundary,
// so everything is computed with log-weights.

#include <optional>
#include <utility>

#include "lab/belief.hpp"

namespace lab {

// Receiver-side identity state: reference beliefs of her own group (refIn)
// and the other group (refOut), plus the distortion intensities chi for the
// no-threat and threat cases.
struct IdentityContext {
  BinaryBelief refIn;
  BinaryBelief refOut;
  double chiAligned = 0.0;  // messages from the in-group never threaten
  double chiThreat = 0.0;   // must lie in (0, 1/2) to have any effect
  CulturalTag group = CulturalTag::None;

  // Checks full support of both references and 0 = chiAligned < chiThreat < 1/2.
  void validate() const;
};

// Likelihoods P(message stance = k | economic state = j), stored as
// pStance1Given[j] = P(stance 1 | w_j) and pStance0Given[j] = P(stance 0 | w_j).
// Column sums may fall short of 1; the remainder is the no-message event.
struct SignalModel {
  double pStance1Given[2];  // indexed by state j
  double pStance0Given[2];

  // A signal can never push the posterior away from the recommended state:
  // P(stance k | w_k) >= P(stance k | w_{1-k}) for both k, and per-state
  // totals must stay within [0, 1].
  void validate() const;

  static SignalModel symmetric(double accuracy);
};

// Closed form of the mutually-referential group-belief distortion:
//   distortedIn(w)  proportional to refIn(w)  * (refIn(w)/refOut(w))^{chi/(1-2chi)}
//   distortedOut(w) proportional to refOut(w) * (refOut(w)/refIn(w))^{chi/(1-2chi)}
// chi = 0 or refIn == refOut return the inputs bit-exactly.
//   errors: DegenerateBelief, ChiOutOfRange (chi outside [0, 0.499]).
std::pair<BinaryBelief, BinaryBelief> distortReference(const BinaryBelief& refIn,
                                                       const BinaryBelief& refOut, double chi);

// Depersonalized personal belief:
//   distorted(w) proportional to pi(w) * (refIn(w)/refOut(w))^{chi/(1-2chi)}.
//   errors: DegenerateBelief, ChiOutOfRange.
BinaryBelief distortBelief(const BinaryBelief& pi, const BinaryBelief& refIn,
                           const BinaryBelief& refOut, double chi);

// How far `distorted` is from satisfying the self-referential definition
//   distorted(w) proportional to base(w) * (distortedIn(w)/distortedOut(w))^chi,
// measured as the max absolute mass discrepancy over both states.  The closed
// forms above make this <= 1e-12.
//   errors: DegenerateBelief.
double fixedPointResidual(const BinaryBelief& distorted, const BinaryBelief& base,
                          const BinaryBelief& distortedIn, const BinaryBelief& distortedOut,
                          double chi);

// Reference-belief rewriting induced by a message, given the shared cultural
// stereotype hatPi:
//   - bundled stance + InGroup tag from one source: refIn = payload, refOut = hatPi
//   - bundled stance + OutGroup tag from one source: refIn = hatPi, refOut = payload
//   - anything else (no stance, no payload, no tag, or separate sources):
//     refIn = refOut = hatPi.
std::pair<BinaryBelief, BinaryBelief> applyReferenceUpdate(const Message& msg,
                                                           const BinaryBelief& hatPi);

// Plain Bayesian update of the economic belief on the message's stance (or no
// update at all when the message carries none).  Likelihoods are the same for
// every sender type by construction.
//   errors: ZeroProbabilityEvidence.
BinaryBelief rationalPosterior(const BinaryBelief& prior, const SignalModel& signal,
                               std::optional<Stance> econ);

// Full response pipeline: rational update, then reference rewriting, then
// distortion with chi picked by the cultural tag (chiAligned for InGroup or
// untagged, chiThreat for OutGroup).
BinaryBelief receiverResponse(const BinaryBelief& prior, const BinaryBelief& hatPi,
                              const SignalModel& signal,
                              std::pair<double, double> ctxChi,  // (chiAligned, chiThreat)
                              const Message& msg);

// The chi at which an out-group bundle exactly cancels the rational update:
// distortBelief(rationalPost, hatPi, piS, chi*) puts mass prior(w_k) on w_k.
// Unique by monotonicity; bisected to an interval below 1e-10.
//   errors: NoThreshold when rationalPost does not strictly exceed the prior
//           on w_k or the references do not pull in the right direction.
double backlashThreshold(const BinaryBelief& prior, const BinaryBelief& rationalPost,
                         const BinaryBelief& hatPi, const BinaryBelief& piS, int k);

}  // namespace lab
