#pragma once
// Two-party platform competition with identity-driven propaganda.
//
// Two voter groups (SP: socially progressive, SC: socially conservative)
// have quadratic preferences over a cultural policy x and an economic policy
// y whose payoff-relevant state is uncertain.  A common uniform popularity
// shock decides close races, which makes expected vote shares piecewise
// linear in platform utilities and yields closed-form equilibrium platforms.
// Propaganda works purely through the identity channel of lab/identity.hpp:
// a culturally tagged bundle distorts only the out-group's economic belief.

#include <array>
#include <functional>
#include <utility>

#include "lab/belief.hpp"

namespace lab {

struct Platform {
  double x = 0.0;  // cultural/social policy
  double y = 0.0;  // economic policy
};

struct VoterGroup {
  double ideal = 0.0;                 // cultural bliss point x^G
  double share = 0.5;                 // population share
  BinaryBelief belief{0.5};           // belief that the high economic state obtains
};

// Party payoff as a function of own vote share.  Three shapes:
//   Power:    v(s) = s^gamma with gamma in (0,1) — normalized and strictly
//             concave, used for the main equilibrium analysis.
//   Campaign: v(s) = (1/2 + (pi(s) - pi(1-s)) / (2*psi)) * W, the
//             contribution-financed persuasion payoff built from an
//             increasing concave curve pi with psi > pi(1) - pi(0) > 0.
//   Custom:   any caller-supplied increasing curve (weak concavity is
//             tolerated here; the equilibrium solver separately rejects
//             curves without enough curvature).
class PartyUtility {
 public:
  enum class Kind { Power, Campaign, Custom };

  // errors: InvalidConfig unless 0 < gamma < 1.
  static PartyUtility power(double gamma);

  // errors: InvalidPersuasionCurve if pi is not finite, nondecreasing and
  // weakly concave on a 1,001-point grid, if pi(1) <= pi(0), if
  // psi <= pi(1) - pi(0), or if w <= 0.
  static PartyUtility campaign(std::function<double(double)> persuasion, double psi, double w);

  // errors: InvalidConfig if v is not finite, strictly increasing and weakly
  // concave on the grid.
  static PartyUtility fromCurve(std::function<double(double)> v);

  Kind kind() const noexcept { return kind_; }

  // Raw curve value at s in [0,1].
  double value(double s) const;

  // Affine rescaling to v(0) = 0, v(1) = 1 (identity for Power).
  //   errors: DegenerateUtility if v(1) <= v(0).
  double normalizedValue(double s) const;

  double psi() const noexcept { return psi_; }
  double w() const noexcept { return w_; }

 private:
  PartyUtility(Kind kind, std::function<double(double)> fn, double psi, double w);

  Kind kind_;
  std::function<double(double)> fn_;  // raw v for Power/Custom, pi for Campaign
  double psi_ = 0.0;
  double w_ = 1.0;
  double v0_ = 0.0;
  double v1_ = 1.0;
};

struct ElectionConfig {
  VoterGroup sp;  // invariant: sp.ideal > sc.ideal
  VoterGroup sc;
  double phi = 3.0;          // popularity-shock half-width
  BinaryBelief hatPi{0.5};   // shared stereotype-free economic belief
  BinaryBelief piS1{0.5};    // belief asserted by a stance-1 message
  BinaryBelief piS0{0.5};    // belief asserted by a stance-0 message
  double chiSP = 0.0;        // SP members' threat intensity on SC-tagged bundles
  double chiSC = 0.0;        // SC members' threat intensity on SP-tagged bundles

  // Checks: shares positive and summing to 1, sp.ideal > sc.ideal,
  // phi > 1 + (sp.ideal - sc.ideal)^2 (both parties draw votes from both
  // groups), full-support beliefs, chi values in [0, 0.499].
  void validate() const;

  // The six candidate communications, in the canonical tie-break order:
  // stance-1 before stance-0, SC tag before SP tag, bundles before untagged.
  std::array<Message, 6> messageSet() const;
};

// Expected policy utility of a group member:
//   -(q.x - ideal)^2 - (q.y - nu(1))^2 - nu(1)*nu(0).
// The last term is the irreducible variance of the binary economic state.
double groupUtility(const VoterGroup& g, const Platform& q);

// Probability that a group member votes for the party offering qA when the
// opponent offers qB: clamp((dU + phi)/(2 phi), 0, 1).
double voteProbability(const VoterGroup& g, const Platform& qA, const Platform& qB, double phi);

// Exact expected payoffs (in normalized rent units) of both parties under
// the uniform shock: the shock realization partitions into three intervals
// on which A's vote share is 1, the share of the group preferring A more,
// and 0.
std::pair<double, double> expectedPartyPayoff(const Platform& qA, const Platform& qB,
                                              const ElectionConfig& cfg, const PartyUtility& v);

// Closed-form equilibrium platforms given the groups' (possibly distorted)
// economic beliefs:
//   qSP = (a x^SP + (1-a) x^SC, a nuSP(1) + (1-a) nuSC(1)), a = v~(s^SP),
// and symmetrically for SC with b = v~(s^SC).
//   errors: DegenerateUtility when a + b <= 1 (utility not concave enough
//           for interior differentiation).
std::pair<Platform, Platform> equilibriumPlatforms(const ElectionConfig& cfg,
                                                   const std::pair<BinaryBelief, BinaryBelief>& beliefs,
                                                   const PartyUtility& v);

struct GridSpec {
  int pointsPerAxis = 201;  // at least 201
  double margin = 0.5;      // extension beyond the extreme ideal points
};

// Exhaustive best response to qOpp over a rectangular grid spanning the
// groups' cultural and economic ideal points (from cfg's stored beliefs),
// extended by `margin` on each side.  Ties break toward the lexicographically
// smallest (x, y).  This is a verification oracle, not the solver.
Platform bestResponseGrid(const Platform& qOpp, const ElectionConfig& cfg, const PartyUtility& v,
                          const GridSpec& grid = {});

// Post-message economic beliefs (nuSP, nuSC).  Only a same-source bundle
// moves anything: the tagged group keeps hatPi, the other group distorts
// hatPi away from the asserted payload with its own chi.
std::pair<BinaryBelief, BinaryBelief> propagandaBeliefs(const Message& msg,
                                                        const ElectionConfig& cfg);

// The communication maximizing |nuSP(1) - nuSC(1)| over messageSet(); ties
// resolved by the canonical order.
Message optimalMessage(const ElectionConfig& cfg);

// Equilibrium expected payoff of either party:
//   1/2 + ||qSC - qSP||^2 / (2 phi).
double equilibriumPayoffClosedForm(const Platform& qSP, const Platform& qSC, double phi);

// Appendix-style contribution payoff v(s) for a Campaign utility, raw scale.
//   errors: InvalidConfig for non-Campaign utilities,
//           InvalidProbability for s outside [0, 1].
double campaignUtility(double s, const PartyUtility& params);

}  // namespace lab
