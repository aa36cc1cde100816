#pragma once
// Synthetic survey experiment over message arms.
//
// A population splits into two cultural groups.  Each arm shows every agent
// one message; the agent updates via either the joint-table engine
// (lab/mental_model.hpp) or the identity engine (lab/identity.hpp), then
// casts a noisy binary support vote.  The estimands contrast pooled
// aligned/misaligned bundle cells against the untagged economic message and
// the silent control.  Every agent owns an RNG stream keyed by
// (seed, arm, agent index), so results are independent of evaluation order.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lab/belief.hpp"
#include "lab/identity.hpp"
#include "lab/mental_model.hpp"

namespace lab {

enum class ArmKind { NoMessage, EconOnly, Bundled, CultureOnly, SeparateSources };

const char* armKindName(ArmKind k) noexcept;

struct ArmSpec {
  ArmKind kind = ArmKind::NoMessage;
  Stance stance = Stance::Stance1;            // used by EconOnly/Bundled/SeparateSources
  CulturalTag culture = CulturalTag::None;    // SP or SC where applicable

  std::string label() const;

  // errors: InvalidConfig when a field is meaningless for the kind (e.g. a
  // CultureOnly arm without a group tag).
  void validate() const;
};

// One population stratum: every agent shares these parameters; only the
// group label is drawn at runtime.
struct PopulationSpec {
  double shareSP = 0.5;           // probability an agent belongs to SP
  BinaryBelief prior{0.5};        // identity engine's starting belief
  BinaryBelief hatPi{0.5};        // shared stereotype-free belief
  double chiThreat = 0.0;         // distortion intensity on out-group bundles
  double noiseScale = 0.5;        // logistic choice temperature

  void validate() const;
};

struct IdentityEngineSpec {
  SignalModel signal = SignalModel::symmetric(0.5);
  BinaryBelief piS1{0.5};  // belief payload asserted by stance-1 messages
  BinaryBelief piS0{0.5};
};

// Exactly one engine is active.  The Bayesian engine ignores the population
// prior: its mental model already fixes the marginal over the economic
// state.
struct SimConfig {
  int nPerArm = 1000;  // at least 100
  std::uint64_t seed = 0;
  std::vector<ArmSpec> arms;
  PopulationSpec population;
  std::optional<IdentityEngineSpec> identity;
  std::optional<MentalModel> bayesian;

  void validate() const;
};

struct AgentRecord {
  int arm = 0;
  bool isSP = false;
  bool aligned = false;  // tag matched own group (bundle-like arms only)
  bool support = false;
};

struct ArmStats {
  ArmSpec spec;
  int n = 0;
  double share = 0.0;          // simulated support share
  double expectedShare = 0.0;  // closed-form share from the engine
};

struct Estimate {
  std::string name;
  double value = 0.0;
  double se = 0.0;
  int n1 = 0;  // sample sizes of the two cells behind the difference
  int n2 = 0;

  double z() const noexcept { return se > 0.0 ? value / se : 0.0; }
};

struct ArmCorrelation {
  std::string arm;
  double value = 0.0;
  bool degenerate = false;  // a constant column made the correlation undefined
};

struct SimResult {
  std::vector<ArmStats> arms;
  std::vector<Estimate> estimates;      // beta1, beta2, delta1, delta2 when present
  std::vector<Estimate> controlGaps;    // pooled bundle cells minus the silent arm
  std::vector<AgentRecord> records;
};

// Belief an agent of the given group ends up with after the arm's message.
// Exposed for closed-form expectations; deterministic.
BinaryBelief engineBelief(const SimConfig& cfg, const ArmSpec& arm, bool isSP);

// Expected support share of an arm under the configured population mixture.
double closedFormShare(const SimConfig& cfg, const ArmSpec& arm);

// Runs every arm with nPerArm agents; deterministic given cfg.seed.
SimResult runExperiment(const SimConfig& cfg);

// Per-arm Pearson correlation between the group indicator and support.
std::vector<ArmCorrelation> armCorrelations(const SimResult& result);

// Difference between the misaligned subset of the separate-sources arm and
// the matching untagged economic arm; zero in expectation because separate
// sources never rewrite reference beliefs.
//   errors: InvalidConfig unless the config uses the identity engine and
//           contains both arms.
Estimate separateSourcesContrast(const SimConfig& cfg);

}  // namespace lab
