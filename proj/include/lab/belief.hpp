#pragma once
// Probability primitives and the message vocabulary shared by every module.
//
// All state spaces in this library are binary, so a distribution is stored as
// the single mass p1 on state 1; the complement is always derived.  Values are
// immutable and all free functions are pure.

#include <optional>
#include <span>
#include <utility>

#include "lab/errors.hpp"

namespace lab {

// Distribution over a two-point state space {w0, w1}.
class BinaryBelief {
 public:
  // p1 must be finite and within [0,1].
  explicit BinaryBelief(double p1);

  double p1() const noexcept { return p1_; }
  double p0() const noexcept { return 1.0 - p1_; }

  // Mass on state k (k = 0 or 1).
  double mass(int k) const noexcept { return k == 1 ? p1() : p0(); }

  // Strict interiority: both states carry positive mass.
  bool fullSupport() const noexcept { return p1_ > 0.0 && p1_ < 1.0; }

  // Throws DegenerateBelief unless fullSupport().
  void requireFullSupport(const char* who) const;

  friend bool operator==(const BinaryBelief& a, const BinaryBelief& b) noexcept {
    return a.p1_ == b.p1_;
  }

 private:
  double p1_;
};

// Weights -> distribution.  At least one weight must be strictly positive and
// both must be finite and nonnegative.
//   errors: ZeroMass when both weights are zero,
//           NonFinite for NaN/infinite (or negative) weights.
BinaryBelief normalize(double w1, double w0);

// Same, but the weights are given as natural logs.  Stable for extreme
// exponents (used by the identity-distortion closed forms); never overflows.
BinaryBelief normalizeFromLogs(double logW1, double logW0);

// Pearson correlation coefficient.
//   errors: LengthMismatch for unequal lengths or fewer than two samples,
//           ZeroVariance when either vector is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Cultural labels.  InGroup/OutGroup are receiver-relative (the sender is
// culturally aligned/misaligned with the receiver); SP/SC are the absolute
// group names used by the election and media modules.  The two families never
// mix within one call.
enum class CulturalTag { InGroup, OutGroup, SP, SC, None };

const char* tagName(CulturalTag tag) noexcept;
bool isRelativeTag(CulturalTag tag) noexcept;  // InGroup/OutGroup/None
bool isAbsoluteTag(CulturalTag tag) noexcept;  // SP/SC/None

// Economic stance carried by a message (recommendation for state 0 or 1).
enum class Stance { Stance0 = 0, Stance1 = 1 };

inline int stanceIndex(Stance s) noexcept { return static_cast<int>(s); }
inline Stance otherStance(Stance s) noexcept {
  return s == Stance::Stance1 ? Stance::Stance0 : Stance::Stance1;
}

// A communication: an optional economic stance (with an optional belief
// payload standing for the sender's asserted distribution) plus an optional
// cultural tag.  sameSource distinguishes a genuine bundle (one sender emits
// both components) from two components read side by side from unrelated
// sources; it is meaningful only when both components are present.
struct Message {
  std::optional<Stance> econ;
  std::optional<BinaryBelief> payload;  // absent whenever econ is absent
  CulturalTag cultural = CulturalTag::None;
  bool sameSource = true;

  static Message none();
  static Message econOnly(Stance stance, std::optional<BinaryBelief> payload = std::nullopt);
  static Message cultureOnly(CulturalTag tag);
  static Message bundled(Stance stance, BinaryBelief payload, CulturalTag tag,
                         bool sameSource = true);

  bool bundledWithPayload() const noexcept {
    return econ.has_value() && payload.has_value() && cultural != CulturalTag::None;
  }

  // Enforces "no payload without a stance".
  void validate() const;
};

// Order-independent compensated accumulator (Neumaier variant).
class KahanSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace lab
