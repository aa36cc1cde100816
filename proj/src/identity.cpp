#include "lab/identity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lab/errors.hpp"

namespace lab {

namespace {

// Public upper bound on chi.  The exponent chi/(1-2*chi) is ~250 here, safely
// inside double range; anything closer to 1/2 is rejected as pathological.
constexpr double kChiMax = 0.499;

// Bisection bracket for the threshold solver (the open-interval boundary
// shaved by 1e-6, as the structural result guarantees chi* < 1/2).
constexpr double kBracketHi = 0.5 - 1e-6;
constexpr int kBisectIters = 60;

void checkChi(double chi) {
  if (!std::isfinite(chi) || chi < 0.0 || chi > kChiMax) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "chi = %.6g outside [0, %.3f]", chi, kChiMax);
    throw DomainError(errc::ChiOutOfRange, buf);
  }
}

// Distortion core without the kChiMax clamp; the threshold solver probes chi
// right up to kBracketHi.  Assumes full-support inputs, chi in [0, 1/2).
BinaryBelief distortCore(const BinaryBelief& pi, const BinaryBelief& refIn,
                         const BinaryBelief& refOut, double chi) {
  if (chi == 0.0 || refIn == refOut) return pi;
  const double a = chi / (1.0 - 2.0 * chi);
  const double logW1 = std::log(pi.p1()) + a * (std::log(refIn.p1()) - std::log(refOut.p1()));
  const double logW0 = std::log(pi.p0()) + a * (std::log(refIn.p0()) - std::log(refOut.p0()));
  return normalizeFromLogs(logW1, logW0);
}

}  // namespace

void IdentityContext::validate() const {
  refIn.requireFullSupport("IdentityContext.refIn");
  refOut.requireFullSupport("IdentityContext.refOut");
  if (chiAligned != 0.0) {
    throw DomainError(errc::ChiOutOfRange, "chiAligned must be exactly 0");
  }
  if (!std::isfinite(chiThreat) || chiThreat <= 0.0 || chiThreat > kChiMax) {
    char buf[72];
    std::snprintf(buf, sizeof buf, "chiThreat = %.6g outside (0, %.3f]", chiThreat, kChiMax);
    throw DomainError(errc::ChiOutOfRange, buf);
  }
}

void SignalModel::validate() const {
  for (int j = 0; j < 2; ++j) {
    const double p1 = pStance1Given[j];
    const double p0 = pStance0Given[j];
    if (!std::isfinite(p1) || p1 < 0.0 || p1 > 1.0 || !std::isfinite(p0) || p0 < 0.0 ||
        p0 > 1.0) {
      throw DomainError(errc::InvalidProbability, "signal likelihood out of [0,1]");
    }
    if (p1 + p0 > 1.0 + 1e-12) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "stance likelihoods for state %d sum to %.12g > 1", j,
                    p1 + p0);
      throw DomainError(errc::InvalidConfig, buf);
    }
  }
  if (pStance1Given[1] < pStance1Given[0] || pStance0Given[0] < pStance0Given[1]) {
    throw DomainError(errc::InvalidConfig,
                      "a stance may not be likelier in the state it argues against");
  }
}

SignalModel SignalModel::symmetric(double accuracy) {
  SignalModel s{};
  s.pStance1Given[1] = accuracy;
  s.pStance1Given[0] = 1.0 - accuracy;
  s.pStance0Given[0] = accuracy;
  s.pStance0Given[1] = 1.0 - accuracy;
  s.validate();
  return s;
}

std::pair<BinaryBelief, BinaryBelief> distortReference(const BinaryBelief& refIn,
                                                       const BinaryBelief& refOut, double chi) {
  refIn.requireFullSupport("distortReference.refIn");
  refOut.requireFullSupport("distortReference.refOut");
  checkChi(chi);
  return {distortCore(refIn, refIn, refOut, chi), distortCore(refOut, refOut, refIn, chi)};
}

BinaryBelief distortBelief(const BinaryBelief& pi, const BinaryBelief& refIn,
                           const BinaryBelief& refOut, double chi) {
  pi.requireFullSupport("distortBelief.pi");
  refIn.requireFullSupport("distortBelief.refIn");
  refOut.requireFullSupport("distortBelief.refOut");
  checkChi(chi);
  return distortCore(pi, refIn, refOut, chi);
}

double fixedPointResidual(const BinaryBelief& distorted, const BinaryBelief& base,
                          const BinaryBelief& distortedIn, const BinaryBelief& distortedOut,
                          double chi) {
  distorted.requireFullSupport("fixedPointResidual.distorted");
  base.requireFullSupport("fixedPointResidual.base");
  distortedIn.requireFullSupport("fixedPointResidual.distortedIn");
  distortedOut.requireFullSupport("fixedPointResidual.distortedOut");
  if (!std::isfinite(chi)) {
    throw DomainError(errc::NonFinite, "chi");
  }
  const double logW1 =
      std::log(base.p1()) + chi * (std::log(distortedIn.p1()) - std::log(distortedOut.p1()));
  const double logW0 =
      std::log(base.p0()) + chi * (std::log(distortedIn.p0()) - std::log(distortedOut.p0()));
  const BinaryBelief candidate = normalizeFromLogs(logW1, logW0);
  return std::max(std::abs(distorted.p1() - candidate.p1()),
                  std::abs(distorted.p0() - candidate.p0()));
}

std::pair<BinaryBelief, BinaryBelief> applyReferenceUpdate(const Message& msg,
                                                           const BinaryBelief& hatPi) {
  msg.validate();
  hatPi.requireFullSupport("applyReferenceUpdate.hatPi");
  if (msg.econ && msg.payload && msg.sameSource) {
    if (msg.cultural == CulturalTag::InGroup) return {*msg.payload, hatPi};
    if (msg.cultural == CulturalTag::OutGroup) return {hatPi, *msg.payload};
  }
  return {hatPi, hatPi};
}

BinaryBelief rationalPosterior(const BinaryBelief& prior, const SignalModel& signal,
                               std::optional<Stance> econ) {
  signal.validate();
  if (!econ) return prior;
  const bool s1 = *econ == Stance::Stance1;
  const double like1 = s1 ? signal.pStance1Given[1] : signal.pStance0Given[1];
  const double like0 = s1 ? signal.pStance1Given[0] : signal.pStance0Given[0];
  const double w1 = prior.p1() * like1;
  const double w0 = prior.p0() * like0;
  if (w1 + w0 <= 0.0) {
    throw DomainError(errc::ZeroProbabilityEvidence, "message has zero prior probability");
  }
  return normalize(w1, w0);
}

BinaryBelief receiverResponse(const BinaryBelief& prior, const BinaryBelief& hatPi,
                              const SignalModel& signal, std::pair<double, double> ctxChi,
                              const Message& msg) {
  if (!isRelativeTag(msg.cultural)) {
    throw DomainError(errc::WrongTagDomain,
                      std::string("receiver response needs a receiver-relative tag, got ") +
                          tagName(msg.cultural));
  }
  const BinaryBelief rational = rationalPosterior(prior, signal, msg.econ);
  const auto [refIn, refOut] = applyReferenceUpdate(msg, hatPi);
  const double chi = msg.cultural == CulturalTag::OutGroup ? ctxChi.second : ctxChi.first;
  return distortBelief(rational, refIn, refOut, chi);
}

double backlashThreshold(const BinaryBelief& prior, const BinaryBelief& rationalPost,
                         const BinaryBelief& hatPi, const BinaryBelief& piS, int k) {
  prior.requireFullSupport("backlashThreshold.prior");
  rationalPost.requireFullSupport("backlashThreshold.rationalPost");
  hatPi.requireFullSupport("backlashThreshold.hatPi");
  piS.requireFullSupport("backlashThreshold.piS");
  if (k != 0 && k != 1) {
    throw DomainError(errc::InvalidConfig, "stance index must be 0 or 1");
  }
  if (rationalPost.mass(k) <= prior.mass(k)) {
    throw DomainError(errc::NoThreshold, "rational update must strictly favor the stance state");
  }
  if (piS.mass(k) <= hatPi.mass(k)) {
    throw DomainError(errc::NoThreshold, "sender belief must exceed the stereotype on the stance state");
  }

  // After an out-group bundle, refIn = hatPi and refOut = piS; mass(k) of the
  // distorted belief is continuous and strictly decreasing in chi, positive
  // at 0 by the first precondition.
  auto gap = [&](double chi) {
    return distortCore(rationalPost, hatPi, piS, chi).mass(k) - prior.mass(k);
  };
  double lo = 0.0, hi = kBracketHi;
  if (gap(hi) > 0.0) {
    throw DomainError(errc::NoThreshold, "no crossing below the chi = 1/2 boundary");
  }
  for (int i = 0; i < kBisectIters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace lab
