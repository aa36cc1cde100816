#include "lab/election.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "lab/errors.hpp"
#include "lab/identity.hpp"

namespace lab {

namespace {

constexpr int kCurveGridPoints = 1001;

// Grid check shared by the utility factories.  Strict increase is demanded
// for full payoff curves; persuasion curves only need an overall rise.
// Concavity is always checked weakly so that affine curves are representable
// (the equilibrium solver rejects them later where curvature matters).
void checkCurveShape(const std::function<double(double)>& f, bool strictIncrease, errc code,
                     const char* label) {
  double prev = 0.0;
  double scale = 1.0;
  std::array<double, 3> window{};  // last three values for second differences
  for (int i = 0; i < kCurveGridPoints; ++i) {
    const double s = static_cast<double>(i) / (kCurveGridPoints - 1);
    const double val = f(s);
    if (!std::isfinite(val)) {
      throw DomainError(code, std::string(label) + " is not finite on [0,1]");
    }
    scale = std::max(scale, std::abs(val));
    if (i > 0) {
      if (strictIncrease ? (val <= prev) : (val < prev - 1e-12 * scale)) {
        throw DomainError(code, std::string(label) + " must be increasing on [0,1]");
      }
    }
    window = {window[1], window[2], val};
    if (i >= 2 && window[0] - 2.0 * window[1] + window[2] > 1e-12 * scale) {
      throw DomainError(code, std::string(label) + " must be concave on [0,1]");
    }
    prev = val;
  }
}

double cdfUniform(double t, double phi) { return std::clamp((t + phi) / (2.0 * phi), 0.0, 1.0); }

void checkChiRange(double chi, const char* label) {
  if (!std::isfinite(chi) || chi < 0.0 || chi > 0.499) {
    throw DomainError(errc::ChiOutOfRange, std::string(label) + " outside [0, 0.499]");
  }
}

}  // namespace

PartyUtility::PartyUtility(Kind kind, std::function<double(double)> fn, double psi, double w)
    : kind_(kind), fn_(std::move(fn)), psi_(psi), w_(w) {
  v0_ = value(0.0);
  v1_ = value(1.0);
}

PartyUtility PartyUtility::power(double gamma) {
  if (!std::isfinite(gamma) || gamma <= 0.0 || gamma >= 1.0) {
    throw DomainError(errc::InvalidConfig, "power-utility exponent must lie in (0,1)");
  }
  return PartyUtility(Kind::Power, [gamma](double s) { return std::pow(s, gamma); }, 0.0, 1.0);
}

PartyUtility PartyUtility::campaign(std::function<double(double)> persuasion, double psi,
                                    double w) {
  checkCurveShape(persuasion, /*strictIncrease=*/false, errc::InvalidPersuasionCurve,
                  "persuasion curve");
  const double gain = persuasion(1.0) - persuasion(0.0);
  if (gain <= 0.0) {
    throw DomainError(errc::InvalidPersuasionCurve, "persuasion curve must rise over [0,1]");
  }
  if (!std::isfinite(psi) || psi <= gain) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "psi = %.6g must exceed the persuasion gain %.6g", psi, gain);
    throw DomainError(errc::InvalidPersuasionCurve, buf);
  }
  if (!std::isfinite(w) || w <= 0.0) {
    throw DomainError(errc::InvalidPersuasionCurve, "stake W must be positive");
  }
  return PartyUtility(Kind::Campaign, std::move(persuasion), psi, w);
}

PartyUtility PartyUtility::fromCurve(std::function<double(double)> v) {
  checkCurveShape(v, /*strictIncrease=*/true, errc::InvalidConfig, "party utility");
  return PartyUtility(Kind::Custom, std::move(v), 0.0, 1.0);
}

double PartyUtility::value(double s) const {
  if (!std::isfinite(s) || s < 0.0 || s > 1.0) {
    throw DomainError(errc::InvalidProbability, "vote share outside [0,1]");
  }
  if (kind_ == Kind::Campaign) {
    return (0.5 + (fn_(s) - fn_(1.0 - s)) / (2.0 * psi_)) * w_;
  }
  return fn_(s);
}

double PartyUtility::normalizedValue(double s) const {
  const double span = v1_ - v0_;
  if (span <= 0.0) {
    throw DomainError(errc::DegenerateUtility, "utility has no rise between losing and winning");
  }
  return (value(s) - v0_) / span;
}

void ElectionConfig::validate() const {
  if (!std::isfinite(sp.ideal) || !std::isfinite(sc.ideal) || sp.ideal <= sc.ideal) {
    throw DomainError(errc::InvalidConfig, "cultural ideals must satisfy sp.ideal > sc.ideal");
  }
  if (!std::isfinite(sp.share) || !std::isfinite(sc.share) || sp.share <= 0.0 || sc.share <= 0.0 ||
      std::abs(sp.share + sc.share - 1.0) > 1e-12) {
    throw DomainError(errc::InvalidConfig, "group shares must be positive and sum to 1");
  }
  const double gap = sp.ideal - sc.ideal;
  if (!std::isfinite(phi) || phi <= 1.0 + gap * gap) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "phi = %.6g must exceed 1 + (ideal gap)^2 = %.6g", phi,
                  1.0 + gap * gap);
    throw DomainError(errc::InvalidConfig, buf);
  }
  hatPi.requireFullSupport("ElectionConfig.hatPi");
  piS1.requireFullSupport("ElectionConfig.piS1");
  piS0.requireFullSupport("ElectionConfig.piS0");
  checkChiRange(chiSP, "chiSP");
  checkChiRange(chiSC, "chiSC");
}

std::array<Message, 6> ElectionConfig::messageSet() const {
  return {Message::bundled(Stance::Stance1, piS1, CulturalTag::SC),
          Message::bundled(Stance::Stance1, piS1, CulturalTag::SP),
          Message::bundled(Stance::Stance0, piS0, CulturalTag::SC),
          Message::bundled(Stance::Stance0, piS0, CulturalTag::SP),
          Message::econOnly(Stance::Stance1, piS1),
          Message::econOnly(Stance::Stance0, piS0)};
}

double groupUtility(const VoterGroup& g, const Platform& q) {
  const double dx = q.x - g.ideal;
  const double dy = q.y - g.belief.p1();
  return -dx * dx - dy * dy - g.belief.p1() * g.belief.p0();
}

double voteProbability(const VoterGroup& g, const Platform& qA, const Platform& qB, double phi) {
  if (!std::isfinite(phi) || phi <= 0.0) {
    throw DomainError(errc::InvalidConfig, "shock half-width must be positive");
  }
  const double dU = groupUtility(g, qA) - groupUtility(g, qB);
  return cdfUniform(dU, phi);
}

std::pair<double, double> expectedPartyPayoff(const Platform& qA, const Platform& qB,
                                              const ElectionConfig& cfg, const PartyUtility& v) {
  cfg.validate();
  const double dSP = groupUtility(cfg.sp, qA) - groupUtility(cfg.sp, qB);
  const double dSC = groupUtility(cfg.sc, qA) - groupUtility(cfg.sc, qB);

  // On [shock < dMin] both groups prefer A; between the two thresholds only
  // the group with the larger utility gap does; above dMax nobody does.
  const double dMin = std::min(dSP, dSC);
  const double dMax = std::max(dSP, dSC);
  const double shareHigher = dSP >= dSC ? cfg.sp.share : cfg.sc.share;

  const double pBoth = cdfUniform(dMin, cfg.phi);
  const double pMid = cdfUniform(dMax, cfg.phi) - pBoth;

  const double vFull = v.normalizedValue(1.0);
  const double vNone = v.normalizedValue(0.0);
  const double va = pBoth * vFull + pMid * v.normalizedValue(shareHigher) +
                    (1.0 - pBoth - pMid) * vNone;
  const double vb = pBoth * vNone + pMid * v.normalizedValue(1.0 - shareHigher) +
                    (1.0 - pBoth - pMid) * vFull;
  return {va, vb};
}

std::pair<Platform, Platform> equilibriumPlatforms(
    const ElectionConfig& cfg, const std::pair<BinaryBelief, BinaryBelief>& beliefs,
    const PartyUtility& v) {
  cfg.validate();
  const double a = v.normalizedValue(cfg.sp.share);
  const double b = v.normalizedValue(cfg.sc.share);
  if (a + b <= 1.0) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "v(sSP) + v(sSC) = %.12g must exceed 1", a + b);
    throw DomainError(errc::DegenerateUtility, buf);
  }
  const double nuSP = beliefs.first.p1();
  const double nuSC = beliefs.second.p1();
  const Platform qSP{a * cfg.sp.ideal + (1.0 - a) * cfg.sc.ideal,
                     a * nuSP + (1.0 - a) * nuSC};
  const Platform qSC{b * cfg.sc.ideal + (1.0 - b) * cfg.sp.ideal,
                     b * nuSC + (1.0 - b) * nuSP};
  return {qSP, qSC};
}

Platform bestResponseGrid(const Platform& qOpp, const ElectionConfig& cfg, const PartyUtility& v,
                          const GridSpec& grid) {
  cfg.validate();
  if (grid.pointsPerAxis < 201) {
    throw DomainError(errc::InvalidConfig, "grid needs at least 201 points per axis");
  }
  if (!std::isfinite(grid.margin) || grid.margin < 0.0) {
    throw DomainError(errc::InvalidConfig, "grid margin must be nonnegative");
  }
  const double xLo = cfg.sc.ideal - grid.margin;
  const double xHi = cfg.sp.ideal + grid.margin;
  const double yLo = std::min(cfg.sp.belief.p1(), cfg.sc.belief.p1()) - grid.margin;
  const double yHi = std::max(cfg.sp.belief.p1(), cfg.sc.belief.p1()) + grid.margin;

  const int n = grid.pointsPerAxis;
  Platform best{xLo, yLo};
  double bestPayoff = -1.0;
  for (int i = 0; i < n; ++i) {
    const double x = xLo + (xHi - xLo) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double y = yLo + (yHi - yLo) * j / (n - 1);
      const Platform q{x, y};
      const double payoff = expectedPartyPayoff(q, qOpp, cfg, v).first;
      if (payoff > bestPayoff) {
        bestPayoff = payoff;
        best = q;
      }
    }
  }
  return best;
}

std::pair<BinaryBelief, BinaryBelief> propagandaBeliefs(const Message& msg,
                                                        const ElectionConfig& cfg) {
  msg.validate();
  cfg.validate();
  if (!isAbsoluteTag(msg.cultural)) {
    throw DomainError(errc::WrongTagDomain,
                      std::string("propaganda needs a party-group tag, got ") +
                          tagName(msg.cultural));
  }
  BinaryBelief nuSP = cfg.hatPi;
  BinaryBelief nuSC = cfg.hatPi;
  if (msg.econ && msg.payload && msg.sameSource) {
    // The group named by the tag reads an in-group source (chi = 0, no
    // movement from hatPi); the other group reads an out-group source and
    // distorts away from the asserted belief.
    if (msg.cultural == CulturalTag::SC) {
      nuSP = distortBelief(cfg.hatPi, cfg.hatPi, *msg.payload, cfg.chiSP);
    } else if (msg.cultural == CulturalTag::SP) {
      nuSC = distortBelief(cfg.hatPi, cfg.hatPi, *msg.payload, cfg.chiSC);
    }
  }
  return {nuSP, nuSC};
}

Message optimalMessage(const ElectionConfig& cfg) {
  cfg.validate();
  const auto candidates = cfg.messageSet();
  Message best = candidates[0];
  double bestDivergence = -1.0;
  for (const Message& m : candidates) {
    const auto [nuSP, nuSC] = propagandaBeliefs(m, cfg);
    const double divergence = std::abs(nuSP.p1() - nuSC.p1());
    if (divergence > bestDivergence) {
      bestDivergence = divergence;
      best = m;
    }
  }
  return best;
}

double equilibriumPayoffClosedForm(const Platform& qSP, const Platform& qSC, double phi) {
  if (!std::isfinite(phi) || phi <= 0.0) {
    throw DomainError(errc::InvalidConfig, "shock half-width must be positive");
  }
  const double dx = qSC.x - qSP.x;
  const double dy = qSC.y - qSP.y;
  return 0.5 + (dx * dx + dy * dy) / (2.0 * phi);
}

double campaignUtility(double s, const PartyUtility& params) {
  if (params.kind() != PartyUtility::Kind::Campaign) {
    throw DomainError(errc::InvalidConfig, "campaign parameters required");
  }
  return params.value(s);
}

}  // namespace lab
