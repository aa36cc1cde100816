#include "lab/belief.hpp"

#include <cmath>
#include <cstddef>

namespace lab {

const char* errcName(errc code) noexcept {
  switch (code) {
    case errc::ZeroMass: return "ZeroMass";
    case errc::NonFinite: return "NonFinite";
    case errc::LengthMismatch: return "LengthMismatch";
    case errc::ZeroVariance: return "ZeroVariance";
    case errc::UndefinedConditional: return "UndefinedConditional";
    case errc::ZeroProbabilityEvidence: return "ZeroProbabilityEvidence";
    case errc::WrongTrustClass: return "WrongTrustClass";
    case errc::NonPositiveScale: return "NonPositiveScale";
    case errc::DegenerateBelief: return "DegenerateBelief";
    case errc::ChiOutOfRange: return "ChiOutOfRange";
    case errc::NoThreshold: return "NoThreshold";
    case errc::DegenerateUtility: return "DegenerateUtility";
    case errc::InvalidPersuasionCurve: return "InvalidPersuasionCurve";
    case errc::DimensionMismatch: return "DimensionMismatch";
    case errc::InvalidProbability: return "InvalidProbability";
    case errc::WrongTagDomain: return "WrongTagDomain";
    case errc::InvalidConfig: return "InvalidConfig";
  }
  return "UnknownError";
}

BinaryBelief::BinaryBelief(double p1) : p1_(p1) {
  if (!std::isfinite(p1)) {
    throw DomainError(errc::NonFinite, "belief mass must be finite");
  }
  if (p1 < 0.0 || p1 > 1.0) {
    throw DomainError(errc::InvalidProbability, "belief mass must lie in [0,1]");
  }
}

void BinaryBelief::requireFullSupport(const char* who) const {
  if (!fullSupport()) {
    throw DomainError(errc::DegenerateBelief,
                      std::string(who) + " requires a full-support belief");
  }
}

BinaryBelief normalize(double w1, double w0) {
  if (!std::isfinite(w1) || !std::isfinite(w0) || w1 < 0.0 || w0 < 0.0) {
    throw DomainError(errc::NonFinite, "weights must be finite and nonnegative");
  }
  if (w1 == 0.0 && w0 == 0.0) {
    throw DomainError(errc::ZeroMass, "cannot normalize a zero measure");
  }
  return BinaryBelief(w1 / (w1 + w0));
}

BinaryBelief normalizeFromLogs(double logW1, double logW0) {
  if (std::isnan(logW1) || std::isnan(logW0)) {
    throw DomainError(errc::NonFinite, "log-weights must not be NaN");
  }
  // p1 = 1 / (1 + exp(logW0 - logW1)); the subtraction keeps exp() bounded in
  // the direction that matters, and an overflowing exp saturates to +inf which
  // correctly yields 0.
  const double d = logW0 - logW1;
  if (d > 0.0) {
    return BinaryBelief(1.0 / (1.0 + std::exp(d)));
  }
  const double e = std::exp(-d);  // = w1/w0 >= 1
  return BinaryBelief(e / (e + 1.0));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw DomainError(errc::LengthMismatch,
                      "pearson needs two equal-length vectors with >= 2 samples");
  }
  const std::size_t n = xs.size();
  KahanSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx.add(xs[i]);
    sy.add(ys[i]);
  }
  const double mx = sx.value() / static_cast<double>(n);
  const double my = sy.value() / static_cast<double>(n);
  KahanSum sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  const double vx = sxx.value();
  const double vy = syy.value();
  if (vx == 0.0 || vy == 0.0) {
    throw DomainError(errc::ZeroVariance, "pearson is undefined for a constant vector");
  }
  return sxy.value() / std::sqrt(vx * vy);
}

const char* tagName(CulturalTag tag) noexcept {
  switch (tag) {
    case CulturalTag::InGroup: return "InGroup";
    case CulturalTag::OutGroup: return "OutGroup";
    case CulturalTag::SP: return "SP";
    case CulturalTag::SC: return "SC";
    case CulturalTag::None: return "None";
  }
  return "?";
}

bool isRelativeTag(CulturalTag tag) noexcept {
  return tag == CulturalTag::InGroup || tag == CulturalTag::OutGroup ||
         tag == CulturalTag::None;
}

bool isAbsoluteTag(CulturalTag tag) noexcept {
  return tag == CulturalTag::SP || tag == CulturalTag::SC || tag == CulturalTag::None;
}

Message Message::none() { return Message{}; }

Message Message::econOnly(Stance stance, std::optional<BinaryBelief> payload) {
  Message m;
  m.econ = stance;
  m.payload = std::move(payload);
  return m;
}

Message Message::cultureOnly(CulturalTag tag) {
  Message m;
  m.cultural = tag;
  return m;
}

Message Message::bundled(Stance stance, BinaryBelief payload, CulturalTag tag,
                         bool sameSource) {
  Message m;
  m.econ = stance;
  m.payload = payload;
  m.cultural = tag;
  m.sameSource = sameSource;
  return m;
}

void Message::validate() const {
  if (!econ.has_value() && payload.has_value()) {
    throw DomainError(errc::InvalidConfig,
                      "a message without an economic stance cannot carry a payload");
  }
}

void KahanSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace lab
