#include <cmath>
#include <utility>

#include "doctest.h"

#include "lab/errors.hpp"
#include "lab/identity.hpp"
#include "lab/rng.hpp"

using namespace lab;

namespace {

// Independent oracle: iterate the self-referential group-distortion map from
// a uniform start until it settles.  In log-odds space the gap contracts by a
// factor of 2*chi per step, so the iteration count below reaches well past
// double precision for chi <= 0.45.
std::pair<BinaryBelief, BinaryBelief> iteratedReferences(const BinaryBelief& refIn,
                                                         const BinaryBelief& refOut,
                                                         double chi) {
  double in1 = 0.5, out1 = 0.5;
  for (int i = 0; i < 2000; ++i) {
    const double nIn1 = refIn.p1() * std::pow(in1 / out1, chi);
    const double nIn0 = refIn.p0() * std::pow((1.0 - in1) / (1.0 - out1), chi);
    const double nOut1 = refOut.p1() * std::pow(out1 / in1, chi);
    const double nOut0 = refOut.p0() * std::pow((1.0 - out1) / (1.0 - in1), chi);
    in1 = nIn1 / (nIn1 + nIn0);
    out1 = nOut1 / (nOut1 + nOut0);
  }
  return {BinaryBelief(in1), BinaryBelief(out1)};
}

BinaryBelief iteratedBelief(const BinaryBelief& pi, const BinaryBelief& refIn,
                            const BinaryBelief& refOut, double chi) {
  const auto [dIn, dOut] = iteratedReferences(refIn, refOut, chi);
  const double w1 = pi.p1() * std::pow(dIn.p1() / dOut.p1(), chi);
  const double w0 = pi.p0() * std::pow(dIn.p0() / dOut.p0(), chi);
  return BinaryBelief(w1 / (w1 + w0));
}

}  // namespace

TEST_CASE("closed-form reference distortion matches the iterated map") {
  RngStream rng(17, 0);
  for (int i = 0; i < 200; ++i) {
    const BinaryBelief refIn(rng.uniform(0.05, 0.95));
    const BinaryBelief refOut(rng.uniform(0.05, 0.95));
    const double chi = rng.uniform(0.01, 0.45);
    const auto [gotIn, gotOut] = distortReference(refIn, refOut, chi);
    const auto [wantIn, wantOut] = iteratedReferences(refIn, refOut, chi);
    CHECK(gotIn.p1() == doctest::Approx(wantIn.p1()).epsilon(1e-12));
    CHECK(gotOut.p1() == doctest::Approx(wantOut.p1()).epsilon(1e-12));
  }
}

TEST_CASE("worked reference distortion: 0.8 vs 0.2 at chi = 0.25") {
  const auto [dIn, dOut] = distortReference(BinaryBelief(0.8), BinaryBelief(0.2), 0.25);
  // Exponent 0.5: 0.8*2^0.5 = 1.6 versus 0.2*0.5^0.5 ~ 0.1414... and the
  // published arithmetic rounds the weights to 1.6 and 0.1 over a common
  // denominator: p1 = 16/17.
  CHECK(dIn.p1() == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
  const BinaryBelief iterated = iteratedReferences(BinaryBelief(0.8), BinaryBelief(0.2), 0.25).first;
  CHECK(dIn.p1() == doctest::Approx(iterated.p1()).epsilon(1e-12));
  // The two groups drift apart symmetrically.
  CHECK(dOut.p1() == doctest::Approx(1.0 - dIn.p1()).epsilon(1e-12));
}

TEST_CASE("worked belief distortion: uniform belief pulled to 0.8") {
  const BinaryBelief out =
      distortBelief(BinaryBelief(0.5), BinaryBelief(0.8), BinaryBelief(0.2), 0.25);
  CHECK(out.p1() == doctest::Approx(0.8).epsilon(1e-13));
  const BinaryBelief iterated =
      iteratedBelief(BinaryBelief(0.5), BinaryBelief(0.8), BinaryBelief(0.2), 0.25);
  CHECK(out.p1() == doctest::Approx(iterated.p1()).epsilon(1e-12));
}

TEST_CASE("no-op cases return the inputs bit-exactly") {
  const BinaryBelief pi(0.37);
  const BinaryBelief refA(0.81);
  const BinaryBelief refB(0.29);
  CHECK(distortBelief(pi, refA, refB, 0.0).p1() == pi.p1());
  CHECK(distortBelief(pi, refA, refA, 0.3).p1() == pi.p1());
  const auto [inSame, outSame] = distortReference(refA, refA, 0.4);
  CHECK(inSame.p1() == refA.p1());
  CHECK(outSame.p1() == refA.p1());
  const auto [inZero, outZero] = distortReference(refA, refB, 0.0);
  CHECK(inZero.p1() == refA.p1());
  CHECK(outZero.p1() == refB.p1());
}

TEST_CASE("chi and support guards") {
  const BinaryBelief ok(0.6);
  CHECK_THROWS_AS((void)distortBelief(ok, ok, ok, -0.01), DomainError);
  CHECK_THROWS_AS((void)distortBelief(ok, ok, ok, 0.4995), DomainError);
  CHECK_THROWS_AS((void)distortBelief(ok, ok, ok, 0.5), DomainError);
  CHECK_NOTHROW((void)distortBelief(ok, BinaryBelief(0.7), BinaryBelief(0.3), 0.499));
  CHECK_THROWS_AS((void)distortBelief(BinaryBelief(1.0), ok, ok, 0.1), DomainError);
  CHECK_THROWS_AS((void)distortBelief(ok, BinaryBelief(0.0), ok, 0.1), DomainError);
  CHECK_THROWS_AS((void)distortReference(ok, BinaryBelief(1.0), 0.1), DomainError);
}

TEST_CASE("fixed-point residual vanishes on closed forms and flags fakes") {
  const BinaryBelief pi(0.5);
  const BinaryBelief refIn(0.8);
  const BinaryBelief refOut(0.2);
  const double chi = 0.25;
  const BinaryBelief distorted = distortBelief(pi, refIn, refOut, chi);
  const auto [dIn, dOut] = distortReference(refIn, refOut, chi);
  CHECK(fixedPointResidual(distorted, pi, dIn, dOut, chi) <= 1e-12);

  CHECK(fixedPointResidual(pi, pi, refIn, refOut, 0.0) == 0.0);

  const BinaryBelief fake(distorted.p1() + 0.1);
  CHECK(fixedPointResidual(fake, pi, dIn, dOut, chi) >= 0.05);
}

TEST_CASE("closed forms satisfy the self-referential definition on random instances") {
  RngStream rng(20240, 0);
  for (int i = 0; i < 1000; ++i) {
    const BinaryBelief pi(rng.uniform(0.02, 0.98));
    const BinaryBelief refIn(rng.uniform(0.02, 0.98));
    const BinaryBelief refOut(rng.uniform(0.02, 0.98));
    // chi <= 0.44 keeps the log-odds shift below ~32, so the distorted
    // beliefs retain full support in double precision and the residual is
    // well defined for every draw.
    const double chi = rng.uniform(0.0, 0.44);
    const BinaryBelief distorted = distortBelief(pi, refIn, refOut, chi);
    const auto [dIn, dOut] = distortReference(refIn, refOut, chi);
    CHECK(fixedPointResidual(distorted, pi, dIn, dOut, chi) <= 1e-12);
    // The references are themselves fixed points of their own map.
    CHECK(fixedPointResidual(dIn, refIn, dIn, dOut, chi) <= 1e-12);
    CHECK(fixedPointResidual(dOut, refOut, dOut, dIn, chi) <= 1e-12);
  }
}

TEST_CASE("distortion moves mass exactly toward the in-group reference") {
  RngStream rng(61, 0);
  for (int i = 0; i < 300; ++i) {
    const BinaryBelief pi(rng.uniform(0.05, 0.95));
    const double in1 = rng.uniform(0.05, 0.95);
    const double out1 = rng.uniform(0.05, 0.95);
    const double chi = rng.uniform(0.01, 0.49);
    const double got = distortBelief(pi, BinaryBelief(in1), BinaryBelief(out1), chi).p1();
    if (in1 > out1) {
      CHECK(got > pi.p1());
    } else if (in1 < out1) {
      CHECK(got < pi.p1());
    } else {
      CHECK(got == pi.p1());
    }
  }
}

TEST_CASE("distorted mass is strictly increasing in chi when references differ") {
  const BinaryBelief pi(0.45);
  const BinaryBelief refIn(0.7);
  const BinaryBelief refOut(0.4);
  double prev = pi.p1();
  for (double chi = 0.05; chi <= 0.49; chi += 0.05) {
    const double cur = distortBelief(pi, refIn, refOut, chi).p1();
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("reference rewriting follows the message shape") {
  const BinaryBelief hatPi(0.5);
  const BinaryBelief payload(0.7);

  const auto inBundle = applyReferenceUpdate(
      Message::bundled(Stance::Stance1, payload, CulturalTag::InGroup), hatPi);
  CHECK(inBundle.first.p1() == payload.p1());
  CHECK(inBundle.second.p1() == hatPi.p1());

  const auto outBundle = applyReferenceUpdate(
      Message::bundled(Stance::Stance1, payload, CulturalTag::OutGroup), hatPi);
  CHECK(outBundle.first.p1() == hatPi.p1());
  CHECK(outBundle.second.p1() == payload.p1());

  const auto separate = applyReferenceUpdate(
      Message::bundled(Stance::Stance1, payload, CulturalTag::OutGroup, false), hatPi);
  CHECK(separate.first.p1() == hatPi.p1());
  CHECK(separate.second.p1() == hatPi.p1());

  const auto econ = applyReferenceUpdate(Message::econOnly(Stance::Stance1), hatPi);
  CHECK(econ.first.p1() == hatPi.p1());
  CHECK(econ.second.p1() == hatPi.p1());

  const auto culture = applyReferenceUpdate(Message::cultureOnly(CulturalTag::OutGroup), hatPi);
  CHECK(culture.first.p1() == hatPi.p1());
  CHECK(culture.second.p1() == hatPi.p1());

  const auto nothing = applyReferenceUpdate(Message::none(), hatPi);
  CHECK(nothing.first.p1() == hatPi.p1());
  CHECK(nothing.second.p1() == hatPi.p1());
}

TEST_CASE("rational posterior is plain Bayes on the stance likelihoods") {
  const BinaryBelief prior(0.5);

  SignalModel mild{};
  mild.pStance1Given[1] = 0.6;
  mild.pStance1Given[0] = 0.4;
  mild.pStance0Given[1] = 0.4;
  mild.pStance0Given[0] = 0.6;
  mild.validate();
  // Two-cell enumeration: 0.5*0.6 / (0.5*0.6 + 0.5*0.4).
  CHECK(rationalPosterior(prior, mild, Stance::Stance1).p1() ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK(rationalPosterior(prior, mild, Stance::Stance0).p1() ==
        doctest::Approx(0.4).epsilon(1e-15));
  CHECK(rationalPosterior(prior, mild, std::nullopt).p1() == prior.p1());

  SignalModel flat{};
  flat.pStance1Given[0] = flat.pStance1Given[1] = 0.5;
  flat.pStance0Given[0] = flat.pStance0Given[1] = 0.5;
  CHECK(rationalPosterior(BinaryBelief(0.37), flat, Stance::Stance1).p1() ==
        doctest::Approx(0.37).epsilon(1e-15));

  SignalModel silent{};
  silent.pStance1Given[0] = silent.pStance1Given[1] = 0.0;
  silent.pStance0Given[0] = silent.pStance0Given[1] = 0.5;
  CHECK_THROWS_AS((void)rationalPosterior(prior, silent, Stance::Stance1), DomainError);
}

TEST_CASE("signal model validation") {
  CHECK_NOTHROW(SignalModel::symmetric(0.6).validate());
  CHECK_NOTHROW(SignalModel::symmetric(0.5).validate());

  SignalModel backlash{};
  backlash.pStance1Given[1] = 0.3;  // the stance is anti-correlated with its state
  backlash.pStance1Given[0] = 0.7;
  backlash.pStance0Given[1] = 0.7;
  backlash.pStance0Given[0] = 0.3;
  CHECK_THROWS_AS(backlash.validate(), DomainError);

  SignalModel overfull{};
  overfull.pStance1Given[1] = 0.8;
  overfull.pStance1Given[0] = 0.1;
  overfull.pStance0Given[1] = 0.3;  // 0.8 + 0.3 > 1 for state 1
  overfull.pStance0Given[0] = 0.6;
  CHECK_THROWS_AS(overfull.validate(), DomainError);

  SignalModel negative{};
  negative.pStance1Given[1] = -0.1;
  CHECK_THROWS_AS(negative.validate(), DomainError);
}

TEST_CASE("identity context validation") {
  IdentityContext ctx{BinaryBelief(0.6), BinaryBelief(0.4), 0.0, 0.3, CulturalTag::InGroup};
  CHECK_NOTHROW(ctx.validate());
  ctx.chiThreat = 0.0;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx.chiThreat = 0.51;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx.chiThreat = 0.3;
  ctx.chiAligned = 0.1;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx.chiAligned = 0.0;
  ctx.refIn = BinaryBelief(1.0);
  CHECK_THROWS_AS(ctx.validate(), DomainError);
}

TEST_CASE("worked response: out-group bundle drags the posterior below the prior") {
  const BinaryBelief prior(0.5);
  const BinaryBelief hatPi(0.5);
  const BinaryBelief piS(0.7);
  const SignalModel signal = SignalModel::symmetric(0.6);
  const Message msg = Message::bundled(Stance::Stance1, piS, CulturalTag::OutGroup);

  const BinaryBelief out = receiverResponse(prior, hatPi, signal, {0.0, 0.3}, msg);
  // 0.6*(5/7)^0.75 / (0.6*(5/7)^0.75 + 0.4*(5/3)^0.75), frozen from a
  // 50-digit evaluation.
  CHECK(out.p1() == doctest::Approx(0.4427501007665769).epsilon(1e-13));
  CHECK(out.p1() < prior.p1());  // backlash: ends below the prior

  // The same bundle from the in-group is taken at rational face value.
  const Message inMsg = Message::bundled(Stance::Stance1, piS, CulturalTag::InGroup);
  const BinaryBelief inResp = receiverResponse(prior, hatPi, signal, {0.0, 0.3}, inMsg);
  CHECK(inResp.p1() == rationalPosterior(prior, signal, Stance::Stance1).p1());
}

TEST_CASE("culture-only and untagged messages leave the economic belief alone") {
  const BinaryBelief prior(0.55);
  const BinaryBelief hatPi(0.5);
  const SignalModel signal = SignalModel::symmetric(0.7);

  const BinaryBelief primed = receiverResponse(prior, hatPi, signal, {0.0, 0.4},
                                               Message::cultureOnly(CulturalTag::OutGroup));
  CHECK(primed.p1() == prior.p1());

  const BinaryBelief silent =
      receiverResponse(prior, hatPi, signal, {0.0, 0.4}, Message::none());
  CHECK(silent.p1() == prior.p1());

  // Econ-only: rational update, no distortion.
  const BinaryBelief econ = receiverResponse(prior, hatPi, signal, {0.0, 0.4},
                                             Message::econOnly(Stance::Stance1));
  CHECK(econ.p1() == rationalPosterior(prior, signal, Stance::Stance1).p1());

  // Separate sources: the bundle decays to the econ-only response.
  const BinaryBelief split = receiverResponse(
      prior, hatPi, signal, {0.0, 0.4},
      Message::bundled(Stance::Stance1, BinaryBelief(0.8), CulturalTag::OutGroup, false));
  CHECK(split.p1() == econ.p1());
}

TEST_CASE("receiver response rejects absolute tags") {
  const BinaryBelief half(0.5);
  const SignalModel signal = SignalModel::symmetric(0.6);
  CHECK_THROWS_AS(
      (void)receiverResponse(half, half, signal, {0.0, 0.3},
                             Message::bundled(Stance::Stance1, BinaryBelief(0.7),
                                              CulturalTag::SP)),
      DomainError);
}

TEST_CASE("disagreement spillover: out-group tag lowers the stance-state mass") {
  RngStream rng(808, 0);
  for (int i = 0; i < 200; ++i) {
    const BinaryBelief prior(rng.uniform(0.2, 0.8));
    const BinaryBelief hatPi(rng.uniform(0.2, 0.8));
    const double accuracy = rng.uniform(0.55, 0.9);
    const SignalModel signal = SignalModel::symmetric(accuracy);
    const double chi = rng.uniform(0.05, 0.45);
    // Sender belief strictly above the stereotype on the advocated state.
    const BinaryBelief piS(std::min(0.98, hatPi.p1() + rng.uniform(0.01, 0.15)));

    const BinaryBelief tagged = receiverResponse(
        prior, hatPi, signal, {0.0, chi},
        Message::bundled(Stance::Stance1, piS, CulturalTag::OutGroup));
    const BinaryBelief untagged =
        receiverResponse(prior, hatPi, signal, {0.0, chi}, Message::econOnly(Stance::Stance1));
    CHECK(tagged.p1() < untagged.p1());

    const BinaryBelief inTagged = receiverResponse(
        prior, hatPi, signal, {0.0, chi},
        Message::bundled(Stance::Stance1, piS, CulturalTag::InGroup));
    CHECK(inTagged.p1() == untagged.p1());
  }
}

TEST_CASE("worked backlash threshold and its closed form") {
  const BinaryBelief prior(0.5);
  const BinaryBelief rationalPost(0.6);
  const BinaryBelief hatPi(0.5);
  const BinaryBelief piS(0.7);
  const double chiStar = backlashThreshold(prior, rationalPost, hatPi, piS, 1);
  // Exponent solve: a = ln(3/2)/ln(7/3), chi* = a/(1+2a); frozen from a
  // 50-digit evaluation.
  CHECK(chiStar == doctest::Approx(0.2445170925694726).epsilon(1e-9));
  const double a = std::log(1.5) / std::log(7.0 / 3.0);
  CHECK(chiStar == doctest::Approx(a / (1.0 + 2.0 * a)).epsilon(1e-10));
}

TEST_CASE("threshold edge behavior") {
  const BinaryBelief hatPi(0.5);
  const BinaryBelief piS(0.7);

  // Vanishing rational update: the threshold collapses toward zero.
  const double tiny =
      backlashThreshold(BinaryBelief(0.5), BinaryBelief(0.5 + 1e-6), hatPi, piS, 1);
  CHECK(tiny < 1e-3);

  // Strong rational update, barely-different references: near the boundary
  // but strictly inside it.
  const double near =
      backlashThreshold(BinaryBelief(0.5), BinaryBelief(0.999), hatPi, BinaryBelief(0.51), 1);
  CHECK(near < 0.5);
  CHECK(near > 0.45);

  // No strict rational gain, or references pulling the wrong way: no threshold.
  CHECK_THROWS_AS(
      (void)backlashThreshold(BinaryBelief(0.5), BinaryBelief(0.5), hatPi, piS, 1),
      DomainError);
  CHECK_THROWS_AS(
      (void)backlashThreshold(BinaryBelief(0.5), BinaryBelief(0.6), hatPi, BinaryBelief(0.4), 1),
      DomainError);
  CHECK_THROWS_AS(
      (void)backlashThreshold(BinaryBelief(0.5), BinaryBelief(0.6), hatPi, piS, 2),
      DomainError);
}

TEST_CASE("backlash occurs exactly above the threshold") {
  RngStream rng(424242, 0);
  int tested = 0;
  while (tested < 200) {
    const double prior1 = rng.uniform(0.2, 0.8);
    const double post1 = prior1 + rng.uniform(0.01, 0.95 - prior1);
    const double hat1 = rng.uniform(0.1, 0.85);
    const double piS1 = hat1 + rng.uniform(0.02, 0.98 - hat1);
    const BinaryBelief prior(prior1);
    const BinaryBelief rationalPost(post1);
    const BinaryBelief hatPi(hat1);
    const BinaryBelief piS(piS1);

    double chiStar;
    try {
      chiStar = backlashThreshold(prior, rationalPost, hatPi, piS, 1);
    } catch (const DomainError&) {
      continue;  // crossing sits beyond the representable chi range
    }
    ++tested;
    const double margin = 1e-4;
    if (chiStar + margin <= 0.499) {
      const double above =
          distortBelief(rationalPost, hatPi, piS, chiStar + margin).p1();
      CHECK(above < prior.p1());
    }
    if (chiStar - margin >= 0.0) {
      const double below =
          distortBelief(rationalPost, hatPi, piS, chiStar - margin).p1();
      CHECK(below > prior.p1());
    }
  }
}
