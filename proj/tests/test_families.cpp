#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "negen/families.hpp"
#include "negen/fock.hpp"
#include "negen/random.hpp"

using namespace negen;

namespace {

constexpr double pi = std::numbers::pi;

CoherentPair pair(double a, double b, double eta, double d2, double d, double d1 = 0.0) {
  return {std::polar(a, d1), std::polar(b, d2), std::polar(eta, d)};
}

bool within_cs_bound(double n, double R) { return R <= std::sqrt(n * (n + 1.0)) + 1e-9; }

}  // namespace

// ---------------------------------------------------------------------------
// Coherent pair

TEST(CoherentPair, FirstSearchMaximum) {
  const auto m = coherent_superposition_moments(pair(0.8, 0.8, 1.0, pi, 0.0));
  EXPECT_NEAR(m.F(), 0.278, 0.005);
  EXPECT_NEAR(m.n, 0.36, 0.005);
  EXPECT_NEAR(m.F(), 0.27846454, 1e-6);
}

TEST(CoherentPair, SecondSearchMaximum) {
  const auto m = coherent_superposition_moments(pair(0.0, 1.61, 1.0, 0.0, 0.0));
  EXPECT_NEAR(m.F(), 0.278, 0.005);
  EXPECT_NEAR(m.n, 1.0, 0.05);
}

TEST(CoherentPair, IdenticalStatesGiveCoherentState) {
  const auto m = coherent_superposition_moments(pair(0.9, 0.9, 1.0, 0.4, 0.0, 0.4));
  EXPECT_NEAR(m.n, 0.81, 1e-12);
  EXPECT_NEAR(m.R, 0.81, 1e-12);
  EXPECT_NEAR(m.F(), 0.0, 1e-12);
}

TEST(CoherentPair, ExactCancellationIsDegenerate) {
  EXPECT_THROW(coherent_superposition_moments(pair(1.0, 1.0, 1.0, 0.0, pi)), DegenerateState);
}

TEST(CoherentPair, SwapSymmetryAndPhaseDifference) {
  Stream rng(21, 0);
  for (int i = 0; i < 200; ++i) {
    const complex a = std::polar(rng.uniform(0, 3), rng.uniform(-pi, pi));
    const complex b = std::polar(rng.uniform(0, 3), rng.uniform(-pi, pi));
    const complex eta = std::polar(rng.uniform(0.2, 3), rng.uniform(-pi, pi));
    const auto m = coherent_superposition_moments({a, b, eta});
    const auto s = coherent_superposition_moments({b, a, 1.0 / eta});
    EXPECT_NEAR(m.n, s.n, 1e-10);
    EXPECT_NEAR(m.R, s.R, 1e-10);
    // Rotating both amplitudes by chi changes only the phase of <a^2>.
    const complex rot = std::polar(1.0, rng.uniform(-pi, pi));
    const auto r = coherent_superposition_moments({a * rot, b * rot, eta});
    EXPECT_NEAR(m.n, r.n, 1e-12 * std::max(1.0, m.n));
    EXPECT_NEAR(m.R, r.R, 1e-12 * std::max(1.0, m.R));
    EXPECT_TRUE(within_cs_bound(m.n, m.R));
  }
}

TEST(CoherentPair, ZeroEtaIsSingleCoherentState) {
  const auto m = coherent_superposition_moments(pair(1.3, 2.0, 0.0, 1.0, 0.0, 0.2));
  EXPECT_NEAR(m.n, 1.69, 1e-12);
  EXPECT_NEAR(m.R, 1.69, 1e-12);
  EXPECT_NEAR(m.gamma, 0.4, 1e-12);
}

// ---------------------------------------------------------------------------
// Squeezed vacuum and superpositions

TEST(SqueezedVacuum, Values) {
  const auto z = squeezed_vacuum_moments(0.0, 0.0);
  EXPECT_EQ(z.n, 0.0);
  EXPECT_EQ(z.R, 0.0);
  const auto m = squeezed_vacuum_moments(1.0, 0.0);
  EXPECT_NEAR(m.n, 1.3810978455418155, 1e-14);
  EXPECT_NEAR(m.R, 1.8134302039235093, 1e-14);
  EXPECT_NEAR(m.F(), 0.43233235838169365, 1e-14);
  EXPECT_NEAR(m.gamma, pi, 1e-15);
  EXPECT_GT(squeezed_vacuum_moments(5.0, 0.0).F(), 0.49);
  EXPECT_LT(squeezed_vacuum_moments(5.0, 0.0).F(), 0.5);
}

TEST(SqueezedVacuum, PhaseShiftsGamma) {
  EXPECT_NEAR(squeezed_vacuum_moments(0.7, 0.5).gamma, normalize_angle(0.5 + pi), 1e-15);
}

TEST(SuperposedSqueezed, ZeroEtaReducesToSqueezedVacuum) {
  for (double r : {0.0, 0.3, 1.0, 2.7}) {
    const auto a = superposed_squeezed_moments({r, 0.0});
    const auto b = squeezed_vacuum_moments(r, 0.0);
    EXPECT_NEAR(a.n, b.n, 1e-12 * std::max(1.0, b.n));
    EXPECT_NEAR(a.R, b.R, 1e-12 * std::max(1.0, b.R));
  }
}

TEST(SuperposedSqueezed, EqualWeightEvenCatNeverNegative) {
  for (int i = 1; i <= 400; ++i) EXPECT_LE(superposed_squeezed_moments({0.01 * i, 1.0}).F(), 1e-15);
}

TEST(SuperposedSqueezed, EtaAndInverseEtaAgree) {
  // |xi> + eta|-xi> is eta times |-xi> + eta^{-1}|xi>, a quarter-turn rotation
  // of |xi> + eta^{-1}|-xi>; n and R are unchanged.
  for (double r : {0.1, 0.6, 2.0}) {
    const auto a = superposed_squeezed_moments({r, 0.5});
    const auto b = superposed_squeezed_moments({r, 2.0});
    EXPECT_NEAR(a.n, b.n, 1e-12 * std::max(1.0, a.n));
    EXPECT_NEAR(a.R, b.R, 1e-12 * std::max(1.0, a.R));
  }
}

TEST(SuperposedSqueezed, UnequalWeightsPeakInside) {
  double best = -INFINITY, best_r = 0.0;
  for (int i = 1; i <= 4000; ++i) {
    const double r = 0.001 * i;
    const double F = superposed_squeezed_moments({r, 0.5}).F();
    if (F > best) {
      best = F;
      best_r = r;
    }
  }
  EXPECT_GT(best, 0.1);
  EXPECT_LT(best, 0.5);
  EXPECT_GT(best_r, 0.3);
  EXPECT_LT(best_r, 1.0);
}

TEST(SuperposedSqueezed, MatchesOracle) {
  using namespace fock;
  const int c = 256;
  const auto v = superpose({{1.0, squeezed_vacuum_vector(1.0, 0.0, c)}, {1.0, squeezed_vacuum_vector(-1.0, 0.0, c)}});
  const auto o = one_mode_moments(v);
  const auto m = superposed_squeezed_moments({1.0, 1.0});
  EXPECT_NEAR(o.n_a, m.n, 1e-8);
  EXPECT_NEAR(std::abs(o.a2 - m.a2()), 0.0, 1e-8);
}

// ---------------------------------------------------------------------------
// Coherent plus squeezed, vacuum plus squeezed

TEST(CoherentSqueezed, SignPatternForAlpha06) {
  auto F = [](double r) { return coherent_plus_squeezed_moments({r, 0.0, 0.6, 1.0}).F(); };
  EXPECT_GT(F(0.1), 0.0);
  EXPECT_LT(F(0.4), 0.0);
  EXPECT_GT(F(1.0), 0.0);
}

TEST(CoherentSqueezed, ZeroSqueezeIsCoherentPairWithVacuum) {
  for (double a : {0.2, 0.6, 1.5}) {
    for (double eta : {0.5, 1.0, 2.0}) {
      const auto m = coherent_plus_squeezed_moments({0.0, 0.3, a, eta});
      const auto c = coherent_superposition_moments({0.0, a, eta});
      EXPECT_NEAR(m.n, c.n, 1e-12);
      EXPECT_NEAR(m.R, c.R, 1e-12);
    }
  }
}

TEST(CoherentSqueezed, ZeroAlphaLargeR) {
  // Evaluates to 0.276 at r = 5 (direct evaluation; the same number follows
  // from the vacuum-plus-squeezed formula below).
  const double F = coherent_plus_squeezed_moments({5.0, 0.0, 0.0, 1.0}).F();
  EXPECT_NEAR(F, vacuum_plus_squeezed_moments({5.0, 1.0}).F(), 1e-9);
  EXPECT_NEAR(F, 0.2762, 5e-4);
}

TEST(CoherentSqueezed, ZeroEtaIsSqueezedVacuum) {
  const auto m = coherent_plus_squeezed_moments({1.2, 0.4, complex(0.7, 0.3), 0.0});
  const auto s = squeezed_vacuum_moments(1.2, 0.4);
  EXPECT_NEAR(m.n, s.n, 1e-12);
  EXPECT_NEAR(m.R, s.R, 1e-12);
  EXPECT_NEAR(m.gamma, s.gamma, 1e-12);
}

TEST(VacuumSqueezed, EqualsCoherentSqueezedAtZeroAlpha) {
  for (double r : {0.1, 0.8, 2.0}) {
    for (complex eta : {complex(1.0), complex(-0.5), std::polar(1.3, 0.7)}) {
      const auto a = vacuum_plus_squeezed_moments({r, eta});
      const auto b = coherent_plus_squeezed_moments({r, 0.0, 0.0, eta});
      EXPECT_NEAR(a.n, b.n, 1e-10);
      EXPECT_NEAR(a.R, b.R, 1e-10);
    }
  }
}

TEST(VacuumSqueezed, OddLimitIsTwoPhotonState) {
  const auto m = vacuum_plus_squeezed_moments({0.0, -1.0});
  EXPECT_EQ(m.n, 2.0);
  EXPECT_EQ(m.R, 0.0);
  EXPECT_EQ(m.F(), -2.0);
  // Approaching the limit continuously.
  const auto near = vacuum_plus_squeezed_moments({1e-5, -1.0});
  EXPECT_NEAR(near.n, 2.0, 1e-6);
  EXPECT_NEAR(near.R, 0.0, 1e-4);
}

TEST(VacuumSqueezed, NegativeEtaClosedFormAgrees) {
  for (double r : {0.05, 0.5, 2.0, 5.0}) {
    for (double e : {0.3, 1.0, 2.5}) {
      EXPECT_NEAR(vacuum_squeezed_F_negative_eta(r, e), vacuum_plus_squeezed_moments({r, -e}).F(),
                  1e-9 * std::max(1.0, std::sinh(r) * std::sinh(r)))
          << "r=" << r << " eta=-" << e;
    }
  }
}

TEST(VacuumSqueezed, OddCurveRisesThroughSix) {
  // Direct evaluation: at eta = -1 the curve is still rising at r = 6.
  EXPECT_NEAR(vacuum_squeezed_F_negative_eta(6.0, 1.0), 0.231063, 1e-6);
  EXPECT_GT(vacuum_squeezed_F_negative_eta(6.0, 1.0), vacuum_squeezed_F_negative_eta(5.9, 1.0));
}

TEST(VacuumSqueezed, MatchesOracle) {
  using namespace fock;
  const int c = 512;
  const auto v = superpose({{1.0, squeezed_vacuum_vector(1.5, 0.0, c)}, {-1.0, coherent_vector(0.0, c)}});
  const auto o = one_mode_moments(v);
  const auto m = vacuum_plus_squeezed_moments({1.5, -1.0});
  EXPECT_NEAR(o.n_a, m.n, 1e-8);
  EXPECT_NEAR(std::abs(o.a2 - m.a2()), 0.0, 1e-8);
}

// ---------------------------------------------------------------------------
// Two-mode families

TEST(BarnettRadmore, Values) {
  const auto z = barnett_radmore_moments({0.0, 0.0});
  EXPECT_EQ(z.n1 + z.n2 + z.R1 + z.R2 + z.R3 + z.R4, 0.0);
  const auto m = barnett_radmore_moments({1.0, 0.3});
  EXPECT_NEAR(m.R4, 1.8134302039235093, 1e-14);
  EXPECT_NEAR(m.gamma4, 0.3 - pi, 1e-14);
  EXPECT_EQ(m.R1 + m.R2 + m.R3, 0.0);
}

TEST(BarnettRadmore, MatchesOracle) {
  const auto o = fock::two_mode_moments(fock::two_mode_squeezed_vector(0.5, 0.0, 64)).two_mode();
  const auto m = barnett_radmore_moments({0.5, 0.0});
  EXPECT_NEAR(o.n1, m.n1, 1e-8);
  EXPECT_NEAR(o.n2, m.n2, 1e-8);
  EXPECT_NEAR(std::abs(o.ab() - m.ab()), 0.0, 1e-8);
}

TEST(Zhang, PiPhaseHasNoSecondMoment) {
  for (double r : {0.01, 0.5, 2.0}) {
    const auto m = zhang_moments({r, pi});
    EXPECT_NEAR(m.R1, 0.0, 1e-14);
    EXPECT_LE(m.R1 - m.n1, 0.0);
  }
}

TEST(Zhang, PhasesAndVanishingCrossTerms) {
  const auto m = zhang_moments({0.3, 0.5 * pi});
  EXPECT_NEAR(m.gamma1, -pi / 2, 1e-15);
  EXPECT_NEAR(m.gamma2, -pi / 2, 1e-15);
  EXPECT_EQ(m.R3, 0.0);
  EXPECT_EQ(m.R4, 0.0);
}

TEST(Zhang, MatchesOracle) {
  using namespace fock;
  const double r = 0.5, th = pi / 2;
  const auto minus = squeezed_vacuum_vector(-r, 0.0, 96);
  const auto plus = squeezed_vacuum_vector(r, 0.0, 96);
  const auto o = two_mode_moments(
      superpose_two_mode({{1.0, product(minus, minus)}, {std::polar(1.0, th), product(plus, plus)}}));
  const auto m = zhang_moments({r, th});
  EXPECT_NEAR(o.n_a, m.n1, 1e-8);
  EXPECT_NEAR(std::abs(o.a2 - m.a2()), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(o.b2 - m.b2()), 0.0, 1e-8);
  EXPECT_NEAR(std::abs(o.adag_b), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(o.ab), 0.0, 1e-12);
}

TEST(ZhangAsymptotics, Coefficients) {
  const auto q = zhang_small_r_asymptotics(pi / 2);
  EXPECT_NEAR(q.c_n, 1.0, 1e-15);
  EXPECT_NEAR(q.c_Rn, 1.0, 1e-15);
  const auto z = zhang_small_r_asymptotics(0.0);
  EXPECT_EQ(z.c_n, 0.0);
  EXPECT_EQ(z.c_Rn, 0.0);
  EXPECT_THROW(zhang_small_r_asymptotics(pi), std::domain_error);
}

TEST(ZhangAsymptotics, MatchExactAtSmallR) {
  const double th = 0.99 * pi, r = 1e-4;
  const auto q = zhang_small_r_asymptotics(th);
  const auto m = zhang_moments({r, th});
  EXPECT_NEAR(m.n1 / (q.c_n * r * r), 1.0, 0.01);
  EXPECT_NEAR((m.R1 - m.n1) / (q.c_Rn * r), 1.0, 0.01);
}

TEST(EntangledCoherent, ZeroAmplitude) {
  const auto m = entangled_coherent_moments({0.0, 0.0, 0.0, 0.0});
  EXPECT_EQ(m.n1 + m.n2 + m.R1 + m.R2 + m.R3 + m.R4, 0.0);
}

TEST(EntangledCoherent, MatchesOracleAtSigma07) {
  using namespace fock;
  const double s = 0.7;
  const auto o = two_mode_moments(superpose_two_mode({{1.0, product(coherent_vector(s, 48), coherent_vector(s, 48))},
                                                      {1.0, product(coherent_vector(-s, 48), coherent_vector(-s, 48))}}))
                     .two_mode();
  const auto m = entangled_coherent_moments({s, 0.0, 0.0, 0.0});
  EXPECT_NEAR(m.R4, 0.49, 1e-12);
  EXPECT_NEAR(o.R4, m.R4, 1e-10);
  EXPECT_NEAR(o.n1, m.n1, 1e-10);
  EXPECT_NEAR(o.R1, m.R1, 1e-10);
  EXPECT_NEAR(o.R3, m.R3, 1e-10);
  // Direct evaluation of the shipped forms.
  EXPECT_NEAR(m.n1, 0.369002293, 1e-9);
  EXPECT_NEAR(m.R1, 0.49, 1e-12);
  EXPECT_NEAR(m.R3, m.n1, 1e-12);
}

TEST(EntangledCoherent, AlternateListValues) {
  // The alternate moment list, evaluated directly; the oracle rejects it (see
  // MatchesOracleAtSigma07).
  const auto m = variants::entangled_coherent_moments_alt({0.7, 0.0, 0.0, 0.0});
  EXPECT_NEAR(m.n1, 0.2683, 1e-4);
  EXPECT_NEAR(m.R1, 0.5906, 1e-4);
  EXPECT_NEAR(m.R3, 0.1845, 1e-4);
  EXPECT_NEAR(m.R4, 0.49, 1e-15);
}

TEST(FSigma, Values) {
  EXPECT_EQ(f_sigma(0.0), 0.0);
  EXPECT_NEAR(f_sigma(0.7), 0.2217, 5e-5);
  double best = 0.0, arg = 0.0;
  for (int i = 0; i <= 30000; ++i) {
    const double s = 1e-4 * i;
    if (f_sigma(s) > best) {
      best = f_sigma(s);
      arg = s;
    }
  }
  EXPECT_NEAR(arg, 0.7, 0.05);
}

// ---------------------------------------------------------------------------
// Properties across families

TEST(AllFamilies, CauchySchwarzBound) {
  Stream rng(22, 0);
  auto ph = [&] { return rng.uniform(-pi, pi); };
  for (int i = 0; i < 300; ++i) {
    const double r = rng.uniform(0, 3);
    const complex a = std::polar(rng.uniform(0, 3), ph()), b = std::polar(rng.uniform(0, 3), ph());
    const complex eta = std::polar(rng.uniform(0, 3), ph());
    const FamilyParams ps[] = {CoherentPair{a, b, eta},
                               SqueezedPair{r, eta},
                               CoherentSqueezed{r, ph(), a, eta},
                               VacuumSqueezed{r, eta},
                               BarnettRadmore{r, ph()},
                               ZhangReal{r, ph()},
                               EntangledCoherent{rng.uniform(0, 3), ph(), ph(), ph()}};
    for (const auto& p : ps) {
      TwoModeMoments m;
      try {
        m = family_moments(p);
      } catch (const DegenerateState&) {
        continue;
      }
      EXPECT_TRUE(within_cs_bound(m.n1, m.R1)) << "family " << p.index() << " draw " << i;
      EXPECT_TRUE(within_cs_bound(m.n2, m.R2)) << "family " << p.index() << " draw " << i;
      EXPECT_GE(m.n1, -1e-12);
      EXPECT_GE(m.n2, -1e-12);
      for (double g : {m.gamma1, m.gamma2, m.gamma3, m.gamma4}) {
        EXPECT_GT(g, -pi);
        EXPECT_LE(g, pi);
      }
    }
  }
}

TEST(AllFamilies, ZeroEtaReductions) {
  for (double r : {0.2, 1.0, 2.0}) {
    const auto s = squeezed_vacuum_moments(r, 0.0);
    const auto v = vacuum_plus_squeezed_moments({r, 0.0});
    EXPECT_NEAR(v.n, s.n, 1e-12 * std::max(1.0, s.n));
    EXPECT_NEAR(v.R, s.R, 1e-12 * std::max(1.0, s.R));
  }
}

TEST(AllFamilies, OneModeFamiliesLeaveModeTwoEmpty) {
  const auto m = family_moments(SqueezedPair{1.0, 0.5});
  EXPECT_EQ(m.n2 + m.R2 + m.R3 + m.R4, 0.0);
  EXPECT_FALSE(is_two_mode(SqueezedPair{}));
  EXPECT_TRUE(is_two_mode(ZhangReal{}));
}

TEST(Variants, LinearTanhDisagreesWithOracle) {
  using namespace fock;
  const auto o = matrix_element(squeezed_vacuum_vector(-1.0, 0.0, 512), Ladder::lower2,
                                squeezed_vacuum_vector(1.0, 0.0, 512));
  EXPECT_NEAR(o.real(), cross::squeezed_lower2(1.0), 1e-10);
  EXPECT_GT(std::abs(o.real() - variants::squeezed_lower2_linear_tanh(1.0)), 1e-3);
}
