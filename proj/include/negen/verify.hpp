#pragma once

// Cross-checks of the closed-form moments against the number-basis oracle:
// seeded random draws per family, the squeezed/coherent matrix-element
// identities, and informational comparisons for formula variants that the
// oracle rejects.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "negen/energy_density.hpp"
#include "negen/families.hpp"
#include "negen/fock.hpp"
#include "negen/random.hpp"

namespace negen::verify {

inline constexpr double kIdentityTol = 1e-10;
inline constexpr double kConvergedTail = 1e-14;
inline constexpr int kMaxCutoffOneMode = 8192;
inline constexpr int kMaxCutoffPerMode = 512;

struct FamilyReport {
  std::string family;
  int draws = 0;
  double max_deviation = 0.0;  // largest |closed form - oracle| over all moments and draws
  double tolerance = 0.0;      // tolerance that applied at the worst draw
  double max_tail = 0.0;       // largest oracle tail mass used
  std::string worst;           // parameters of the worst draw
  bool pass = true;
};

struct IdentityReport {
  std::string name;
  double r = 0.0;
  double deviation = 0.0;
  double tolerance = kIdentityTol;
  bool pass = true;
};

/// A formula variant compared with the oracle; never affects pass/fail.
struct Discrepancy {
  std::string name;
  std::string where;
  double deviation = 0.0;
};

struct VerifyReport {
  std::vector<FamilyReport> families;
  std::vector<IdentityReport> identities;
  std::vector<Discrepancy> discrepancies;

  bool pass() const {
    return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.pass; }) &&
           std::all_of(identities.begin(), identities.end(), [](const auto& i) { return i.pass; });
  }
};

struct VerifyConfig {
  int draws = 100;
  std::uint64_t seed = 7;
  int cutoff_one_mode = 64;  // starting cutoffs; doubled until the tail is negligible
  int cutoff_per_mode = 32;
  std::vector<std::string> families;  // empty means all
};

inline std::vector<std::string> family_names() {
  return {"coherent-pair",   "squeezed-vacuum", "superposed-squeezed", "coherent-squeezed",
          "vacuum-squeezed", "barnett-radmore", "zhang",               "entangled-coherent"};
}

// ---------------------------------------------------------------------------
// Oracle states with adaptive cutoff

/// Builds build(c) for c = start, 2 start, ... until the tail mass is at most
/// kConvergedTail. Throws TruncationError if the cap is reached while the tail
/// still exceeds the strict threshold.
template <class Build>
auto converged_state(Build build, int start, int cap) {
  int c = start;
  for (;;) {
    auto v = build(c);
    if (v.tail_mass() <= kConvergedTail) return v;
    if (2 * c > cap) {
      if (v.tail_mass() > fock::kStrictTail) {
        throw TruncationError("oracle tail mass " + std::to_string(v.tail_mass()) + " at cutoff cap " +
                              std::to_string(c));
      }
      return v;
    }
    c *= 2;
  }
}

inline double max_deviation(const fock::OracleMoments& o, const TwoModeMoments& m) {
  return std::max({std::abs(o.n_a - m.n1), std::abs(o.n_b - m.n2), std::abs(o.a2 - m.a2()),
                   std::abs(o.b2 - m.b2()), std::abs(o.adag_b - m.adag_b()), std::abs(o.ab - m.ab())});
}

/// || c1 u + c2 v ||^2 relative to |c1|^2 + |c2|^2; small values mean the
/// two terms nearly cancel and the normalized state is ill-conditioned.
template <class State, class Inner>
double cancellation(complex c1, const State& u, complex c2, const State& v, Inner inner) {
  const double plain = std::norm(c1) + std::norm(c2);
  return (plain + 2.0 * std::real(std::conj(c1) * c2 * inner(u, v))) / plain;
}

inline complex inner2(const fock::TwoModeFockVector& u, const fock::TwoModeFockVector& v) {
  complex s{};
  auto a = u.amps(), b = v.amps();
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// One random parameter draw: the closed form, the oracle moments and its tail.
struct Sample {
  TwoModeMoments closed;
  fock::OracleMoments oracle;
  double tail = 0.0;
  std::string params;
  bool ok = false;  // false: draw rejected as ill-conditioned
};

inline std::string fmt(const char* f, auto... v) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

/// Draws parameters for the named family and evaluates both sides. One-mode
/// squeeze parameters stay below 2.5, two-mode ones below 1.5, coherent
/// amplitudes below 3.
inline Sample draw_sample(const std::string& family, Stream& rng, const VerifyConfig& cfg) {
  using namespace fock;
  constexpr double pi = std::numbers::pi;
  const int c1 = cfg.cutoff_one_mode, c2 = cfg.cutoff_per_mode;
  // Cutoffs grow inside converged_state, which applies the strict tail limit.
  const auto policy = Truncation::flag;
  auto phase = [&] { return rng.uniform(-pi, pi); };
  constexpr double kMinNorm = 1e-3;
  Sample s;

  auto one_mode = [&](complex k1, auto b1, complex k2, auto b2) {
    const auto u = converged_state(b1, c1, kMaxCutoffOneMode);
    const auto v = converged_state(b2, c1, kMaxCutoffOneMode);
    const int c = std::max(u.cutoff(), v.cutoff());
    const auto uu = b1(c), vv = b2(c);
    if (cancellation(k1, uu, k2, vv, inner) < kMinNorm) return false;
    const auto w = superpose({{k1, uu}, {k2, vv}});
    s.oracle = one_mode_moments(w);
    s.tail = std::max(uu.tail_mass(), vv.tail_mass());
    return true;
  };
  auto two_mode = [&](complex k1, auto b1, complex k2, auto b2) {
    const auto u = converged_state(b1, c2, kMaxCutoffPerMode);
    const auto v = converged_state(b2, c2, kMaxCutoffPerMode);
    const int c = std::max(u.cutoff_a(), v.cutoff_a());
    const auto uu = b1(c), vv = b2(c);
    if (cancellation(k1, uu, k2, vv, inner2) < kMinNorm) return false;
    const auto w = superpose_two_mode({{k1, uu}, {k2, vv}});
    s.oracle = two_mode_moments(w);
    s.tail = std::max(uu.tail_mass(), vv.tail_mass());
    return true;
  };

  if (family == "coherent-pair") {
    const complex a = std::polar(rng.uniform(0, 3), phase());
    const complex b = std::polar(rng.uniform(0, 3), phase());
    const complex eta = std::polar(rng.uniform(0, 3), phase());
    s.params = fmt("alpha=%.6g%+.6gi beta=%.6g%+.6gi eta=%.6g%+.6gi", a.real(), a.imag(), b.real(), b.imag(),
                   eta.real(), eta.imag());
    s.ok = one_mode(1.0, [&](int c) { return coherent_vector(a, c, policy); }, eta,
                    [&](int c) { return coherent_vector(b, c, policy); });
    if (s.ok) s.closed = TwoModeMoments::from_one_mode(coherent_superposition_moments({a, b, eta}));
  } else if (family == "squeezed-vacuum") {
    const double r = rng.uniform(0, 2.5), d = phase();
    s.params = fmt("r=%.6g delta=%.6g", r, d);
    const auto v = converged_state([&](int c) { return squeezed_vacuum_vector(r, d, c, policy); }, c1, kMaxCutoffOneMode);
    s.oracle = one_mode_moments(v);
    s.tail = v.tail_mass();
    s.closed = TwoModeMoments::from_one_mode(squeezed_vacuum_moments(r, d));
    s.ok = true;
  } else if (family == "superposed-squeezed") {
    const double r = rng.uniform(0, 2.5);
    const complex eta = std::polar(rng.uniform(0, 3), phase());
    s.params = fmt("r=%.6g eta=%.6g%+.6gi", r, eta.real(), eta.imag());
    s.ok = one_mode(1.0, [&](int c) { return squeezed_vacuum_vector(r, 0.0, c, policy); }, eta,
                    [&](int c) { return squeezed_vacuum_vector(-r, 0.0, c, policy); });
    if (s.ok) s.closed = TwoModeMoments::from_one_mode(superposed_squeezed_moments({r, eta}));
  } else if (family == "coherent-squeezed") {
    const double r = rng.uniform(0, 2.5), d = phase();
    const complex a = std::polar(rng.uniform(0, 3), phase());
    const complex eta = std::polar(rng.uniform(0, 3), phase());
    s.params = fmt("r=%.6g delta=%.6g alpha=%.6g%+.6gi eta=%.6g%+.6gi", r, d, a.real(), a.imag(), eta.real(),
                   eta.imag());
    s.ok = one_mode(1.0, [&](int c) { return squeezed_vacuum_vector(r, d, c, policy); }, eta,
                    [&](int c) { return coherent_vector(a, c, policy); });
    if (s.ok) s.closed = TwoModeMoments::from_one_mode(coherent_plus_squeezed_moments({r, d, a, eta}));
  } else if (family == "vacuum-squeezed") {
    const double r = rng.uniform(0, 2.5);
    const complex eta = std::polar(rng.uniform(0, 3), phase());
    s.params = fmt("r=%.6g eta=%.6g%+.6gi", r, eta.real(), eta.imag());
    s.ok = one_mode(1.0, [&](int c) { return squeezed_vacuum_vector(r, 0.0, c, policy); }, eta,
                    [&](int c) { return coherent_vector(0.0, c, policy); });
    if (s.ok) s.closed = TwoModeMoments::from_one_mode(vacuum_plus_squeezed_moments({r, eta}));
  } else if (family == "barnett-radmore") {
    const double r = rng.uniform(0, 1.5), d = phase();
    s.params = fmt("r=%.6g delta=%.6g", r, d);
    const auto v =
        converged_state([&](int c) { return two_mode_squeezed_vector(r, d, c, policy); }, c2, kMaxCutoffPerMode);
    s.oracle = two_mode_moments(v);
    s.tail = v.tail_mass();
    s.closed = barnett_radmore_moments({r, d});
    s.ok = true;
  } else if (family == "zhang") {
    const double r = rng.uniform(0, 1.5), th = phase();
    s.params = fmt("r=%.6g theta=%.6g", r, th);
    auto pair = [&](double rr) {
      return [=](int c) {
        const auto v = squeezed_vacuum_vector(rr, 0.0, c, policy);
        return product(v, v);
      };
    };
    s.ok = two_mode(1.0, pair(-r), std::polar(1.0, th), pair(r));
    if (s.ok) s.closed = zhang_moments({r, th});
  } else if (family == "entangled-coherent") {
    const double sg = rng.uniform(0, 3), th = phase(), d1 = phase(), d2 = phase();
    s.params = fmt("sigma=%.6g theta=%.6g delta1=%.6g delta2=%.6g", sg, th, d1, d2);
    const complex a = std::polar(sg, d1), b = std::polar(sg, d2);
    auto pair = [&](double sign) {
      return [=](int c) { return product(coherent_vector(sign * a, c, policy), coherent_vector(sign * b, c, policy)); };
    };
    s.ok = two_mode(1.0, pair(1.0), std::polar(1.0, th), pair(-1.0));
    if (s.ok) s.closed = entangled_coherent_moments({sg, th, d1, d2});
  } else {
    throw std::invalid_argument("unknown verification family '" + family + "'");
  }
  return s;
}

/// cfg.draws accepted draws for one family; ill-conditioned draws are replaced.
inline FamilyReport verify_family(const std::string& family, const VerifyConfig& cfg, std::uint64_t stream) {
  FamilyReport rep;
  rep.family = family;
  Stream rng(cfg.seed, stream);
  double worst_excess = -1.0;
  for (int attempts = 0; rep.draws < cfg.draws; ++attempts) {
    if (attempts > 100 * cfg.draws) throw std::runtime_error("verify: too many rejected draws for " + family);
    const auto s = draw_sample(family, rng, cfg);
    if (!s.ok) continue;
    ++rep.draws;
    const double dev = max_deviation(s.oracle, s.closed);
    const double tol = std::max(1e-8, 10.0 * s.tail);
    rep.max_tail = std::max(rep.max_tail, s.tail);
    if (dev - tol > worst_excess) {
      worst_excess = dev - tol;
      rep.tolerance = tol;
      rep.worst = s.params;
    }
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (!(dev <= tol)) rep.pass = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Matrix-element identities

/// Squeezed vacuum pair |xi>, |-xi> (xi = r) and coherent |alpha> at one cutoff
/// large enough for all three.
struct IdentityStates {
  fock::FockVector plus, minus, squeezed_phase, coherent;
};

inline IdentityStates identity_states(double r, double delta, complex alpha, int start) {
  using namespace fock;
  const auto a = converged_state([&](int c) { return squeezed_vacuum_vector(r, 0.0, c, Truncation::flag); }, start,
                                 kMaxCutoffOneMode);
  const auto b = converged_state([&](int c) { return coherent_vector(alpha, c, Truncation::flag); }, start,
                                 kMaxCutoffOneMode);
  const int c = std::max(a.cutoff(), b.cutoff());
  return {squeezed_vacuum_vector(r, 0.0, c), squeezed_vacuum_vector(-r, 0.0, c), squeezed_vacuum_vector(r, delta, c),
          coherent_vector(alpha, c)};
}

/// Probe point for the squeezed/coherent identities.
inline constexpr double kProbeDelta = 0.3;
inline const complex kProbeAlpha = std::polar(0.6, 0.4);

inline std::vector<IdentityReport> identity_checks(const VerifyConfig& cfg) {
  using fock::Ladder;
  std::vector<IdentityReport> out;
  auto add = [&](const char* name, double r, complex oracle, complex closed) {
    IdentityReport rep{name, r, std::abs(oracle - closed)};
    rep.pass = rep.deviation <= rep.tolerance;
    out.push_back(rep);
  };
  for (double r : {0.5, 1.0, 2.0}) {
    const auto st = identity_states(r, kProbeDelta, kProbeAlpha, cfg.cutoff_one_mode);
    add("overlap <-xi|xi>", r, fock::inner(st.minus, st.plus), cross::squeezed_overlap(r));
    add("number <-xi|a^dagger a|xi>", r, fock::matrix_element(st.minus, Ladder::number, st.plus),
        cross::squeezed_number(r));
    add("lower2 <-xi|a^2|xi>", r, fock::matrix_element(st.minus, Ladder::lower2, st.plus), cross::squeezed_lower2(r));
    add("overlap <xi|alpha>", r, fock::inner(st.squeezed_phase, st.coherent),
        cross::squeezed_coherent_overlap(r, kProbeDelta, kProbeAlpha));
    add("number <xi|a^dagger a|alpha>", r, fock::matrix_element(st.squeezed_phase, Ladder::number, st.coherent),
        cross::squeezed_coherent_number(r, kProbeDelta, kProbeAlpha));
    add("raise2 <xi|a^dagger^2|alpha>", r, fock::matrix_element(st.squeezed_phase, Ladder::raise2, st.coherent),
        cross::squeezed_coherent_raise2(r, kProbeDelta, kProbeAlpha));
  }
  for (double r : {0.25, 0.5, 1.0}) {
    const double x = std::tanh(r);
    add("series sum -2/(1+x^2)^{3/2}", r, fock::xsum_partial(x, 4000), -2.0 / std::pow(1.0 + x * x, 1.5));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Variants the oracle disagrees with

inline std::vector<Discrepancy> discrepancy_checks(const VerifyConfig& cfg) {
  using namespace fock;
  std::vector<Discrepancy> out;
  for (double r : {0.5, 1.0, 2.0}) {
    const auto st = identity_states(r, kProbeDelta, kProbeAlpha, cfg.cutoff_one_mode);
    const complex o = matrix_element(st.minus, Ladder::lower2, st.plus);
    out.push_back({"lower2 with (1+tanh r)^{3/2}", fmt("r=%g", r),
                   std::abs(o - variants::squeezed_lower2_linear_tanh(r))});
  }
  {
    const ZhangReal p{0.5, std::numbers::pi / 2};
    const auto pair = [&](double rr) {
      return [=](int c) {
        const auto v = squeezed_vacuum_vector(rr, 0.0, c, Truncation::flag);
        return product(v, v);
      };
    };
    const auto u = converged_state(pair(-p.r), cfg.cutoff_per_mode, kMaxCutoffPerMode);
    const auto v = pair(p.r)(u.cutoff_a());
    const auto o = two_mode_moments(superpose_two_mode({{1.0, u}, {std::polar(1.0, p.theta), v}}));
    const auto m = variants::zhang_moments_single_overlap(p);
    out.push_back({"zhang n1 with one-mode overlap", "r=0.5 theta=pi/2", std::abs(o.n_a - m.n1)});
    out.push_back({"zhang R1 with one-mode overlap", "r=0.5 theta=pi/2", std::abs(std::abs(o.a2) - m.R1)});
  }
  {
    const EntangledCoherent p{0.7, 0.0, 0.0, 0.0};
    const auto build = [&](double sign) {
      return [=](int c) {
        return product(coherent_vector(sign * 0.7, c, Truncation::flag),
                       coherent_vector(sign * 0.7, c, Truncation::flag));
      };
    };
    const auto u = converged_state(build(1.0), cfg.cutoff_per_mode, kMaxCutoffPerMode);
    const auto v = build(-1.0)(u.cutoff_a());
    const auto o = two_mode_moments(superpose_two_mode({{1.0, u}, {1.0, v}})).two_mode();
    const auto m = variants::entangled_coherent_moments_alt(p);
    out.push_back({"entangled coherent n1 (alternate list)", "sigma=0.7 theta=0", std::abs(o.n1 - m.n1)});
    out.push_back({"entangled coherent R1 (alternate list)", "sigma=0.7 theta=0", std::abs(o.R1 - m.R1)});
    out.push_back({"entangled coherent R3 (alternate list)", "sigma=0.7 theta=0", std::abs(o.R3 - m.R3)});
    // Aligned equal-frequency modes: compare -4 omega f(sigma) with the minimum
    // of the oracle moments' density.
    const auto g = ModeGeometry::traveling(1.0, 1.0, 1.0);
    const double numeric = rho_min_two_mode_numeric(o, g, 2.0 * std::numbers::pi, 64).rho;
    out.push_back({"aligned minimum -4 omega f(sigma)", fmt("sigma=0.7 omega=1 oracle=%.6f", numeric),
                   std::abs(numeric - rho_min_ecs_aligned(0.7, 1.0))});
  }
  return out;
}

inline VerifyReport run(const VerifyConfig& cfg) {
  VerifyReport rep;
  const auto all = family_names();
  const auto& chosen = cfg.families.empty() ? all : cfg.families;
  for (const auto& f : chosen) {
    const auto it = std::find(all.begin(), all.end(), f);
    if (it == all.end()) throw std::invalid_argument("unknown verification family '" + f + "'");
    rep.families.push_back(verify_family(f, cfg, static_cast<std::uint64_t>(it - all.begin())));
  }
  rep.identities = identity_checks(cfg);
  rep.discrepancies = discrepancy_checks(cfg);
  return rep;
}

}  // namespace negen::verify
