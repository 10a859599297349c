#pragma once

// Closed-form second moments for the one- and two-mode state families.
// Each function returns (n, R, gamma) or the ten two-mode numbers; the Fock
// oracle in fock.hpp reproduces all of them by direct summation.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "negen/errors.hpp"
#include "negen/moments.hpp"

namespace negen {

/// N [ |alpha> + eta |beta> ].
struct CoherentPair {
  complex alpha, beta, eta;
};

/// N [ |xi> + eta |-xi> ], xi = r real.
struct SqueezedPair {
  double r = 0.0;
  complex eta;
};

/// N [ |xi> + eta |alpha> ], xi = r e^{i delta}.
struct CoherentSqueezed {
  double r = 0.0, delta = 0.0;
  complex alpha, eta;
};

/// N [ |xi> + eta |0> ], xi = r real.
struct VacuumSqueezed {
  double r = 0.0;
  complex eta;
};

/// Two-mode squeezed vacuum exp(xi* ab - xi a^dagger b^dagger)|0,0>, xi = r e^{i delta}.
struct BarnettRadmore {
  double r = 0.0, delta = 0.0;
};

/// N ( |-r>_a |-r>_b + e^{i theta} |r>_a |r>_b ), r real.
struct ZhangReal {
  double r = 0.0, theta = 0.0;
};

/// N ( |alpha, beta> + e^{i theta} |-alpha, -beta> ), alpha = sigma e^{i delta1},
/// beta = sigma e^{i delta2}.
struct EntangledCoherent {
  double sigma = 0.0, theta = 0.0, delta1 = 0.0, delta2 = 0.0;
};

using FamilyParams = std::variant<CoherentPair, SqueezedPair, CoherentSqueezed, VacuumSqueezed,
                                  BarnettRadmore, ZhangReal, EntangledCoherent>;

namespace detail {

inline void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite and >= 0");
  }
}

inline double checked_inverse(double denom, const char* who) {
  if (!(denom >= 1e-14)) {
    throw DegenerateState(std::string(who) + ": normalization denominator below 1e-14");
  }
  return 1.0 / denom;
}

inline double sech(double x) { return 1.0 / std::cosh(x); }

/// 1 - sech(r)^p, accurate for small r.
inline double one_minus_sech_pow(double r, double p) {
  const double s = std::sinh(0.5 * r);
  const double log_cosh = std::log1p(2.0 * s * s);
  return -std::expm1(-p * log_cosh);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Squeezed/coherent cross matrix elements (xi real where noted)

namespace cross {

/// <-xi|xi> = sqrt(sech 2r), xi = r.
inline double squeezed_overlap(double r) { return std::sqrt(detail::sech(2.0 * r)); }

/// <-xi| a^dagger a |xi> = -sech r tanh^2 r / (1 + tanh^2 r)^{3/2}, xi = r.
inline double squeezed_number(double r) {
  const double t = std::tanh(r);
  return -detail::sech(r) * t * t / std::pow(1.0 + t * t, 1.5);
}

/// <-xi| a^2 |xi> = -sech r tanh r / (1 + tanh^2 r)^{3/2}, xi = r.
/// Equal to -<xi| a^2 |-xi> and to <-xi| (a^dagger)^2 |xi>.
inline double squeezed_lower2(double r) {
  const double t = std::tanh(r);
  return -detail::sech(r) * t / std::pow(1.0 + t * t, 1.5);
}

/// Exponent -e^{-i delta} alpha^2 tanh(r) / 2 shared by the squeezed-coherent elements.
inline complex squeezed_coherent_exponent(double r, double delta, complex alpha) {
  return -0.5 * std::polar(1.0, -delta) * alpha * alpha * std::tanh(r);
}

/// <xi|alpha>, xi = r e^{i delta}.
inline complex squeezed_coherent_overlap(double r, double delta, complex alpha) {
  return std::exp(-0.5 * std::norm(alpha)) * std::sqrt(detail::sech(r)) *
         std::exp(squeezed_coherent_exponent(r, delta, alpha));
}

/// <xi| a^dagger a |alpha>.
inline complex squeezed_coherent_number(double r, double delta, complex alpha) {
  return -std::polar(1.0, -delta) * alpha * alpha * std::tanh(r) *
         squeezed_coherent_overlap(r, delta, alpha);
}

/// <xi| (a^dagger)^2 |alpha>.
inline complex squeezed_coherent_raise2(double r, double delta, complex alpha) {
  const double t = std::tanh(r);
  const complex e = std::polar(1.0, -delta);
  return (e * alpha * alpha * t - 1.0) * e * t * squeezed_coherent_overlap(r, delta, alpha);
}

}  // namespace cross

// ---------------------------------------------------------------------------
// One-mode families

inline OneModeMoments coherent_superposition_moments(const CoherentPair& p) {
  const auto [alpha, beta, eta] = p;
  const double damp = std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)));
  const complex ab = std::conj(alpha) * beta;
  const double N2 = detail::checked_inverse(
      1.0 + std::norm(eta) + 2.0 * damp * std::real(eta * std::exp(ab)),
      "coherent_superposition_moments");
  const double n = N2 * (std::norm(alpha) + std::norm(eta * beta) +
                         2.0 * damp * std::real(eta * ab * std::exp(ab)));
  const complex a2 =
      N2 * (alpha * alpha + std::norm(eta) * beta * beta +
            damp * (eta * beta * beta * std::exp(ab) + std::conj(eta) * alpha * alpha * std::exp(std::conj(ab))));
  return OneModeMoments::from(n, a2);
}

/// n = sinh^2 r, <a^2> = -e^{i delta} sinh r cosh r.
inline OneModeMoments squeezed_vacuum_moments(double r, double delta) {
  detail::require_nonneg(r, "squeezed_vacuum_moments: r");
  const double s = std::sinh(r);
  return OneModeMoments::from(s * s, -std::polar(1.0, delta) * s * std::cosh(r));
}

/// R - n for the squeezed vacuum, sinh r e^{-r} = (1 - e^{-2r}) / 2, free of
/// the cancellation in sinh r cosh r - sinh^2 r at large r.
inline double squeezed_vacuum_F(double r) {
  detail::require_nonneg(r, "squeezed_vacuum_F: r");
  return -0.5 * std::expm1(-2.0 * r);
}

inline OneModeMoments superposed_squeezed_moments(const SqueezedPair& p) {
  detail::require_nonneg(p.r, "superposed_squeezed_moments: r");
  const double r = p.r;
  const complex eta = p.eta;
  const double N2 = detail::checked_inverse(
      1.0 + std::norm(eta) + 2.0 * std::real(eta) * cross::squeezed_overlap(r),
      "superposed_squeezed_moments");
  const double s = std::sinh(r), c = std::cosh(r);
  const double n = N2 * (s * s * (1.0 + std::norm(eta)) + 2.0 * std::real(eta) * cross::squeezed_number(r));
  // eta <xi|a^2|-xi> + eta* <-xi|a^2|xi> = -(eta - eta*) <-xi|a^2|xi>
  const complex a2 = N2 * ((std::norm(eta) - 1.0) * s * c -
                           complex(0.0, 2.0 * std::imag(eta)) * cross::squeezed_lower2(r));
  return OneModeMoments::from(n, a2);
}

inline OneModeMoments coherent_plus_squeezed_moments(const CoherentSqueezed& p) {
  detail::require_nonneg(p.r, "coherent_plus_squeezed_moments: r");
  const auto [r, delta, alpha, eta] = p;
  const complex ov = cross::squeezed_coherent_overlap(r, delta, alpha);
  const double N2 = detail::checked_inverse(1.0 + std::norm(eta) + 2.0 * std::real(eta * ov),
                                            "coherent_plus_squeezed_moments");
  const double s = std::sinh(r), c = std::cosh(r);
  const double n =
      N2 * (s * s + std::norm(eta * alpha) + 2.0 * std::real(eta * cross::squeezed_coherent_number(r, delta, alpha)));
  // <alpha|a^2|xi> = conj(<xi|(a^dagger)^2|alpha>)
  const complex a2 = N2 * (-s * c * std::polar(1.0, delta) + std::norm(eta) * alpha * alpha +
                           eta * alpha * alpha * ov +
                           std::conj(eta) * std::conj(cross::squeezed_coherent_raise2(r, delta, alpha)));
  return OneModeMoments::from(n, a2);
}

/// Vacuum plus squeezed vacuum. At eta = -1, r = 0 the normalized state is the
/// limit |2>, returned as n = 2, R = 0.
inline OneModeMoments vacuum_plus_squeezed_moments(const VacuumSqueezed& p) {
  detail::require_nonneg(p.r, "vacuum_plus_squeezed_moments: r");
  const double r = p.r;
  const complex eta = p.eta;
  // 1 + |eta|^2 + 2 Re(eta) sqrt(sech r) = |1 + eta|^2 - 2 Re(eta) (1 - sqrt(sech r))
  if (r == 0.0 && std::norm(1.0 + eta) < 1e-28) return {2.0, 0.0, 0.0};
  const double denom = std::norm(1.0 + eta) - 2.0 * std::real(eta) * detail::one_minus_sech_pow(r, 0.5);
  // Numerators vanish at the same rate as denom near eta = -1, r -> 0, so only
  // an exactly zero denominator is degenerate here.
  if (!(denom > 0.0)) throw DegenerateState("vacuum_plus_squeezed_moments: zero normalization");
  const double N2 = 1.0 / denom;
  const double s = std::sinh(r);
  // 1 + eta* sech^{5/2} = (1 + eta*) - eta* (1 - sech^{5/2})
  const complex bracket = (1.0 + std::conj(eta)) - std::conj(eta) * detail::one_minus_sech_pow(r, 2.5);
  return OneModeMoments::from(N2 * s * s, -N2 * s * std::cosh(r) * bracket);
}

/// R - n for real negative eta = -|eta|, in the closed form used for the
/// vacuum/squeezed sweep.
inline double vacuum_squeezed_F_negative_eta(double r, double eta_abs) {
  detail::require_nonneg(r, "vacuum_squeezed_F_negative_eta: r");
  if (r == 0.0 && eta_abs == 1.0) return -2.0;
  const double s = std::sinh(r), c = std::cosh(r);
  const double denom = (1.0 - eta_abs) * (1.0 - eta_abs) + 2.0 * eta_abs * detail::one_minus_sech_pow(r, 0.5);
  const double bracket = std::abs((1.0 - eta_abs) + eta_abs * detail::one_minus_sech_pow(r, 2.5));
  if (!(denom > 0.0)) throw DegenerateState("vacuum_squeezed_F_negative_eta: zero normalization");
  return s * (c * bracket - s) / denom;
}

// ---------------------------------------------------------------------------
// Two-mode families

inline TwoModeMoments barnett_radmore_moments(const BarnettRadmore& p) {
  detail::require_nonneg(p.r, "barnett_radmore_moments: r");
  const double s = std::sinh(p.r);
  TwoModeMoments m;
  m.n1 = m.n2 = s * s;
  m.R4 = s * std::cosh(p.r);
  m.gamma4 = m.R4 > 0.0 ? normalize_angle(p.delta + std::numbers::pi) : 0.0;
  return m;
}

/// Zhang state with xi = eta = -xi_bar = -eta_bar = r. The cross terms carry
/// the overlap of both modes, <-xi|xi>_a <-xi|xi>_b = sech 2r.
inline TwoModeMoments zhang_moments(const ZhangReal& p) {
  detail::require_nonneg(p.r, "zhang_moments: r");
  const double r = p.r;
  const double ch2 = std::cosh(2.0 * r);
  const double ct = std::cos(p.theta), st = std::sin(p.theta);
  const double s = std::sinh(r);
  // 2 (1 + cos th / cosh 2r) written as 4 (sinh^2 r + cos^2 th/2) / cosh 2r,
  // which avoids cancellation for theta near pi.
  const double half = std::cos(0.5 * p.theta);
  const double N2 = detail::checked_inverse(4.0 * (s * s + half * half) / ch2, "zhang_moments");
  TwoModeMoments m;
  m.n1 = m.n2 = 2.0 * N2 * s * s * (1.0 - ct / (ch2 * ch2));
  // <a^2> = -i N^2 sin(theta) sinh 2r / cosh^2 2r
  const complex a2(0.0, -N2 * st * std::tanh(2.0 * r) / ch2);
  m.R1 = m.R2 = std::abs(a2);
  m.gamma1 = m.gamma2 = m.R1 > 0.0 ? normalize_angle(std::arg(a2)) : 0.0;
  return m;
}

struct ZhangAsymptotics {
  double c_n;   // n1 ~ c_n r^2
  double c_Rn;  // R1 - n1 ~ c_Rn r
};

/// Leading small-r behaviour of the Zhang state at fixed theta != pi.
inline ZhangAsymptotics zhang_small_r_asymptotics(double theta) {
  const double denom = 1.0 + std::cos(theta);
  if (!(std::abs(denom) > 1e-15)) {
    throw std::domain_error("zhang_small_r_asymptotics: theta = pi has no small-r expansion");
  }
  return {(1.0 - std::cos(theta)) / denom, std::abs(std::sin(theta)) / denom};
}

inline TwoModeMoments entangled_coherent_moments(const EntangledCoherent& p) {
  detail::require_nonneg(p.sigma, "entangled_coherent_moments: sigma");
  const double s2 = p.sigma * p.sigma;
  const double ce = std::cos(p.theta) * std::exp(-4.0 * s2);
  const double N2 = detail::checked_inverse(2.0 * (1.0 + ce), "entangled_coherent_moments");
  const complex alpha = std::polar(p.sigma, p.delta1);
  const complex beta = std::polar(p.sigma, p.delta2);
  const double paired = 2.0 * s2 * N2 * (1.0 - ce);
  return TwoModeMoments::from(paired, paired, alpha * alpha, beta * beta,
                              2.0 * N2 * (1.0 - ce) * std::conj(alpha) * beta, alpha * beta);
}

/// sigma^2 e^{-2 sigma^2} (1 + e^{-2 sigma^2}) / (1 + e^{-4 sigma^2}).
inline double f_sigma(double sigma) {
  detail::require_nonneg(sigma, "f_sigma: sigma");
  const double e2 = std::exp(-2.0 * sigma * sigma);
  return sigma * sigma * e2 * (1.0 + e2) / (1.0 + e2 * e2);
}

// ---------------------------------------------------------------------------
// Dispatch

inline bool is_two_mode(const FamilyParams& p) {
  return std::holds_alternative<BarnettRadmore>(p) || std::holds_alternative<ZhangReal>(p) ||
         std::holds_alternative<EntangledCoherent>(p);
}

/// Moments of any family; one-mode families occupy mode 1 with mode 2 empty.
inline TwoModeMoments family_moments(const FamilyParams& p) {
  struct Visitor {
    TwoModeMoments operator()(const CoherentPair& q) const {
      return TwoModeMoments::from_one_mode(coherent_superposition_moments(q));
    }
    TwoModeMoments operator()(const SqueezedPair& q) const {
      return TwoModeMoments::from_one_mode(superposed_squeezed_moments(q));
    }
    TwoModeMoments operator()(const CoherentSqueezed& q) const {
      return TwoModeMoments::from_one_mode(coherent_plus_squeezed_moments(q));
    }
    TwoModeMoments operator()(const VacuumSqueezed& q) const {
      return TwoModeMoments::from_one_mode(vacuum_plus_squeezed_moments(q));
    }
    TwoModeMoments operator()(const BarnettRadmore& q) const { return barnett_radmore_moments(q); }
    TwoModeMoments operator()(const ZhangReal& q) const { return zhang_moments(q); }
    TwoModeMoments operator()(const EntangledCoherent& q) const { return entangled_coherent_moments(q); }
  };
  return std::visit(Visitor{}, p);
}

// ---------------------------------------------------------------------------
// Alternative forms that disagree with the number-basis sums. Kept so the
// verification report can quantify the disagreement.

namespace variants {

/// <-xi|a^2|xi> with (1 + tanh r)^{3/2} in the denominator.
inline double squeezed_lower2_linear_tanh(double r) {
  const double t = std::tanh(r);
  return -detail::sech(r) * t / std::pow(1.0 + t, 1.5);
}

/// Zhang moments with only one mode's overlap in the cross terms.
inline TwoModeMoments zhang_moments_single_overlap(const ZhangReal& p) {
  const double r = p.r;
  const double ch2 = std::cosh(2.0 * r);
  const double ct = std::cos(p.theta);
  const double N2 = detail::checked_inverse(2.0 * (1.0 + ct / ch2), "zhang_moments_single_overlap");
  const double s = std::sinh(r);
  TwoModeMoments m;
  m.n1 = m.n2 = 2.0 * N2 * s * s * (1.0 - ct / std::pow(ch2, 1.5));
  m.R1 = m.R2 = N2 * std::abs(std::sin(p.theta)) * std::tanh(2.0 * r) / std::sqrt(ch2);
  m.gamma1 = m.gamma2 = -std::numbers::pi / 2.0;
  return m;
}

/// Entangled coherent moments with e^{-2 sigma^2} cross factors for n1 and R1
/// and no factor 2 in R3.
inline TwoModeMoments entangled_coherent_moments_alt(const EntangledCoherent& p) {
  const double s2 = p.sigma * p.sigma;
  const double ct = std::cos(p.theta);
  const double N2 = detail::checked_inverse(2.0 * (1.0 + ct * std::exp(-4.0 * s2)),
                                            "entangled_coherent_moments_alt");
  TwoModeMoments m;
  m.n1 = m.n2 = 2.0 * s2 * N2 * (1.0 - ct * std::exp(-2.0 * s2));
  m.R1 = m.R2 = 2.0 * s2 * N2 * (1.0 + ct * std::exp(-2.0 * s2));
  m.R3 = s2 * N2 * (1.0 - ct * std::exp(-4.0 * s2));
  m.R4 = s2;
  m.gamma1 = normalize_angle(2.0 * p.delta1);
  m.gamma2 = normalize_angle(2.0 * p.delta2);
  m.gamma3 = normalize_angle(p.delta2 - p.delta1);
  m.gamma4 = normalize_angle(p.delta1 + p.delta2);
  return m;
}

}  // namespace variants

}  // namespace negen
