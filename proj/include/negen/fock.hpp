#pragma once

// Truncated number-basis states for one and two bosonic modes, with
// brute-force ladder-operator expectation values. Everything here is built
// from series expansions term by term, so it serves as an independent check
// on the closed-form moments in families.hpp.

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "negen/errors.hpp"
#include "negen/moments.hpp"

namespace negen::fock {

/// What to do when the top of the retained basis carries probability.
enum class Truncation {
  flag,    // set truncation_warning() when tail mass > kWarnTail
  strict,  // throw TruncationError when tail mass > kStrictTail
};

inline constexpr double kWarnTail = 1e-10;
inline constexpr double kStrictTail = 1e-8;

namespace detail {

/// Number of indices making up the top 10% of 0..cutoff (at least one).
inline int tail_width(int cutoff) {
  return std::max(1, static_cast<int>(std::ceil(0.1 * (cutoff + 1))));
}

inline double norm_sq(std::span<const complex> amps) {
  double s = 0.0;
  for (const auto& c : amps) s += std::norm(c);
  return s;
}

inline void check_tail(double tail, Truncation policy, const char* who) {
  if (policy == Truncation::strict && tail > kStrictTail) {
    throw TruncationError(std::string(who) + ": tail mass " + std::to_string(tail) +
                          " exceeds " + std::to_string(kStrictTail) + "; raise the cutoff");
  }
}

}  // namespace detail

/// Amplitudes c_0..c_cutoff of a single-mode state, unit norm.
class FockVector {
 public:
  /// Takes raw amplitudes and normalizes them. Throws DegenerateState on a null vector.
  explicit FockVector(std::vector<complex> amps) : amps_(std::move(amps)) {
    if (amps_.size() < 2) throw std::invalid_argument("FockVector: cutoff must be >= 1");
    const double nrm = std::sqrt(detail::norm_sq(amps_));
    if (!(nrm >= 1e-14)) throw DegenerateState("FockVector: vector norm below 1e-14");
    for (auto& c : amps_) c /= nrm;
    int width = detail::tail_width(cutoff());
    tail_ = 0.0;
    for (int k = cutoff() - width + 1; k <= cutoff(); ++k) tail_ += std::norm(amps_[k]);
  }

  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
  std::span<const complex> amps() const { return amps_; }
  complex operator[](int k) const { return amps_[k]; }

  /// Probability in the top 10% of retained indices.
  double tail_mass() const { return tail_; }
  bool truncation_warning() const { return tail_ > kWarnTail; }

  double expect_number() const {
    double s = 0.0;
    for (int k = 1; k <= cutoff(); ++k) s += k * std::norm(amps_[k]);
    return s;
  }

  FockVector phase_rotated(double chi) const {
    std::vector<complex> out(amps_);
    const complex ph = std::polar(1.0, chi);
    for (auto& c : out) c *= ph;
    return FockVector(std::move(out));
  }

 private:
  std::vector<complex> amps_;
  double tail_ = 0.0;
};

/// Amplitudes c_{m,n}, 0 <= m <= cutoff_a, 0 <= n <= cutoff_b, row-major in m.
class TwoModeFockVector {
 public:
  TwoModeFockVector(int cutoff_a, int cutoff_b, std::vector<complex> amps)
      : ca_(cutoff_a), cb_(cutoff_b), amps_(std::move(amps)) {
    if (ca_ < 1 || cb_ < 1) throw std::invalid_argument("TwoModeFockVector: cutoffs must be >= 1");
    if (amps_.size() != static_cast<std::size_t>((ca_ + 1) * (cb_ + 1))) {
      throw std::invalid_argument("TwoModeFockVector: amplitude count does not match cutoffs");
    }
    const double nrm = std::sqrt(detail::norm_sq(amps_));
    if (!(nrm >= 1e-14)) throw DegenerateState("TwoModeFockVector: vector norm below 1e-14");
    for (auto& c : amps_) c /= nrm;

    const int ta = ca_ - detail::tail_width(ca_) + 1;
    const int tb = cb_ - detail::tail_width(cb_) + 1;
    for (int m = 0; m <= ca_; ++m) {
      for (int n = 0; n <= cb_; ++n) {
        const double p = std::norm(at(m, n));
        if (m >= ta) tail_a_ += p;
        if (n >= tb) tail_b_ += p;
        if (m >= ta || n >= tb) tail_ += p;
      }
    }
  }

  int cutoff_a() const { return ca_; }
  int cutoff_b() const { return cb_; }
  std::span<const complex> amps() const { return amps_; }
  complex at(int m, int n) const { return amps_[static_cast<std::size_t>(m) * (cb_ + 1) + n]; }

  double tail_mass() const { return tail_; }
  double tail_mass_a() const { return tail_a_; }
  double tail_mass_b() const { return tail_b_; }
  bool truncation_warning() const { return tail_ > kWarnTail; }

  TwoModeFockVector phase_rotated(double chi) const {
    std::vector<complex> out(amps_);
    const complex ph = std::polar(1.0, chi);
    for (auto& c : out) c *= ph;
    return TwoModeFockVector(ca_, cb_, std::move(out));
  }

 private:
  int ca_, cb_;
  std::vector<complex> amps_;
  double tail_ = 0.0, tail_a_ = 0.0, tail_b_ = 0.0;
};

/// <a^dagger a>, <b^dagger b>, <a^2>, <b^2>, <a^dagger b>, <ab>; b-fields are zero for one mode.
struct OracleMoments {
  double n_a = 0.0;
  double n_b = 0.0;
  complex a2{}, b2{}, adag_b{}, ab{};

  OneModeMoments one_mode() const { return OneModeMoments::from(n_a, a2); }
  TwoModeMoments two_mode() const { return TwoModeMoments::from(n_a, n_b, a2, b2, adag_b, ab); }
};

// ---------------------------------------------------------------------------
// State construction

/// |alpha> = e^{-|alpha|^2/2} sum alpha^l / sqrt(l!) |l>, truncated and renormalized.
inline FockVector coherent_vector(complex alpha, int cutoff, Truncation policy = Truncation::flag) {
  if (cutoff < 1) throw std::invalid_argument("coherent_vector: cutoff must be >= 1");
  std::vector<complex> c(cutoff + 1);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int l = 1; l <= cutoff; ++l) c[l] = c[l - 1] * alpha / std::sqrt(static_cast<double>(l));
  FockVector v(std::move(c));
  detail::check_tail(v.tail_mass(), policy, "coherent_vector");
  return v;
}

/// S(xi)|0>, xi = r e^{i delta}: only even occupations,
/// c_{2n} = sqrt(sech r) sqrt((2n)!)/n! (-e^{i delta} tanh(r)/2)^n.
/// Negative r is accepted and equals r -> |r|, delta -> delta + pi.
inline FockVector squeezed_vacuum_vector(double r, double delta, int cutoff,
                                         Truncation policy = Truncation::flag) {
  if (cutoff < 2) throw std::invalid_argument("squeezed_vacuum_vector: cutoff must be >= 2");
  std::vector<complex> c(cutoff + 1);
  const complex w = -0.5 * std::polar(1.0, delta) * std::tanh(r);
  c[0] = std::sqrt(1.0 / std::cosh(r));
  for (int n = 0; 2 * n + 2 <= cutoff; ++n) {
    const double ratio = std::sqrt((2.0 * n + 1.0) * (2.0 * n + 2.0)) / (n + 1.0);
    c[2 * n + 2] = c[2 * n] * ratio * w;
  }
  FockVector v(std::move(c));
  detail::check_tail(v.tail_mass(), policy, "squeezed_vacuum_vector");
  return v;
}

/// Two-mode squeezed vacuum, c_{n,n} = (-e^{i delta} tanh r)^n / cosh r.
inline TwoModeFockVector two_mode_squeezed_vector(double r, double delta, int cutoff,
                                                  Truncation policy = Truncation::flag) {
  if (cutoff < 2) throw std::invalid_argument("two_mode_squeezed_vector: cutoff must be >= 2");
  const int d = cutoff + 1;
  std::vector<complex> c(static_cast<std::size_t>(d) * d);
  const complex w = -std::polar(1.0, delta) * std::tanh(r);
  complex cur = 1.0 / std::cosh(r);
  for (int n = 0; n <= cutoff; ++n) {
    c[static_cast<std::size_t>(n) * d + n] = cur;
    cur *= w;
  }
  TwoModeFockVector v(cutoff, cutoff, std::move(c));
  detail::check_tail(v.tail_mass(), policy, "two_mode_squeezed_vector");
  return v;
}

/// |u>_a |v>_b.
inline TwoModeFockVector product(const FockVector& a, const FockVector& b) {
  const int ca = a.cutoff(), cb = b.cutoff();
  std::vector<complex> c(static_cast<std::size_t>(ca + 1) * (cb + 1));
  for (int m = 0; m <= ca; ++m) {
    for (int n = 0; n <= cb; ++n) c[static_cast<std::size_t>(m) * (cb + 1) + n] = a[m] * b[n];
  }
  return TwoModeFockVector(ca, cb, std::move(c));
}

template <class State>
struct Term {
  complex coeff;
  State state;
};

/// sum_k coeff_k |state_k>, renormalized. All states must share the cutoff.
inline FockVector superpose(std::span<const Term<FockVector>> terms) {
  if (terms.empty()) throw std::invalid_argument("superpose: need at least one term");
  const int cutoff = terms.front().state.cutoff();
  std::vector<complex> acc(cutoff + 1);
  for (const auto& t : terms) {
    if (t.state.cutoff() != cutoff) throw CutoffMismatch("superpose: cutoff mismatch");
    for (int k = 0; k <= cutoff; ++k) acc[k] += t.coeff * t.state[k];
  }
  if (std::sqrt(detail::norm_sq(acc)) < 1e-14) {
    throw DegenerateState("superpose: terms cancel (norm < 1e-14)");
  }
  return FockVector(std::move(acc));
}

inline FockVector superpose(std::initializer_list<Term<FockVector>> terms) {
  return superpose(std::span<const Term<FockVector>>(terms.begin(), terms.size()));
}

inline TwoModeFockVector superpose_two_mode(std::span<const Term<TwoModeFockVector>> terms) {
  if (terms.empty()) throw std::invalid_argument("superpose_two_mode: need at least one term");
  const int ca = terms.front().state.cutoff_a();
  const int cb = terms.front().state.cutoff_b();
  std::vector<complex> acc(static_cast<std::size_t>(ca + 1) * (cb + 1));
  for (const auto& t : terms) {
    if (t.state.cutoff_a() != ca || t.state.cutoff_b() != cb) {
      throw CutoffMismatch("superpose_two_mode: cutoff mismatch");
    }
    auto src = t.state.amps();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t.coeff * src[i];
  }
  if (std::sqrt(detail::norm_sq(acc)) < 1e-14) {
    throw DegenerateState("superpose_two_mode: terms cancel (norm < 1e-14)");
  }
  return TwoModeFockVector(ca, cb, std::move(acc));
}

inline TwoModeFockVector superpose_two_mode(std::initializer_list<Term<TwoModeFockVector>> terms) {
  return superpose_two_mode(
      std::span<const Term<TwoModeFockVector>>(terms.begin(), terms.size()));
}

// ---------------------------------------------------------------------------
// Matrix elements and moments

/// Operators whose matrix elements the closed forms need.
enum class Ladder { identity, number, lower2, raise2 };

/// <u| op |v>.
inline complex matrix_element(const FockVector& u, Ladder op, const FockVector& v) {
  if (u.cutoff() != v.cutoff()) throw CutoffMismatch("matrix_element: cutoff mismatch");
  const int c = u.cutoff();
  complex s{};
  switch (op) {
    case Ladder::identity:
      for (int k = 0; k <= c; ++k) s += std::conj(u[k]) * v[k];
      break;
    case Ladder::number:
      for (int k = 1; k <= c; ++k) s += std::conj(u[k]) * static_cast<double>(k) * v[k];
      break;
    case Ladder::lower2:  // a^2 |k+2> = sqrt((k+1)(k+2)) |k>
      for (int k = 0; k + 2 <= c; ++k) {
        s += std::conj(u[k]) * std::sqrt((k + 1.0) * (k + 2.0)) * v[k + 2];
      }
      break;
    case Ladder::raise2:
      for (int k = 0; k + 2 <= c; ++k) {
        s += std::conj(u[k + 2]) * std::sqrt((k + 1.0) * (k + 2.0)) * v[k];
      }
      break;
  }
  return s;
}

inline complex inner(const FockVector& u, const FockVector& v) {
  return matrix_element(u, Ladder::identity, v);
}

inline double tail_mass(const FockVector& v) { return v.tail_mass(); }
inline double tail_mass(const TwoModeFockVector& v) { return v.tail_mass(); }

inline OracleMoments one_mode_moments(const FockVector& v) {
  OracleMoments m;
  m.n_a = v.expect_number();
  m.a2 = matrix_element(v, Ladder::lower2, v);
  return m;
}

inline OracleMoments two_mode_moments(const TwoModeFockVector& v) {
  const int ca = v.cutoff_a(), cb = v.cutoff_b();
  OracleMoments m;
  for (int i = 0; i <= ca; ++i) {
    for (int j = 0; j <= cb; ++j) {
      const complex c = v.at(i, j);
      const double p = std::norm(c);
      m.n_a += i * p;
      m.n_b += j * p;
      const complex cc = std::conj(c);
      if (i + 2 <= ca) m.a2 += cc * std::sqrt((i + 1.0) * (i + 2.0)) * v.at(i + 2, j);
      if (j + 2 <= cb) m.b2 += cc * std::sqrt((j + 1.0) * (j + 2.0)) * v.at(i, j + 2);
      // a^dagger b |i, j> = sqrt((i+1) j) |i+1, j-1>
      if (i + 1 <= ca && j >= 1) {
        m.adag_b += std::conj(v.at(i + 1, j - 1)) * std::sqrt((i + 1.0) * j) * c;
      }
      if (i + 1 <= ca && j + 1 <= cb) {
        m.ab += cc * std::sqrt((i + 1.0) * (j + 1.0)) * v.at(i + 1, j + 1);
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Series used by the squeezed-vacuum cross elements

/// Partial sum over n = 1..terms of (2n)!/(n!(n-1)!) (-1)^n (x/2)^{2n-2}.
/// Converges to -2/(1+x^2)^{3/2} for |x| < 1.
inline double xsum_partial(double x, int terms) {
  double term = -2.0;  // n = 1
  double s = 0.0;
  for (int n = 1; n <= terms; ++n) {
    s += term;
    term *= -(2.0 * n + 1.0) * x * x / (2.0 * n);
  }
  return s;
}

}  // namespace negen::fock
