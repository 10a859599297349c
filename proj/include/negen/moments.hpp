#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace negen {

using complex = std::complex<double>;

/// Maps an angle onto (-pi, pi].
inline double normalize_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(a, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/// Second-moment data of a single excited mode: n = <a^dagger a>, R e^{i gamma} = <a^2>.
struct OneModeMoments {
  double n = 0.0;
  double R = 0.0;
  double gamma = 0.0;

  static OneModeMoments from(double n, complex a2) {
    return {n, std::abs(a2), normalize_angle(std::arg(a2))};
  }
  complex a2() const { return std::polar(R, gamma); }
  /// R - n; positive values mean the density dips below zero somewhere.
  double F() const { return R - n; }
};

/// Two-mode data: <a^dagger a>, <b^dagger b>, <a^2>, <b^2>, <a^dagger b>, <ab>.
struct TwoModeMoments {
  double n1 = 0.0, n2 = 0.0;
  double R1 = 0.0, R2 = 0.0, R3 = 0.0, R4 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0, gamma3 = 0.0, gamma4 = 0.0;

  static TwoModeMoments from(double n1, double n2, complex a2, complex b2,
                             complex adag_b, complex ab) {
    TwoModeMoments m;
    m.n1 = n1;
    m.n2 = n2;
    m.R1 = std::abs(a2);
    m.R2 = std::abs(b2);
    m.R3 = std::abs(adag_b);
    m.R4 = std::abs(ab);
    m.gamma1 = normalize_angle(std::arg(a2));
    m.gamma2 = normalize_angle(std::arg(b2));
    m.gamma3 = normalize_angle(std::arg(adag_b));
    m.gamma4 = normalize_angle(std::arg(ab));
    return m;
  }

  /// Embeds a one-mode state as mode 1 with mode 2 in its vacuum.
  static TwoModeMoments from_one_mode(const OneModeMoments& m) {
    TwoModeMoments t;
    t.n1 = m.n;
    t.R1 = m.R;
    t.gamma1 = m.gamma;
    return t;
  }

  complex a2() const { return std::polar(R1, gamma1); }
  complex b2() const { return std::polar(R2, gamma2); }
  complex adag_b() const { return std::polar(R3, gamma3); }
  complex ab() const { return std::polar(R4, gamma4); }
};

}  // namespace negen
