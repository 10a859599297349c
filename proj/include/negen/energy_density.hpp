#pragma once

// Normal-ordered energy density of a massless scalar field with one or two
// excited modes, in units with hbar = c = 1 and normalization volume V = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "negen/families.hpp"
#include "negen/moments.hpp"

namespace negen {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

enum class Wave { traveling, standing };

struct ModeGeometry {
  Wave kind = Wave::traveling;
  double omega1 = 1.0;
  double omega2 = 1.0;
  Vec3 khat1{1.0, 0.0, 0.0};
  Vec3 khat2{1.0, 0.0, 0.0};

  /// Traveling waves; khat1 along x, khat2 in the x-y plane at the given cosine.
  static ModeGeometry traveling(double omega1, double omega2, double cos_angle = 1.0) {
    if (!(cos_angle >= -1.0 && cos_angle <= 1.0)) {
      throw std::invalid_argument("ModeGeometry: cos_angle must lie in [-1, 1]");
    }
    ModeGeometry g;
    g.kind = Wave::traveling;
    g.omega1 = omega1;
    g.omega2 = omega2;
    g.khat2 = {cos_angle, std::sqrt(std::max(0.0, 1.0 - cos_angle * cos_angle)), 0.0};
    g.validate();
    return g;
  }

  /// Standing waves sin(omega x) e^{-i omega t} along x.
  static ModeGeometry standing(double omega1, double omega2) {
    ModeGeometry g;
    g.kind = Wave::standing;
    g.omega1 = omega1;
    g.omega2 = omega2;
    g.validate();
    return g;
  }

  void validate() const {
    if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw std::invalid_argument("ModeGeometry: omegas must be > 0");
    for (const auto& k : {khat1, khat2}) {
      if (std::abs(dot(k, k) - 1.0) > 1e-12) throw std::invalid_argument("ModeGeometry: khat must be a unit vector");
    }
  }

  double cos_angle() const { return dot(khat1, khat2); }
};

struct SpacetimePoint {
  Vec3 x{0.0, 0.0, 0.0};
  double t = 0.0;
};

struct DensitySample {
  SpacetimePoint point;
  double rho = 0.0;
};

struct DensityProfile {
  std::vector<DensitySample> samples;
  DensitySample min_found;
};

// ---------------------------------------------------------------------------
// One mode

/// Traveling wave as a function of the phase u = 2(k.x - omega t): omega (n + R cos(u + gamma)).
inline double rho_one_mode_phase(const OneModeMoments& m, double omega, double u) {
  return omega * (m.n + m.R * std::cos(u + m.gamma));
}

/// x is the coordinate along khat (traveling) or the standing-wave axis.
/// Same operation order as the two-mode evaluators, so deleting mode 2 there
/// reproduces these values bit for bit.
inline double rho_one_mode(const OneModeMoments& m, double omega, Wave kind, double x, double t) {
  if (kind == Wave::traveling) return m.n * omega + m.R * omega * std::cos(2.0 * (omega * x - omega * t) + m.gamma);
  return m.n * omega + m.R * omega * std::cos(2.0 * omega * x) * std::cos(2.0 * omega * t - m.gamma);
}

/// -omega (R - n), the minimum over all x and t for either wave kind.
inline double rho_min_one_mode(const OneModeMoments& m, double omega) { return -omega * (m.R - m.n); }

// ---------------------------------------------------------------------------
// Two modes

inline double rho_two_mode_traveling(const TwoModeMoments& m, const ModeGeometry& g, const SpacetimePoint& p) {
  const double w1 = g.omega1, w2 = g.omega2;
  const double phi1 = w1 * dot(g.khat1, p.x) - w1 * p.t;
  const double phi2 = w2 * dot(g.khat2, p.x) - w2 * p.t;
  const double cross = std::sqrt(w1 * w2) * (1.0 + g.cos_angle());
  return m.n1 * w1 + m.n2 * w2 + m.R1 * w1 * std::cos(2.0 * phi1 + m.gamma1) +
         m.R2 * w2 * std::cos(2.0 * phi2 + m.gamma2) + m.R3 * cross * std::cos(phi2 - phi1 + m.gamma3) +
         m.R4 * cross * std::cos(phi1 + phi2 + m.gamma4);
}

/// Standing waves along x; the b^2 term carries gamma2.
inline double rho_two_mode_standing(const TwoModeMoments& m, const ModeGeometry& g, const SpacetimePoint& p) {
  const double w1 = g.omega1, w2 = g.omega2;
  const double x = p.x[0], t = p.t;
  const double sq = std::sqrt(w1 * w2);
  return m.n1 * w1 + m.n2 * w2 + m.R1 * w1 * std::cos(2.0 * w1 * x) * std::cos(2.0 * w1 * t - m.gamma1) +
         m.R2 * w2 * std::cos(2.0 * w2 * x) * std::cos(2.0 * w2 * t - m.gamma2) +
         2.0 * m.R3 * sq * std::cos((w2 - w1) * x) * std::cos((w2 - w1) * t - m.gamma3) +
         2.0 * m.R4 * sq * std::cos((w1 + w2) * x) * std::cos((w1 + w2) * t - m.gamma4);
}

inline double rho_two_mode(const TwoModeMoments& m, const ModeGeometry& g, const SpacetimePoint& p) {
  return g.kind == Wave::traveling ? rho_two_mode_traveling(m, g, p) : rho_two_mode_standing(m, g, p);
}

/// Point at coordinate s along khat1 (traveling) or the x axis (standing).
inline SpacetimePoint point_on_line(const ModeGeometry& g, double s, double t) {
  SpacetimePoint p;
  const Vec3& k = g.kind == Wave::traveling ? g.khat1 : Vec3{1.0, 0.0, 0.0};
  p.x = {s * k[0], s * k[1], s * k[2]};
  p.t = t;
  return p;
}

namespace detail {

inline bool finite_moments(const TwoModeMoments& m) {
  for (double v : {m.n1, m.n2, m.R1, m.R2, m.R3, m.R4, m.gamma1, m.gamma2, m.gamma3, m.gamma4}) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

/// Strict order used for ties: value, then t, then s.
inline bool better(double v, double t, double s, double bv, double bt, double bs) {
  return std::tie(v, t, s) < std::tie(bv, bt, bs);
}

/// Damped Newton descent on f(s, t) with finite-difference derivatives, kept inside [0, window]^2.
template <class Fn>
std::array<double, 3> refine_min(const Fn& f, double s, double t, double window) {
  auto clamp = [window](double v) { return std::clamp(v, 0.0, window); };
  double fv = f(s, t);
  for (int iter = 0; iter < 200; ++iter) {
    const double hg = 1e-6, hh = 1e-4;
    const double gs = (f(s + hg, t) - f(s - hg, t)) / (2 * hg);
    const double gt = (f(s, t + hg) - f(s, t - hg)) / (2 * hg);
    const double hss = (f(s + hh, t) - 2 * fv + f(s - hh, t)) / (hh * hh);
    const double htt = (f(s, t + hh) - 2 * fv + f(s, t - hh)) / (hh * hh);
    const double hst =
        (f(s + hh, t + hh) - f(s + hh, t - hh) - f(s - hh, t + hh) + f(s - hh, t - hh)) / (4 * hh * hh);
    // Shift the Hessian until it is positive definite.
    const double tr = hss + htt, det = hss * htt - hst * hst;
    const double lmin = 0.5 * tr - std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    const double mu = std::max(0.0, -lmin) + 1e-9 * (1.0 + std::abs(tr));
    const double a = hss + mu, d = htt + mu, b = hst;
    const double den = a * d - b * b;
    double ds = -(d * gs - b * gt) / den;
    double dt = -(a * gt - b * gs) / den;
    if (!std::isfinite(ds) || !std::isfinite(dt)) break;

    bool moved = false;
    for (double step = 1.0; step > 1e-10; step *= 0.5) {
      const double ns = clamp(s + step * ds), nt = clamp(t + step * dt);
      const double nv = f(ns, nt);
      if (nv < fv) {
        moved = std::abs(ns - s) + std::abs(nt - t) > 1e-13;
        s = ns;
        t = nt;
        fv = nv;
        break;
      }
    }
    if (!moved) break;
  }
  return {fv, s, t};
}

}  // namespace detail

/// Minimum of rho over spacetime, searched on the line through the origin
/// along khat1 (coordinate s) and time t, both in [0, window]. For
/// non-parallel wave vectors the two mode phases are independent functions of
/// (s, t), so this covers every phase combination given a long enough window.
/// A grid_n x grid_n scan seeds damped-Newton refinement of the lowest grid
/// minima. The result is never above the lowest sampled value.
inline DensitySample rho_min_two_mode_numeric(const TwoModeMoments& m, const ModeGeometry& g, double window,
                                              int grid_n) {
  if (grid_n < 16) throw std::invalid_argument("rho_min_two_mode_numeric: grid_n must be >= 16");
  if (!(window > 0.0) || !std::isfinite(window)) throw std::invalid_argument("rho_min_two_mode_numeric: window must be > 0");
  if (!detail::finite_moments(m)) throw std::domain_error("rho_min_two_mode_numeric: non-finite moments");
  g.validate();

  auto f = [&](double s, double t) { return rho_two_mode(m, g, point_on_line(g, s, t)); };
  const double h = window / (grid_n - 1);
  std::vector<double> grid(static_cast<std::size_t>(grid_n) * grid_n);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) grid[static_cast<std::size_t>(i) * grid_n + j] = f(i * h, j * h);
  }
  auto at = [&](int i, int j) { return grid[static_cast<std::size_t>(i) * grid_n + j]; };

  struct Cand {
    double v, t, s;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double v = at(i, j);
      bool local = true;
      for (int di = -1; di <= 1 && local; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && b >= 0 && a < grid_n && b < grid_n && at(a, b) < v) {
            local = false;
            break;
          }
        }
      }
      if (local) cands.push_back({v, j * h, i * h});
    }
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& x, const Cand& y) { return std::tie(x.v, x.t, x.s) < std::tie(y.v, y.t, y.s); });
  if (cands.size() > 16) cands.resize(16);

  double bv = cands.front().v, bt = cands.front().t, bs = cands.front().s;
  for (const auto& c : cands) {
    const auto [v, s, t] = detail::refine_min(f, c.s, c.t, window);
    if (detail::better(v, t, s, bv, bt, bs)) {
      bv = v;
      bt = t;
      bs = s;
    }
  }
  return {point_on_line(g, bs, bt), bv};
}

/// Samples rho on a grid_n x grid_n (s, t) grid over [0, window]^2 and attaches the refined minimum.
inline DensityProfile density_profile(const TwoModeMoments& m, const ModeGeometry& g, double window, int grid_n) {
  DensityProfile prof;
  prof.min_found = rho_min_two_mode_numeric(m, g, window, grid_n);
  const double h = window / (grid_n - 1);
  prof.samples.reserve(static_cast<std::size_t>(grid_n) * grid_n);
  for (int j = 0; j < grid_n; ++j) {
    for (int i = 0; i < grid_n; ++i) {
      const auto p = point_on_line(g, i * h, j * h);
      prof.samples.push_back({p, rho_two_mode(m, g, p)});
    }
  }
  return prof;
}

// ---------------------------------------------------------------------------
// Closed-form minima and averages

/// Two-mode squeezed vacuum, aligned traveling modes (khat1 . khat2 = 1):
/// -sinh r [2 sqrt(w1 w2) cosh r - (w1 + w2) sinh r]. Independent of delta.
inline double rho_min_br_closed(double r, [[maybe_unused]] double delta, double omega1, double omega2) {
  detail::require_nonneg(r, "rho_min_br_closed: r");
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw std::invalid_argument("rho_min_br_closed: omegas must be > 0");
  const double s = std::sinh(r), c = std::cosh(r);
  return -s * (2.0 * std::sqrt(omega1 * omega2) * c - (omega1 + omega2) * s);
}

/// How much less negative the two-mode squeezed vacuum gets than two independent
/// squeezed vacua: sinh r cosh r (sqrt(w1) - sqrt(w2))^2.
inline double br_vs_2sq_gap(double r, double omega1, double omega2) {
  detail::require_nonneg(r, "br_vs_2sq_gap: r");
  const double d = std::sqrt(omega1) - std::sqrt(omega2);
  return std::sinh(r) * std::cosh(r) * d * d;
}

/// -4 omega f(sigma).
inline double rho_min_ecs_aligned(double sigma, double omega) { return -4.0 * omega * f_sigma(sigma); }

/// n1 w1 + n2 w2. Requires distinct modes (w1 != w2 or khat1 != khat2): for
/// identical modes the a^dagger b term does not oscillate.
inline double spacetime_average(const TwoModeMoments& m, const ModeGeometry& g) {
  return m.n1 * g.omega1 + m.n2 * g.omega2;
}

/// Mean of rho over t in [0, period) at the point s on the line, by the
/// rectangle rule (exact for trigonometric polynomials of low enough degree).
inline double period_average(const TwoModeMoments& m, const ModeGeometry& g, double s, double period, int samples) {
  if (samples < 1) throw std::invalid_argument("period_average: samples must be >= 1");
  double acc = 0.0;
  for (int k = 0; k < samples; ++k) acc += rho_two_mode(m, g, point_on_line(g, s, period * k / samples));
  return acc / samples;
}

}  // namespace negen
