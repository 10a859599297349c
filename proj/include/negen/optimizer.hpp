#pragma once

// Multi-start projected gradient ascent of F = R - n over box-bounded family
// parameters. Gradients are central finite differences; each start gets its own
// deterministic random stream so results do not depend on execution order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "negen/errors.hpp"
#include "negen/families.hpp"
#include "negen/moments.hpp"
#include "negen/random.hpp"

namespace negen::opt {

using Params = std::vector<double>;

struct Coordinate {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool angular = false;  // wrapped onto (-pi, pi]; lo/hi only bound the random draws

  bool pinned() const { return lo == hi; }
};

struct SearchSpace {
  std::string family;
  std::vector<Coordinate> coords;
  /// Moments whose R - n is maximized. May throw DegenerateState.
  std::function<OneModeMoments(std::span<const double>)> moments;
  /// Maps symmetry-equivalent parameter vectors onto one representative.
  std::function<void(Params&)> canonicalize = [](Params&) {};

  std::size_t dim() const { return coords.size(); }
  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (coords[i].name == name) return i;
    }
    throw std::invalid_argument("unknown parameter '" + name + "' for family " + family);
  }
  /// Fixes a coordinate to one value.
  void pin(const std::string& name, double value) {
    auto& c = coords[index_of(name)];
    c.lo = c.hi = c.angular ? normalize_angle(value) : value;
  }
  void set_bounds(const std::string& name, double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("bounds for '" + name + "' are empty");
    auto& c = coords[index_of(name)];
    c.lo = lo;
    c.hi = hi;
  }
};

struct SearchConfig {
  int starts = 64;
  std::uint64_t seed = 42;
  double fd_step = 1e-5;  // scaled by max(1, |p_i|)
  double step_init = 0.1;
  double armijo_c = 1e-4;
  double grad_tol = 1e-7;
  int max_iters = 500;
  double cluster_tol = 0.02;
};

struct Extremum {
  Params params;
  double F = 0.0;
  double n = 0.0, R = 0.0, gamma = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool fallback_used = false;  // a one-sided stencil replaced a failed central one
  int multiplicity = 1;        // starts that landed in this cluster
};

struct SearchResult {
  std::vector<Extremum> extrema;  // distinct clusters, descending F
  int starts = 0;
  int failed = 0;       // objective undefined at the start or along every stencil
  int unconverged = 0;  // stopped before the gradient fell below grad_tol
};

// ---------------------------------------------------------------------------
// Objective and gradient

inline double objective_F(const SearchSpace& space, std::span<const double> p) {
  return space.moments(p).F();
}

/// objective_F with degenerate or non-finite points mapped to nullopt.
inline std::optional<double> try_objective(const SearchSpace& space, std::span<const double> p) {
  try {
    const double f = objective_F(space, p);
    if (std::isfinite(f)) return f;
  } catch (const DegenerateState&) {
  }
  return std::nullopt;
}

/// Clamps magnitudes into their box and wraps angles.
inline void project(const SearchSpace& space, Params& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = space.coords[i];
    if (c.pinned()) {
      p[i] = c.lo;
    } else if (c.angular) {
      p[i] = normalize_angle(p[i]);
    } else {
      p[i] = std::clamp(p[i], c.lo, c.hi);
    }
  }
}

/// Difference q - p, taken on the circle for angular coordinates.
inline double coord_diff(const Coordinate& c, double q, double p) {
  return c.angular ? normalize_angle(q - p) : q - p;
}

struct Gradient {
  std::vector<double> g;
  bool fallback_used = false;
  bool failed = false;  // some non-pinned coordinate had no usable stencil
};

/// Central differences with step h * max(1, |p_i|). At a box face, or when one
/// side of the stencil is undefined, a one-sided difference is used instead.
inline Gradient fd_gradient(const SearchSpace& space, std::span<const double> p, double h) {
  Gradient out;
  out.g.assign(p.size(), 0.0);
  const auto f0 = try_objective(space, p);
  Params q(p.begin(), p.end());
  auto eval_at = [&](std::size_t i, double v) {
    q[i] = v;
    auto r = try_objective(space, q);
    q[i] = p[i];
    return r;
  };
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& c = space.coords[i];
    if (c.pinned()) continue;
    const double hi_step = h * std::max(1.0, std::abs(p[i]));
    const bool room_up = c.angular || p[i] + hi_step <= c.hi;
    const bool room_dn = c.angular || p[i] - hi_step >= c.lo;
    std::optional<double> up, dn;
    if (room_up) up = eval_at(i, p[i] + hi_step);
    if (room_dn) dn = eval_at(i, p[i] - hi_step);
    if (up && dn) {
      out.g[i] = (*up - *dn) / (2.0 * hi_step);
      continue;
    }
    if (room_up && room_dn) out.fallback_used = true;
    if (up && f0) {
      out.g[i] = (*up - *f0) / hi_step;
    } else if (dn && f0) {
      out.g[i] = (*f0 - *dn) / hi_step;
    } else {
      out.failed = true;
    }
  }
  return out;
}

/// Zeroes components that would push a magnitude through its bound.
inline void project_gradient(const SearchSpace& space, std::span<const double> p, std::vector<double>& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto& c = space.coords[i];
    if (c.pinned() || (!c.angular && ((p[i] <= c.lo && g[i] < 0.0) || (p[i] >= c.hi && g[i] > 0.0)))) {
      g[i] = 0.0;
    }
  }
}

inline double norm2(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Single ascent

/// Steepest ascent with backtracking (Armijo) line search. The trial step
/// starts at four times the last accepted one, so it can grow again after a
/// short step. Accepted F values never decrease. If no step along the
/// gradient improves F, the difference step is shrunk (twice at most, by 10x
/// each) in case truncation error spoiled the direction. Returns nullopt when
/// F is undefined at the start or no gradient can be formed. If `trace` is
/// given, every accepted F (starting with the initial one) is appended.
inline std::optional<Extremum> ascend(const SearchSpace& space, Params start, const SearchConfig& cfg,
                                      std::vector<double>* trace = nullptr) {
  if (start.size() != space.dim()) throw std::invalid_argument("ascend: start has wrong dimension");
  project(space, start);
  Params p = std::move(start);
  auto f = try_objective(space, p);
  if (!f) return std::nullopt;
  if (trace) trace->push_back(*f);

  Extremum e;
  double step = cfg.step_init;
  double h = cfg.fd_step;
  Params q(p.size());
  int it = 0;
  double gn = 0.0;
  for (;; ++it) {
    auto grad = fd_gradient(space, p, h);
    if (grad.failed) return std::nullopt;
    e.fallback_used = e.fallback_used || grad.fallback_used;
    project_gradient(space, p, grad.g);
    gn = norm2(grad.g);
    if (gn <= cfg.grad_tol || it >= cfg.max_iters) break;

    bool accepted = false;
    for (double t = 4.0 * step; t > 1e-14; t *= 0.5) {
      for (std::size_t i = 0; i < p.size(); ++i) q[i] = p[i] + t * grad.g[i];
      project(space, q);
      const auto fq = try_objective(space, q);
      if (!fq) continue;
      double slope = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) slope += grad.g[i] * coord_diff(space.coords[i], q[i], p[i]);
      if (*fq > *f && *fq >= *f + cfg.armijo_c * slope) {
        p.swap(q);
        f = fq;
        if (trace) trace->push_back(*f);
        step = t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (h <= cfg.fd_step * 1.5e-2) break;  // pinned against a bound or at the resolution limit
      h *= 0.1;
    }
  }

  const auto m = space.moments(p);
  e.params = p;
  e.F = *f;
  e.n = m.n;
  e.R = m.R;
  e.gamma = m.gamma;
  e.grad_norm = gn;
  e.iterations = it;
  e.converged = gn <= cfg.grad_tol;
  return e;
}

// ---------------------------------------------------------------------------
// Random starts

/// Uniform draw of start `index` for the given seed. Depends only on
/// (seed, index), so starts can be generated in any order.
inline Params random_start(const SearchSpace& space, std::uint64_t seed, std::uint64_t index) {
  Stream rng(seed, index);
  Params p(space.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = rng.uniform(space.coords[i].lo, space.coords[i].hi);
  return p;
}

inline double cluster_distance(const SearchSpace& space, const Params& a, const Params& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(coord_diff(space.coords[i], a[i], b[i])));
  return d;
}

/// Canonicalizes, then groups results greedily in order of descending F:
/// each result joins the first cluster whose representative lies within
/// cfg.cluster_tol (max norm), else founds a new one.
inline std::vector<Extremum> cluster(const SearchSpace& space, std::vector<Extremum> found, double tol) {
  for (auto& e : found) {
    space.canonicalize(e.params);
    project(space, e.params);
  }
  std::sort(found.begin(), found.end(), [](const Extremum& a, const Extremum& b) {
    return std::tie(b.F, a.params) < std::tie(a.F, b.params);
  });
  std::vector<Extremum> reps;
  for (auto& e : found) {
    auto it = std::find_if(reps.begin(), reps.end(),
                           [&](const Extremum& r) { return cluster_distance(space, r.params, e.params) <= tol; });
    if (it == reps.end()) {
      e.multiplicity = 1;
      reps.push_back(std::move(e));
    } else {
      ++it->multiplicity;
    }
  }
  return reps;
}

/// Ascends from each given start, drops failed runs, and clusters the rest.
/// Runs that hit max_iters stay in, marked unconverged.
inline SearchResult multi_start(const SearchSpace& space, const SearchConfig& cfg, std::span<const Params> starts) {
  SearchResult res;
  res.starts = static_cast<int>(starts.size());
  std::vector<Extremum> found;
  for (const auto& s : starts) {
    auto e = ascend(space, s, cfg);
    if (!e) {
      ++res.failed;
      continue;
    }
    if (!e->converged) ++res.unconverged;
    found.push_back(std::move(*e));
  }
  res.extrema = cluster(space, std::move(found), cfg.cluster_tol);
  return res;
}

/// cfg.starts uniform random starts inside the search box.
inline SearchResult multi_start(const SearchSpace& space, const SearchConfig& cfg) {
  if (cfg.starts < 1) throw std::invalid_argument("multi_start: starts must be >= 1");
  std::vector<Params> starts;
  starts.reserve(cfg.starts);
  for (int i = 0; i < cfg.starts; ++i) starts.push_back(random_start(space, cfg.seed, static_cast<std::uint64_t>(i)));
  return multi_start(space, cfg, starts);
}

// ---------------------------------------------------------------------------
// Family search spaces

namespace spaces {

constexpr double kPi = std::numbers::pi;

/// (|alpha|, |beta|, |eta|, delta2, delta) with delta1 = 0, or with delta1
/// appended as a sixth free coordinate.
inline SearchSpace coherent_pair(bool free_delta1 = false) {
  SearchSpace s;
  s.family = "coherent-pair";
  s.coords = {{"alpha", 0.0, 3.0, false},
              {"beta", 0.0, 3.0, false},
              {"eta", 0.0, 4.0, false},
              {"delta2", -kPi, kPi, true},
              {"delta", -kPi, kPi, true}};
  if (free_delta1) s.coords.push_back({"delta1", -kPi, kPi, true});
  s.moments = [](std::span<const double> p) {
    const double d1 = p.size() > 5 ? p[5] : 0.0;
    return coherent_superposition_moments(
        {std::polar(p[0], d1), std::polar(p[1], p[3]), std::polar(p[2], p[4])});
  };
  // |alpha> + eta|beta> equals eta(|beta> + eta^{-1}|alpha>); rotating the
  // phase plane by -delta2 then restores a real first amplitude without
  // changing n or R. Phases of a zero amplitude are irrelevant.
  s.canonicalize = [](Params& p) {
    constexpr double tiny = 1e-6;
    if (p.size() > 5) {
      p[3] -= p[5];
      p[5] = 0.0;
    }
    if (p[2] < tiny) {
      std::fill(p.begin(), p.end(), 0.0);
      return;
    }
    if (p[0] > p[1]) p = {p[1], p[0], 1.0 / p[2], -p[3], -p[4]};
    if (p[0] < tiny || p[1] < tiny) p[3] = 0.0;
    if (p[0] < tiny) p[0] = 0.0;
    p[3] = normalize_angle(p[3]);
    p[4] = normalize_angle(p[4]);
  };
  return s;
}

inline SearchSpace squeezed_vacuum() {
  SearchSpace s;
  s.family = "squeezed-vacuum";
  s.coords = {{"r", 0.0, 5.0, false}, {"delta", -kPi, kPi, true}};
  s.moments = [](std::span<const double> p) { return squeezed_vacuum_moments(p[0], p[1]); };
  return s;
}

/// (r, |eta|, theta) for |xi> + |eta| e^{i theta} |-xi>.
inline SearchSpace superposed_squeezed() {
  SearchSpace s;
  s.family = "superposed-squeezed";
  s.coords = {{"r", 0.0, 4.0, false}, {"eta", 0.0, 4.0, false}, {"theta", -kPi, kPi, true}};
  s.moments = [](std::span<const double> p) { return superposed_squeezed_moments({p[0], std::polar(p[1], p[2])}); };
  return s;
}

/// (r, delta, alpha, |eta|, theta) for |xi> + |eta| e^{i theta} |alpha>, alpha real.
inline SearchSpace coherent_squeezed() {
  SearchSpace s;
  s.family = "coherent-squeezed";
  s.coords = {{"r", 0.0, 3.0, false},
              {"delta", -kPi, kPi, true},
              {"alpha", 0.0, 3.0, false},
              {"eta", 0.0, 4.0, false},
              {"theta", -kPi, kPi, true}};
  s.moments = [](std::span<const double> p) {
    return coherent_plus_squeezed_moments({p[0], p[1], complex(p[2], 0.0), std::polar(p[3], p[4])});
  };
  return s;
}

/// (r, |eta|, theta) for |xi> + |eta| e^{i theta} |0>.
inline SearchSpace vacuum_squeezed() {
  SearchSpace s;
  s.family = "vacuum-squeezed";
  s.coords = {{"r", 0.0, 6.0, false}, {"eta", 0.0, 4.0, false}, {"theta", -kPi, kPi, true}};
  s.moments = [](std::span<const double> p) { return vacuum_plus_squeezed_moments({p[0], std::polar(p[1], p[2])}); };
  return s;
}

/// (r, theta); maximizes R1 - n1. F is even in theta.
inline SearchSpace zhang() {
  SearchSpace s;
  s.family = "zhang";
  s.coords = {{"r", 0.0, 3.0, false}, {"theta", -kPi, kPi, true}};
  s.moments = [](std::span<const double> p) {
    const auto m = zhang_moments({p[0], p[1]});
    return OneModeMoments{m.n1, m.R1, m.gamma1};
  };
  s.canonicalize = [](Params& p) { p[1] = std::abs(normalize_angle(p[1])); };
  return s;
}

inline std::vector<std::string> names() {
  return {"coherent-pair", "squeezed-vacuum", "superposed-squeezed", "coherent-squeezed", "vacuum-squeezed", "zhang"};
}

/// Space by family name; throws std::invalid_argument for unknown names.
inline SearchSpace by_name(const std::string& name) {
  if (name == "coherent-pair") return coherent_pair();
  if (name == "squeezed-vacuum") return squeezed_vacuum();
  if (name == "superposed-squeezed") return superposed_squeezed();
  if (name == "coherent-squeezed") return coherent_squeezed();
  if (name == "vacuum-squeezed") return vacuum_squeezed();
  if (name == "zhang") return zhang();
  throw std::invalid_argument("unknown search family '" + name + "'");
}

}  // namespace spaces

}  // namespace negen::opt
