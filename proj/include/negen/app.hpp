#pragma once

// Runners behind the negen command-line tool. Each takes parsed options and an
// output stream and returns the process exit code; argument parsing lives in
// tools/negen_cli.cpp.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "negen/energy_density.hpp"
#include "negen/families.hpp"
#include "negen/optimizer.hpp"
#include "negen/verify.hpp"

namespace negen::app {

enum Exit : int { kOk = 0, kUsage = 1, kVerifyFailed = 2, kNumeric = 3 };

/// Bad flags or names; maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Format { csv, json };

using Values = std::map<std::string, double>;
using json = nlohmann::ordered_json;

/// %.9g, the precision of every CSV cell.
inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Parses a real, optionally written as a multiple of pi: "2", "-0.5pi", "pi", "pi/2".
inline double parse_real(const std::string& text) {
  std::string s = text;
  double scale = 1.0;
  if (const auto slash = s.find("pi/"); slash != std::string::npos) {
    scale = std::numbers::pi / std::stod(s.substr(slash + 3));
    s = s.substr(0, slash);
  } else if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    scale = std::numbers::pi;
    s.resize(s.size() - 2);
  } else {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + text + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + text + "'");
    return v;
  }
  if (s.empty() || s == "+") return scale;
  if (s == "-") return -scale;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + text + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + text + "'");
  return v * scale;
}

/// "key=value" pairs from repeated --set flags.
inline Values parse_sets(const std::vector<std::string>& sets) {
  Values out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--set expects key=value, got '" + s + "'");
    out[s.substr(0, eq)] = parse_real(s.substr(eq + 1));
  }
  return out;
}

struct SweepSpec {
  std::string key;
  double lo = 0.0, hi = 0.0;
  int steps = 0;

  double at(int i) const { return steps == 0 ? lo : lo + (hi - lo) * i / steps; }
};

/// "key=lo:hi:steps".
inline SweepSpec parse_sweep(const std::string& s) {
  const auto eq = s.find('=');
  const auto c1 = s.find(':', eq == std::string::npos ? 0 : eq);
  const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
  if (eq == std::string::npos || eq == 0 || c1 == std::string::npos || c2 == std::string::npos) {
    throw UsageError("--sweep expects key=lo:hi:steps, got '" + s + "'");
  }
  SweepSpec sp{s.substr(0, eq), parse_real(s.substr(eq + 1, c1 - eq - 1)), parse_real(s.substr(c1 + 1, c2 - c1 - 1)), 0};
  try {
    std::size_t used = 0;
    sp.steps = std::stoi(s.substr(c2 + 1), &used);
    if (used != s.size() - c2 - 1) throw UsageError("");
  } catch (const std::exception&) {
    throw UsageError("--sweep steps must be an integer in '" + s + "'");
  }
  if (sp.steps < 0) throw UsageError("--sweep steps must be >= 0");
  return sp;
}

/// "kind:w1:w2[:cos]" with kind traveling or standing.
inline ModeGeometry parse_geometry(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto c = s.find(':', start);
    parts.push_back(s.substr(start, c - start));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) throw UsageError("--geometry expects kind:w1:w2[:cosangle]");
  const double w1 = parse_real(parts[1]), w2 = parse_real(parts[2]);
  try {
    if (parts[0] == "traveling") return ModeGeometry::traveling(w1, w2, parts.size() == 4 ? parse_real(parts[3]) : 1.0);
    if (parts[0] == "standing") return ModeGeometry::standing(w1, w2);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  throw UsageError("--geometry kind must be traveling or standing");
}

// ---------------------------------------------------------------------------
// Families by name

struct Family {
  std::string name;
  bool two_mode = false;
  std::vector<std::pair<std::string, double>> defaults;
  std::function<FamilyParams(const Values&)> make;
};

inline const std::vector<Family>& families() {
  constexpr double pi = std::numbers::pi;
  static const std::vector<Family> all = {
      {"coherent-pair",
       false,
       {{"alpha", 0.8}, {"beta", 0.8}, {"eta", 1.0}, {"delta1", 0.0}, {"delta2", pi}, {"delta", 0.0}},
       [](const Values& v) -> FamilyParams {
         return CoherentPair{std::polar(v.at("alpha"), v.at("delta1")), std::polar(v.at("beta"), v.at("delta2")),
                             std::polar(v.at("eta"), v.at("delta"))};
       }},
      {"squeezed-vacuum",
       false,
       {{"r", 1.0}},
       [](const Values& v) -> FamilyParams { return SqueezedPair{v.at("r"), 0.0}; }},
      {"superposed-squeezed",
       false,
       {{"r", 1.0}, {"eta", 1.0}, {"theta", 0.0}},
       [](const Values& v) -> FamilyParams { return SqueezedPair{v.at("r"), std::polar(v.at("eta"), v.at("theta"))}; }},
      {"coherent-squeezed",
       false,
       {{"r", 1.0}, {"delta", 0.0}, {"alpha", 0.6}, {"alpha_phase", 0.0}, {"eta", 1.0}, {"theta", 0.0}},
       [](const Values& v) -> FamilyParams {
         return CoherentSqueezed{v.at("r"), v.at("delta"), std::polar(v.at("alpha"), v.at("alpha_phase")),
                                 std::polar(v.at("eta"), v.at("theta"))};
       }},
      {"vacuum-squeezed",
       false,
       {{"r", 1.0}, {"eta", 1.0}, {"theta", pi}},
       [](const Values& v) -> FamilyParams { return VacuumSqueezed{v.at("r"), std::polar(v.at("eta"), v.at("theta"))}; }},
      {"barnett-radmore",
       true,
       {{"r", 1.0}, {"delta", 0.0}},
       [](const Values& v) -> FamilyParams { return BarnettRadmore{v.at("r"), v.at("delta")}; }},
      {"zhang",
       true,
       {{"r", 0.5}, {"theta", pi / 2}},
       [](const Values& v) -> FamilyParams { return ZhangReal{v.at("r"), v.at("theta")}; }},
      {"entangled-coherent",
       true,
       {{"sigma", 0.7}, {"theta", 0.0}, {"delta1", 0.0}, {"delta2", 0.0}},
       [](const Values& v) -> FamilyParams {
         return EntangledCoherent{v.at("sigma"), v.at("theta"), v.at("delta1"), v.at("delta2")};
       }},
  };
  return all;
}

inline const Family& family_by_name(const std::string& name) {
  for (const auto& f : families()) {
    if (f.name == name) return f;
  }
  std::string known;
  for (const auto& f : families()) known += (known.empty() ? "" : ", ") + f.name;
  throw UsageError("unknown family '" + name + "' (known: " + known + ")");
}

/// Defaults overridden by `sets`; rejects keys the family does not have.
inline Values resolve(const Family& f, const Values& sets) {
  Values v(f.defaults.begin(), f.defaults.end());
  for (const auto& [k, val] : sets) {
    if (!v.contains(k)) throw UsageError("family " + f.name + " has no parameter '" + k + "'");
    v[k] = val;
  }
  return v;
}

inline json config_json(const Values& v) {
  json j = json::object();
  for (const auto& [k, val] : v) j[k] = val;
  return j;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string family;
  Values sets;
  SweepSpec sweep;
  Format format = Format::csv;
  std::uint64_t seed = 42;
};

/// steps + 1 rows of moments along one parameter. "ecs-f" sweeps sigma through
/// f(sigma) and -4 omega f(sigma). Points whose normalization degenerates give
/// rows with empty cells.
inline int run_sweep(const SweepOptions& o, std::ostream& out) {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
  json cfg;

  if (o.family == "ecs-f") {
    Values v{{"omega", 1.0}, {"sigma", 0.7}};
    for (const auto& [k, val] : o.sets) {
      if (!v.contains(k)) throw UsageError("family ecs-f has no parameter '" + k + "'");
      v[k] = val;
    }
    if (o.sweep.key != "sigma") throw UsageError("ecs-f sweeps sigma only");
    header = {"sigma", "f", "rho_min"};
    for (int i = 0; i <= o.sweep.steps; ++i) {
      const double s = o.sweep.at(i);
      rows.push_back({s, f_sigma(s), rho_min_ecs_aligned(s, v.at("omega"))});
    }
    cfg = config_json(v);
  } else {
    const auto& fam = family_by_name(o.family);
    Values v = resolve(fam, o.sets);
    if (!v.contains(o.sweep.key)) throw UsageError("family " + fam.name + " has no parameter '" + o.sweep.key + "'");
    header = fam.two_mode ? std::vector<std::string>{o.sweep.key, "n1", "n2", "R1", "R2", "R3", "R4", "F"}
                          : std::vector<std::string>{o.sweep.key, "n", "R", "F"};
    cfg = config_json(v);
    for (int i = 0; i <= o.sweep.steps; ++i) {
      v[o.sweep.key] = o.sweep.at(i);
      std::vector<std::optional<double>> row(header.size());
      row[0] = v[o.sweep.key];
      try {
        const auto m = family_moments(fam.make(v));
        if (fam.two_mode) {
          row = {row[0], m.n1, m.n2, m.R1, m.R2, m.R3, m.R4, m.R1 - m.n1};
        } else {
          row = {row[0], m.n1, m.R1, m.R1 - m.n1};
        }
      } catch (const DegenerateState&) {
      }
      rows.push_back(std::move(row));
    }
  }

  if (o.format == Format::csv) {
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << (row[k] ? num(*row[k]) : "");
      out << '\n';
    }
  } else {
    json j;
    j["command"] = "sweep";
    j["seed"] = o.seed;
    j["config"] = {{"family", o.family},
                   {"params", cfg},
                   {"sweep", {{"key", o.sweep.key}, {"lo", o.sweep.lo}, {"hi", o.sweep.hi}, {"steps", o.sweep.steps}}}};
    j["rows"] = json::array();
    for (const auto& row : rows) {
      json r = json::object();
      for (std::size_t k = 0; k < row.size(); ++k) r[header[k]] = row[k] ? json(*row[k]) : json(nullptr);
      j["rows"].push_back(r);
    }
    out << j.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// search

struct SearchOptions {
  std::string family;
  Values sets;                                      // pinned coordinates
  std::map<std::string, std::pair<double, double>> bounds;  // overridden boxes
  opt::SearchConfig config;
  Format format = Format::csv;
};

inline opt::SearchSpace search_space(const SearchOptions& o) {
  opt::SearchSpace space;
  try {
    space = opt::spaces::by_name(o.family);
    for (const auto& [k, b] : o.bounds) space.set_bounds(k, b.first, b.second);
    for (const auto& [k, v] : o.sets) space.pin(k, v);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return space;
}

/// Multi-start ascent of F; one row per distinct maximum. The CSV form reports
/// failed and unconverged start counts on `log`.
inline int run_search(const SearchOptions& o, std::ostream& out, std::ostream& log) {
  if (o.config.starts < 1) throw UsageError("--starts must be >= 1");
  const auto space = search_space(o);
  const auto res = opt::multi_start(space, o.config);

  if (o.format == Format::csv) {
    out << "rank";
    for (const auto& c : space.coords) out << ',' << c.name;
    out << ",F,n,R,gamma,grad_norm,iterations,converged,multiplicity\n";
    int rank = 0;
    for (const auto& e : res.extrema) {
      out << ++rank;
      for (double p : e.params) out << ',' << num(p);
      out << ',' << num(e.F) << ',' << num(e.n) << ',' << num(e.R) << ',' << num(e.gamma) << ','
          << num(e.grad_norm) << ',' << e.iterations << ',' << (e.converged ? 1 : 0) << ',' << e.multiplicity
          << '\n';
    }
    log << "starts " << res.starts << ", failed " << res.failed << ", unconverged " << res.unconverged << ", maxima "
        << res.extrema.size() << '\n';
  } else {
    json j;
    j["command"] = "search";
    j["seed"] = o.config.seed;
    json coords = json::array();
    for (const auto& c : space.coords) {
      coords.push_back({{"name", c.name}, {"lo", c.lo}, {"hi", c.hi}, {"angular", c.angular}});
    }
    j["config"] = {{"family", o.family},
                   {"coordinates", coords},
                   {"starts", o.config.starts},
                   {"fd_step", o.config.fd_step},
                   {"step_init", o.config.step_init},
                   {"armijo_c", o.config.armijo_c},
                   {"grad_tol", o.config.grad_tol},
                   {"max_iters", o.config.max_iters},
                   {"cluster_tol", o.config.cluster_tol}};
    j["report"] = {{"starts", res.starts}, {"failed", res.failed}, {"unconverged", res.unconverged}};
    j["extrema"] = json::array();
    for (const auto& e : res.extrema) {
      json params = json::object();
      for (std::size_t k = 0; k < e.params.size(); ++k) params[space.coords[k].name] = e.params[k];
      j["extrema"].push_back({{"params", params},
                              {"F", e.F},
                              {"n", e.n},
                              {"R", e.R},
                              {"gamma", e.gamma},
                              {"grad_norm", e.grad_norm},
                              {"iterations", e.iterations},
                              {"converged", e.converged},
                              {"multiplicity", e.multiplicity}});
    }
    out << j.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// density

struct DensityOptions {
  std::string family;
  Values sets;
  ModeGeometry geometry = ModeGeometry::traveling(1.0, 1.0, 1.0);
  double window = 2.0 * std::numbers::pi;
  int grid = 64;
  Format format = Format::csv;
  std::uint64_t seed = 42;
};

/// rho on a grid over (coordinate along the modes, t), then the refined
/// minimum as a final row with kind "min".
inline int run_density(const DensityOptions& o, std::ostream& out) {
  const auto& fam = family_by_name(o.family);
  const Values v = resolve(fam, o.sets);
  if (o.grid < 16) throw UsageError("--grid must be >= 16");
  if (!(o.window > 0.0)) throw UsageError("--window must be > 0");
  const auto m = family_moments(fam.make(v));
  const auto prof = density_profile(m, o.geometry, o.window, o.grid);
  const Vec3 axis = o.geometry.kind == Wave::traveling ? o.geometry.khat1 : Vec3{1.0, 0.0, 0.0};
  auto coord = [&](const SpacetimePoint& p) { return dot(axis, p.x); };

  if (o.format == Format::csv) {
    out << "kind,x,t,rho\n";
    for (const auto& s : prof.samples) out << "sample," << num(coord(s.point)) << ',' << num(s.point.t) << ',' << num(s.rho) << '\n';
    out << "min," << num(coord(prof.min_found.point)) << ',' << num(prof.min_found.point.t) << ','
        << num(prof.min_found.rho) << '\n';
  } else {
    json j;
    j["command"] = "density";
    j["seed"] = o.seed;
    j["config"] = {{"family", o.family},
                   {"params", config_json(v)},
                   {"geometry",
                    {{"kind", o.geometry.kind == Wave::traveling ? "traveling" : "standing"},
                     {"omega1", o.geometry.omega1},
                     {"omega2", o.geometry.omega2},
                     {"cos_angle", o.geometry.cos_angle()}}},
                   {"window", o.window},
                   {"grid", o.grid}};
    j["rows"] = json::array();
    for (const auto& s : prof.samples) j["rows"].push_back({{"x", coord(s.point)}, {"t", s.point.t}, {"rho", s.rho}});
    j["min"] = {{"x", coord(prof.min_found.point)}, {"t", prof.min_found.point.t}, {"rho", prof.min_found.rho}};
    out << j.dump(2) << '\n';
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  verify::VerifyConfig config;
  Format format = Format::csv;
};

/// Oracle-vs-closed-form report. Exit 2 if any family or identity check fails.
inline int run_verify(const VerifyOptions& o, std::ostream& out) {
  if (o.config.draws < 0) throw UsageError("--draws must be >= 0");
  if (o.config.cutoff_one_mode < 2 || o.config.cutoff_per_mode < 2) throw UsageError("cutoffs must be >= 2");
  for (const auto& f : o.config.families) {
    const auto all = verify::family_names();
    if (std::find(all.begin(), all.end(), f) == all.end()) throw UsageError("unknown verification family '" + f + "'");
  }
  const auto rep = verify::run(o.config);

  if (o.format == Format::csv) {
    out << "section,name,draws,deviation,tolerance,tail_mass,detail,pass\n";
    for (const auto& f : rep.families) {
      out << "family," << f.family << ',' << f.draws << ',' << num(f.max_deviation) << ',' << num(f.tolerance) << ','
          << num(f.max_tail) << ",\"" << f.worst << "\"," << (f.pass ? 1 : 0) << '\n';
    }
    for (const auto& i : rep.identities) {
      out << "identity,\"" << i.name << "\",," << num(i.deviation) << ',' << num(i.tolerance) << ",,\"r=" << num(i.r)
          << "\"," << (i.pass ? 1 : 0) << '\n';
    }
    for (const auto& d : rep.discrepancies) {
      out << "variant,\"" << d.name << "\",," << num(d.deviation) << ",,,\"" << d.where << "\",\n";
    }
  } else {
    json j;
    j["command"] = "verify";
    j["seed"] = o.config.seed;
    j["config"] = {{"draws", o.config.draws},
                   {"cutoff", o.config.cutoff_one_mode},
                   {"cutoff_two_mode", o.config.cutoff_per_mode},
                   {"families", o.config.families}};
    j["rows"] = json::array();
    for (const auto& f : rep.families) {
      j["rows"].push_back({{"section", "family"},
                           {"name", f.family},
                           {"draws", f.draws},
                           {"deviation", f.max_deviation},
                           {"tolerance", f.tolerance},
                           {"tail_mass", f.max_tail},
                           {"worst", f.worst},
                           {"pass", f.pass}});
    }
    for (const auto& i : rep.identities) {
      j["rows"].push_back({{"section", "identity"},
                           {"name", i.name},
                           {"r", i.r},
                           {"deviation", i.deviation},
                           {"tolerance", i.tolerance},
                           {"pass", i.pass}});
    }
    for (const auto& d : rep.discrepancies) {
      j["rows"].push_back({{"section", "variant"}, {"name", d.name}, {"where", d.where}, {"deviation", d.deviation}});
    }
    j["pass"] = rep.pass();
    out << j.dump(2) << '\n';
  }
  return rep.pass() ? kOk : kVerifyFailed;
}

}  // namespace negen::app
