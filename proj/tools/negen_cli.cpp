// negen: energy density of one- and two-mode states from the command line.
//
//   negen sweep   --family F --sweep key=lo:hi:steps [--set k=v ...]
//   negen search  --family F [--starts N] [--seed S] [--set k=v ...] [--bound k=lo:hi ...]
//   negen density --family F --geometry kind:w1:w2[:cos] [--set k=v ...]
//   negen verify  [--families a,b] [--draws N] [--seed S] [--cutoff C] [--cutoff-two-mode C]
//
// Exit codes: 0 success, 1 usage, 2 verification failure, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "negen/app.hpp"

namespace {

using namespace negen::app;

struct Common {
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 42;
};

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw UsageError("--format must be csv or json");
}

void add_common(CLI::App* cmd, Common& c, std::uint64_t default_seed) {
  c.seed = default_seed;
  cmd->add_option("--out", c.out, "Output file (default: standard output)");
  cmd->add_option("--format", c.format, "csv or json")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

std::map<std::string, std::pair<double, double>> parse_bounds(const std::vector<std::string>& items) {
  std::map<std::string, std::pair<double, double>> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    const auto colon = s.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || eq == 0 || colon == std::string::npos) {
      throw UsageError("--bound expects key=lo:hi, got '" + s + "'");
    }
    out[s.substr(0, eq)] = {parse_real(s.substr(eq + 1, colon - eq - 1)), parse_real(s.substr(colon + 1))};
  }
  return out;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto c = s.find(',', start);
    const auto item = s.substr(start, c == std::string::npos ? std::string::npos : c - start);
    if (!item.empty()) out.push_back(item);
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy density of one- and two-mode quantum states"};
  app.require_subcommand(1);

  std::string family;
  std::vector<std::string> sets, bounds;

  Common sweep_c;
  std::string sweep_spec;
  auto* sweep = app.add_subcommand("sweep", "Moments along one parameter");
  sweep->add_option("--family", family, "State family, or ecs-f")->required();
  sweep->add_option("--sweep", sweep_spec, "key=lo:hi:steps")->required();
  sweep->add_option("--set", sets, "Fixed parameter key=value (repeatable)");
  add_common(sweep, sweep_c, 42);

  Common search_c;
  SearchOptions search_o;
  auto* search = app.add_subcommand("search", "Multi-start search for maxima of R - n");
  search->add_option("--family", family, "Search family")->required();
  search->add_option("--starts", search_o.config.starts, "Number of random starts")->capture_default_str();
  search->add_option("--max-iters", search_o.config.max_iters, "Iteration cap per start")->capture_default_str();
  search->add_option("--set", sets, "Pin a coordinate key=value (repeatable)");
  search->add_option("--bound", bounds, "Search box key=lo:hi (repeatable)");
  add_common(search, search_c, 42);

  Common density_c;
  DensityOptions density_o;
  std::string geometry = "traveling:1:1:1";
  auto* density = app.add_subcommand("density", "Energy density on a spacetime grid");
  density->add_option("--family", family, "State family")->required();
  density->add_option("--set", sets, "Parameter key=value (repeatable)");
  density->add_option("--geometry", geometry, "kind:w1:w2[:cosangle]")->capture_default_str();
  density->add_option("--window", density_o.window, "Extent of the coordinate and time axes")->capture_default_str();
  density->add_option("--grid", density_o.grid, "Grid points per axis (>= 16)")->capture_default_str();
  add_common(density, density_c, 42);

  Common verify_c;
  VerifyOptions verify_o;
  std::string fams;
  auto* verify = app.add_subcommand("verify", "Closed forms against the Fock-space oracle");
  verify->add_option("--families", fams, "Comma-separated families (default: all)");
  verify->add_option("--draws", verify_o.config.draws, "Random draws per family")->capture_default_str();
  verify->add_option("--cutoff", verify_o.config.cutoff_one_mode, "Starting one-mode cutoff")->capture_default_str();
  verify->add_option("--cutoff-two-mode", verify_o.config.cutoff_per_mode, "Starting per-mode cutoff")
      ->capture_default_str();
  add_common(verify, verify_c, 7);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  const Common& c = sweep->parsed() ? sweep_c : search->parsed() ? search_c : density->parsed() ? density_c : verify_c;
  try {
    const Format format = parse_format(c.format);
    std::unique_ptr<std::ofstream> file;
    if (!c.out.empty()) {
      file = std::make_unique<std::ofstream>(c.out);
      if (!*file) throw UsageError("cannot open " + c.out + " for writing");
    }
    std::ostream& out = file ? *file : std::cout;
    int rc = kOk;
    if (sweep->parsed()) {
      rc = run_sweep({family, parse_sets(sets), parse_sweep(sweep_spec), format, c.seed}, out);
    } else if (search->parsed()) {
      search_o.family = family;
      search_o.sets = parse_sets(sets);
      search_o.bounds = parse_bounds(bounds);
      search_o.config.seed = c.seed;
      search_o.format = format;
      rc = run_search(search_o, out, std::cerr);
    } else if (density->parsed()) {
      density_o.family = family;
      density_o.sets = parse_sets(sets);
      density_o.geometry = parse_geometry(geometry);
      density_o.format = format;
      density_o.seed = c.seed;
      rc = run_density(density_o, out);
    } else {
      verify_o.config.families = split_commas(fams);
      verify_o.config.seed = c.seed;
      verify_o.format = format;
      rc = run_verify(verify_o, out);
    }
    out.flush();
    return rc;
  } catch (const std::invalid_argument& e) {
    std::cerr << "negen: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "negen: numeric failure: " << e.what() << '\n';
    return kNumeric;
  }
}
