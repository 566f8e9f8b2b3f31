// evasion_kit: command-line front end for the evasion-path analysis library.
//
//   evasion_kit analyze <scenario> [--mode direct|boundary|oracle]
//   evasion_kit events <scenario>
//   evasion_kit witness <scenario> --element <index>
//   evasion_kit generate <name> [--seed n]
//   evasion_kit compare <scenario>
//   evasion_kit render <scenario> [--times t ...] [--out dir]
//   evasion_kit boundary-data <scenario>
//   evasion_kit d1 <scenario>
//
// <scenario> is a JSON file or "-" for standard input. Reports go to stdout;
// errors go to stderr as {"error", "detail"}. Exit 0 on success, 1 on an
// analysis error, 2 on a usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evasion/analysis.hpp"
#include "evasion/boundary.hpp"
#include "evasion/parallel.hpp"
#include "evasion/render.hpp"
#include "evasion/scenario.hpp"

using nlohmann::json;
using namespace evasion;

namespace {

struct Options {
  double cell_size = 0.0;  // 0: derive from cells_across
  int cells_across = 128;
  int fine_samples = 256;
  double tol = kDefaultTolerance;
  std::size_t element_cap = 10000;
  std::size_t witness_cap = 64;
  int oracle_slices = kDefaultOracleSlices;
  bool skip_collar_ends = false;
  int threads = 0;
  std::uint64_t seed = 0;
  std::string out_dir = "renders";
};

std::string read_input(const std::string& source) {
  if (source == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error("unreadable input", "cannot open " + source);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

GridSpec grid_for(const Scenario& s, const Options& o) {
  return o.cell_size > 0.0 ? make_grid(s, o.cell_size, o.fine_samples)
                           : make_grid_cells(s, o.cells_across, o.fine_samples);
}

AnalysisConfig config_for(const Options& o) {
  AnalysisConfig c;
  c.tol = o.tol;
  c.element_cap = o.element_cap;
  c.witness_cap = o.witness_cap;
  c.oracle_slices = o.oracle_slices;
  c.count_collar_ends = !o.skip_collar_ends;
  return c;
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

json report_json(const AnalysisReport& r, const GridSpec& g, int dimension) { return report_to_json(r, g, dimension); }

AnalysisReport boundary_report(const Scenario& s, const GridSpec& g, const AnalysisConfig& cfg) {
  return analyze_boundary(extract_boundary_data(s, g, cfg), cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evasion paths in mobile sensor networks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Optional TOML/INI file with option defaults");
  Options o;
  app.add_option("--cell-size", o.cell_size, "Grid cell side (overrides --cells)")->check(CLI::PositiveNumber);
  app.add_option("--cells", o.cells_across, "Cells across the domain diameter")->check(CLI::PositiveNumber);
  app.add_option("--fine-samples", o.fine_samples, "Time slices per unit time for cobordism rasters")
      ->check(CLI::Range(2, 1 << 20));
  app.add_option("--tol", o.tol, "Event window width")->check(CLI::PositiveNumber);
  app.add_option("--element-cap", o.element_cap, "Maximum enumerated limit elements")->check(CLI::PositiveNumber);
  app.add_option("--witness-cap", o.witness_cap, "Maximum extracted witnesses")->check(CLI::NonNegativeNumber);
  app.add_option("--oracle-slices", o.oracle_slices, "Uniform time steps of the oracle")->check(CLI::PositiveNumber);
  app.add_flag("--skip-collar-ends", o.skip_collar_ends, "Closed-form count on a line ignores the fence ends");
  app.add_option("--threads", o.threads, "Worker threads (default: EVASION_KIT_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Seed for generated scenarios");

  std::string source;
  std::string mode = "direct";
  auto* analyze = app.add_subcommand("analyze", "Decide existence and count limit elements");
  analyze->add_option("scenario", source, "Scenario JSON file, boundary data for --mode boundary, or -")->required();
  analyze->add_option("--mode", mode, "direct, boundary or oracle")
      ->check(CLI::IsMember({"direct", "boundary", "oracle"}));

  auto* events = app.add_subcommand("events", "List critical events");
  events->add_option("scenario", source)->required();

  std::size_t element = 0;
  auto* witness = app.add_subcommand("witness", "Witness path for one enumerated limit element");
  witness->add_option("scenario", source)->required();
  witness->add_option("--element", element, "Index into the enumerated elements")->required();

  std::string name;
  int dimension = 2;
  std::string time_base = "interval";
  auto* generate = app.add_subcommand("generate", "Print a built-in scenario");
  generate->add_option("name", name)->required()->check(CLI::IsMember(builtin_names()));
  generate->add_option("--dimension", dimension, "Dimension of random scenarios")->check(CLI::IsMember({1, 2}));
  generate->add_option("--time-base", time_base, "Time base of random scenarios")
      ->check(CLI::IsMember({"interval", "circle"}));

  auto* compare = app.add_subcommand("compare", "Run direct, boundary and oracle analyses and compare");
  compare->add_option("scenario", source)->required();

  std::vector<double> times;
  bool overlay = false;
  auto* render_cmd = app.add_subcommand("render", "Write SVG frames");
  render_cmd->add_option("scenario", source)->required();
  render_cmd->add_option("--times", times, "Times to render")->check(CLI::Range(0.0, 1.0));
  render_cmd->add_option("--out", o.out_dir, "Output directory");
  render_cmd->add_flag("--witnesses", overlay, "Overlay witness positions");

  auto* bdata = app.add_subcommand("boundary-data", "Print the boundary-only input of a scenario");
  bdata->add_option("scenario", source)->required();

  auto* d1 = app.add_subcommand("d1", "Closed-form count for a scenario on a line");
  d1->add_option("scenario", source)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"detail", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    if (o.threads > 0) set_worker_threads(o.threads);
    const AnalysisConfig cfg = config_for(o);

    if (generate->parsed()) {
      Scenario s;
      if (name == "random") {
        RandomOptions ro;
        ro.dimension = dimension;
        ro.time_base = time_base == "circle" ? TimeBase::Circle : TimeBase::Interval;
        s = random_scenario(o.seed, ro);
      } else {
        s = builtin_scenario(name, o.seed);
      }
      emit(scenario_to_json(s));
      return 0;
    }

    const std::string text = read_input(source);
    if (analyze->parsed() && mode == "boundary") {
      json doc;
      try {
        doc = json::parse(text);
      } catch (const json::exception& e) {
        throw ScenarioError("invalid scenario", e.what());
      }
      if (doc.contains("cobordisms")) {
        const AnalysisReport r = analyze_boundary(boundary_from_json(doc), cfg);
        emit(report_json(r, GridSpec{}, 2));
        return 0;
      }
    }
    const Scenario s = load_scenario(text);
    const GridSpec g = grid_for(s, o);

    if (analyze->parsed()) {
      AnalysisReport r;
      if (mode == "direct") r = analyze_direct(s, g, cfg);
      if (mode == "oracle") r = oracle_reachability(s, g, cfg);
      if (mode == "boundary") r = boundary_report(s, g, cfg);
      emit(report_json(r, g, s.dimension));
    } else if (events->parsed()) {
      emit(events_to_json(detect_events(s, g, cfg.tol), g));
    } else if (witness->parsed()) {
      AnalysisConfig c = cfg;
      c.element_cap = std::max(c.element_cap, element + 1);
      c.witness_cap = 0;
      const AnalysisReport r = analyze_direct(s, g, c);
      if (element >= r.limit_elements.size())
        throw AnalysisError("no such element", "the limit has " + std::to_string(r.limit_elements.size()) + " elements");
      const WitnessPath w = extract_witness(s, g, r.limit_elements[element], cfg);
      json doc = witness_to_json(w, g, s.dimension);
      doc["element"] = r.limit_elements[element];
      emit(doc);
    } else if (compare->parsed()) {
      AnalysisConfig quiet = cfg;
      quiet.witness_cap = 0;
      json doc;
      const AnalysisReport direct = analyze_direct(s, g, quiet);
      const AnalysisReport oracle = oracle_reachability(s, g, quiet);
      doc["direct"] = report_json(direct, g, s.dimension);
      doc["oracle"] = report_json(oracle, g, s.dimension);
      bool agree = direct.exists == oracle.exists;
      if (s.dimension == 2) {
        const AnalysisReport boundary = boundary_report(s, g, quiet);
        doc["boundary"] = report_json(boundary, g, s.dimension);
        agree = agree && boundary.exists == direct.exists;
      } else {
        doc["boundary"] = nullptr;
      }
      doc["agree"] = agree;
      emit(doc);
      return agree ? 0 : 1;
    } else if (render_cmd->parsed()) {
      std::vector<WitnessPath> ws;
      if (overlay && !times.empty()) ws = analyze_direct(s, g, cfg).witnesses;
      emit(render(s, g, times, ws, o.out_dir));
    } else if (bdata->parsed()) {
      emit(boundary_to_json(extract_boundary_data(s, g, cfg)));
    } else if (d1->parsed()) {
      const LineCount lc = d1_count(s, g, cfg);
      emit({{"value", lc.value},
            {"covered_components", lc.covered_components},
            {"type_N_C", lc.type_n_c},
            {"collar_ends_counted", cfg.count_collar_ends}});
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << json{{"error", e.kind()}, {"detail", e.detail()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"detail", e.what()}}.dump() << "\n";
    return 1;
  }
}
