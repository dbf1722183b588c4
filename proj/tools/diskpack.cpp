// Command-line front end.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "diskpack/analysis.hpp"
#include "diskpack/billiards.hpp"
#include "diskpack/io.hpp"
#include "diskpack/patterns.hpp"
#include "diskpack/polish.hpp"
#include "diskpack/series.hpp"

using namespace diskpack;

namespace {

constexpr int kExitError = 1;
constexpr int kExitNotRepresentable = 2;
constexpr int kExitNoConvergence = 3;

struct Outputs {
  std::string out;
  std::string svg;
  bool contacts = false;
  bool labels = false;
};

struct SimFlags {
  double growth_rate = SimParams{}.growth_rate;
  std::int64_t max_events = SimParams{}.max_events;
  std::uint64_t seed = 1;
  int seeds = 1;

  SimParams params() const {
    SimParams p;
    p.growth_rate = growth_rate;
    p.max_events = max_events;
    return p;
  }
};

void add_outputs(CLI::App* cmd, Outputs& o) {
  cmd->add_option("--out", o.out, "Packing file to write (default: standard output)");
  cmd->add_option("--svg", o.svg, "SVG diagram to write");
  cmd->add_flag("--contacts", o.contacts, "Include the contact section in the packing file");
  cmd->add_flag("--labels", o.labels, "Number the disks in the SVG diagram");
}

void add_sim(CLI::App* cmd, SimFlags& s, bool seed_count) {
  cmd->add_option("--seed", s.seed, "First seed (seeds run seed, seed+1, ...)");
  if (seed_count) cmd->add_option("--seeds", s.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  cmd->add_option("--growth-rate", s.growth_rate, "Diameter growth per unit time")->check(CLI::PositiveNumber);
  cmd->add_option("--max-events", s.max_events, "Collision budget per run")->check(CLI::PositiveNumber);
}

std::string seed_header(const SimFlags& s, const SimParams& p) {
  std::string h = "# seeds " + std::to_string(s.seed) + ".." + std::to_string(s.seed + s.seeds - 1) + "\n";
  return h + "# params " + p.digest() + " growth_rate " + format_sig14(p.growth_rate) + "\n";
}

void emit(const Packing& p, const Outputs& o, const std::string& header) {
  const std::string text = header + save_packing(p, o.contacts);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(o.out, text);
  }
  if (!o.svg.empty()) write_file_atomic(o.svg, render_svg(p, contact_graph(p), {o.labels}));
}

void summarize(const Packing& p) {
  const ContactGraph g = contact_graph(p);
  std::cerr << "n " << p.n() << "  m " << format_sig14(p.m) << "  bonds " << g.bond_count() << "  rattlers "
            << g.rattler_count() << "\n";
}

std::pair<int, int> parse_k_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int k = std::stoi(text);
      return {k, k};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::ParseError, "bad k range '" + text + "' (use K or A..B)");
  }
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto [lo, hi] = parse_k_range(item);
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

// Best of the seeds, polished when the contacts allow it.
Packing run_best_of(int n, const SimFlags& s, std::uint64_t* best_seed) {
  const SimParams p = s.params();
  const auto seeds = seed_range(s.seed, s.seeds);
  const BestOfResult r = best_of(n, p, seeds, [n](const PackResult& run) {
    std::fprintf(stderr, "n %d seed %llu m %s events %lld%s\n", n, static_cast<unsigned long long>(run.seed),
                 format_sig14(run.packing.m).c_str(), static_cast<long long>(run.events_processed),
                 run.jammed ? "" : " (not jammed)");
  });
  if (best_seed) *best_seed = r.best.seed;
  try {
    Packing polished = refine_jammed(r.best.packing).packing;
    polished.provenance = r.best.packing.provenance;
    return polished;
  } catch (const Error& e) {
    std::cerr << "warning: polish skipped: " << e.what() << "\n";
    return r.best.packing;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packings of equal disks in a square: patterns, billiards compaction and analysis"};
  app.require_subcommand(1);

  std::string series_name;
  std::string k_text;
  std::string variant_text;
  int n = 0;
  Outputs outputs;
  SimFlags sim;

  auto* build = app.add_subcommand("build", "Build a pattern packing");
  build->add_option("--series", series_name, "square, square-1, square-2, oblong, oblong-alt, halfk")->required();
  build->add_option("--k", k_text, "Series index")->required();
  build->add_option("--variant", variant_text, "Shifted rows and columns: i,j or i1,i2;j1,j2");
  add_outputs(build, outputs);

  auto* pack = app.add_subcommand("pack", "Compact random starts and keep the densest");
  pack->add_option("--n", n, "Number of disks")->required()->check(CLI::Range(2, 100000));
  add_sim(pack, sim, true);
  add_outputs(pack, outputs);

  auto* tight = app.add_subcommand("tighten", "Compact a prescribed start (configuration C or a loosened pattern)");
  std::string start_file;
  tight->add_option("--series", series_name, "Series of the start; square-3 uses configuration C");
  tight->add_option("--k", k_text, "Series index");
  tight->add_option("--variant", variant_text, "Shifted rows and columns");
  tight->add_option("--in", start_file, "Start from a packing file instead");
  add_sim(tight, sim, false);
  add_outputs(tight, outputs);

  auto* series = app.add_subcommand("series", "Compare a series against challengers");
  std::string table_path;
  std::string csv_path;
  bool crossover = false;
  bool simulate = false;
  series->add_option("--series,--id", series_name, "Series name")->required();
  series->add_option("--k", k_text, "Range A..B")->default_val("2..8");
  series->add_option("--challenger-table", table_path, "Best-known table file");
  series->add_flag("--simulate", simulate, "Simulate challengers missing from the table");
  series->add_flag("--crossover", crossover, "Compare the two oblong patterns instead");
  series->add_option("--csv", csv_path, "CSV file to write (default: standard output)");
  add_sim(series, sim, true);

  auto* analyze = app.add_subcommand("analyze", "Report on a packing file");
  std::string in_file;
  analyze->add_option("file", in_file, "Packing file")->required();
  analyze->add_option("--svg", outputs.svg, "SVG diagram to write");
  analyze->add_flag("--labels", outputs.labels, "Number the disks in the SVG diagram");

  auto* table = app.add_subcommand("table", "Regenerate best-known entries by simulation");
  std::string n_list;
  table->add_option("--n", n_list, "Disk counts, e.g. 47,48,49 or 20..30")->required();
  table->add_option("--challenger-table", table_path, "Table file to update")->required();
  add_sim(table, sim, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*build) {
      const auto [k, k_hi] = parse_k_range(k_text);
      (void)k_hi;
      const PatternVariant v = variant_text.empty() ? PatternVariant{} : parse_variant(variant_text);
      const Packing p = build_pattern(parse_series(series_name), k, v);
      summarize(p);
      emit(p, outputs, "");
    } else if (*pack) {
      std::uint64_t best = 0;
      const Packing p = run_best_of(n, sim, &best);
      summarize(p);
      emit(p, outputs, seed_header(sim, sim.params()) + "# best seed " + std::to_string(best) + "\n");
    } else if (*tight) {
      Configuration start;
      if (!start_file.empty()) {
        start = to_configuration(load_packing(read_file(start_file), start_file));
      } else {
        if (series_name.empty() || k_text.empty()) throw Error(ErrorCode::ParseError, "tighten needs --in or --series and --k");
        const SeriesId id = parse_series(series_name);
        const int k = parse_k_range(k_text).first;
        const PatternVariant v = variant_text.empty() ? PatternVariant{} : parse_variant(variant_text);
        start = id == SeriesId::SquareMinus3 ? build_config_C(k) : schematic_configuration(id, k, v);
      }
      const SimParams p = sim.params();
      const PackResult r = tighten(start, p, sim.seed);
      if (!r.jammed) throw Error(ErrorCode::NoConvergence, "did not jam within max_events");
      std::fprintf(stderr, "seed %llu m %s events %lld\n", static_cast<unsigned long long>(sim.seed),
                   format_sig14(r.packing.m).c_str(), static_cast<long long>(r.events_processed));
      Packing out = refine_jammed(r.packing).packing;
      out.provenance = r.packing.provenance;
      summarize(out);
      emit(out, outputs, seed_header(sim, p));
    } else if (*series) {
      const SeriesId id = parse_series(series_name);
      const auto [lo, hi] = parse_k_range(k_text);
      std::string text;
      if (crossover) {
        text = "k,n,m,m_alt,winner\n";
        for (const auto& row : oblong_crossover(std::max(lo, 4), hi)) {
          text += std::to_string(row.k) + "," + std::to_string(series_count(SeriesId::Oblong, row.k)) + "," +
                  format_sig14(row.m) + "," + format_sig14(row.m_alt) + "," + to_string(row.winner) + "\n";
        }
      } else {
        ChallengerSource source;
        if (!table_path.empty()) source.table = load_table(read_file(table_path)).challengers();
        if (simulate) source.simulation = SimulationBudget{sim.params(), seed_range(sim.seed, sim.seeds)};
        const SeriesReport report = series_threshold(id, lo, hi, source);
        text = export_series_csv(report);
        std::string verdict = std::string("# ") + to_string(id) + " n0 " +
                              (report.n0 ? std::to_string(*report.n0) : "-") + " n1 " +
                              (report.n1 ? std::to_string(*report.n1) : "-") + "\n";
        if (simulate) verdict += seed_header(sim, sim.params());
        text = verdict + text;
      }
      if (csv_path.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(csv_path, text);
      }
    } else if (*analyze) {
      const Packing p = load_packing(read_file(in_file), in_file);
      const ContactGraph g = contact_graph(p);
      const ValidityReport v = validate(p);
      const GapReport gaps = well_formed_gap_check(g);
      std::cout << "n " << p.n() << "\nm " << format_sig14(p.m) << "\n";
      std::cout << "valid " << (v.valid ? "yes" : "no") << "  max_overlap " << format_sig14(v.max_overlap) << "\n";
      std::cout << "disk_bonds " << g.disk_bonds.size() << "\nwall_bonds " << g.wall_bonds.size() << "\n";
      std::cout << "rattlers " << g.rattler_count();
      for (int i = 0; i < p.n(); ++i) {
        if (g.roles[i] == DiskRole::Rattler) std::cout << " " << i;
      }
      std::cout << "\ngap_floor_1e-7 " << (gaps.pass ? "pass" : "fail") << "\ngap_floor_1e-5 "
                << (gaps.pass_strict ? "pass" : "fail") << "\n";
      for (const auto& miss : g.near_misses) {
        std::cout << "warning near miss " << miss.i << " "
                  << (miss.j >= 0 ? std::to_string(miss.j) : std::string(to_string(miss.wall))) << " gap "
                  << format_sig14(miss.gap / p.m) << " m\n";
      }
      const auto match = match_series(p);
      if (match) {
        std::cout << "series " << to_string(match->series) << " k " << match->k << " variant "
                  << to_string(match->variant) << "\n";
      } else {
        std::cout << "series none\n";
      }
      if (!outputs.svg.empty()) write_file_atomic(outputs.svg, render_svg(p, g, {outputs.labels}));
    } else if (*table) {
      BestKnownTable t;
      try {
        t = load_table(read_file(table_path));
      } catch (const Error&) {
        std::cerr << "starting a new table at " << table_path << "\n";
      }
      for (int count : parse_n_list(n_list)) {
        std::uint64_t best = 0;
        const Packing p = run_best_of(count, sim, &best);
        BestKnownEntry e;
        e.n = count;
        e.m = p.m;
        e.seed_base = sim.seed;
        e.seed_count = sim.seeds;
        e.best_seed = best;
        e.growth_rate = sim.growth_rate;
        e.params_digest = sim.params().digest();
        const bool changed = t.merge(e);
        std::fprintf(stderr, "n %d best seed %llu m %s%s\n", count, static_cast<unsigned long long>(best),
                     format_sig14(p.m).c_str(), changed ? " (stored)" : " (kept previous)");
        write_file_atomic(table_path, save_table(t));
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::PatternNotRepresentable) return kExitNotRepresentable;
    if (e.code() == ErrorCode::NoConvergence) return kExitNoConvergence;
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}
