// rearr: build, rearrange, and analyze conditionally divergent series
// under greedy type-R permutations.
//
// Subcommands:
//   generate   emit a term prefix and its block decomposition (CSV)
//   rearrange  run the greedy rearrangement toward a target (CSV + JSON)
//   scan       scan block windows for substantial-property evidence (CSV + JSON)
//   verify     check type-R and the sandwich inequality on a saved run
//
// Exit codes: 0 success, 2 usage or schema error, 3 truncation/horizon cap,
// 4 verification failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rearr/blocks.hpp"
#include "rearr/escalating.hpp"
#include "rearr/io.hpp"
#include "rearr/permutation.hpp"
#include "rearr/rearranger.hpp"
#include "rearr/scanner.hpp"
#include "rearr/series.hpp"

namespace fs = std::filesystem;
using namespace rearr;

namespace {

struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct CommonOpts {
  std::string series;
  std::string spec_path;
  std::string arithmetic = "exact";
  bool lz_on = false;
  bool lz_off = false;
  std::string out_dir = ".";
};

void add_common(CLI::App* sub, CommonOpts& c) {
  auto* series = sub->add_option("--series", c.series,
                                 "built-in series: square-blocks | escalating");
  auto* spec = sub->add_option("--spec", c.spec_path, "series-spec JSON file")
                   ->check(CLI::ExistingFile);
  series->excludes(spec);
  spec->excludes(series);
  sub->add_option("--arithmetic", c.arithmetic,
                  "exact | float (default: exact, or the spec file's setting)")
      ->check(CLI::IsMember({"exact", "float"}));
  auto* on = sub->add_flag("--leading-zero", c.lz_on, "prepend a zero term to the series");
  auto* off = sub->add_flag("--no-leading-zero", c.lz_off, "suppress any leading zero");
  on->excludes(off);
  off->excludes(on);
  sub->add_option("--out-dir", c.out_dir, "directory for output files (default: .)");
}

struct Resolved {
  SeriesSpec spec;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::string series_arg;  // canonical echo of --series/--spec
  std::string lz_arg;      // echo of an explicit leading-zero flag
};

Resolved resolve_common(CLI::App* sub, const CommonOpts& c) {
  Resolved r;
  ArithmeticMode file_mode = ArithmeticMode::exact;
  if (!c.spec_path.empty()) {
    r.spec = io::load_spec_file(c.spec_path, &file_mode);
    r.series_arg = "--spec " + c.spec_path;
  } else if (!c.series.empty()) {
    if (c.series == "square-blocks" || c.series == "square_blocks") {
      r.spec = make_square_blocks();
      r.series_arg = "--series square-blocks";
    } else if (c.series == "escalating" || c.series == "escalating-blocks" ||
               c.series == "escalating_blocks") {
      r.spec = make_escalating_blocks();
      r.series_arg = "--series escalating";
    } else {
      throw UsageError("unknown built-in series '" + c.series +
                       "' (want square-blocks|escalating)");
    }
  } else {
    throw UsageError("one of --series or --spec is required");
  }

  if (c.lz_on) {
    r.spec.leading_zero = true;
    r.lz_arg = " --leading-zero";
  } else if (c.lz_off) {
    r.spec.leading_zero = false;
    r.lz_arg = " --no-leading-zero";
  }

  r.mode = sub->count("--arithmetic") ? parse_arithmetic_mode(c.arithmetic) : file_mode;
  return r;
}

std::vector<std::string> config_lines(const Resolved& r, const std::string& echo) {
  return {echo, "series: " + io::spec_to_json(r.spec).dump()};
}

std::ofstream open_out(const fs::path& dir, const char* name) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path p = dir / name;
  std::ofstream f(p, std::ios::binary);
  if (!f) throw UsageError("cannot write " + p.string());
  return f;
}

std::vector<std::uint64_t> quarter_checkpoints(std::uint64_t n) {
  std::vector<std::uint64_t> cps;
  for (int q = 1; q <= 4; ++q) {
    const std::uint64_t c = n / 4 * q + (q == 4 ? n % 4 : 0);
    if (c >= 1 && (cps.empty() || c > cps.back())) cps.push_back(c);
  }
  return cps;
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

// --- generate ---------------------------------------------------------------

template <ScalarLike S>
int run_generate(const Resolved& r, std::uint64_t horizon, const fs::path& dir) {
  const std::string echo = "rearr generate " + r.series_arg + r.lz_arg + " --arithmetic " +
                           to_string(r.mode) + " --horizon " + std::to_string(horizon);
  const auto config = config_lines(r, echo);

  auto terms = open_out(dir, "terms.csv");
  io::write_terms_csv<S>(terms, r.spec, horizon, config);

  const auto d = decompose_blocks<S>(r.spec, horizon);
  auto blocks = open_out(dir, "blocks.csv");
  io::write_blocks_csv(blocks, d, config);

  std::cout << "wrote " << (dir / "terms.csv").string() << " (" << horizon << " terms) and "
            << (dir / "blocks.csv").string() << " ("
            << d.complete_count(BlockKind::positive) + d.complete_count(BlockKind::negative)
            << " complete blocks" << (d.tail() ? " + truncated tail" : "") << ")\n";
  return 0;
}

// --- rearrange ----------------------------------------------------------------

template <ScalarLike S>
int run_rearrange(const Resolved& r, const std::string& target_text, std::uint64_t steps,
                  std::vector<std::uint64_t> checkpoints, std::uint64_t max_horizon,
                  const fs::path& dir) {
  S target;
  try {
    target = scalar_parse<S>(target_text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("bad --target: ") + e.what());
  }

  GreedyOptions opts;
  opts.max_horizon = max_horizon;
  const auto tr = greedy_rearrange<S>(r.spec, target, steps, opts);

  std::string echo = "rearr rearrange " + r.series_arg + r.lz_arg + " --arithmetic " +
                     to_string(r.mode) + " --target " + scalar_str(target) + " --steps " +
                     std::to_string(steps);
  if (!checkpoints.empty()) echo += " --checkpoints " + join_u64(checkpoints);
  if (max_horizon != GreedyOptions{}.max_horizon)
    echo += " --max-horizon " + std::to_string(max_horizon);
  const auto config = config_lines(r, echo);

  if (checkpoints.empty()) checkpoints = quarter_checkpoints(tr.size());
  const auto profile = block_growth_profile(tr, checkpoints);

  auto trace = open_out(dir, "trace.csv");
  io::write_trace_csv(trace, tr, config);

  ConvergenceReport<S> conv;
  if (!tr.empty()) conv = convergence_report(tr);
  auto summary = open_out(dir, "summary.json");
  summary << io::trace_summary_json(tr, conv, profile, echo).dump(2) << '\n';

  std::cout << "steps=" << tr.size() << " max_block_number=" << tr.max_block_number
            << " sign_switches=" << tr.sign_switches.size() << " truncated="
            << (tr.truncated ? "true" : "false") << "; wrote " << (dir / "trace.csv").string()
            << " and " << (dir / "summary.json").string() << "\n";
  if (tr.truncated) {
    std::cerr << "rearr: a sign pool ran dry within the horizon cap (" << max_horizon
              << " terms); trace truncated at " << tr.size() << " of " << steps << " steps\n";
    return 3;
  }
  return 0;
}

// --- scan --------------------------------------------------------------------

template <ScalarLike S>
int run_scan(const Resolved& r, std::uint32_t k_max, std::size_t blocks,
             std::vector<std::size_t> i0_grid, bool probe, std::uint64_t probe_steps,
             const fs::path& dir) {
  std::string echo = "rearr scan " + r.series_arg + r.lz_arg + " --arithmetic " +
                     to_string(r.mode) + " --kmax " + std::to_string(k_max) + " --blocks " +
                     std::to_string(blocks);
  if (!i0_grid.empty()) {
    echo += " --i0-grid";
    for (std::size_t i = 0; i < i0_grid.size(); ++i)
      echo += (i ? "," : " ") + std::to_string(i0_grid[i]);
  }
  if (!probe) echo += " --no-fixing-probe";
  if (probe && probe_steps != 4096) echo += " --probe-steps " + std::to_string(probe_steps);
  const auto config = config_lines(r, echo);

  // Fixing evidence: a greedy run at r = 0 whose block number stops growing
  // after its first quarter.
  bool evidence = false;
  if (probe) {
    const auto tr = greedy_rearrange<S>(r.spec, S(0), probe_steps);
    if (!tr.truncated && tr.size() == probe_steps) {
      const auto prof = block_growth_profile(tr, quarter_checkpoints(tr.size()));
      evidence = prof.front().second == prof.back().second;
    }
  }

  SubstantialReport rep_p, rep_n;
  if (r.spec.kind == SeriesKind::escalating_blocks) {
    // Deep escalating blocks are astronomically long; use the analytic table.
    const auto table = EscalatingBlockTable::build(r.spec, blocks);
    rep_p = scan_substantial(table, BlockKind::positive, k_max, i0_grid, blocks);
    rep_n = scan_substantial(table, BlockKind::negative, k_max, i0_grid, blocks);
  } else {
    constexpr std::uint64_t kHorizonCap = std::uint64_t(1) << 26;
    std::uint64_t horizon = std::max<std::uint64_t>(64, 8 * blocks);
    BlockDecomposition<S> d;
    for (;;) {
      d = decompose_blocks<S>(r.spec, horizon);
      if (d.complete_count(BlockKind::positive) >= blocks &&
          d.complete_count(BlockKind::negative) >= blocks)
        break;
      if (horizon >= kHorizonCap) {
        std::cerr << "rearr: need at least " << blocks
                  << " complete blocks of each kind, but within " << kHorizonCap
                  << " terms the series produced only "
                  << d.complete_count(BlockKind::positive) << " positive and "
                  << d.complete_count(BlockKind::negative) << " negative\n";
        return 3;
      }
      horizon = std::min(kHorizonCap, horizon * 2);
    }
    rep_p = scan_substantial(d, BlockKind::positive, k_max, i0_grid, blocks);
    rep_n = scan_substantial(d, BlockKind::negative, k_max, i0_grid, blocks);
  }

  const auto hint = classify_zr_hint(rep_p, rep_n, evidence);

  auto csv_p = open_out(dir, "scan_P.csv");
  io::write_scan_csv(csv_p, rep_p, config);
  auto csv_n = open_out(dir, "scan_N.csv");
  io::write_scan_csv(csv_n, rep_n, config);
  auto report = open_out(dir, "scan_report.json");
  report << io::scan_report_json(rep_p, rep_n, hint, evidence, r.mode,
                                 io::spec_to_json(r.spec), echo)
                .dump(2)
         << '\n';

  auto describe = [](const SubstantialReport& rep) {
    std::string s = to_string(rep.verdict);
    if (rep.witness) {
      s += "(k=" + std::to_string(rep.witness->k) +
           ", eps=" + io::approx_str(rep.witness->epsilon) +
           ", i0=" + std::to_string(rep.witness->i0) + ")";
    }
    return s;
  };
  std::cout << "P: " << describe(rep_p) << "\nN: " << describe(rep_n) << "\n"
            << hint.text << " [" << hint.annotation << "]\n";
  return 0;
}

// --- verify ------------------------------------------------------------------

template <ScalarLike S>
int run_verify(const Resolved& r, const std::string& trace_path, const std::string& perm_path,
               bool one_based, std::int64_t c_opt, const fs::path& dir) {
  Trace<S> tr;
  if (!trace_path.empty()) {
    std::ifstream f(trace_path);
    if (!f) throw UsageError("cannot open trace file: " + trace_path);
    tr = io::read_trace_csv<S>(f, r.spec);
  } else {
    std::ifstream f(perm_path);
    if (!f) throw UsageError("cannot open permutation file: " + perm_path);
    tr = io::trace_from_indices<S>(r.spec, io::read_permutation(f, one_based));
  }

  std::string echo = "rearr verify " + r.series_arg + r.lz_arg + " --arithmetic " +
                     to_string(r.mode) +
                     (trace_path.empty() ? " --perm " + perm_path : " --trace " + trace_path);
  if (one_based) echo += " --one-based";
  if (c_opt >= 0) echo += " --C " + std::to_string(c_opt);
  const auto config = config_lines(r, echo);

  const auto type_r = is_type_r(tr);
  const std::uint32_t C =
      c_opt >= 0 ? static_cast<std::uint32_t>(c_opt) : tr.max_block_number;

  SandwichReport<S> rep;
  rep.C = C;
  if (type_r.ok) {
    std::uint64_t max_idx = 0;
    for (auto idx : tr.indices) max_idx = std::max(max_idx, idx);
    const auto d = decompose_blocks<S>(r.spec, max_idx + 1);
    rep = verify_sandwich(tr, d, C);
  }

  auto csv = open_out(dir, "verify.csv");
  if (type_r.ok) {
    io::write_sandwich_csv(csv, rep, config);
  } else {
    io::write_header(csv, config);
    csv << "# type-R violation: position " << type_r.violation->position_later
        << " reorders same-sign terms against position " << type_r.violation->position_earlier
        << "\n";
    csv << "block,step,lower,partial_sum,upper,status\n";
  }
  auto json = open_out(dir, "verify.json");
  json << io::sandwich_summary_json(rep, type_r, echo).dump(2) << '\n';

  if (!type_r.ok) {
    std::cout << "type R: VIOLATED (steps " << type_r.violation->position_earlier << " vs "
              << type_r.violation->position_later << " reorder same-sign terms)\n";
    return 4;
  }
  std::cout << "type R: ok; C=" << C << "; negative blocks checked=" << rep.rows.size()
            << ": passed=" << rep.passed << " failed=" << rep.failed
            << " unverifiable=" << rep.unverifiable << "\n";
  return rep.failed == 0 ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rearr: conditionally divergent series, greedy type-R rearrangements, block analysis"};
  app.require_subcommand(1);

  CommonOpts gen_c, rea_c, scan_c, ver_c;

  auto* gen = app.add_subcommand("generate", "emit a term prefix and its block decomposition");
  add_common(gen, gen_c);
  std::uint64_t gen_horizon = 0;
  gen->add_option("--horizon", gen_horizon, "number of terms to emit")
      ->required()
      ->check(CLI::PositiveNumber);

  auto* rea = app.add_subcommand("rearrange", "run the greedy rearrangement toward a target");
  add_common(rea, rea_c);
  std::string rea_target;
  std::uint64_t rea_steps = 0;
  std::vector<std::uint64_t> rea_checkpoints;
  std::uint64_t rea_max_horizon = GreedyOptions{}.max_horizon;
  rea->add_option("--target", rea_target, "target value r (\"p/q\" or decimal)")->required();
  rea->add_option("--steps", rea_steps, "number of greedy selections")
      ->required()
      ->check(CLI::PositiveNumber);
  rea->add_option("--checkpoints", rea_checkpoints,
                  "growth-profile step counts (default: quarters of --steps)")
      ->delimiter(',');
  rea->add_option("--max-horizon", rea_max_horizon,
                  "cap on lazily generated series terms before truncating")
      ->check(CLI::PositiveNumber);

  auto* scan = app.add_subcommand("scan", "scan block windows for substantial-property evidence");
  add_common(scan, scan_c);
  std::uint32_t scan_kmax = 0;
  std::size_t scan_blocks = 50;
  std::vector<std::size_t> scan_i0;
  bool scan_no_probe = false;
  std::uint64_t scan_probe_steps = 4096;
  scan->add_option("--kmax", scan_kmax, "largest window width k to scan (default 0)");
  scan->add_option("--blocks", scan_blocks, "complete blocks of each kind to scan (default 50)")
      ->check(CLI::PositiveNumber);
  scan->add_option("--i0-grid", scan_i0,
                   "start indices i0 to scan from (default: 1,B/10,B/4)")
      ->delimiter(',');
  scan->add_flag("--no-fixing-probe", scan_no_probe,
                 "skip the greedy r=0 probe; the hint then reports no fixing evidence");
  scan->add_option("--probe-steps", scan_probe_steps,
                   "steps for the fixing probe (default 4096)")
      ->check(CLI::PositiveNumber);

  auto* ver = app.add_subcommand("verify", "check type-R and the sandwich inequality");
  add_common(ver, ver_c);
  std::string ver_trace, ver_perm;
  bool ver_one_based = false;
  std::int64_t ver_cbound = -1;
  auto* topt = ver->add_option("--trace", ver_trace, "trace CSV written by `rearr rearrange`")
                   ->check(CLI::ExistingFile);
  auto* popt = ver->add_option("--perm", ver_perm, "newline-delimited permutation images")
                   ->check(CLI::ExistingFile);
  topt->excludes(popt);
  popt->excludes(topt);
  ver->add_flag("--one-based", ver_one_based, "treat --perm entries as 1-based");
  ver->add_option("--C", ver_cbound,
                  "block-number bound for the sandwich check (default: observed maximum)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(gen)) {
      const Resolved r = resolve_common(gen, gen_c);
      return r.mode == ArithmeticMode::exact
                 ? run_generate<Rational>(r, gen_horizon, gen_c.out_dir)
                 : run_generate<double>(r, gen_horizon, gen_c.out_dir);
    }
    if (app.got_subcommand(rea)) {
      const Resolved r = resolve_common(rea, rea_c);
      return r.mode == ArithmeticMode::exact
                 ? run_rearrange<Rational>(r, rea_target, rea_steps, rea_checkpoints,
                                           rea_max_horizon, rea_c.out_dir)
                 : run_rearrange<double>(r, rea_target, rea_steps, rea_checkpoints,
                                         rea_max_horizon, rea_c.out_dir);
    }
    if (app.got_subcommand(scan)) {
      const Resolved r = resolve_common(scan, scan_c);
      return r.mode == ArithmeticMode::exact
                 ? run_scan<Rational>(r, scan_kmax, scan_blocks, scan_i0, !scan_no_probe,
                                      scan_probe_steps, scan_c.out_dir)
                 : run_scan<double>(r, scan_kmax, scan_blocks, scan_i0, !scan_no_probe,
                                    scan_probe_steps, scan_c.out_dir);
    }
    if (app.got_subcommand(ver)) {
      if (ver_trace.empty() && ver_perm.empty())
        throw UsageError("verify needs --trace or --perm");
      const Resolved r = resolve_common(ver, ver_c);
      return r.mode == ArithmeticMode::exact
                 ? run_verify<Rational>(r, ver_trace, ver_perm, ver_one_based, ver_cbound,
                                        ver_c.out_dir)
                 : run_verify<double>(r, ver_trace, ver_perm, ver_one_based, ver_cbound,
                                      ver_c.out_dir);
    }
  } catch (const UsageError& e) {
    std::cerr << "rearr: " << e.what() << "\n";
    return 2;
  } catch (const io::SpecParseError& e) {
    std::cerr << "rearr: " << e.what() << "\n";
    return 2;
  } catch (const io::TraceParseError& e) {
    std::cerr << "rearr: " << e.what() << "\n";
    return 2;
  } catch (const DuplicateIndexError& e) {
    std::cerr << "rearr: permutation repeats index " << e.index() << "\n";
    return 2;
  } catch (const OverflowError& e) {
    std::cerr << "rearr: horizon cap: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rearr: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "rearr: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rearr: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
