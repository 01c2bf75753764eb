#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rearr/blocks.hpp"
#include "rearr/permutation.hpp"
#include "rearr/rearranger.hpp"
#include "rearr/scanner.hpp"
#include "rearr/trace.hpp"

namespace rearr::io {

// Insertion-ordered so documents serialize byte-identically across runs.
using Json = nlohmann::ordered_json;

class SpecParseError : public std::runtime_error {
 public:
  explicit SpecParseError(const std::string& what) : std::runtime_error(what) {}
};

class TraceParseError : public std::runtime_error {
 public:
  explicit TraceParseError(const std::string& what) : std::runtime_error(what) {}
};

// --- series-spec documents ---------------------------------------------
//
// Schema: {"kind": string, "params": object, "leading_zero": bool,
// "arithmetic": "exact"|"float"}. Rationals are "p/q" strings. Per-kind
// params:
//   square_blocks      {}
//   escalating_blocks  {"seed_targets": ["1/2", ...]}        (optional)
//   explicit_prefix    {"terms": ["0", "2", "-1", ...]}
//   custom_blocks      {"pattern": [{"sign": "P"|"N", "count": n,
//                       "scale": "p/q"}, ...], "decay": "harmonic"|"none"}
// "leading_zero" may be omitted to take each kind's default; "arithmetic"
// defaults to "exact".

SeriesSpec spec_from_json(const Json& doc);
Json spec_to_json(const SeriesSpec& spec);
ArithmeticMode arithmetic_from_json(const Json& doc);
SeriesSpec load_spec_file(const std::string& path, ArithmeticMode* mode_out = nullptr);

// --- scalar/value formatting --------------------------------------------

// Exact values print as canonical rationals; everything else as the
// shortest round-trip decimal of the enclosure midpoint.
std::string approx_str(const ApproxValue& v);

// --- CSV ------------------------------------------------------------------

// Each config line becomes a leading "# ..." comment row.
void write_header(std::ostream& os, const std::vector<std::string>& config);

template <ScalarLike S>
void write_terms_csv(std::ostream& os, const SeriesSpec& spec, std::uint64_t horizon,
                     const std::vector<std::string>& config) {
  write_header(os, config);
  os << "n,term\n";
  TermCursor<S> cur(spec);
  for (std::uint64_t n = 0; n < horizon; ++n) {
    os << n << ',' << scalar_str(cur.next()) << '\n';
  }
}

template <ScalarLike S>
void write_blocks_csv(std::ostream& os, const BlockDecomposition<S>& d,
                      const std::vector<std::string>& config) {
  write_header(os, config);
  os << "kind,index,start,end,block_sum,partial_sum\n";
  for (auto [kind, i] : d.chronological()) {
    const auto& b = d.block(kind, i);
    os << to_string(kind) << ',' << i << ',' << b.first << ',' << b.last << ','
       << scalar_str(b.sum) << ',' << scalar_str(b.series_prefix) << '\n';
  }
  if (d.tail()) {
    const auto& t = *d.tail();
    os << "# truncated tail: kind=" << to_string(t.kind) << " start=" << t.first
       << " terms_seen=" << t.terms_seen << " partial_sum=" << scalar_str(t.partial_sum) << '\n';
  }
}

template <ScalarLike S>
void write_trace_csv(std::ostream& os, const Trace<S>& tr,
                     const std::vector<std::string>& config) {
  write_header(os, config);
  os << "step,chosen_index,term,partial_sum,block_count\n";
  for (std::uint64_t t = 0; t < tr.size(); ++t) {
    os << t << ',' << tr.indices[t] << ',' << scalar_str(tr.terms[t]) << ','
       << scalar_str(tr.partials[t]) << ',' << tr.block_counts[t] << '\n';
  }
}

void write_scan_csv(std::ostream& os, const SubstantialReport& rep,
                    const std::vector<std::string>& config);

template <ScalarLike S>
void write_sandwich_csv(std::ostream& os, const SandwichReport<S>& rep,
                        const std::vector<std::string>& config) {
  write_header(os, config);
  os << "# C=" << rep.C << '\n';
  os << "block,step,lower,partial_sum,upper,status\n";
  for (const auto& row : rep.rows) {
    os << row.i << ',' << row.step << ','
       << (row.lower ? scalar_str(*row.lower) : std::string("")) << ','
       << scalar_str(row.permuted_partial) << ','
       << (row.upper ? scalar_str(*row.upper) : std::string("")) << ','
       << to_string(row.status) << '\n';
  }
}

// --- JSON documents --------------------------------------------------------

template <ScalarLike S>
Json trace_summary_json(const Trace<S>& tr, const ConvergenceReport<S>& conv,
                        const std::vector<std::pair<std::uint64_t, std::uint32_t>>& profile,
                        const std::string& config) {
  Json j;
  j["config"] = config;
  j["series"] = spec_to_json(tr.spec);
  j["arithmetic"] = to_string(mode_of<S>());
  j["target"] = scalar_str(tr.target);
  j["steps"] = tr.size();
  j["max_block_number"] = tr.max_block_number;
  j["truncated"] = tr.truncated;
  j["frontier"] = Json{{"positive", tr.frontier_positive}, {"negative", tr.frontier_negative}};

  Json sw;
  sw["count"] = conv.switch_positions.size();
  sw["convergence_evidence"] = conv.convergence_evidence;
  sw["each_switch_bounded"] = conv.each_switch_bounded;
  if (conv.final_quarter_max_error) {
    sw["final_quarter"] = Json{
        {"switches", conv.switch_positions.size() - conv.final_quarter_first},
        {"max_error", scalar_str(*conv.final_quarter_max_error)},
        {"max_term_magnitude", scalar_str(*conv.final_quarter_max_term)},
        {"errors_bounded_by_term", conv.errors_bounded_by_term},
    };
  } else {
    sw["final_quarter"] = nullptr;
  }
  j["switch_errors"] = std::move(sw);

  Json prof = Json::array();
  for (auto [step, max] : profile) prof.push_back(Json::array({step, max}));
  j["growth_profile"] = std::move(prof);
  return j;
}

Json report_to_json(const SubstantialReport& rep);
Json scan_report_json(const SubstantialReport& rep_p, const SubstantialReport& rep_n,
                      const ZrHint& hint, bool fixing_evidence, ArithmeticMode run_mode,
                      const Json& series, const std::string& config);

template <ScalarLike S>
Json sandwich_summary_json(const SandwichReport<S>& rep, const TypeRResult& type_r,
                           const std::string& config) {
  Json j;
  j["config"] = config;
  j["type_r"] = type_r.ok;
  if (!type_r.ok) {
    j["type_r_violation"] = Json{{"position_earlier", type_r.violation->position_earlier},
                                 {"position_later", type_r.violation->position_later}};
  }
  j["C"] = rep.C;
  j["blocks_checked"] = rep.rows.size();
  j["passed"] = rep.passed;
  j["failed"] = rep.failed;
  j["unverifiable"] = rep.unverifiable;
  j["all_verifiable_pass"] = rep.all_verifiable_pass;
  return j;
}

// --- imports ----------------------------------------------------------------

// Trace CSV re-import. Indices are replayed against `spec`, recomputing
// terms, partial sums, and block counts; the file's term and partial-sum
// columns must agree with the recomputation (this catches a trace paired
// with the wrong series). The trace target is not stored in the CSV and is
// left at zero — verification does not use it.
template <ScalarLike S>
Trace<S> read_trace_csv(std::istream& is, const SeriesSpec& spec);

// Newline-delimited permutation images, optionally 1-based on disk.
std::vector<std::uint64_t> read_permutation(std::istream& is, bool one_based);

// Builds a verifiable trace from bare permutation images by replaying them
// against the series rule.
template <ScalarLike S>
Trace<S> trace_from_indices(const SeriesSpec& spec, const std::vector<std::uint64_t>& indices);

namespace detail {

std::vector<std::vector<std::string>> read_csv_rows(std::istream& is, std::size_t columns,
                                                    const char* what);
std::uint64_t parse_u64(const std::string& s, const char* what);

}  // namespace detail

template <ScalarLike S>
Trace<S> trace_from_indices(const SeriesSpec& spec, const std::vector<std::uint64_t>& indices) {
  if (indices.empty()) throw TraceParseError("trace import: no steps");
  Trace<S> tr;
  tr.spec = spec;
  tr.target = S(0);
  tr.indices = indices;

  std::uint64_t max_idx = 0;
  for (auto idx : indices) max_idx = std::max(max_idx, idx);
  const auto terms = generate_prefix<S>(spec, max_idx + 1);

  PermutationPrefix prefix;
  S partial(0);
  int prev_class = 0;
  std::vector<bool> used(max_idx + 1, false);
  for (std::uint64_t t = 0; t < indices.size(); ++t) {
    const std::uint64_t idx = indices[t];
    prefix.push_index(idx);  // rejects duplicates
    used[idx] = true;
    const S& term = terms[idx];
    partial += term;
    tr.terms.push_back(term);
    tr.partials.push_back(partial);
    const int cls = scalar_sign(term) > 0 ? 1 : -1;
    if (t > 0 && cls != prev_class) tr.sign_switches.push_back(t);
    prev_class = cls;
  }
  tr.block_counts = prefix.block_number_sequence();
  tr.max_block_number = prefix.max_block_number();

  auto frontier = [&](bool positive) -> std::uint64_t {
    TermCursor<S> cur(spec);
    for (std::uint64_t n = 0;; ++n) {
      const S v = cur.next();
      const bool is_pos = scalar_sign(v) > 0;
      if (is_pos == positive && (n > max_idx || !used[n])) return n;
      if (n > max_idx + 2 * indices.size() + 4) break;  // defensive; unreachable for sane specs
    }
    return max_idx + 1;
  };
  tr.frontier_positive = frontier(true);
  tr.frontier_negative = frontier(false);
  tr.truncated = false;
  return tr;
}

template <ScalarLike S>
Trace<S> read_trace_csv(std::istream& is, const SeriesSpec& spec) {
  const auto rows = detail::read_csv_rows(is, 5, "trace");
  std::vector<std::uint64_t> indices;
  indices.reserve(rows.size());
  for (const auto& row : rows) indices.push_back(detail::parse_u64(row[1], "trace chosen_index"));

  Trace<S> tr = trace_from_indices<S>(spec, indices);
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const std::uint64_t step = detail::parse_u64(rows[t][0], "trace step");
    if (step != t) throw TraceParseError("trace import: step column must count 0,1,2,...");
    S term(0), partial(0);
    try {
      term = scalar_parse<S>(rows[t][2]);
      partial = scalar_parse<S>(rows[t][3]);
    } catch (const std::exception& e) {
      throw TraceParseError("trace import: bad scalar at step " + std::to_string(t) + ": " +
                            e.what());
    }
    if (!(term == tr.terms[t]) || !(partial == tr.partials[t])) {
      throw TraceParseError("trace import: step " + std::to_string(t) +
                            " does not match the series rule (wrong --series/--spec for this "
                            "trace?)");
    }
  }
  return tr;
}

}  // namespace rearr::io
