#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rearr/permutation.hpp"
#include "rearr/series.hpp"
#include "rearr/trace.hpp"

namespace rearr {

struct GreedyOptions {
  // Terms are generated lazily; the buffer doubles whenever a pool scan runs
  // off its end, up to max_horizon. A pool that cannot be served within the
  // cap marks the trace truncated instead of throwing.
  std::uint64_t max_horizon = std::uint64_t(1) << 24;
  std::uint64_t initial_horizon = 1024;
};

// Greedy rule toward target r: if the partial sum so far is <= r, take the
// smallest unused index with a_n > 0, otherwise the smallest unused index
// with a_n <= 0. Comparisons are exact in both arithmetic modes.
template <ScalarLike S>
Trace<S> greedy_rearrange(const SeriesSpec& spec, const S& r, std::uint64_t steps,
                          GreedyOptions opts = {}) {
  if (steps < 1) throw std::invalid_argument("greedy_rearrange: steps must be >= 1");
  if (opts.initial_horizon < 1) opts.initial_horizon = 1;

  Trace<S> tr;
  tr.spec = spec;
  tr.target = r;
  tr.indices.reserve(steps);
  tr.terms.reserve(steps);
  tr.partials.reserve(steps);
  tr.block_counts.reserve(steps);

  std::vector<S> terms;
  TermCursor<S> cur(spec);
  auto ensure = [&](std::uint64_t n) -> bool {
    while (terms.size() <= n) {
      if (terms.size() >= opts.max_horizon) return false;
      std::uint64_t grow_to = std::max<std::uint64_t>(opts.initial_horizon, terms.size() * 2);
      grow_to = std::min(grow_to, opts.max_horizon);
      terms.reserve(grow_to);
      while (terms.size() < grow_to) terms.push_back(cur.next());
    }
    return true;
  };
  auto scan = [&](std::uint64_t from, bool positive) -> std::optional<std::uint64_t> {
    for (std::uint64_t idx = from;; ++idx) {
      if (!ensure(idx)) return std::nullopt;
      if ((scalar_sign(terms[idx]) > 0) == positive) return idx;
    }
  };

  PermutationPrefix prefix;
  S partial = S(0);
  std::uint64_t fp = 0, fn = 0;
  bool prev_positive = false;

  for (std::uint64_t t = 0; t < steps; ++t) {
    const bool want_positive = !(r < partial);
    std::uint64_t& frontier = want_positive ? fp : fn;
    const auto found = scan(frontier, want_positive);
    if (!found) {
      tr.truncated = true;
      break;
    }
    const std::uint64_t idx = *found;
    frontier = idx + 1;

    partial += terms[idx];
    prefix.push_index(idx);
    tr.indices.push_back(idx);
    tr.terms.push_back(terms[idx]);
    tr.partials.push_back(partial);
    tr.block_counts.push_back(prefix.block_count());
    if (t > 0 && want_positive != prev_positive) tr.sign_switches.push_back(t);
    prev_positive = want_positive;
  }
  tr.max_block_number = prefix.max_block_number();

  // Locate each class's next unused index, without growing the buffer; if
  // none is in the generated range the frontier rests at the range's end.
  auto settle = [&](std::uint64_t from, bool positive) {
    std::uint64_t idx = from;
    while (idx < terms.size() && (scalar_sign(terms[idx]) > 0) != positive) ++idx;
    return idx;
  };
  tr.frontier_positive = settle(fp, true);
  tr.frontier_negative = settle(fn, false);
  return tr;
}

template <ScalarLike S>
struct ConvergenceReport {
  std::vector<std::uint64_t> switch_positions;
  std::vector<S> switch_errors;  // |S^sigma_{t-1} - r| per switch position t

  // Final quarter = last ceil(K/4) switches; its term span starts one step
  // before the first switch in it, so every pre-switch term is covered.
  std::size_t final_quarter_first = 0;  // ordinal into switch_positions
  std::optional<S> final_quarter_max_error;
  std::optional<S> final_quarter_max_term;
  bool errors_bounded_by_term = false;

  // Every switch error is within the magnitude of the term consumed at the
  // step right before it (the overshoot bound).
  bool each_switch_bounded = false;

  bool convergence_evidence = false;  // false when the trace never switched
};

template <ScalarLike S>
ConvergenceReport<S> convergence_report(const Trace<S>& trace) {
  if (trace.empty()) throw std::invalid_argument("convergence_report: empty trace");

  ConvergenceReport<S> rep;
  rep.switch_positions = trace.sign_switches;
  rep.switch_errors.reserve(rep.switch_positions.size());

  bool all_bounded = true;
  for (auto t : rep.switch_positions) {
    S err = scalar_abs(trace.partials[t - 1] - trace.target);
    if (scalar_abs(trace.terms[t - 1]) < err) all_bounded = false;
    rep.switch_errors.push_back(std::move(err));
  }

  const std::size_t k = rep.switch_positions.size();
  rep.convergence_evidence = k > 0;
  rep.each_switch_bounded = k > 0 && all_bounded;
  if (k == 0) return rep;

  rep.final_quarter_first = k - (k + 3) / 4;
  S max_err = rep.switch_errors[rep.final_quarter_first];
  for (std::size_t j = rep.final_quarter_first + 1; j < k; ++j) {
    if (max_err < rep.switch_errors[j]) max_err = rep.switch_errors[j];
  }

  const std::uint64_t span_begin = rep.switch_positions[rep.final_quarter_first] - 1;
  S max_term = scalar_abs(trace.terms[span_begin]);
  for (std::uint64_t t = span_begin + 1; t < trace.size(); ++t) {
    S m = scalar_abs(trace.terms[t]);
    if (max_term < m) max_term = m;
  }

  rep.errors_bounded_by_term = !(max_term < max_err);
  rep.final_quarter_max_error = std::move(max_err);
  rep.final_quarter_max_term = std::move(max_term);
  return rep;
}

// Running maxima of the block number sequence at the given step counts.
// Checkpoints must be ascending, >= 1, and within the trace length.
template <ScalarLike S>
std::vector<std::pair<std::uint64_t, std::uint32_t>> block_growth_profile(
    const Trace<S>& trace, const std::vector<std::uint64_t>& checkpoints) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  out.reserve(checkpoints.size());
  std::uint64_t prev = 0;
  std::uint64_t walked = 0;
  std::uint32_t running = 0;
  for (auto c : checkpoints) {
    if (c < 1 || c < prev) throw std::invalid_argument("block_growth_profile: checkpoints must be ascending and >= 1");
    if (c > trace.size()) {
      throw std::out_of_range("block_growth_profile: checkpoint " + std::to_string(c) +
                              " beyond trace length " + std::to_string(trace.size()));
    }
    while (walked < c) running = std::max(running, trace.block_counts[walked++]);
    out.emplace_back(c, running);
    prev = c;
  }
  return out;
}

}  // namespace rearr
