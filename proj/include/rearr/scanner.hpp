#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/escalating.hpp"
#include "rearr/harmonic.hpp"

namespace rearr {

struct IndexRange {
  std::size_t first = 1;
  std::size_t last = 1;  // inclusive, 1-based block indices
};

// S_{[kind_i, kind_{i+k}]} for each i in the range, straight off the
// decomposition's cumulative block sums.
template <ScalarLike S>
std::vector<S> window_sums(const BlockDecomposition<S>& d, BlockKind kind, std::uint32_t k,
                           IndexRange range) {
  if (range.first < 1 || range.last < range.first) {
    throw std::invalid_argument("window_sums: bad index range");
  }
  std::vector<S> out;
  out.reserve(range.last - range.first + 1);
  for (std::size_t i = range.first; i <= range.last; ++i) {
    out.push_back(d.block_sum(kind, i, i + k));  // throws past complete blocks
  }
  return out;
}

enum class SubstantialVerdict { witness_found, no_witness_at_horizon };

inline const char* to_string(SubstantialVerdict v) {
  return v == SubstantialVerdict::witness_found ? "witness_found" : "no_witness_at_horizon";
}

// One scanned (k, i0) cell: the minimum |window sum| over i in [i0, B-k],
// with the same minimum re-taken at the sub-horizons B/4 and B/2 for the
// stability test.
struct SubstantialCell {
  std::uint32_t k = 0;
  std::size_t i0 = 1;
  ApproxValue min_abs;
  std::size_t argmin_i = 0;
  std::optional<ApproxValue> min_at[3];  // horizons B/4, B/2, B
  bool stable = false;     // minima defined and flat across the three horizons
  bool positive = false;   // min certified > 0
};

struct SubstantialWitness {
  std::uint32_t k = 0;
  ApproxValue epsilon;  // the observed minimum, never rounded up
  std::size_t i0 = 1;
};

struct SubstantialReport {
  BlockKind kind = BlockKind::positive;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::size_t horizon_blocks = 0;
  std::uint32_t k_max = 0;
  std::vector<std::size_t> i0_grid;
  std::vector<SubstantialCell> cells;  // k-major, grid order within k
  SubstantialVerdict verdict = SubstantialVerdict::no_witness_at_horizon;
  std::optional<SubstantialWitness> witness;
  std::optional<bool> analytic_st;  // carried by built-in generators
};

namespace detail {

struct BlockSumSeries {
  BlockKind kind = BlockKind::positive;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::vector<ApproxValue> sums;  // signed, [0] is block 1
  std::optional<bool> analytic_st;
};

SubstantialReport scan_core(BlockSumSeries in, std::uint32_t k_max,
                            std::vector<std::size_t> i0_grid, std::size_t blocks);

template <ScalarLike S>
ApproxValue approx_of(const S& v) {
  if constexpr (std::same_as<S, Rational>) {
    return ApproxValue::of(v);
  } else {
    return ApproxValue::of(Enclosure::point(v));
  }
}

}  // namespace detail

// Default grid {1, B/10, B/4} (deduplicated; Def 2.5 allows discarding any
// finite prefix, so a few starting offsets are probed).
std::vector<std::size_t> default_i0_grid(std::size_t horizon_blocks);

// `blocks` limits the scan to the first that many complete blocks (0 = all
// available); the limit is also how a caller pins the horizon exactly.
template <ScalarLike S>
SubstantialReport scan_substantial(const BlockDecomposition<S>& d, BlockKind kind,
                                   std::uint32_t k_max, std::vector<std::size_t> i0_grid = {},
                                   std::size_t blocks = 0) {
  detail::BlockSumSeries in;
  in.kind = kind;
  in.mode = mode_of<S>();
  in.analytic_st = kind == BlockKind::positive ? d.spec().known_st_positive
                                               : d.spec().known_st_negative;
  const auto& kind_blocks = d.blocks(kind);
  in.sums.reserve(kind_blocks.size());
  for (const auto& b : kind_blocks) in.sums.push_back(detail::approx_of<S>(b.sum));
  return detail::scan_core(std::move(in), k_max, std::move(i0_grid), blocks);
}

SubstantialReport scan_substantial(const EscalatingBlockTable& t, BlockKind kind,
                                   std::uint32_t k_max, std::vector<std::size_t> i0_grid = {},
                                   std::size_t blocks = 0);

enum class ZrHintKind { empty, singleton, reals };

struct ZrHint {
  ZrHintKind kind = ZrHintKind::empty;
  std::string text;        // e.g. "hint: Z_R = R"
  std::string annotation;  // always "finite-horizon heuristic, not a decision"
};

// Theorem-shaped reading of two scans plus fixing evidence: no evidence of a
// fixing permutation -> empty; evidence and both witnesses -> all reals;
// evidence with a missing witness -> singleton.
ZrHint classify_zr_hint(const SubstantialReport& report_p, const SubstantialReport& report_n,
                        bool has_fixing_permutation);

}  // namespace rearr
