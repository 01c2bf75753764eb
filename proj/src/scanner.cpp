#include "rearr/scanner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rearr {

namespace {

// Deterministic ordering for minima: exact comparison when available,
// otherwise lexicographic on the enclosure bounds.
bool approx_less(const ApproxValue& a, const ApproxValue& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  if (a.enc.lo != b.enc.lo) return a.enc.lo < b.enc.lo;
  return a.enc.hi < b.enc.hi;
}

bool approx_identical(const ApproxValue& a, const ApproxValue& b) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  if (a.exact || b.exact) return false;
  return a.enc.lo == b.enc.lo && a.enc.hi == b.enc.hi;
}

bool within_one_percent(const ApproxValue& a, const ApproxValue& b) {
  const double x = a.enc.mid(), y = b.enc.mid();
  const double scale = std::max(std::fabs(x), std::fabs(y));
  return scale == 0.0 ? true : std::fabs(x - y) <= 0.01 * scale;
}

}  // namespace

std::vector<std::size_t> default_i0_grid(std::size_t horizon_blocks) {
  std::vector<std::size_t> grid{1, horizon_blocks / 10, horizon_blocks / 4};
  for (auto& g : grid) g = std::max<std::size_t>(g, 1);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

namespace detail {

SubstantialReport scan_core(BlockSumSeries in, std::uint32_t k_max,
                            std::vector<std::size_t> i0_grid, std::size_t blocks) {
  if (blocks > 0) {
    if (in.sums.size() < blocks) {
      throw std::invalid_argument("scan_substantial: insufficient blocks: need at least " +
                                  std::to_string(blocks) + " complete " + to_string(in.kind) +
                                  " blocks, have " + std::to_string(in.sums.size()));
    }
    in.sums.resize(blocks);
  }
  const std::size_t B = in.sums.size();
  if (i0_grid.empty()) i0_grid = default_i0_grid(B);
  std::sort(i0_grid.begin(), i0_grid.end());
  i0_grid.erase(std::unique(i0_grid.begin(), i0_grid.end()), i0_grid.end());
  if (i0_grid.front() < 1) throw std::invalid_argument("scan_substantial: i0 must be >= 1");

  const std::size_t needed = i0_grid.back() + k_max;
  if (B < needed) {
    throw std::invalid_argument("scan_substantial: insufficient blocks: need at least " +
                                std::to_string(needed) + " complete " + to_string(in.kind) +
                                " blocks, have " + std::to_string(B));
  }

  SubstantialReport rep;
  rep.kind = in.kind;
  rep.mode = in.mode;
  rep.horizon_blocks = B;
  rep.k_max = k_max;
  rep.i0_grid = i0_grid;
  rep.analytic_st = in.analytic_st;

  // cum[i] = signed sum of blocks 1..i
  std::vector<ApproxValue> cum;
  cum.reserve(B + 1);
  cum.push_back(ApproxValue::of(Rational(0)));
  for (const auto& s : in.sums) cum.push_back(cum.back() + s);

  const std::size_t horizons[3] = {B / 4, B / 2, B};

  std::vector<ApproxValue> win;  // |window| per i, refreshed for each k
  win.resize(B + 1, ApproxValue::of(Rational(0)));
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    const std::size_t top = B - k;
    for (std::size_t i = 1; i <= top; ++i) win[i] = (cum[i + k] - cum[i - 1]).abs();

    for (const std::size_t i0 : i0_grid) {
      SubstantialCell cell;
      cell.k = k;
      cell.i0 = i0;

      std::optional<ApproxValue> best;
      std::size_t best_i = 0;
      std::size_t h = 0;
      for (std::size_t i = i0; i <= top && h < 3; ++i) {
        if (!best || approx_less(win[i], *best)) {
          best = win[i];
          best_i = i;
        }
        while (h < 3 && (i + k == horizons[h] || i == top)) {
          if (i0 + k <= horizons[h]) cell.min_at[h] = best;
          ++h;
        }
      }
      if (i0 > top) {
        // No window at the full horizon for this cell; cannot happen given
        // the `needed` check, kept for clarity.
        continue;
      }
      cell.min_abs = *best;
      cell.argmin_i = best_i;

      bool defined = cell.min_at[0] && cell.min_at[1] && cell.min_at[2];
      if (defined) {
        if (in.mode == ArithmeticMode::exact) {
          cell.stable = approx_identical(*cell.min_at[0], *cell.min_at[1]) &&
                        approx_identical(*cell.min_at[1], *cell.min_at[2]);
        } else {
          cell.stable = within_one_percent(*cell.min_at[0], *cell.min_at[1]) &&
                        within_one_percent(*cell.min_at[1], *cell.min_at[2]) &&
                        within_one_percent(*cell.min_at[0], *cell.min_at[2]);
        }
      }
      cell.positive = cell.min_abs.exact ? cell.min_abs.exact->sign() > 0
                                         : cell.min_abs.enc.lo > 0.0;

      if (!rep.witness && cell.stable && cell.positive) {
        rep.witness = SubstantialWitness{k, cell.min_abs, i0};
        rep.verdict = SubstantialVerdict::witness_found;
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

}  // namespace detail

SubstantialReport scan_substantial(const EscalatingBlockTable& t, BlockKind kind,
                                   std::uint32_t k_max, std::vector<std::size_t> i0_grid,
                                   std::size_t blocks) {
  detail::BlockSumSeries in;
  in.kind = kind;
  in.mode = ArithmeticMode::exact;
  in.analytic_st = kind == BlockKind::positive ? t.spec().known_st_positive
                                               : t.spec().known_st_negative;
  const std::size_t count = t.complete_count(kind);
  in.sums.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) in.sums.push_back(t.block_sum(kind, i, i));
  return detail::scan_core(std::move(in), k_max, std::move(i0_grid), blocks);
}

ZrHint classify_zr_hint(const SubstantialReport& report_p, const SubstantialReport& report_n,
                        bool has_fixing_permutation) {
  ZrHint hint;
  hint.annotation = "finite-horizon heuristic, not a decision";
  if (!has_fixing_permutation) {
    hint.kind = ZrHintKind::empty;
    hint.text = "hint: Z_R = (empty set)";
    return hint;
  }
  const bool both = report_p.verdict == SubstantialVerdict::witness_found &&
                    report_n.verdict == SubstantialVerdict::witness_found;
  if (both) {
    hint.kind = ZrHintKind::reals;
    hint.text = "hint: Z_R = R";
  } else {
    hint.kind = ZrHintKind::singleton;
    hint.text = "hint: Z_R singleton";
  }
  return hint;
}

}  // namespace rearr
