#pragma once

#include <cstdint>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/harmonic.hpp"
#include "rearr/series.hpp"

namespace rearr {

// One block of an escalating_blocks series, described analytically. Pool
// positions are 1-based ranks in that sign's harmonic pool (value 1/rank);
// series positions are 0-based term indices. Deep blocks outgrow both
// enumeration and 64-bit counters, hence BigInt.
struct EscalatingBlock {
  bool positive = false;
  std::size_t ordinal = 0;  // 1-based within its kind
  bool zero_block = false;  // the leading_zero singleton; pools untouched

  BigInt pool_first{0}, pool_last{0};
  BigInt series_first{0}, series_last{0};

  ApproxValue sum;     // signed block sum
  ApproxValue target;  // magnitude this block was built to reach (0 for the zero block)

  // False once the pool step 1/b falls below the enclosure resolution; the
  // boundary is then a deterministic pick inside the straddle zone.
  bool boundary_certified = true;

  BigInt length() const {
    return zero_block ? BigInt(1) : BigInt(pool_last - pool_first + 1);
  }
};

// Block table for escalating_blocks computed without term enumeration:
// exact boundaries and sums (binary-splitting harmonic segments) while
// pools stay below the exact cutoff, certified enclosures beyond. Agrees
// with TermCursor on every block the cursor can reach.
class EscalatingBlockTable {
 public:
  // Builds until both kinds have per_kind complete blocks.
  static EscalatingBlockTable build(const SeriesSpec& spec, std::size_t per_kind,
                                    std::uint64_t exact_cutoff = 200000);

  const std::vector<EscalatingBlock>& rows() const { return rows_; }
  std::size_t complete_count(BlockKind k) const { return kind_rows(k).size(); }
  const EscalatingBlock& block(BlockKind k, std::size_t i) const;

  // Signed sum over blocks i..j of one kind, 1-based, via cumulative sums.
  ApproxValue block_sum(BlockKind k, std::size_t i, std::size_t j) const;

  std::uint64_t exact_cutoff() const { return exact_cutoff_; }
  const SeriesSpec& spec() const { return spec_; }

 private:
  const std::vector<std::size_t>& kind_rows(BlockKind k) const {
    return k == BlockKind::positive ? pos_rows_ : neg_rows_;
  }
  const std::vector<ApproxValue>& kind_cum(BlockKind k) const {
    return k == BlockKind::positive ? cum_pos_ : cum_neg_;
  }

  SeriesSpec spec_;
  std::vector<EscalatingBlock> rows_;
  std::vector<std::size_t> pos_rows_, neg_rows_;      // row index per kind, in order
  std::vector<ApproxValue> cum_pos_, cum_neg_;        // cum[i] = sums of blocks 1..i
  std::uint64_t exact_cutoff_ = 0;
};

}  // namespace rearr
