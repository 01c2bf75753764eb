#include "rearr/escalating.hpp"

#include <cmath>
#include <stdexcept>

namespace rearr {

const EscalatingBlock& EscalatingBlockTable::block(BlockKind k, std::size_t i) const {
  const auto& idx = kind_rows(k);
  if (i < 1 || i > idx.size()) {
    throw std::out_of_range("EscalatingBlockTable: block " + std::to_string(i) +
                            " out of range (" + std::to_string(idx.size()) + " complete)");
  }
  return rows_[idx[i - 1]];
}

ApproxValue EscalatingBlockTable::block_sum(BlockKind k, std::size_t i, std::size_t j) const {
  if (i < 1 || j < i) throw std::out_of_range("block_sum: need 1 <= i <= j");
  const auto& cum = kind_cum(k);
  if (j >= cum.size()) {
    throw std::out_of_range("block_sum: block " + std::to_string(j) + " out of range (" +
                            std::to_string(cum.size() - 1) + " complete)");
  }
  return cum[j] - cum[i - 1];
}

EscalatingBlockTable EscalatingBlockTable::build(const SeriesSpec& spec, std::size_t per_kind,
                                                 std::uint64_t exact_cutoff) {
  if (spec.kind != SeriesKind::escalating_blocks) {
    throw std::invalid_argument("EscalatingBlockTable: spec is not escalating_blocks");
  }
  if (per_kind < 1) throw std::invalid_argument("EscalatingBlockTable: need per_kind >= 1");

  EscalatingBlockTable table;
  table.spec_ = spec;
  table.exact_cutoff_ = exact_cutoff;
  table.cum_pos_.push_back(ApproxValue::of(Rational(0)));
  table.cum_neg_.push_back(ApproxValue::of(Rational(0)));

  auto append = [&](EscalatingBlock&& blk) {
    const bool positive = blk.positive;
    auto& idx = positive ? table.pos_rows_ : table.neg_rows_;
    auto& cum = positive ? table.cum_pos_ : table.cum_neg_;
    blk.ordinal = idx.size() + 1;
    idx.push_back(table.rows_.size());
    cum.push_back(cum.back() + blk.sum);
    table.rows_.push_back(std::move(blk));
  };

  BigInt series_pos(0);
  if (spec.leading_zero) {
    EscalatingBlock zero;
    zero.positive = false;
    zero.zero_block = true;
    zero.series_first = 0;
    zero.series_last = 0;
    zero.sum = ApproxValue::of(Rational(0));
    zero.target = ApproxValue::of(Rational(0));
    append(std::move(zero));
    series_pos = 1;
  }

  BigInt pool_p(1), pool_n(1);
  std::size_t harmonic_blocks = 0;  // seed index, zero block excluded
  bool positive = true;

  // Target for the block about to be built; mirrors TermCursor's chain:
  // seeded while seeds last, else previous achieved magnitude plus one.
  auto seeded = [&](std::size_t b) -> std::optional<Rational> {
    if (b < spec.seed_targets.size()) {
      const Rational t = spec.seed_targets[b];
      if (t.sign() <= 0) throw std::invalid_argument("escalating_blocks: targets must be positive");
      return t;
    }
    return std::nullopt;
  };
  ApproxValue target = ApproxValue::of(seeded(0).value_or(Rational(1)));

  while (table.pos_rows_.size() < per_kind || table.neg_rows_.size() < per_kind) {
    BigInt& pool = positive ? pool_p : pool_n;
    EscalatingBlock blk;
    blk.positive = positive;
    blk.pool_first = pool;
    blk.target = target;
    blk.series_first = series_pos;

    bool exact_done = false;
    if (target.exact && pool.fits_ulong_p()) {
      const std::uint64_t a = pool.get_ui();
      const double est =
          std::exp(std::log(static_cast<double>(a) > 1.0 ? static_cast<double>(a) - 0.5 : 0.5) +
                   target.enc.mid());
      if (est <= static_cast<double>(exact_cutoff)) {
        const auto b = first_pool_reaching_exact(a, *target.exact, 2 * exact_cutoff);
        if (b) {
          const Rational mag = harmonic_segment_exact(a, *b);
          blk.pool_last = BigInt(static_cast<unsigned long>(*b));
          blk.sum = ApproxValue::of(positive ? mag : -mag);
          blk.boundary_certified = true;
          exact_done = true;
        }
      }
    }
    if (!exact_done) {
      const Enclosure h_before = harmonic_value(pool - BigInt(1));
      const BoundaryResult res = first_pool_reaching(pool, h_before, target.enc);
      blk.pool_last = res.pool_last;
      blk.sum = ApproxValue::of(positive ? res.segment : -res.segment);
      blk.boundary_certified = res.certified;
    }

    blk.series_last = blk.series_first + (blk.pool_last - blk.pool_first);
    series_pos = blk.series_last + 1;
    pool = blk.pool_last + 1;

    ++harmonic_blocks;
    const ApproxValue achieved = blk.sum.abs();
    if (auto s = seeded(harmonic_blocks)) {
      target = ApproxValue::of(*s);
    } else {
      target = achieved + ApproxValue::of(Rational(1));
    }

    append(std::move(blk));
    positive = !positive;
  }
  return table;
}

}  // namespace rearr
