#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rearr/series.hpp"

namespace rearr {

enum class BlockKind { positive, negative };

inline const char* to_string(BlockKind k) {
  return k == BlockKind::positive ? "P" : "N";
}

// Maximal same-sign index blocks of a series prefix. Indices are 0-based
// term positions; block labels are 1-based (P_1 is positive(1)). A term
// belongs to a positive block iff a_n > 0; zeros count as negative.
// Immutable after construction.
template <ScalarLike S>
class BlockDecomposition {
 public:
  struct Block {
    std::uint64_t first = 0;
    std::uint64_t last = 0;   // inclusive
    S sum = S(0);             // sum of a_n over [first, last]
    S series_prefix = S(0);   // sum of a_0..a_last
  };

  // Trailing run cut off by the horizon: not a block, kept for display only.
  struct Tail {
    BlockKind kind;
    std::uint64_t first = 0;
    std::uint64_t terms_seen = 0;
    S partial_sum = S(0);
  };

  std::uint64_t horizon() const { return horizon_; }
  const SeriesSpec& spec() const { return spec_; }
  const std::optional<Tail>& tail() const { return tail_; }

  std::size_t complete_count(BlockKind k) const { return list(k).size(); }

  const Block& block(BlockKind k, std::size_t i) const {
    check_index(k, i);
    return list(k)[i - 1];
  }

  // S_{[K_i, K_j]}: sum over the union of blocks i..j of one kind. 1-based.
  S block_sum(BlockKind k, std::size_t i, std::size_t j) const {
    if (i < 1 || j < i) throw std::out_of_range("block_sum: need 1 <= i <= j");
    check_index(k, j);
    const auto& cum = (k == BlockKind::positive) ? cum_pos_ : cum_neg_;
    return cum[j] - cum[i - 1];
  }

  // Ordinary series partial sum through the last index of block i.
  S partial_sum_at(BlockKind k, std::size_t i) const {
    check_index(k, i);
    return list(k)[i - 1].series_prefix;
  }

  const std::vector<Block>& blocks(BlockKind k) const { return list(k); }

  // Complete blocks of both kinds in index order.
  std::vector<std::pair<BlockKind, std::size_t>> chronological() const {
    std::vector<std::pair<BlockKind, std::size_t>> out;
    out.reserve(pos_.size() + neg_.size());
    std::size_t p = 0, n = 0;
    while (p < pos_.size() || n < neg_.size()) {
      const bool take_p = p < pos_.size() &&
                          (n >= neg_.size() || pos_[p].first < neg_[n].first);
      if (take_p) {
        out.emplace_back(BlockKind::positive, ++p);
      } else {
        out.emplace_back(BlockKind::negative, ++n);
      }
    }
    return out;
  }

  template <ScalarLike T>
  friend BlockDecomposition<T> decompose_blocks(const SeriesSpec&, std::uint64_t);

 private:
  const std::vector<Block>& list(BlockKind k) const {
    return k == BlockKind::positive ? pos_ : neg_;
  }

  void check_index(BlockKind k, std::size_t i) const {
    if (i < 1 || i > list(k).size()) {
      throw std::out_of_range(std::string("block index ") + std::to_string(i) +
                              " out of range: " + std::to_string(list(k).size()) +
                              " complete " + to_string(k) + " blocks");
    }
  }

  SeriesSpec spec_;
  std::vector<Block> pos_, neg_;
  std::vector<S> cum_pos_{S(0)}, cum_neg_{S(0)};  // cum[i] = block sums 1..i
  std::optional<Tail> tail_;
  std::uint64_t horizon_ = 0;
};

// Walk [0, horizon) grouping maximal same-sign runs. One term beyond the
// horizon is peeked to decide whether the final run is a complete block or
// a truncated tail.
template <ScalarLike S>
BlockDecomposition<S> decompose_blocks(const SeriesSpec& spec, std::uint64_t horizon) {
  if (horizon == 0) throw std::invalid_argument("decompose_blocks: horizon must be >= 1");
  BlockDecomposition<S> d;
  d.spec_ = spec;
  d.horizon_ = horizon;

  TermCursor<S> cur(spec);
  S series_sum = S(0);

  bool run_negative = false;
  std::uint64_t run_first = 0;
  std::uint64_t run_len = 0;
  S run_sum = S(0);

  auto close_run = [&](std::uint64_t last) {
    typename BlockDecomposition<S>::Block b;
    b.first = run_first;
    b.last = last;
    b.sum = run_sum;
    b.series_prefix = series_sum;
    if (run_negative) {
      d.neg_.push_back(b);
      d.cum_neg_.push_back(d.cum_neg_.back() + run_sum);
    } else {
      d.pos_.push_back(b);
      d.cum_pos_.push_back(d.cum_pos_.back() + run_sum);
    }
  };

  for (std::uint64_t n = 0; n < horizon; ++n) {
    S v = cur.next();
    const bool neg = scalar_sign(v) <= 0;
    if (run_len > 0 && neg != run_negative) {
      close_run(n - 1);
      run_first = n;
      run_len = 0;
      run_sum = S(0);
    }
    if (run_len == 0) {
      run_first = n;
      run_negative = neg;
    }
    ++run_len;
    run_sum += v;
    series_sum += v;
  }

  const bool peek_negative = scalar_sign(cur.next()) <= 0;
  if (peek_negative != run_negative) {
    close_run(horizon - 1);
  } else {
    typename BlockDecomposition<S>::Tail t{
        run_negative ? BlockKind::negative : BlockKind::positive, run_first, run_len, run_sum};
    d.tail_ = t;
  }
  return d;
}

}  // namespace rearr
