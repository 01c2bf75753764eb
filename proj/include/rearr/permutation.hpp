#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/series.hpp"
#include "rearr/trace.hpp"

namespace rearr {

class DuplicateIndexError : public std::invalid_argument {
 public:
  explicit DuplicateIndexError(std::uint64_t idx)
      : std::invalid_argument("index already present: " + std::to_string(idx)),
        index_(idx) {}
  std::uint64_t index() const { return index_; }

 private:
  std::uint64_t index_;
};

// Disjoint integer intervals, stored as start -> end (inclusive).
// The canonical minimal cover: neighbors are merged on insert, so the map
// size is exactly the block count of the covered set.
class IntervalSet {
 public:
  bool contains(std::uint64_t x) const;

  // Change in interval count that inserting x would cause: +1 isolated,
  // 0 extends one neighbor, -1 bridges two. Throws DuplicateIndexError.
  int insertion_delta(std::uint64_t x) const;

  // Inserts x and returns the realized delta.
  int insert(std::uint64_t x);

  std::size_t count() const { return map_.size(); }
  std::size_t covered() const { return covered_; }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals() const;

 private:
  std::map<std::uint64_t, std::uint64_t> map_;
  std::size_t covered_ = 0;
};

// A permutation prefix sigma(0..t-1) with its block number sequence kept
// online: counts()[t] is the number of maximal runs of consecutive integers
// in {sigma(0..t)}.
class PermutationPrefix {
 public:
  void push_index(std::uint64_t idx);

  // Predicts the count change of push_index(idx) without mutating.
  int block_count_delta(std::uint64_t idx) const { return set_.insertion_delta(idx); }

  bool contains(std::uint64_t idx) const { return set_.contains(idx); }
  std::uint64_t size() const { return images_.size(); }

  const std::vector<std::uint64_t>& images() const { return images_; }
  const std::vector<std::uint32_t>& block_number_sequence() const { return counts_; }
  std::uint32_t block_count() const { return counts_.empty() ? 0 : counts_.back(); }
  std::uint32_t max_block_number() const { return max_; }
  const IntervalSet& merged_intervals() const { return set_; }

 private:
  std::vector<std::uint64_t> images_;
  std::vector<std::uint32_t> counts_;
  IntervalSet set_;
  std::uint32_t max_ = 0;
};

struct TypeRViolation {
  std::uint64_t position_earlier = 0;  // step with the larger index
  std::uint64_t position_later = 0;    // step with the smaller index
};

struct TypeRResult {
  bool ok = true;
  std::optional<TypeRViolation> violation;
  explicit operator bool() const { return ok; }
};

namespace detail {

// Sign classes of a_0..a_{count-1}: +1 positive, -1 otherwise (zeros count
// as negative).
template <ScalarLike S>
std::vector<signed char> sign_prefix(const SeriesSpec& spec, std::uint64_t count) {
  std::vector<signed char> out;
  out.reserve(count);
  TermCursor<S> cur(spec);
  for (std::uint64_t n = 0; n < count; ++n) {
    out.push_back(scalar_sign(cur.next()) > 0 ? +1 : -1);
  }
  return out;
}

}  // namespace detail

// Order preservation within each sign class: for positions i < j with
// a_{sigma(i)}, a_{sigma(j)} in the same class, sigma(i) < sigma(j) must
// hold. On failure reports the first violating later position j together
// with the earliest offending earlier position.
template <ScalarLike S>
TypeRResult is_type_r(std::span<const std::uint64_t> images, const SeriesSpec& spec) {
  std::uint64_t max_idx = 0;
  for (auto idx : images) max_idx = std::max(max_idx, idx);
  const auto signs =
      images.empty() ? std::vector<signed char>{} : detail::sign_prefix<S>(spec, max_idx + 1);

  std::uint64_t last_pos = 0, last_neg = 0;
  bool seen_pos = false, seen_neg = false;
  for (std::uint64_t t = 0; t < images.size(); ++t) {
    const std::uint64_t idx = images[t];
    const bool positive = signs[idx] > 0;
    std::uint64_t& last = positive ? last_pos : last_neg;
    bool& seen = positive ? seen_pos : seen_neg;
    if (seen && idx < last) {
      TypeRViolation v;
      v.position_later = t;
      for (std::uint64_t s = 0; s < t; ++s) {
        if ((signs[images[s]] > 0) == positive && images[s] > idx) {
          v.position_earlier = s;
          break;
        }
      }
      return {false, v};
    }
    last = idx;
    seen = true;
  }
  return {true, std::nullopt};
}

template <ScalarLike S>
TypeRResult is_type_r(const PermutationPrefix& prefix, const SeriesSpec& spec) {
  return is_type_r<S>(std::span<const std::uint64_t>(prefix.images()), spec);
}

template <ScalarLike S>
TypeRResult is_type_r(const Trace<S>& trace) {
  return is_type_r<S>(std::span<const std::uint64_t>(trace.indices), trace.spec);
}

enum class SandwichStatus { pass, fail, unverifiable };

inline const char* to_string(SandwichStatus s) {
  switch (s) {
    case SandwichStatus::pass: return "pass";
    case SandwichStatus::fail: return "fail";
    default: return "unverifiable";
  }
}

template <ScalarLike S>
struct SandwichReport {
  struct Row {
    std::size_t i = 0;           // negative block ordinal, 1-based
    std::uint64_t step = 0;      // trace step consuming that block's last index
    S permuted_partial = S(0);
    std::optional<S> lower;
    std::optional<S> upper;      // absent when P_{i+C-1} is past the horizon
    SandwichStatus status = SandwichStatus::unverifiable;
  };

  std::uint32_t C = 0;
  std::vector<Row> rows;
  std::size_t passed = 0, failed = 0, unverifiable = 0;
  bool all_verifiable_pass = true;
};

// Checks, for every negative block N_i the trace consumed in full,
//   S_[N_1,N_i] + S_[P_1,P_{i-C}]  <=  S^sigma_{m_i}  <=  S_[N_1,N_i] + S_[P_1,P_{i+C-1}]
// where m_i is N_i's last index and empty block ranges contribute 0.
// Rows whose upper range runs past the decomposed horizon are unverifiable.
template <ScalarLike S>
SandwichReport<S> verify_sandwich(const Trace<S>& trace, const BlockDecomposition<S>& decomp,
                                  std::uint32_t C) {
  if (C < 1) throw std::invalid_argument("verify_sandwich: C must be >= 1");
  if (auto r = is_type_r(trace); !r.ok) {
    throw std::invalid_argument(
        "verify_sandwich: trace is not type R (positions " +
        std::to_string(r.violation->position_earlier) + ", " +
        std::to_string(r.violation->position_later) + ")");
  }
  for (auto idx : trace.indices) {
    if (idx >= decomp.horizon()) {
      throw std::invalid_argument("verify_sandwich: trace consumed index " +
                                  std::to_string(idx) + " beyond decomposition horizon " +
                                  std::to_string(decomp.horizon()));
    }
  }

  SandwichReport<S> rep;
  rep.C = C;

  const auto& neg = decomp.blocks(BlockKind::negative);
  const std::size_t pos_count = decomp.complete_count(BlockKind::positive);

  // Under type R the negative indices appear in increasing order, so N_i is
  // fully consumed exactly at the step that picks its last index.
  std::size_t next_i = 0;  // 0-based into neg
  for (std::uint64_t t = 0; t < trace.size() && next_i < neg.size(); ++t) {
    if (trace.indices[t] != neg[next_i].last) continue;
    const std::size_t i = next_i + 1;
    typename SandwichReport<S>::Row row;
    row.i = i;
    row.step = t;
    row.permuted_partial = trace.partials[t];

    const S base = decomp.block_sum(BlockKind::negative, 1, i);
    S lower = base;
    if (i > C) lower += decomp.block_sum(BlockKind::positive, 1, i - C);
    row.lower = lower;

    const std::size_t j = i + C - 1;
    if (j <= pos_count) {
      S upper = base;
      if (j >= 1) upper += decomp.block_sum(BlockKind::positive, 1, j);
      row.upper = upper;
      const bool ok = !(row.permuted_partial < *row.lower) && !(*row.upper < row.permuted_partial);
      row.status = ok ? SandwichStatus::pass : SandwichStatus::fail;
    } else {
      row.status = SandwichStatus::unverifiable;
    }

    switch (row.status) {
      case SandwichStatus::pass: ++rep.passed; break;
      case SandwichStatus::fail: ++rep.failed; rep.all_verifiable_pass = false; break;
      case SandwichStatus::unverifiable: ++rep.unverifiable; break;
    }
    rep.rows.push_back(std::move(row));
    ++next_i;
  }
  return rep;
}

}  // namespace rearr
