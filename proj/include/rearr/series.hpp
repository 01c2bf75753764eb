#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rearr/scalar.hpp"

namespace rearr {

enum class SeriesKind { square_blocks, escalating_blocks, custom_blocks, explicit_prefix };

inline const char* to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::square_blocks: return "square_blocks";
    case SeriesKind::escalating_blocks: return "escalating_blocks";
    case SeriesKind::custom_blocks: return "custom_blocks";
    case SeriesKind::explicit_prefix: return "explicit_prefix";
  }
  return "?";
}

// One entry of a custom block pattern: `count` copies of `scale` with the
// given sign. A full pattern cycles forever; under harmonic decay the c-th
// cycle emits its values divided by c, which keeps the per-sign tails
// divergent while the terms go to zero.
struct CustomBlock {
  bool positive = true;
  std::uint32_t count = 1;
  Rational scale = Rational(1);
};

enum class CustomDecay { harmonic, none };

// A deterministic rule producing a_n for every n >= 0. Immutable after
// construction; safe to share across threads.
struct SeriesSpec {
  SeriesKind kind = SeriesKind::explicit_prefix;
  bool leading_zero = false;

  std::vector<Rational> seed_targets;    // escalating_blocks only
  std::vector<CustomBlock> pattern;      // custom_blocks only
  CustomDecay decay = CustomDecay::harmonic;
  std::vector<Rational> terms;           // explicit_prefix only

  // Known substantial-property status for the built-in generators, from the
  // construction itself. Empty for user-defined specs.
  std::optional<bool> known_st_positive;
  std::optional<bool> known_st_negative;

  std::string name() const { return to_string(kind); }
};

// First term of the underlying rule, ignoring leading_zero.
Rational first_underlying_term(const SeriesSpec& spec);

// Default rule for the leading-zero flag: on when the series would
// otherwise open with a positive term, off otherwise.
inline bool default_leading_zero(const SeriesSpec& spec) {
  return first_underlying_term(spec).sign() > 0;
}

// The singleton example series: for k = 1, 2, 3, ... emit the pair
// (1/k, -1/k), except that a perfect square k emits k copies of 1/k
// followed by k copies of -1/k.
SeriesSpec make_square_blocks(std::optional<bool> leading_zero = false);

// The escalating example series: positive and negative terms are drawn in
// order from separate harmonic pools 1, 1/2, 1/3, ...; each block ends at
// the first term where the block's own sum magnitude reaches its target,
// and the next block's target is the achieved magnitude plus one. Optional
// seed targets replace the leading targets of that chain.
SeriesSpec make_escalating_blocks(std::vector<Rational> seed_targets = {},
                                  std::optional<bool> leading_zero = false);

SeriesSpec make_explicit_prefix(std::vector<Rational> terms,
                                std::optional<bool> leading_zero = std::nullopt);

SeriesSpec make_custom_blocks(std::vector<CustomBlock> pattern,
                              CustomDecay decay = CustomDecay::harmonic,
                              std::optional<bool> leading_zero = std::nullopt);

namespace detail {

inline bool is_perfect_square(std::uint64_t k) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(k)));
  while (r > 0 && r * r > k) --r;
  while ((r + 1) * (r + 1) <= k) ++r;
  return r * r == k;
}

}  // namespace detail

// Sequential term generator. Amortized O(1) per term; a fresh cursor starts
// at position 0. Cursors hold a pointer to the spec, which must outlive them.
template <ScalarLike S>
class TermCursor {
 public:
  explicit TermCursor(const SeriesSpec& spec) : spec_(&spec) {
    if (spec.kind == SeriesKind::custom_blocks) {
      if (spec.pattern.empty()) throw std::invalid_argument("custom_blocks: empty pattern");
      for (const auto& b : spec.pattern) {
        if (b.count == 0) throw std::invalid_argument("custom_blocks: zero-length pattern entry");
        if (b.scale.sign() <= 0) throw std::invalid_argument("custom_blocks: scale must be positive");
      }
      custom_left_ = spec.pattern[0].count;
    }
    if (spec.kind == SeriesKind::escalating_blocks) {
      esc_target_ = next_escalating_target(S(0));
    }
  }

  std::uint64_t position() const { return pos_; }

  S next() {
    if (spec_->leading_zero && pos_ == 0) {
      ++pos_;
      return S(0);
    }
    ++pos_;
    switch (spec_->kind) {
      case SeriesKind::square_blocks: return next_square();
      case SeriesKind::escalating_blocks: return next_escalating();
      case SeriesKind::custom_blocks: return next_custom();
      case SeriesKind::explicit_prefix: return next_explicit();
    }
    throw std::logic_error("TermCursor: bad kind");
  }

 private:
  S next_square() {
    const bool square = detail::is_perfect_square(sq_k_);
    const std::uint64_t copies = square ? sq_k_ : 1;
    S v = fraction<S>(sq_neg_ ? -1 : 1, static_cast<std::int64_t>(sq_k_));
    if (++sq_emitted_ == copies) {
      sq_emitted_ = 0;
      if (!sq_neg_) {
        sq_neg_ = true;
      } else {
        sq_neg_ = false;
        if (sq_k_ == UINT64_MAX) throw OverflowError("square_blocks: block index exhausted");
        ++sq_k_;
      }
    }
    return v;
  }

  S next_escalating() {
    std::uint64_t& pool = esc_negative_ ? esc_pool_n_ : esc_pool_p_;
    if (pool == UINT64_MAX) throw OverflowError("escalating_blocks: harmonic pool exhausted");
    S mag = fraction<S>(1, static_cast<std::int64_t>(pool));
    S v = esc_negative_ ? S(0) - mag : mag;
    ++pool;
    esc_acc_ += mag;
    if (esc_acc_ >= esc_target_) {
      ++esc_blocks_done_;
      esc_target_ = next_escalating_target(esc_acc_);
      esc_acc_ = S(0);
      esc_negative_ = !esc_negative_;
    }
    return v;
  }

  S next_escalating_target(const S& achieved) {
    // Target for the upcoming block: seeded while seeds last, then the
    // previously achieved magnitude plus one.
    const std::size_t b = esc_blocks_done_;  // 0-based index of the block being opened
    if (b < spec_->seed_targets.size()) {
      Rational t = spec_->seed_targets[b];
      if (t.sign() <= 0) throw std::invalid_argument("escalating_blocks: targets must be positive");
      return scalar_from<S>(t);
    }
    if (b == 0) return S(1);
    return achieved + S(1);
  }

  S next_custom() {
    const CustomBlock& entry = spec_->pattern[custom_entry_];
    S v = scalar_from<S>(entry.scale);
    if (spec_->decay == CustomDecay::harmonic) {
      if (custom_cycle_ > static_cast<std::uint64_t>(INT64_MAX))
        throw OverflowError("custom_blocks: cycle index exhausted");
      v = v * fraction<S>(1, static_cast<std::int64_t>(custom_cycle_));
    }
    if (!entry.positive) v = S(0) - v;
    if (--custom_left_ == 0) {
      if (++custom_entry_ == spec_->pattern.size()) {
        custom_entry_ = 0;
        ++custom_cycle_;
      }
      custom_left_ = spec_->pattern[custom_entry_].count;
    }
    return v;
  }

  S next_explicit() {
    const std::uint64_t inner = pos_ - 1 - (spec_->leading_zero ? 1 : 0);
    if (inner < spec_->terms.size()) return scalar_from<S>(spec_->terms[inner]);
    return S(0);  // the stored prefix continues as an all-zero (negative) tail
  }

  const SeriesSpec* spec_;
  std::uint64_t pos_ = 0;

  // square_blocks
  std::uint64_t sq_k_ = 1;
  std::uint64_t sq_emitted_ = 0;
  bool sq_neg_ = false;

  // escalating_blocks
  std::uint64_t esc_pool_p_ = 1;
  std::uint64_t esc_pool_n_ = 1;
  bool esc_negative_ = false;
  S esc_acc_ = S(0);
  S esc_target_ = S(1);
  std::size_t esc_blocks_done_ = 0;

  // custom_blocks
  std::uint64_t custom_cycle_ = 1;
  std::size_t custom_entry_ = 0;
  std::uint32_t custom_left_ = 0;
};

// a_n for a single index. O(n); use generate_prefix or a TermCursor when
// consuming a range.
template <ScalarLike S>
S eval_term(const SeriesSpec& spec, std::uint64_t n) {
  TermCursor<S> cur(spec);
  S v = cur.next();
  for (std::uint64_t i = 0; i < n; ++i) v = cur.next();
  return v;
}

template <ScalarLike S>
std::vector<S> generate_prefix(const SeriesSpec& spec, std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("generate_prefix: count must be >= 1");
  std::vector<S> out;
  out.reserve(count);
  TermCursor<S> cur(spec);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(cur.next());
  return out;
}

}  // namespace rearr
