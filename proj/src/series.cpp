#include "rearr/series.hpp"

namespace rearr {

Rational first_underlying_term(const SeriesSpec& spec) {
  SeriesSpec bare = spec;
  bare.leading_zero = false;
  return eval_term<Rational>(bare, 0);
}

SeriesSpec make_square_blocks(std::optional<bool> leading_zero) {
  SeriesSpec spec;
  spec.kind = SeriesKind::square_blocks;
  spec.known_st_positive = false;
  spec.known_st_negative = false;
  spec.leading_zero = leading_zero.value_or(false);
  return spec;
}

SeriesSpec make_escalating_blocks(std::vector<Rational> seed_targets,
                                  std::optional<bool> leading_zero) {
  SeriesSpec spec;
  spec.kind = SeriesKind::escalating_blocks;
  spec.seed_targets = std::move(seed_targets);
  for (const auto& t : spec.seed_targets) {
    if (t.sign() <= 0) throw std::invalid_argument("escalating_blocks: targets must be positive");
  }
  spec.known_st_positive = true;
  spec.known_st_negative = true;
  spec.leading_zero = leading_zero.value_or(false);
  return spec;
}

SeriesSpec make_explicit_prefix(std::vector<Rational> terms,
                                std::optional<bool> leading_zero) {
  SeriesSpec spec;
  spec.kind = SeriesKind::explicit_prefix;
  spec.terms = std::move(terms);
  spec.leading_zero = leading_zero ? *leading_zero : default_leading_zero(spec);
  return spec;
}

SeriesSpec make_custom_blocks(std::vector<CustomBlock> pattern, CustomDecay decay,
                              std::optional<bool> leading_zero) {
  SeriesSpec spec;
  spec.kind = SeriesKind::custom_blocks;
  spec.pattern = std::move(pattern);
  spec.decay = decay;
  if (spec.pattern.empty()) throw std::invalid_argument("custom_blocks: empty pattern");
  spec.leading_zero = leading_zero ? *leading_zero : default_leading_zero(spec);
  return spec;
}

}  // namespace rearr
