#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/escalating.hpp"
#include "rearr/scanner.hpp"
#include "rearr/series.hpp"

using namespace rearr;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

// Explicit series whose positive block sums are 4,3,2,1,5,6,7,8.
SeriesSpec stair_spec() {
  std::vector<Rational> terms;
  for (long v : {4, 3, 2, 1, 5, 6, 7, 8}) {
    terms.push_back(R(v));
    terms.push_back(R(-1));
  }
  return make_explicit_prefix(terms, false);
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("window sums are plain consecutive-block sums") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 60);
  auto w0 = window_sums(d, BlockKind::positive, 0, {1, 5});
  CHECK(w0 == std::vector<Rational>{R(1), R(1, 2), R(1, 3), R(1), R(1, 5)});

  auto w0n = window_sums(d, BlockKind::negative, 0, {1, 3});
  CHECK(w0n == std::vector<Rational>{R(-1), R(-1, 2), R(-1, 3)});

  auto w1 = window_sums(d, BlockKind::positive, 1, {1, 4});
  CHECK(w1 == std::vector<Rational>{R(3, 2), R(5, 6), R(4, 3), R(6, 5)});

  CHECK_THROWS_AS(window_sums(d, BlockKind::positive, 0, {0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(window_sums(d, BlockKind::positive, 0, {4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(window_sums(d, BlockKind::positive, 5, {1, 1000}), std::out_of_range);
}

TEST_CASE("sub-horizon minima on a hand-built staircase") {
  const auto d = decompose_blocks<Rational>(stair_spec(), 16);
  REQUIRE(d.complete_count(BlockKind::positive) == 8);

  auto rep = scan_substantial(d, BlockKind::positive, 1, {1});
  CHECK(rep.horizon_blocks == 8);
  CHECK(rep.k_max == 1);
  REQUIRE(rep.cells.size() == 2);

  // k=0: minima at horizons 2/4/8 are 3, 1, 1 -- not flat, no witness
  const auto& c0 = rep.cells[0];
  CHECK(c0.k == 0);
  CHECK(c0.i0 == 1);
  CHECK(c0.min_abs.exact.value() == R(1));
  CHECK(c0.argmin_i == 4);
  REQUIRE(c0.min_at[0].has_value());
  REQUIRE(c0.min_at[1].has_value());
  REQUIRE(c0.min_at[2].has_value());
  CHECK(c0.min_at[0]->exact.value() == R(3));
  CHECK(c0.min_at[1]->exact.value() == R(1));
  CHECK(c0.min_at[2]->exact.value() == R(1));
  CHECK_FALSE(c0.stable);
  CHECK(c0.positive);

  // k=1: pairs sum to 7,5,3,6,11,13,15; minima 7, 3, 3
  const auto& c1 = rep.cells[1];
  CHECK(c1.k == 1);
  CHECK(c1.min_abs.exact.value() == R(3));
  CHECK(c1.argmin_i == 3);
  CHECK(c1.min_at[0]->exact.value() == R(7));
  CHECK(c1.min_at[1]->exact.value() == R(3));
  CHECK_FALSE(c1.stable);

  CHECK(rep.verdict == SubstantialVerdict::no_witness_at_horizon);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("escalating blocks witness immediately") {
  const auto table = EscalatingBlockTable::build(make_escalating_blocks(), 50);
  auto rep_p = scan_substantial(table, BlockKind::positive, 2);
  auto rep_n = scan_substantial(table, BlockKind::negative, 2);

  REQUIRE(rep_p.verdict == SubstantialVerdict::witness_found);
  REQUIRE(rep_p.witness.has_value());
  CHECK(rep_p.witness->k == 0);
  CHECK(rep_p.witness->i0 == 1);
  CHECK(rep_p.witness->epsilon.exact.value() == R(1));

  REQUIRE(rep_n.witness.has_value());
  CHECK(rep_n.witness->k == 0);
  CHECK(rep_n.witness->epsilon.exact.value() == R(25, 12));

  CHECK(rep_p.horizon_blocks == 50);
  CHECK(rep_p.i0_grid == std::vector<std::size_t>{1, 5, 12});
  CHECK(rep_p.cells.size() == 3 * 3);
  CHECK(rep_p.analytic_st == true);

  // escalating magnitudes: every single-block window is at least 1
  for (std::size_t i = 1; i <= 50; ++i) {
    const auto s = table.block_sum(BlockKind::positive, i, i).abs();
    const bool at_least_one = s.exact ? *s.exact >= R(1) : s.enc.lo >= 1.0;
    CHECK(at_least_one);
  }

  const auto hint = classify_zr_hint(rep_p, rep_n, true);
  CHECK(hint.kind == ZrHintKind::reals);
  CHECK(hint.text == "hint: Z_R = R");
  CHECK(hint.annotation == "finite-horizon heuristic, not a decision");
}

TEST_CASE("square blocks never stabilize") {
  // 200 complete blocks per kind fit comfortably in 2500 terms
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 2500);
  auto rep = scan_substantial(d, BlockKind::positive, 3, {}, 200);
  CHECK(rep.horizon_blocks == 200);
  CHECK(rep.verdict == SubstantialVerdict::no_witness_at_horizon);
  CHECK(rep.analytic_st == false);
  for (const auto& cell : rep.cells) {
    CHECK_FALSE(cell.stable);
    CHECK(cell.positive);  // no window of harmonic-like blocks cancels to zero
    // minima keep shrinking as the horizon widens
    if (cell.min_at[0] && cell.min_at[2]) {
      CHECK(*cell.min_at[2]->exact < *cell.min_at[0]->exact);
    }
  }

  auto rep_n = scan_substantial(d, BlockKind::negative, 3, {}, 200);
  CHECK(rep_n.verdict == SubstantialVerdict::no_witness_at_horizon);
  const auto hint = classify_zr_hint(rep, rep_n, true);
  CHECK(hint.kind == ZrHintKind::singleton);
  CHECK(hint.text == "hint: Z_R singleton");
}

TEST_CASE("hint lattice") {
  const auto table = EscalatingBlockTable::build(make_escalating_blocks(), 30);
  auto yes = scan_substantial(table, BlockKind::positive, 0);
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 2500);
  auto no = scan_substantial(d, BlockKind::positive, 0, {}, 150);
  REQUIRE(yes.verdict == SubstantialVerdict::witness_found);
  REQUIRE(no.verdict == SubstantialVerdict::no_witness_at_horizon);

  CHECK(classify_zr_hint(yes, yes, false).kind == ZrHintKind::empty);
  CHECK(classify_zr_hint(no, no, false).kind == ZrHintKind::empty);
  CHECK(classify_zr_hint(yes, yes, true).kind == ZrHintKind::reals);
  CHECK(classify_zr_hint(yes, no, true).kind == ZrHintKind::singleton);
  CHECK(classify_zr_hint(no, yes, true).kind == ZrHintKind::singleton);
  CHECK(classify_zr_hint(no, no, true).kind == ZrHintKind::singleton);
  CHECK(contains(classify_zr_hint(yes, yes, false).text, "empty"));
}

TEST_CASE("constant-block pattern yields a sound witness") {
  // every block sums to +1 / -1: epsilon 1 at every horizon
  auto spec = make_custom_blocks({{true, 1, R(1)}, {false, 1, R(1)}}, CustomDecay::none, false);
  const auto d = decompose_blocks<Rational>(spec, 241);
  auto rep = scan_substantial(d, BlockKind::positive, 2, {}, 120);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->k == 0);
  CHECK(rep.witness->epsilon.exact.value() == R(1));

  // re-check the claim independently over the scanned range
  for (std::size_t i = 1; i <= 120; ++i) {
    CHECK(abs(d.block_sum(BlockKind::positive, i, i)) >= *rep.witness->epsilon.exact);
  }

  // harmonic decay destroys the bound
  auto fading = make_custom_blocks({{true, 1, R(1)}, {false, 1, R(1)}}, CustomDecay::harmonic,
                                   false);
  const auto df = decompose_blocks<Rational>(fading, 241);
  auto repf = scan_substantial(df, BlockKind::positive, 2, {}, 120);
  CHECK(repf.verdict == SubstantialVerdict::no_witness_at_horizon);
}

TEST_CASE("witness epsilon is the observed minimum, never rounded") {
  // blocks 5/7, 5/7, ... : epsilon must be exactly 5/7
  auto spec = make_custom_blocks({{true, 1, R(5, 7)}, {false, 1, R(1)}}, CustomDecay::none,
                                 false);
  const auto d = decompose_blocks<Rational>(spec, 81);
  auto rep = scan_substantial(d, BlockKind::positive, 1, {}, 40);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->epsilon.exact.value() == R(5, 7));
}

TEST_CASE("insufficient blocks are reported, not scanned") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 40);
  const auto have = d.complete_count(BlockKind::positive);
  try {
    scan_substantial(d, BlockKind::positive, static_cast<std::uint32_t>(have + 5), {1});
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(contains(e.what(), "insufficient blocks"));
  }

  // asking for more complete blocks than exist fails the same way
  CHECK_THROWS_AS(scan_substantial(d, BlockKind::positive, 0, {1}, have + 1),
                  std::invalid_argument);
  // and i0 = 0 is rejected
  CHECK_THROWS_AS(scan_substantial(d, BlockKind::positive, 0, {0}), std::invalid_argument);
}

TEST_CASE("block budget pins the horizon") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 2500);
  auto full = scan_substantial(d, BlockKind::positive, 0, {1});
  auto pinned = scan_substantial(d, BlockKind::positive, 0, {1}, 100);
  auto wide = scan_substantial(d, BlockKind::positive, 0, {1}, 200);
  CHECK(full.horizon_blocks == d.complete_count(BlockKind::positive));
  CHECK(pinned.horizon_blocks == 100);
  // a pinned scan's full-horizon minimum equals the doubled scan's mid one
  CHECK(pinned.cells[0].min_abs.exact.value() == wide.cells[0].min_at[1]->exact.value());
}

TEST_CASE("default grid trims and deduplicates") {
  CHECK(default_i0_grid(200) == std::vector<std::size_t>{1, 20, 50});
  CHECK(default_i0_grid(50) == std::vector<std::size_t>{1, 5, 12});
  CHECK(default_i0_grid(8) == std::vector<std::size_t>{1, 2});
  CHECK(default_i0_grid(3) == std::vector<std::size_t>{1});
}

TEST_CASE("float scans use the one-percent stability band") {
  auto spec = make_custom_blocks({{true, 1, R(1)}, {false, 1, R(1)}}, CustomDecay::none, false);
  const auto d = decompose_blocks<double>(spec, 241);
  auto rep = scan_substantial(d, BlockKind::positive, 0, {1}, 120);
  CHECK(rep.mode == ArithmeticMode::floating);
  REQUIRE(rep.witness.has_value());
  CHECK_FALSE(rep.witness->epsilon.exact.has_value());
  CHECK(rep.witness->epsilon.enc.lo <= 1.0);
  CHECK(1.0 <= rep.witness->epsilon.enc.hi);
  CHECK(rep.witness->epsilon.enc.width() < 1e-10);  // a few ulps per window op

  // harmonic-like decay drifts far beyond one percent between horizons
  const auto ds = decompose_blocks<double>(make_square_blocks(), 2500);
  auto reps = scan_substantial(ds, BlockKind::positive, 0, {1}, 200);
  CHECK(reps.verdict == SubstantialVerdict::no_witness_at_horizon);
  CHECK_FALSE(reps.cells[0].stable);
}
