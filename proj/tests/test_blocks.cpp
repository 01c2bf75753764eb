#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/series.hpp"

using namespace rearr;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

// Reference decomposition by plain rescan: group a generated prefix into
// maximal sign runs, closing the last run only when the next term flips.
struct NaiveRun {
  bool negative = false;
  std::uint64_t first = 0, last = 0;
  Rational sum;
  Rational prefix;  // series sum through `last`
};

struct NaiveDecomp {
  std::vector<NaiveRun> complete;
  bool has_tail = false;
  NaiveRun tail;
};

NaiveDecomp naive_decompose(const SeriesSpec& spec, std::uint64_t horizon) {
  auto terms = generate_prefix<Rational>(spec, horizon + 1);  // one extra to peek
  NaiveDecomp out;
  Rational prefix(0);
  NaiveRun run;
  std::uint64_t len = 0;
  for (std::uint64_t n = 0; n < horizon; ++n) {
    const bool neg = terms[n].sign() <= 0;
    if (len > 0 && neg != run.negative) {
      out.complete.push_back(run);
      len = 0;
    }
    if (len == 0) run = NaiveRun{neg, n, n, R(0), R(0)};
    prefix += terms[n];
    run.last = n;
    run.sum += terms[n];
    run.prefix = prefix;
    ++len;
  }
  if ((terms[horizon].sign() <= 0) != run.negative) {
    out.complete.push_back(run);
  } else {
    out.has_tail = true;
    out.tail = run;
  }
  return out;
}

void check_against_naive(const SeriesSpec& spec, std::uint64_t horizon) {
  const auto d = decompose_blocks<Rational>(spec, horizon);
  const auto ref = naive_decompose(spec, horizon);

  std::size_t pos_seen = 0, neg_seen = 0;
  for (const auto& run : ref.complete) {
    const auto kind = run.negative ? BlockKind::negative : BlockKind::positive;
    const std::size_t i = run.negative ? ++neg_seen : ++pos_seen;
    REQUIRE(i <= d.complete_count(kind));
    const auto& b = d.block(kind, i);
    CHECK(b.first == run.first);
    CHECK(b.last == run.last);
    CHECK(b.sum == run.sum);
    CHECK(b.series_prefix == run.prefix);
  }
  CHECK(d.complete_count(BlockKind::positive) == pos_seen);
  CHECK(d.complete_count(BlockKind::negative) == neg_seen);

  REQUIRE(d.tail().has_value() == ref.has_tail);
  if (ref.has_tail) {
    CHECK(d.tail()->kind == (ref.tail.negative ? BlockKind::negative : BlockKind::positive));
    CHECK(d.tail()->first == ref.tail.first);
    CHECK(d.tail()->terms_seen == ref.tail.last - ref.tail.first + 1);
    CHECK(d.tail()->partial_sum == ref.tail.sum);
  }
}

}  // namespace

TEST_CASE("square horizon 4 splits into four singleton blocks") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 4);
  REQUIRE(d.complete_count(BlockKind::positive) == 2);
  REQUIRE(d.complete_count(BlockKind::negative) == 2);
  CHECK_FALSE(d.tail().has_value());

  CHECK(d.block(BlockKind::positive, 1).first == 0);
  CHECK(d.block(BlockKind::positive, 1).sum == R(1));
  CHECK(d.block(BlockKind::negative, 1).first == 1);
  CHECK(d.block(BlockKind::negative, 1).sum == R(-1));
  CHECK(d.block(BlockKind::positive, 2).sum == R(1, 2));
  CHECK(d.block(BlockKind::negative, 2).sum == R(-1, 2));
  CHECK(d.partial_sum_at(BlockKind::negative, 2) == R(0));
  CHECK(d.partial_sum_at(BlockKind::positive, 2) == R(1, 2));
}

TEST_CASE("square k=4 run forms one block of four terms") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 14);
  REQUIRE(d.complete_count(BlockKind::positive) == 4);
  const auto& p4 = d.block(BlockKind::positive, 4);
  CHECK(p4.first == 6);
  CHECK(p4.last == 9);
  CHECK(p4.sum == R(1));
  const auto& n4 = d.block(BlockKind::negative, 4);
  CHECK(n4.first == 10);
  CHECK(n4.last == 13);
  CHECK(n4.sum == R(-1));
  CHECK(n4.series_prefix == R(0));
}

TEST_CASE("zeros extend negative runs") {
  // 0 opens a negative block; the final -1 run is cut by the zero tail
  auto spec = make_explicit_prefix({R(0), R(2), R(3), R(-1)}, false);
  const auto d = decompose_blocks<Rational>(spec, 4);
  REQUIRE(d.complete_count(BlockKind::negative) == 1);
  REQUIRE(d.complete_count(BlockKind::positive) == 1);
  CHECK(d.block(BlockKind::negative, 1).first == 0);
  CHECK(d.block(BlockKind::negative, 1).last == 0);
  CHECK(d.block(BlockKind::negative, 1).sum == R(0));
  CHECK(d.block(BlockKind::positive, 1).first == 1);
  CHECK(d.block(BlockKind::positive, 1).last == 2);
  CHECK(d.block(BlockKind::positive, 1).sum == R(5));

  // the -1 at index 3 continues into the all-zero tail, so it is not a block
  REQUIRE(d.tail().has_value());
  CHECK(d.tail()->kind == BlockKind::negative);
  CHECK(d.tail()->first == 3);
  CHECK(d.tail()->terms_seen == 1);
  CHECK(d.tail()->partial_sum == R(-1));

  // widening the horizon only grows the same tail
  const auto d8 = decompose_blocks<Rational>(spec, 8);
  CHECK(d8.complete_count(BlockKind::negative) == 1);
  REQUIRE(d8.tail().has_value());
  CHECK(d8.tail()->first == 3);
  CHECK(d8.tail()->terms_seen == 5);
}

TEST_CASE("mid-run horizon leaves a tail") {
  // horizon 8 cuts inside the k=4 positive run
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 8);
  CHECK(d.complete_count(BlockKind::positive) == 3);
  CHECK(d.complete_count(BlockKind::negative) == 3);
  REQUIRE(d.tail().has_value());
  CHECK(d.tail()->kind == BlockKind::positive);
  CHECK(d.tail()->first == 6);
  CHECK(d.tail()->terms_seen == 2);
  CHECK(d.tail()->partial_sum == R(1, 2));
}

TEST_CASE("rescan oracle over several generators") {
  check_against_naive(make_square_blocks(), 500);
  check_against_naive(make_square_blocks(true), 501);
  check_against_naive(make_escalating_blocks(), 500);
  check_against_naive(make_escalating_blocks({R(1, 2), R(3)}), 350);
  check_against_naive(make_custom_blocks({{true, 3, R(2)}, {false, 2, R(1)}}), 499);
  check_against_naive(make_explicit_prefix({R(1), R(1), R(-2), R(0), R(5), R(-1), R(3)}), 40);
}

TEST_CASE("chronological order interleaves by start index") {
  const auto d = decompose_blocks<Rational>(make_escalating_blocks(), 400);
  const auto chron = d.chronological();
  std::uint64_t prev_first = 0;
  bool first_row = true;
  for (auto [kind, i] : chron) {
    const auto& b = d.block(kind, i);
    if (!first_row) CHECK(b.first > prev_first);
    prev_first = b.first;
    first_row = false;
  }
  CHECK(chron.size() ==
        d.complete_count(BlockKind::positive) + d.complete_count(BlockKind::negative));
}

TEST_CASE("block_sum is additive over ranges") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 600);
  const auto n = d.complete_count(BlockKind::positive);
  REQUIRE(n >= 10);

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(1, n);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t i = pick(rng), j = pick(rng);
    if (j < i) std::swap(i, j);
    Rational direct(0);
    for (std::size_t b = i; b <= j; ++b) direct += d.block(BlockKind::positive, b).sum;
    CHECK(d.block_sum(BlockKind::positive, i, j) == direct);
  }

  const std::size_t m = d.complete_count(BlockKind::negative);
  CHECK(d.block_sum(BlockKind::negative, 1, m) ==
        d.partial_sum_at(BlockKind::negative, m) - d.block_sum(BlockKind::positive, 1, m));
}

TEST_CASE("indexing is 1-based and guarded") {
  const auto d = decompose_blocks<Rational>(make_square_blocks(), 20);
  CHECK_THROWS_AS(d.block(BlockKind::positive, 0), std::out_of_range);
  CHECK_THROWS_AS((void)d.block(BlockKind::positive, d.complete_count(BlockKind::positive) + 1),
                  std::out_of_range);
  CHECK_THROWS_AS(d.block_sum(BlockKind::negative, 2, 1), std::out_of_range);
  CHECK_THROWS_AS(d.block_sum(BlockKind::negative, 0, 1), std::out_of_range);
  CHECK_THROWS_AS(d.partial_sum_at(BlockKind::positive, 0), std::out_of_range);
}

TEST_CASE("horizon zero is rejected") {
  CHECK_THROWS_AS(decompose_blocks<Rational>(make_square_blocks(), 0), std::invalid_argument);
}

TEST_CASE("float decomposition mirrors the exact one") {
  const auto de = decompose_blocks<Rational>(make_escalating_blocks(), 400);
  const auto df = decompose_blocks<double>(make_escalating_blocks(), 400);
  REQUIRE(de.complete_count(BlockKind::negative) == df.complete_count(BlockKind::negative));
  for (std::size_t i = 1; i <= de.complete_count(BlockKind::negative); ++i) {
    CHECK(de.block(BlockKind::negative, i).first == df.block(BlockKind::negative, i).first);
    CHECK(df.block(BlockKind::negative, i).sum ==
          doctest::Approx(de.block(BlockKind::negative, i).sum.to_double()).epsilon(1e-12));
  }
}
