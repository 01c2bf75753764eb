#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include "rearr/blocks.hpp"
#include "rearr/permutation.hpp"
#include "rearr/series.hpp"
#include "rearr/trace.hpp"

using namespace rearr;

namespace {

Rational R(long p, long q = 1) { return Rational(p, q); }

std::vector<std::uint32_t> sequence_of(const std::vector<std::uint64_t>& indices) {
  PermutationPrefix p;
  for (auto i : indices) p.push_index(i);
  return p.block_number_sequence();
}

// Independent recount: number of maximal runs of consecutive integers.
std::uint32_t runs_in(const std::set<std::uint64_t>& s) {
  std::uint32_t runs = 0;
  std::uint64_t prev = 0;
  bool first = true;
  for (auto v : s) {
    if (first || v != prev + 1) ++runs;
    prev = v;
    first = false;
  }
  return runs;
}

// Minimal hand-built trace over an explicit series; partials and block
// counts recomputed from scratch.
Trace<Rational> manual_trace(const SeriesSpec& spec, std::vector<std::uint64_t> indices) {
  Trace<Rational> tr;
  tr.spec = spec;
  std::uint64_t max_idx = *std::max_element(indices.begin(), indices.end());
  auto terms = generate_prefix<Rational>(spec, max_idx + 1);
  PermutationPrefix p;
  Rational partial(0);
  for (auto idx : indices) {
    p.push_index(idx);
    partial += terms[idx];
    tr.indices.push_back(idx);
    tr.terms.push_back(terms[idx]);
    tr.partials.push_back(partial);
    tr.block_counts.push_back(p.block_count());
  }
  tr.max_block_number = p.max_block_number();
  return tr;
}

}  // namespace

TEST_CASE("block number sequence of the worked example") {
  CHECK(sequence_of({1, 3, 4, 2}) == std::vector<std::uint32_t>{1, 2, 2, 1});
}

TEST_CASE("identity stays at one block") {
  std::vector<std::uint64_t> ident(50);
  std::iota(ident.begin(), ident.end(), 0);
  auto seq = sequence_of(ident);
  CHECK(std::all_of(seq.begin(), seq.end(), [](std::uint32_t c) { return c == 1; }));
}

TEST_CASE("spread-out pushes grow one block each") {
  CHECK(sequence_of({0, 2, 4, 6}) == std::vector<std::uint32_t>{1, 2, 3, 4});
  PermutationPrefix p;
  for (auto i : {0, 2, 4, 6}) p.push_index(static_cast<std::uint64_t>(i));
  CHECK(p.max_block_number() == 4);
  CHECK(p.block_count() == 4);
  // now fill the gaps back down to one block
  p.push_index(1);
  p.push_index(3);
  p.push_index(5);
  CHECK(p.block_count() == 1);
  CHECK(p.max_block_number() == 4);  // running max is sticky
}

TEST_CASE("insertion delta classifies bridge, extension, island") {
  PermutationPrefix p;
  p.push_index(1);
  p.push_index(3);
  p.push_index(4);
  CHECK(p.block_count_delta(2) == -1);  // bridges [1,1] and [3,4]
  CHECK(p.block_count_delta(5) == 0);   // extends [3,4]
  CHECK(p.block_count_delta(0) == 0);   // extends [1,1] downward
  CHECK(p.block_count_delta(7) == +1);  // isolated
  CHECK(p.contains(3));
  CHECK_FALSE(p.contains(2));
}

TEST_CASE("duplicate pushes are rejected with the offending index") {
  PermutationPrefix p;
  p.push_index(9);
  try {
    p.push_index(9);
    FAIL("expected DuplicateIndexError");
  } catch (const DuplicateIndexError& e) {
    CHECK(e.index() == 9);
  }
}

TEST_CASE("interval bookkeeping matches a set-based recount") {
  std::mt19937_64 rng(123);
  std::vector<std::uint64_t> pool(3000);
  std::iota(pool.begin(), pool.end(), 0);
  std::shuffle(pool.begin(), pool.end(), rng);

  PermutationPrefix p;
  std::set<std::uint64_t> seen;
  for (auto idx : pool) {
    const auto predicted = static_cast<std::int64_t>(p.block_count()) + p.block_count_delta(idx);
    p.push_index(idx);
    seen.insert(idx);
    REQUIRE(p.block_count() == runs_in(seen));
    REQUIRE(predicted == static_cast<std::int64_t>(p.block_count()));
  }
  CHECK(p.block_count() == 1);
  CHECK(p.merged_intervals().covered() == pool.size());
  CHECK(p.merged_intervals().intervals() ==
        std::vector<std::pair<std::uint64_t, std::uint64_t>>{{0, 2999}});
}

TEST_CASE("block counts are order-sensitive but the final state is not") {
  std::mt19937_64 rng(5);
  std::vector<std::uint64_t> pool(200);
  std::iota(pool.begin(), pool.end(), 0);
  std::uint32_t final_count = 0;
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(pool.begin(), pool.end(), rng);
    PermutationPrefix p;
    for (auto idx : pool) p.push_index(idx);
    if (trial == 0) final_count = p.block_count();
    CHECK(p.block_count() == final_count);  // same covered set, same runs
  }
  CHECK(final_count == 1);
}

TEST_CASE("type R holds for any same-class-ascending order") {
  auto spec = make_square_blocks();
  // negatives may interleave freely with positives as long as each class
  // ascends: indices 0,2 are +, 1,3 are -
  std::vector<std::uint64_t> good = {1, 0, 3, 2};
  CHECK(is_type_r<Rational>(std::span<const std::uint64_t>(good), spec).ok);

  std::vector<std::uint64_t> bad = {2, 0};  // two positives, descending
  auto res = is_type_r<Rational>(std::span<const std::uint64_t>(bad), spec);
  REQUIRE_FALSE(res.ok);
  REQUIRE(res.violation.has_value());
  CHECK(res.violation->position_earlier == 0);
  CHECK(res.violation->position_later == 1);
}

TEST_CASE("type R treats zeros as negative") {
  // indices 0 and 3 hold positives; 1 (a zero) and 2 share the negative class
  auto spec = make_explicit_prefix({R(1), R(0), R(-1), R(1)}, false);

  std::vector<std::uint64_t> ok = {3, 1, 2};  // only one positive consumed
  CHECK(is_type_r<Rational>(std::span<const std::uint64_t>(ok), spec).ok);

  // 2 before 1 descends within the negative class; if the zero counted as
  // positive this order would be fine
  std::vector<std::uint64_t> bad = {2, 1};
  auto res = is_type_r<Rational>(std::span<const std::uint64_t>(bad), spec);
  REQUIRE_FALSE(res.ok);
  CHECK(res.violation->position_earlier == 0);
  CHECK(res.violation->position_later == 1);
}

TEST_CASE("sandwich bounds hold on the identity rearrangement") {
  auto spec = make_square_blocks();
  std::vector<std::uint64_t> ident(40);
  std::iota(ident.begin(), ident.end(), 0);
  auto tr = manual_trace(spec, ident);
  REQUIRE(tr.max_block_number == 1);

  const auto d = decompose_blocks<Rational>(spec, 40);
  const auto rep = verify_sandwich(tr, d, 1);
  CHECK(rep.C == 1);
  CHECK(rep.failed == 0);
  CHECK(rep.unverifiable == 0);
  CHECK(rep.all_verifiable_pass);
  REQUIRE(!rep.rows.empty());

  // first negative block ends at index 1 (step 1): -1 <= 0 <= 0
  const auto& row = rep.rows.front();
  CHECK(row.i == 1);
  CHECK(row.step == 1);
  CHECK(row.permuted_partial == R(0));
  REQUIRE(row.lower.has_value());
  REQUIRE(row.upper.has_value());
  CHECK(*row.lower == R(-1));
  CHECK(*row.upper == R(0));
  CHECK(row.status == SandwichStatus::pass);
}

TEST_CASE("sandwich marks rows unverifiable past the horizon") {
  auto spec = make_square_blocks();
  std::vector<std::uint64_t> ident(40);
  std::iota(ident.begin(), ident.end(), 0);
  auto tr = manual_trace(spec, ident);
  const auto d = decompose_blocks<Rational>(spec, 40);

  const auto c_big = static_cast<std::uint32_t>(d.complete_count(BlockKind::positive) + 1);
  const auto rep = verify_sandwich(tr, d, c_big);
  CHECK(rep.passed == 0);
  CHECK(rep.failed == 0);
  CHECK(rep.unverifiable == rep.rows.size());
  CHECK(rep.all_verifiable_pass);  // vacuously
  for (const auto& row : rep.rows) {
    CHECK(row.lower.has_value());
    CHECK_FALSE(row.upper.has_value());
  }
}

TEST_CASE("sandwich rejects bad inputs") {
  auto spec = make_square_blocks();
  std::vector<std::uint64_t> ident(10);
  std::iota(ident.begin(), ident.end(), 0);
  auto tr = manual_trace(spec, ident);
  const auto d = decompose_blocks<Rational>(spec, 10);

  CHECK_THROWS_AS(verify_sandwich(tr, d, 0), std::invalid_argument);

  auto not_type_r = manual_trace(spec, {2, 0});
  CHECK_THROWS_AS(verify_sandwich(not_type_r, d, 1), std::invalid_argument);

  auto beyond = manual_trace(spec, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK_THROWS_AS(verify_sandwich(beyond, d, 1), std::invalid_argument);
}

TEST_CASE("sandwich catches a broken partial sum") {
  auto spec = make_square_blocks();
  std::vector<std::uint64_t> ident(12);
  std::iota(ident.begin(), ident.end(), 0);
  auto tr = manual_trace(spec, ident);
  const auto d = decompose_blocks<Rational>(spec, 12);

  // corrupt the partial at the step closing N_2 (index 3, step 3)
  tr.partials[3] = R(10);
  const auto rep = verify_sandwich(tr, d, 1);
  CHECK(rep.failed >= 1);
  CHECK_FALSE(rep.all_verifiable_pass);
}
