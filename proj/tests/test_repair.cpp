#include <doctest.h>

#include <random>

#include "htlrc/errors.hpp"
#include "htlrc/repair.hpp"
#include "support.hpp"

using namespace htlrc;

TEST_CASE("any-k decode on the golden code") {
  const CodeSpec g = golden_9_6_code();
  const auto data = test::random_data(g.field, 6, 9, 4, 21);
  const Stripe s = encode(g, data);
  auto pick = [&](std::span<const std::uint32_t> nodes) {
    std::vector<NodeVector> c;
    for (auto n : nodes) c.push_back(s[n - 1]);
    return c;
  };
  const std::vector<std::uint32_t> systematic{1, 2, 3, 4, 5, 6};
  CHECK(decode_any_k(g, systematic, pick(systematic)) == data);
  const std::vector<std::uint32_t> mostly_parity{4, 5, 6, 7, 8, 9};
  CHECK(decode_any_k(g, mostly_parity, pick(mostly_parity)) == data);

  std::size_t recovered = 0, singular = 0;
  for_each_subset(9, 6, [&](std::span<const std::uint32_t> subset) {
    try {
      const auto out = decode_any_k(g, subset, pick(subset));
      CHECK(out == data);
      ++recovered;
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::singular);
      ++singular;
    }
    return true;
  });
  // matches the six singular subsets of the published coefficient set
  CHECK(recovered == 78);
  CHECK(singular == 6);

  CHECK_THROWS_AS(decode_any_k(g, std::vector<std::uint32_t>{1, 2, 3}, pick(std::vector<std::uint32_t>{1, 2, 3})), Error);
}

TEST_CASE("golden systematic repair reads 24 substripes") {
  const CodeSpec g = golden_9_6_code();
  const auto data = test::random_data(g.field, 6, 9, 8, 3);
  const Stripe s = encode(g, data);
  for (std::uint32_t j = 1; j <= 6; ++j) {
    CAPTURE(j);
    const RepairPlan plan = plan_systematic_repair(g, j);
    CHECK(plan.kind == PlanKind::row_set);
    CHECK_FALSE(plan.fallback);
    CHECK(plan.metrics.substripes == 24);
    CHECK(plan.metrics.gamma == Rational(8, 3));
    CHECK(plan.helpers() == 8);
    CHECK(plan.metrics.read_ops == (j <= 3 ? 8u : 24u));
    for (const auto& r : plan.reads) {
      CHECK(r.node != j);
      CHECK(r.rows.size() == 3);
    }
    CHECK(execute_repair(g.field, plan, stripe_provider(s, j)) == s[j - 1]);
  }
  const RepairPlan p1 = plan_systematic_repair(g, 1);
  for (const auto& r : p1.reads) CHECK(r.rows == std::vector<std::uint32_t>{1, 2, 3});
}

TEST_CASE("repair plan preconditions and provider failures") {
  const CodeSpec g = golden_9_6_code();
  CHECK_THROWS_AS(plan_systematic_repair(g, 0), Error);
  CHECK_THROWS_AS(plan_systematic_repair(g, 7), Error);
  CHECK_THROWS_AS(plan_parity_repair(g, 3), Error);

  const auto data = test::random_data(g.field, 6, 9, 2, 4);
  const Stripe s = encode(g, data);
  const RepairPlan plan = plan_systematic_repair(g, 2);

  SUBCASE("omitted read") {
    const ReadProvider base = stripe_provider(s, 2);
    ReadProvider holey = [&](std::uint32_t node, std::uint32_t row) {
      return node == 9 && row == 5 ? std::nullopt : base(node, row);
    };
    try {
      execute_repair(g.field, plan, holey);
      FAIL("expected missing read");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::missing_read);
    }
  }
  SUBCASE("corrupted substripe is caught by re-encode") {
    Stripe bad = s;
    bad[7].substripe(plan.reads[6].rows[0])[1] ^= 5;
    Stripe repaired = bad;
    repaired[1] = execute_repair(g.field, plan, stripe_provider(bad, 2));
    CHECK(repaired[1] != s[1]);
    CHECK_FALSE(reencode_matches(to_linear_code(g), repaired));

    Stripe good = s;
    good[1] = execute_repair(g.field, plan, stripe_provider(s, 2));
    CHECK(reencode_matches(to_linear_code(g), good));
  }
  SUBCASE("no read touches the lost node") {
    for (const auto& r : plan.reads) CHECK(r.node != 2);
    CHECK(stripe_provider(s, 2)(2, 1) == std::nullopt);
  }
}

TEST_CASE("redundant reads expose inconsistency") {
  // Whole-node plan with every survivor: more reads than unknowns.
  const CodeSpec g = make_code(6, 4, 2, Field::gf256(), 9);
  const LinearCode code = to_linear_code(g);
  std::vector<Cell> reads;
  for (std::uint32_t n = 2; n <= 6; ++n)
    for (std::uint32_t j = 1; j <= 2; ++j) reads.push_back({n, j});
  const RepairPlan plan = plan_from_reads(code, 1, reads, PlanKind::full_decode);
  REQUIRE_FALSE(plan.checks.empty());

  const auto data = test::random_data(g.field, 4, 2, 3, 1);
  Stripe s = encode(g, data);
  CHECK(execute_repair(g.field, plan, stripe_provider(s, 1), true) == s[0]);
  s[5].substripe(1)[0] ^= 1;
  try {
    execute_repair(g.field, plan, stripe_provider(s, 1), true);
    FAIL("expected inconsistency");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::inconsistent);
  }
}

TEST_CASE("parity repair of a plain code reads all data") {
  const CodeSpec g = golden_9_6_code();
  const auto data = test::random_data(g.field, 6, 9, 2, 6);
  const Stripe s = encode(g, data);
  for (std::uint32_t p = 7; p <= 9; ++p) {
    const RepairPlan plan = plan_repair(g, p);
    CHECK(plan.kind == PlanKind::full_decode);
    CHECK(plan.metrics.substripes == 54);
    CHECK(plan.metrics.read_ops == 6);
    CHECK(execute_repair(g.field, plan, stripe_provider(s, p)) == s[p - 1]);
  }
}

TEST_CASE("small alpha codes") {
  SUBCASE("(9,6) alpha 3 lands between the MSR point and a full decode") {
    const CodeSpec c = make_code(9, 6, 3, Field::gf256(), 2);
    const auto data = test::random_data(c.field, 6, 3, 4, 8);
    const Stripe s = encode(c, data);
    for (std::uint32_t j = 1; j <= 6; ++j) {
      const RepairPlan plan = plan_systematic_repair(c, j);
      CHECK(plan.metrics.gamma >= Rational(8, 3));
      CHECK(plan.metrics.gamma < Rational(6));
      CHECK(plan.metrics.gamma == Rational(10, 3));
      CHECK(execute_repair(c.field, plan, stripe_provider(s, j)) == s[j - 1]);
    }
  }
  SUBCASE("scalar code falls back to a full decode") {
    const CodeSpec c = make_code(9, 6, 1, Field::gf256(), 2);
    const RepairPlan plan = plan_systematic_repair(c, 3);
    CHECK(plan.fallback);
    CHECK(plan.kind == PlanKind::full_decode);
    CHECK(plan.metrics.substripes == 6);
  }
}

TEST_CASE("plan soundness over random codes") {
  std::mt19937_64 rng(77);
  const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t> shapes[] = {
      {6, 4, 2}, {6, 4, 4}, {8, 6, 2}, {8, 6, 4}, {8, 6, 8}, {9, 6, 3}, {8, 4, 4}};
  for (auto [n, k, a] : shapes) {
    for (int trial = 0; trial < 3; ++trial) {
      const CodeSpec c = make_code(n, k, a, Field::gf256(), rng());
      const auto data = test::random_data(c.field, k, a, 3, rng());
      const Stripe s = encode(c, data);
      for (std::uint32_t j = 1; j <= k; ++j) {
        CAPTURE(n); CAPTURE(k); CAPTURE(a); CAPTURE(j);
        const RepairPlan plan = plan_systematic_repair(c, j);
        CHECK(execute_repair(c.field, plan, stripe_provider(s, j)) == s[j - 1]);
        CHECK(plan.metrics.gamma >= msr_bound(n, k, Rational(k)));
      }
    }
  }
}

TEST_CASE("read-op accounting") {
  std::vector<NodeRead> reads{{2, {1, 2, 3}}, {3, {1, 3, 5}}};
  auto m = measure(reads, 9);
  CHECK(m.substripes == 6);
  CHECK(m.read_ops == 4);
  CHECK(m.gamma == Rational(2, 3));
  CHECK(m.bytes(1024) == 6 * 1024);

  SUBCASE("merging a gap never increases read ops") {
    auto merged = reads;
    merged[1].rows = {1, 2, 3, 5};
    CHECK(measure(merged, 9).read_ops <= m.read_ops);
  }
  SUBCASE("order within a node does not matter") {
    auto shuffled = reads;
    shuffled[1].rows = {5, 1, 3};
    const auto m2 = measure(shuffled, 9);
    CHECK(m2.read_ops == m.read_ops);
    CHECK(m2.substripes == m.substripes);
  }
}

TEST_CASE("bandwidth bounds") {
  CHECK(repair_bandwidth_bound(9, 6, 8, Rational(1)) == Rational(4, 9));
  CHECK(repair_bandwidth_bound(9, 6, 8, Rational(1)) == msr_bound(9, 6, Rational(1)));
  CHECK(repair_bandwidth_bound(9, 6, 6, Rational(7)) == Rational(7));
  for (std::uint32_t d = 6; d <= 8; ++d)
    CHECK(repair_bandwidth_bound(9, 6, d, Rational(1)) >= repair_bandwidth_bound(9, 6, 8, Rational(1)));
  CHECK(msr_bound(9, 6, Rational(6)) == Rational(8, 3));
  CHECK(msr_bound(7, 6, Rational(1)) == Rational(1));
  CHECK(msr_bound(5, 1, Rational(3)) == Rational(3));
  CHECK_THROWS_AS(repair_bandwidth_bound(9, 6, 5, Rational(1)), Error);
  CHECK_THROWS_AS(repair_bandwidth_bound(9, 6, 9, Rational(1)), Error);
  CHECK_THROWS_AS(msr_bound(6, 6, Rational(1)), Error);
}
