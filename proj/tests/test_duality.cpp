#include <doctest.h>

#include <random>

#include "htlrc/duality.hpp"
#include "htlrc/errors.hpp"
#include "support.hpp"

using namespace htlrc;

TEST_CASE("gamma_local_min values") {
  const Rational mb(540);
  CHECK(gamma_local_min(9, 6, 2, 2, mb) == Rational(240));
  CHECK(gamma_branches(9, 6, 2, 2, mb).local == Rational(270));
  CHECK(gamma_local_min(10, 8, 4, 2, Rational(1)) == Rational(1, 4));
  CHECK(gamma_local_min(10, 8, 2, 3, Rational(1)) == Rational(5, 16));
  CHECK(gamma_local_min(10, 8, 4, 3, Rational(1)) == Rational(3, 16));
  CHECK(gamma_local_min(10, 8, 2, 2, Rational(1)) == Rational(1, 2));
  CHECK_THROWS_AS(gamma_local_min(10, 8, 3, 2, Rational(1)), Error);
  CHECK_THROWS_AS(gamma_local_min(8, 8, 2, 2, Rational(1)), Error);
  CHECK_THROWS_AS(gamma_local_min(10, 8, 2, 1, Rational(1)), Error);
}

TEST_CASE("local branch is monotone in l and delta") {
  for (std::uint32_t k = 2; k <= 24; ++k)
    for (std::uint32_t l = 1; l <= k; ++l) {
      if (k % l) continue;
      for (std::uint32_t delta = 2; delta <= 6; ++delta) {
        const Rational here = gamma_branches(k + 8, k, l, delta, Rational(1)).local;
        CHECK(gamma_branches(k + 8, k, l, delta + 1, Rational(1)).local <= here);
        for (std::uint32_t l2 = l + 1; l2 <= k; ++l2)
          if (k % l2 == 0) CHECK(gamma_branches(k + 8, k, l2, delta, Rational(1)).local <= here);
      }
    }
}

TEST_CASE("bandwidth curves") {
  const std::uint32_t ls[] = {2, 4};
  const auto rows = bandwidth_curves(8, ls, 2, 9, 16);
  CHECK(rows.size() == 14);  // n = 10..16 for each l
  for (const auto& r : rows) {
    CHECK(r.n >= 10);
    CHECK(r.gamma.local == (r.l == 2 ? Rational(1, 2) : Rational(1, 4)));
    CHECK(r.gamma.global == Rational(r.n - 1, 8 * (r.n - 8)));
    CHECK(r.gamma.min() == std::min(r.gamma.local, r.gamma.global));
  }
  SUBCASE("k = 12, l = 6 flat value") {
    const std::uint32_t six[] = {6};
    for (const auto& r : bandwidth_curves(12, six, 2, 14, 30)) {
      CHECK(r.gamma.local == Rational(1, 6));
      if (r.gamma.global >= r.gamma.local) CHECK(r.gamma.min() == Rational(1, 6));
    }
    // a (14,12) instance split into six pairs: two whole nodes of twelve
    const LrcSpec spec = split_parities(make_code(14, 12, 2, Field::gf256(), 1), {6, 2});
    const RepairPlan p = plan_local_repair(spec, 5);
    CHECK(p.metrics.gamma / 12 == Rational(1, 6));
  }
  SUBCASE("local branch is constant in n") {
    const std::uint32_t two[] = {2};
    const auto c = bandwidth_curves(8, two, 3, 11, 200);
    for (const auto& r : c) CHECK(r.gamma.local == c.front().gamma.local);
  }
}

TEST_CASE("choose_repair reproduces the small and large file cases") {
  const LrcSpec spec = split_parities(golden_9_6_code(), {2, 2});
  const double rate = 100e6;

  const RepairDecision small = choose_repair(spec, 1, CostModel::calibrated(1024, rate));
  CHECK(small.chosen == Strategy::local);
  CHECK(small.plan().metrics.read_ops == 3);
  CHECK(small.plan().metrics.bytes(1024) == 27 * 1024);
  CHECK(small.global_plan.metrics.bytes(1024) == 24 * 1024);

  const std::uint64_t ten_mb = 10'000'000;
  const RepairDecision big = choose_repair(spec, 1, CostModel::calibrated(ten_mb, rate));
  CHECK(big.chosen == Strategy::global);
  CHECK(big.plan().metrics.bytes(ten_mb) == 240'000'000);
  CHECK(big.local_plan.metrics.bytes(ten_mb) == 270'000'000);
}

TEST_CASE("decision consistency") {
  const LrcSpec spec = split_parities(golden_9_6_code(), {2, 2});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> seek(0.0, 0.05), rate(1e6, 1e10), scale(0.1, 10);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint32_t lost = 1 + static_cast<std::uint32_t>(rng() % 6);
    CostModel m{seek(rng), rate(rng), 1 + rng() % 20'000'000, 0};
    const RepairDecision d = choose_repair(spec, lost, m);
    CHECK(d.local_cost == doctest::Approx(m.price(d.local_plan.metrics)));
    CHECK((d.chosen == Strategy::local) == (d.local_cost <= d.global_cost));

    const double s = scale(rng);
    CostModel scaled = m;
    scaled.seek_time *= s;
    scaled.transfer_rate /= s;
    CHECK(choose_repair(spec, lost, scaled).chosen == d.chosen);
  }
  SUBCASE("transfer-only limit follows substripe counts") {
    const CostModel m{0.0, 1e8, 4096, 0};
    for (std::uint32_t lost = 1; lost <= 6; ++lost) {
      const RepairDecision d = choose_repair(spec, lost, m);
      CHECK(d.chosen == (d.global_plan.metrics.substripes < d.local_plan.metrics.substripes
                             ? Strategy::global
                             : Strategy::local));
    }
  }
  CHECK_THROWS_AS(choose_repair(spec, 1, CostModel{0.1, 0, 10, 0}), Error);
}

TEST_CASE("measured gammas follow both branches") {
  // MSR bases: alpha = r^(k/r)
  const std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t> cases[] = {
      {6, 4, 4, 2}, {8, 6, 8, 2}, {8, 6, 8, 3}, {9, 6, 9, 2}, {9, 6, 9, 3}, {8, 4, 4, 2}};
  for (auto [n, k, a, l] : cases) {
    CAPTURE(n); CAPTURE(k); CAPTURE(l);
    const CodeSpec base = make_code(n, k, a, Field::gf256(), 17);
    const LrcSpec spec = split_parities(base, {l, 2});
    const auto data = test::random_data(base.field, k, a, 2, 5);
    const Stripe s = encode_lrc(spec, data);
    const GammaBranches g = gamma_branches(n, k, l, 2, Rational(k));
    for (std::uint32_t lost = 1; lost <= k; ++lost) {
      const RepairPlan gp = plan_global_path_repair(spec, lost);
      const RepairPlan lp = plan_local_repair(spec, lost);
      CHECK(gp.metrics.gamma == g.global);
      CHECK(lp.metrics.gamma == g.local);
      CHECK(execute_repair(base.field, gp, stripe_provider(s, lost)) == s[lost - 1]);
    }
  }
}

TEST_CASE("delta 3 local repair stays within the group") {
  const CodeSpec base = make_code(10, 6, 4, Field::gf256(), 3, Schedule::relaxed);
  const LrcSpec spec = split_parities(base, {2, 3});
  const auto data = test::random_data(base.field, 6, 4, 2, 1);
  const Stripe s = encode_lrc(spec, data);
  const GammaBranches g = gamma_branches(10, 6, 2, 3, Rational(6));
  for (std::uint32_t lost = 1; lost <= 6; ++lost) {
    const RepairPlan p = plan_local_repair(spec, lost);
    CHECK(p.metrics.gamma >= g.local);
    CHECK(p.metrics.gamma <= Rational(3));
    for (const auto& r : p.reads) {
      const bool in_group = r.node <= 6 ? spec.group_of(r.node) == spec.group_of(lost)
                                        : spec.is_local(r.node);
      CHECK(in_group);
    }
    CHECK(execute_repair(base.field, p, stripe_provider(s, lost)) == s[lost - 1]);
  }
}
