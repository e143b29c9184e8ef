#include <doctest.h>

#include "htlrc/errors.hpp"
#include "htlrc/paths.hpp"
#include "support.hpp"

using namespace htlrc;

namespace {

// Every node, every request the code family allows: the plan must rebuild the node.
void check_all_paths(const AnySpec& spec, const Stripe& stripe, const CostModel& model) {
  const Field& f = base_of(spec).field;
  for (std::uint32_t lost = 1; lost <= stripe.size(); ++lost)
    for (PathRequest req : {PathRequest::local, PathRequest::global, PathRequest::automatic}) {
      CAPTURE(lost);
      PlannedRepair p;
      try {
        p = plan_path(spec, lost, req, model);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::validation);
        CHECK(req == PathRequest::local);
        continue;
      }
      CHECK(execute_repair(f, p.plan, stripe_provider(stripe, lost), true) == stripe[lost - 1]);
    }
}

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_path_request("auto") == PathRequest::automatic);
  CHECK(parse_path_request("local") == PathRequest::local);
  CHECK_THROWS_AS(parse_path_request("fast"), Error);
}

TEST_CASE("every node of every family is repairable") {
  const CostModel model = CostModel::calibrated(1024, 100e6);
  const CodeSpec golden = golden_9_6_code();
  const auto data = test::random_data(golden.field, 6, 9, 3, 1);
  check_all_paths(golden, encode(golden, data), model);

  const LrcSpec lrc = split_parities(golden, {2, 2});
  check_all_paths(lrc, encode_lrc(lrc, data), model);

  const auto g = build_global_efficient_lrc(4, 2, 3, Field::gf256(), 2);
  check_all_paths(g, encode(g, test::random_data(g.lrc.base.field, 4, 3, 3, 2)), model);
}

TEST_CASE("auto follows the cost model") {
  const LrcSpec lrc = split_parities(golden_9_6_code(), {2, 2});
  const auto small = plan_path(lrc, 1, PathRequest::automatic, CostModel::calibrated(1024, 100e6));
  REQUIRE(small.decision);
  CHECK(small.strategy == Strategy::local);
  CHECK(small.plan.metrics.read_ops == 3);
  CHECK(small.plan.metrics.bytes(1024) == 27 * 1024);

  const std::uint64_t mb10 = 10ull << 20;
  const auto large = plan_path(lrc, 1, PathRequest::automatic, CostModel::calibrated(mb10, 100e6));
  CHECK(large.strategy == Strategy::global);
  CHECK(large.plan.metrics.bytes(mb10) == 24 * mb10);
  CHECK(large.decision->local_plan.metrics.bytes(mb10) == 27 * mb10);
}

TEST_CASE("mixed globals use the mirrored-substripe plan") {
  const auto g = build_global_efficient_lrc(4, 2, 2, Field::gf256(), 1);
  const auto p = plan_path(g, g.global_node(1), PathRequest::automatic, CostModel::calibrated(1, 1));
  CHECK(p.plan.kind == PlanKind::global_node);
  const LrcSpec plain = g.lrc;
  CHECK(plan_path(plain, g.global_node(1), PathRequest::global, CostModel::calibrated(1, 1)).plan.kind ==
        PlanKind::full_decode);
}
