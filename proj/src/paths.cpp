#include "htlrc/paths.hpp"

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

PathRequest parse_path_request(const std::string& text) {
  if (text == "local") return PathRequest::local;
  if (text == "global") return PathRequest::global;
  if (text == "auto") return PathRequest::automatic;
  fail(ErrorKind::validation, fmt::format("unknown strategy '{}' (local|global|auto)", text));
}

namespace {

PlannedRepair split_code_path(const LrcSpec& lrc, const LinearCode& code,
                              const GlobalLrcSpec* mixed, std::uint32_t lost,
                              PathRequest request, const CostModel& model) {
  require(lost >= 1 && lost <= lrc.n_prime(),
          fmt::format("node {} out of range 1..{}", lost, lrc.n_prime()));
  if (lrc.is_global(lost)) {
    require(request != PathRequest::local,
            fmt::format("node {} is a global parity and has no local path", lost));
    if (mixed) return {plan_global_node_repair(*mixed, lost), Strategy::global, std::nullopt};
    return {plan_whole_node_repair(code, lost, {}, PlanKind::full_decode), Strategy::global,
            std::nullopt};
  }
  if (lrc.is_local(lost)) {
    if (request == PathRequest::global)
      return {plan_whole_node_repair(code, lost, {}, PlanKind::full_decode), Strategy::global,
              std::nullopt};
    return {plan_local_repair(lrc, lost), Strategy::local, std::nullopt};
  }
  switch (request) {
    case PathRequest::local:
      return {plan_local_repair(lrc, lost), Strategy::local, std::nullopt};
    case PathRequest::global:
      return {plan_global_path_repair(lrc, code, lost), Strategy::global, std::nullopt};
    case PathRequest::automatic:
      break;
  }
  RepairDecision d =
      decide(plan_local_repair(lrc, lost), plan_global_path_repair(lrc, code, lost), model);
  PlannedRepair out{d.plan(), d.chosen, std::nullopt};
  out.decision = std::move(d);
  return out;
}

}  // namespace

PlannedRepair plan_path(const AnySpec& spec, std::uint32_t lost, PathRequest request,
                        const CostModel& model) {
  if (const auto* c = std::get_if<CodeSpec>(&spec)) {
    require(request != PathRequest::local, "a code without local parities has no local path");
    require(lost >= 1 && lost <= c->n, fmt::format("node {} out of range 1..{}", lost, c->n));
    return {plan_repair(*c, lost), Strategy::global, std::nullopt};
  }
  if (const auto* l = std::get_if<LrcSpec>(&spec))
    return split_code_path(*l, to_linear_code(*l), nullptr, lost, request, model);
  const auto& g = std::get<GlobalLrcSpec>(spec);
  return split_code_path(g.lrc, to_linear_code(g), &g, lost, request, model);
}

}  // namespace htlrc
