#pragma once

// Picks a repair plan for any node of any stored code family.

#include <cstdint>
#include <optional>

#include "htlrc/duality.hpp"
#include "htlrc/serialize.hpp"

namespace htlrc {

enum class PathRequest { local, global, automatic };

PathRequest parse_path_request(const std::string& text);

struct PlannedRepair {
  RepairPlan plan;
  Strategy strategy = Strategy::global;
  std::optional<RepairDecision> decision;  // set when both paths were priced
};

/// Plain codes only have the global path. Split codes offer both paths for
/// systematic nodes; parities are rebuilt within their group (locals) or from
/// the data (globals, or the mirrored-substripe plan for mixed globals).
PlannedRepair plan_path(const AnySpec& spec, std::uint32_t lost, PathRequest request,
                        const CostModel& model);

}  // namespace htlrc
