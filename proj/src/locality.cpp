#include "htlrc/locality.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

std::uint32_t LrcSpec::group_of(std::uint32_t data_node) const {
  require(data_node >= 1 && data_node <= base.k,
          fmt::format("node {} is not systematic", data_node));
  return (data_node - 1) / (base.k / config.l) + 1;
}

std::uint32_t LrcSpec::local_node(std::uint32_t source, std::uint32_t group) const {
  return base.k + (source - 1) * config.l + group;
}

std::uint32_t LrcSpec::global_node(std::uint32_t source) const {
  return base.k + static_cast<std::uint32_t>(locals.size()) + (source - config.delta) + 1;
}

void validate(const CodeSpec& base, LocalityConfig config) {
  require(config.l >= 1 && base.k % config.l == 0,
          fmt::format("l = {} must divide k = {}", config.l, base.k));
  require(config.delta >= 2 && config.delta <= base.r(),
          fmt::format("delta = {} must lie in [2, r = {}]", config.delta, base.r()));
}

LrcSpec split_parities(const CodeSpec& base, LocalityConfig config) {
  validate(base);
  validate(base, config);
  LrcSpec spec;
  spec.base = base;
  spec.config = config;
  const std::uint32_t size = base.k / config.l;
  for (std::uint32_t g = 0; g < config.l; ++g) {
    auto& grp = spec.groups.emplace_back();
    for (std::uint32_t u = 1; u <= size; ++u) grp.push_back(g * size + u);
  }
  for (std::uint32_t i = 1; i < config.delta; ++i)
    for (std::uint32_t g = 1; g <= config.l; ++g) spec.locals.push_back({i, g});
  for (std::uint32_t i = config.delta; i <= base.r(); ++i) spec.globals.push_back(i);
  return spec;
}

void validate(const LrcSpec& spec) {
  const LrcSpec fresh = split_parities(spec.base, spec.config);
  require(spec.groups == fresh.groups, "groups must be the contiguous split of the data nodes");
  require(spec.locals == fresh.locals, "local parities do not match the split layout");
  require(spec.globals == fresh.globals, "global parities do not match the split layout");
}

std::uint32_t lrc_dimensions(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                             std::uint32_t delta) {
  require(l >= 1 && k % l == 0 && delta >= 2 && delta <= n - k,
          fmt::format("invalid locality (l={}, delta={}) for ({},{})", l, delta, n, k));
  return n + l * (delta - 1) - delta + 1;
}

DistanceReport lrc_min_distance(std::uint32_t n_prime, std::uint32_t k,
                                std::uint32_t l, std::uint32_t delta) {
  require(l >= 1 && k % l == 0 && delta >= 2 && n_prime > k,
          "invalid locality parameters");
  auto clamp = [](std::int64_t v) { return static_cast<std::uint32_t>(std::max<std::int64_t>(v, 0)); };
  const std::int64_t n = n_prime, kk = k;
  const std::int64_t group = (kk + l - 1) / l;
  DistanceReport r;
  r.singleton = clamp(n - kk + 1);
  r.d_min = clamp(n - kk + 1 - (kk / l - 1) * (delta - 1));
  r.bound_general = clamp(n - kk + 1 - (group - 1) * (delta - 1));
  r.bound_delta2 = clamp(n - kk - group + 2);
  return r;
}

namespace {

std::vector<std::uint32_t> complement(std::uint32_t n, std::span<const std::uint32_t> gone) {
  std::vector<std::uint32_t> keep;
  for (std::uint32_t i = 1; i <= n; ++i)
    if (!std::binary_search(gone.begin(), gone.end(), i)) keep.push_back(i);
  return keep;
}

}  // namespace

std::vector<std::vector<std::uint32_t>> undecodable_patterns(const LinearCode& code,
                                                             std::uint32_t size) {
  std::vector<std::vector<std::uint32_t>> out;
  for_each_subset(code.n(), size, [&](std::span<const std::uint32_t> gone) {
    if (!decodable(code, complement(code.n(), gone))) out.emplace_back(gone.begin(), gone.end());
    return true;
  });
  return out;
}

ErasureCertificate certify_min_distance(const LinearCode& code,
                                        std::uint32_t max_erasures) {
  ErasureCertificate cert;
  for (std::uint32_t e = 1; e <= std::min(max_erasures, code.n()); ++e) {
    bool found = false;
    for_each_subset(code.n(), e, [&](std::span<const std::uint32_t> gone) {
      ++cert.patterns_checked;
      if (decodable(code, complement(code.n(), gone))) return true;
      cert.d_min = e;
      cert.witness.assign(gone.begin(), gone.end());
      found = true;
      return false;
    });
    if (found) return cert;
  }
  cert.d_min = std::min(max_erasures, code.n()) + 1;  // lower bound only
  return cert;
}

Functional local_equation(const LrcSpec& spec, LocalParity local, std::uint32_t row) {
  const Functional full = parity_equation(spec.base, local.source, row);
  const auto& grp = spec.groups[local.group - 1];
  Functional out;
  for (const Term& t : full) {
    const std::uint32_t node = t.var / spec.base.alpha + 1;
    if (std::find(grp.begin(), grp.end(), node) != grp.end()) out.push_back(t);
  }
  return out;
}

LinearCode to_linear_code(const LrcSpec& spec) {
  LinearCode code = systematic_code(spec.base.field, spec.base.k, spec.base.alpha);
  for (const LocalParity& lp : spec.locals) {
    std::vector<Functional> rows;
    for (std::uint32_t j = 1; j <= spec.base.alpha; ++j) rows.push_back(local_equation(spec, lp, j));
    const std::string name = spec.config.delta == 2
                                 ? fmt::format("l{}", lp.group)
                                 : fmt::format("l{}.{}", lp.source, lp.group);
    code.add_node(std::move(rows), name);
  }
  for (std::size_t g = 0; g < spec.globals.size(); ++g) {
    std::vector<Functional> rows;
    for (std::uint32_t j = 1; j <= spec.base.alpha; ++j)
      rows.push_back(parity_equation(spec.base, spec.globals[g], j));
    code.add_node(std::move(rows), fmt::format("g{}", g + 1));
  }
  return code;
}

Stripe encode_lrc(const LrcSpec& spec, std::span<const NodeVector> data) {
  return encode(to_linear_code(spec), data);
}

std::vector<NodeVector> decode_lrc(const LrcSpec& spec,
                                   std::span<const std::uint32_t> available,
                                   std::span<const NodeVector> contents) {
  return decode(to_linear_code(spec), available, contents);
}

RepairPlan plan_local_repair(const LrcSpec& spec, std::uint32_t lost) {
  require(lost >= 1 && lost <= spec.n_prime(),
          fmt::format("node {} out of range [1, {}]", lost, spec.n_prime()));
  require(!spec.is_global(lost),
          fmt::format("node {} is a global parity and belongs to no group", lost));
  const LinearCode code = to_linear_code(spec);

  std::uint32_t group = 0;
  std::vector<std::uint32_t> helpers;
  if (lost <= spec.k()) {
    group = spec.group_of(lost);
    helpers.push_back(spec.local_node(1, group));
  } else {
    group = spec.locals[lost - spec.k() - 1].group;
  }
  for (std::uint32_t u : spec.groups[group - 1])
    if (u != lost) helpers.push_back(u);

  std::vector<Cell> reads;
  for (std::uint32_t h : helpers)
    for (std::uint32_t j = 1; j <= spec.alpha(); ++j) reads.push_back({h, j});
  RepairPlan whole = plan_from_reads(code, lost, std::move(reads), PlanKind::local_group);
  if (lost > spec.k() || spec.config.delta == 2) return whole;

  // Several locals per group: try partial reads inside the group.
  std::vector<std::uint32_t> locals;
  for (std::uint32_t i = 1; i < spec.config.delta; ++i) locals.push_back(spec.local_node(i, group));
  RepairPlan partial = plan_row_set_repair(code, lost, locals);
  if (partial.fallback || partial.metrics.substripes >= whole.metrics.substripes) return whole;
  partial.kind = PlanKind::local_group;
  return partial;
}

RepairPlan plan_global_path_repair(const LrcSpec& spec, std::uint32_t lost) {
  return plan_global_path_repair(spec, to_linear_code(spec), lost);
}

RepairPlan plan_global_path_repair(const LrcSpec& spec, const LinearCode& code,
                                   std::uint32_t lost) {
  require(lost >= 1 && lost <= spec.k(),
          fmt::format("systematic node must be in [1, {}], got {}", spec.k(), lost));
  const std::uint32_t group = spec.group_of(lost);
  std::vector<std::uint32_t> eq_nodes;
  for (std::uint32_t i = 1; i < spec.config.delta; ++i) eq_nodes.push_back(spec.local_node(i, group));
  for (std::uint32_t i : spec.globals) eq_nodes.push_back(spec.global_node(i));
  RepairPlan plan = plan_row_set_repair(code, lost, eq_nodes);
  if (!plan.fallback) plan.kind = PlanKind::global_path;
  return plan;
}

}  // namespace htlrc
