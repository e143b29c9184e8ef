#include "htlrc/duality.hpp"

#include <cmath>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

CostModel CostModel::calibrated(std::uint64_t substripe_size, double rate,
                                double file_size) {
  return {9.0 * 1024.0 / rate, rate, substripe_size, file_size};
}

void validate(const CostModel& model) {
  require(std::isfinite(model.seek_time) && model.seek_time >= 0,
          "seek time must be finite and non-negative");
  require(std::isfinite(model.transfer_rate) && model.transfer_rate > 0,
          "transfer rate must be positive");
  require(model.substripe_size > 0, "substripe size must be positive");
}

double CostModel::price(const RepairMetrics& m) const {
  return static_cast<double>(m.read_ops) * seek_time +
         static_cast<double>(m.bytes(substripe_size)) / transfer_rate;
}

const char* to_string(Strategy s) noexcept {
  return s == Strategy::local ? "local" : "global";
}

GammaBranches gamma_branches(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                             std::uint32_t delta, Rational file_size) {
  require(k >= 1 && n > k, fmt::format("need n > k >= 1, got ({},{})", n, k));
  require(l >= 1 && k % l == 0, fmt::format("l = {} must divide k = {}", l, k));
  require(delta >= 2, fmt::format("delta must be at least 2, got {}", delta));
  const Rational per_node = file_size / static_cast<std::int64_t>(k);
  return {per_node * Rational(k / l + delta - 2, delta - 1),
          per_node * Rational(n - 1, n - k)};
}

Rational gamma_local_min(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                         std::uint32_t delta, Rational file_size) {
  return gamma_branches(n, k, l, delta, file_size).min();
}

RepairDecision choose_repair(const LrcSpec& spec, std::uint32_t lost,
                             const CostModel& model) {
  return decide(plan_local_repair(spec, lost), plan_global_path_repair(spec, lost), model);
}

RepairDecision decide(RepairPlan local, RepairPlan global, const CostModel& model) {
  validate(model);
  RepairDecision d;
  d.local_plan = std::move(local);
  d.global_plan = std::move(global);
  d.local_cost = model.price(d.local_plan.metrics);
  d.global_cost = model.price(d.global_plan.metrics);
  d.chosen = d.global_cost < d.local_cost ? Strategy::global : Strategy::local;
  return d;
}

std::vector<CurveRow> bandwidth_curves(std::uint32_t k,
                                       std::span<const std::uint32_t> l_values,
                                       std::uint32_t delta, std::uint32_t n_min,
                                       std::uint32_t n_max, Rational file_size) {
  require(n_min <= n_max, "empty n range");
  std::vector<CurveRow> rows;
  for (std::uint32_t l : l_values)
    for (std::uint32_t n = std::max(n_min, k + delta); n <= n_max; ++n)
      rows.push_back({n, k, l, delta, gamma_branches(n, k, l, delta, file_size)});
  return rows;
}

}  // namespace htlrc
