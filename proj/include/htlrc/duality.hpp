#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "htlrc/locality.hpp"
#include "htlrc/repair.hpp"

namespace htlrc {

/// Affine read cost: every read op pays a seek, every byte pays transfer time.
struct CostModel {
  double seek_time = 0;       // seconds per read op
  double transfer_rate = 0;   // bytes per second
  std::uint64_t substripe_size = 0;  // bytes
  double file_size = 0;       // bytes, informational

  /// Seek priced as the transfer of 9 KiB at `rate`.
  static CostModel calibrated(std::uint64_t substripe_size, double rate,
                              double file_size = 0);

  double price(const RepairMetrics& m) const;
};

void validate(const CostModel& model);

enum class Strategy { local, global };

const char* to_string(Strategy s) noexcept;

struct RepairDecision {
  Strategy chosen = Strategy::local;
  double local_cost = 0;
  double global_cost = 0;
  RepairPlan local_plan;
  RepairPlan global_plan;

  const RepairPlan& plan() const noexcept {
    return chosen == Strategy::local ? local_plan : global_plan;
  }
};

struct GammaBranches {
  Rational local;   // (M/k) (k/l + delta - 2) / (delta - 1)
  Rational global;  // (M/k) (n - 1) / (n - k)
  Rational min() const { return std::min(local, global); }
};

GammaBranches gamma_branches(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                             std::uint32_t delta, Rational file_size);

/// Minimum single-systematic-node repair bandwidth of a split code built from
/// an MSR (n, k) base.
Rational gamma_local_min(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                         std::uint32_t delta, Rational file_size);

/// Prices both repair paths of systematic node `lost`; ties go to local.
RepairDecision choose_repair(const LrcSpec& spec, std::uint32_t lost,
                             const CostModel& model);
RepairDecision decide(RepairPlan local, RepairPlan global, const CostModel& model);

struct CurveRow {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t l = 0;
  std::uint32_t delta = 0;
  GammaBranches gamma;
};

/// One row per (l, n) with n in [n_min, n_max] and n - k >= delta.
std::vector<CurveRow> bandwidth_curves(std::uint32_t k,
                                       std::span<const std::uint32_t> l_values,
                                       std::uint32_t delta, std::uint32_t n_min,
                                       std::uint32_t n_max,
                                       Rational file_size = Rational(1));

}  // namespace htlrc
