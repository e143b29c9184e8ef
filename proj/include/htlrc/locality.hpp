#pragma once

// Parity splitting: the first delta-1 parities of a HashTag code are each
// restricted to l groups of data nodes, giving l*(delta-1) local parities.
// Node order of a split code: data, locals (by source parity, then group),
// globals.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "htlrc/htcode.hpp"
#include "htlrc/linear_code.hpp"
#include "htlrc/repair.hpp"

namespace htlrc {

struct LocalityConfig {
  std::uint32_t l = 1;      // number of groups
  std::uint32_t delta = 2;  // local distance

  friend bool operator==(const LocalityConfig&, const LocalityConfig&) = default;
};

struct LocalParity {
  std::uint32_t source = 0;  // base parity index in [1, delta-1]
  std::uint32_t group = 0;   // 1-based

  friend bool operator==(const LocalParity&, const LocalParity&) = default;
};

struct LrcSpec {
  CodeSpec base;
  LocalityConfig config;
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<LocalParity> locals;
  std::vector<std::uint32_t> globals;  // base parity indices delta..r

  std::uint32_t k() const noexcept { return base.k; }
  std::uint32_t alpha() const noexcept { return base.alpha; }
  std::uint32_t n_prime() const noexcept {
    return base.k + static_cast<std::uint32_t>(locals.size() + globals.size());
  }
  std::uint32_t group_of(std::uint32_t data_node) const;
  std::uint32_t local_node(std::uint32_t source, std::uint32_t group) const;
  std::uint32_t global_node(std::uint32_t source) const;
  bool is_local(std::uint32_t node) const noexcept {
    return node > base.k && node <= base.k + locals.size();
  }
  bool is_global(std::uint32_t node) const noexcept {
    return node > base.k + locals.size() && node <= n_prime();
  }

  friend bool operator==(const LrcSpec&, const LrcSpec&) = default;
};

/// Throws when (l, delta) cannot split `base`.
void validate(const CodeSpec& base, LocalityConfig config);
void validate(const LrcSpec& spec);

LrcSpec split_parities(const CodeSpec& base, LocalityConfig config);

std::uint32_t lrc_dimensions(std::uint32_t n, std::uint32_t k, std::uint32_t l,
                             std::uint32_t delta);

/// Closed-form distance figures for a split code of length n'.
struct DistanceReport {
  std::uint32_t d_min = 0;          // n'-k+1-(k/l-1)(delta-1)
  std::uint32_t bound_general = 0;  // n'-k+1-(ceil(k/l)-1)(delta-1)
  std::uint32_t bound_delta2 = 0;   // n'-k-ceil(k/l)+2
  std::uint32_t singleton = 0;      // n'-k+1
};

DistanceReport lrc_min_distance(std::uint32_t n_prime, std::uint32_t k,
                                std::uint32_t l, std::uint32_t delta);

/// Measured distance: smallest erasure count with an undecodable pattern.
struct ErasureCertificate {
  std::uint32_t d_min = 0;
  std::vector<std::uint32_t> witness;  // an undecodable erasure pattern of size d_min
  std::uint64_t patterns_checked = 0;
};

/// Exhaustively tries erasure patterns of size 1, 2, ... up to max_erasures.
ErasureCertificate certify_min_distance(const LinearCode& code,
                                        std::uint32_t max_erasures);

/// Counts undecodable patterns among all erasures of exactly `size` nodes.
std::vector<std::vector<std::uint32_t>> undecodable_patterns(const LinearCode& code,
                                                             std::uint32_t size);

Functional local_equation(const LrcSpec& spec, LocalParity local, std::uint32_t row);

LinearCode to_linear_code(const LrcSpec& spec);

Stripe encode_lrc(const LrcSpec& spec, std::span<const NodeVector> data);

/// Recovers the data from whichever nodes survive.
std::vector<NodeVector> decode_lrc(const LrcSpec& spec,
                                   std::span<const std::uint32_t> available,
                                   std::span<const NodeVector> contents);

/// Whole-node repair inside one group. Systematic nodes read the rest of their
/// group plus the group's first local; a local is re-encoded from its group.
RepairPlan plan_local_repair(const LrcSpec& spec, std::uint32_t lost);

/// Row-set repair of a systematic node using its group's locals as stand-ins
/// for the split parities, together with the globals.
RepairPlan plan_global_path_repair(const LrcSpec& spec, std::uint32_t lost);
/// Same, on a code with this node layout whose globals were transformed.
RepairPlan plan_global_path_repair(const LrcSpec& spec, const LinearCode& code,
                                   std::uint32_t lost);

}  // namespace htlrc
