#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <boost/rational.hpp>

#include "htlrc/htcode.hpp"
#include "htlrc/linear_code.hpp"

namespace htlrc {

using Rational = boost::rational<std::int64_t>;

enum class PlanKind { row_set, full_decode, local_group, global_path, global_node };

const char* to_string(PlanKind kind) noexcept;

struct NodeRead {
  std::uint32_t node = 0;
  std::vector<std::uint32_t> rows;  // sorted, 1-based
};

struct ReadTerm {
  std::uint32_t node = 0;
  std::uint32_t row = 0;
  Element coef = 0;
};

/// target_row of the lost node = sum of coef * (read substripe).
struct RepairStep {
  std::uint32_t target_row = 0;
  std::vector<ReadTerm> terms;
};

struct RepairMetrics {
  std::uint64_t substripes = 0;
  std::uint64_t read_ops = 0;  // maximal contiguous row runs, summed over nodes
  Rational gamma;              // substripes / alpha, in node units

  std::uint64_t bytes(std::uint64_t substripe_size) const {
    return substripes * substripe_size;
  }
};

RepairMetrics measure(std::span<const NodeRead> reads, std::uint32_t alpha);

struct RepairPlan {
  std::uint32_t lost_node = 0;
  std::uint32_t alpha = 0;
  PlanKind kind = PlanKind::row_set;
  bool fallback = false;  // no cheaper plan existed; reads k whole nodes
  std::vector<NodeRead> reads;
  std::vector<RepairStep> steps;
  std::vector<std::vector<ReadTerm>> checks;  // combinations that must vanish
  RepairMetrics metrics;

  std::size_t helpers() const noexcept { return reads.size(); }
};

/// Solves the lost node from exactly `reads`; throws singular otherwise.
RepairPlan plan_from_reads(const LinearCode& code, std::uint32_t lost,
                           std::vector<Cell> reads, PlanKind kind);

/// Row-set repair of a systematic node from the given equation (parity) nodes.
/// Starts from the rows hosting the lost node's appended elements and grows
/// greedily until every substripe is solvable. Reads every data symbol the
/// chosen equations touch. Degrades to a whole-node decode when that is no
/// cheaper.
RepairPlan plan_row_set_repair(const LinearCode& code, std::uint32_t lost,
                               std::span<const std::uint32_t> equation_nodes);

/// Reads whole nodes: every other data node plus as many of `extra` (in order)
/// as needed to solve the lost node.
RepairPlan plan_whole_node_repair(const LinearCode& code, std::uint32_t lost,
                                  std::span<const std::uint32_t> extra,
                                  PlanKind kind);

/// Returns the substripe, or nullopt when the read cannot be served.
using ReadProvider =
    std::function<std::optional<std::vector<Element>>(std::uint32_t node, std::uint32_t row)>;

/// Serves reads from an in-memory stripe, refusing the lost node.
ReadProvider stripe_provider(const Stripe& stripe, std::uint32_t lost);

/// Fetches every planned read once and evaluates the schedule. With
/// `check` set, redundant reads are cross-checked and disagreement throws
/// ErrorKind::inconsistent.
NodeVector execute_repair(const Field& field, const RepairPlan& plan,
                          const ReadProvider& provider, bool check = false);

/// True when every non-data node matches a re-encode of the data nodes.
bool reencode_matches(const LinearCode& code, const Stripe& stripe);

std::vector<NodeVector> decode_any_k(const CodeSpec& spec,
                                     std::span<const std::uint32_t> available,
                                     std::span<const NodeVector> contents);

RepairPlan plan_systematic_repair(const CodeSpec& spec, std::uint32_t lost);

/// Parity nodes of a plain code are rebuilt from all k data nodes.
RepairPlan plan_parity_repair(const CodeSpec& spec, std::uint32_t lost);

RepairPlan plan_repair(const CodeSpec& spec, std::uint32_t lost);

/// (M/k) d / (d - k + 1) for k <= d <= n-1.
Rational repair_bandwidth_bound(std::uint32_t n, std::uint32_t k, std::uint32_t d,
                                Rational file_size);

/// (M/k) (n-1) / (n-k).
Rational msr_bound(std::uint32_t n, std::uint32_t k, Rational file_size);

}  // namespace htlrc
