#pragma once

// Split codes whose global parities repair as cheaply as data nodes. The base
// code has alpha = g and r = g + 1: parity 1 is split into l locals, the other
// g parities become globals, and off-diagonal global substripes are mixed in
// pairs so that one surviving global carries half of what a lost one needs.

#include <cstdint>
#include <span>
#include <vector>

#include "htlrc/locality.hpp"
#include "htlrc/repair.hpp"

namespace htlrc {

/// For a < b, substripe a of global b and substripe b of global a become
///   new(a of b) = f1 * old(a of b) + f2 * old(b of a)
///   new(b of a) = f3 * old(a of b) + f4 * old(b of a)
struct MixEntry {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  Element f1 = 1, f2 = 0, f3 = 0, f4 = 1;

  friend bool operator==(const MixEntry&, const MixEntry&) = default;
};

struct GlobalLrcSpec {
  LrcSpec lrc;  // delta = 2, one global per substripe
  std::vector<MixEntry> mix;  // every pair a < b <= g, lexicographic

  std::uint32_t g() const noexcept { return lrc.alpha(); }
  std::uint32_t k() const noexcept { return lrc.k(); }
  std::uint32_t l() const noexcept { return lrc.config.l; }
  std::uint32_t n_prime() const noexcept { return lrc.n_prime(); }
  std::uint32_t global_node(std::uint32_t index) const noexcept {
    return k() + l() + index;
  }
  const MixEntry& pair(std::uint32_t a, std::uint32_t b) const;

  friend bool operator==(const GlobalLrcSpec&, const GlobalLrcSpec&) = default;
};

void validate(const GlobalLrcSpec& spec);

/// Base code by the relaxed scheduler, then mixing drawn from `seed`.
GlobalLrcSpec build_global_efficient_lrc(std::uint32_t k, std::uint32_t l,
                                         std::uint32_t g, Field field,
                                         std::uint64_t seed);

/// Same base, explicit mixing (identity, swaps, ...).
GlobalLrcSpec with_mix(const LrcSpec& lrc, std::vector<MixEntry> mix);

std::vector<MixEntry> identity_mix(std::uint32_t g);
std::vector<MixEntry> swap_mix(std::uint32_t g);

LinearCode to_linear_code(const GlobalLrcSpec& spec);

Stripe encode(const GlobalLrcSpec& spec, std::span<const NodeVector> data);

/// Replaces mixed global contents with the unmixed parities, in place.
void unmix(const GlobalLrcSpec& spec, Stripe& stripe);
void mix(const GlobalLrcSpec& spec, Stripe& stripe);

/// Repairs a global from row t of the data (plus appended symbols of row t)
/// and one mirrored substripe from every other global.
RepairPlan plan_global_node_repair(const GlobalLrcSpec& spec, std::uint32_t lost);

}  // namespace htlrc
