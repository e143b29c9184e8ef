#pragma once

// HashTag vector MDS codes: index-array scheduling, coefficient assignment,
// encoding and MDS verification.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "htlrc/galois.hpp"
#include "htlrc/linear_code.hpp"

namespace htlrc {

/// (row, node) of a data element; (0,0) marks an unassigned appended slot.
struct IndexPair {
  std::uint32_t row = 0;
  std::uint32_t node = 0;

  bool empty() const noexcept { return row == 0 && node == 0; }
  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

/// alpha rows; row j holds (j,1)..(j,k) followed by the appended columns.
using IndexArray = std::vector<std::vector<IndexPair>>;

enum class Schedule {
  strict,   // r | k, r | alpha (or alpha = 1), alpha <= r^ceil(k/r)
  relaxed,  // any alpha; used when r does not divide alpha
};

std::uint32_t appended_columns(std::uint32_t k, std::uint32_t r);

/// P_1..P_r for an (n, k) code with sub-packetization alpha.
std::vector<IndexArray> build_index_arrays(std::uint32_t n, std::uint32_t k,
                                           std::uint32_t alpha,
                                           Schedule mode = Schedule::strict);

/// Throws when the arrays break the shape or uniqueness rules.
void validate_index_arrays(std::span<const IndexArray> arrays, std::uint32_t k,
                           std::uint32_t alpha);

struct CodeSpec {
  std::uint32_t n = 0;
  std::uint32_t k = 0;
  std::uint32_t alpha = 0;
  Field field = Field::gf32();
  std::vector<IndexArray> arrays;
  // coeffs[i][row][col], zero exactly where arrays[i][row][col] is empty
  std::vector<std::vector<std::vector<Element>>> coeffs;
  std::uint64_t seed = 0;

  std::uint32_t r() const noexcept { return n - k; }

  /// Coefficient of data element (row, node) in parity i row j, or 0.
  Element coefficient(std::uint32_t i, std::uint32_t j, IndexPair p) const;

  friend bool operator==(const CodeSpec&, const CodeSpec&) = default;
};

/// Throws on any structural problem, including zero coefficients in used slots.
void validate(const CodeSpec& spec);

struct VerifyMode {
  enum class Kind { exhaustive, sampled } kind = Kind::exhaustive;
  std::uint32_t samples = 0;
  std::uint64_t seed = 1;

  static VerifyMode exhaustive() { return {}; }
  static VerifyMode sampled(std::uint32_t t, std::uint64_t seed = 1) {
    return {Kind::sampled, t, seed};
  }
};

struct MdsReport {
  std::uint64_t checked = 0;
  std::vector<std::vector<std::uint32_t>> failing;
  bool ok() const noexcept { return failing.empty(); }
};

/// Checks that every (or t random) size-k node subsets determine the data.
MdsReport verify_mds(const LinearCode& code, VerifyMode mode);
MdsReport verify_mds(const CodeSpec& spec, VerifyMode mode);

/// Exhaustive when C(n,k) subset checks are cheap, otherwise sampled.
VerifyMode default_verify_mode(std::uint32_t n, std::uint32_t k, std::uint32_t alpha);

/// Maps (attempt seed, raw 64-bit draw) to a coefficient. Must return nonzero.
using CoefficientSource = std::function<Element(std::uint64_t, std::uint64_t)>;

struct AssignOptions {
  std::optional<VerifyMode> verify;  // default_verify_mode when unset
  std::uint32_t retry_cap = 64;
  CoefficientSource source;          // uniform nonzero when unset
};

/// Draws nonzero coefficients from seed, seed+1, ... until verify_mds passes.
CodeSpec assign_coefficients(std::vector<IndexArray> arrays, std::uint32_t n,
                             std::uint32_t k, std::uint32_t alpha, Field field,
                             std::uint64_t seed, const AssignOptions& opts = {});

/// Scheduler plus coefficient assignment in one call.
CodeSpec make_code(std::uint32_t n, std::uint32_t k, std::uint32_t alpha,
                   Field field, std::uint64_t seed,
                   Schedule mode = Schedule::strict);

/// The (9,6), alpha = 9 code over GF(32) with the published coefficients.
CodeSpec golden_9_6_code();

/// Parity node i's equation for row j as a functional over the data.
Functional parity_equation(const CodeSpec& spec, std::uint32_t i, std::uint32_t j);

LinearCode to_linear_code(const CodeSpec& spec);

Stripe encode(const CodeSpec& spec, std::span<const NodeVector> data);
Matrix generator_matrix(const CodeSpec& spec);

}  // namespace htlrc
