#pragma once

// Common representation shared by every code family in the library: each
// substripe of each node is a linear functional over the k*alpha data
// symbols. Encoding, decoding, generator export and repair planning all work
// on this form, so HashTag, split (LRC) and mixed-global codes need no
// per-family decoder.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "htlrc/galois.hpp"

namespace htlrc {

/// One substripe address. Both indices are 1-based.
struct Cell {
  std::uint32_t node = 0;
  std::uint32_t row = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Term {
  std::uint32_t var = 0;  // (node - 1) * alpha + (row - 1), data nodes only
  Element coef = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse functional, sorted by var, no zero coefficients.
using Functional = std::vector<Term>;

/// Adds `scale * src` into `dst`, keeping `dst` canonical.
void accumulate(const Field& f, Functional& dst, const Functional& src,
                Element scale = 1);

/// alpha substripes of `payload_len` field elements each.
class NodeVector {
 public:
  NodeVector() = default;
  NodeVector(std::uint32_t alpha, std::size_t payload_len)
      : alpha_(alpha), payload_len_(payload_len), data_(alpha * payload_len, 0) {}

  std::uint32_t alpha() const noexcept { return alpha_; }
  std::size_t payload_len() const noexcept { return payload_len_; }

  std::span<Element> substripe(std::uint32_t row) {
    return {data_.data() + (row - 1) * payload_len_, payload_len_};
  }
  std::span<const Element> substripe(std::uint32_t row) const {
    return {data_.data() + (row - 1) * payload_len_, payload_len_};
  }

  std::vector<Element>& raw() noexcept { return data_; }
  const std::vector<Element>& raw() const noexcept { return data_; }

  friend bool operator==(const NodeVector&, const NodeVector&) = default;

 private:
  std::uint32_t alpha_ = 0;
  std::size_t payload_len_ = 0;
  std::vector<Element> data_;
};

/// n nodes; the first k are systematic.
using Stripe = std::vector<NodeVector>;

struct LinearCode {
  Field field;
  std::uint32_t k = 0;
  std::uint32_t alpha = 0;
  std::vector<std::vector<Functional>> nodes;  // [node - 1][row - 1]
  std::vector<std::string> names;              // display labels, e.g. "x1", "l2"

  LinearCode(Field f, std::uint32_t k_, std::uint32_t alpha_);

  std::uint32_t n() const { return static_cast<std::uint32_t>(nodes.size()); }
  std::uint32_t dimension() const { return k * alpha; }
  std::uint32_t var(std::uint32_t node, std::uint32_t row) const {
    return (node - 1) * alpha + (row - 1);
  }
  Cell cell_of(std::uint32_t var) const {
    return {var / alpha + 1, var % alpha + 1};
  }
  const Functional& at(std::uint32_t node, std::uint32_t row) const {
    return nodes[node - 1][row - 1];
  }
  bool is_data(std::uint32_t node) const { return node >= 1 && node <= k; }

  /// Appends a parity node; returns its 1-based index.
  std::uint32_t add_node(std::vector<Functional> rows, std::string name);
};

/// Builds a code with the k systematic nodes already present.
LinearCode systematic_code(Field f, std::uint32_t k, std::uint32_t alpha);

/// Throws on shape mismatch (wrong count, alpha, or non-uniform payload).
void check_data_shape(const LinearCode& code, std::span<const NodeVector> data);

Stripe encode(const LinearCode& code, std::span<const NodeVector> data);

/// Scalar generator matrix, K x (alpha n), thick column i = node i.
Matrix generator_matrix(const LinearCode& code);

/// True when the listed nodes determine all data (restricted G has rank K).
bool decodable(const LinearCode& code, std::span<const std::uint32_t> nodes);

/// Recovers the k data nodes from the listed nodes' contents.
/// Throws ErrorKind::singular when the nodes do not determine the data.
std::vector<NodeVector> decode(const LinearCode& code,
                               std::span<const std::uint32_t> nodes,
                               std::span<const NodeVector> contents);

using Weights = std::vector<std::pair<std::size_t, Element>>;

/// Expresses each target functional as a combination of the read cells.
struct SpanSolution {
  std::vector<std::optional<Weights>> targets;  // index into reads
  std::vector<Weights> relations;  // combinations of reads that vanish
  bool all_solved() const;
};

SpanSolution span_solve(const LinearCode& code, std::span<const Cell> reads,
                        std::span<const Functional> targets);

/// Calls fn(subset) for every size-m subset of {1..n} in lexicographic order;
/// stops early when fn returns false.
template <typename Fn>
void for_each_subset(std::uint32_t n, std::uint32_t m, Fn&& fn) {
  if (m > n) return;
  std::vector<std::uint32_t> s(m);
  for (std::uint32_t i = 0; i < m; ++i) s[i] = i + 1;
  while (true) {
    if (!fn(std::span<const std::uint32_t>(s))) return;
    std::uint32_t i = m;
    while (i > 0 && s[i - 1] == n - m + i) --i;
    if (i == 0) return;
    ++s[i - 1];
    for (std::uint32_t j = i; j < m; ++j) s[j] = s[j - 1] + 1;
  }
}

/// The functional of a single data symbol.
inline Functional unit(std::uint32_t var) { return {Term{var, 1}}; }

}  // namespace htlrc
