#pragma once

// One directory per stripe, one directory per node, one file per substripe:
//   <root>/<stripe-id>/node<j>/s<i>
//   <root>/<stripe-id>/manifest.json
// Keeping substripes in separate files makes every read op visible at the
// filesystem boundary.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "htlrc/repair.hpp"
#include "htlrc/serialize.hpp"

namespace htlrc {

/// Hex SHA-256 of a code spec's canonical JSON.
std::string spec_hash(const AnySpec& spec);

struct Manifest {
  std::string spec_hash;
  std::uint32_t n_prime = 0;
  std::uint32_t alpha = 0;
  std::uint64_t substripe_size = 0;  // bytes per file
  std::uint64_t payload_len = 0;     // field elements per substripe
  std::uint64_t original_size = 0;   // bytes of the user file

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Bytes needed for `count` elements of w bits, packed LSB first.
std::uint64_t packed_size(std::uint64_t count, unsigned w);
std::vector<std::uint8_t> pack(std::span<const Element> elements, unsigned w);
std::vector<Element> unpack(std::span<const std::uint8_t> bytes, std::uint64_t count, unsigned w);

/// Cuts a file into k nodes of alpha substripes (node-major), zero padded.
std::vector<NodeVector> split_file(std::span<const std::uint8_t> bytes, std::uint32_t k,
                                   std::uint32_t alpha, unsigned w);
std::vector<std::uint8_t> join_file(std::span<const NodeVector> data, unsigned w,
                                    std::uint64_t original_size);

struct ReadResult {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Element>> payloads;
  std::uint64_t substripes = 0;
  std::uint64_t read_ops = 0;  // contiguous runs of substripe files per node

  ReadProvider provider() const;
};

class StripeStore {
 public:
  StripeStore(std::filesystem::path root, std::string stripe_id);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path node_dir(std::uint32_t node) const;
  std::filesystem::path substripe_path(std::uint32_t node, std::uint32_t row) const;

  bool exists() const;
  Manifest manifest() const;
  /// Throws ErrorKind::verification when the stored hash differs.
  Manifest check_spec(const AnySpec& spec) const;

  Manifest write_stripe(const AnySpec& spec, const Stripe& stripe, std::uint64_t original_size);

  bool node_present(std::uint32_t node) const;
  void remove_node(std::uint32_t node);
  /// Writes a node into a fresh directory, swapped in by rename.
  void write_node(const AnySpec& spec, std::uint32_t node, const NodeVector& content);
  NodeVector read_node(const AnySpec& spec, std::uint32_t node) const;

  /// Reads the requested substripes. Asking for `lost` is a planner bug and throws.
  ReadResult read_substripes(const AnySpec& spec, std::span<const NodeRead> requests,
                             std::optional<std::uint32_t> lost = std::nullopt) const;

 private:
  std::vector<Element> read_file(std::uint32_t node, std::uint32_t row,
                                 const Manifest& m, unsigned w) const;

  std::filesystem::path dir_;
};

}  // namespace htlrc
