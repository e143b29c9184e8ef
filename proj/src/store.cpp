#include "htlrc/store.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "htlrc/errors.hpp"

namespace fs = std::filesystem;

namespace htlrc {

std::string spec_hash(const AnySpec& spec) {
  const std::string text = canonical(to_json(spec));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::io, "sha256 failed");
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::uint64_t packed_size(std::uint64_t count, unsigned w) { return (count * w + 7) / 8; }

std::vector<std::uint8_t> pack(std::span<const Element> elements, unsigned w) {
  std::vector<std::uint8_t> out(packed_size(elements.size(), w), 0);
  std::uint64_t bit = 0;
  for (Element e : elements)
    for (unsigned b = 0; b < w; ++b, ++bit)
      if ((e >> b) & 1u) out[bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
  return out;
}

std::vector<Element> unpack(std::span<const std::uint8_t> bytes, std::uint64_t count, unsigned w) {
  std::vector<Element> out(count, 0);
  std::uint64_t bit = 0;
  for (auto& e : out)
    for (unsigned b = 0; b < w; ++b, ++bit)
      if (bit / 8 < bytes.size() && ((bytes[bit / 8] >> (bit % 8)) & 1u))
        e = static_cast<Element>(e | (1u << b));
  return out;
}

std::vector<NodeVector> split_file(std::span<const std::uint8_t> bytes, std::uint32_t k,
                                   std::uint32_t alpha, unsigned w) {
  const std::uint64_t symbols = (bytes.size() * 8 + w - 1) / w;
  const std::uint64_t cells = static_cast<std::uint64_t>(k) * alpha;
  const std::uint64_t len = std::max<std::uint64_t>(1, (symbols + cells - 1) / cells);
  const auto all = unpack(bytes, len * cells, w);
  std::vector<NodeVector> data;
  for (std::uint32_t u = 0; u < k; ++u) {
    NodeVector nv(alpha, len);
    std::copy_n(all.begin() + static_cast<std::ptrdiff_t>(u * alpha * len), alpha * len,
                nv.raw().begin());
    data.push_back(std::move(nv));
  }
  return data;
}

std::vector<std::uint8_t> join_file(std::span<const NodeVector> data, unsigned w,
                                    std::uint64_t original_size) {
  std::vector<Element> all;
  for (const auto& nv : data) all.insert(all.end(), nv.raw().begin(), nv.raw().end());
  auto bytes = pack(all, w);
  require(bytes.size() >= original_size, "stored data is shorter than the original file");
  bytes.resize(original_size);
  return bytes;
}

ReadProvider ReadResult::provider() const {
  return [this](std::uint32_t node, std::uint32_t row) -> std::optional<std::vector<Element>> {
    auto it = payloads.find({node, row});
    if (it == payloads.end()) return std::nullopt;
    return it->second;
  };
}

namespace {

void write_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", tmp.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, fmt::format("write to {} failed", tmp.string()));
  }
  fs::rename(tmp, path);
}

Json manifest_json(const Manifest& m) {
  return {{"spec_hash", m.spec_hash},         {"n_prime", m.n_prime},
          {"alpha", m.alpha},                 {"substripe_size", m.substripe_size},
          {"payload_len", m.payload_len},     {"original_size", m.original_size}};
}

std::uint32_t node_count(const AnySpec& spec) {
  return to_linear_code(spec).n();
}

}  // namespace

StripeStore::StripeStore(fs::path root, std::string stripe_id)
    : dir_(std::move(root) / std::move(stripe_id)) {}

fs::path StripeStore::node_dir(std::uint32_t node) const {
  return dir_ / fmt::format("node{}", node);
}

fs::path StripeStore::substripe_path(std::uint32_t node, std::uint32_t row) const {
  return node_dir(node) / fmt::format("s{}", row);
}

bool StripeStore::exists() const { return fs::exists(dir_ / "manifest.json"); }

Manifest StripeStore::manifest() const {
  const Json j = read_json_file(dir_ / "manifest.json");
  try {
    Manifest m;
    m.spec_hash = j.at("spec_hash").get<std::string>();
    m.n_prime = j.at("n_prime").get<std::uint32_t>();
    m.alpha = j.at("alpha").get<std::uint32_t>();
    m.substripe_size = j.at("substripe_size").get<std::uint64_t>();
    m.payload_len = j.at("payload_len").get<std::uint64_t>();
    m.original_size = j.at("original_size").get<std::uint64_t>();
    return m;
  } catch (const std::exception& e) {
    fail(ErrorKind::validation, fmt::format("malformed manifest in {}: {}", dir_.string(), e.what()));
  }
}

Manifest StripeStore::check_spec(const AnySpec& spec) const {
  Manifest m = manifest();
  if (m.spec_hash != spec_hash(spec))
    fail(ErrorKind::verification,
         fmt::format("spec mismatch: stripe {} was written with spec {}", dir_.string(),
                     m.spec_hash.substr(0, 12)));
  return m;
}

Manifest StripeStore::write_stripe(const AnySpec& spec, const Stripe& stripe,
                                   std::uint64_t original_size) {
  const CodeSpec& base = base_of(spec);
  const std::string hash = spec_hash(spec);
  if (exists() && manifest().spec_hash != hash)
    fail(ErrorKind::verification,
         fmt::format("spec mismatch: {} already holds a stripe of another code", dir_.string()));
  require(stripe.size() == node_count(spec),
          fmt::format("stripe has {} nodes, code has {}", stripe.size(), node_count(spec)));
  require(!stripe.empty() && stripe[0].alpha() == base.alpha, "stripe has wrong sub-packetization");

  Manifest m{hash,
             static_cast<std::uint32_t>(stripe.size()),
             base.alpha,
             packed_size(stripe[0].payload_len(), base.field.w()),
             stripe[0].payload_len(),
             original_size};
  fs::create_directories(dir_);
  for (std::uint32_t j = 1; j <= m.n_prime; ++j) {
    require(stripe[j - 1].payload_len() == m.payload_len, "nodes differ in payload length");
    fs::create_directories(node_dir(j));
    for (std::uint32_t i = 1; i <= m.alpha; ++i)
      write_atomic(substripe_path(j, i), pack(stripe[j - 1].substripe(i), base.field.w()));
  }
  const std::string text = manifest_json(m).dump(2) + "\n";
  write_atomic(dir_ / "manifest.json",
               {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
  return m;
}

bool StripeStore::node_present(std::uint32_t node) const { return fs::is_directory(node_dir(node)); }

void StripeStore::remove_node(std::uint32_t node) { fs::remove_all(node_dir(node)); }

void StripeStore::write_node(const AnySpec& spec, std::uint32_t node, const NodeVector& content) {
  const Manifest m = check_spec(spec);
  require(node >= 1 && node <= m.n_prime, fmt::format("node {} out of range 1..{}", node, m.n_prime));
  require(content.alpha() == m.alpha && content.payload_len() == m.payload_len,
          "node content does not match the stripe layout");
  const unsigned w = base_of(spec).field.w();
  fs::path fresh = node_dir(node);
  fresh += ".new";
  fs::remove_all(fresh);
  fs::create_directories(fresh);
  for (std::uint32_t i = 1; i <= m.alpha; ++i)
    write_atomic(fresh / fmt::format("s{}", i), pack(content.substripe(i), w));
  fs::remove_all(node_dir(node));
  fs::rename(fresh, node_dir(node));
}

std::vector<Element> StripeStore::read_file(std::uint32_t node, std::uint32_t row,
                                            const Manifest& m, unsigned w) const {
  const fs::path path = substripe_path(node, row);
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, fmt::format("missing substripe file {}", path.string()));
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() != m.substripe_size)
    fail(ErrorKind::verification,
         fmt::format("truncated substripe file {}: {} bytes, expected {}", path.string(),
                     bytes.size(), m.substripe_size));
  return unpack(bytes, m.payload_len, w);
}

NodeVector StripeStore::read_node(const AnySpec& spec, std::uint32_t node) const {
  const Manifest m = check_spec(spec);
  const unsigned w = base_of(spec).field.w();
  NodeVector nv(m.alpha, m.payload_len);
  for (std::uint32_t i = 1; i <= m.alpha; ++i) {
    const auto e = read_file(node, i, m, w);
    std::copy(e.begin(), e.end(), nv.substripe(i).begin());
  }
  return nv;
}

ReadResult StripeStore::read_substripes(const AnySpec& spec, std::span<const NodeRead> requests,
                                        std::optional<std::uint32_t> lost) const {
  const Manifest m = check_spec(spec);
  const unsigned w = base_of(spec).field.w();
  ReadResult out;
  for (const NodeRead& req : requests) {
    if (lost && req.node == *lost)
      fail(ErrorKind::validation, fmt::format("refusing to read lost node {}", req.node));
    std::vector<std::uint32_t> rows = req.rows;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    std::uint32_t prev = 0;
    for (std::uint32_t row : rows) {
      out.payloads[{req.node, row}] = read_file(req.node, row, m, w);
      ++out.substripes;
      if (prev == 0 || row != prev + 1) ++out.read_ops;
      prev = row;
    }
  }
  return out;
}

}  // namespace htlrc
