#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "htlrc/linear_code.hpp"

namespace test {

inline std::vector<htlrc::NodeVector> random_data(const htlrc::Field& f,
                                                  std::uint32_t k,
                                                  std::uint32_t alpha,
                                                  std::size_t len,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<htlrc::NodeVector> out;
  for (std::uint32_t u = 0; u < k; ++u) {
    htlrc::NodeVector nv(alpha, len);
    for (auto& e : nv.raw()) e = static_cast<htlrc::Element>(rng() % f.size());
    out.push_back(std::move(nv));
  }
  return out;
}

inline std::vector<htlrc::NodeVector> impulse(std::uint32_t k, std::uint32_t alpha,
                                              std::uint32_t row, std::uint32_t node) {
  std::vector<htlrc::NodeVector> out(k, htlrc::NodeVector(alpha, 1));
  out[node - 1].substripe(row)[0] = 1;
  return out;
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("htlrc-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace test
