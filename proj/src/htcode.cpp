#include "htlrc/htcode.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

std::uint32_t appended_columns(std::uint32_t k, std::uint32_t r) {
  return r == 0 ? 0 : (k + r - 1) / r;
}

namespace {

std::vector<IndexArray> base_arrays(std::uint32_t k, std::uint32_t r,
                                    std::uint32_t alpha) {
  const std::uint32_t m = appended_columns(k, r);
  std::vector<IndexArray> arrays(r, IndexArray(alpha));
  for (std::uint32_t i = 0; i < r; ++i) {
    for (std::uint32_t j = 1; j <= alpha; ++j) {
      auto& row = arrays[i][j - 1];
      row.resize(k + (i == 0 ? 0 : m));
      for (std::uint32_t u = 1; u <= k; ++u) row[u - 1] = {j, u};
    }
  }
  return arrays;
}

// Digit-based placement: within a block of r*run rows, the node at group
// position p owns the p-th run of rows and receives, for parity nu, the element
// of the same offset in the (nu-2)-th foreign run.
void schedule_strict(std::vector<IndexArray>& arrays, std::uint32_t k,
                     std::uint32_t r, std::uint32_t alpha) {
  const std::uint32_t m = appended_columns(k, r);
  std::uint32_t max_level = 0;
  for (std::uint32_t p = r; alpha % p == 0; p *= r) ++max_level;

  for (std::uint32_t c = 1; c <= m; ++c) {
    const std::uint32_t level = std::min(c, max_level);
    std::uint32_t run = alpha;
    for (std::uint32_t i = 0; i < level; ++i) run /= r;
    const std::uint32_t block = r * run;
    for (std::uint32_t p = 0; p < r; ++p) {
      const std::uint32_t node = (c - 1) * r + p + 1;
      if (node > k) break;
      for (std::uint32_t j = 0; j < alpha; ++j) {
        const std::uint32_t b = j / block;
        const std::uint32_t d = (j % block) / run;
        const std::uint32_t o = j % run;
        if (d != p) continue;
        std::uint32_t nu = 2;
        for (std::uint32_t e = 0; e < r; ++e) {
          if (e == p) continue;
          arrays[nu - 1][j][k + c - 1] = {b * block + e * run + o + 1, node};
          ++nu;
        }
      }
    }
  }
}

// Greedy placement for shapes the digit rule cannot handle: each node owns
// the least-loaded rows that can host its foreign elements.
void schedule_relaxed(std::vector<IndexArray>& arrays, std::uint32_t k,
                      std::uint32_t r, std::uint32_t alpha) {
  const std::uint32_t m = appended_columns(k, r);
  std::vector<std::uint32_t> load(alpha, 0);

  for (std::uint32_t c = 1; c <= m; ++c) {
    const std::uint32_t col = k + c - 1;
    auto free_slots = [&](std::uint32_t j) {
      std::uint32_t f = 0;
      for (std::uint32_t nu = 2; nu <= r; ++nu)
        if (arrays[nu - 1][j][col].empty()) ++f;
      return f;
    };
    for (std::uint32_t p = 0; p < r; ++p) {
      const std::uint32_t node = (c - 1) * r + p + 1;
      if (node > k) break;
      std::vector<std::uint32_t> order(alpha);
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return load[a] < load[b];
      });
      std::erase_if(order, [&](std::uint32_t j) { return free_slots(j) == 0; });

      bool placed = false;
      for (std::uint32_t s = (alpha + r - 1) / r; s <= alpha && !placed; ++s) {
        if (s > order.size()) break;
        std::vector<std::uint32_t> owned(order.begin(), order.begin() + s);
        std::sort(owned.begin(), owned.end());
        std::uint32_t capacity = 0;
        for (auto j : owned) capacity += free_slots(j);
        if (capacity < alpha - s) continue;

        auto slot = owned.begin();
        std::uint32_t nu = 2;
        for (std::uint32_t src = 0; src < alpha; ++src) {
          if (std::binary_search(owned.begin(), owned.end(), src)) continue;
          while (!arrays[nu - 1][*slot][col].empty()) {
            if (++nu > r) {
              nu = 2;
              ++slot;
            }
          }
          arrays[nu - 1][*slot][col] = {src + 1, node};
          ++load[*slot];
        }
        placed = true;
      }
      if (!placed)
        fail(ErrorKind::validation,
             fmt::format("scheduler cannot place node {} (k={}, r={}, alpha={})",
                         node, k, r, alpha));
    }
  }
}

}  // namespace

std::vector<IndexArray> build_index_arrays(std::uint32_t n, std::uint32_t k,
                                           std::uint32_t alpha, Schedule mode) {
  require(k >= 1 && n >= k, "code needs n >= k >= 1");
  require(alpha >= 1, "sub-packetization must be at least 1");
  const std::uint32_t r = n - k;
  auto arrays = base_arrays(k, r, alpha);
  if (alpha == 1 || r < 2) return arrays;

  if (mode == Schedule::relaxed) {
    schedule_relaxed(arrays, k, r, alpha);
    return arrays;
  }
  require(k % r == 0, fmt::format("r = {} must divide k = {}", r, k));
  require(alpha % r == 0, fmt::format("r = {} must divide alpha = {}", r, alpha));
  std::uint64_t cap = 1;
  for (std::uint32_t i = 0; i < k / r && cap <= alpha; ++i) cap *= r;
  require(alpha <= cap,
          fmt::format("alpha = {} exceeds r^(k/r) = {}^{}", alpha, r, k / r));
  schedule_strict(arrays, k, r, alpha);
  return arrays;
}

void validate_index_arrays(std::span<const IndexArray> arrays, std::uint32_t k,
                           std::uint32_t alpha) {
  const auto r = static_cast<std::uint32_t>(arrays.size());
  const std::uint32_t m = appended_columns(k, r);
  std::set<IndexPair> appended;
  for (std::uint32_t i = 0; i < r; ++i) {
    require(arrays[i].size() == alpha,
            fmt::format("index array {} must have {} rows", i + 1, alpha));
    for (std::uint32_t j = 1; j <= alpha; ++j) {
      const auto& row = arrays[i][j - 1];
      require(row.size() == k + (i == 0 ? 0 : m),
              fmt::format("index array {} row {} has wrong width", i + 1, j));
      for (std::uint32_t u = 1; u <= k; ++u)
        require(row[u - 1] == IndexPair{j, u},
                fmt::format("index array {} row {} column {} is not ({},{})",
                            i + 1, j, u, j, u));
      std::set<IndexPair> seen;
      for (std::size_t col = k; col < row.size(); ++col) {
        const IndexPair p = row[col];
        if (p.empty()) continue;
        require(p.row >= 1 && p.row <= alpha && p.node >= 1 && p.node <= k,
                fmt::format("index pair ({},{}) out of range", p.row, p.node));
        require(p.row != j, fmt::format("appended pair ({},{}) repeats a base entry",
                                        p.row, p.node));
        require(seen.insert(p).second,
                fmt::format("pair ({},{}) repeated in one row", p.row, p.node));
        require(appended.insert(p).second,
                fmt::format("pair ({},{}) appended more than once", p.row, p.node));
      }
    }
  }
}

Element CodeSpec::coefficient(std::uint32_t i, std::uint32_t j, IndexPair p) const {
  const auto& row = arrays[i - 1][j - 1];
  for (std::size_t col = 0; col < row.size(); ++col)
    if (row[col] == p) return coeffs[i - 1][j - 1][col];
  return 0;
}

void validate(const CodeSpec& spec) {
  require(spec.k >= 1 && spec.n >= spec.k, "code needs n >= k >= 1");
  require(spec.alpha >= 1, "sub-packetization must be at least 1");
  require(spec.arrays.size() == spec.r(), "need one index array per parity");
  validate_index_arrays(spec.arrays, spec.k, spec.alpha);
  require(spec.coeffs.size() == spec.r(), "need one coefficient table per parity");
  for (std::uint32_t i = 0; i < spec.r(); ++i) {
    require(spec.coeffs[i].size() == spec.alpha, "coefficient table has wrong rows");
    for (std::uint32_t j = 0; j < spec.alpha; ++j) {
      const auto& pairs = spec.arrays[i][j];
      const auto& cs = spec.coeffs[i][j];
      require(cs.size() == pairs.size(), "coefficient row width mismatch");
      for (std::size_t col = 0; col < cs.size(); ++col) {
        require(spec.field.contains(cs[col]), "coefficient outside the field");
        require((cs[col] == 0) == pairs[col].empty(),
                fmt::format("parity {} row {} column {}: coefficient must be "
                            "nonzero exactly on assigned slots",
                            i + 1, j + 1, col + 1));
      }
    }
  }
}

MdsReport verify_mds(const LinearCode& code, VerifyMode mode) {
  MdsReport report;
  auto check = [&](std::span<const std::uint32_t> subset) {
    ++report.checked;
    if (!decodable(code, subset)) report.failing.emplace_back(subset.begin(), subset.end());
    return true;
  };
  if (mode.kind == VerifyMode::Kind::exhaustive) {
    for_each_subset(code.n(), code.k, check);
    return report;
  }
  std::mt19937_64 rng(mode.seed);
  std::vector<std::uint32_t> all(code.n());
  std::iota(all.begin(), all.end(), 1u);
  for (std::uint32_t t = 0; t < mode.samples; ++t) {
    for (std::uint32_t i = 0; i < code.k; ++i) {
      const auto j = i + static_cast<std::uint32_t>(rng() % (code.n() - i));
      std::swap(all[i], all[j]);
    }
    std::vector<std::uint32_t> subset(all.begin(), all.begin() + code.k);
    std::sort(subset.begin(), subset.end());
    check(subset);
  }
  return report;
}

MdsReport verify_mds(const CodeSpec& spec, VerifyMode mode) {
  return verify_mds(to_linear_code(spec), mode);
}

VerifyMode default_verify_mode(std::uint32_t n, std::uint32_t k, std::uint32_t alpha) {
  double subsets = 1;
  for (std::uint32_t i = 1; i <= n - k; ++i) subsets = subsets * (k + i) / i;
  const double side = static_cast<double>(n - k) * alpha;
  if (subsets * side * side * side <= 2e8) return VerifyMode::exhaustive();
  return VerifyMode::sampled(64);
}

CodeSpec assign_coefficients(std::vector<IndexArray> arrays, std::uint32_t n,
                             std::uint32_t k, std::uint32_t alpha, Field field,
                             std::uint64_t seed, const AssignOptions& opts) {
  require(k >= 1 && n >= k, "code needs n >= k >= 1");
  validate_index_arrays(arrays, k, alpha);
  require(arrays.size() == n - k, "need one index array per parity");
  const VerifyMode mode = opts.verify.value_or(default_verify_mode(n, k, alpha));
  const std::uint32_t q1 = field.size() - 1;

  for (std::uint32_t attempt = 0; attempt < opts.retry_cap; ++attempt) {
    CodeSpec spec{n, k, alpha, field, arrays, {}, seed + attempt};
    std::mt19937_64 rng(spec.seed);
    spec.coeffs.resize(arrays.size());
    for (std::size_t i = 0; i < arrays.size(); ++i) {
      for (const auto& row : arrays[i]) {
        auto& cs = spec.coeffs[i].emplace_back(row.size(), 0);
        for (std::size_t col = 0; col < row.size(); ++col) {
          if (row[col].empty()) continue;
          const std::uint64_t draw = rng();
          cs[col] = opts.source ? opts.source(spec.seed, draw)
                                : static_cast<Element>(1 + draw % q1);
        }
      }
    }
    validate(spec);
    if (verify_mds(spec, mode).ok()) return spec;
  }
  fail(ErrorKind::exhausted,
       fmt::format("no MDS coefficient draw for ({},{}) alpha={} in seeds {}..{}",
                   n, k, alpha, seed, seed + opts.retry_cap - 1));
}

CodeSpec make_code(std::uint32_t n, std::uint32_t k, std::uint32_t alpha,
                   Field field, std::uint64_t seed, Schedule mode) {
  return assign_coefficients(build_index_arrays(n, k, alpha, mode), n, k, alpha,
                             std::move(field), seed);
}

namespace {

// Published (9,6) listing. Base coefficients per parity and row, then the two
// appended terms of parities 2 and 3 as {coef, row, node}.
constexpr Element kGoldenBase[3][9][6] = {
    {{7, 10, 18, 11, 17, 6},
     {26, 17, 25, 27, 31, 4},
     {22, 12, 27, 31, 31, 23},
     {17, 9, 14, 4, 21, 25},
     {20, 5, 5, 13, 11, 16},
     {25, 16, 30, 28, 10, 24},
     {20, 8, 21, 9, 3, 25},
     {23, 4, 12, 16, 8, 17},
     {2, 21, 8, 16, 7, 25}},
    {{8, 24, 21, 19, 6, 20},
     {3, 12, 6, 3, 16, 10},
     {23, 20, 30, 7, 16, 10},
     {14, 7, 10, 14, 24, 20},
     {25, 11, 29, 12, 20, 24},
     {17, 27, 4, 21, 15, 11},
     {19, 23, 16, 4, 14, 16},
     {5, 26, 22, 30, 22, 21},
     {10, 8, 10, 27, 28, 20}},
    {{20, 20, 30, 17, 12, 27},
     {18, 10, 20, 21, 13, 7},
     {31, 25, 12, 18, 15, 24},
     {6, 16, 26, 4, 21, 27},
     {7, 6, 26, 6, 15, 16},
     {20, 20, 12, 20, 18, 26},
     {26, 2, 6, 20, 17, 23},
     {20, 15, 13, 20, 10, 24},
     {6, 2, 31, 12, 16, 30}},
};

constexpr std::uint32_t kGoldenExtra[2][9][2][3] = {
    {{{8, 4, 1}, {6, 2, 4}},
     {{30, 5, 1}, {24, 1, 5}},
     {{21, 6, 1}, {27, 1, 6}},
     {{16, 1, 2}, {31, 5, 4}},
     {{15, 2, 2}, {6, 4, 5}},
     {{19, 3, 2}, {21, 4, 6}},
     {{9, 1, 3}, {8, 8, 4}},
     {{24, 2, 3}, {26, 7, 5}},
     {{16, 3, 3}, {4, 7, 6}}},
    {{{28, 7, 1}, {9, 3, 4}},
     {{2, 8, 1}, {6, 3, 5}},
     {{31, 9, 1}, {28, 2, 6}},
     {{26, 7, 2}, {8, 6, 4}},
     {{28, 8, 2}, {4, 6, 5}},
     {{19, 9, 2}, {30, 5, 6}},
     {{8, 4, 3}, {31, 9, 4}},
     {{31, 5, 3}, {9, 9, 5}},
     {{20, 6, 3}, {13, 8, 6}}},
};

}  // namespace

CodeSpec golden_9_6_code() {
  CodeSpec spec;
  spec.n = 9;
  spec.k = 6;
  spec.alpha = 9;
  spec.field = Field::gf32();
  spec.arrays = base_arrays(6, 3, 9);
  spec.coeffs.assign(3, {});
  for (std::uint32_t i = 0; i < 3; ++i) {
    for (std::uint32_t j = 0; j < 9; ++j) {
      auto& cs = spec.coeffs[i].emplace_back(spec.arrays[i][j].size(), 0);
      std::copy(std::begin(kGoldenBase[i][j]), std::end(kGoldenBase[i][j]), cs.begin());
      if (i == 0) continue;
      for (std::uint32_t c = 0; c < 2; ++c) {
        const auto& e = kGoldenExtra[i - 1][j][c];
        cs[6 + c] = static_cast<Element>(e[0]);
        spec.arrays[i][j][6 + c] = {e[1], e[2]};
      }
    }
  }
  validate(spec);
  return spec;
}

Functional parity_equation(const CodeSpec& spec, std::uint32_t i, std::uint32_t j) {
  Functional f;
  const auto& row = spec.arrays[i - 1][j - 1];
  for (std::size_t col = 0; col < row.size(); ++col) {
    if (row[col].empty()) continue;
    const std::uint32_t var = (row[col].node - 1) * spec.alpha + (row[col].row - 1);
    accumulate(spec.field, f, unit(var), spec.coeffs[i - 1][j - 1][col]);
  }
  return f;
}

LinearCode to_linear_code(const CodeSpec& spec) {
  LinearCode code = systematic_code(spec.field, spec.k, spec.alpha);
  for (std::uint32_t i = 1; i <= spec.r(); ++i) {
    std::vector<Functional> rows;
    for (std::uint32_t j = 1; j <= spec.alpha; ++j) rows.push_back(parity_equation(spec, i, j));
    code.add_node(std::move(rows), "p" + std::to_string(i));
  }
  return code;
}

Stripe encode(const CodeSpec& spec, std::span<const NodeVector> data) {
  require(data.size() == spec.k, fmt::format("expected {} data nodes", spec.k));
  const std::size_t len = data.empty() ? 0 : data[0].payload_len();
  for (const auto& d : data)
    require(d.alpha() == spec.alpha && d.payload_len() == len,
            "data nodes must share alpha and payload length");
  Stripe out(data.begin(), data.end());
  for (std::uint32_t i = 1; i <= spec.r(); ++i) {
    NodeVector parity(spec.alpha, len);
    for (std::uint32_t j = 1; j <= spec.alpha; ++j) {
      const auto& row = spec.arrays[i - 1][j - 1];
      for (std::size_t col = 0; col < row.size(); ++col) {
        if (row[col].empty()) continue;
        spec.field.axpy(parity.substripe(j), spec.coeffs[i - 1][j - 1][col],
                        data[row[col].node - 1].substripe(row[col].row));
      }
    }
    out.push_back(std::move(parity));
  }
  return out;
}

Matrix generator_matrix(const CodeSpec& spec) {
  return generator_matrix(to_linear_code(spec));
}

}  // namespace htlrc
