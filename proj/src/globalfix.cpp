#include "htlrc/globalfix.hpp"

#include <random>
#include <set>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

const MixEntry& GlobalLrcSpec::pair(std::uint32_t a, std::uint32_t b) const {
  for (const auto& m : mix)
    if (m.a == a && m.b == b) return m;
  fail(ErrorKind::validation, fmt::format("no mix entry for pair ({},{})", a, b));
}

void validate(const GlobalLrcSpec& spec) {
  validate(spec.lrc);
  const std::uint32_t g = spec.g();
  require(spec.lrc.config.delta == 2, "global-efficient codes use delta = 2");
  require(spec.lrc.globals.size() == g,
          fmt::format("need one global per substripe: {} globals, alpha {}",
                      spec.lrc.globals.size(), g));
  require(spec.mix.size() == static_cast<std::size_t>(g) * (g - 1) / 2,
          "mix must list every substripe pair once");
  const Field& f = spec.lrc.base.field;
  std::size_t idx = 0;
  for (std::uint32_t a = 1; a <= g; ++a)
    for (std::uint32_t b = a + 1; b <= g; ++b, ++idx) {
      const MixEntry& m = spec.mix[idx];
      require(m.a == a && m.b == b, fmt::format("mix entry {} should be pair ({},{})", idx + 1, a, b));
      for (Element e : {m.f1, m.f2, m.f3, m.f4})
        require(f.contains(e), "mix coefficient outside the field");
      require((f.mul(m.f1, m.f4) ^ f.mul(m.f2, m.f3)) != 0,
              fmt::format("mix for pair ({},{}) is singular", a, b));
    }
}

std::vector<MixEntry> identity_mix(std::uint32_t g) {
  std::vector<MixEntry> out;
  for (std::uint32_t a = 1; a <= g; ++a)
    for (std::uint32_t b = a + 1; b <= g; ++b) out.push_back({a, b, 1, 0, 0, 1});
  return out;
}

std::vector<MixEntry> swap_mix(std::uint32_t g) {
  std::vector<MixEntry> out;
  for (std::uint32_t a = 1; a <= g; ++a)
    for (std::uint32_t b = a + 1; b <= g; ++b) out.push_back({a, b, 0, 1, 1, 0});
  return out;
}

GlobalLrcSpec with_mix(const LrcSpec& lrc, std::vector<MixEntry> mix) {
  GlobalLrcSpec spec{lrc, std::move(mix)};
  validate(spec);
  return spec;
}

GlobalLrcSpec build_global_efficient_lrc(std::uint32_t k, std::uint32_t l,
                                         std::uint32_t g, Field field,
                                         std::uint64_t seed) {
  require(g >= 2, fmt::format("need at least two globals, got {}", g));
  require(l >= 1 && k % l == 0, fmt::format("l = {} must divide k = {}", l, k));
  const CodeSpec base = make_code(k + g + 1, k, g, field, seed, Schedule::relaxed);
  const LrcSpec lrc = split_parities(base, {l, 2});

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Field& f = base.field;
  auto draw = [&] { return static_cast<Element>(1 + rng() % (f.size() - 1)); };
  std::vector<MixEntry> mix;
  for (std::uint32_t a = 1; a <= g; ++a)
    for (std::uint32_t b = a + 1; b <= g; ++b) {
      bool ok = false;
      for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
        MixEntry m{a, b, draw(), draw(), draw(), draw()};
        if ((f.mul(m.f1, m.f4) ^ f.mul(m.f2, m.f3)) == 0) continue;
        mix.push_back(m);
        ok = true;
      }
      if (!ok)
        fail(ErrorKind::exhausted,
             fmt::format("no nonsingular mix for pair ({},{}) in 64 draws", a, b));
    }
  return with_mix(lrc, std::move(mix));
}

LinearCode to_linear_code(const GlobalLrcSpec& spec) {
  LinearCode code = to_linear_code(spec.lrc);
  const Field& f = code.field;
  for (const MixEntry& m : spec.mix) {
    auto& ab = code.nodes[spec.global_node(m.b) - 1][m.a - 1];  // substripe a of global b
    auto& ba = code.nodes[spec.global_node(m.a) - 1][m.b - 1];  // substripe b of global a
    Functional new_ab, new_ba;
    accumulate(f, new_ab, ab, m.f1);
    accumulate(f, new_ab, ba, m.f2);
    accumulate(f, new_ba, ab, m.f3);
    accumulate(f, new_ba, ba, m.f4);
    ab = std::move(new_ab);
    ba = std::move(new_ba);
  }
  return code;
}

Stripe encode(const GlobalLrcSpec& spec, std::span<const NodeVector> data) {
  return encode(to_linear_code(spec), data);
}

namespace {

void apply_pairs(const GlobalLrcSpec& spec, Stripe& stripe, bool inverse) {
  require(stripe.size() == spec.n_prime(), "stripe has wrong node count");
  const Field& f = spec.lrc.base.field;
  for (const MixEntry& m : spec.mix) {
    auto ab = stripe[spec.global_node(m.b) - 1].substripe(m.a);
    auto ba = stripe[spec.global_node(m.a) - 1].substripe(m.b);
    Element c1 = m.f1, c2 = m.f2, c3 = m.f3, c4 = m.f4;
    if (inverse) {
      const Element det_inv = f.inv(f.mul(m.f1, m.f4) ^ f.mul(m.f2, m.f3));
      c1 = f.mul(m.f4, det_inv);
      c2 = f.mul(m.f2, det_inv);
      c3 = f.mul(m.f3, det_inv);
      c4 = f.mul(m.f1, det_inv);
    }
    for (std::size_t e = 0; e < ab.size(); ++e) {
      const Element x = ab[e], y = ba[e];
      ab[e] = f.mul(c1, x) ^ f.mul(c2, y);
      ba[e] = f.mul(c3, x) ^ f.mul(c4, y);
    }
  }
}

}  // namespace

void unmix(const GlobalLrcSpec& spec, Stripe& stripe) { apply_pairs(spec, stripe, true); }
void mix(const GlobalLrcSpec& spec, Stripe& stripe) { apply_pairs(spec, stripe, false); }

RepairPlan plan_global_node_repair(const GlobalLrcSpec& spec, std::uint32_t lost) {
  require(spec.lrc.is_global(lost),
          fmt::format("node {} is not a global parity (globals are {}..{})", lost,
                      spec.global_node(1), spec.n_prime()));
  const LinearCode code = to_linear_code(spec);
  const std::uint32_t t = lost - spec.global_node(0);
  const CodeSpec& base = spec.lrc.base;

  std::set<Cell> reads;
  auto add_row = [&](std::uint32_t row) {
    for (std::uint32_t u = 1; u <= spec.k(); ++u) reads.insert({u, row});
    for (std::uint32_t i : spec.lrc.globals)
      for (const Term& term : parity_equation(base, i, row)) reads.insert(code.cell_of(term.var));
  };
  add_row(t);
  for (std::uint32_t s = 1; s <= spec.g(); ++s)
    if (s != t) reads.insert({spec.global_node(s), t});

  try {
    return plan_from_reads(code, lost, {reads.begin(), reads.end()}, PlanKind::global_node);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::singular) throw;
  }
  // A pair with f2 = 0 or f3 = 0 does not carry the lost half; fall back to
  // recomputing those substripes from their own data rows.
  for (std::uint32_t s = 1; s <= spec.g(); ++s)
    if (s != t) add_row(s);
  return plan_from_reads(code, lost, {reads.begin(), reads.end()}, PlanKind::global_node);
}

}  // namespace htlrc
