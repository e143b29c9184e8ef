#include "htlrc/repair.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

const char* to_string(PlanKind kind) noexcept {
  switch (kind) {
    case PlanKind::row_set: return "row_set";
    case PlanKind::full_decode: return "full_decode";
    case PlanKind::local_group: return "local_group";
    case PlanKind::global_path: return "global_path";
    case PlanKind::global_node: return "global_node";
  }
  return "unknown";
}

RepairMetrics measure(std::span<const NodeRead> reads, std::uint32_t alpha) {
  RepairMetrics m;
  for (const auto& r : reads) {
    std::vector<std::uint32_t> rows = r.rows;
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    m.substripes += rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i == 0 || rows[i] != rows[i - 1] + 1) ++m.read_ops;
  }
  m.gamma = Rational(static_cast<std::int64_t>(m.substripes), alpha);
  return m;
}

RepairPlan plan_from_reads(const LinearCode& code, std::uint32_t lost,
                           std::vector<Cell> reads, PlanKind kind) {
  require(lost >= 1 && lost <= code.n(),
          fmt::format("node {} out of range [1, {}]", lost, code.n()));
  std::sort(reads.begin(), reads.end());
  reads.erase(std::unique(reads.begin(), reads.end()), reads.end());
  for (const Cell& c : reads)
    require(c.node != lost && c.node >= 1 && c.node <= code.n(),
            fmt::format("plan may not read node {}", c.node));

  const SpanSolution sol = span_solve(code, reads, code.nodes[lost - 1]);
  if (!sol.all_solved())
    fail(ErrorKind::singular,
         fmt::format("reads do not determine node {}", lost));

  RepairPlan plan;
  plan.lost_node = lost;
  plan.alpha = code.alpha;
  plan.kind = kind;
  for (const Cell& c : reads) {
    if (plan.reads.empty() || plan.reads.back().node != c.node)
      plan.reads.push_back({c.node, {}});
    plan.reads.back().rows.push_back(c.row);
  }
  auto terms_of = [&](const Weights& w) {
    std::vector<ReadTerm> out;
    for (auto [idx, coef] : w) out.push_back({reads[idx].node, reads[idx].row, coef});
    return out;
  };
  for (std::uint32_t j = 1; j <= code.alpha; ++j)
    plan.steps.push_back({j, terms_of(*sol.targets[j - 1])});
  for (const auto& rel : sol.relations) plan.checks.push_back(terms_of(rel));
  plan.metrics = measure(plan.reads, code.alpha);
  return plan;
}

namespace {

// Cells read when the equations of `rows` on `eq_nodes` are used: the
// equation substripes themselves plus every data symbol they mention.
std::vector<Cell> row_set_reads(const LinearCode& code, std::uint32_t lost,
                                std::span<const std::uint32_t> eq_nodes,
                                const std::set<std::uint32_t>& rows) {
  std::set<Cell> cells;
  for (std::uint32_t e : eq_nodes)
    for (std::uint32_t j : rows) {
      cells.insert({e, j});
      for (const Term& t : code.at(e, j)) {
        const Cell c = code.cell_of(t.var);
        if (c.node != lost) cells.insert(c);
      }
    }
  return {cells.begin(), cells.end()};
}

std::size_t solved_count(const LinearCode& code, std::uint32_t lost,
                         std::span<const Cell> reads) {
  const SpanSolution sol = span_solve(code, reads, code.nodes[lost - 1]);
  return static_cast<std::size_t>(
      std::count_if(sol.targets.begin(), sol.targets.end(),
                    [](const auto& w) { return w.has_value(); }));
}

}  // namespace

RepairPlan plan_whole_node_repair(const LinearCode& code, std::uint32_t lost,
                                  std::span<const std::uint32_t> extra,
                                  PlanKind kind) {
  std::vector<Cell> reads;
  auto add_node = [&](std::uint32_t node) {
    for (std::uint32_t j = 1; j <= code.alpha; ++j) reads.push_back({node, j});
  };
  for (std::uint32_t u = 1; u <= code.k; ++u)
    if (u != lost) add_node(u);
  for (std::uint32_t e : extra) {
    if (solved_count(code, lost, reads) == code.alpha) break;
    if (e != lost) add_node(e);
  }
  return plan_from_reads(code, lost, std::move(reads), kind);
}

RepairPlan plan_row_set_repair(const LinearCode& code, std::uint32_t lost,
                               std::span<const std::uint32_t> equation_nodes) {
  require(code.is_data(lost),
          fmt::format("row-set repair needs a systematic node, got {}", lost));

  std::set<std::uint32_t> rows;
  for (std::uint32_t e : equation_nodes)
    for (std::uint32_t j = 1; j <= code.alpha; ++j)
      for (const Term& t : code.at(e, j)) {
        const Cell c = code.cell_of(t.var);
        if (c.node == lost && c.row != j) rows.insert(j);
      }

  std::vector<Cell> reads = row_set_reads(code, lost, equation_nodes, rows);
  std::size_t solved = rows.empty() ? 0 : solved_count(code, lost, reads);
  while (solved < code.alpha && rows.size() < code.alpha) {
    std::uint32_t best_row = 0;
    std::size_t best_solved = 0, best_reads = 0;
    for (std::uint32_t j = 1; j <= code.alpha; ++j) {
      if (rows.count(j)) continue;
      auto trial = rows;
      trial.insert(j);
      const auto cells = row_set_reads(code, lost, equation_nodes, trial);
      const std::size_t s = solved_count(code, lost, cells);
      if (best_row == 0 || s > best_solved ||
          (s == best_solved && cells.size() < best_reads)) {
        best_row = j;
        best_solved = s;
        best_reads = cells.size();
      }
    }
    rows.insert(best_row);
    reads = row_set_reads(code, lost, equation_nodes, rows);
    solved = best_solved;
  }

  const std::uint64_t whole = static_cast<std::uint64_t>(code.k) * code.alpha;
  if (solved == code.alpha && reads.size() < whole)
    return plan_from_reads(code, lost, std::move(reads), PlanKind::row_set);

  RepairPlan plan = plan_whole_node_repair(code, lost, equation_nodes, PlanKind::full_decode);
  plan.fallback = true;
  return plan;
}

ReadProvider stripe_provider(const Stripe& stripe, std::uint32_t lost) {
  return [&stripe, lost](std::uint32_t node,
                         std::uint32_t row) -> std::optional<std::vector<Element>> {
    if (node == lost || node < 1 || node > stripe.size()) return std::nullopt;
    const auto& nv = stripe[node - 1];
    if (row < 1 || row > nv.alpha()) return std::nullopt;
    auto s = nv.substripe(row);
    return std::vector<Element>(s.begin(), s.end());
  };
}

NodeVector execute_repair(const Field& field, const RepairPlan& plan,
                          const ReadProvider& provider, bool check) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<Element>> fetched;
  std::optional<std::size_t> len;
  for (const auto& r : plan.reads) {
    for (std::uint32_t row : r.rows) {
      auto data = provider(r.node, row);
      if (!data)
        fail(ErrorKind::missing_read,
             fmt::format("substripe {} of node {} unavailable", row, r.node));
      if (!len) len = data->size();
      if (data->size() != *len)
        fail(ErrorKind::validation, "substripes differ in payload length");
      fetched.emplace(std::pair{r.node, row}, std::move(*data));
    }
  }
  auto get = [&](const ReadTerm& t) -> const std::vector<Element>& {
    auto it = fetched.find({t.node, t.row});
    if (it == fetched.end())
      fail(ErrorKind::missing_read,
           fmt::format("schedule uses unplanned read ({},{})", t.node, t.row));
    return it->second;
  };

  NodeVector out(plan.alpha, len.value_or(0));
  for (const auto& step : plan.steps)
    for (const auto& t : step.terms) field.axpy(out.substripe(step.target_row), t.coef, get(t));

  if (check) {
    for (const auto& rel : plan.checks) {
      std::vector<Element> acc(len.value_or(0), 0);
      for (const auto& t : rel) field.axpy(acc, t.coef, get(t));
      if (std::any_of(acc.begin(), acc.end(), [](Element e) { return e != 0; }))
        fail(ErrorKind::inconsistent,
             fmt::format("redundant reads disagree while repairing node {}",
                         plan.lost_node));
    }
  }
  return out;
}

bool reencode_matches(const LinearCode& code, const Stripe& stripe) {
  if (stripe.size() != code.n()) return false;
  const Stripe fresh = encode(code, std::span(stripe).first(code.k));
  return fresh == stripe;
}

std::vector<NodeVector> decode_any_k(const CodeSpec& spec,
                                     std::span<const std::uint32_t> available,
                                     std::span<const NodeVector> contents) {
  require(available.size() == spec.k,
          fmt::format("decode needs exactly k = {} nodes, got {}", spec.k,
                      available.size()));
  return decode(to_linear_code(spec), available, contents);
}

RepairPlan plan_systematic_repair(const CodeSpec& spec, std::uint32_t lost) {
  require(lost >= 1 && lost <= spec.k,
          fmt::format("systematic node must be in [1, {}], got {}", spec.k, lost));
  const LinearCode code = to_linear_code(spec);
  std::vector<std::uint32_t> parities;
  for (std::uint32_t i = spec.k + 1; i <= spec.n; ++i) parities.push_back(i);
  return plan_row_set_repair(code, lost, parities);
}

RepairPlan plan_parity_repair(const CodeSpec& spec, std::uint32_t lost) {
  require(lost > spec.k && lost <= spec.n,
          fmt::format("parity node must be in [{}, {}], got {}", spec.k + 1, spec.n, lost));
  std::vector<Cell> reads;
  for (std::uint32_t u = 1; u <= spec.k; ++u)
    for (std::uint32_t j = 1; j <= spec.alpha; ++j) reads.push_back({u, j});
  return plan_from_reads(to_linear_code(spec), lost, std::move(reads),
                         PlanKind::full_decode);
}

RepairPlan plan_repair(const CodeSpec& spec, std::uint32_t lost) {
  return lost <= spec.k ? plan_systematic_repair(spec, lost)
                        : plan_parity_repair(spec, lost);
}

Rational repair_bandwidth_bound(std::uint32_t n, std::uint32_t k, std::uint32_t d,
                                Rational file_size) {
  require(k >= 1 && k <= d && d + 1 <= n,
          fmt::format("helper count d = {} must satisfy k <= d <= n-1 for ({},{})",
                      d, n, k));
  return file_size / static_cast<std::int64_t>(k) * Rational(d, d - k + 1);
}

Rational msr_bound(std::uint32_t n, std::uint32_t k, Rational file_size) {
  require(k >= 1 && n > k, fmt::format("MSR bound needs n > k >= 1, got ({},{})", n, k));
  return file_size / static_cast<std::int64_t>(k) * Rational(n - 1, n - k);
}

}  // namespace htlrc
