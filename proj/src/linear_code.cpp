#include "htlrc/linear_code.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "htlrc/errors.hpp"

namespace htlrc {

void accumulate(const Field& f, Functional& dst, const Functional& src,
                Element scale) {
  if (scale == 0 || src.empty()) return;
  Functional out;
  out.reserve(dst.size() + src.size());
  auto a = dst.begin();
  auto b = src.begin();
  while (a != dst.end() || b != src.end()) {
    if (b == src.end() || (a != dst.end() && a->var < b->var)) {
      out.push_back(*a++);
    } else if (a == dst.end() || b->var < a->var) {
      out.push_back({b->var, f.mul(scale, b->coef)});
      ++b;
    } else {
      const Element c = a->coef ^ f.mul(scale, b->coef);
      if (c != 0) out.push_back({a->var, c});
      ++a;
      ++b;
    }
  }
  dst = std::move(out);
}

LinearCode::LinearCode(Field f, std::uint32_t k_, std::uint32_t alpha_)
    : field(std::move(f)), k(k_), alpha(alpha_) {}

std::uint32_t LinearCode::add_node(std::vector<Functional> rows,
                                   std::string name) {
  require(rows.size() == alpha, "node must have alpha substripe equations");
  nodes.push_back(std::move(rows));
  names.push_back(std::move(name));
  return n();
}

LinearCode systematic_code(Field f, std::uint32_t k, std::uint32_t alpha) {
  require(k >= 1 && alpha >= 1, "code needs k >= 1 and alpha >= 1");
  LinearCode code(std::move(f), k, alpha);
  for (std::uint32_t u = 1; u <= k; ++u) {
    std::vector<Functional> rows(alpha);
    for (std::uint32_t j = 1; j <= alpha; ++j) rows[j - 1] = unit(code.var(u, j));
    code.add_node(std::move(rows), "x" + std::to_string(u));
  }
  return code;
}

void check_data_shape(const LinearCode& code, std::span<const NodeVector> data) {
  if (data.size() != code.k)
    fail(ErrorKind::validation, "expected " + std::to_string(code.k) +
                                    " data nodes, got " + std::to_string(data.size()));
  for (const auto& node : data) {
    if (node.alpha() != code.alpha)
      fail(ErrorKind::validation, "data node has wrong sub-packetization");
    if (node.payload_len() != data[0].payload_len())
      fail(ErrorKind::validation, "data nodes have non-uniform payload length");
  }
}

Stripe encode(const LinearCode& code, std::span<const NodeVector> data) {
  check_data_shape(code, data);
  const std::size_t len = data.empty() ? 0 : data[0].payload_len();
  Stripe out;
  out.reserve(code.n());
  for (std::uint32_t node = 1; node <= code.n(); ++node) {
    if (code.is_data(node)) {
      out.push_back(data[node - 1]);
      continue;
    }
    NodeVector nv(code.alpha, len);
    for (std::uint32_t j = 1; j <= code.alpha; ++j) {
      for (const Term& t : code.at(node, j)) {
        const Cell c = code.cell_of(t.var);
        code.field.axpy(nv.substripe(j), t.coef, data[c.node - 1].substripe(c.row));
      }
    }
    out.push_back(std::move(nv));
  }
  return out;
}

Matrix generator_matrix(const LinearCode& code) {
  Matrix g(code.dimension(), static_cast<std::size_t>(code.alpha) * code.n());
  for (std::uint32_t node = 1; node <= code.n(); ++node)
    for (std::uint32_t j = 1; j <= code.alpha; ++j)
      for (const Term& t : code.at(node, j))
        g.at(t.var, (node - 1) * code.alpha + (j - 1)) = t.coef;
  return g;
}

bool decodable(const LinearCode& code, std::span<const std::uint32_t> nodes) {
  // Systematic nodes contribute unit rows, so only the parity rows restricted
  // to the variables of absent data nodes need full rank.
  std::vector<bool> present(code.n() + 1, false);
  for (std::uint32_t node : nodes) present.at(node) = true;
  std::map<std::uint32_t, std::size_t> column;
  for (std::uint32_t u = 1; u <= code.k; ++u)
    if (!present[u])
      for (std::uint32_t j = 1; j <= code.alpha; ++j)
        column.emplace(code.var(u, j), column.size());
  if (column.empty()) return true;

  std::vector<std::vector<Element>> rows;
  for (std::uint32_t node = code.k + 1; node <= code.n(); ++node) {
    if (!present[node]) continue;
    for (std::uint32_t j = 1; j <= code.alpha; ++j) {
      std::vector<Element> row(column.size(), 0);
      for (const Term& t : code.at(node, j))
        if (auto it = column.find(t.var); it != column.end()) row[it->second] = t.coef;
      rows.push_back(std::move(row));
    }
  }
  if (rows.size() < column.size()) return false;
  Matrix m(rows.size(), column.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return rank(code.field, std::move(m)) == column.size();
}

bool SpanSolution::all_solved() const {
  return std::all_of(targets.begin(), targets.end(),
                     [](const auto& w) { return w.has_value(); });
}

SpanSolution span_solve(const LinearCode& code, std::span<const Cell> reads,
                        std::span<const Functional> targets) {
  const Field& f = code.field;

  // Only the variables that occur somewhere matter; compress columns.
  std::map<std::uint32_t, std::size_t> column;
  for (const Cell& c : reads)
    for (const Term& t : code.at(c.node, c.row)) column.emplace(t.var, 0);
  for (const auto& tf : targets)
    for (const Term& t : tf) column.emplace(t.var, 0);
  std::size_t next = 0;
  for (auto& [var, col] : column) col = next++;

  Matrix a(reads.size(), column.size());
  for (std::size_t i = 0; i < reads.size(); ++i)
    for (const Term& t : code.at(reads[i].node, reads[i].row))
      a.at(i, column[t.var]) = t.coef;
  Matrix combo = Matrix::identity(reads.size());
  const auto pivots = row_reduce(f, a, combo);

  SpanSolution out;
  for (const auto& tf : targets) {
    std::vector<Element> residual(column.size(), 0);
    for (const Term& t : tf) residual[column[t.var]] = t.coef;
    std::vector<Element> weights(reads.size(), 0);
    for (std::size_t p = 0; p < pivots.size(); ++p) {
      const Element c = residual[pivots[p]];
      if (c == 0) continue;
      f.axpy(residual, c, a.row(p));
      f.axpy(weights, c, combo.row(p));
    }
    if (std::any_of(residual.begin(), residual.end(), [](Element e) { return e != 0; })) {
      out.targets.emplace_back(std::nullopt);
      continue;
    }
    Weights w;
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (weights[i] != 0) w.emplace_back(i, weights[i]);
    out.targets.emplace_back(std::move(w));
  }
  for (std::size_t z = pivots.size(); z < reads.size(); ++z) {
    Weights w;
    for (std::size_t i = 0; i < reads.size(); ++i)
      if (combo.at(z, i) != 0) w.emplace_back(i, combo.at(z, i));
    if (!w.empty()) out.relations.push_back(std::move(w));
  }
  return out;
}

std::vector<NodeVector> decode(const LinearCode& code,
                               std::span<const std::uint32_t> nodes,
                               std::span<const NodeVector> contents) {
  require(nodes.size() == contents.size(), "decode: one content per node");
  require(!contents.empty(), "decode: no nodes given");
  const std::size_t len = contents[0].payload_len();
  for (const auto& c : contents)
    require(c.alpha() == code.alpha && c.payload_len() == len,
            "decode: content shape mismatch");

  std::vector<Cell> reads;
  for (std::uint32_t node : nodes) {
    require(node >= 1 && node <= code.n(), "decode: node index out of range");
    for (std::uint32_t j = 1; j <= code.alpha; ++j) reads.push_back({node, j});
  }
  std::vector<Functional> targets;
  for (std::uint32_t v = 0; v < code.dimension(); ++v) targets.push_back(unit(v));
  const SpanSolution sol = span_solve(code, reads, targets);
  if (!sol.all_solved())
    fail(ErrorKind::singular, "available nodes do not determine the data");

  std::vector<NodeVector> data(code.k, NodeVector(code.alpha, len));
  for (std::uint32_t v = 0; v < code.dimension(); ++v) {
    const Cell dst = code.cell_of(v);
    for (auto [idx, w] : *sol.targets[v]) {
      const Cell src = reads[idx];
      code.field.axpy(data[dst.node - 1].substripe(dst.row), w,
                      contents[idx / code.alpha].substripe(src.row));
    }
  }
  return data;
}

}  // namespace htlrc
