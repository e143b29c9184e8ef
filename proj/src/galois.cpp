#include "htlrc/galois.hpp"

#include <bit>
#include <string>

#include "htlrc/errors.hpp"

namespace htlrc {

namespace {

unsigned degree_of(std::uint32_t p) {
  return p == 0 ? 0 : static_cast<unsigned>(std::bit_width(p)) - 1;
}

// Remainder of polynomial division a mod b over GF(2).
std::uint32_t poly_mod(std::uint32_t a, std::uint32_t b) {
  const unsigned db = degree_of(b);
  while (a != 0 && degree_of(a) >= db) a ^= b << (degree_of(a) - db);
  return a;
}

}  // namespace

Element clmul_reduce(Element a, Element b, unsigned w, std::uint32_t poly) {
  std::uint32_t product = 0;
  for (unsigned i = 0; i < w; ++i)
    if (b & (1u << i)) product ^= static_cast<std::uint32_t>(a) << i;
  return static_cast<Element>(poly_mod(product, poly));
}

bool is_irreducible(std::uint32_t poly, unsigned degree) {
  if (degree_of(poly) != degree || degree == 0) return false;
  for (unsigned d = 1; d <= degree / 2; ++d)
    for (std::uint32_t q = 1u << d; q < (2u << d); ++q)
      if (poly_mod(poly, q) == 0) return false;
  return true;
}

Field::Field(unsigned w, std::uint32_t poly) : w_(w), poly_(poly) {
  require(w >= 2 && w <= 16, "field word size must be in [2, 16], got " +
                                 std::to_string(w));
  require(degree_of(poly) == w,
          "field polynomial must have degree exactly " + std::to_string(w));
  require(is_irreducible(poly, w), "field polynomial is not irreducible");

  const std::uint32_t order = (1u << w) - 1;
  auto tables = std::make_shared<Tables>();
  tables->log.assign(1u << w, 0);
  tables->exp.assign(2 * order, 0);

  // Smallest element whose powers cover the whole multiplicative group.
  for (std::uint32_t g = 2; g <= order; ++g) {
    Element x = 1;
    std::uint32_t period = 0;
    do {
      x = clmul_reduce(x, static_cast<Element>(g), w, poly);
      ++period;
    } while (x != 1);
    if (period == order) {
      tables->generator = static_cast<Element>(g);
      break;
    }
  }

  Element x = 1;
  for (std::uint32_t i = 0; i < order; ++i) {
    tables->exp[i] = x;
    tables->exp[i + order] = x;
    tables->log[x] = i;
    x = clmul_reduce(x, tables->generator, w, poly);
  }
  tables_ = std::move(tables);
}

Field Field::gf32() { return Field(5, 0b101001); }
Field Field::gf256() { return Field(8, 0x11D); }
Field Field::gf65536() { return Field(16, 0x1100B); }

Element Field::inv(Element a) const {
  if (a == 0) fail(ErrorKind::validation, "division by zero in GF(2^w)");
  const std::uint32_t order = size() - 1;
  return tables_->exp[(order - tables_->log[a]) % order];
}

Element Field::div(Element a, Element b) const { return mul(a, inv(b)); }

Element Field::pow(Element a, std::uint32_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  const std::uint64_t order = size() - 1;
  return tables_->exp[(static_cast<std::uint64_t>(tables_->log[a]) * e) % order];
}

void Field::axpy(std::span<Element> dst, Element c,
                 std::span<const Element> src) const noexcept {
  if (c == 0) return;
  if (c == 1) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
    return;
  }
  const std::uint32_t lc = tables_->log[c];
  const Element* exp = tables_->exp.data();
  const std::uint32_t* log = tables_->log.data();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (src[i] != 0) dst[i] ^= exp[lc + log[src[i]]];
}

void Field::scale(std::span<Element> v, Element c) const noexcept {
  for (auto& e : v) e = mul(e, c);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b) {
  require(a.cols == b.rows, "matrix shape mismatch in multiply");
  Matrix out(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t k = 0; k < a.cols; ++k)
      f.axpy(out.row(i), a.at(i, k), b.row(k));
  return out;
}

std::vector<Element> multiply(const Field& f, const Matrix& a,
                              std::span<const Element> x) {
  require(a.cols == x.size(), "matrix/vector shape mismatch in multiply");
  std::vector<Element> out(a.rows, 0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    Element acc = 0;
    for (std::size_t j = 0; j < a.cols; ++j) acc ^= f.mul(a.at(i, j), x[j]);
    out[i] = acc;
  }
  return out;
}

std::vector<std::size_t> row_reduce(const Field& f, Matrix& a, Matrix& aug) {
  std::vector<std::size_t> pivots;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < a.cols && lead < a.rows; ++col) {
    std::size_t p = lead;
    while (p < a.rows && a.at(p, col) == 0) ++p;
    if (p == a.rows) continue;
    if (p != lead) {
      for (std::size_t c = 0; c < a.cols; ++c) std::swap(a.at(p, c), a.at(lead, c));
      for (std::size_t c = 0; c < aug.cols; ++c)
        std::swap(aug.at(p, c), aug.at(lead, c));
    }
    const Element scale = f.inv(a.at(lead, col));
    f.scale(a.row(lead), scale);
    f.scale(aug.row(lead), scale);
    for (std::size_t r = 0; r < a.rows; ++r) {
      if (r == lead) continue;
      const Element factor = a.at(r, col);
      if (factor == 0) continue;
      f.axpy(a.row(r), factor, a.row(lead));
      f.axpy(aug.row(r), factor, aug.row(lead));
    }
    pivots.push_back(col);
    ++lead;
  }
  return pivots;
}

std::optional<std::vector<Element>> solve(const Field& f, Matrix a,
                                          std::vector<Element> b) {
  require(a.rows == a.cols, "solve requires a square matrix");
  require(b.size() == a.rows, "solve: right-hand side length mismatch");
  Matrix aug(a.rows, 1);
  for (std::size_t i = 0; i < b.size(); ++i) aug.at(i, 0) = b[i];
  if (row_reduce(f, a, aug).size() != a.rows) return std::nullopt;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = aug.at(i, 0);
  return b;
}

std::optional<Matrix> invert(const Field& f, Matrix a) {
  require(a.rows == a.cols, "invert requires a square matrix");
  Matrix inv = Matrix::identity(a.rows);
  if (row_reduce(f, a, inv).size() != a.rows) return std::nullopt;
  return inv;
}

std::size_t rank(const Field& f, Matrix a) {
  Matrix none(a.rows, 0);
  return row_reduce(f, a, none).size();
}

}  // namespace htlrc
