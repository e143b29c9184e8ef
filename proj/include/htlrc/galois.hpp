#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace htlrc {

using Element = std::uint16_t;

/// Reference multiply: carry-less product of a and b reduced modulo poly.
/// Slow; exists so the table-driven path has an independent cross-check.
Element clmul_reduce(Element a, Element b, unsigned w, std::uint32_t poly);

/// True when poly (bit `degree` set) has no factor of degree 1..degree/2.
bool is_irreducible(std::uint32_t poly, unsigned degree);

/// GF(2^w) for 2 <= w <= 16. Immutable; copies share the log/antilog tables.
class Field {
 public:
  Field(unsigned w, std::uint32_t poly);

  /// x^5 + x^3 + 1, the field of the golden (9,6) code.
  static Field gf32();
  /// x^8 + x^4 + x^3 + x^2 + 1.
  static Field gf256();
  /// x^16 + x^12 + x^3 + x + 1.
  static Field gf65536();

  unsigned w() const noexcept { return w_; }
  std::uint32_t poly() const noexcept { return poly_; }
  std::uint32_t size() const noexcept { return 1u << w_; }
  Element generator() const noexcept { return tables_->generator; }

  bool contains(std::uint32_t v) const noexcept { return v < size(); }

  static Element add(Element a, Element b) noexcept { return a ^ b; }
  Element mul(Element a, Element b) const noexcept {
    if (a == 0 || b == 0) return 0;
    return tables_->exp[tables_->log[a] + tables_->log[b]];
  }
  Element inv(Element a) const;  // throws on zero
  Element div(Element a, Element b) const;
  Element pow(Element a, std::uint32_t e) const noexcept;

  /// dst[i] ^= c * src[i]
  void axpy(std::span<Element> dst, Element c,
            std::span<const Element> src) const noexcept;
  void scale(std::span<Element> v, Element c) const noexcept;

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.w_ == b.w_ && a.poly_ == b.poly_;
  }

 private:
  struct Tables {
    Element generator = 0;
    std::vector<std::uint32_t> log;
    std::vector<Element> exp;  // doubled so log sums need no modulo
  };

  unsigned w_;
  std::uint32_t poly_;
  std::shared_ptr<const Tables> tables_;
};

/// Dense row-major matrix over a field.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Element> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0) {}

  static Matrix identity(std::size_t n);

  Element& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Element at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<Element> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const Element> row(std::size_t r) const {
    return {data.data() + r * cols, cols};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

Matrix multiply(const Field& f, const Matrix& a, const Matrix& b);
std::vector<Element> multiply(const Field& f, const Matrix& a,
                              std::span<const Element> x);

/// Solve A x = b by Gaussian elimination (pivot = first nonzero entry in the
/// column). Returns nullopt when A is singular.
std::optional<std::vector<Element>> solve(const Field& f, Matrix a,
                                          std::vector<Element> b);

std::optional<Matrix> invert(const Field& f, Matrix a);

/// In-place reduction of `a` to reduced row echelon form. Every row operation
/// is mirrored on `aug` (same row count, any column count). Returns the pivot
/// column of each of the leading rows.
std::vector<std::size_t> row_reduce(const Field& f, Matrix& a, Matrix& aug);

std::size_t rank(const Field& f, Matrix a);

}  // namespace htlrc
