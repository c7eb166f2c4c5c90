#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hamlat/field.hpp"
#include "hamlat/hamming.hpp"

namespace hamlat {

/// Square n x n matrix over an exact field, row-major.
template <ExactField F>
class Matrix {
 public:
  using Element = typename F::Element;

  Matrix(F field, std::size_t n) : field_(std::move(field)), n_(n), a_(n * n, field_.zero()) {
    if (n == 0) throw std::invalid_argument("matrix dimension must be positive");
  }

  static Matrix identity(const F& field, std::size_t n) {
    Matrix m(field, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
    return m;
  }

  /// The matrix unit E_ij.
  static Matrix unit(const F& field, std::size_t n, std::size_t i, std::size_t j) {
    Matrix m(field, n);
    m(i, j) = field.one();
    return m;
  }

  static Matrix from_rows(const F& field, const std::vector<std::vector<Element>>& rows) {
    Matrix m(field, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix rows must form a square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_ints(const F& field, const std::vector<std::vector<std::int64_t>>& rows) {
    Matrix m(field, rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix rows must form a square");
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = field.from_int(rows[i][j]);
    }
    return m;
  }

  const F& field() const { return field_; }
  std::size_t n() const { return n_; }
  const Element& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  Element& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const std::vector<Element>& entries() const { return a_; }

  bool is_zero() const {
    for (const auto& x : a_) {
      if (!field_.is_zero(x)) return false;
    }
    return true;
  }

  Matrix scaled(const Element& c) const {
    Matrix out = *this;
    for (auto& x : out.a_) x = field_.mul(c, x);
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    a.require_compatible(b);
    Matrix out = a;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] = a.field_.add(a.a_[k], b.a_[k]);
    return out;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    a.require_compatible(b);
    Matrix out = a;
    for (std::size_t k = 0; k < out.a_.size(); ++k) out.a_[k] = a.field_.sub(a.a_[k], b.a_[k]);
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.require_compatible(b);
    const std::size_t n = a.n_;
    Matrix out(a.field_, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Element& aik = a(i, k);
        if (a.field_.is_zero(aik)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (a.field_.is_zero(b(k, j))) continue;
          out(i, j) = a.field_.add(out(i, j), a.field_.mul(aik, b(k, j)));
        }
      }
    }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.n_ == b.n_ && a.a_ == b.a_;
  }

  /// Lexicographic order on the row-major entries; matrices of one field and size only.
  friend bool operator<(const Matrix& a, const Matrix& b) {
    a.require_compatible(b);
    for (std::size_t k = 0; k < a.a_.size(); ++k) {
      if (a.a_[k] != b.a_[k]) return a.a_[k] < b.a_[k];
    }
    return false;
  }

 private:
  void require_compatible(const Matrix& b) const {
    if (!(field_ == b.field_) || n_ != b.n_) {
      throw std::invalid_argument("matrices of different fields or dimensions (" + std::to_string(n_) + " vs " +
                                  std::to_string(b.n_) + ")");
    }
  }

  F field_;
  std::size_t n_;
  std::vector<Element> a_;
};

/// Rank of a list of equal-length rows by Gaussian elimination.
template <ExactField F>
std::size_t row_rank(const F& field, std::vector<std::vector<typename F::Element>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && field.is_zero(rows[pivot][c])) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const auto inv = field.inv(rows[rank][c]);
    for (std::size_t j = c; j < cols; ++j) rows[rank][j] = field.mul(rows[rank][j], inv);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (field.is_zero(rows[r][c])) continue;
      const auto factor = rows[r][c];
      for (std::size_t j = c; j < cols; ++j) {
        rows[r][j] = field.sub(rows[r][j], field.mul(factor, rows[rank][j]));
      }
    }
    ++rank;
  }
  return rank;
}

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  std::vector<std::vector<typename F::Element>> rows(m.n());
  for (std::size_t i = 0; i < m.n(); ++i) {
    rows[i].assign(m.entries().begin() + static_cast<std::ptrdiff_t>(i * m.n()),
                   m.entries().begin() + static_cast<std::ptrdiff_t>((i + 1) * m.n()));
  }
  return row_rank(m.field(), std::move(rows));
}

/// Gauss-Jordan inverse; nullopt for a singular matrix.
template <ExactField F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  const auto& field = m.field();
  const std::size_t n = m.n();
  Matrix<F> a = m;
  Matrix<F> inv = Matrix<F>::identity(field, n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && field.is_zero(a(pivot, c))) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(c, j));
        std::swap(inv(pivot, j), inv(c, j));
      }
    }
    const auto scale = field.inv(a(c, c));
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) = field.mul(a(c, j), scale);
      inv(c, j) = field.mul(inv(c, j), scale);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || field.is_zero(a(r, c))) continue;
      const auto factor = a(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) = field.sub(a(r, j), field.mul(factor, a(c, j)));
        inv(r, j) = field.sub(inv(r, j), field.mul(factor, inv(c, j)));
      }
    }
  }
  return inv;
}

template <ExactField F>
typename F::Element trace(const Matrix<F>& m) {
  auto t = m.field().zero();
  for (std::size_t i = 0; i < m.n(); ++i) t = m.field().add(t, m(i, i));
  return t;
}

/// Kronecker product; row (i, k) is i * b.n() + k, matching TensorIndexing.
template <ExactField F>
Matrix<F> kron(const Matrix<F>& a, const Matrix<F>& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("kron: matrices over different fields");
  const std::size_t m = b.n();
  Matrix<F> out(a.field(), a.n() * m);
  for (std::size_t i = 0; i < a.n(); ++i) {
    for (std::size_t j = 0; j < a.n(); ++j) {
      if (a.field().is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t l = 0; l < m; ++l) out(i * m + k, j * m + l) = a.field().mul(a(i, j), b(k, l));
      }
    }
  }
  return out;
}

/// The unital embedding M_n -> M_{nm}, a -> a (x) I_m.
template <ExactField F>
Matrix<F> embed(const Matrix<F>& a, std::size_t m) {
  return kron(a, Matrix<F>::identity(a.field(), m));
}

/// rank(a) / n.
template <ExactField F>
Rank relative_rank(const Matrix<F>& a) {
  return Rank(static_cast<std::int64_t>(rank(a)), static_cast<std::int64_t>(a.n()));
}

template <ExactField F>
std::string to_string(const Matrix<F>& m) {
  std::string out = "[";
  for (std::size_t i = 0; i < m.n(); ++i) {
    out += i == 0 ? "[" : ",[";
    for (std::size_t j = 0; j < m.n(); ++j) {
      if (j > 0) out += ",";
      out += m.field().to_string(m(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace hamlat
