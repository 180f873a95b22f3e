#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace radial {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Raised when an iterative kernel fails to converge or a numerical
/// verification step rejects its input.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(cplx z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Dense complex matrix stored row-major.
///
/// Every constructor rejects NaN/Inf entries. A 0x0 matrix is allowed and
/// stands for an empty diagonal block.
class CMatrix {
public:
  CMatrix() = default;

  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
      throw std::invalid_argument("CMatrix: entry count " + std::to_string(data_.size()) +
                                  " does not match " + std::to_string(rows_) + "x" +
                                  std::to_string(cols_));
    for (const auto& z : data_)
      if (!is_finite(z)) throw std::invalid_argument("CMatrix: non-finite entry");
  }

  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("CMatrix: ragged initializer");
      for (const auto& z : r) {
        if (!is_finite(z)) throw std::invalid_argument("CMatrix: non-finite entry");
        data_.push_back(z);
      }
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(std::span<const cplx> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static CMatrix diagonal(std::initializer_list<cplx> d) {
    return diagonal(std::span<const cplx>(d.begin(), d.size()));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  CMatrix adjoint() const {
    CMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
  }

  CVector column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  CVector diag() const {
    const std::size_t k = std::min(rows_, cols_);
    CVector v(k);
    for (std::size_t i = 0; i < k; ++i) v[i] = (*this)(i, i);
    return v;
  }

  /// Contiguous sub-block [r0, r0+nr) x [c0, c0+nc).
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    CMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const CMatrix& b) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& z : data_) z *= s;
    return *this;
  }
  CMatrix& operator/=(cplx s) {
    for (auto& z : data_) z /= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator/(CMatrix a, cplx s) { return a /= s; }
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("CMatrix: product shape mismatch");
    CMatrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }

  friend CVector operator*(const CMatrix& a, std::span<const cplx> x) {
    if (a.cols_ != x.size()) throw std::invalid_argument("CMatrix: vector shape mismatch");
    CVector y(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx s{};
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
  void check_same(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument("CMatrix: shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline CVector operator*(const CMatrix& a, const CVector& x) {
  return a * std::span<const cplx>(x);
}

// ---------------------------------------------------------------------------
// Small vector helpers. The inner product is linear in the first argument:
// inner(x, y) = y* x.

inline cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  cplx s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * std::conj(y[i]);
  return s;
}

inline double norm2(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& z : x) s += std::norm(z);
  return std::sqrt(s);
}

inline CVector normalized(CVector x) {
  const double n = norm2(x);
  if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
  for (auto& z : x) z /= n;
  return x;
}

/// Rank-one operator x (x) y mapping z to (z, y) x, i.e. the matrix x y*.
inline CMatrix outer(std::span<const cplx> x, std::span<const cplx> y) {
  CMatrix m(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) m(i, j) = x[i] * std::conj(y[j]);
  return m;
}

inline double frobenius_norm(const CMatrix& a) { return norm2(a.data()); }

inline double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.data()) m = std::max(m, std::abs(z));
  return m;
}

inline cplx trace(const CMatrix& a) {
  cplx s{};
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) s += a(i, i);
  return s;
}

/// Hermitian part (X + X*)/2.
inline CMatrix hermitian_part(const CMatrix& a) {
  CMatrix h(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) h(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
  return h;
}

/// Block-diagonal direct sum.
inline CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

}  // namespace radial
