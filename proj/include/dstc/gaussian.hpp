#pragma once

// Exact Gaussian-integer matrices. Weight and relay matrices only ever hold
// entries in {0, +-1, +-i}, so every product used by the verifiers stays small
// and all comparisons are exact.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dstc {

struct GaussInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr GaussInt() = default;
  constexpr GaussInt(std::int64_t r, std::int64_t i = 0) : re(r), im(i) {}

  constexpr GaussInt conj() const { return {re, -im}; }
  constexpr bool is_zero() const { return re == 0 && im == 0; }
  constexpr std::int64_t norm() const { return re * re + im * im; }

  constexpr GaussInt& operator+=(GaussInt o) { re += o.re; im += o.im; return *this; }
  constexpr GaussInt& operator-=(GaussInt o) { re -= o.re; im -= o.im; return *this; }
  friend constexpr GaussInt operator+(GaussInt a, GaussInt b) { return a += b; }
  friend constexpr GaussInt operator-(GaussInt a, GaussInt b) { return a -= b; }
  friend constexpr GaussInt operator-(GaussInt a) { return {-a.re, -a.im}; }
  friend constexpr GaussInt operator*(GaussInt a, GaussInt b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend constexpr bool operator==(GaussInt, GaussInt) = default;

  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  std::string to_string() const;
};

inline constexpr GaussInt kImagUnit{0, 1};

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Square matrix over Z[i], row-major.
class GaussMatrix {
 public:
  GaussMatrix() = default;
  explicit GaussMatrix(std::size_t size) : size_(size), data_(size * size) {}

  static GaussMatrix identity(std::size_t size);

  std::size_t size() const { return size_; }
  GaussInt& operator()(std::size_t r, std::size_t c) { return data_[r * size_ + c]; }
  GaussInt operator()(std::size_t r, std::size_t c) const { return data_[r * size_ + c]; }

  GaussMatrix adjoint() const;
  GaussMatrix operator-() const;
  GaussMatrix& operator+=(const GaussMatrix& o);
  GaussMatrix& operator*=(GaussInt s);

  friend GaussMatrix operator+(GaussMatrix a, const GaussMatrix& b) { return a += b; }
  friend GaussMatrix operator*(GaussMatrix a, GaussInt s) { return a *= s; }
  friend GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b);
  friend bool operator==(const GaussMatrix&, const GaussMatrix&) = default;

  bool is_zero() const;
  bool is_identity() const;
  bool is_unitary() const { return (adjoint() * *this).is_identity(); }
  /// Exactly one nonzero entry per row and column, each a unit of Z[i].
  bool is_monomial_unit_matrix() const;

  CMatrix to_eigen() const;
  std::string to_string() const;

 private:
  std::size_t size_ = 0;
  std::vector<GaussInt> data_;
};

}  // namespace dstc
