#include "dstc/gaussian.hpp"

#include <sstream>
#include <stdexcept>

namespace dstc {

std::string GaussInt::to_string() const {
  if (im == 0) return std::to_string(re);
  if (re == 0) {
    if (im == 1) return "i";
    if (im == -1) return "-i";
    return std::to_string(im) + "i";
  }
  return std::to_string(re) + (im < 0 ? "-" : "+") + std::to_string(im < 0 ? -im : im) + "i";
}

GaussMatrix GaussMatrix::identity(std::size_t size) {
  GaussMatrix m(size);
  for (std::size_t k = 0; k < size; ++k) m(k, k) = 1;
  return m;
}

GaussMatrix GaussMatrix::adjoint() const {
  GaussMatrix out(size_);
  for (std::size_t r = 0; r < size_; ++r) {
    for (std::size_t c = 0; c < size_; ++c) out(c, r) = (*this)(r, c).conj();
  }
  return out;
}

GaussMatrix GaussMatrix::operator-() const {
  GaussMatrix out = *this;
  for (auto& v : out.data_) v = -v;
  return out;
}

GaussMatrix& GaussMatrix::operator+=(const GaussMatrix& o) {
  if (o.size_ != size_) throw std::invalid_argument("matrix size mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

GaussMatrix& GaussMatrix::operator*=(GaussInt s) {
  for (auto& v : data_) v = v * s;
  return *this;
}

GaussMatrix operator*(const GaussMatrix& a, const GaussMatrix& b) {
  if (a.size_ != b.size_) throw std::invalid_argument("matrix size mismatch");
  const std::size_t n = a.size_;
  GaussMatrix out(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const GaussInt lhs = a(r, k);
      if (lhs.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += lhs * b(k, c);
    }
  }
  return out;
}

bool GaussMatrix::is_zero() const {
  for (const auto& v : data_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

bool GaussMatrix::is_identity() const {
  for (std::size_t r = 0; r < size_; ++r) {
    for (std::size_t c = 0; c < size_; ++c) {
      if ((*this)(r, c) != GaussInt(r == c ? 1 : 0)) return false;
    }
  }
  return true;
}

bool GaussMatrix::is_monomial_unit_matrix() const {
  std::vector<int> col_hits(size_, 0);
  for (std::size_t r = 0; r < size_; ++r) {
    int row_hits = 0;
    for (std::size_t c = 0; c < size_; ++c) {
      const GaussInt v = (*this)(r, c);
      if (v.is_zero()) continue;
      if (v.norm() != 1) return false;
      ++row_hits;
      ++col_hits[c];
    }
    if (row_hits != 1) return false;
  }
  for (int h : col_hits) {
    if (h != 1) return false;
  }
  return true;
}

CMatrix GaussMatrix::to_eigen() const {
  CMatrix out(size_, size_);
  for (std::size_t r = 0; r < size_; ++r) {
    for (std::size_t c = 0; c < size_; ++c) out(r, c) = (*this)(r, c).to_complex();
  }
  return out;
}

std::string GaussMatrix::to_string() const {
  std::ostringstream os;
  for (std::size_t r = 0; r < size_; ++r) {
    os << "[";
    for (std::size_t c = 0; c < size_; ++c) os << (c ? " " : "") << (*this)(r, c).to_string();
    os << "]\n";
  }
  return os.str();
}

}  // namespace dstc
