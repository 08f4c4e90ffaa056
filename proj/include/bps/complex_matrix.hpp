#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "bps/summation.hpp"

namespace bps {

using cplx = std::complex<double>;

/// Dense row-major complex matrix. Plain value type; all decompositions and
/// kernels operate on it.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  cplx* data() { return data_.data(); }
  const cplx* data() const { return data_.data(); }

  bool operator==(const CMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

inline CMatrix adjoint(const CMatrix& m) {
  CMatrix a(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a(j, i) = std::conj(m(i, j));
  return a;
}

/// Squared Frobenius norm, compensated.
inline double frobenius_norm_sq(const CMatrix& m) {
  NeumaierSum s;
  for (std::size_t i = 0; i < m.size(); ++i) s.add(std::norm(m.data()[i]));
  return s.value();
}

inline double frobenius_norm(const CMatrix& m) {
  return std::sqrt(frobenius_norm_sq(m));
}

inline double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  NeumaierSum s;
  for (std::size_t i = 0; i < a.size(); ++i)
    s.add(std::norm(a.data()[i] - b.data()[i]));
  return std::sqrt(s.value());
}

}  // namespace bps
