#include "tmkt/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace tmkt {

double max_abs_diff(const Matrix2& x, const Matrix2& y) {
  return std::max({std::abs(x.a11 - y.a11), std::abs(x.a12 - y.a12),
                   std::abs(x.a21 - y.a21), std::abs(x.a22 - y.a22)});
}

std::array<Complex, 2> eigenvalues(const Matrix2& m) {
  const double half_tr = 0.5 * m.trace();
  // Shifted discriminant avoids cancellation in tr^2/4 - det.
  const double half_diff = 0.5 * (m.a11 - m.a22);
  const double disc = half_diff * half_diff + m.a12 * m.a21;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double big = half_tr >= 0.0 ? half_tr + s : half_tr - s;
    double other = 0.0;
    if (big != 0.0) {
      other = m.det() / big;
    } else {
      other = half_tr - s;
    }
    const double hi = std::max(big, other);
    const double lo = std::min(big, other);
    return {Complex{hi, 0.0}, Complex{lo, 0.0}};
  }
  const double im = std::sqrt(-disc);
  return {Complex{half_tr, im}, Complex{half_tr, -im}};
}

Matrix2 Matrix4::block(std::size_t bi, std::size_t bj) const {
  const std::size_t i = 2 * bi;
  const std::size_t j = 2 * bj;
  return {(*this)(i, j), (*this)(i, j + 1), (*this)(i + 1, j), (*this)(i + 1, j + 1)};
}

void Matrix4::set_block(std::size_t bi, std::size_t bj, const Matrix2& m) {
  const std::size_t i = 2 * bi;
  const std::size_t j = 2 * bj;
  (*this)(i, j) = m.a11;
  (*this)(i, j + 1) = m.a12;
  (*this)(i + 1, j) = m.a21;
  (*this)(i + 1, j + 1) = m.a22;
}

Matrix4 Matrix4::from_blocks(const Matrix2& b00, const Matrix2& b01,
                             const Matrix2& b10, const Matrix2& b11) {
  Matrix4 out;
  out.set_block(0, 0, b00);
  out.set_block(0, 1, b01);
  out.set_block(1, 0, b10);
  out.set_block(1, 1, b11);
  return out;
}

Matrix4 operator+(const Matrix4& x, const Matrix4& y) {
  Matrix4 out;
  for (std::size_t k = 0; k < 16; ++k) out.a_[k] = x.a_[k] + y.a_[k];
  return out;
}

Matrix4 operator-(const Matrix4& x, const Matrix4& y) {
  Matrix4 out;
  for (std::size_t k = 0; k < 16; ++k) out.a_[k] = x.a_[k] - y.a_[k];
  return out;
}

Matrix4 operator*(double s, const Matrix4& x) {
  Matrix4 out;
  for (std::size_t k = 0; k < 16; ++k) out.a_[k] = s * x.a_[k];
  return out;
}

double max_abs_diff(const Matrix4& x, const Matrix4& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      worst = std::max(worst, std::abs(x(i, j) - y(i, j)));
    }
  }
  return worst;
}

std::array<Complex, 4> eigenvalues(const Matrix4& m) {
  Eigen::Matrix4d e;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) e(i, j) = m(i, j);
  }
  Eigen::EigenSolver<Eigen::Matrix4d> solver(e, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

double max_real_part(std::span<const Complex> values) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) worst = std::max(worst, v.real());
  return worst;
}

std::vector<Complex> sorted_spectrum(std::span<const Complex> values) {
  std::vector<Complex> out(values.begin(), values.end());
  std::sort(out.begin(), out.end(), [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

double spectrum_distance(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  std::vector<Complex> pool(y.begin(), y.end());
  double worst = 0.0;
  for (const auto& v : x) {
    auto best = pool.begin();
    for (auto it = pool.begin(); it != pool.end(); ++it) {
      if (std::abs(*it - v) < std::abs(*best - v)) best = it;
    }
    worst = std::max(worst, std::abs(*best - v));
    pool.erase(best);
  }
  return worst;
}

double Quadratic::argmin_nonnegative() const {
  if (c2 < 0.0 || (c2 == 0.0 && c1 < 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  if (c2 == 0.0) return 0.0;
  return std::max(0.0, -c1 / (2.0 * c2));
}

double Quadratic::min_nonnegative() const {
  const double x = argmin_nonnegative();
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  return (*this)(x);
}

bool Quadratic::positive_on_nonnegative() const {
  if (c0 <= 0.0) return false;
  if (c2 < 0.0) return false;
  if (c2 == 0.0) return c1 >= 0.0;
  return c1 >= 0.0 || c1 * c1 < 4.0 * c0 * c2;
}

}  // namespace tmkt
