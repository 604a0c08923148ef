#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace tmkt {

using Complex = std::complex<double>;

/// Dense real 2x2 matrix, row-major entries.
struct Matrix2 {
  double a11 = 0.0;
  double a12 = 0.0;
  double a21 = 0.0;
  double a22 = 0.0;

  [[nodiscard]] constexpr double trace() const { return a11 + a22; }
  [[nodiscard]] constexpr double det() const { return a11 * a22 - a12 * a21; }

  friend constexpr Matrix2 operator+(const Matrix2& x, const Matrix2& y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend constexpr Matrix2 operator-(const Matrix2& x, const Matrix2& y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  friend constexpr Matrix2 operator*(double s, const Matrix2& x) {
    return {s * x.a11, s * x.a12, s * x.a21, s * x.a22};
  }
  friend constexpr bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Largest entrywise absolute difference.
double max_abs_diff(const Matrix2& x, const Matrix2& y);

/// Closed-form eigenvalues. Real pairs are returned in descending order,
/// complex pairs with the positive imaginary part first.
std::array<Complex, 2> eigenvalues(const Matrix2& m);

/// Dense real 4x4 matrix, row-major.
class Matrix4 {
 public:
  Matrix4() = default;

  double& operator()(std::size_t i, std::size_t j) { return a_[4 * i + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[4 * i + j]; }

  /// 2x2 block (bi, bj), each index in {0, 1}.
  [[nodiscard]] Matrix2 block(std::size_t bi, std::size_t bj) const;
  void set_block(std::size_t bi, std::size_t bj, const Matrix2& m);

  static Matrix4 from_blocks(const Matrix2& b00, const Matrix2& b01,
                             const Matrix2& b10, const Matrix2& b11);
  static Matrix4 block_diagonal(const Matrix2& top, const Matrix2& bottom) {
    return from_blocks(top, Matrix2{}, Matrix2{}, bottom);
  }

  friend Matrix4 operator+(const Matrix4& x, const Matrix4& y);
  friend Matrix4 operator-(const Matrix4& x, const Matrix4& y);
  friend Matrix4 operator*(double s, const Matrix4& x);
  friend bool operator==(const Matrix4&, const Matrix4&) = default;

  [[nodiscard]] std::span<const double, 16> data() const { return a_; }

 private:
  std::array<double, 16> a_{};
};

double max_abs_diff(const Matrix4& x, const Matrix4& y);

/// General real eigensolve (Hessenberg QR).
std::array<Complex, 4> eigenvalues(const Matrix4& m);

double max_real_part(std::span<const Complex> values);

/// Sorts by real part, then imaginary part; used when comparing spectra.
std::vector<Complex> sorted_spectrum(std::span<const Complex> values);

/// Greedy nearest-neighbour matching distance between two spectra of equal
/// size: the largest distance over matched pairs.
double spectrum_distance(std::span<const Complex> x, std::span<const Complex> y);

/// c0 + c1*x + c2*x^2.
struct Quadratic {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  [[nodiscard]] constexpr double operator()(double x) const {
    return c0 + x * (c1 + x * c2);
  }

  /// Minimizer over x >= 0; +infinity when the quadratic decreases without
  /// bound (c2 < 0, or c2 == 0 and c1 < 0).
  [[nodiscard]] double argmin_nonnegative() const;
  /// Minimum over x >= 0; -infinity when unbounded below.
  [[nodiscard]] double min_nonnegative() const;
  /// Strict positivity on [0, inf): c2 > 0 (or c2 == 0 with c1 >= 0),
  /// c0 > 0, and either c1 >= 0 or a negative discriminant.
  [[nodiscard]] bool positive_on_nonnegative() const;
  /// Coefficient-sign sufficient form: all coefficients positive except c1,
  /// which may be zero.
  [[nodiscard]] bool coefficient_signs_positive() const {
    return c0 > 0.0 && c1 >= 0.0 && c2 > 0.0;
  }
};

}  // namespace tmkt
