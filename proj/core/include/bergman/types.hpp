#pragma once

#include <complex>

#include <Eigen/Dense>

namespace bergman {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec15 = Eigen::Matrix<double, 15, 1>;

inline constexpr cplx kI{0.0, 1.0};

/// Gamma = diag(E, -E).
Mat4 gamma_matrix();

Mat4 from_blocks(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d);

inline Mat2 block_a(const Mat4& m) { return m.topLeftCorner<2, 2>(); }
inline Mat2 block_b(const Mat4& m) { return m.topRightCorner<2, 2>(); }
inline Mat2 block_c(const Mat4& m) { return m.bottomLeftCorner<2, 2>(); }
inline Mat2 block_d(const Mat4& m) { return m.bottomRightCorner<2, 2>(); }

/// Largest singular value of a 2x2 matrix.
double spectral_norm2(const Mat2& z);

/// Integer power of a nonzero complex number, negative exponents allowed.
cplx ipow(cplx z, int n);

}  // namespace bergman
