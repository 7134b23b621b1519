#include "bergman/types.hpp"

#include <cmath>

namespace bergman {

Mat4 gamma_matrix() {
    Mat4 g = Mat4::Zero();
    g.diagonal() << 1.0, 1.0, -1.0, -1.0;
    return g;
}

Mat4 from_blocks(const Mat2& a, const Mat2& b, const Mat2& c, const Mat2& d) {
    Mat4 m;
    m << a, b, c, d;
    return m;
}

double spectral_norm2(const Mat2& z) {
    const double t = (z.adjoint() * z).trace().real();
    const double dz = std::norm(z.determinant());
    const double disc = std::max(0.0, t * t - 4.0 * dz);
    return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

cplx ipow(cplx z, int n) {
    if (n < 0) {
        z = 1.0 / z;
        n = -n;
    }
    cplx r{1.0, 0.0};
    while (n) {
        if (n & 1) r *= z;
        z *= z;
        n >>= 1;
    }
    return r;
}

}  // namespace bergman
