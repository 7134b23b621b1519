#include "bergman/laplacian.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

double radial_weight(double l1, double l2) { return 2.0 * (std::cosh(2.0 * l1) - std::cosh(2.0 * l2)); }

namespace {

// Shared stencil: G given at the 5-point cross around (l1, l2).
double radial_stencil(int N, double l1, double l2, double h, double g0, double g1p, double g1m, double g2p,
                      double g2m) {
    const double d1 = (g1p - g1m) / (2.0 * h), d2 = (g2p - g2m) / (2.0 * h);
    const double d11 = (g1p - 2.0 * g0 + g1m) / (h * h), d22 = (g2p - 2.0 * g0 + g2m) / (h * h);
    const double L1 = d11 + 2.0 / std::tanh(2.0 * l1) * d1;
    const double L2 = d22 + 2.0 / std::tanh(2.0 * l2) * d2;
    const double drift = 0.5 * N * (std::tanh(l1) * d1 + std::tanh(l2) * d2);
    return (0.25 * (L1 + L2) - drift) / radial_weight(l1, l2);
}

}  // namespace

double radial_apply(int N, const RadialFn& phi, const RadialPoint& p, double h) {
    const double l1 = p.lambda1, l2 = p.lambda2;
    if (l2 < 2.0 * h || l1 - l2 < 2.0 * h) throw ChamberWallTooClose("radial point within 2h of a chamber wall");
    auto G = [&](double a, double b) { return radial_weight(a, b) * phi(a, b); };
    return radial_stencil(N, l1, l2, h, G(l1, l2), G(l1 + h, l2), G(l1 - h, l2), G(l1, l2 + h), G(l1, l2 - h));
}

RadialGrid RadialGrid::sample(const RadialFn& phi, double lo, double hi, int n) {
    if (n < 3 || !(hi > lo)) throw ValidationError("radial grid needs n >= 3 and hi > lo");
    RadialGrid g;
    g.lo = lo;
    g.hi = hi;
    g.n = n;
    g.values.resize(std::size_t(n) * std::size_t(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.values[std::size_t(i) * n + j] = phi(g.coord(i), g.coord(j));
    return g;
}

double radial_apply(int N, const RadialGrid& grid, int i, int j) {
    if (i < 1 || j < 1 || i >= grid.n - 1 || j >= grid.n - 1)
        throw ChamberWallTooClose("grid node has no neighbours on every side");
    const double h = grid.step();
    const double l1 = grid.coord(i), l2 = grid.coord(j);
    if (l2 < 2.0 * h || l1 - l2 < 2.0 * h) throw ChamberWallTooClose("grid node within 2h of a chamber wall");
    auto G = [&](int a, int b) { return radial_weight(grid.coord(a), grid.coord(b)) * grid.at(a, b); };
    return radial_stencil(N, l1, l2, h, G(i, j), G(i + 1, j), G(i - 1, j), G(i, j + 1), G(i, j - 1));
}

namespace {

Mat2 real_dir(int k) {
    Mat2 e = Mat2::Zero();
    e((k / 2) / 2, (k / 2) % 2) = (k % 2) ? kI : cplx(1.0);
    return e;
}

cplx full_apply_once(int N, const DomainFn& f, const Mat2& Z, double h) {
    // Real coordinates r_{2e} = Re z_e, r_{2e+1} = Im z_e for entries e = (0,0),(0,1),(1,0),(1,1).
    std::array<std::array<cplx, 8>, 8> R;
    std::array<cplx, 8> g;
    const cplx f0 = f(Z);
    for (int k = 0; k < 8; ++k) {
        const Mat2 u = real_dir(k);
        const cplx fp = f(Z + h * u), fm = f(Z - h * u);
        g[k] = (fp - fm) / (2.0 * h);
        R[k][k] = (fp - 2.0 * f0 + fm) / (h * h);
        for (int l = 0; l < k; ++l) {
            const Mat2 v = real_dir(l);
            R[k][l] = R[l][k] =
                (f(Z + h * (u + v)) - f(Z + h * (u - v)) - f(Z - h * (u - v)) + f(Z - h * (u + v))) / (4.0 * h * h);
        }
    }
    // H(e1, e2) = d^2 f / dzbar_{e1} dz_{e2}; Gbar(e) = df / dzbar_e.
    auto H = [&](int e1, int e2) {
        const int x1 = 2 * e1, y1 = x1 + 1, x2 = 2 * e2, y2 = x2 + 1;
        return 0.25 * (R[x1][x2] + R[y1][y2] + kI * (R[y1][x2] - R[x1][y2]));
    };
    Mat2 Gbar;
    for (int e = 0; e < 4; ++e) Gbar(e / 2, e % 2) = 0.5 * (g[2 * e] + kI * g[2 * e + 1]);

    const Mat2 E = Mat2::Identity();
    const Mat2 A = E - Z * Z.adjoint();
    const Mat2 B = E - Z.adjoint() * Z;
    cplx lap = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) lap += A(a, b) * B(c, d) * H(2 * b + c, 2 * a + d);
    const cplx drift = -double(N) * (A * Gbar * Z.adjoint()).trace();
    return lap + drift;
}

}  // namespace

cplx full_apply(int N, const DomainFn& f, const DomainPoint& Z, double h) {
    if (1.0 - spectral_norm2(Z.z) < 2.0 * h) throw BoundaryTooClose("full_apply: point within 2h of the boundary");
    const cplx d1 = full_apply_once(N, f, Z.z, h);
    const cplx d2 = full_apply_once(N, f, Z.z, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

cplx eigenvalue(int N, cplx tau1, cplx tau2) {
    const double n1 = N - 1.0;
    return -0.25 * (2.0 * n1 * n1 + tau1 * tau1 + tau2 * tau2);
}

DiscreteSpectrum discrete_spectrum(int N) {
    if (N < 2) throw InvalidLevel("discrete_spectrum requires N >= 2");
    DiscreteSpectrum s;
    s.N = N;
    s.k = (N - 1) / 2;
    for (int l1 = 0; l1 <= s.k; ++l1)
        for (int l2 = 0; l2 <= s.k; ++l2) {
            SpectrumEntry e;
            e.l1 = l1;
            e.l2 = l2;
            e.tau1_im = -double(N - 1 - 2 * l1);
            e.tau2_im = -double(N - 1 - 2 * l2);
            e.eig_printed = double((N - 1) * (l1 + l2) + l1 * l1 + l2 * l2);
            e.eig_substituted = -eigenvalue(N, cplx(0.0, e.tau1_im), cplx(0.0, e.tau2_im)).real();
            if (l1 != l2) e.degeneracy_note = "paired with (" + std::to_string(l2) + "," + std::to_string(l1) + ")";
            s.entries.push_back(e);
        }
    s.enumerated_count = int(s.entries.size());
    s.formula_count = 0.5 * s.k * (s.k - 1);
    return s;
}

double continuous_floor(int N) {
    if (N < 2) throw InvalidLevel("continuous_floor requires N >= 2");
    return 0.5 * (N - 1.0) * (N - 1.0);
}

SpectrumEntry continuous_entry(int N, double tau1, double tau2) {
    SpectrumEntry e;
    e.discrete = false;
    e.tau1 = tau1;
    e.tau2 = tau2;
    e.eig_substituted = e.eig_printed = -eigenvalue(N, tau1, tau2).real();
    return e;
}

std::string spectrum_csv(const DiscreteSpectrum& s) {
    std::ostringstream os;
    os << "N,l1,l2,eig_printed,eig_substituted,tau1_im,tau2_im\n";
    for (const auto& e : s.entries)
        os << s.N << ',' << e.l1 << ',' << e.l2 << ',' << e.eig_printed << ',' << e.eig_substituted << ','
           << e.tau1_im << ',' << e.tau2_im << '\n';
    return os.str();
}

}  // namespace bergman
