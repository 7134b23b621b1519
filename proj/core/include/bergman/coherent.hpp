#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bergman/algebra.hpp"
#include "bergman/fock.hpp"
#include "bergman/group.hpp"

namespace bergman {

struct CoherentParam {
    Mat2 kprime = Mat2::Identity();
    Mat2 kdprime = Mat2::Identity();
    double lambda1 = 0.0;
    double lambda2 = 0.0;

    static CoherentParam origin() { return {}; }
    /// z = k' T k''^dag with T = diag(th l1, th l2).
    Mat2 z() const;
    /// Throws ValidationError on non-unitary blocks, det(k')det(k'') != 1, or lambda outside the chamber.
    void validate() const;
};

/// g_x = k delta k^dag.
GroupElement coherent_group_element(const CoherentParam& x);

/// det(E - z^dag z)^N det(d + c z - z^dag b - z^dag a z)^{-N}; equals det(d_x)^{-N} for g_x^{-1} g g_x.
cplx omega(const GroupElement& g, const CoherentParam& x, int N);
cplx omega(const Mat4& g, const CoherentParam& x, int N);
/// The printed arrangement det(E - z^dag z)^N det(d + c z^dag - z b - z a z^dag)^{-N}, kept for comparison.
cplx omega_printed(const GroupElement& g, const CoherentParam& x, int N);

/// Fock-space <x|T(g)|x> = omega0_fock(g_x^{-1} g g_x).
Omega0Result omega_fock(const RepConfig& cfg, const GroupElement& g, const CoherentParam& x,
                        double lambda_max = 0.5);

struct DiffResult {
    cplx value;
    double noise = 0.0;  // |difference between the last two Richardson extrapolants|
    double step = 0.0;
};

/// Central mixed derivative d^n/dt_1..dt_n F(t) at 0 with two Richardson levels.
DiffResult mixed_derivative(const std::function<cplx(const std::vector<double>&)>& F, int order, double step);

/// Default base step for a derivative of the given order.
double default_step(int order);
/// Noise budget for a derivative of the given order.
double noise_budget(int order);

/// (1/N) d/dt omega(exp(t X_i), x) at 0; purely imaginary for every generator.
cplx coordinate_symbol(int idx, const CoherentParam& x, int N);
std::array<cplx, 15> coordinate_symbols(const CoherentParam& x, int N);

/// Real coordinate: the imaginary part of coordinate_symbol; throws NonRealSymbol if the real part exceeds 1e-6.
double coordinate_fn(int idx, const CoherentParam& x, int N);

/// (-1)^n d^n/dxi_1..dxi_n omega(exp(sum xi X), x) at 0; at most four indices.
cplx sym_moment(const CoherentParam& x, const std::vector<int>& indices, int N);

/// (1/N^2) d_s d_t omega(exp(s X) exp(t Y), x) at 0.
cplx star_product(const AlgebraElement& X, const AlgebraElement& Y, const CoherentParam& x, int N);
cplx star_product_coords(int ab, int cd, const CoherentParam& x, int N);

/// |(star(ab,cd) - star(cd,ab))/2 - (1/2N) f^{EF} xi_EF| with the literal symbol coordinates.
double antisymmetry_residual(int ab, int cd, const CoherentParam& x, int N);

struct StarCoeffs {
    int N = 0;
    double A_N = 0.0;
    double B_N = 0.0;
    double fit_residual = 0.0;  // max abs
    double rms_residual = 0.0;
    std::size_t rows = 0;
};

/// Least-squares fit of the symmetric star part to (1 + A) xi xi + B delta, literal coordinates.
StarCoeffs fit_star_coeffs(int N, const std::vector<CoherentParam>& points);

/// |((xi star xi) star xi - xi star (xi star xi))(x)| from differently nested third derivatives.
double associativity_check(int N, const std::array<int, 3>& triple, const CoherentParam& x);

/// Transport x by k in K and the indices by Ad_{k^{-1}}; returns the change in the star value.
double covariance_residual(int ab, int cd, const CoherentParam& x, const GroupElement& k, int N);

/// sum eta_A eta_B of the second moments along X_AB; independent of x.
double casimir_symbol(const CoherentParam& x, int N);

/// Low-discrepancy sample: lambda pairs from {0.1, 0.25, 0.4} with l1 >= l2, k from a Halton sequence.
std::vector<CoherentParam> sample_points(std::size_t count);

/// x transported by k = diag(k1, k2): k' -> k1 k', k'' -> k2 k''.
CoherentParam transport(const CoherentParam& x, const GroupElement& k);

}  // namespace bergman
