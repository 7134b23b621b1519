#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bergman/group.hpp"
#include "bergman/types.hpp"

namespace bergman {

struct RadialPoint {
    double lambda1;
    double lambda2;
};

/// 2 (ch 2 l1 - ch 2 l2).
double radial_weight(double l1, double l2);

using RadialFn = std::function<double(double, double)>;

/// omega^{-1} (sum 1/4 L_i - (N/2) th l_i d_i) (omega phi) with central differences of step h.
double radial_apply(int N, const RadialFn& phi, const RadialPoint& p, double h = 1e-3);

/// Samples on a uniform (l1, l2) grid.
struct RadialGrid {
    double lo = 0.01;
    double hi = 2.5;
    int n = 400;
    std::vector<double> values;  // row-major, values[i * n + j] = phi(l1_i, l2_j)

    static RadialGrid sample(const RadialFn& phi, double lo = 0.01, double hi = 2.5, int n = 400);
    double step() const { return (hi - lo) / double(n - 1); }
    double coord(int i) const { return lo + step() * i; }
    double at(int i, int j) const { return values[std::size_t(i) * std::size_t(n) + std::size_t(j)]; }
};

/// Same operator at grid node (i, j) using neighbouring samples.
double radial_apply(int N, const RadialGrid& grid, int i, int j);

using DomainFn = std::function<cplx(const Mat2&)>;

/// Delta_0 f - N tr[(E - Z Z^dag) (dbar f) Z^dag], with one Richardson level.
cplx full_apply(int N, const DomainFn& f, const DomainPoint& Z, double h = 1e-3);

/// -1/4 [2 (N-1)^2 + tau1^2 + tau2^2].
cplx eigenvalue(int N, cplx tau1, cplx tau2);

struct SpectrumEntry {
    bool discrete = true;
    int l1 = 0;
    int l2 = 0;
    double tau1 = 0.0;  // continuous branch labels
    double tau2 = 0.0;
    double tau1_im = 0.0;  // discrete branch: tau_j = i * tau_j_im
    double tau2_im = 0.0;
    double eig_printed = 0.0;
    double eig_substituted = 0.0;
    std::string degeneracy_note;
};

struct DiscreteSpectrum {
    int N = 0;
    int k = 0;  // [(N-1)/2]
    std::vector<SpectrumEntry> entries;
    int enumerated_count = 0;
    double formula_count = 0.0;  // k (k - 1) / 2
};

DiscreteSpectrum discrete_spectrum(int N);

/// 1/2 (N-1)^2, the infimum of -eigenvalue over real tau.
double continuous_floor(int N);

/// Continuous-branch entry with eig = -eigenvalue(N, tau1, tau2).
SpectrumEntry continuous_entry(int N, double tau1, double tau2);

/// CSV: N,l1,l2,eig_printed,eig_substituted,tau1_im,tau2_im.
std::string spectrum_csv(const DiscreteSpectrum& s);

}  // namespace bergman
