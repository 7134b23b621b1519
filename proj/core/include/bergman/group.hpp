#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>

#include "bergman/algebra.hpp"
#include "bergman/types.hpp"

namespace bergman {

struct MembershipReport {
    bool member = false;
    double gamma_residual = 0.0;  // max |g^dag Gamma g - Gamma|
    double det_residual = 0.0;    // |det g - 1|
    // a^dag a = E + c^dag c, c^dag d = E + b^dag b (as printed), a^dag b = c^dag d
    std::array<double, 3> column_printed{};
    // same set with the middle constraint read as d^dag d = E + b^dag b
    std::array<double, 3> column_corrected{};
    // a a^dag = E + b b^dag, d d^dag = E + c c^dag, a c^dag = b d^dag
    std::array<double, 3> row{};
};

MembershipReport is_member(const Mat4& m, double tol = 1e-10);

class GroupElement {
public:
    GroupElement() : m_(Mat4::Identity()) {}
    /// Throws NotInGroup unless m passes is_member at tol.
    explicit GroupElement(const Mat4& m, double tol = 1e-10);

    static GroupElement unchecked(const Mat4& m);
    static GroupElement identity() { return {}; }

    const Mat4& matrix() const { return m_; }
    Mat2 a() const { return block_a(m_); }
    Mat2 b() const { return block_b(m_); }
    Mat2 c() const { return block_c(m_); }
    Mat2 d() const { return block_d(m_); }

    /// g^{-1} = Gamma g^dag Gamma.
    GroupElement inverse() const;
    GroupElement operator*(const GroupElement& o) const { return unchecked(m_ * o.m_); }

private:
    Mat4 m_;
};

GroupElement exp_generator(const AlgebraElement& xi);
/// Block-diagonal element of K; requires det(kp) det(kpp) = 1.
GroupElement compact_element(const Mat2& kp, const Mat2& kpp);
/// delta_Lambda = [[C, S], [S, C]].
GroupElement boost(double l1, double l2);

struct DomainPoint {
    Mat2 z = Mat2::Zero();
    DomainPoint() = default;
    /// Throws BoundaryTooClose unless the spectral norm is < 1.
    explicit DomainPoint(const Mat2& z);
};

DomainPoint mobius_action(const GroupElement& g, const DomainPoint& Z);

struct KAKFactors {
    GroupElement k;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    GroupElement q;
    bool degenerate = false;
    double residual = 0.0;
};

KAKFactors kak_decompose(const GroupElement& g);

double haar_radial_density(double l1, double l2);

cplx bergman_kernel(const DomainPoint& Z, const DomainPoint& W, int N);

struct MeasureSpec {
    int N;
    double c_N;
};

/// Throws InvalidLevel for N < 4.
MeasureSpec measure_spec(int N);
double measure_density(const DomainPoint& Z, int N);

/// Hermitian 4x4 matrix g_{i jbar} over (z11, z12, z21, z22).
Mat4 kahler_metric(const DomainPoint& Z, int N, double step = 1e-4);

using HoloFn = std::function<cplx(const Mat2&)>;

/// det(cZ+d)^{-N} f(gZ). Composes as rep(g1, rep(g2, f)) = rep(g2 g1, f).
cplx rep_apply(const GroupElement& g, int N, const HoloFn& f, const DomainPoint& Z);
HoloFn rep_function(const GroupElement& g, int N, HoloFn f);

// Randomness ---------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state);
/// Seed for shard i of a run with master seed s.
std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard);

class Rng {
public:
    explicit Rng(std::uint64_t seed);
    double uniform();
    double normal();
    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
    std::normal_distribution<double> nor_{0.0, 1.0};
};

AlgebraElement random_algebra_element(Rng& rng, double max_norm);
/// Haar-random element of S(U(2) x U(2)).
GroupElement random_compact(Rng& rng);
Mat2 random_unitary2(Rng& rng);

struct MCResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t accepted = 0;
    std::size_t samples = 0;
};

/// Estimate of the integral of dmu_N over D by disc-proposal rejection sampling.
MCResult mc_normalization(int N, std::size_t samples, std::uint64_t seed);
/// Same sampler with an integrand f; the estimate is of the integral of f dmu_N.
MCResult mc_integrate(int N, const std::function<double(const Mat2&)>& f, std::size_t samples,
                      std::uint64_t seed);

}  // namespace bergman
