#include "bergman/group.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

double maxabs(const Mat2& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

MembershipReport is_member(const Mat4& m, double tol) {
    MembershipReport r;
    const Mat4 G = gamma_matrix();
    r.gamma_residual = (m.adjoint() * G * m - G).cwiseAbs().maxCoeff();
    r.det_residual = std::abs(m.determinant() - 1.0);
    const Mat2 a = block_a(m), b = block_b(m), c = block_c(m), d = block_d(m);
    const Mat2 E = Mat2::Identity();
    r.column_printed = {maxabs(a.adjoint() * a - E - c.adjoint() * c), maxabs(c.adjoint() * d - E - b.adjoint() * b),
                        maxabs(a.adjoint() * b - c.adjoint() * d)};
    r.column_corrected = r.column_printed;
    r.column_corrected[1] = maxabs(d.adjoint() * d - E - b.adjoint() * b);
    r.row = {maxabs(a * a.adjoint() - E - b * b.adjoint()), maxabs(d * d.adjoint() - E - c * c.adjoint()),
             maxabs(a * c.adjoint() - b * d.adjoint())};
    r.member = r.gamma_residual < tol && r.det_residual < tol;
    return r;
}

GroupElement::GroupElement(const Mat4& m, double tol) : m_(m) {
    auto r = is_member(m, tol);
    if (!r.member) {
        std::ostringstream os;
        os << "matrix is not in SU(2,2): gamma residual " << r.gamma_residual << ", det residual "
           << r.det_residual;
        throw NotInGroup(os.str());
    }
}

GroupElement GroupElement::unchecked(const Mat4& m) {
    GroupElement g;
    g.m_ = m;
    return g;
}

GroupElement GroupElement::inverse() const {
    const Mat4 G = gamma_matrix();
    return unchecked(G * m_.adjoint() * G);
}

GroupElement exp_generator(const AlgebraElement& xi) {
    for (int i = 0; i < 15; ++i)
        if (!std::isfinite(xi.coeffs(i))) throw ValidationError("non-finite algebra coefficient");
    return GroupElement::unchecked(xi.matrix().exp());
}

GroupElement compact_element(const Mat2& kp, const Mat2& kpp) {
    return GroupElement(from_blocks(kp, Mat2::Zero(), Mat2::Zero(), kpp));
}

GroupElement boost(double l1, double l2) {
    Mat2 C = Mat2::Zero(), S = Mat2::Zero();
    C.diagonal() << std::cosh(l1), std::cosh(l2);
    S.diagonal() << std::sinh(l1), std::sinh(l2);
    return GroupElement::unchecked(from_blocks(C, S, S, C));
}

DomainPoint::DomainPoint(const Mat2& zz) : z(zz) {
    if (!(spectral_norm2(zz) < 1.0)) throw BoundaryTooClose("point is not inside the domain (spectral norm >= 1)");
}

DomainPoint mobius_action(const GroupElement& g, const DomainPoint& Z) {
    const Mat2 den = g.c() * Z.z + g.d();
    if (std::abs(den.determinant()) < 1e-14) throw SingularDenominator("cZ + d is singular");
    DomainPoint out;
    out.z = (g.a() * Z.z + g.b()) * den.inverse();
    return out;
}

KAKFactors kak_decompose(const GroupElement& g) {
    const Mat2 a = g.a(), b = g.b(), c = g.c(), d = g.d();
    Eigen::JacobiSVD<Mat2> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat2 k1 = svd.matrixU();
    const Mat2 q1 = svd.matrixV().adjoint();

    // Singular values of b are sh(lambda); more accurate than acosh of those of a near 0.
    Eigen::JacobiSVD<Mat2> svb(b);
    const double s1 = svb.singularValues()(0), s2 = svb.singularValues()(1);
    KAKFactors out;
    out.lambda1 = std::asinh(s1);
    out.lambda2 = std::asinh(s2);
    const std::array<double, 2> sh{s1, s2};

    Mat2 M = c * q1.adjoint();  // = k2 S
    Mat2 k2 = Mat2::Zero();
    bool have[2] = {false, false};
    for (int i = 0; i < 2; ++i) {
        const double n = M.col(i).norm();
        if (sh[i] > 1e-14 && n > 1e-14) {
            k2.col(i) = M.col(i) / n;
            have[i] = true;
        }
    }
    if (have[0] && have[1]) {
        // Gram-Schmidt on the second column.
        k2.col(1) -= k2.col(0).dot(k2.col(1)) * k2.col(0);
        k2.col(1).normalize();
    } else if (have[0]) {
        k2(0, 1) = -std::conj(k2(1, 0));
        k2(1, 1) = std::conj(k2(0, 0));
    } else if (have[1]) {
        k2(0, 0) = std::conj(k2(1, 1));
        k2(1, 0) = -std::conj(k2(0, 1));
    } else {
        k2 = Mat2::Identity();
    }
    Mat2 Cinv = Mat2::Zero();
    Cinv.diagonal() << 1.0 / std::cosh(out.lambda1), 1.0 / std::cosh(out.lambda2);
    const Mat2 q2 = Cinv * k2.adjoint() * d;

    const cplx det_k = k1.determinant() * k2.determinant();
    const double phi = std::arg(det_k);
    const cplx fk = std::polar(1.0, -phi / 4.0);
    const cplx fq = std::polar(1.0, phi / 4.0);
    const Mat2 O = Mat2::Zero();
    out.k = GroupElement::unchecked(fk * from_blocks(k1, O, O, k2));
    out.q = GroupElement::unchecked(fq * from_blocks(q1, O, O, q2));
    out.degenerate = (out.lambda1 - out.lambda2) < 1e-10;
    out.residual =
        (out.k.matrix() * boost(out.lambda1, out.lambda2).matrix() * out.q.matrix() - g.matrix()).cwiseAbs().maxCoeff();
    return out;
}

double haar_radial_density(double l1, double l2) {
    const double a = std::sinh(l1 + l2), b = std::sinh(l1 - l2);
    return a * a * b * b * std::sinh(2.0 * l1) * std::sinh(2.0 * l2);
}

cplx bergman_kernel(const DomainPoint& Z, const DomainPoint& W, int N) {
    const Mat2 m = Mat2::Identity() - Z.z * W.z.adjoint();
    return ipow(m.determinant(), -N);
}

MeasureSpec measure_spec(int N) {
    if (N < 4) throw InvalidLevel("measure requires N >= 4");
    const double n = N;
    return {N, (n - 1) * (n - 2) * (n - 2) * (n - 3) / std::pow(std::numbers::pi, 4)};
}

double measure_density(const DomainPoint& Z, int N) {
    const auto spec = measure_spec(N);
    const double det = (Mat2::Identity() - Z.z.adjoint() * Z.z).determinant().real();
    return spec.c_N * std::pow(det, N - 4);
}

Mat4 kahler_metric(const DomainPoint& Z, int N, double step) {
    if (1.0 - spectral_norm2(Z.z) < 2.0 * step) throw BoundaryTooClose("kahler_metric: point too close to boundary");
    auto f = [&](const Mat2& z) {
        return -double(N) * std::log((Mat2::Identity() - z * z.adjoint()).determinant().real());
    };
    auto dir = [](int i, bool imag) {
        Mat2 e = Mat2::Zero();
        e(i / 2, i % 2) = imag ? kI : cplx(1.0);
        return e;
    };
    auto mixed = [&](const Mat2& u, const Mat2& v, double h) {
        return (f(Z.z + h * (u + v)) - f(Z.z + h * (u - v)) - f(Z.z - h * (u - v)) + f(Z.z - h * (u + v))) /
               (4.0 * h * h);
    };
    auto rich = [&](const Mat2& u, const Mat2& v) {
        const double d1 = mixed(u, v, step), d2 = mixed(u, v, 0.5 * step);
        return (4.0 * d2 - d1) / 3.0;
    };
    Mat4 g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Mat2 xi = dir(i, false), yi = dir(i, true), xj = dir(j, false), yj = dir(j, true);
            const double xx = rich(xi, xj), yy = rich(yi, yj), xy = rich(xi, yj), yx = rich(yi, xj);
            g(i, j) = 0.25 * cplx(xx + yy, xy - yx);
        }
    return g;
}

cplx rep_apply(const GroupElement& g, int N, const HoloFn& f, const DomainPoint& Z) {
    const Mat2 den = g.c() * Z.z + g.d();
    const cplx det = den.determinant();
    if (std::abs(det) < 1e-14) throw SingularDenominator("cZ + d is singular");
    const Mat2 zp = (g.a() * Z.z + g.b()) * den.inverse();
    return ipow(det, -N) * f(zp);
}

HoloFn rep_function(const GroupElement& g, int N, HoloFn f) {
    return [g, N, f = std::move(f)](const Mat2& z) {
        const Mat2 den = g.c() * z + g.d();
        const cplx det = den.determinant();
        if (std::abs(det) < 1e-14) throw SingularDenominator("cZ + d is singular");
        return ipow(det, -N) * f((g.a() * z + g.b()) * den.inverse());
    };
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
    std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (shard + 1));
    return splitmix64(s);
}

Rng::Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    std::array<std::uint64_t, 8> words;
    for (auto& w : words) w = splitmix64(s);
    std::seed_seq seq(words.begin(), words.end());
    eng_.seed(seq);
}

double Rng::uniform() { return uni_(eng_); }
double Rng::normal() { return nor_(eng_); }

AlgebraElement random_algebra_element(Rng& rng, double max_norm) {
    AlgebraElement x;
    for (int i = 0; i < 15; ++i) x.coeffs(i) = rng.normal();
    const double r = max_norm * rng.uniform();
    x.coeffs *= r / x.coeffs.norm();
    return x;
}

Mat2 random_unitary2(Rng& rng) {
    Eigen::Vector4d q;
    for (int i = 0; i < 4; ++i) q(i) = rng.normal();
    q.normalize();
    Mat2 u;
    u << cplx(q(0), q(1)), cplx(q(2), q(3)), cplx(-q(2), q(3)), cplx(q(0), -q(1));
    return u;
}

GroupElement random_compact(Rng& rng) {
    const double th = 2.0 * std::numbers::pi * rng.uniform();
    const Mat2 kp = std::polar(1.0, th) * random_unitary2(rng);
    const Mat2 kpp = std::polar(1.0, -th) * random_unitary2(rng);
    return compact_element(kp, kpp);
}

MCResult mc_integrate(int N, const std::function<double(const Mat2&)>& f, std::size_t samples,
                      std::uint64_t seed) {
    const auto spec = measure_spec(N);
    const double pi4 = std::pow(std::numbers::pi, 4);
    Rng rng(seed);
    double sum = 0.0, sum2 = 0.0;
    MCResult r;
    r.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        Mat2 z;
        for (int e = 0; e < 4; ++e) {
            const double rad = std::sqrt(rng.uniform());
            const double th = 2.0 * std::numbers::pi * rng.uniform();
            z(e / 2, e % 2) = std::polar(rad, th);
        }
        double w = 0.0;
        if (spectral_norm2(z) < 1.0) {
            ++r.accepted;
            const double det = (Mat2::Identity() - z.adjoint() * z).determinant().real();
            w = spec.c_N * pi4 * std::pow(std::max(det, 0.0), N - 4) * f(z);
        }
        sum += w;
        sum2 += w * w;
    }
    const double n = double(samples);
    r.estimate = sum / n;
    const double var = std::max(0.0, sum2 / n - r.estimate * r.estimate);
    r.std_error = std::sqrt(var / (n - 1.0));
    return r;
}

MCResult mc_normalization(int N, std::size_t samples, std::uint64_t seed) {
    measure_spec(N);
    if (samples < 10000) throw ValidationError("mc_normalization requires at least 1e4 samples");
    return mc_integrate(N, [](const Mat2&) { return 1.0; }, samples, seed);
}

}  // namespace bergman
