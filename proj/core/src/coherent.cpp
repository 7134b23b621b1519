#include "bergman/coherent.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "bergman/errors.hpp"

namespace bergman {

Mat2 CoherentParam::z() const {
    Mat2 T = Mat2::Zero();
    T.diagonal() << std::tanh(lambda1), std::tanh(lambda2);
    return kprime * T * kdprime.adjoint();
}

void CoherentParam::validate() const {
    const Mat2 E = Mat2::Identity();
    if ((kprime.adjoint() * kprime - E).cwiseAbs().maxCoeff() > 1e-10 ||
        (kdprime.adjoint() * kdprime - E).cwiseAbs().maxCoeff() > 1e-10)
        throw ValidationError("coherent parameter blocks must be unitary");
    if (std::abs(kprime.determinant() * kdprime.determinant() - 1.0) > 1e-10)
        throw ValidationError("coherent parameter requires det(k')det(k'') = 1");
    if (!(lambda1 >= lambda2 && lambda2 >= 0.0)) throw ValidationError("coherent parameter needs l1 >= l2 >= 0");
}

GroupElement coherent_group_element(const CoherentParam& x) {
    const Mat2 O = Mat2::Zero();
    const Mat4 k = from_blocks(x.kprime, O, O, x.kdprime);
    return GroupElement::unchecked(k * boost(x.lambda1, x.lambda2).matrix() * k.adjoint());
}

namespace {

struct OmegaEval {
    Mat2 z, zd;
    double detfac;
    int N;

    OmegaEval(const CoherentParam& x, int n) : z(x.z()), zd(z.adjoint()), N(n) {
        detfac = (Mat2::Identity() - zd * z).determinant().real();
    }

    cplx operator()(const Mat4& g) const {
        const Mat2 a = block_a(g), b = block_b(g), c = block_c(g), d = block_d(g);
        const cplx den = (d + c * z - zd * b - zd * a * z).determinant();
        if (std::abs(den) < 1e-14) throw SingularSymbol("symbol denominator vanishes");
        return std::pow(detfac, N) * ipow(den, -N);
    }
};

struct Rich {
    cplx value;
    double noise;
};

// Two Richardson levels for an h^2 error expansion, from D(h), D(h/2), D(h/4).
Rich richardson(const std::array<cplx, 3>& D) {
    const cplx r1a = (4.0 * D[1] - D[0]) / 3.0;
    const cplx r1b = (4.0 * D[2] - D[1]) / 3.0;
    const cplx r2 = (16.0 * r1b - r1a) / 15.0;
    return {r2, std::abs(r2 - r1b)};
}

void check_noise(const Rich& r, int order, const char* what) {
    if (r.noise > noise_budget(order) * std::max(1.0, std::abs(r.value)))
        throw NoiseBudgetExceeded(std::string(what) + ": Richardson levels disagree beyond the noise budget");
}

// exp(+-h_l X_i) for the base second-order step, shared by all star evaluations.
const std::array<std::array<std::array<Mat4, 2>, 3>, 15>& generator_exp_table() {
    static const auto table = [] {
        std::array<std::array<std::array<Mat4, 2>, 3>, 15> t;
        const auto& gb = generators();
        const double h = default_step(2);
        for (int i = 0; i < 15; ++i)
            for (int l = 0; l < 3; ++l) {
                const double hl = h / double(1 << l);
                t[i][l][0] = (hl * gb.matrices[i]).exp();
                t[i][l][1] = (-hl * gb.matrices[i]).exp();
            }
        return t;
    }();
    return table;
}

using ExpLevels = std::array<std::array<Mat4, 2>, 3>;

ExpLevels exp_levels(const Mat4& X, double h) {
    ExpLevels e;
    for (int l = 0; l < 3; ++l) {
        const double hl = h / double(1 << l);
        e[l][0] = (hl * X).exp();
        e[l][1] = (-hl * X).exp();
    }
    return e;
}

Rich star_core(const ExpLevels& ex, const ExpLevels& ey, const OmegaEval& w, double h) {
    std::array<cplx, 3> D;
    for (int l = 0; l < 3; ++l) {
        const double hl = h / double(1 << l);
        const cplx pp = w(ex[l][0] * ey[l][0]);
        const cplx pm = w(ex[l][0] * ey[l][1]);
        const cplx mp = w(ex[l][1] * ey[l][0]);
        const cplx mm = w(ex[l][1] * ey[l][1]);
        D[l] = (pp - pm - mp + mm) / (4.0 * hl * hl);
    }
    return richardson(D);
}

Rich first_core(const ExpLevels& ex, const OmegaEval& w, double h) {
    std::array<cplx, 3> D;
    for (int l = 0; l < 3; ++l) {
        const double hl = h / double(1 << l);
        D[l] = (w(ex[l][0]) - w(ex[l][1])) / (2.0 * hl);
    }
    return richardson(D);
}

}  // namespace

cplx omega(const Mat4& g, const CoherentParam& x, int N) { return OmegaEval(x, N)(g); }
cplx omega(const GroupElement& g, const CoherentParam& x, int N) { return omega(g.matrix(), x, N); }

cplx omega_printed(const GroupElement& g, const CoherentParam& x, int N) {
    const Mat2 z = x.z(), zd = z.adjoint();
    const double detfac = (Mat2::Identity() - zd * z).determinant().real();
    const cplx den = (g.d() + g.c() * zd - z * g.b() - z * g.a() * zd).determinant();
    if (std::abs(den) < 1e-14) throw SingularSymbol("symbol denominator vanishes");
    return std::pow(detfac, N) * ipow(den, -N);
}

Omega0Result omega_fock(const RepConfig& cfg, const GroupElement& g, const CoherentParam& x, double lambda_max) {
    const auto gx = coherent_group_element(x);
    return omega0_fock(cfg, gx.inverse() * g * gx, lambda_max);
}

double default_step(int order) { return order >= 4 ? 1e-2 : 1e-3; }

double noise_budget(int order) {
    switch (order) {
        case 0:
        case 1: return 1e-8;
        case 2: return 1e-4;
        default: return 1e-3;
    }
}

DiffResult mixed_derivative(const std::function<cplx(const std::vector<double>&)>& F, int order, double step) {
    DiffResult r;
    r.step = step;
    if (order == 0) {
        r.value = F({});
        return r;
    }
    std::array<cplx, 3> D;
    std::vector<double> t(static_cast<std::size_t>(order));
    for (int l = 0; l < 3; ++l) {
        const double hl = step / double(1 << l);
        cplx acc = 0.0;
        for (unsigned mask = 0; mask < (1u << order); ++mask) {
            int sign = 1;
            for (int j = 0; j < order; ++j) {
                const bool neg = (mask >> j) & 1u;
                t[j] = neg ? -hl : hl;
                if (neg) sign = -sign;
            }
            acc += double(sign) * F(t);
        }
        D[l] = acc / std::pow(2.0 * hl, order);
    }
    auto rr = richardson(D);
    r.value = rr.value;
    r.noise = rr.noise;
    return r;
}

cplx coordinate_symbol(int idx, const CoherentParam& x, int N) {
    const OmegaEval w(x, N);
    const auto& tab = generator_exp_table();
    auto r = first_core(tab[idx], w, default_step(2));
    check_noise(r, 1, "coordinate_symbol");
    return r.value / double(N);
}

std::array<cplx, 15> coordinate_symbols(const CoherentParam& x, int N) {
    std::array<cplx, 15> out;
    for (int i = 0; i < 15; ++i) out[i] = coordinate_symbol(i, x, N);
    return out;
}

double coordinate_fn(int idx, const CoherentParam& x, int N) {
    const cplx s = coordinate_symbol(idx, x, N);
    if (std::abs(s.real()) > 1e-6) throw NonRealSymbol("coordinate symbol has a real part above 1e-6");
    return s.imag();
}

cplx sym_moment(const CoherentParam& x, const std::vector<int>& indices, int N) {
    const int n = int(indices.size());
    if (n > 4) throw ValidationError("sym_moment supports at most four indices");
    for (int i : indices)
        if (i < 0 || i >= 15) throw ValidationError("generator index out of range");
    const OmegaEval w(x, N);
    const auto& gb = generators();
    auto F = [&](const std::vector<double>& t) {
        Mat4 X = Mat4::Zero();
        for (int j = 0; j < n; ++j) X += t[j] * gb.matrices[indices[j]];
        return w(n ? Mat4(X.exp()) : Mat4(Mat4::Identity()));
    };
    auto d = mixed_derivative(F, n, default_step(n));
    if (d.noise > noise_budget(n) * std::max(1.0, std::abs(d.value)))
        throw NoiseBudgetExceeded("sym_moment: Richardson levels disagree beyond the noise budget");
    return (n % 2 ? -1.0 : 1.0) * d.value;
}

cplx star_product(const AlgebraElement& X, const AlgebraElement& Y, const CoherentParam& x, int N) {
    const double h = default_step(2);
    const OmegaEval w(x, N);
    auto r = star_core(exp_levels(X.matrix(), h), exp_levels(Y.matrix(), h), w, h);
    check_noise(r, 2, "star_product");
    return r.value / double(N) / double(N);
}

cplx star_product_coords(int ab, int cd, const CoherentParam& x, int N) {
    const auto& tab = generator_exp_table();
    const OmegaEval w(x, N);
    auto r = star_core(tab[ab], tab[cd], w, default_step(2));
    check_noise(r, 2, "star_product_coords");
    return r.value / double(N) / double(N);
}

double antisymmetry_residual(int ab, int cd, const CoherentParam& x, int N) {
    static const StructureTable f = structure_constants();
    const auto xi = coordinate_symbols(x, N);
    const cplx anti = 0.5 * (star_product_coords(ab, cd, x, N) - star_product_coords(cd, ab, x, N));
    cplx rhs = 0.0;
    for (int k = 0; k < 15; ++k) rhs += f[ab][cd](k) * xi[k];
    rhs /= 2.0 * N;
    return std::abs(anti - rhs);
}

StarCoeffs fit_star_coeffs(int N, const std::vector<CoherentParam>& points) {
    if (points.size() < 20) throw ValidationError("fit_star_coeffs needs at least 20 sample points");
    std::vector<double> u, dl, y;
    for (const auto& x : points) {
        const auto xi = coordinate_symbols(x, N);
        for (int i = 0; i < 15; ++i)
            for (int j = i; j < 15; ++j) {
                const cplx sym = 0.5 * (star_product_coords(i, j, x, N) + star_product_coords(j, i, x, N));
                const cplx prod = xi[i] * xi[j];
                u.push_back(prod.real());
                dl.push_back(i == j ? 0.5 : 0.0);
                y.push_back((sym - prod).real());
            }
    }
    const Eigen::Index n = Eigen::Index(y.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        A(r, 0) = u[r];
        A(r, 1) = dl[r];
        b(r) = y[r];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < 2) throw RankDeficientFit("star fit design matrix is rank deficient");
    const Eigen::Vector2d c = qr.solve(b);
    const Eigen::VectorXd res = A * c - b;
    StarCoeffs out;
    out.N = N;
    out.A_N = c(0);
    out.B_N = c(1);
    out.fit_residual = res.cwiseAbs().maxCoeff();
    out.rms_residual = std::sqrt(res.squaredNorm() / double(n));
    out.rows = std::size_t(n);
    return out;
}

namespace {

// d/dv of inner(v) with Richardson, where inner is itself a Richardson value.
Rich outer_first(const std::function<cplx(double)>& inner, double h) {
    std::array<cplx, 3> D;
    for (int l = 0; l < 3; ++l) {
        const double hl = h / double(1 << l);
        D[l] = (inner(hl) - inner(-hl)) / (2.0 * hl);
    }
    return richardson(D);
}

}  // namespace

double associativity_check(int N, const std::array<int, 3>& triple, const CoherentParam& x) {
    const auto& gb = generators();
    const Mat4 X = gb.matrices[triple[0]], Y = gb.matrices[triple[1]], Z = gb.matrices[triple[2]];
    const OmegaEval w(x, N);
    const double hi = default_step(3), ho = 2.0 * default_step(3);
    const ExpLevels ex = exp_levels(X, hi), ey = exp_levels(Y, hi), ez = exp_levels(Z, hi);

    // ((X Y) Z): inner derivative in s, t; outer in u.
    auto left_inner = [&](double u) {
        const Mat4 eu = (u * Z).exp();
        std::array<cplx, 3> D;
        for (int l = 0; l < 3; ++l) {
            const double hl = hi / double(1 << l);
            auto W = [&](int a, int b) { return w((ex[l][a] * ey[l][b]) * eu); };
            D[l] = (W(0, 0) - W(0, 1) - W(1, 0) + W(1, 1)) / (4.0 * hl * hl);
        }
        return richardson(D).value;
    };
    // (X (Y Z)): inner derivative in t, u; outer in s.
    auto right_inner = [&](double s) {
        const Mat4 es = (s * X).exp();
        std::array<cplx, 3> D;
        for (int l = 0; l < 3; ++l) {
            const double hl = hi / double(1 << l);
            auto W = [&](int a, int b) { return w(es * (ey[l][a] * ez[l][b])); };
            D[l] = (W(0, 0) - W(0, 1) - W(1, 0) + W(1, 1)) / (4.0 * hl * hl);
        }
        return richardson(D).value;
    };
    const Rich L = outer_first(left_inner, ho);
    const Rich R = outer_first(right_inner, ho);
    check_noise(L, 3, "associativity_check");
    check_noise(R, 3, "associativity_check");
    const double n3 = double(N) * N * N;
    return std::abs(L.value - R.value) / n3;
}

CoherentParam transport(const CoherentParam& x, const GroupElement& k) {
    CoherentParam y = x;
    y.kprime = k.a() * x.kprime;
    y.kdprime = k.d() * x.kdprime;
    return y;
}

double covariance_residual(int ab, int cd, const CoherentParam& x, const GroupElement& k, int N) {
    const CoherentParam y = transport(x, k);
    const cplx moved = star_product(AlgebraElement::unit(ab), AlgebraElement::unit(cd), y, N);
    const auto R = adjoint_matrix(k.inverse().matrix());
    const AlgebraElement X{R.col(ab)}, Y{R.col(cd)};
    const cplx fixed = star_product(X, Y, x, N);
    return std::abs(moved - fixed);
}

double casimir_symbol(const CoherentParam& x, int N) {
    const OmegaEval w(x, N);
    const auto& tab = generator_exp_table();
    double total = 0.0;
    for (int i = 0; i < 15; ++i) {
        auto [A, B] = pair_of(i);
        auto r = star_core(tab[i], tab[i], w, default_step(2));
        check_noise(r, 2, "casimir_symbol");
        total += kEta[A] * kEta[B] * r.value.real();
    }
    return total;
}

namespace {

double halton(std::size_t index, int base) {
    double f = 1.0, r = 0.0;
    std::size_t i = index;
    while (i > 0) {
        f /= base;
        r += f * double(i % std::size_t(base));
        i /= std::size_t(base);
    }
    return r;
}

Mat2 shoemake(double u1, double u2, double u3) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double q0 = a * std::sin(two_pi * u2), q1 = a * std::cos(two_pi * u2);
    const double q2 = b * std::sin(two_pi * u3), q3 = b * std::cos(two_pi * u3);
    Mat2 u;
    u << cplx(q0, q1), cplx(q2, q3), cplx(-q2, q3), cplx(q0, -q1);
    return u;
}

}  // namespace

std::vector<CoherentParam> sample_points(std::size_t count) {
    static const std::array<std::pair<double, double>, 6> lam{
        {{0.1, 0.1}, {0.25, 0.1}, {0.25, 0.25}, {0.4, 0.1}, {0.4, 0.25}, {0.4, 0.4}}};
    static const std::array<int, 6> primes{2, 3, 5, 7, 11, 13};
    std::vector<CoherentParam> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::array<double, 6> h;
        for (int d = 0; d < 6; ++d) h[d] = halton(i + 1, primes[d]);
        CoherentParam x;
        x.kprime = shoemake(h[0], h[1], h[2]);
        x.kdprime = shoemake(h[3], h[4], h[5]);
        x.lambda1 = lam[i % lam.size()].first;
        x.lambda2 = lam[i % lam.size()].second;
        pts.push_back(x);
    }
    return pts;
}

}  // namespace bergman
