#include "bergman/algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman {

namespace {

std::array<Mat2, 3> pauli() {
    Mat2 s1, s2, s3;
    s1 << 0, 1, 1, 0;
    s2 << 0, -kI, kI, 0;
    s3 << 1, 0, 0, -1;
    return {s1, s2, s3};
}

int levi(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0;
    return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

GeneratorBasis assemble(bool corrected) {
    const auto s = pauli();
    const Mat2 E = Mat2::Identity();
    const Mat2 O = Mat2::Zero();
    GeneratorBasis gb;
    auto set = [&](int A, int B, const Mat4& m) { gb.matrices[pair_index(A, B)] = m; };

    set(0, 5, 0.5 * kI * from_blocks(E, O, O, -E));
    for (int j = 0; j < 3; ++j) set(j + 1, 4, 0.5 * kI * from_blocks(s[j], O, O, -s[j]));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Mat2 m = Mat2::Zero();
            for (int k = 0; k < 3; ++k) m += double(levi(i, j, k)) * s[k];
            set(i + 1, j + 1, 0.5 * kI * from_blocks(m, O, O, m));
        }
    const double sign0k = corrected ? -1.0 : 1.0;
    for (int k = 0; k < 3; ++k) {
        set(k + 1, 5, 0.5 * kI * from_blocks(O, s[k], -s[k], O));
        set(0, k + 1, sign0k * 0.5 * from_blocks(O, s[k], s[k], O));
    }
    set(4, 5, 0.5 * from_blocks(O, E, E, O));
    set(0, 4, 0.5 * from_blocks(O, kI * E, -kI * E, O));

    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j)
            gb.gram(i, j) = (gb.matrices[i].adjoint() * gb.matrices[j]).trace().real();
    gb.gram_inv = gb.gram.inverse();
    return gb;
}

}  // namespace

int pair_index(int A, int B) {
    if (A < 0 || B > 5 || A >= B) throw std::out_of_range("pair index requires 0 <= A < B <= 5");
    return A * 5 - A * (A - 1) / 2 + (B - A - 1);
}

std::pair<int, int> pair_of(int idx) {
    static const auto table = [] {
        std::array<std::pair<int, int>, 15> t{};
        for (int A = 0; A < 6; ++A)
            for (int B = A + 1; B < 6; ++B) t[pair_index(A, B)] = {A, B};
        return t;
    }();
    if (idx < 0 || idx >= 15) throw std::out_of_range("generator index out of range");
    return table[idx];
}

std::string pair_label(int idx) {
    auto [A, B] = pair_of(idx);
    return std::to_string(A) + std::to_string(B);
}

bool is_compact(int idx) {
    auto [A, B] = pair_of(idx);
    if (A == 0) return B == 5;
    return B <= 4;
}

Mat4 GeneratorBasis::X(int A, int B) const {
    if (A == B) return Mat4::Zero();
    return A < B ? matrices[pair_index(A, B)] : Mat4(-matrices[pair_index(B, A)]);
}

GeneratorBasis build_generators() { return assemble(true); }
GeneratorBasis printed_generators() { return assemble(false); }

const GeneratorBasis& generators() {
    static const GeneratorBasis gb = build_generators();
    return gb;
}

AlgebraElement AlgebraElement::unit(int idx) {
    AlgebraElement e;
    e.coeffs(idx) = 1.0;
    return e;
}

AlgebraElement AlgebraElement::unit(int A, int B) {
    if (A < B) return unit(pair_index(A, B));
    return unit(pair_index(B, A)) * -1.0;
}

Mat4 AlgebraElement::matrix(const GeneratorBasis& basis) const {
    Mat4 m = Mat4::Zero();
    for (int i = 0; i < 15; ++i)
        if (coeffs(i) != 0.0) m += coeffs(i) * basis.matrices[i];
    return m;
}

Expansion expand_in_basis(const Mat4& m, const GeneratorBasis& basis) {
    Vec15 rhs;
    for (int i = 0; i < 15; ++i) rhs(i) = (basis.matrices[i].adjoint() * m).trace().real();
    Expansion out;
    out.element.coeffs = basis.gram_inv * rhs;
    out.residual = (out.element.matrix(basis) - m).cwiseAbs().maxCoeff();
    return out;
}

AlgebraElement expand(const Mat4& m, double tol, const GeneratorBasis& basis) {
    auto e = expand_in_basis(m, basis);
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (e.residual > tol * scale) {
        std::ostringstream os;
        os << "matrix does not lie in the algebra span (residual " << e.residual << ")";
        throw BasisExpansionFailure(os.str());
    }
    return e.element;
}

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y) {
    const Mat4 X = x.matrix(), Y = y.matrix();
    return expand(X * Y - Y * X);
}

StructureTable structure_constants() {
    StructureTable f;
    auto add = [](Vec15& v, double c, int P, int Q) {
        if (c == 0.0 || P == Q) return;
        if (P < Q)
            v(pair_index(P, Q)) += c;
        else
            v(pair_index(Q, P)) -= c;
    };
    for (int i = 0; i < 15; ++i) {
        auto [A, B] = pair_of(i);
        for (int j = 0; j < 15; ++j) {
            auto [C, D] = pair_of(j);
            Vec15 v = Vec15::Zero();
            add(v, A == C ? kEta[A] : 0, B, D);
            add(v, B == C ? -kEta[B] : 0, A, D);
            add(v, B == D ? kEta[B] : 0, A, C);
            add(v, A == D ? -kEta[A] : 0, B, C);
            f[i][j] = v;
        }
    }
    return f;
}

StructureTable structure_constants_from_matrices(const GeneratorBasis& basis, double* residual) {
    StructureTable f;
    double worst = 0.0;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) {
            const Mat4& X = basis.matrices[i];
            const Mat4& Y = basis.matrices[j];
            auto e = expand_in_basis(X * Y - Y * X, basis);
            worst = std::max(worst, e.residual);
            f[i][j] = e.element.coeffs;
        }
    if (residual) *residual = worst;
    return f;
}

double table_difference(const StructureTable& a, const StructureTable& b) {
    double d = 0.0;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) d = std::max(d, (a[i][j] - b[i][j]).cwiseAbs().maxCoeff());
    return d;
}

double jacobi_residual(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z) {
    auto s = bracket(bracket(x, y), z) + bracket(bracket(y, z), x) + bracket(bracket(z, x), y);
    return s.coeffs.cwiseAbs().maxCoeff();
}

int bracket_mismatches(const GeneratorBasis& basis, double tol) {
    const auto f = structure_constants();
    int bad = 0;
    for (int i = 0; i < 15; ++i)
        for (int j = 0; j < 15; ++j) {
            const Mat4& X = basis.matrices[i];
            const Mat4& Y = basis.matrices[j];
            AlgebraElement e{f[i][j]};
            if ((X * Y - Y * X - e.matrix(basis)).cwiseAbs().maxCoeff() > tol) ++bad;
        }
    return bad;
}

std::string structure_constants_csv(const StructureTable& f) {
    std::ostringstream os;
    os << "A,B,C,D,E,F,value\n";
    for (int i = 0; i < 15; ++i) {
        auto [A, B] = pair_of(i);
        for (int j = 0; j < 15; ++j) {
            auto [C, D] = pair_of(j);
            for (int k = 0; k < 15; ++k) {
                if (f[i][j](k) == 0.0) continue;
                auto [E, F] = pair_of(k);
                os << A << ',' << B << ',' << C << ',' << D << ',' << E << ',' << F << ','
                   << f[i][j](k) << '\n';
            }
        }
    }
    return os.str();
}

RootData root_data() {
    RootData rd;
    const std::array<Root, 4> pos{{{{2, 0}, 1, true}, {{0, 2}, 1, true}, {{1, 1}, 2, true}, {{1, -1}, 2, true}}};
    for (const auto& r : pos) {
        rd.roots.push_back(r);
        rd.roots.push_back({{-r.coeffs[0], -r.coeffs[1]}, r.multiplicity, false});
        rd.positive_roots.push_back(r);
    }
    rd.rho = {3, 1};
    return rd;
}

Eigen::Matrix<double, 15, 15> adjoint_matrix(const Mat4& g) {
    const Mat4 ginv = gamma_matrix() * g.adjoint() * gamma_matrix();
    Eigen::Matrix<double, 15, 15> R;
    const auto& gb = generators();
    for (int j = 0; j < 15; ++j) R.col(j) = expand_in_basis(g * gb.matrices[j] * ginv).element.coeffs;
    return R;
}

}  // namespace bergman
