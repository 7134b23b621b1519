#include "doctest.h"

#include <cmath>

#include "bergman/errors.hpp"
#include "bergman/fock.hpp"

using namespace bergman;

namespace {

// Number of (m, n) in N^4 x N^4 with sum n - sum m = charge and sum m <= P_max, by brute force.
std::size_t brute_count(int charge, int P_max) {
    std::size_t c = 0;
    int lim = P_max + charge;
    for (int m0 = 0; m0 <= P_max; ++m0)
        for (int m1 = 0; m0 + m1 <= P_max; ++m1)
            for (int m2 = 0; m0 + m1 + m2 <= P_max; ++m2)
                for (int m3 = 0; m0 + m1 + m2 + m3 <= P_max; ++m3) {
                    int sm = m0 + m1 + m2 + m3;
                    for (int n0 = 0; n0 <= lim; ++n0)
                        for (int n1 = 0; n0 + n1 <= lim; ++n1)
                            for (int n2 = 0; n0 + n1 + n2 <= lim; ++n2) {
                                int n3 = sm + charge - n0 - n1 - n2;
                                if (n3 >= 0) ++c;
                            }
                }
    return c;
}

FockVector random_interior(const BasisPtr& basis, int max_pairs, Rng& rng) {
    FockVector v(basis);
    for (std::size_t i = 0; i < basis->size(); ++i)
        if (basis->pairs(i) <= max_pairs) v[i] = cplx(rng.normal(), rng.normal());
    v *= 1.0 / v.norm();
    return v;
}

double diff_norm(FockVector a, const FockVector& b) {
    a -= b;
    return a.norm();
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) {
    FockOperator out;
    for (const auto& x : a.terms)
        for (const auto& y : b.terms) {
            LadderTerm ab{x.coeff * y.coeff, x.ops};
            ab.ops.insert(ab.ops.end(), y.ops.begin(), y.ops.end());
            LadderTerm ba{-x.coeff * y.coeff, y.ops};
            ba.ops.insert(ba.ops.end(), x.ops.begin(), x.ops.end());
            out.terms.push_back(ab);
            out.terms.push_back(ba);
        }
    return out;
}

GroupElement random_small(Rng& rng, double lmax) {
    double u = lmax * rng.uniform(), w = lmax * rng.uniform();
    return random_compact(rng) * boost(std::max(u, w), std::min(u, w)) * random_compact(rng);
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("basis size matches brute-force enumeration") {
    CHECK(FockBasis::count(2, 2) == brute_count(2, 2));
    CHECK(FockBasis(2, 2).size() == 440);
    CHECK(FockBasis(0, 3).size() == brute_count(0, 3));
    CHECK(FockBasis(4, 3).size() == brute_count(4, 3));
    CHECK(FockBasis(-1, 3).size() == brute_count(-1, 3));
}

TEST_CASE("vacuum sector") {
    RepConfig cfg{1, 0};
    Rep rep = build_rep(cfg);
    CHECK(rep.basis->size() == 1);
    FockVector x0 = lowest_state(cfg);
    CHECK(x0.norm() == doctest::Approx(1.0));
    for (int i = 0; i < 15; ++i) {
        if (is_compact(i)) continue;
        FockVector y = rep.generators[std::size_t(i)].apply(x0);
        CHECK(y.norm() < 1e-15);
    }
}

TEST_CASE("rank round trip") {
    FockBasis b(2, 4);
    for (std::size_t i = 0; i < b.size(); i += 7) CHECK(b.rank(b.state(i)) == long(i));
    FockBasisState outside{};
    outside.m = {3, 2, 0, 0};
    outside.n = {7, 0, 0, 0};
    CHECK(b.rank(outside) == -1);
}

TEST_CASE("sector cap") {
    CHECK(FockBasis::count(6, 8) == brute_count(6, 8));
    CHECK(FockBasis::count(6, 8) > 200000);
    CHECK_THROWS_AS(build_rep(RepConfig{4, 8}), SectorOverflow);
    CHECK_NOTHROW(shared_basis(6, 8, 300000));
}

TEST_CASE("lowest state") {
    FockVector x = lowest_state(RepConfig{2, 2});
    FockBasisState s1{{0, 0, 0, 0}, {1, 0, 0, 1}}, s2{{0, 0, 0, 0}, {0, 1, 1, 0}};
    CHECK(std::abs(x.amplitude(s1) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(x.amplitude(s2) + 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(x.support() == 2);
    for (int N = 1; N <= 5; ++N) {
        FockVector v = lowest_state(RepConfig{N, 2});
        FockVector w = casimir_op().apply(v);
        v *= double(N - 1);
        CHECK(diff_norm(w, v) < 1e-13);
    }
}

TEST_CASE("generator commutators close on the interior") {
    RepConfig cfg{2, 4};
    Rep rep = build_rep(cfg);
    StructureTable f = structure_constants();
    Rng rng(31);
    FockVector v = random_interior(rep.basis, cfg.P_max - 2, rng);
    for (int i = 0; i < 15; ++i)
        for (int j = i + 1; j < 15; ++j) {
            FockVector lhs = commutator(rep.generators[std::size_t(i)], rep.generators[std::size_t(j)]).apply(v);
            FockVector rhs(rep.basis);
            for (int k = 0; k < 15; ++k) {
                double c = f[std::size_t(i)][std::size_t(j)][k];
                if (c == 0.0) continue;
                FockVector t = rep.generators[std::size_t(k)].apply(v);
                t *= c;
                rhs += t;
            }
            CHECK(diff_norm(lhs, rhs) < 1e-12);
        }
}

TEST_CASE("generators realize matrices as a homomorphism") {
    Rng rng(32);
    AlgebraElement x = random_algebra_element(rng, 1.0), y = random_algebra_element(rng, 1.0);
    RepConfig cfg{3, 4};
    Rep rep = build_rep(cfg);
    FockVector v = random_interior(rep.basis, 2, rng);
    FockOperator X = operator_from_matrix(x.matrix()), Y = operator_from_matrix(y.matrix());
    FockVector lhs = commutator(X, Y).apply(v);
    FockVector rhs = operator_from_matrix(bracket(x, y).matrix()).apply(v);
    CHECK(diff_norm(lhs, rhs) < 1e-12);
}

TEST_CASE("all realized generators are anti-hermitian") {
    RepConfig cfg{2, 4};
    Rep rep = build_rep(cfg);
    Rng rng(33);
    FockVector u = random_interior(rep.basis, 3, rng), v = random_interior(rep.basis, 3, rng);
    for (int i = 0; i < 15; ++i) {
        const FockOperator& X = rep.generators[std::size_t(i)];
        cplx a = u.dot(X.apply(v)), b = X.apply(u).dot(v);
        CHECK(std::abs(a + b) < 1e-12);
    }
}

TEST_CASE("Casimir commutes with every generator") {
    RepConfig cfg{3, 3};
    Rep rep = build_rep(cfg);
    Rng rng(34);
    FockVector v = random_interior(rep.basis, 2, rng);
    for (int i = 0; i < 15; ++i) {
        FockVector r = commutator(rep.casimir, rep.generators[std::size_t(i)]).apply(v);
        CHECK(r.norm() < 1e-12);
    }
}

TEST_CASE("pair operators") {
    PairOps p = pair_ops(Mat2::Identity());
    BasisPtr vac = shared_basis(0, 2);
    FockVector v(vac);
    v[0] = 1.0;
    CHECK(p.lower.apply(v).norm() == 0.0);

    Mat2 B = Mat2::Zero();
    B(0, 1) = 1.0;
    PairOps q = pair_ops(B);
    RepConfig cfg{3, 2};
    FockVector x0 = lowest_state(cfg);
    FockVector y = q.raise.apply(x0);
    CHECK(y.norm() > 0.1);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (std::abs(y[i]) < 1e-15) continue;
        FockBasisState s = y.basis()->state(i);
        CHECK(s.m[0] + s.m[1] + s.m[2] + s.m[3] == 1);
        CHECK(s.n[0] + s.n[1] + s.n[2] + s.n[3] == 2 * cfg.N - 1);
    }

    Rng rng(35);
    Mat2 C;
    C << cplx(0.3, 0.1), cplx(-0.2, 0.5), cplx(0.7, 0.0), cplx(0.1, -0.4);
    PairOps r = pair_ops(C);
    BasisPtr b = shared_basis(4, 4);
    FockVector u = random_interior(b, 3, rng), w = random_interior(b, 3, rng);
    CHECK(std::abs(u.dot(r.raise.apply(w)) - r.lower.apply(u).dot(w)) < 1e-12);
}

TEST_CASE("boost at zero is the identity") {
    RepConfig cfg{2, 4};
    FockVector x0 = lowest_state(cfg);
    BoostResult r = apply_boost(cfg, 0.0, 0.0, x0);
    CHECK(diff_norm(r.vec, x0) < 1e-15);
}

TEST_CASE("boost overlap follows the two-mode squeezing law") {
    RepConfig cfg{2, 8};
    FockVector x0 = lowest_state(cfg);
    BoostResult r = apply_boost(cfg, 0.2, 0.1, x0);
    double want = std::pow(std::cosh(0.2) * std::cosh(0.1), -(cfg.N + 1));
    CHECK(std::abs(x0.dot(r.vec) - want) < 1e-8);
    CHECK(std::abs(r.vec.norm() - 1.0) < 1e-6 + r.truncation_estimate);
    CHECK_FALSE(r.truncation_warning);
    CHECK_THROWS_AS(apply_boost(cfg, 0.9, 0.1, x0), ValidationError);
}

TEST_CASE("omega0 on identity and on K") {
    Rng rng(36);
    for (int N = 1; N <= 3; ++N) {
        RepConfig cfg{N, 4};
        CHECK(std::abs(omega0_fock(cfg, GroupElement::identity()).value - 1.0) < 1e-13);
        GroupElement k = random_compact(rng);
        cplx want = ipow(std::conj(k.d().determinant()), -(N + 1));
        CHECK(std::abs(omega0_fock(cfg, k).value - want) < 1e-12);
    }
}

TEST_CASE("omega0 on small elements") {
    Rng rng(37);
    for (int N = 2; N <= 3; ++N) {
        RepConfig cfg{N, 8};
        for (int t = 0; t < 5; ++t) {
            GroupElement g = random_small(rng, 0.3);
            Omega0Result r = omega0_fock(cfg, g);
            cplx want = ipow(std::conj(g.d().determinant()), -(N + 1));
            CHECK(std::abs(r.value - want) < 1e-6);
            CHECK(r.truncation_estimate < 1e-6);
        }
    }
}

TEST_CASE("omega0 agrees with the exponential of the realized generator") {
    Rng rng(38);
    RepConfig cfg{2, 8};
    FockVector x0 = lowest_state(cfg);
    for (int t = 0; t < 3; ++t) {
        AlgebraElement xi = random_algebra_element(rng, 0.25);
        ExpResult e = apply_exp(operator_from_matrix(xi.matrix()), x0);
        cplx direct = x0.dot(e.vec);
        CHECK(std::abs(direct - omega0_fock(cfg, exp_generator(xi)).value) < 1e-6);
    }
}

TEST_CASE("adjoint action") {
    Rng rng(39);
    RepConfig cfg{2, 6};
    CHECK(adjoint_action_check(cfg, GroupElement::identity()) < 1e-14);
    CHECK(adjoint_action_check(cfg, random_compact(rng)) < 1e-10);
    CHECK(adjoint_action_check(cfg, boost(0.1, 0.05)) < 1e-6);
}

TEST_CASE("Casimir on coherent states") {
    RepConfig cfg{3, 8};
    FockVector x0 = lowest_state(cfg);
    BoostResult r = apply_boost(cfg, 0.25, 0.1, x0);
    FockVector v = r.vec;
    v *= 1.0 / v.norm();
    CHECK(std::abs(expectation(casimir_op(), v) - double(cfg.N - 1)) < 1e-10);
}

}
