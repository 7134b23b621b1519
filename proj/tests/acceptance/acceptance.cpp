// Acceptance suite: one line per criterion, plus companion lines where the stated oracle does not hold.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "bergman/bergman.hpp"

using namespace bergman;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string name;
    double budget_s;
    bool primary;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// g = k1 delta k2 with 0 <= l2 <= l1 <= lmax.
GroupElement random_small_boost(Rng& rng, double lmax) {
    double u = lmax * rng.uniform();
    double v = lmax * rng.uniform();
    return random_compact(rng) * boost(std::max(u, v), std::min(u, v)) * random_compact(rng);
}

CoherentParam random_param(Rng& rng, double lmax) {
    CoherentParam x;
    x.kprime = random_unitary2(rng);
    Mat2 kd = random_unitary2(rng);
    cplx s = std::pow(x.kprime.determinant() * kd.determinant(), -0.5);
    x.kdprime = kd * s;
    double u = lmax * rng.uniform();
    double v = lmax * rng.uniform();
    x.lambda1 = std::max(u, v);
    x.lambda2 = std::min(u, v);
    return x;
}

Outcome algebra_closure() {
    double res = 0.0;
    StructureTable from_mats = structure_constants_from_matrices(generators(), &res);
    double diff = table_difference(from_mats, structure_constants());
    Rng rng(101);
    double jac = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto x = random_algebra_element(rng, 1.0);
        auto y = random_algebra_element(rng, 1.0);
        auto z = random_algebra_element(rng, 1.0);
        jac = std::max(jac, jacobi_residual(x, y, z));
    }
    Outcome o;
    o.pass = diff < 1e-12 && res < 1e-12 && jac < 1e-12;
    o.detail = "table diff " + fmt("%.2e", diff) + ", expansion residual " + fmt("%.2e", res) + ", Jacobi " +
               fmt("%.2e", jac) + "; printed matrices mismatch " +
               std::to_string(bracket_mismatches(printed_generators())) + " ordered pairs";
    return o;
}

Outcome group_gate() {
    Rng rng(202);
    double gam = 0.0, det = 0.0, col = 0.0, col_printed = 0.0, row = 0.0, kak = 0.0;
    for (int i = 0; i < 500; ++i) {
        GroupElement g = exp_generator(random_algebra_element(rng, 1.5));
        MembershipReport r = is_member(g.matrix());
        gam = std::max(gam, r.gamma_residual);
        det = std::max(det, r.det_residual);
        for (int j = 0; j < 3; ++j) {
            col = std::max(col, r.column_corrected[j]);
            col_printed = std::max(col_printed, r.column_printed[j]);
            row = std::max(row, r.row[j]);
        }
        kak = std::max(kak, kak_decompose(g).residual);
    }
    Outcome o;
    o.pass = gam < 1e-10 && det < 1e-10 && col < 1e-10 && row < 1e-10 && kak < 1e-8;
    o.detail = "Gamma " + fmt("%.2e", gam) + ", det " + fmt("%.2e", det) + ", column " + fmt("%.2e", col) +
               ", row " + fmt("%.2e", row) + ", KAK " + fmt("%.2e", kak) + " (column relations with c^dag d: " +
               fmt("%.2e", col_printed) + ")";
    return o;
}

struct DualityStats {
    double literal = 0.0;
    double companion = 0.0;
    double truncation = 0.0;
};

DualityStats omega0_stats() {
    DualityStats s;
    for (int N = 2; N <= 4; ++N) {
        RepConfig cfg{N, 8, 300000};
        Rng rng(300 + N);
        for (int i = 0; i < 50; ++i) {
            GroupElement g = random_small_boost(rng, 0.3);
            Omega0Result r = omega0_fock(cfg, g);
            cplx dd = g.d().determinant();
            s.literal = std::max(s.literal, std::abs(r.value - ipow(dd, -N)));
            s.companion = std::max(s.companion, std::abs(r.value - ipow(std::conj(dd), -(N + 1))));
            s.truncation = std::max(s.truncation, r.truncation_estimate);
        }
    }
    return s;
}

DualityStats symbol_stats() {
    DualityStats s;
    for (int N = 2; N <= 4; ++N) {
        RepConfig cfg{N, 8, 300000};
        Rng rng(400 + N);
        int accepted = 0;
        while (accepted < 50) {
            GroupElement g = random_small_boost(rng, 0.3);
            CoherentParam x = random_param(rng, 0.3);
            GroupElement gx = coherent_group_element(x);
            if (kak_decompose(gx.inverse() * g * gx).lambda1 > 0.3) continue;
            ++accepted;
            Omega0Result r = omega_fock(cfg, g, x);
            s.literal = std::max(s.literal, std::abs(omega(g, x, N) - r.value));
            s.companion = std::max(s.companion, std::abs(std::conj(omega(g, x, N + 1)) - r.value));
            s.truncation = std::max(s.truncation, r.truncation_estimate);
        }
    }
    return s;
}

DualityStats cached_omega0;
DualityStats cached_symbol;

Outcome omega0_duality() {
    cached_omega0 = omega0_stats();
    return {cached_omega0.literal < 1e-4, "max |Fock - det(d)^-N| = " + fmt("%.3e", cached_omega0.literal) +
                                              ", truncation estimate " + fmt("%.1e", cached_omega0.truncation)};
}

Outcome omega0_companion() {
    return {cached_omega0.companion < 1e-4,
            "max |Fock - conj(det d)^-(N+1)| = " + fmt("%.3e", cached_omega0.companion)};
}

Outcome symbol_duality() {
    cached_symbol = symbol_stats();
    return {cached_symbol.literal < 1e-4, "max |omega_N(g,x) - Fock| = " + fmt("%.3e", cached_symbol.literal) +
                                              ", truncation estimate " + fmt("%.1e", cached_symbol.truncation)};
}

Outcome symbol_companion() {
    return {cached_symbol.companion < 1e-4,
            "max |conj omega_(N+1)(g,x) - Fock| = " + fmt("%.3e", cached_symbol.companion)};
}

double coordinate_error(int unit_idx) {
    CoherentParam x0 = CoherentParam::origin();
    double err = 0.0;
    for (int N : {2, 4, 7}) {
        for (int i = 0; i < 15; ++i) {
            double want = i == unit_idx ? 1.0 : 0.0;
            err = std::max(err, std::abs(coordinate_fn(i, x0, N) - want));
        }
    }
    return err;
}

Outcome coordinate_pinning() {
    double err = coordinate_error(pair_index(4, 5));
    return {err < 1e-8, "max |xi_AB(x0) - [AB=45]| = " + fmt("%.3e", err) + " over N in {2,4,7}"};
}

Outcome coordinate_companion() {
    double err = coordinate_error(pair_index(0, 5));
    return {err < 1e-8, "max |xi_AB(x0) - [AB=05]| = " + fmt("%.3e", err)};
}

Outcome star_structure() {
    auto pts = sample_points(30);
    double anti = 0.0;
    for (const auto& x : pts)
        for (int i = 0; i < 15; ++i)
            for (int j = 0; j < 15; ++j) anti = std::max(anti, antisymmetry_residual(i, j, x, 4));

    double na_max = 0.0, nb_max = 0.0, na_min = 1e300, nb_min = 1e300, fit_max = 0.0;
    for (int N = 4; N <= 12; ++N) {
        StarCoeffs c = fit_star_coeffs(N, pts);
        double na = std::abs(N * c.A_N), nb = std::abs(N * c.B_N);
        na_max = std::max(na_max, na);
        nb_max = std::max(nb_max, nb);
        na_min = std::min(na_min, na);
        nb_min = std::min(nb_min, nb);
        fit_max = std::max(fit_max, c.fit_residual);
    }
    // Order 1/N: N|A_N| and N|B_N| neither grow nor blow up across the range.
    bool bounded = std::isfinite(na_max) && std::isfinite(nb_max) && na_max <= 2.0 * na_min + 1e-12 &&
                   nb_max <= 2.0 * nb_min + 1e-12 && na_max < 10.0 && nb_max < 10.0;

    Rng rng(606);
    double assoc = 0.0;
    for (int k = 0; k < 10; ++k) {
        std::array<int, 3> t{};
        for (auto& v : t) v = int(rng.uniform() * 15) % 15;
        assoc = std::max(assoc, associativity_check(4, t, pts[std::size_t(k)]));
    }

    Outcome o;
    o.pass = anti < 1e-5 && bounded && assoc < 1e-3;
    o.detail = "antisymmetric residual " + fmt("%.2e", anti) + ", N|A_N| in [" + fmt("%.4f", na_min) + "," +
               fmt("%.4f", na_max) + "], N|B_N| in [" + fmt("%.4f", nb_min) + "," + fmt("%.4f", nb_max) +
               "], associativity " + fmt("%.2e", assoc) + " (fit residual " + fmt("%.3f", fit_max) + ")";
    return o;
}

Outcome measure_normalization() {
    Outcome o{true, ""};
    for (int N : {4, 5}) {
        MCResult r = mc_normalization(N, 1000000, 700 + std::uint64_t(N));
        bool ok = std::abs(r.estimate - 1.0) < 3.0 * r.std_error && r.std_error < 1e-2;
        o.pass = o.pass && ok;
        o.detail += "N=" + std::to_string(N) + ": " + fmt("%.5f", r.estimate) + " +- " + fmt("%.5f", r.std_error) +
                    (N == 4 ? "; " : "");
    }
    return o;
}

// K-bi-invariant test function in terms of t = (th^2 l1, th^2 l2) = eigenvalues of Z^dag Z.
double phi_radial(double l1, double l2) {
    double t1 = std::pow(std::tanh(l1), 2), t2 = std::pow(std::tanh(l2), 2);
    return std::exp(-(t1 + t2)) * (1.0 + 2.0 * t1 * t2) + 0.3 * (t1 + t2);
}

cplx phi_domain(const Mat2& Z) {
    Mat2 h = Z.adjoint() * Z;
    double tr = h.trace().real(), det = h.determinant().real();
    return std::exp(-tr) * (1.0 + 2.0 * det) + 0.3 * tr;
}

std::vector<RadialPoint> lock_grid() {
    std::vector<RadialPoint> g;
    for (double l1 : {0.35, 0.55, 0.75, 0.95, 1.15})
        for (double l2 : {0.1, 0.2, 0.25, 0.3}) g.push_back({l1, l2});
    return g;
}

double lock_residual(bool restore_constant) {
    double worst = 0.0;
    for (int N : {4, 5}) {
        for (const auto& p : lock_grid()) {
            Mat2 T = Mat2::Zero();
            T(0, 0) = std::tanh(p.lambda1);
            T(1, 1) = std::tanh(p.lambda2);
            double rad = radial_apply(N, phi_radial, p);
            if (restore_constant) rad -= (2.0 - N) * phi_radial(p.lambda1, p.lambda2);
            cplx full = full_apply(N, phi_domain, DomainPoint(T));
            worst = std::max(worst, std::abs(full - rad));
        }
    }
    return worst;
}

double invariance_residual() {
    Rng rng(808);
    auto f = [](const Mat2& Z) -> cplx {
        Mat2 h = Z.adjoint() * Z;
        return std::exp(-h.trace().real()) * (1.0 + Z(0, 1) + 0.5 * Z(1, 0) * Z(1, 0));
    };
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        int N = 4 + i % 3;
        GroupElement g = random_small_boost(rng, 0.4);
        Mat2 Z = random_unitary2(rng) * (0.5 * rng.uniform()) + random_unitary2(rng) * (0.2 * rng.uniform());
        DomainPoint p(Z);
        HoloFn tf = rep_function(g, N, f);
        cplx lhs = full_apply(N, tf, p);
        cplx rhs = rep_apply(g, N, [&](const Mat2& W) { return full_apply(N, f, DomainPoint(W)); }, p);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

Outcome laplacian_lock() {
    double lock = lock_residual(false);
    double inv = invariance_residual();
    return {lock < 1e-3 && inv < 1e-3,
            "max |full - radial| on 20-point grid = " + fmt("%.3e", lock) + ", invariance " + fmt("%.3e", inv)};
}

Outcome laplacian_companion() {
    double lock = lock_residual(true);
    return {lock < 1e-3, "max |full - (radial - (2-N) phi)| = " + fmt("%.3e", lock)};
}

Outcome spectrum_bookkeeping() {
    DiscreteSpectrum s = discrete_spectrum(5);
    std::vector<double> sub, pr;
    for (const auto& e : s.entries) {
        sub.push_back(e.eig_substituted);
        pr.push_back(e.eig_printed);
    }
    std::sort(sub.begin(), sub.end());
    std::sort(pr.begin(), pr.end());
    const std::vector<double> want_sub{0, 3, 3, 4, 4, 6, 7, 7, 8};
    const std::vector<double> want_pr{0, 5, 5, 10, 12, 12, 17, 17, 24};
    auto same = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::abs(a[i] - b[i]) > 1e-12) return false;
        return true;
    };
    bool ok = s.entries.size() == 9 && s.enumerated_count == 9 && same(sub, want_sub) && same(pr, want_pr) &&
              std::abs(continuous_floor(5) - 8.0) < 1e-12;
    std::string subs, prs;
    for (double v : sub) subs += (subs.empty() ? "" : ",") + fmt("%g", v);
    for (double v : pr) prs += (prs.empty() ? "" : ",") + fmt("%g", v);
    return {ok, "substituted {" + subs + "}, printed {" + prs + "}, enumerated " +
                    std::to_string(s.enumerated_count) + ", k(k-1)/2 = " + fmt("%g", s.formula_count) +
                    ", continuous floor " + fmt("%g", continuous_floor(5))};
}

Outcome free_field() {
    ModelParams p(SpectrumVariant::Substituted);
    p.N = 5;
    p.m2 = 1.0;
    TwoPointReport r = two_point_check(p, 100000, 1010);
    return {r.max_abs_z < 4.0 && r.max_abs_offdiag_z < 4.0,
            std::to_string(r.rows.size()) + " modes, max |z| " + fmt("%.2f", r.max_abs_z) + ", off-diagonal max |z| " +
                fmt("%.2f", r.max_abs_offdiag_z)};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<std::string> only;
    for (int i = 1; i < argc; ++i) only.insert(argv[i]);

    const std::vector<Criterion> criteria{
        {"1", "algebra closure", 1.0, true, algebra_closure},
        {"2", "group gate", 5.0, true, group_gate},
        {"3", "omega0 duality", 120.0, true, omega0_duality},
        {"3c", "omega0 vs conj det(d)^-(N+1)", 1.0, false, omega0_companion},
        {"4", "coherent-symbol duality", 120.0, true, symbol_duality},
        {"4c", "symbol vs conj omega_(N+1)", 1.0, false, symbol_companion},
        {"5", "coordinate pinning", 1.0, true, coordinate_pinning},
        {"5c", "coordinate pinning on X_05", 1.0, false, coordinate_companion},
        {"6", "star structure", 600.0, true, star_structure},
        {"7", "measure normalization", 180.0, true, measure_normalization},
        {"8", "Laplacian convention lock", 300.0, true, laplacian_lock},
        {"8c", "radial lock with constant term", 300.0, false, laplacian_companion},
        {"9", "spectrum bookkeeping", 1.0, true, spectrum_bookkeeping},
        {"10", "free-field Gaussian check", 60.0, true, free_field},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        std::string base = c.id;
        if (base.back() == 'c') base.pop_back();
        if (!only.empty() && !only.count(base)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_budget = dt < c.budget_s;
        bool pass = o.pass && in_budget;
        std::printf("%s criterion %-3s %-32s %s [%.2fs%s]\n", pass ? "PASS" : "FAIL", c.id.c_str(), c.name.c_str(),
                    o.detail.c_str(), dt, in_budget ? "" : ", over budget");
        std::fflush(stdout);
        if (!pass && c.primary) ++failed;
    }
    std::printf("%d primary criteria failed\n", failed);
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
