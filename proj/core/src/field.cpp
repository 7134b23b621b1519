#include "bergman/field.hpp"

#include <cmath>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/group.hpp"

namespace bergman {

SpectrumVariant parse_variant(const std::string& s) {
    if (s == "printed") return SpectrumVariant::Printed;
    if (s == "substituted") return SpectrumVariant::Substituted;
    throw UsageError("spectrum variant must be 'printed' or 'substituted'");
}

std::string to_string(SpectrumVariant v) { return v == SpectrumVariant::Printed ? "printed" : "substituted"; }

double propagator(const ModelParams& p, cplx tau1, cplx tau2) {
    const double n1 = p.N - 1.0;
    const cplx den = p.m2 + 0.25 * (2.0 * n1 * n1 + tau1 * tau1 + tau2 * tau2);
    if (std::abs(den.imag()) > 1e-12 * std::max(1.0, std::abs(den)))
        throw NonPositiveDenominator("propagator denominator is not real for these labels");
    if (!(den.real() > 0.0)) throw NonPositiveDenominator("propagator denominator is not positive");
    return 1.0 / den.real();
}

double propagator(const ModelParams& p, double tau1, double tau2) { return propagator(p, cplx(tau1), cplx(tau2)); }

std::vector<Mode> mode_table(const ModelParams& p) {
    if (p.m2 < 0.0) throw ValidationError("m2 must be non-negative");
    std::vector<Mode> modes;
    const auto ds = discrete_spectrum(p.N);
    for (const auto& e : ds.entries) {
        Mode m;
        m.entry = e;
        m.weight = p.m2 + (p.variant == SpectrumVariant::Printed ? e.eig_printed : e.eig_substituted);
        if (!(m.weight > 0.0)) throw NonPositiveDenominator("discrete mode has non-positive weight");
        modes.push_back(m);
    }
    if (p.tau_points > 0) {
        const int n = p.tau_points;
        const double dt = n > 1 ? 2.0 * p.tau_max / (n - 1) : 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double t1 = n > 1 ? -p.tau_max + dt * i : 0.0;
                const double t2 = n > 1 ? -p.tau_max + dt * j : 0.0;
                Mode m;
                m.entry = continuous_entry(p.N, t1, t2);
                m.weight = p.m2 + m.entry.eig_substituted;
                if (!(m.weight > 0.0)) throw NonPositiveDenominator("continuous mode has non-positive weight");
                const double w1 = (n > 1 && (i == 0 || i == n - 1)) ? 0.5 : 1.0;
                const double w2 = (n > 1 && (j == 0 || j == n - 1)) ? 0.5 : 1.0;
                m.quad_weight = (n > 1 ? dt * dt : 1.0) * w1 * w2;
                modes.push_back(m);
            }
    }
    return modes;
}

double free_action(const std::vector<Mode>& modes, const FieldCoefficients& c) {
    std::size_t nd = 0;
    for (const auto& m : modes)
        if (m.entry.discrete) ++nd;
    if (c.discrete.size() != nd || c.continuous.size() != modes.size() - nd)
        throw DimensionMismatch("coefficient counts do not match the mode table");
    double s = 0.0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const double C = i < nd ? c.discrete[i] : c.continuous[i - nd];
        s += modes[i].weight * modes[i].quad_weight * C * C;
    }
    return 0.5 * s;
}

double free_action(const ModelParams& p, const FieldCoefficients& c) { return free_action(mode_table(p), c); }

namespace {

FieldCoefficients draw(const std::vector<Mode>& modes, Rng& rng) {
    FieldCoefficients c;
    for (const auto& m : modes) {
        const double sd = 1.0 / std::sqrt(m.weight * m.quad_weight);
        (m.entry.discrete ? c.discrete : c.continuous).push_back(sd * rng.normal());
    }
    return c;
}

std::string mode_label(const Mode& m) {
    std::ostringstream os;
    if (m.entry.discrete)
        os << "l=(" << m.entry.l1 << "," << m.entry.l2 << ")";
    else
        os << "tau=(" << m.entry.tau1 << "," << m.entry.tau2 << ")";
    return os.str();
}

}  // namespace

FieldCoefficients sample_free_field(const ModelParams& p, std::uint64_t seed) {
    const auto modes = mode_table(p);
    Rng rng(seed);
    return draw(modes, rng);
}

TwoPointReport two_point_check(const ModelParams& p, std::size_t draws, std::uint64_t seed) {
    if (draws < 10000) throw ValidationError("two_point_check requires at least 1e4 draws");
    const auto modes = mode_table(p);
    const std::size_t M = modes.size();
    std::size_t nd = 0;
    for (const auto& m : modes)
        if (m.entry.discrete) ++nd;
    std::vector<double> s2(M, 0.0), s4(M, 0.0);
    const std::size_t npair = nd * (nd - 1) / 2;
    std::vector<double> c1(npair, 0.0), c2(npair, 0.0);
    double a1 = 0.0, a2 = 0.0;
    Rng rng(seed);
    std::vector<double> x(M);
    for (std::size_t d = 0; d < draws; ++d) {
        const auto c = draw(modes, rng);
        for (std::size_t i = 0; i < M; ++i) {
            // Continuous nodes are compared as quad_weight * C^2 against the propagator.
            const double v = i < nd ? c.discrete[i] : c.continuous[i - nd] * std::sqrt(modes[i].quad_weight);
            x[i] = v;
            s2[i] += v * v;
            s4[i] += v * v * v * v;
        }
        std::size_t k = 0;
        for (std::size_t i = 0; i < nd; ++i)
            for (std::size_t j = i + 1; j < nd; ++j, ++k) {
                const double v = x[i] * x[j];
                c1[k] += v;
                c2[k] += v * v;
            }
        const double act = free_action(modes, c);
        a1 += act;
        a2 += act * act;
    }
    const double n = double(draws);
    TwoPointReport r;
    for (std::size_t i = 0; i < M; ++i) {
        TwoPointRow row;
        row.label = mode_label(modes[i]);
        row.empirical = s2[i] / n;
        const auto& e = modes[i].entry;
        if (!e.discrete)
            row.analytic = propagator(p, e.tau1, e.tau2);
        else if (p.variant == SpectrumVariant::Substituted)
            row.analytic = propagator(p, cplx(0.0, e.tau1_im), cplx(0.0, e.tau2_im));
        else
            row.analytic = 1.0 / (p.m2 + double((p.N - 1) * (e.l1 + e.l2) + e.l1 * e.l1 + e.l2 * e.l2));
        const double var = std::max(s4[i] / n - row.empirical * row.empirical, 1e-300);
        row.z = (row.empirical - row.analytic) / std::sqrt(var / n);
        r.max_abs_z = std::max(r.max_abs_z, std::abs(row.z));
        r.rows.push_back(row);
    }
    std::size_t k = 0;
    for (std::size_t i = 0; i < nd; ++i)
        for (std::size_t j = i + 1; j < nd; ++j, ++k) {
            TwoPointRow row;
            row.label = mode_label(modes[i]) + " x " + mode_label(modes[j]);
            row.empirical = c1[k] / n;
            const double var = std::max(c2[k] / n - row.empirical * row.empirical, 1e-300);
            row.z = row.empirical / std::sqrt(var / n);
            r.max_abs_offdiag_z = std::max(r.max_abs_offdiag_z, std::abs(row.z));
            r.offdiag.push_back(row);
        }
    r.mean_action = a1 / n;
    r.action_std_error = std::sqrt(std::max(a2 / n - r.mean_action * r.mean_action, 0.0) / n);
    return r;
}

std::string mode_table_csv(const ModelParams& p, const std::vector<Mode>& modes) {
    std::ostringstream os;
    os.precision(17);
    os << "N,kind,l1,l2,tau1,tau2,eig,weight,quad_weight\n";
    for (const auto& m : modes) {
        const auto& e = m.entry;
        os << p.N << ',' << (e.discrete ? "discrete" : "continuous") << ',' << e.l1 << ',' << e.l2 << ','
           << e.tau1 << ',' << e.tau2 << ',' << (m.weight - p.m2) << ',' << m.weight << ',' << m.quad_weight << '\n';
    }
    return os.str();
}

std::string two_point_csv(const TwoPointReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << "mode,empirical,analytic,z\n";
    for (const auto& row : r.rows) os << '"' << row.label << "\"," << row.empirical << ',' << row.analytic << ',' << row.z << '\n';
    for (const auto& row : r.offdiag) os << '"' << row.label << "\"," << row.empirical << ",0," << row.z << '\n';
    return os.str();
}

}  // namespace bergman
