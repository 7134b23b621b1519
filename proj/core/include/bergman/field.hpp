#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bergman/laplacian.hpp"

namespace bergman {

enum class SpectrumVariant { Printed, Substituted };

SpectrumVariant parse_variant(const std::string& s);
std::string to_string(SpectrumVariant v);

struct ModelParams {
    int N = 5;
    double m2 = 0.0;
    SpectrumVariant variant;  // no default on purpose
    std::vector<double> potential;  // polynomial coefficients; declared only
    double tau_max = 10.0;
    int tau_points = 9;  // per axis; 0 disables the continuous grid

    explicit ModelParams(SpectrumVariant v) : variant(v) {}
};

/// 1 / (m^2 + 1/4 [2 (N-1)^2 + tau1^2 + tau2^2]); complex labels must give a real denominator.
double propagator(const ModelParams& p, cplx tau1, cplx tau2);
double propagator(const ModelParams& p, double tau1, double tau2);

struct Mode {
    SpectrumEntry entry;
    double weight = 0.0;       // m^2 + eig
    double quad_weight = 1.0;  // trapezoidal weight for continuous nodes
};

/// Discrete modes first, then the continuous tau grid (row-major in tau1).
std::vector<Mode> mode_table(const ModelParams& p);

struct FieldCoefficients {
    std::vector<double> discrete;
    std::vector<double> continuous;
};

/// 1/2 sum weight * quad_weight * C^2.
double free_action(const ModelParams& p, const FieldCoefficients& c);
double free_action(const std::vector<Mode>& modes, const FieldCoefficients& c);

FieldCoefficients sample_free_field(const ModelParams& p, std::uint64_t seed);

struct TwoPointRow {
    std::string label;
    double empirical = 0.0;
    double analytic = 0.0;
    double z = 0.0;
};

struct TwoPointReport {
    std::vector<TwoPointRow> rows;     // one per mode
    std::vector<TwoPointRow> offdiag;  // discrete pairs, analytic 0
    double max_abs_z = 0.0;
    double max_abs_offdiag_z = 0.0;
    double mean_action = 0.0;
    double action_std_error = 0.0;
};

TwoPointReport two_point_check(const ModelParams& p, std::size_t draws, std::uint64_t seed);

std::string mode_table_csv(const ModelParams& p, const std::vector<Mode>& modes);
std::string two_point_csv(const TwoPointReport& r);

}  // namespace bergman
