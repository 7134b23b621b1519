#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bergman/bergman.hpp"
#include "json.hpp"

namespace bergman::cli {

using nlohmann::json;

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::string s;
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_field(r[i]);
            s += "\r\n";
        };
        line(header);
        for (const auto& r : rows) line(r);
        return s;
    }
};

struct Artifact {
    json data = json::object();
    std::optional<Table> table;
    int exit_code = 0;
    std::string failure;  // one-line diagnostic when exit_code != 0
};

struct Common {
    std::string out = "json";
    std::string output;
    std::string config;
    std::uint64_t seed = 1;
};

using Runner = std::function<Artifact(const Common&)>;

struct Subcommand {
    CLI::App* app = nullptr;
    Runner run;
};

// Matrix input: {"re": [[...]], "im": [[...]]}.
Eigen::MatrixXcd read_matrix(const json& j) {
    if (!j.contains("re")) throw ValidationError("matrix JSON needs a 're' field");
    const auto& re = j.at("re");
    const std::size_t n = re.size();
    if (n != 2 && n != 4) throw DimensionMismatch("matrix must be 2x2 or 4x4");
    Eigen::MatrixXcd m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        if (re.at(r).size() != n) throw DimensionMismatch("matrix rows must be square");
        for (std::size_t c = 0; c < n; ++c) {
            double im = j.contains("im") ? j.at("im").at(r).at(c).get<double>() : 0.0;
            m(Eigen::Index(r), Eigen::Index(c)) = cplx(re.at(r).at(c).get<double>(), im);
        }
    }
    return m;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ValidationError("invalid JSON in " + path + ": " + e.what());
    }
}

Mat4 read_mat4(const std::string& path) {
    Eigen::MatrixXcd m = read_matrix(read_json_file(path));
    if (m.rows() != 4) throw DimensionMismatch("expected a 4x4 matrix in " + path);
    return m;
}

json matrix_json(const Eigen::MatrixXcd& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) o[t.header[i]] = r[i];
        rows.push_back(o);
    }
    return rows;
}

std::string timestamp() {
    std::time_t t;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
        t = std::time_t(std::strtoll(sde, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest_json(const RunManifest& m) {
    return {{"command", m.command},
            {"parameters", m.parameters},
            {"seed", m.seed},
            {"tool_version", m.tool_version},
            {"timestamp", m.timestamp}};
}

// Coherent parameter from --x file and/or --l1/--l2.
struct ParamOpts {
    std::string x_file;
    double l1 = 0.0;
    double l2 = 0.0;

    void add(CLI::App* app) {
        app->add_option("--x", x_file, "JSON file with kprime, kdprime (matrices), lambda1, lambda2");
        app->add_option("--l1", l1, "lambda1 of the coherent parameter");
        app->add_option("--l2", l2, "lambda2 of the coherent parameter");
    }

    CoherentParam get(const CLI::App* app) const {
        CoherentParam x;
        if (!x_file.empty()) {
            json j = read_json_file(x_file);
            if (j.contains("kprime")) x.kprime = read_matrix(j.at("kprime"));
            if (j.contains("kdprime")) x.kdprime = read_matrix(j.at("kdprime"));
            x.lambda1 = j.value("lambda1", 0.0);
            x.lambda2 = j.value("lambda2", 0.0);
        }
        if (app->count("--l1")) x.lambda1 = l1;
        if (app->count("--l2")) x.lambda2 = l2;
        x.validate();
        return x;
    }
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--out", c.out, "output format")->check(CLI::IsMember({"json", "csv"}));
    app->add_option("--output", c.output, "write the artifact to this file instead of stdout");
    app->add_option("--config", c.config, "key=value file with option defaults");
    app->add_option("--seed", c.seed, "master seed")->envname("BERGMAN_SEED");
}

// --- subcommands ------------------------------------------------------------------------------

Subcommand check_group(CLI::App& root) {
    auto in = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-10);
    CLI::App* app = root.add_subcommand("check-group", "membership report for a 4x4 matrix");
    app->add_option("--in", *in, "JSON matrix file")->required();
    app->add_option("--tol", *tol, "membership tolerance");
    return {app, [=](const Common&) {
                MembershipReport r = is_member(read_mat4(*in), *tol);
                Artifact a;
                a.data = {{"member", r.member},
                          {"gamma_residual", r.gamma_residual},
                          {"det_residual", r.det_residual},
                          {"column_printed", r.column_printed},
                          {"column_corrected", r.column_corrected},
                          {"row", r.row}};
                Table t{{"quantity", "value"}, {}};
                t.rows.push_back({"member", r.member ? "true" : "false"});
                t.rows.push_back({"gamma_residual", num(r.gamma_residual)});
                t.rows.push_back({"det_residual", num(r.det_residual)});
                for (int i = 0; i < 3; ++i) {
                    t.rows.push_back({"column_printed_" + std::to_string(i), num(r.column_printed[std::size_t(i)])});
                    t.rows.push_back(
                        {"column_corrected_" + std::to_string(i), num(r.column_corrected[std::size_t(i)])});
                    t.rows.push_back({"row_" + std::to_string(i), num(r.row[std::size_t(i)])});
                }
                a.table = t;
                if (!r.member) {
                    a.exit_code = 2;
                    a.failure = "NotInGroup: matrix fails g^dag Gamma g = Gamma or det g = 1";
                }
                return a;
            }};
}

Subcommand kak(CLI::App& root) {
    auto in = std::make_shared<std::string>();
    auto tol = std::make_shared<double>(1e-8);
    CLI::App* app = root.add_subcommand("kak", "Cartan decomposition g = k delta q of a matrix");
    app->add_option("--in", *in, "JSON matrix file")->required();
    app->add_option("--tol", *tol, "round-trip tolerance");
    return {app, [=](const Common&) {
                KAKFactors f = kak_decompose(GroupElement(read_mat4(*in)));
                Artifact a;
                a.data = {{"lambda1", f.lambda1},
                          {"lambda2", f.lambda2},
                          {"degenerate", f.degenerate},
                          {"residual", f.residual},
                          {"k", matrix_json(f.k.matrix())},
                          {"q", matrix_json(f.q.matrix())}};
                a.table = Table{{"quantity", "value"},
                                {{"lambda1", num(f.lambda1)},
                                 {"lambda2", num(f.lambda2)},
                                 {"degenerate", f.degenerate ? "true" : "false"},
                                 {"residual", num(f.residual)}}};
                if (f.residual > *tol) {
                    a.exit_code = 3;
                    a.failure = "ToleranceFailure: KAK round-trip residual " + num(f.residual);
                }
                return a;
            }};
}

Subcommand algebra(CLI::App& root) {
    auto basis = std::make_shared<std::string>("corrected");
    CLI::App* app = root.add_subcommand("algebra", "structure-constant table from matrix commutators");
    app->add_option("--basis", *basis, "generator matrices")->check(CLI::IsMember({"corrected", "printed"}));
    return {app, [=](const Common&) {
                GeneratorBasis b = *basis == "printed" ? printed_generators() : build_generators();
                double res = 0.0;
                StructureTable f = structure_constants_from_matrices(b, &res);
                double diff = table_difference(f, structure_constants());
                int mism = bracket_mismatches(b);
                Table t{{"A", "B", "C", "D", "E", "F", "value"}, {}};
                for (int i = 0; i < 15; ++i)
                    for (int j = 0; j < 15; ++j)
                        for (int k = 0; k < 15; ++k) {
                            double v = f[std::size_t(i)][std::size_t(j)][k];
                            if (std::abs(v) < 1e-13) continue;
                            auto [A, B] = pair_of(i);
                            auto [C, D] = pair_of(j);
                            auto [E, F] = pair_of(k);
                            t.rows.push_back({std::to_string(A), std::to_string(B), std::to_string(C),
                                              std::to_string(D), std::to_string(E), std::to_string(F), num(v)});
                        }
                Artifact a;
                a.data = {{"basis", *basis},
                          {"expansion_residual", res},
                          {"difference_from_formula", diff},
                          {"mismatched_pairs", mism}};
                a.table = t;
                if (diff > 1e-12 || res > 1e-12) {
                    a.exit_code = 3;
                    a.failure = "ToleranceFailure: " + std::to_string(mism) +
                                " ordered brackets disagree with the structure-constant formula";
                }
                return a;
            }};
}

Subcommand haar(CLI::App& root) {
    auto lmax = std::make_shared<double>(2.0);
    auto n = std::make_shared<int>(21);
    CLI::App* app = root.add_subcommand("haar", "radial Haar density on the chamber l1 >= l2 >= 0");
    app->add_option("--l-max", *lmax, "largest lambda")->check(CLI::PositiveNumber);
    app->add_option("--n", *n, "grid points per axis")->check(CLI::Range(2, 10000));
    return {app, [=](const Common&) {
                Table t{{"l1", "l2", "density"}, {}};
                for (int i = 0; i < *n; ++i)
                    for (int j = 0; j <= i; ++j) {
                        double l1 = *lmax * i / (*n - 1), l2 = *lmax * j / (*n - 1);
                        t.rows.push_back({num(l1), num(l2), num(haar_radial_density(l1, l2))});
                    }
                Artifact a;
                a.data = {{"points", t.rows.size()}};
                a.table = t;
                return a;
            }};
}

Subcommand measure_norm(CLI::App& root) {
    auto N = std::make_shared<int>(5);
    auto samples = std::make_shared<std::size_t>(1000000);
    auto sigma = std::make_shared<double>(3.0);
    CLI::App* app = root.add_subcommand("measure-norm", "Monte Carlo normalization of the invariant measure");
    app->add_option("--N", *N, "level");
    app->add_option("--samples", *samples, "number of proposals");
    app->add_option("--sigma", *sigma, "tolerance in standard errors");
    return {app, [=](const Common& c) {
                MCResult r = mc_normalization(*N, *samples, c.seed);
                Artifact a;
                double z = (r.estimate - 1.0) / r.std_error;
                a.data = {{"N", *N},         {"estimate", r.estimate}, {"std_error", r.std_error},
                          {"accepted", r.accepted}, {"samples", r.samples}, {"z", z}};
                a.table = Table{{"N", "estimate", "std_error", "accepted", "samples", "z"},
                                {{std::to_string(*N), num(r.estimate), num(r.std_error), std::to_string(r.accepted),
                                  std::to_string(r.samples), num(z)}}};
                if (!(std::abs(z) <= *sigma)) {
                    a.exit_code = 3;
                    a.failure = "ToleranceFailure: normalization off by " + num(z) + " standard errors";
                }
                return a;
            }};
}

Subcommand omega_cmd(CLI::App& root) {
    auto N = std::make_shared<int>(4);
    auto in = std::make_shared<std::string>();
    auto param = std::make_shared<ParamOpts>();
    auto fock = std::make_shared<bool>(false);
    auto pmax = std::make_shared<int>(8);
    auto max_states = std::make_shared<std::size_t>(300000);
    CLI::App* app = root.add_subcommand("omega", "symbol omega(g, x) from the closed form and optionally Fock space");
    app->add_option("--N", *N, "level");
    app->add_option("--in", *in, "JSON matrix file for g")->required();
    param->add(app);
    app->add_flag("--fock", *fock, "also evaluate <x|T(g)|x> in the truncated Fock space");
    app->add_option("--P-max", *pmax, "pair truncation for --fock");
    app->add_option("--max-states", *max_states, "sector size cap for --fock");
    return {app, [=](const Common&) {
                GroupElement g(read_mat4(*in));
                CoherentParam x = param->get(app);
                cplx w = omega(g, x, *N);
                cplx wp = omega_printed(g, x, *N);
                Artifact a;
                a.data = {{"N", *N}, {"omega", {w.real(), w.imag()}}, {"omega_printed_arrangement", {wp.real(), wp.imag()}}};
                Table t{{"quantity", "re", "im"},
                        {{"omega", num(w.real()), num(w.imag())},
                         {"omega_printed_arrangement", num(wp.real()), num(wp.imag())}}};
                if (*fock) {
                    Omega0Result r = omega_fock(RepConfig{*N, *pmax, *max_states}, g, x);
                    a.data["fock"] = {r.value.real(), r.value.imag()};
                    a.data["fock_truncation_estimate"] = r.truncation_estimate;
                    a.data["fock_truncation_warning"] = r.truncation_warning;
                    t.rows.push_back({"fock", num(r.value.real()), num(r.value.imag())});
                    t.rows.push_back({"fock_truncation_estimate", num(r.truncation_estimate), "0"});
                }
                a.table = t;
                return a;
            }};
}

Subcommand coords(CLI::App& root) {
    auto N = std::make_shared<int>(4);
    auto param = std::make_shared<ParamOpts>();
    CLI::App* app = root.add_subcommand("coords", "coordinate functions xi_AB at a coherent parameter");
    app->add_option("--N", *N, "level");
    param->add(app);
    return {app, [=](const Common&) {
                CoherentParam x = param->get(app);
                Table t{{"AB", "symbol_re", "symbol_im", "xi"}, {}};
                json rows = json::object();
                for (int i = 0; i < 15; ++i) {
                    cplx s = coordinate_symbol(i, x, *N);
                    double xi = coordinate_fn(i, x, *N);
                    t.rows.push_back({pair_label(i), num(s.real()), num(s.imag()), num(xi)});
                    rows[pair_label(i)] = xi;
                }
                Artifact a;
                a.data = {{"N", *N}, {"xi", rows}};
                a.table = t;
                return a;
            }};
}

std::pair<int, int> parse_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw UsageError("expected N or N1..N2, got '" + s + "'");
    }
}

Subcommand star_coeffs(CLI::App& root) {
    auto range = std::make_shared<std::string>("4..12");
    auto points = std::make_shared<std::size_t>(30);
    auto max_res = std::make_shared<double>(-1.0);
    CLI::App* app = root.add_subcommand("star-coeffs", "fitted A_N, B_N of the symmetric star part over a range of N");
    app->add_option("--N", *range, "level or range N1..N2");
    app->add_option("--points", *points, "number of sample points (>= 20)");
    app->add_option("--max-fit-residual", *max_res, "fail when a fit residual exceeds this (negative: report only)");
    return {app, [=](const Common&) {
                auto [lo, hi] = parse_range(*range);
                if (lo < 1 || hi < lo) throw UsageError("invalid N range " + *range);
                auto pts = sample_points(*points);
                Table t{{"N", "A_N", "B_N", "N_A_N", "N_B_N", "fit_residual", "rms_residual"}, {}};
                double worst = 0.0;
                for (int N = lo; N <= hi; ++N) {
                    StarCoeffs c = fit_star_coeffs(N, pts);
                    worst = std::max(worst, c.fit_residual);
                    t.rows.push_back({std::to_string(N), num(c.A_N), num(c.B_N), num(N * c.A_N), num(N * c.B_N),
                                      num(c.fit_residual), num(c.rms_residual)});
                }
                Artifact a;
                a.data = {{"max_fit_residual", worst}};
                a.table = t;
                if (*max_res >= 0.0 && worst > *max_res) {
                    a.exit_code = 3;
                    a.failure = "ToleranceFailure: star fit residual " + num(worst) + " exceeds " + num(*max_res);
                }
                return a;
            }};
}

Subcommand spectrum(CLI::App& root) {
    auto N = std::make_shared<int>(5);
    auto variant = std::make_shared<std::string>("both");
    auto kind = std::make_shared<std::string>("discrete");
    auto tau_max = std::make_shared<double>(10.0);
    auto tau_points = std::make_shared<int>(9);
    CLI::App* app = root.add_subcommand("spectrum", "discrete and continuous spectrum of the radial Laplacian");
    app->add_option("--N", *N, "level");
    app->add_option("--variant", *variant, "discrete eigenvalue formula")
        ->check(CLI::IsMember({"printed", "substituted", "both"}));
    app->add_option("--table", *kind, "which branch to tabulate")->check(CLI::IsMember({"discrete", "continuous"}));
    app->add_option("--tau-max", *tau_max, "continuous grid half-width");
    app->add_option("--tau-points", *tau_points, "continuous grid points per axis")->check(CLI::Range(1, 100000));
    return {app, [=](const Common&) {
                DiscreteSpectrum s = discrete_spectrum(*N);
                Artifact a;
                a.data = {{"N", *N},
                          {"k", s.k},
                          {"enumerated_count", s.enumerated_count},
                          {"formula_count", s.formula_count},
                          {"continuous_floor", continuous_floor(*N)}};
                bool pr = *variant != "substituted", sub = *variant != "printed";
                Table t;
                if (*kind == "discrete") {
                    t.header = {"N", "l1", "l2", "tau1_im", "tau2_im"};
                    if (pr) t.header.push_back("eig_printed");
                    if (sub) t.header.push_back("eig_substituted");
                    t.header.push_back("note");
                    for (const auto& e : s.entries) {
                        std::vector<std::string> r{std::to_string(*N), std::to_string(e.l1), std::to_string(e.l2),
                                                   num(e.tau1_im), num(e.tau2_im)};
                        if (pr) r.push_back(num(e.eig_printed));
                        if (sub) r.push_back(num(e.eig_substituted));
                        r.push_back(e.degeneracy_note);
                        t.rows.push_back(r);
                    }
                } else {
                    t.header = {"N", "tau1", "tau2", "eig"};
                    int n = *tau_points;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) {
                            double t1 = n > 1 ? -*tau_max + 2.0 * *tau_max * i / (n - 1) : 0.0;
                            double t2 = n > 1 ? -*tau_max + 2.0 * *tau_max * j / (n - 1) : 0.0;
                            SpectrumEntry e = continuous_entry(*N, t1, t2);
                            t.rows.push_back({std::to_string(*N), num(t1), num(t2), num(e.eig_substituted)});
                        }
                }
                a.table = t;
                return a;
            }};
}

Subcommand laplacian_check(CLI::App& root) {
    auto N = std::make_shared<int>(5);
    auto configs = std::make_shared<int>(20);
    auto tol = std::make_shared<double>(1e-3);
    auto h = std::make_shared<double>(1e-3);
    auto restore = std::make_shared<bool>(false);
    CLI::App* app = root.add_subcommand("laplacian-check", "invariance and radial-lock residuals of the Laplacian");
    app->add_option("--N", *N, "level");
    app->add_option("--configs", *configs, "number of random (g, Z) configurations and lock points");
    app->add_option("--tol", *tol, "tolerance for both residuals");
    app->add_option("--step", *h, "finite-difference step");
    app->add_flag("--restore-constant", *restore, "gate the lock on radial - (2 - N) phi instead of radial");
    return {app, [=](const Common& c) {
                Rng rng(c.seed);
                auto f = [](const Mat2& Z) {
                    Mat2 hz = Z.adjoint() * Z;
                    return std::exp(-hz.trace().real()) * (1.0 + Z(0, 1) + 0.5 * Z(1, 0) * Z(1, 0));
                };
                auto phi = [](double l1, double l2) {
                    double t1 = std::pow(std::tanh(l1), 2), t2 = std::pow(std::tanh(l2), 2);
                    return std::exp(-(t1 + t2)) * (1.0 + 2.0 * t1 * t2) + 0.3 * (t1 + t2);
                };
                auto phiZ = [](const Mat2& Z) {
                    Mat2 hz = Z.adjoint() * Z;
                    double tr = hz.trace().real(), det = hz.determinant().real();
                    return cplx(std::exp(-tr) * (1.0 + 2.0 * det) + 0.3 * tr);
                };
                Table t{{"check", "index", "l1_or_g_norm", "residual", "residual_with_constant"}, {}};
                double inv_max = 0.0, lock_max = 0.0, lockc_max = 0.0;
                for (int i = 0; i < *configs; ++i) {
                    AlgebraElement xi = random_algebra_element(rng, 0.8);
                    GroupElement g = exp_generator(xi);
                    Mat2 Z = random_unitary2(rng) * (0.5 * rng.uniform()) + random_unitary2(rng) * (0.2 * rng.uniform());
                    DomainPoint p(Z);
                    cplx lhs = full_apply(*N, rep_function(g, *N, f), p, *h);
                    cplx rhs = rep_apply(g, *N, [&](const Mat2& W) { return full_apply(*N, f, DomainPoint(W), *h); }, p);
                    double r = std::abs(lhs - rhs);
                    inv_max = std::max(inv_max, r);
                    t.rows.push_back({"invariance", std::to_string(i), num(xi.coeffs.norm()), num(r), ""});
                }
                for (int i = 0; i < *configs; ++i) {
                    double l2 = 0.1 + 0.25 * rng.uniform();
                    double l1 = l2 + 0.05 + 0.8 * rng.uniform();
                    Mat2 T = Mat2::Zero();
                    T(0, 0) = std::tanh(l1);
                    T(1, 1) = std::tanh(l2);
                    double rad = radial_apply(*N, phi, RadialPoint{l1, l2}, *h);
                    cplx full = full_apply(*N, phiZ, DomainPoint(T), *h);
                    double r = std::abs(full - rad);
                    double rc = std::abs(full - (rad - (2.0 - *N) * phi(l1, l2)));
                    lock_max = std::max(lock_max, r);
                    lockc_max = std::max(lockc_max, rc);
                    t.rows.push_back({"lock", std::to_string(i), num(l1), num(r), num(rc)});
                }
                Artifact a;
                a.data = {{"N", *N},
                          {"invariance_max", inv_max},
                          {"lock_max", lock_max},
                          {"lock_max_with_constant", lockc_max}};
                a.table = t;
                double lock_gate = *restore ? lockc_max : lock_max;
                if (inv_max > *tol || lock_gate > *tol) {
                    a.exit_code = 3;
                    a.failure = "ToleranceFailure: invariance " + num(inv_max) + ", lock " + num(lock_gate) +
                                " against tolerance " + num(*tol);
                }
                return a;
            }};
}

Subcommand field(CLI::App& root) {
    auto N = std::make_shared<int>(5);
    auto m2 = std::make_shared<double>(1.0);
    auto variant = std::make_shared<std::string>();
    auto mode = std::make_shared<std::string>("table");
    auto draws = std::make_shared<std::size_t>(100000);
    auto tau_max = std::make_shared<double>(10.0);
    auto tau_points = std::make_shared<int>(9);
    auto zmax = std::make_shared<double>(4.0);
    CLI::App* app = root.add_subcommand("field", "free scalar field: mode table, sampling, two-point check");
    app->add_option("--N", *N, "level");
    app->add_option("--m2", *m2, "mass squared");
    app->add_option("--variant", *variant, "discrete spectrum formula")
        ->required()
        ->check(CLI::IsMember({"printed", "substituted"}));
    app->add_option("--mode", *mode, "what to compute")->check(CLI::IsMember({"table", "sample", "two-point"}));
    app->add_option("--draws", *draws, "number of draws for two-point");
    app->add_option("--tau-max", *tau_max, "continuous grid half-width");
    app->add_option("--tau-points", *tau_points, "continuous grid points per axis (0 disables)");
    app->add_option("--z-max", *zmax, "two-point z-score tolerance");
    return {app, [=](const Common& c) {
                ModelParams p(parse_variant(*variant));
                p.N = *N;
                p.m2 = *m2;
                p.tau_max = *tau_max;
                p.tau_points = *tau_points;
                auto modes = mode_table(p);
                std::size_t nd = 0;
                for (const auto& m : modes) nd += m.entry.discrete ? 1 : 0;
                Artifact a;
                a.data = {{"N", p.N},
                          {"m2", p.m2},
                          {"variant", to_string(p.variant)},
                          {"discrete_modes", nd},
                          {"continuous_modes", modes.size() - nd},
                          {"tau_max", p.tau_max},
                          {"tau_points", p.tau_points}};
                if (*mode == "table") {
                    Table t{{"N", "kind", "l1", "l2", "tau1", "tau2", "eig", "weight", "quad_weight"}, {}};
                    for (const auto& m : modes) {
                        const auto& e = m.entry;
                        t.rows.push_back({std::to_string(p.N), e.discrete ? "discrete" : "continuous",
                                          std::to_string(e.l1), std::to_string(e.l2), num(e.tau1), num(e.tau2),
                                          num(m.weight - p.m2), num(m.weight), num(m.quad_weight)});
                    }
                    a.table = t;
                } else if (*mode == "sample") {
                    FieldCoefficients fc = sample_free_field(p, c.seed);
                    Table t{{"index", "kind", "coefficient"}, {}};
                    for (std::size_t i = 0; i < fc.discrete.size(); ++i)
                        t.rows.push_back({std::to_string(i), "discrete", num(fc.discrete[i])});
                    for (std::size_t i = 0; i < fc.continuous.size(); ++i)
                        t.rows.push_back({std::to_string(nd + i), "continuous", num(fc.continuous[i])});
                    a.data["action"] = free_action(modes, fc);
                    a.table = t;
                } else {
                    TwoPointReport r = two_point_check(p, *draws, c.seed);
                    Table t{{"mode", "empirical", "analytic", "z"}, {}};
                    for (const auto& row : r.rows)
                        t.rows.push_back({row.label, num(row.empirical), num(row.analytic), num(row.z)});
                    for (const auto& row : r.offdiag)
                        t.rows.push_back({row.label, num(row.empirical), "0", num(row.z)});
                    a.data["max_abs_z"] = r.max_abs_z;
                    a.data["max_abs_offdiag_z"] = r.max_abs_offdiag_z;
                    a.data["mean_action"] = r.mean_action;
                    a.data["action_std_error"] = r.action_std_error;
                    a.table = t;
                    if (r.max_abs_z >= *zmax || r.max_abs_offdiag_z >= *zmax) {
                        a.exit_code = 3;
                        a.failure = "ToleranceFailure: two-point z-score " +
                                    num(std::max(r.max_abs_z, r.max_abs_offdiag_z)) + " reaches " + num(*zmax);
                    }
                }
                return a;
            }};
}

// Flat key=value lines; '#' starts a comment.
std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        s.erase(0, s.find_first_not_of(ws));
        s.erase(s.find_last_not_of(ws) + 1);
        return s;
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args)
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    return false;
}

std::map<std::string, std::string> parameters(const CLI::App* app) {
    std::map<std::string, std::string> p;
    for (const CLI::Option* o : app->get_options()) {
        std::string name = o->get_single_name();
        if (name.empty() || name == "help" || name == "output" || name == "config") continue;
        std::string v;
        if (o->count() > 0) {
            for (const auto& r : o->results()) v += (v.empty() ? "" : " ") + r;
            if (o->get_expected_min() == 0 && v.empty()) v = "true";
        } else {
            v = o->get_default_str();
        }
        p[name] = v;
    }
    return p;
}

}  // namespace

int dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
    CLI::App root{"Quantized Bergman domain toolkit", "bergman"};
    root.require_subcommand(1);
    root.set_version_flag("--version", kToolVersion);
    Common common;
    std::vector<Subcommand> subs{check_group(root), kak(root),       algebra(root),         haar(root),
                                 measure_norm(root), omega_cmd(root), coords(root),          star_coeffs(root),
                                 spectrum(root),     laplacian_check(root), field(root)};
    for (auto& s : subs) add_common(s.app, common);

    std::vector<std::string> args = args_in;
    try {
        std::string cfg = find_config(args);
        if (!cfg.empty() && !args.empty()) {
            CLI::App* sub = nullptr;
            for (auto& s : subs)
                if (s.app->get_name() == args[0]) sub = s.app;
            if (sub) {
                for (const auto& [k, v] : read_config(cfg)) {
                    std::string flag = "--" + k;
                    if (!sub->get_option_no_throw(flag)) throw UsageError("unknown config key '" + k + "'");
                    if (given(args, flag)) continue;
                    args.push_back(flag);
                    args.push_back(v);
                }
            }
        }
        std::vector<std::string> rev(args.rbegin(), args.rend());
        root.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return root.exit(e, out, err);
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        err << "UsageError: " << msg << "\n";
        return 2;
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << "\n";
        return e.exit_code();
    }

    const Subcommand* chosen = nullptr;
    for (const auto& s : subs)
        if (s.app->parsed()) chosen = &s;
    if (!chosen) {
        err << "UsageError: no subcommand given\n";
        return 2;
    }

    RunManifest manifest;
    manifest.command = chosen->app->get_name();
    manifest.parameters = parameters(chosen->app);
    manifest.seed = common.seed;
    manifest.timestamp = timestamp();

    Artifact art;
    try {
        art = chosen->run(common);
    } catch (const Error& e) {
        err << e.kind() << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const json::exception& e) {
        err << "ValidationError: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "NumericalError: " << e.what() << "\n";
        return 3;
    }

    std::string body;
    const json mj = manifest_json(manifest);
    if (common.out == "csv") {
        if (!art.table) {
            err << "UsageError: " << manifest.command << " has no tabular output\n";
            return 2;
        }
        body = art.table->csv();
    } else {
        json doc = {{"manifest", mj}, {"result", art.data}};
        if (art.table) doc["table"] = table_json(*art.table);
        body = doc.dump(2) + "\n";
    }

    if (common.output.empty()) {
        out << body;
        if (common.out == "csv") err << "manifest: " << mj.dump() << "\n";
    } else {
        std::ofstream f(common.output, std::ios::binary);
        if (!f) {
            err << "ValidationError: cannot write " << common.output << "\n";
            return 2;
        }
        f << body;
        if (common.out == "csv") {
            std::ofstream m(common.output + ".manifest.json", std::ios::binary);
            m << mj.dump(2) << "\n";
        }
    }
    if (art.exit_code != 0) err << art.failure << "\n";
    return art.exit_code;
}

}  // namespace bergman::cli
