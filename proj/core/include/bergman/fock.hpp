#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "bergman/algebra.hpp"
#include "bergman/group.hpp"
#include "bergman/types.hpp"

namespace bergman {

// Mode layout: a_{alpha beta} -> 2*alpha + beta, b_{alpha beta} -> 4 + 2*alpha + beta.
inline int a_mode(int alpha, int beta) { return 2 * alpha + beta; }
inline int b_mode(int alpha, int beta) { return 4 + 2 * alpha + beta; }

struct RepConfig {
    int N = 1;
    int P_max = 8;
    std::size_t max_states = 200000;
};

struct FockBasisState {
    std::array<int, 4> m{};  // a occupations (11, 12, 21, 22)
    std::array<int, 4> n{};  // b occupations
    bool operator==(const FockBasisState&) const = default;
};

using Occupation = std::array<std::uint8_t, 8>;

/// All 8-mode states with sum(n) - sum(m) = charge and sum(m) <= P_max, ranked combinatorially.
class FockBasis {
public:
    FockBasis(int charge, int P_max, std::size_t max_states = 200000);

    static std::size_t count(int charge, int P_max);

    std::size_t size() const { return occ_.size(); }
    int charge() const { return charge_; }
    int P_max() const { return P_max_; }

    const Occupation& occupation(std::size_t i) const { return occ_[i]; }
    FockBasisState state(std::size_t i) const;
    int pairs(std::size_t i) const;  // sum(m)

    /// Rank of an occupation tuple, or -1 if it is outside this basis.
    long rank(const std::array<int, 8>& occ) const;
    long rank(const FockBasisState& s) const;

    std::string csv() const;

private:
    int charge_;
    int P_max_;
    int p_min_;
    std::vector<std::size_t> offset_;
    std::vector<Occupation> occ_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Basis shared across calls with the same (charge, P_max).
BasisPtr shared_basis(int charge, int P_max, std::size_t max_states = 200000);

class FockVector {
public:
    FockVector() = default;
    explicit FockVector(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    std::size_t size() const { return amps_.size(); }

    cplx& operator[](std::size_t i) { return amps_[i]; }
    cplx operator[](std::size_t i) const { return amps_[i]; }
    cplx amplitude(const FockBasisState& s) const;
    void set(const FockBasisState& s, cplx value);

    double norm() const;
    cplx dot(const FockVector& other) const;  // <this|other>
    std::size_t support() const;

    /// Same amplitudes re-indexed in another basis with equal charge; states missing there are dropped.
    FockVector restricted_to(const BasisPtr& other) const;

    FockVector& operator+=(const FockVector& o);
    FockVector& operator-=(const FockVector& o);
    FockVector& operator*=(cplx s);

    const std::vector<cplx>& data() const { return amps_; }
    std::vector<cplx>& data() { return amps_; }

private:
    BasisPtr basis_;
    std::vector<cplx> amps_;
};

struct Ladder {
    int mode;
    bool create;
};

/// coeff * ops[0] * ops[1] * ... (rightmost acts first).
struct LadderTerm {
    cplx coeff;
    std::vector<Ladder> ops;
};

class FockOperator {
public:
    std::vector<LadderTerm> terms;
    cplx constant{0.0, 0.0};

    /// Change of sum(n) - sum(m) caused by the operator.
    int charge_shift() const;

    FockOperator operator+(const FockOperator& o) const;
    FockOperator operator*(cplx s) const;

    /// Applies the operator; output lives in `target` (charge must match); states beyond P_max are dropped.
    FockVector apply(const FockVector& v, const BasisPtr& target) const;
    FockVector apply(const FockVector& v) const;

    /// Crude bound on the operator norm over `basis`, used to pick Taylor steps.
    double norm_bound(const FockBasis& basis) const;
};

FockOperator ladder(int mode, bool create);
/// z_{a alpha} and its adjoint in the layout Z = (a^dag ; b).
FockOperator z_op(int a, int alpha);
FockOperator zdag_op(int a, int alpha);

/// -sum z^dag_{a alpha} (Gamma X)_{ac} z_{c alpha}, ordered exactly as written.
FockOperator operator_from_matrix(const Mat4& X);

struct Rep {
    RepConfig cfg;
    BasisPtr basis;
    std::array<FockOperator, 15> generators;
    FockOperator casimir;
};

/// Throws SectorOverflow if the sector exceeds cfg.max_states.
Rep build_rep(const RepConfig& cfg);

FockVector lowest_state(const RepConfig& cfg);
FockVector lowest_state(const BasisPtr& basis, int N);

/// (N_b - N_a) / 2.
FockOperator casimir_op();

struct PairOps {
    FockOperator lower;  // T^B_-
    FockOperator raise;  // T^B_+
};
PairOps pair_ops(const Mat2& B);

struct ExpResult {
    FockVector vec;
    int steps = 0;
    int applications = 0;
};

/// exp(t * op) v by scaled Taylor series on the truncated sector.
ExpResult apply_exp(const FockOperator& op, const FockVector& v, double t = 1.0, double tol = 1e-15);

struct BoostResult {
    FockVector vec;
    double truncation_estimate = 0.0;
    bool truncation_warning = false;
};

/// T(delta_Lambda) v with a P_max - 2 rerun as truncation estimate.
BoostResult apply_boost(const RepConfig& cfg, double l1, double l2, const FockVector& v, double lambda_max = 0.5);

/// Traceless anti-hermitian logarithm of a block-diagonal element of K.
AlgebraElement compact_log(const GroupElement& k);

struct Omega0Result {
    cplx value;
    double truncation_estimate = 0.0;
    bool truncation_warning = false;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

/// <x0|T(g)|x0> through g = k delta q; the compact factors are applied numerically as well.
Omega0Result omega0_fock(const RepConfig& cfg, const GroupElement& g, double lambda_max = 0.5);

/// Expectation <u|T(g)|v> = <T(k^{-1}) u| T(delta) T(q) v>; u, v in the representation sector.
Omega0Result matrix_element(const RepConfig& cfg, const GroupElement& g, const FockVector& u, const FockVector& v,
                            double lambda_max = 0.5);

/// max residual of T(g)^dag z T(g) - g z on interior states (sum m <= P_max/2).
double adjoint_action_check(const RepConfig& cfg, const GroupElement& g);

/// <v| A B |v> for two operators (B applied first); both must preserve the sector.
cplx expectation(const FockOperator& A, const FockOperator& B, const FockVector& v);
cplx expectation(const FockOperator& A, const FockVector& v);

}  // namespace bergman
