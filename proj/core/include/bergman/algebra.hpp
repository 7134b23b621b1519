#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bergman/types.hpp"

namespace bergman {

/// Index of the pair (A,B), A<B, in lexicographic order: (0,1)=0 ... (4,5)=14.
int pair_index(int A, int B);
std::pair<int, int> pair_of(int idx);
std::string pair_label(int idx);

inline constexpr std::array<int, 6> kEta{1, -1, -1, -1, -1, 1};

/// True for the rotation generators 05, 12, 13, 23, 14, 24, 34.
bool is_compact(int idx);

struct GeneratorBasis {
    std::array<Mat4, 15> matrices;
    std::array<int, 6> eta = kEta;
    Eigen::Matrix<double, 15, 15> gram;      // Re tr(X_i^dag X_j)
    Eigen::Matrix<double, 15, 15> gram_inv;

    /// X_AB with X_BA = -X_AB and X_AA = 0.
    Mat4 X(int A, int B) const;
};

/// The so(4,2) generators with S_0k sign-corrected so that the bracket relations close.
const GeneratorBasis& generators();
GeneratorBasis build_generators();
/// The matrices as literally printed; these violate the bracket relations for 18 pairs.
GeneratorBasis printed_generators();

struct AlgebraElement {
    Vec15 coeffs = Vec15::Zero();

    static AlgebraElement unit(int A, int B);
    static AlgebraElement unit(int idx);
    Mat4 matrix(const GeneratorBasis& basis = generators()) const;

    AlgebraElement operator+(const AlgebraElement& o) const { return {coeffs + o.coeffs}; }
    AlgebraElement operator-(const AlgebraElement& o) const { return {coeffs - o.coeffs}; }
    AlgebraElement operator*(double s) const { return {coeffs * s}; }
};

struct Expansion {
    AlgebraElement element;
    double residual = 0.0;
};

/// Least-squares expansion of a 4x4 matrix in the basis; reports the residual.
Expansion expand_in_basis(const Mat4& m, const GeneratorBasis& basis = generators());

/// Throws BasisExpansionFailure if the residual exceeds tol.
AlgebraElement expand(const Mat4& m, double tol = 1e-12, const GeneratorBasis& basis = generators());

AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y);

/// f[i][j] = coefficient vector of [X_i, X_j].
using StructureTable = std::array<std::array<Vec15, 15>, 15>;

/// From the eta-contraction formula for so(4,2).
StructureTable structure_constants();
/// Brute-force matrix commutators re-expanded in the basis; max residual written to *residual.
StructureTable structure_constants_from_matrices(const GeneratorBasis& basis, double* residual = nullptr);

double table_difference(const StructureTable& a, const StructureTable& b);

/// Max over the three cyclic sums for a random triple.
double jacobi_residual(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z);

/// Counts ordered pairs (i,j) whose matrix commutator disagrees with the formula table.
int bracket_mismatches(const GeneratorBasis& basis, double tol = 1e-12);

/// CSV with header A,B,C,D,E,F,value; nonzero entries only.
std::string structure_constants_csv(const StructureTable& f);

struct Root {
    std::array<int, 2> coeffs;  // over (alpha1, alpha2)
    int multiplicity;
    bool positive;
};

struct RootData {
    std::vector<Root> roots;
    std::vector<Root> positive_roots;
    std::array<int, 2> rho;
};

RootData root_data();

/// Adjoint matrix of the generator g acting on coefficient vectors: Ad_g X = g X g^{-1}.
Eigen::Matrix<double, 15, 15> adjoint_matrix(const Mat4& g);

}  // namespace bergman
