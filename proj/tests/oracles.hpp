#pragma once

#include <random>

#include "spindyn/classical.hpp"
#include "spindyn/model.hpp"
#include "spindyn/types.hpp"

// Reference implementations used only by tests. Everything here deliberately
// avoids the library's spectral/analytic code paths so agreement between the
// two is evidence, not tautology.

namespace oracle {

using spindyn::Index;
using spindyn::Matrix;
using spindyn::Vector;

/// e^A by scaling-and-squaring with an order-30 Taylor series (the scaled
/// norm is kept below 1/2, so the truncation error is far below 1e-16).
Matrix expm(const Matrix& a);

/// e^{-iHt} via expm; no eigendecomposition involved.
Matrix evolution_operator(const Matrix& h, double t);

/// Partial trace by direct index summation.
Matrix partial_trace_literal(const Matrix& rho, Index d1, Index d2, int keep);

/// Closed-form eigenvalues of a Hermitian 2x2 matrix, ascending.
Eigen::Vector2d hermitian2_eigenvalues(const Matrix& m);

/// von-Neumann entropy of a 2x2 density matrix in log base 2, from the
/// closed-form eigenvalues.
double von_neumann_2x2(const Matrix& rho);

/// Hamilton's equations by central finite differences of
/// classical_hamiltonian; step h per coordinate.
spindyn::ClassicalState fd_rhs(const spindyn::ClassicalState& x,
                               const spindyn::ModelParams& params, double h = 1e-5);

// Deterministic random test data. Every test seeds its own generator.
Vector random_ket(Index dim, std::mt19937& gen);
Matrix random_density(Index dim, std::mt19937& gen);
Matrix random_unitary(Index dim, std::mt19937& gen);

}  // namespace oracle
