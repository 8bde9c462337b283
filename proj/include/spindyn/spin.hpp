#pragma once

#include <variant>

#include "spindyn/types.hpp"

// Spin operators, state constructors, tensor products, partial traces and
// expectation values for one or two spins.
//
// Basis convention used everywhere: magnetic quantum number m runs
// -s, -s+1, ..., +s in ascending index order, so index k holds m = -s + k.
// For a qubit this labels |0> = |m=-1/2> and |1> = |m=+1/2>.
// Two-spin product states use the composite index k = k1*d2 + k2.

namespace spindyn {

struct SpinOperators {
    Matrix sx;
    Matrix sy;
    Matrix sz;
};

/// Spin operator matrices for magnitude s, built from the ladder elements
/// <m+-1|S+-|m> = sqrt(s(s+1) - m(m+-1)). Sz is diagonal with entries -s..+s.
SpinOperators spin_operators(SpinMagnitude s);

/// Pure state: a complex unit vector. Construction enforces normalization.
class Ket {
public:
    explicit Ket(Vector amplitudes);

    static Ket basis_state(Index dim, Index k);

    const Vector& amplitudes() const { return amplitudes_; }
    Index dim() const { return amplitudes_.size(); }

private:
    Vector amplitudes_;
};

/// Mixed state: Hermitian, unit-trace matrix. Construction enforces
/// Hermiticity and trace; positivity is checked by validate_psd().
class DensityOperator {
public:
    explicit DensityOperator(Matrix matrix);

    static DensityOperator projector(const Ket& psi);

    const Matrix& matrix() const { return matrix_; }
    Index dim() const { return matrix_.rows(); }

    /// Eigenvalues in ascending order.
    RealVector eigenvalues() const;

    /// Throws NumericError if any eigenvalue is below -tol.
    void validate_psd(double tol = kPsdTol) const;

private:
    Matrix matrix_;
};

/// A pure or mixed state over the same basis conventions.
using QuantumState = std::variant<Ket, DensityOperator>;

Index state_dim(const QuantumState& state);
bool is_pure(const QuantumState& state);

/// Density-matrix view of either variant (projector for pure states).
DensityOperator as_density(const QuantumState& state);

/// Spin coherent state |z> with amplitudes
///   <m|z> = sqrt(C(2s, s+m)) z^(s+m) / (1+|z|^2)^s,
/// evaluated in log space so large-s binomials cannot overflow.
/// z=0 gives |m=-s>; the infinity label gives the limit |m=+s>.
Ket coherent_state(SpinMagnitude s, const CoherentLabel& z);

/// All 2s+1 amplitudes equal to (2s+1)^(-1/2).
Ket uniform_state(SpinMagnitude s);

/// Diagonal thermal mixture with populations e^(-m/T)/N, N the partition sum.
/// Requires T > 0.
DensityOperator thermal_density(SpinMagnitude s, double temperature);

/// Identifies which factor of a bipartite product survives a partial trace.
enum class Keep { subsystem1 = 1, subsystem2 = 2 };

// Product-state assembly; composite index k = k1*d2 + k2. The QuantumState
// overload promotes a pure factor to a projector when paired with a mixed one.
// Dimensions d1*d2 above 1e6 are rejected.
Ket tensor(const Ket& a, const Ket& b);
DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
QuantumState tensor(const QuantumState& a, const QuantumState& b);

/// Operator tensor product on the same composite index convention.
Matrix tensor_op(const Matrix& a, const Matrix& b);

/// Reduced density matrix of one factor: keeping subsystem 2 gives
/// (rho2)_{ab} = sum_k rho_{(k,a),(k,b)}. rho must have dimension d1*d2.
DensityOperator partial_trace(const DensityOperator& rho, Index d1, Index d2, Keep keep);
Matrix partial_trace(const Matrix& rho, Index d1, Index d2, Keep keep);

/// Reduced density matrix of a globally pure state, without forming the
/// d1*d2-dimensional projector.
Matrix reduced_from_ket(const Vector& psi, Index d1, Index d2, Keep keep);

// Real expectation value of a Hermitian operator; the imaginary residue must
// stay below 1e-10 and is discarded after that check.
double expectation(const Matrix& op, const Ket& psi);
double expectation(const Matrix& op, const DensityOperator& rho);
double expectation(const Matrix& op, const QuantumState& state);

}  // namespace spindyn
