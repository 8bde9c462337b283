#pragma once

#include <vector>

#include "spindyn/model.hpp"
#include "spindyn/spin.hpp"

// Hamiltonian construction, spectral decomposition and exact unitary
// propagation. The Hamiltonian is time independent, so every trajectory is
// produced from a single decomposition: psi(t) = V exp(-iEt) V^dag psi(0).

namespace spindyn {

/// Dense Hamiltonian of the two-spin model on the product basis, dimension
/// s1.dim()*s2.dim().
Matrix build_hamiltonian(const ModelParams& params);

/// Eigenvalues (ascending) and orthonormal eigenvector columns of a
/// Hermitian matrix. Immutable once built; safe to share across threads.
struct EigenSystem {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Index dim() const { return eigenvalues.size(); }
};

/// Full spectral decomposition; the input must be Hermitian within 1e-10
/// (relative to its largest entry). Solver failure raises NumericError.
EigenSystem spectral_decompose(const Matrix& hamiltonian);

/// State expressed in the energy eigenbasis, for repeated evaluation of the
/// same initial condition on many time points.
struct SpectralCoeffs {
    Vector coeffs;
};

SpectralCoeffs to_eigenbasis(const EigenSystem& eig, const Ket& psi0);

Ket propagate_pure(const EigenSystem& eig, const SpectralCoeffs& coeffs, double t);
Ket propagate_pure(const EigenSystem& eig, const Ket& psi0, double t);

/// rho(t) = U rho(0) U^dag with U = V exp(-iEt) V^dag. O(n^3) per call; meant
/// for moderate dimensions and as the reference for the reduced fast path.
DensityOperator propagate_mixed(const EigenSystem& eig, const DensityOperator& rho0, double t);

/// Closed-form eigensystem of the two-qubit Hamiltonian (eps1_b0 = eps2_b0 = 1):
/// eigenvalues (alpha/4, -alpha/4, beta, -beta) with beta = sqrt(alpha^2+16)/4.
/// Eigenvector columns are normalized and expressed on the product basis
/// |00>,|01>,|10>,|11> in composite-index order. alpha = 0 returns the
/// analytic limit of the last two columns (|11> and |00>).
struct TwoQubitEigenSystem {
    Eigen::Vector4d eigenvalues;
    Eigen::Matrix4cd eigenvectors;
};

TwoQubitEigenSystem two_qubit_analytic(double alpha);

/// Time evolution of the subsystem-2 reduced density matrix (plus optional
/// full-space observables) of a bipartite system with a mixed or pure initial
/// state rho0, composite index k = k1*d2 + k2.
///
/// Writing B = V^dag rho0 V and Vx for the d1 x n slice of V with row stride
/// d2 and offset x, each requested quantity Tr[rho(t) A] becomes the
/// stationary quadratic form u(t)^T (B .* (V^dag A V)^T) conj(u(t)) with
/// u_p = exp(-iE_p t). The mixture is folded into B up front, so one time
/// point costs O((d2^2 + #observables) n^2) regardless of how many ensemble
/// members rho0 contains. Matches mixing the propagated members' reduced
/// matrices exactly; propagate_mixed + partial_trace is the reference path.
class ReducedEvolution {
public:
    ReducedEvolution(const EigenSystem& eig, Index d1, Index d2, const Matrix& rho0,
                     std::vector<Matrix> observables = {});

    Matrix rho2(double t) const;
    double observable(Index slot, double t) const;

    Index subsystem_dim() const { return d2_; }

private:
    Vector phases(double t) const;
    Complex quadratic_form(const Matrix& m, const Vector& u) const;

    Index d1_ = 0;
    Index d2_ = 0;
    RealVector energies_;
    std::vector<Matrix> rho2_forms_;  // d2*d2 matrices, entry (a,b) at a*d2+b
    std::vector<Matrix> obs_forms_;
};

}  // namespace spindyn
