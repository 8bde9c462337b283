#include "spindyn/dynamics.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

namespace spindyn {

// ---------------------------------------------------------------------------
// Hamiltonian and spectrum
// ---------------------------------------------------------------------------

Matrix build_hamiltonian(const ModelParams& params) {
    const Index d1 = params.s1.dim(), d2 = params.s2.dim();
    if (d1 > 1'000'000 / d2)
        throw std::invalid_argument("Hamiltonian dimension d1*d2 exceeds 1e6");

    const SpinOperators ops1 = spin_operators(params.s1);
    const SpinOperators ops2 = spin_operators(params.s2);
    const Matrix id1 = Matrix::Identity(d1, d1);
    const Matrix id2 = Matrix::Identity(d2, d2);

    Matrix h = params.eps1_b0 * Eigen::kroneckerProduct(ops1.sz, id2) +
               params.eps2_b0 * Eigen::kroneckerProduct(id1, ops2.sz) +
               params.alpha * Eigen::kroneckerProduct(ops1.sx, ops2.sx);
    return h;
}

EigenSystem spectral_decompose(const Matrix& hamiltonian) {
    if (hamiltonian.rows() != hamiltonian.cols())
        throw std::invalid_argument("spectral_decompose: matrix must be square");
    const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("spectral_decompose: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(hamiltonian);
    if (solver.info() != Eigen::Success)
        throw NumericError("Hermitian eigensolver did not converge");
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

namespace {

Vector phase_vector(const RealVector& energies, double t) {
    return (-kI * t * energies.array().cast<Complex>()).exp();
}

}  // namespace

SpectralCoeffs to_eigenbasis(const EigenSystem& eig, const Ket& psi0) {
    if (psi0.dim() != eig.dim())
        throw std::invalid_argument("propagate: state/eigensystem dimension mismatch");
    return SpectralCoeffs{eig.eigenvectors.adjoint() * psi0.amplitudes()};
}

Ket propagate_pure(const EigenSystem& eig, const SpectralCoeffs& coeffs, double t) {
    if (coeffs.coeffs.size() != eig.dim())
        throw std::invalid_argument("propagate: coefficient dimension mismatch");
    Vector evolved = phase_vector(eig.eigenvalues, t).cwiseProduct(coeffs.coeffs);
    return Ket(eig.eigenvectors * evolved);
}

Ket propagate_pure(const EigenSystem& eig, const Ket& psi0, double t) {
    return propagate_pure(eig, to_eigenbasis(eig, psi0), t);
}

DensityOperator propagate_mixed(const EigenSystem& eig, const DensityOperator& rho0, double t) {
    if (rho0.dim() != eig.dim())
        throw std::invalid_argument("propagate: state/eigensystem dimension mismatch");
    const Matrix u = eig.eigenvectors * phase_vector(eig.eigenvalues, t).asDiagonal() *
                     eig.eigenvectors.adjoint();
    Matrix evolved = u * rho0.matrix() * u.adjoint();
    evolved = 0.5 * (evolved + evolved.adjoint().eval());  // scrub rounding skew
    return DensityOperator(std::move(evolved));
}

// ---------------------------------------------------------------------------
// Two-qubit closed form
// ---------------------------------------------------------------------------

TwoQubitEigenSystem two_qubit_analytic(double alpha) {
    const double beta = std::sqrt(alpha * alpha + 16.0) / 4.0;

    TwoQubitEigenSystem sys;
    sys.eigenvalues << alpha / 4.0, -alpha / 4.0, beta, -beta;
    sys.eigenvectors.setZero();

    // Middle block |01>,|10>: symmetric and antisymmetric combinations.
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    sys.eigenvectors(1, 0) = inv_sqrt2;
    sys.eigenvectors(2, 0) = inv_sqrt2;
    sys.eigenvectors(1, 1) = -inv_sqrt2;
    sys.eigenvectors(2, 1) = inv_sqrt2;

    // Outer block |00>,|11>: amplitude ratio 4(1 +- beta)/alpha on |11>,
    // which degenerates to the bare basis states as alpha -> 0.
    if (alpha == 0.0) {
        sys.eigenvectors(3, 2) = 1.0;  // |11>
        sys.eigenvectors(0, 3) = 1.0;  // |00>
    } else {
        const Eigen::Vector2d plus{1.0, 4.0 * (1.0 + beta) / alpha};
        const Eigen::Vector2d minus{1.0, 4.0 * (1.0 - beta) / alpha};
        sys.eigenvectors(0, 2) = plus(0) / plus.norm();
        sys.eigenvectors(3, 2) = plus(1) / plus.norm();
        sys.eigenvectors(0, 3) = minus(0) / minus.norm();
        sys.eigenvectors(3, 3) = minus(1) / minus.norm();
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Reduced-state fast path
// ---------------------------------------------------------------------------

ReducedEvolution::ReducedEvolution(const EigenSystem& eig, Index d1, Index d2,
                                   const Matrix& rho0, std::vector<Matrix> observables)
    : d1_(d1), d2_(d2), energies_(eig.eigenvalues) {
    const Index n = eig.dim();
    if (d1 * d2 != n) throw std::invalid_argument("ReducedEvolution: d1*d2 != dimension");
    if (rho0.rows() != n || rho0.cols() != n)
        throw std::invalid_argument("ReducedEvolution: initial state dimension mismatch");

    const Matrix& v = eig.eigenvectors;
    const Matrix b = v.adjoint() * rho0 * v;

    // Slices V_x: rows (k*d2 + x), k = 0..d1-1.
    std::vector<Matrix> slices(static_cast<size_t>(d2));
    for (Index x = 0; x < d2; ++x)
        slices[static_cast<size_t>(x)] =
            v(Eigen::seqN(x, d1, d2), Eigen::all);

    rho2_forms_.reserve(static_cast<size_t>(d2 * d2));
    for (Index a = 0; a < d2; ++a) {
        for (Index bb = 0; bb < d2; ++bb) {
            // V^dag (I (x) |b><a|) V = V_b^dag V_a.
            const Matrix vtav =
                slices[static_cast<size_t>(bb)].adjoint() * slices[static_cast<size_t>(a)];
            rho2_forms_.push_back(b.cwiseProduct(vtav.transpose()));
        }
    }

    obs_forms_.reserve(observables.size());
    for (const Matrix& op : observables) {
        if (op.rows() != n || op.cols() != n)
            throw std::invalid_argument("ReducedEvolution: observable dimension mismatch");
        obs_forms_.push_back(b.cwiseProduct((v.adjoint() * op * v).transpose()));
    }
}

Vector ReducedEvolution::phases(double t) const {
    return (-kI * t * energies_.array().cast<Complex>()).exp();
}

Complex ReducedEvolution::quadratic_form(const Matrix& m, const Vector& u) const {
    return (u.transpose() * (m * u.conjugate()))(0);
}

Matrix ReducedEvolution::rho2(double t) const {
    const Vector u = phases(t);
    Matrix out(d2_, d2_);
    for (Index a = 0; a < d2_; ++a)
        for (Index b = 0; b < d2_; ++b)
            out(a, b) = quadratic_form(rho2_forms_[static_cast<size_t>(a * d2_ + b)], u);
    out = 0.5 * (out + out.adjoint().eval());
    return out;
}

double ReducedEvolution::observable(Index slot, double t) const {
    const Complex value =
        quadratic_form(obs_forms_.at(static_cast<size_t>(slot)), phases(t));
    if (std::abs(value.imag()) > 1e-8)
        throw NumericError("observable value has a non-negligible imaginary part");
    return value.real();
}

}  // namespace spindyn
