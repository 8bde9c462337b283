#include "spindyn/spin.hpp"

#include <cmath>

namespace spindyn {

namespace {

constexpr Index kMaxProductDim = 1'000'000;

void check_hermitian_operator(const Matrix& op, Index dim) {
    if (op.rows() != op.cols() || op.rows() != dim)
        throw std::invalid_argument("operator dimension mismatch");
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    if ((op - op.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw std::invalid_argument("expectation requires a Hermitian operator");
}

double checked_real(Complex value) {
    if (std::abs(value.imag()) > 1e-10)
        throw NumericError("expectation value has a non-negligible imaginary part");
    return value.real();
}

}  // namespace

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

SpinOperators spin_operators(SpinMagnitude s) {
    const Index d = s.dim();
    const double sv = s.value();

    Matrix splus = Matrix::Zero(d, d);
    for (Index k = 0; k + 1 < d; ++k) {
        const double m = s.m_at(k);
        splus(k + 1, k) = std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
    }
    const Matrix sminus = splus.adjoint();

    SpinOperators ops;
    ops.sx = 0.5 * (splus + sminus);
    ops.sy = (splus - sminus) / (2.0 * kI);
    ops.sz = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) ops.sz(k, k) = s.m_at(k);
    return ops;
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

Ket::Ket(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() == 0) throw std::invalid_argument("empty ket");
    if (std::abs(amplitudes_.norm() - 1.0) > kNormTol)
        throw NumericError("ket is not normalized");
}

Ket Ket::basis_state(Index dim, Index k) {
    if (k < 0 || k >= dim) throw std::invalid_argument("basis index out of range");
    Vector amp = Vector::Zero(dim);
    amp(k) = 1.0;
    return Ket(std::move(amp));
}

DensityOperator::DensityOperator(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
        throw std::invalid_argument("density operator must be square");
    const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
    if ((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() > kHermTol * scale)
        throw NumericError("density operator is not Hermitian");
    if (std::abs(matrix_.trace() - Complex{1.0, 0.0}) > kHermTol)
        throw NumericError("density operator trace differs from 1");
}

DensityOperator DensityOperator::projector(const Ket& psi) {
    const Vector& a = psi.amplitudes();
    return DensityOperator(a * a.adjoint());
}

RealVector DensityOperator::eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("density-operator eigenvalue computation failed");
    return solver.eigenvalues();
}

void DensityOperator::validate_psd(double tol) const {
    if (eigenvalues().minCoeff() < -tol)
        throw NumericError("density operator has a negative eigenvalue");
}

Index state_dim(const QuantumState& state) {
    return std::visit([](const auto& s) { return s.dim(); }, state);
}

bool is_pure(const QuantumState& state) { return std::holds_alternative<Ket>(state); }

DensityOperator as_density(const QuantumState& state) {
    if (const auto* psi = std::get_if<Ket>(&state)) return DensityOperator::projector(*psi);
    return std::get<DensityOperator>(state);
}

Ket coherent_state(SpinMagnitude s, const CoherentLabel& z) {
    const Index d = s.dim();
    if (z.at_infinity) return Ket::basis_state(d, d - 1);  // limit |m=+s>
    if (!std::isfinite(z.z.real()) || !std::isfinite(z.z.imag()))
        throw std::invalid_argument("coherent label must be finite or the infinity sentinel");
    if (z.z == Complex{0.0, 0.0}) return Ket::basis_state(d, 0);  // only m=-s survives

    const double sv = s.value();
    const double mod = std::abs(z.z);
    const double phase = std::arg(z.z);
    const double log_mod = std::log(mod);

    // log |<m|z>| = log sqrt(C(2s, k)) + k log|z| - s log(1+|z|^2), with
    // k = s+m. For |z| > 1 the last two terms are regrouped around 1/|z|^2
    // so neither overflows before they cancel.
    Vector amp(d);
    for (Index k = 0; k < d; ++k) {
        const double log_binom = std::lgamma(2.0 * sv + 1.0) - std::lgamma(k + 1.0) -
                                 std::lgamma(2.0 * sv - k + 1.0);
        double exponent = 0.5 * log_binom;
        if (mod <= 1.0) {
            exponent += k * log_mod - sv * std::log1p(mod * mod);
        } else {
            exponent += (k - 2.0 * sv) * log_mod - sv * std::log1p(1.0 / (mod * mod));
        }
        amp(k) = std::exp(exponent) * std::polar(1.0, k * phase);
    }
    amp /= amp.norm();
    return Ket(std::move(amp));
}

Ket uniform_state(SpinMagnitude s) {
    const Index d = s.dim();
    return Ket(Vector::Constant(d, Complex{1.0 / std::sqrt(static_cast<double>(d)), 0.0}));
}

DensityOperator thermal_density(SpinMagnitude s, double temperature) {
    if (!(temperature > 0.0)) throw ConfigError("thermal state requires T > 0");
    const Index d = s.dim();

    // Populations e^(-m/T)/N; the largest exponent is subtracted before
    // exponentiation so the partition sum stays finite at large s/T ratios.
    RealVector exponents(d);
    for (Index k = 0; k < d; ++k) exponents(k) = -s.m_at(k) / temperature;
    const RealVector weights = (exponents.array() - exponents.maxCoeff()).exp();

    Matrix rho = Matrix::Zero(d, d);
    rho.diagonal() = (weights / weights.sum()).cast<Complex>();
    return DensityOperator(std::move(rho));
}

// ---------------------------------------------------------------------------
// Products and reductions
// ---------------------------------------------------------------------------

namespace {

void check_product_dim(Index d1, Index d2) {
    if (d1 > kMaxProductDim / d2)
        throw std::invalid_argument("product dimension d1*d2 exceeds 1e6");
}

}  // namespace

Ket tensor(const Ket& a, const Ket& b) {
    const Index d1 = a.dim(), d2 = b.dim();
    check_product_dim(d1, d2);
    Vector out(d1 * d2);
    for (Index k1 = 0; k1 < d1; ++k1)
        out.segment(k1 * d2, d2) = a.amplitudes()(k1) * b.amplitudes();
    return Ket(std::move(out));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    const Index d1 = a.dim(), d2 = b.dim();
    check_product_dim(d1, d2);
    Matrix out(d1 * d2, d1 * d2);
    for (Index i = 0; i < d1; ++i)
        for (Index j = 0; j < d1; ++j)
            out.block(i * d2, j * d2, d2, d2) = a.matrix()(i, j) * b.matrix();
    return DensityOperator(std::move(out));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
    if (is_pure(a) && is_pure(b)) return tensor(std::get<Ket>(a), std::get<Ket>(b));
    return tensor(as_density(a), as_density(b));
}

Matrix tensor_op(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols())
        throw std::invalid_argument("tensor_op: operators must be square");
    const Index d1 = a.rows(), d2 = b.rows();
    check_product_dim(d1, d2);
    Matrix out(d1 * d2, d1 * d2);
    for (Index i = 0; i < d1; ++i)
        for (Index j = 0; j < d1; ++j) out.block(i * d2, j * d2, d2, d2) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& rho, Index d1, Index d2, Keep keep) {
    if (rho.rows() != rho.cols() || rho.rows() != d1 * d2)
        throw std::invalid_argument("partial_trace: dimension mismatch");
    if (keep == Keep::subsystem2) {
        Matrix out = Matrix::Zero(d2, d2);
        for (Index k = 0; k < d1; ++k) out += rho.block(k * d2, k * d2, d2, d2);
        return out;
    }
    Matrix out = Matrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
        for (Index j = 0; j < d1; ++j)
            out(i, j) = rho.block(i * d2, j * d2, d2, d2).trace();
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, Index d1, Index d2, Keep keep) {
    return DensityOperator(partial_trace(rho.matrix(), d1, d2, keep));
}

Matrix reduced_from_ket(const Vector& psi, Index d1, Index d2, Keep keep) {
    if (psi.size() != d1 * d2)
        throw std::invalid_argument("reduced_from_ket: dimension mismatch");
    // View psi as the d1 x d2 coefficient matrix M(k1,k2) = psi(k1*d2+k2);
    // then rho1 = M M^dag and rho2 = M^T conj(M).
    Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        coeff(psi.data(), d1, d2);
    if (keep == Keep::subsystem1) return coeff * coeff.adjoint();
    return coeff.transpose() * coeff.conjugate();
}

// ---------------------------------------------------------------------------
// Expectation values
// ---------------------------------------------------------------------------

double expectation(const Matrix& op, const Ket& psi) {
    check_hermitian_operator(op, psi.dim());
    return checked_real(psi.amplitudes().dot(op * psi.amplitudes()));
}

double expectation(const Matrix& op, const DensityOperator& rho) {
    check_hermitian_operator(op, rho.dim());
    return checked_real((op * rho.matrix()).trace());
}

double expectation(const Matrix& op, const QuantumState& state) {
    if (const auto* psi = std::get_if<Ket>(&state)) return expectation(op, *psi);
    return expectation(op, std::get<DensityOperator>(state));
}

}  // namespace spindyn
