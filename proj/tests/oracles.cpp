#include "oracles.hpp"

#include <cmath>
#include <complex>

namespace oracle {

using spindyn::Complex;
using spindyn::kI;

Matrix expm(const Matrix& a) {
    const Index n = a.rows();
    // 1-norm based scaling so the Taylor argument stays small.
    const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    double scale = 1.0;
    while (norm1 * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    const Matrix b = a * scale;
    Matrix term = Matrix::Identity(n, n);
    Matrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = (term * b) / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

Matrix evolution_operator(const Matrix& h, double t) { return expm(-kI * t * h); }

Matrix partial_trace_literal(const Matrix& rho, Index d1, Index d2, int keep) {
    if (keep == 2) {
        Matrix out = Matrix::Zero(d2, d2);
        for (Index a = 0; a < d2; ++a)
            for (Index b = 0; b < d2; ++b)
                for (Index k = 0; k < d1; ++k) out(a, b) += rho(k * d2 + a, k * d2 + b);
        return out;
    }
    Matrix out = Matrix::Zero(d1, d1);
    for (Index a = 0; a < d1; ++a)
        for (Index b = 0; b < d1; ++b)
            for (Index k = 0; k < d2; ++k) out(a, b) += rho(a * d2 + k, b * d2 + k);
    return out;
}

Eigen::Vector2d hermitian2_eigenvalues(const Matrix& m) {
    const double tr = m(0, 0).real() + m(1, 1).real();
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    return {(tr - disc) / 2.0, (tr + disc) / 2.0};
}

double von_neumann_2x2(const Matrix& rho) {
    const Eigen::Vector2d lambda = hermitian2_eigenvalues(rho);
    double s = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double l = std::max(lambda[i], 0.0);
        if (l > 0.0) s -= l * std::log2(l);
    }
    return s;
}

spindyn::ClassicalState fd_rhs(const spindyn::ClassicalState& x,
                               const spindyn::ModelParams& params, double h) {
    const auto energy_at = [&](double dq1, double dp1, double dq2, double dp2) {
        return classical_hamiltonian({x.q1 + dq1, x.p1 + dp1, x.q2 + dq2, x.p2 + dp2}, params);
    };
    spindyn::ClassicalState out;
    out.q1 = (energy_at(0, h, 0, 0) - energy_at(0, -h, 0, 0)) / (2 * h);
    out.p1 = -(energy_at(h, 0, 0, 0) - energy_at(-h, 0, 0, 0)) / (2 * h);
    out.q2 = (energy_at(0, 0, 0, h) - energy_at(0, 0, 0, -h)) / (2 * h);
    out.p2 = -(energy_at(0, 0, h, 0) - energy_at(0, 0, -h, 0)) / (2 * h);
    return out;
}

Vector random_ket(Index dim, std::mt19937& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v[i] = Complex(dist(gen), dist(gen));
    v.normalize();
    return v;
}

Matrix random_density(Index dim, std::mt19937& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) g(i, j) = Complex(dist(gen), dist(gen));
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return (rho + rho.adjoint()) / 2.0;
}

Matrix random_unitary(Index dim, std::mt19937& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix g(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) g(i, j) = Complex(dist(gen), dist(gen));
    const Eigen::HouseholderQR<Matrix> qr(g);
    return qr.householderQ() * Matrix::Identity(dim, dim);
}

}  // namespace oracle
