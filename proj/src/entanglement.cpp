#include "spindyn/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace spindyn {

namespace {

// Clamps small negative eigenvalues produced by roundoff. Anything below
// -1e-10 means the input was not a density matrix.
double clamp_eigenvalue(double lambda) {
    if (lambda < -1e-10)
        throw NumericError("density matrix eigenvalue below -1e-10");
    return std::max(lambda, 0.0);
}

// Entropy values below roundoff scale are indistinguishable from zero; a pure
// state's purity lands within ~1e-15 of 1, so without this floor a separable
// state would report delta ~ 1e-15 instead of an exact 0.
constexpr double kEntropyFloor = 1e-13;

}  // namespace

double linear_entropy(const DensityOperator& rho2) {
    const Index d = rho2.dim();
    if (d < 2)
        throw ConfigError("linear entropy needs dimension >= 2");
    const double purity = rho2.matrix().cwiseAbs2().sum();
    const double raw = static_cast<double>(d) / (d - 1.0) * (1.0 - purity);
    if (raw < -1e-9 || raw > 1.0 + 1e-9)
        throw NumericError("linear entropy outside [0,1]");
    const double clamped = std::clamp(raw, 0.0, 1.0);
    return clamped < kEntropyFloor ? 0.0 : clamped;
}

double von_neumann_entropy(const DensityOperator& rho2) {
    const Index d = rho2.dim();
    if (d < 2)
        throw ConfigError("von-Neumann entropy needs dimension >= 2");
    const RealVector lambda = rho2.eigenvalues();
    const double log_d = std::log(static_cast<double>(d));
    double s = 0.0;
    for (Index i = 0; i < lambda.size(); ++i) {
        const double l = clamp_eigenvalue(lambda[i]);
        if (l > 0.0)
            s -= l * std::log(l) / log_d;
    }
    if (s < -1e-9 || s > 1.0 + 1e-9)
        throw NumericError("von-Neumann entropy outside [0,1]");
    const double clamped = std::clamp(s, 0.0, 1.0);
    return clamped < kEntropyFloor ? 0.0 : clamped;
}

double binary_entropy(double x) {
    if (x < 0.0 || x > 1.0)
        throw ConfigError("binary entropy argument outside [0,1]");
    double s = 0.0;
    if (x > 0.0)
        s -= x * std::log2(x);
    if (x < 1.0)
        s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

ConcurrenceResult concurrence(const DensityOperator& rho) {
    if (rho.dim() != 4)
        throw ConfigError("concurrence is defined for two qubits");
    const Matrix& r = rho.matrix();

    // sy(x)sy in the product basis |00>,|01>,|10>,|11>.
    Matrix yy = Matrix::Zero(4, 4);
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;

    const Matrix m = r * yy * r.conjugate() * yy;
    Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericError("concurrence eigensolver failed");

    // Eigenvalues of m are real and nonnegative up to roundoff. Rank-deficient
    // inputs (any pure state) put three of them at zero, where eigensolver
    // noise of order 1e-16 becomes 1e-8 after the square root; snapping
    // sub-noise values to zero keeps the concurrence accurate near C = 1,
    // where the formation entropy amplifies errors without bound.
    std::array<double, 4> roots{};
    for (int i = 0; i < 4; ++i) {
        const Complex ev = solver.eigenvalues()[i];
        if (std::abs(ev.imag()) > 1e-8)
            throw NumericError("concurrence eigenvalue has large imaginary part");
        const double real = ev.real() < 1e-13 ? 0.0 : ev.real();
        roots[static_cast<size_t>(i)] = std::sqrt(real);
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());

    ConcurrenceResult out{};
    out.concurrence = std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
    const double c2 = std::min(out.concurrence * out.concurrence, 1.0);
    out.entanglement_of_formation = binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c2)));
    return out;
}

double quantile(const RealVector& values, double q) {
    if (values.size() == 0)
        throw ConfigError("quantile of empty sample");
    if (q < 0.0 || q > 1.0)
        throw ConfigError("quantile level outside [0,1]");
    std::vector<double> sorted(values.data(), values.data() + values.size());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<size_t>(std::floor(pos));
    const auto hi = static_cast<size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

std::vector<RecoherenceEvent> detect_recoherences(const EntropySeries& series,
                                                  double plateau_quantile,
                                                  double min_depth) {
    if (series.size() < 10)
        throw ConfigError("recoherence detection needs at least 10 samples");
    if (min_depth <= 0.0 || min_depth >= 1.0)
        throw ConfigError("min_depth must be in (0,1)");
    const Index n = series.size();
    const double plateau = quantile(series.delta, plateau_quantile);
    const double threshold = plateau * (1.0 - min_depth);

    std::vector<RecoherenceEvent> events;
    // An excursion needs a downward crossing and a later upward crossing,
    // so the initial rise from delta(0)=0 never counts.
    bool inside = false;
    Index min_index = 0;
    for (Index i = 1; i < n; ++i) {
        const bool below = series.delta[i] < threshold;
        const bool was_below = series.delta[i - 1] < threshold;
        if (!inside && was_below == false && below) {
            inside = true;
            min_index = i;
        } else if (inside && below) {
            if (series.delta[i] < series.delta[min_index])
                min_index = i;
        } else if (inside && !below) {
            inside = false;
            RecoherenceEvent ev{};
            ev.t_min = series.times[min_index];
            ev.depth = plateau - series.delta[min_index];
            // Width at half depth around the minimum.
            const double half_level = plateau - 0.5 * ev.depth;
            Index left = min_index;
            while (left > 0 && series.delta[left - 1] < half_level)
                --left;
            Index right = min_index;
            while (right + 1 < n && series.delta[right + 1] < half_level)
                ++right;
            ev.width = series.times[right] - series.times[left];
            events.push_back(ev);
        }
    }
    return events;
}

}  // namespace spindyn
