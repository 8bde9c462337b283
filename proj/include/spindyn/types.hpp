#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace spindyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

// Tolerances shared across modules.
inline constexpr double kNormTol = 1e-12;      // ket normalization
inline constexpr double kHermTol = 1e-12;      // density-matrix Hermiticity / trace
inline constexpr double kPsdTol = 1e-10;       // allowed negative eigenvalue residue
inline constexpr double kEntropySlack = 1e-9;  // allowed range overshoot of entropies

/// Malformed or out-of-range run configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed or left its validity domain.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Half-integer spin magnitude s, stored exactly as the integer 2s.
class SpinMagnitude {
public:
    explicit SpinMagnitude(int twice_s) : twice_s_(twice_s) {
        if (twice_s < 0) throw ConfigError("spin magnitude must be non-negative");
    }

    static SpinMagnitude half() { return SpinMagnitude{1}; }

    /// Builds from the value s itself; s must be a non-negative half-integer.
    static SpinMagnitude from_value(double s) {
        const double twice = 2.0 * s;
        const double rounded = std::round(twice);
        if (!(std::abs(twice - rounded) < 1e-9) || rounded < 0.0)
            throw ConfigError("spin magnitude must be a non-negative half-integer, got " +
                              std::to_string(s));
        return SpinMagnitude{static_cast<int>(rounded)};
    }

    int twice() const { return twice_s_; }
    double value() const { return 0.5 * twice_s_; }

    /// Hilbert-space dimension 2s+1.
    Index dim() const { return twice_s_ + 1; }

    /// Magnetic quantum number at basis index k; m runs -s..+s in ascending index order.
    double m_at(Index k) const { return -value() + static_cast<double>(k); }

    friend bool operator==(SpinMagnitude a, SpinMagnitude b) { return a.twice_s_ == b.twice_s_; }
    friend bool operator!=(SpinMagnitude a, SpinMagnitude b) { return !(a == b); }

private:
    int twice_s_;
};

/// Coherent-state label: a complex number or the explicit point at infinity
/// (the north pole |m=+s>, which no finite label reaches).
struct CoherentLabel {
    Complex z{0.0, 0.0};
    bool at_infinity = false;

    CoherentLabel() = default;
    CoherentLabel(Complex value) : z(value) {}  // NOLINT: implicit by design
    CoherentLabel(double re, double im) : z(re, im) {}

    static CoherentLabel infinity() {
        CoherentLabel label;
        label.at_infinity = true;
        return label;
    }

    friend bool operator==(const CoherentLabel& a, const CoherentLabel& b) {
        if (a.at_infinity != b.at_infinity) return false;
        return a.at_infinity || a.z == b.z;
    }
};

}  // namespace spindyn
