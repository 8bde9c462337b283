#include "spindyn/classical.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace spindyn {

namespace {

using Vec4 = Eigen::Vector4d;

constexpr double kBoundaryMargin = 1e-9;

Vec4 to_vec(const ClassicalState& x) { return Vec4(x.q1, x.p1, x.q2, x.p2); }

ClassicalState from_vec(const Vec4& v) { return ClassicalState{v[0], v[1], v[2], v[3]}; }

// Radicands 4s_i - A_i, rejecting boundary proximity where the gradient of
// sqrt(R1 R2) blows up.
void radicands(const Vec4& x, const ModelParams& params, double& r1, double& r2) {
    const double a1 = x[0] * x[0] + x[1] * x[1];
    const double a2 = x[2] * x[2] + x[3] * x[3];
    r1 = 4.0 * params.s1.value() - a1;
    r2 = 4.0 * params.s2.value() - a2;
    if (r1 < kBoundaryMargin || r2 < kBoundaryMargin)
        throw NumericError("classical state too close to the sphere boundary");
}

Vec4 rhs_vec(const Vec4& x, const ModelParams& params) {
    double r1 = 0.0, r2 = 0.0;
    radicands(x, params, r1, r2);
    const double w = std::sqrt(r1 * r2);
    const double c = 0.25 * params.alpha;
    const double q1 = x[0], p1 = x[1], q2 = x[2], p2 = x[3];
    Vec4 dx;
    dx[0] = params.eps1_b0 * p1 - c * q1 * q2 * p1 * r2 / w;
    dx[1] = -params.eps1_b0 * q1 - c * q2 * (w - q1 * q1 * r2 / w);
    dx[2] = params.eps2_b0 * p2 - c * q1 * q2 * p2 * r1 / w;
    dx[3] = -params.eps2_b0 * q2 - c * q1 * (w - q2 * q2 * r1 / w);
    return dx;
}

Vec4 rk4_step(const Vec4& x, double h, const ModelParams& params) {
    const Vec4 k1 = rhs_vec(x, params);
    const Vec4 k2 = rhs_vec(x + 0.5 * h * k1, params);
    const Vec4 k3 = rhs_vec(x + 0.5 * h * k2, params);
    const Vec4 k4 = rhs_vec(x + h * k3, params);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Cubic Hermite value of component i at fraction theta of a step of width h.
double hermite(const Vec4& x0, const Vec4& f0, const Vec4& x1, const Vec4& f1, double h,
               double theta, int i) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + theta;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * x0[i] + h10 * h * f0[i] + h01 * x1[i] + h11 * h * f1[i];
}

}  // namespace

CanonicalPair z_to_canonical(const CoherentLabel& z, SpinMagnitude s) {
    const double radius = std::sqrt(4.0 * s.value());
    if (z.at_infinity)
        return CanonicalPair{radius, 0.0};
    const Complex w = radius * z.z / std::sqrt(1.0 + std::norm(z.z));
    return CanonicalPair{w.real(), w.imag()};
}

Complex canonical_to_z(const CanonicalPair& w, SpinMagnitude s) {
    const double four_s = 4.0 * s.value();
    const double a = w.q * w.q + w.p * w.p;
    if (a >= four_s)
        throw ConfigError("canonical point on or outside the sphere has no finite label");
    return Complex(w.q, w.p) / std::sqrt(four_s - a);
}

double classical_hamiltonian(const ClassicalState& x, const ModelParams& params) {
    const double a1 = x.q1 * x.q1 + x.p1 * x.p1;
    const double a2 = x.q2 * x.q2 + x.p2 * x.p2;
    const double s1 = params.s1.value();
    const double s2 = params.s2.value();
    double r1 = 4.0 * s1 - a1;
    double r2 = 4.0 * s2 - a2;
    // Roundoff tolerance at the boundary; beyond it the point is invalid.
    if (r1 < -1e-12 * 4.0 * s1 || r2 < -1e-12 * 4.0 * s2)
        throw ConfigError("classical state outside the sphere");
    r1 = std::max(r1, 0.0);
    r2 = std::max(r2, 0.0);
    return params.eps1_b0 * (0.5 * a1 - s1) + params.eps2_b0 * (0.5 * a2 - s2) +
           0.25 * params.alpha * x.q1 * x.q2 * std::sqrt(r1 * r2);
}

ClassicalState hamilton_rhs(const ClassicalState& x, const ModelParams& params) {
    return from_vec(rhs_vec(to_vec(x), params));
}

Trajectory integrate_trajectory(const ClassicalState& x0, const ModelParams& params,
                                const TimeGrid& grid, double step) {
    if (step <= 0.0)
        throw ConfigError("integration step must be positive");
    const Index n = grid.size();
    Trajectory out;
    out.times.resize(n);
    out.energies.resize(n);
    out.states.reserve(static_cast<size_t>(n));

    Vec4 x = to_vec(x0);
    out.times[0] = grid.time_at(0);
    out.energies[0] = classical_hamiltonian(x0, params);
    out.states.push_back(x0);

    Index filled = 1;
    try {
        for (Index i = 1; i < n; ++i) {
            const double dt = grid.time_at(i) - grid.time_at(i - 1);
            const Index n_sub = std::max<Index>(1, static_cast<Index>(std::ceil(dt / step)));
            const double h = dt / static_cast<double>(n_sub);
            for (Index k = 0; k < n_sub; ++k)
                x = rk4_step(x, h, params);
            const ClassicalState xs = from_vec(x);
            out.times[i] = grid.time_at(i);
            out.energies[i] = classical_hamiltonian(xs, params);
            out.states.push_back(xs);
            ++filled;
        }
    } catch (const NumericError&) {
        out.hit_boundary = true;
    }
    if (filled < n) {
        out.times.conservativeResize(filled);
        out.energies.conservativeResize(filled);
    }
    return out;
}

SectionResult poincare_section(const ClassicalState& x0, const ModelParams& params,
                               Index n_crossings, CrossingDirection direction, double step,
                               double max_time) {
    if (n_crossings < 1)
        throw ConfigError("section needs at least one requested crossing");
    if (step <= 0.0 || max_time <= 0.0)
        throw ConfigError("section step and max_time must be positive");

    SectionResult out;
    out.points.reserve(static_cast<size_t>(n_crossings));
    Vec4 x = to_vec(x0);
    double t = 0.0;
    try {
        Vec4 f0 = rhs_vec(x, params);
        while (static_cast<Index>(out.points.size()) < n_crossings && t < max_time) {
            const Vec4 x1 = rk4_step(x, step, params);
            const Vec4 f1 = rhs_vec(x1, params);
            const double p2a = x[3];
            const double p2b = x1[3];
            if (p2a * p2b < 0.0) {
                const bool upward = p2b > p2a;
                const bool wanted = direction == CrossingDirection::both ||
                                    (direction == CrossingDirection::positive && upward) ||
                                    (direction == CrossingDirection::negative && !upward);
                if (wanted) {
                    // Bisection on the dense output; the Hermite cubic has the
                    // same endpoint signs as the step.
                    double lo = 0.0, hi = 1.0, mid = 0.5;
                    double val = hermite(x, f0, x1, f1, step, mid, 3);
                    for (int iter = 0; iter < 200 && std::abs(val) >= 1e-9; ++iter) {
                        if ((val > 0.0) == upward)
                            hi = mid;
                        else
                            lo = mid;
                        mid = 0.5 * (lo + hi);
                        val = hermite(x, f0, x1, f1, step, mid, 3);
                    }
                    SectionPoint pt;
                    pt.q1 = hermite(x, f0, x1, f1, step, mid, 0);
                    pt.p1 = hermite(x, f0, x1, f1, step, mid, 1);
                    pt.crossing_time = t + mid * step;
                    out.points.push_back(pt);
                }
            }
            x = x1;
            f0 = f1;
            t += step;
        }
    } catch (const NumericError&) {
        out.hit_boundary = true;
    }
    out.complete = static_cast<Index>(out.points.size()) == n_crossings;
    return out;
}

double lyapunov_exponent(const ClassicalState& x0, const ModelParams& params, double horizon,
                         double renorm_interval, double step, double offset) {
    if (horizon <= 0.0 || renorm_interval <= 0.0 || step <= 0.0 || offset <= 0.0)
        throw ConfigError("lyapunov parameters must be positive");

    Vec4 x = to_vec(x0);
    Vec4 y = x;
    y[0] += offset;

    const Index n_sub = std::max<Index>(1, static_cast<Index>(std::ceil(renorm_interval / step)));
    const double h = renorm_interval / static_cast<double>(n_sub);
    const Index n_intervals =
        std::max<Index>(1, static_cast<Index>(std::round(horizon / renorm_interval)));

    double log_sum = 0.0;
    for (Index i = 0; i < n_intervals; ++i) {
        for (Index k = 0; k < n_sub; ++k) {
            x = rk4_step(x, h, params);
            y = rk4_step(y, h, params);
        }
        const double d = (y - x).norm();
        if (d <= 0.0)
            throw NumericError("lyapunov companion collapsed onto the reference");
        log_sum += std::log(d / offset);
        y = x + (offset / d) * (y - x);
    }
    return log_sum / (static_cast<double>(n_intervals) * renorm_interval);
}

}  // namespace spindyn
