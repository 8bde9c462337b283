#pragma once

#include <vector>

#include "spindyn/model.hpp"
#include "spindyn/types.hpp"

// Classical dynamics on the product of two spin spheres. Canonical
// coordinates (q_i, p_i) cover each sphere minus its north pole; the
// sphere constraint is A_i = q_i^2 + p_i^2 <= 4 s_i. The flow conserves
// the classical Hamiltonian, so drift measures integrator error.

namespace spindyn {

struct ClassicalState {
    double q1 = 0.0;
    double p1 = 0.0;
    double q2 = 0.0;
    double p2 = 0.0;
};

struct CanonicalPair {
    double q = 0.0;
    double p = 0.0;
};

/// Stereographic label to canonical coordinates: q + ip = sqrt(4s) z/sqrt(1+|z|^2).
/// The infinity label maps to the boundary point (sqrt(4s), 0); its phase is
/// not recoverable from the label.
CanonicalPair z_to_canonical(const CoherentLabel& z, SpinMagnitude s);

/// Inverse map. The north pole A = 4s has no finite label, so A >= 4s is
/// rejected.
Complex canonical_to_z(const CanonicalPair& w, SpinMagnitude s);

/// H = eps1*B0*(A1/2 - s1) + eps2*B0*(A2/2 - s2)
///     + (alpha/4) q1 q2 sqrt((4s1-A1)(4s2-A2)).
/// Rejects points outside the spheres.
double classical_hamiltonian(const ClassicalState& x, const ModelParams& params);

/// Hamilton's equations (qdot_i = dH/dp_i, pdot_i = -dH/dq_i), analytic
/// partial derivatives. The square-root gradient diverges at the sphere
/// boundary, so points with 4s_i - A_i < 1e-9 are rejected.
ClassicalState hamilton_rhs(const ClassicalState& x, const ModelParams& params);

struct Trajectory {
    RealVector times;
    std::vector<ClassicalState> states;
    RealVector energies;     // classical_hamiltonian along the trajectory
    bool hit_boundary = false;  // true if integration stopped early

    Index size() const { return times.size(); }
};

/// Fixed-step 4th-order Runge-Kutta sampled on the grid; each grid interval
/// is subdivided so the internal step never exceeds `step`. A trajectory
/// that reaches the sphere boundary is truncated at the last completed grid
/// point and flagged.
Trajectory integrate_trajectory(const ClassicalState& x0, const ModelParams& params,
                                const TimeGrid& grid, double step = 1e-3);

enum class CrossingDirection { positive, negative, both };

struct SectionPoint {
    double q1 = 0.0;
    double p1 = 0.0;
    double crossing_time = 0.0;
};

struct SectionResult {
    std::vector<SectionPoint> points;
    bool complete = false;      // found the requested number of crossings
    bool hit_boundary = false;
};

/// Poincare section on the plane p2 = 0. Sign changes of p2 along the flow
/// are refined on the cubic-Hermite dense output by bisection to
/// |p2| < 1e-9. `direction` filters by the sign of pdot2 at the crossing
/// (positive means p2 goes from negative to positive).
SectionResult poincare_section(const ClassicalState& x0, const ModelParams& params,
                               Index n_crossings,
                               CrossingDirection direction = CrossingDirection::positive,
                               double step = 1e-3, double max_time = 1e4);

/// Largest Lyapunov exponent by two-trajectory separation with periodic
/// renormalization. Returns the averaged log stretching rate.
double lyapunov_exponent(const ClassicalState& x0, const ModelParams& params,
                         double horizon = 2000.0, double renorm_interval = 1.0,
                         double step = 1e-3, double offset = 1e-8);

}  // namespace spindyn
