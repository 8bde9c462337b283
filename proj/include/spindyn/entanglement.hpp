#pragma once

#include <vector>

#include "spindyn/spin.hpp"

// Entropy measures on reduced density matrices, the two-qubit concurrence
// cross-check, and recoherence detection on entropy time series.

namespace spindyn {

/// Linear entropy (idempotency defect) delta = d/(d-1) (1 - Tr rho^2),
/// normalized to [0,1]. Requires d >= 2.
double linear_entropy(const DensityOperator& rho2);

/// von-Neumann entropy delta_N = -sum_i lambda_i log_d lambda_i with log
/// base d, so both measures share the [0,1] range. Eigenvalues in
/// [-1e-10, 0) are clamped to 0; anything below that is an invalid input.
double von_neumann_entropy(const DensityOperator& rho2);

/// Binary entropy -x log2 x - (1-x) log2 (1-x), with 0 log 0 = 0.
double binary_entropy(double x);

struct ConcurrenceResult {
    double concurrence;
    double entanglement_of_formation;
};

/// Wootters concurrence of a two-qubit density operator:
/// C = max(0, l1-l2-l3-l4) from the decreasing square roots of the
/// eigenvalues of rho (sy(x)sy) rho* (sy(x)sy), plus the entanglement of
/// formation E_F = h((1+sqrt(1-C^2))/2).
ConcurrenceResult concurrence(const DensityOperator& rho);

/// Entropy and polarization time series of one run. sigma_j is the
/// normalized angular momentum (<Sjz>+s_j)/(2 s_j), in [0,1].
struct EntropySeries {
    RealVector times;
    RealVector delta;    // linear entropy
    RealVector delta_n;  // von-Neumann entropy
    RealVector sigma1;
    RealVector sigma2;

    Index size() const { return times.size(); }
};

/// A transient drop of entropy below its saturation plateau.
struct RecoherenceEvent {
    double t_min;  // time of the deepest point
    double depth;  // plateau level minus minimum value
    double width;  // time span below (plateau - depth/2)
};

/// Finds recoherences in series.delta: the plateau is the given quantile of
/// the delta values, and each excursion that crosses below
/// plateau*(1 - min_depth) and recovers yields one event at its deepest
/// point. Events are reported in time order; the initial rise from delta=0
/// is not an event. Requires at least 10 samples.
std::vector<RecoherenceEvent> detect_recoherences(const EntropySeries& series,
                                                  double plateau_quantile = 0.9,
                                                  double min_depth = 0.2);

/// Linear-interpolation quantile of an unsorted sample, q in [0,1].
double quantile(const RealVector& values, double q);

}  // namespace spindyn
