#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spindyn/classical.hpp"
#include "spindyn/entanglement.hpp"
#include "spindyn/model.hpp"
#include "spindyn/spin.hpp"

// Preset experiment drivers for the three regimes. Every run is
// deterministic: identical config gives bit-identical series.

namespace spindyn {

enum class Regime { two_qubits, environment, semiclassical };

std::string regime_name(Regime regime);
Regime regime_from_name(const std::string& name);

/// Initial state of one factor. two_qubits and environment restrict the
/// allowed kinds (see validate); canonical points are mapped through
/// canonical_to_z.
struct InitialSpec {
    enum class Kind { coherent, uniform, thermal, canonical };

    Kind kind = Kind::coherent;
    CoherentLabel z = CoherentLabel(Complex(0.0, 0.0));
    double temperature = 0.0;  // thermal only
    CanonicalPair point{};     // canonical only

    static InitialSpec coherent(const CoherentLabel& z);
    static InitialSpec uniform();
    static InitialSpec thermal(double temperature);
    static InitialSpec canonical(const CanonicalPair& point);

    friend bool operator==(const InitialSpec& a, const InitialSpec& b);
};

struct ScenarioConfig {
    Regime regime = Regime::two_qubits;
    ModelParams model{SpinMagnitude::half(), SpinMagnitude::half(), 1.0, 1.0, 1.0};
    TimeGrid grid{0.0, 50.0, 2000};
    InitialSpec initial1;
    InitialSpec initial2;

    friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);
};

/// Coupling for the semiclassical presets, fixed by a Poincare-section sweep
/// over alpha in {0.5, 1, 2, 5}/sqrt(s1 s2) at s=15: the smallest value whose
/// section shows regular islands coexisting with a chaotic sea across several
/// energy shells, and whose sea points also drive entanglement fast enough to
/// keep the quantum entropy above the classical one on the default grid.
/// alpha = 1/15 has a sliver of coexistence on one shell but fails the second
/// requirement. Not a published value.
inline constexpr double kSemiclassicalAlpha = 2.0 / 15.0;

ScenarioConfig default_config(Regime regime);

/// Regime constraints: two_qubits forces s1=s2=1/2 and coherent initials;
/// environment forces s2=1/2, coherent initial2, initial1 in
/// {coherent, uniform, thermal}; semiclassical forces s1=s2 and
/// coherent/canonical initials. Throws ConfigError.
void validate(const ScenarioConfig& cfg);

/// Resolves a pure initial spec to a ket. Thermal kind is rejected here.
Ket initial_ket(const InitialSpec& spec, SpinMagnitude s);

/// Resolves any initial spec to a density operator.
DensityOperator initial_density(const InitialSpec& spec, SpinMagnitude s);

EntropySeries run_two_qubit_scenario(const ScenarioConfig& cfg);
EntropySeries run_environment_scenario(const ScenarioConfig& cfg);

struct SemiclassicalOptions {
    bool with_trajectory = true;
    double classical_step = 1e-3;
    std::optional<Index> section_crossings;  // engages the Poincare section
    CrossingDirection section_direction = CrossingDirection::positive;
    bool with_lyapunov = false;
    double lyapunov_horizon = 2000.0;
    double lyapunov_renorm = 1.0;
};

struct SemiclassicalResult {
    EntropySeries series;
    ClassicalState classical_start{};  // initial conditions mapped to the spheres
    std::optional<Trajectory> trajectory;
    std::optional<SectionResult> section;
    std::optional<double> lyapunov;
};

SemiclassicalResult run_semiclassical_scenario(const ScenarioConfig& cfg,
                                               const SemiclassicalOptions& options = {});

/// Entropy series for any regime (semiclassical classical companions skipped).
EntropySeries run_scenario(const ScenarioConfig& cfg);

/// Initial conditions mapped to the product of spin spheres: canonical specs
/// pass through, coherent labels go through z_to_canonical.
ClassicalState classical_start_of(const ScenarioConfig& cfg);

struct Preset {
    std::string name;
    std::string summary;
    ScenarioConfig config;
};

const std::vector<Preset>& presets(Regime regime);
ScenarioConfig preset_config(Regime regime, const std::string& name);

}  // namespace spindyn
