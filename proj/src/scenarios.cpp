#include "spindyn/scenarios.hpp"

#include <cmath>

#include "spindyn/dynamics.hpp"

namespace spindyn {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ConfigError(message);
}

// Entropy and polarization series for a pure product run. sigma1 comes from
// the amplitude marginal (S1z is diagonal), sigma2 from the reduced matrix.
EntropySeries pure_series(const EigenSystem& eig, const Ket& psi0, SpinMagnitude s1,
                          SpinMagnitude s2, const TimeGrid& grid) {
    const Index d1 = s1.dim();
    const Index d2 = s2.dim();
    const Index n = grid.size();
    const SpectralCoeffs coeffs = to_eigenbasis(eig, psi0);

    EntropySeries out;
    out.times.resize(n);
    out.delta.resize(n);
    out.delta_n.resize(n);
    out.sigma1.resize(n);
    out.sigma2.resize(n);

    for (Index i = 0; i < n; ++i) {
        const double t = grid.time_at(i);
        const Ket psi = propagate_pure(eig, coeffs, t);
        const DensityOperator rho2{reduced_from_ket(psi.amplitudes(), d1, d2, Keep::subsystem2)};
        out.times[i] = t;
        out.delta[i] = linear_entropy(rho2);
        out.delta_n[i] = von_neumann_entropy(rho2);

        const Vector& a = psi.amplitudes();
        double s1z = 0.0;
        for (Index k1 = 0; k1 < d1; ++k1) {
            double weight = 0.0;
            for (Index k2 = 0; k2 < d2; ++k2) weight += std::norm(a[k1 * d2 + k2]);
            s1z += s1.m_at(k1) * weight;
        }
        double s2z = 0.0;
        for (Index b = 0; b < d2; ++b) s2z += s2.m_at(b) * rho2.matrix()(b, b).real();
        out.sigma1[i] = (s1z + s1.value()) / (2.0 * s1.value());
        out.sigma2[i] = (s2z + s2.value()) / (2.0 * s2.value());
    }
    return out;
}

}  // namespace

ClassicalState classical_start_of(const ScenarioConfig& cfg) {
    const auto pair_of = [](const InitialSpec& spec, SpinMagnitude s) {
        if (spec.kind == InitialSpec::Kind::canonical) return spec.point;
        return z_to_canonical(spec.z, s);
    };
    const CanonicalPair w1 = pair_of(cfg.initial1, cfg.model.s1);
    const CanonicalPair w2 = pair_of(cfg.initial2, cfg.model.s2);
    return ClassicalState{w1.q, w1.p, w2.q, w2.p};
}

std::string regime_name(Regime regime) {
    switch (regime) {
        case Regime::two_qubits: return "two_qubits";
        case Regime::environment: return "environment";
        case Regime::semiclassical: return "semiclassical";
    }
    throw ConfigError("unknown regime");
}

Regime regime_from_name(const std::string& name) {
    if (name == "two_qubits") return Regime::two_qubits;
    if (name == "environment") return Regime::environment;
    if (name == "semiclassical") return Regime::semiclassical;
    throw ConfigError("unknown regime name '" + name + "'");
}

InitialSpec InitialSpec::coherent(const CoherentLabel& z) {
    InitialSpec s;
    s.kind = Kind::coherent;
    s.z = z;
    return s;
}

InitialSpec InitialSpec::uniform() {
    InitialSpec s;
    s.kind = Kind::uniform;
    return s;
}

InitialSpec InitialSpec::thermal(double temperature) {
    InitialSpec s;
    s.kind = Kind::thermal;
    s.temperature = temperature;
    return s;
}

InitialSpec InitialSpec::canonical(const CanonicalPair& point) {
    InitialSpec s;
    s.kind = Kind::canonical;
    s.point = point;
    return s;
}

bool operator==(const InitialSpec& a, const InitialSpec& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case InitialSpec::Kind::coherent: return a.z == b.z;
        case InitialSpec::Kind::uniform: return true;
        case InitialSpec::Kind::thermal: return a.temperature == b.temperature;
        case InitialSpec::Kind::canonical:
            return a.point.q == b.point.q && a.point.p == b.point.p;
    }
    return false;
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    return a.regime == b.regime && a.model.s1 == b.model.s1 && a.model.s2 == b.model.s2 &&
           a.model.alpha == b.model.alpha && a.model.eps1_b0 == b.model.eps1_b0 &&
           a.model.eps2_b0 == b.model.eps2_b0 && a.grid == b.grid && a.initial1 == b.initial1 &&
           a.initial2 == b.initial2;
}

ScenarioConfig default_config(Regime regime) {
    ScenarioConfig cfg;
    cfg.regime = regime;
    switch (regime) {
        case Regime::two_qubits:
            cfg.model = ModelParams{SpinMagnitude::half(), SpinMagnitude::half(), 1.0, 1.0, 1.0};
            cfg.grid = TimeGrid{0.0, 50.0, 2000};
            break;
        case Regime::environment:
            // alpha = 5 puts the coupling safely above the field scale, so an
            // x-polarized environment-qubit pair is locked near a joint Sx
            // eigenstate and stays essentially separable, while a polar
            // environment still decoheres the qubit fast. Below alpha ~ 2.5
            // field precession erases that contrast. Not a published value.
            cfg.model = ModelParams{SpinMagnitude{400}, SpinMagnitude::half(), 5.0, 1.0, 1.0};
            cfg.grid = TimeGrid{0.0, 200.0, 4000};
            break;
        case Regime::semiclassical:
            // 2000 points: the first sample then sits where the generated
            // entanglement is already well above the delta/delta_N crossover
            // of the d=31 reduced spectrum (see README on entropy ordering).
            cfg.model = ModelParams{SpinMagnitude{30}, SpinMagnitude{30}, kSemiclassicalAlpha,
                                    1.0, 1.0};
            cfg.grid = TimeGrid{0.0, 200.0, 2000};
            break;
    }
    cfg.initial1 = InitialSpec::coherent(CoherentLabel(Complex(0.0, 0.0)));
    cfg.initial2 = InitialSpec::coherent(CoherentLabel(Complex(0.0, 0.0)));
    return cfg;
}

void validate(const ScenarioConfig& cfg) {
    require(std::isfinite(cfg.model.alpha), "alpha must be finite");
    require(std::isfinite(cfg.model.eps1_b0) && std::isfinite(cfg.model.eps2_b0),
            "field strengths must be finite");
    require(cfg.model.s1.twice() >= 1 && cfg.model.s2.twice() >= 1,
            "spin magnitudes must be at least 1/2");

    const auto check_initial = [](const InitialSpec& spec, SpinMagnitude s, const char* which) {
        if (spec.kind == InitialSpec::Kind::thermal && spec.temperature <= 0.0)
            throw ConfigError(std::string(which) + ": thermal temperature must be positive");
        if (spec.kind == InitialSpec::Kind::canonical)
            canonical_to_z(spec.point, s);  // rejects points on or outside the sphere
    };
    check_initial(cfg.initial1, cfg.model.s1, "initial1");
    check_initial(cfg.initial2, cfg.model.s2, "initial2");

    using Kind = InitialSpec::Kind;
    switch (cfg.regime) {
        case Regime::two_qubits:
            require(cfg.model.s1.twice() == 1 && cfg.model.s2.twice() == 1,
                    "two_qubits requires s1 = s2 = 1/2");
            require(cfg.initial1.kind == Kind::coherent && cfg.initial2.kind == Kind::coherent,
                    "two_qubits requires coherent initial states");
            break;
        case Regime::environment:
            require(cfg.model.s2.twice() == 1, "environment requires s2 = 1/2");
            require(cfg.initial1.kind != Kind::canonical,
                    "environment initial1 must be coherent, uniform, or thermal");
            require(cfg.initial2.kind == Kind::coherent,
                    "environment requires a coherent initial2");
            break;
        case Regime::semiclassical:
            require(cfg.model.s1 == cfg.model.s2, "semiclassical requires s1 = s2");
            require((cfg.initial1.kind == Kind::coherent ||
                     cfg.initial1.kind == Kind::canonical) &&
                        (cfg.initial2.kind == Kind::coherent ||
                         cfg.initial2.kind == Kind::canonical),
                    "semiclassical initial states must be coherent or canonical");
            break;
    }
}

Ket initial_ket(const InitialSpec& spec, SpinMagnitude s) {
    switch (spec.kind) {
        case InitialSpec::Kind::coherent: return coherent_state(s, spec.z);
        case InitialSpec::Kind::uniform: return uniform_state(s);
        case InitialSpec::Kind::canonical:
            return coherent_state(s, CoherentLabel(canonical_to_z(spec.point, s)));
        case InitialSpec::Kind::thermal:
            throw ConfigError("thermal initial state is not a ket");
    }
    throw ConfigError("unknown initial kind");
}

DensityOperator initial_density(const InitialSpec& spec, SpinMagnitude s) {
    if (spec.kind == InitialSpec::Kind::thermal)
        return thermal_density(s, spec.temperature);
    return DensityOperator::projector(initial_ket(spec, s));
}

EntropySeries run_two_qubit_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    require(cfg.regime == Regime::two_qubits, "config regime is not two_qubits");
    const Ket psi0 =
        tensor(initial_ket(cfg.initial1, cfg.model.s1), initial_ket(cfg.initial2, cfg.model.s2));
    const EigenSystem eig = spectral_decompose(build_hamiltonian(cfg.model));
    return pure_series(eig, psi0, cfg.model.s1, cfg.model.s2, cfg.grid);
}

EntropySeries run_environment_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    require(cfg.regime == Regime::environment, "config regime is not environment");
    const EigenSystem eig = spectral_decompose(build_hamiltonian(cfg.model));
    const SpinMagnitude s1 = cfg.model.s1;
    const SpinMagnitude s2 = cfg.model.s2;

    if (cfg.initial1.kind != InitialSpec::Kind::thermal) {
        const Ket psi0 = tensor(initial_ket(cfg.initial1, s1), initial_ket(cfg.initial2, s2));
        return pure_series(eig, psi0, s1, s2, cfg.grid);
    }

    // Mixed environment: evolve eigenbasis correlation forms instead of the
    // full density matrix; identical to mixing the propagated ensemble.
    const DensityOperator rho0 = tensor(initial_density(cfg.initial1, s1),
                                        initial_density(cfg.initial2, s2));
    const Matrix s1z_full =
        tensor_op(spin_operators(s1).sz, Matrix::Identity(s2.dim(), s2.dim()));
    ReducedEvolution red(eig, s1.dim(), s2.dim(), rho0.matrix(), {s1z_full});

    const Index n = cfg.grid.size();
    const Index d2 = s2.dim();
    EntropySeries out;
    out.times.resize(n);
    out.delta.resize(n);
    out.delta_n.resize(n);
    out.sigma1.resize(n);
    out.sigma2.resize(n);
    for (Index i = 0; i < n; ++i) {
        const double t = cfg.grid.time_at(i);
        const DensityOperator rho2{red.rho2(t)};
        out.times[i] = t;
        out.delta[i] = linear_entropy(rho2);
        out.delta_n[i] = von_neumann_entropy(rho2);
        double s2z = 0.0;
        for (Index b = 0; b < d2; ++b) s2z += s2.m_at(b) * rho2.matrix()(b, b).real();
        out.sigma1[i] = (red.observable(0, t) + s1.value()) / (2.0 * s1.value());
        out.sigma2[i] = (s2z + s2.value()) / (2.0 * s2.value());
    }
    return out;
}

SemiclassicalResult run_semiclassical_scenario(const ScenarioConfig& cfg,
                                               const SemiclassicalOptions& options) {
    validate(cfg);
    require(cfg.regime == Regime::semiclassical, "config regime is not semiclassical");

    SemiclassicalResult out;
    const Ket psi0 =
        tensor(initial_ket(cfg.initial1, cfg.model.s1), initial_ket(cfg.initial2, cfg.model.s2));
    const EigenSystem eig = spectral_decompose(build_hamiltonian(cfg.model));
    out.series = pure_series(eig, psi0, cfg.model.s1, cfg.model.s2, cfg.grid);
    out.classical_start = classical_start_of(cfg);

    if (options.with_trajectory)
        out.trajectory =
            integrate_trajectory(out.classical_start, cfg.model, cfg.grid, options.classical_step);
    if (options.section_crossings)
        out.section = poincare_section(out.classical_start, cfg.model, *options.section_crossings,
                                       options.section_direction, options.classical_step);
    if (options.with_lyapunov)
        out.lyapunov =
            lyapunov_exponent(out.classical_start, cfg.model, options.lyapunov_horizon,
                              options.lyapunov_renorm, options.classical_step);
    return out;
}

EntropySeries run_scenario(const ScenarioConfig& cfg) {
    switch (cfg.regime) {
        case Regime::two_qubits: return run_two_qubit_scenario(cfg);
        case Regime::environment: return run_environment_scenario(cfg);
        case Regime::semiclassical: {
            SemiclassicalOptions options;
            options.with_trajectory = false;
            return run_semiclassical_scenario(cfg, options).series;
        }
    }
    throw ConfigError("unknown regime");
}

const std::vector<Preset>& presets(Regime regime) {
    static const std::vector<Preset> two_qubit_presets = [] {
        const Complex i01{0.0, 1.0};
        const auto make = [](const char* name, const char* summary, CoherentLabel z1,
                             CoherentLabel z2) {
            ScenarioConfig cfg = default_config(Regime::two_qubits);
            cfg.initial1 = InitialSpec::coherent(z1);
            cfg.initial2 = InitialSpec::coherent(z2);
            return Preset{name, summary, cfg};
        };
        return std::vector<Preset>{
            make("case_a", "both qubits at the south pole", Complex(0, 0), Complex(0, 0)),
            make("case_b", "qubit 1 along +x, qubit 2 at the south pole", Complex(1, 0),
                 Complex(0, 0)),
            make("case_c", "qubit 1 at the north pole, qubit 2 at the south pole",
                 CoherentLabel::infinity(), Complex(0, 0)),
            make("case_d", "qubit 1 at the south pole, qubit 2 along +x", Complex(0, 0),
                 Complex(1, 0)),
            make("case_e", "qubit 1 at the south pole, qubit 2 along +y", Complex(0, 0), i01),
            make("case_f", "both qubits along +x", Complex(1, 0), Complex(1, 0)),
            make("case_g", "qubit 1 along +x, qubit 2 along +y", Complex(1, 0), i01),
            make("case_h", "both qubits along +y", i01, i01),
        };
    }();

    static const std::vector<Preset> environment_presets = [] {
        const auto base = [] { return default_config(Regime::environment); };
        std::vector<Preset> list;
        {
            ScenarioConfig cfg = base();
            list.push_back({"poles", "environment and qubit both at the south pole", cfg});
        }
        {
            ScenarioConfig cfg = base();
            cfg.initial2 = InitialSpec::coherent(CoherentLabel(Complex(1, 0)));
            list.push_back({"pole_equator",
                            "environment at the south pole, qubit on the equator", cfg});
        }
        {
            ScenarioConfig cfg = base();
            cfg.initial1 = InitialSpec::coherent(CoherentLabel(Complex(1, 0)));
            cfg.initial2 = InitialSpec::coherent(CoherentLabel(Complex(1, 0)));
            list.push_back({"equators", "environment and qubit both on the equator", cfg});
        }
        {
            ScenarioConfig cfg = base();
            cfg.initial1 = InitialSpec::uniform();
            cfg.initial2 = InitialSpec::coherent(CoherentLabel(Complex(1, 0)));
            list.push_back({"uniform", "non-localized environment, qubit on the equator", cfg});
        }
        {
            ScenarioConfig cfg = base();
            cfg.initial1 = InitialSpec::thermal(cfg.model.s1.value() / 10.0);
            cfg.initial2 = InitialSpec::coherent(CoherentLabel(Complex(1, 0)));
            list.push_back({"thermal",
                            "thermal environment at T = s1/10, qubit on the equator", cfg});
        }
        return list;
    }();

    static const std::vector<Preset> semiclassical_presets = [] {
        // Canonical points picked by a Poincare-section and Lyapunov survey at
        // s1 = s2 = 15, alpha = 2/15; see README for the selection procedure.
        // All three lie on negative energy shells, which cannot reach the
        // chart boundary A_i = 4 s_i (the coupling vanishes there and the
        // oscillator part is nonnegative), so long integrations stay interior.
        const auto make = [](const char* name, const char* summary, ClassicalState x) {
            ScenarioConfig cfg = default_config(Regime::semiclassical);
            cfg.initial1 = InitialSpec::canonical(CanonicalPair{x.q1, x.p1});
            cfg.initial2 = InitialSpec::canonical(CanonicalPair{x.q2, x.p2});
            return Preset{name, summary, cfg};
        };
        return std::vector<Preset>{
            // Sea point on the E = -26 shell: lambda ~ 0.20, section fills
            // ~320 of 2500 cells, entropy growth shows no recoherence.
            make("chaotic", "initial condition inside the chaotic sea of the section",
                 ClassicalState{-0.403, -1.554, -1.682, 0.0}),
            // Island point on the E = -32 shell, inside the well of the
            // anti-phase double well: lambda ~ 3e-3, tight section cells,
            // entropy revivals recur at the orbital period.
            make("regular", "initial condition on a regular island of the section",
                 ClassicalState{1.9, 0.0, -1.268, 0.0}),
            // Inner turning point of the anti-phase orbit q1 = -q2, p = 0 at
            // E = -32; exactly periodic and transversally stable, section
            // crossings cluster to ~1e-9.
            make("periodic", "initial condition near a stable periodic orbit",
                 ClassicalState{1.467913, 0.0, -1.467913, 0.0}),
        };
    }();

    switch (regime) {
        case Regime::two_qubits: return two_qubit_presets;
        case Regime::environment: return environment_presets;
        case Regime::semiclassical: return semiclassical_presets;
    }
    throw ConfigError("unknown regime");
}

ScenarioConfig preset_config(Regime regime, const std::string& name) {
    for (const Preset& preset : presets(regime))
        if (preset.name == name) return preset.config;
    throw ConfigError("unknown preset '" + name + "' for regime " + regime_name(regime));
}

}  // namespace spindyn
