#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "spindyn/dynamics.hpp"
#include "spindyn/entanglement.hpp"
#include "spindyn/scenarios.hpp"
#include "spindyn/spin.hpp"

using namespace spindyn;

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Interior strict extrema of v: +1 for maxima, -1 for minima. Only turning
// points whose neighbour difference exceeds `prominence` count, which skips
// roundoff wiggles on plateaus.
std::vector<std::pair<Index, int>> turning_points(const RealVector& v, double prominence) {
    std::vector<std::pair<Index, int>> out;
    for (Index i = 1; i + 1 < v.size(); ++i) {
        const double left = v[i] - v[i - 1];
        const double right = v[i + 1] - v[i];
        if (std::max(std::abs(left), std::abs(right)) < prominence) continue;
        if (left > 0.0 && right < 0.0) out.emplace_back(i, +1);
        if (left < 0.0 && right > 0.0) out.emplace_back(i, -1);
    }
    return out;
}

bool has_turning_near(const RealVector& v, Index i, int type) {
    for (Index j = std::max<Index>(1, i - 1); j <= std::min<Index>(v.size() - 2, i + 1); ++j) {
        const double left = v[j] - v[j - 1];
        const double right = v[j + 1] - v[j];
        if (type > 0 && left > 0.0 && right < 0.0) return true;
        if (type < 0 && left < 0.0 && right > 0.0) return true;
    }
    return false;
}

bool series_equal(const EntropySeries& a, const EntropySeries& b) {
    return a.times == b.times && a.delta == b.delta && a.delta_n == b.delta_n &&
           a.sigma1 == b.sigma1 && a.sigma2 == b.sigma2;
}

}  // namespace

TEST_CASE("regime names round-trip and unknown names are rejected") {
    for (Regime r : {Regime::two_qubits, Regime::environment, Regime::semiclassical})
        CHECK(regime_from_name(regime_name(r)) == r);
    CHECK(regime_name(Regime::two_qubits) == "two_qubits");
    CHECK_THROWS_AS(regime_from_name("qubits"), ConfigError);
    CHECK_THROWS_AS(regime_from_name(""), ConfigError);
}

TEST_CASE("default configs carry the regime defaults") {
    const ScenarioConfig tq = default_config(Regime::two_qubits);
    CHECK(tq.model.s1.twice() == 1);
    CHECK(tq.model.s2.twice() == 1);
    CHECK(tq.model.alpha == 1.0);
    CHECK(tq.grid.t_start == 0.0);
    CHECK(tq.grid.t_end == 50.0);
    CHECK(tq.grid.n_points == 2000);

    const ScenarioConfig env = default_config(Regime::environment);
    CHECK(env.model.s1.twice() == 400);
    CHECK(env.model.s2.twice() == 1);
    CHECK(env.grid.t_end == 200.0);
    CHECK(env.grid.n_points == 4000);

    const ScenarioConfig sc = default_config(Regime::semiclassical);
    CHECK(sc.model.s1.twice() == 30);
    CHECK(sc.model.s2 == sc.model.s1);
    CHECK(sc.model.alpha == kSemiclassicalAlpha);
    CHECK(sc.grid.n_points == 2000);

    for (const ScenarioConfig& cfg : {tq, env, sc}) {
        CHECK(cfg.initial1.kind == InitialSpec::Kind::coherent);
        CHECK(cfg.initial2.kind == InitialSpec::Kind::coherent);
        CHECK_NOTHROW(validate(cfg));
    }
}

TEST_CASE("validate enforces the regime constraints") {
    SUBCASE("two_qubits rejects larger spins and non-coherent initials") {
        ScenarioConfig cfg = default_config(Regime::two_qubits);
        cfg.model.s1 = SpinMagnitude{2};
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::two_qubits);
        cfg.initial1 = InitialSpec::uniform();
        CHECK_THROWS_AS(validate(cfg), ConfigError);
    }

    SUBCASE("environment rejects canonical probes and non-qubit partners") {
        ScenarioConfig cfg = default_config(Regime::environment);
        cfg.initial1 = InitialSpec::canonical(CanonicalPair{1.0, 0.0});
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::environment);
        cfg.model.s2 = SpinMagnitude{2};
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::environment);
        cfg.initial2 = InitialSpec::uniform();
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::environment);
        cfg.initial1 = InitialSpec::thermal(-1.0);
        CHECK_THROWS_AS(validate(cfg), ConfigError);
    }

    SUBCASE("semiclassical wants equal spins inside the sphere") {
        ScenarioConfig cfg = default_config(Regime::semiclassical);
        cfg.model.s2 = SpinMagnitude{2};
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::semiclassical);
        cfg.initial1 = InitialSpec::thermal(1.0);
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg = default_config(Regime::semiclassical);
        cfg.initial1 = InitialSpec::canonical(CanonicalPair{20.0, 0.0});  // A = 400 > 4s = 60
        CHECK_THROWS_AS(validate(cfg), ConfigError);

        cfg.initial1 = InitialSpec::canonical(CanonicalPair{2.0, -1.0});
        CHECK_NOTHROW(validate(cfg));
    }

    SUBCASE("non-finite parameters are rejected everywhere") {
        ScenarioConfig cfg = default_config(Regime::two_qubits);
        cfg.model.alpha = std::nan("");
        CHECK_THROWS_AS(validate(cfg), ConfigError);
    }
}

TEST_CASE("initial specs resolve to the matching states") {
    const SpinMagnitude s{6};  // s = 3

    const CoherentLabel z(0.4, -0.7);
    CHECK((initial_ket(InitialSpec::coherent(z), s).amplitudes() -
           coherent_state(s, z).amplitudes())
              .norm() == 0.0);
    CHECK((initial_ket(InitialSpec::uniform(), s).amplitudes() -
           uniform_state(s).amplitudes())
              .norm() == 0.0);

    // Canonical points land on the same ray as the label they came from.
    const CanonicalPair w = z_to_canonical(z, s);
    const Ket via_point = initial_ket(InitialSpec::canonical(w), s);
    CHECK((via_point.amplitudes() - coherent_state(s, z).amplitudes()).norm() < 1e-12);

    CHECK_THROWS_AS(initial_ket(InitialSpec::thermal(1.0), s), ConfigError);

    const DensityOperator rho = initial_density(InitialSpec::thermal(2.0), s);
    // Populations follow exp(-m/T); the ascending-m basis decays upward.
    const double ratio = rho.matrix()(1, 1).real() / rho.matrix()(0, 0).real();
    CHECK(ratio == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    const DensityOperator pure = initial_density(InitialSpec::coherent(z), s);
    CHECK(std::abs(pure.matrix().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("presets are named, valid, and reachable by name") {
    const auto& tq = presets(Regime::two_qubits);
    REQUIRE(tq.size() == 8);
    const char* names[] = {"case_a", "case_b", "case_c", "case_d",
                           "case_e", "case_f", "case_g", "case_h"};
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(tq[i].name == names[i]);
        CHECK(!tq[i].summary.empty());
        CHECK_NOTHROW(validate(tq[i].config));
    }
    CHECK(preset_config(Regime::two_qubits, "case_c").initial1.z.at_infinity);
    CHECK(preset_config(Regime::two_qubits, "case_e").initial2.z.z == Complex(0.0, 1.0));

    const auto& env = presets(Regime::environment);
    REQUIRE(env.size() == 5);
    const char* env_names[] = {"poles", "pole_equator", "equators", "uniform", "thermal"};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(env[i].name == env_names[i]);
        CHECK_NOTHROW(validate(env[i].config));
    }
    const ScenarioConfig thermal = preset_config(Regime::environment, "thermal");
    CHECK(thermal.initial1.kind == InitialSpec::Kind::thermal);
    CHECK(thermal.initial1.temperature == doctest::Approx(20.0));

    const auto& sc = presets(Regime::semiclassical);
    REQUIRE(sc.size() == 3);
    const char* sc_names[] = {"chaotic", "regular", "periodic"};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(sc[i].name == sc_names[i]);
        CHECK_NOTHROW(validate(sc[i].config));
        CHECK(sc[i].config.model.alpha == kSemiclassicalAlpha);
    }

    CHECK_THROWS_AS(preset_config(Regime::two_qubits, "case_z"), ConfigError);
    CHECK_THROWS_AS(preset_config(Regime::environment, "case_a"), ConfigError);
}

TEST_CASE("zero coupling keeps every product state separable") {
    ScenarioConfig cfg = preset_config(Regime::two_qubits, "case_f");
    cfg.model.alpha = 0.0;
    cfg.grid = TimeGrid{0.0, 10.0, 101};
    const EntropySeries series = run_two_qubit_scenario(cfg);
    REQUIRE(series.size() == 101);
    for (Index i = 0; i < series.size(); ++i) {
        CHECK(series.delta[i] == 0.0);
        CHECK(series.delta_n[i] == 0.0);
        // [H, Sjz] = 0 without coupling, so the polarizations freeze.
        CHECK(series.sigma1[i] == doctest::Approx(series.sigma1[0]).epsilon(1e-12));
        CHECK(series.sigma2[i] == doctest::Approx(series.sigma2[0]).epsilon(1e-12));
    }
}

TEST_CASE("qubit series matches a brute-force propagation at t = 0.5") {
    ScenarioConfig cfg = preset_config(Regime::two_qubits, "case_a");
    cfg.grid = TimeGrid{0.0, 1.0, 3};  // samples t = 0, 0.5, 1
    const EntropySeries series = run_two_qubit_scenario(cfg);

    const Matrix h = build_hamiltonian(cfg.model);
    const Matrix u = oracle::evolution_operator(h, 0.5);
    Vector psi0 = Vector::Zero(4);
    psi0[0] = 1.0;  // both qubits in m = -1/2
    const Vector psi = u * psi0;
    const Matrix rho = psi * psi.adjoint();
    const Matrix rho2 = oracle::partial_trace_literal(rho, 2, 2, 2);

    const double purity = rho2.cwiseAbs2().sum();
    const double delta_ref = 2.0 * (1.0 - purity);
    const double delta_n_ref = oracle::von_neumann_2x2(rho2);
    const double s2z = -0.5 * rho2(0, 0).real() + 0.5 * rho2(1, 1).real();

    CHECK(series.times[1] == 0.5);
    CHECK(series.delta[1] == doctest::Approx(delta_ref).epsilon(1e-9));
    CHECK(series.delta_n[1] == doctest::Approx(delta_n_ref).epsilon(1e-9));
    CHECK(series.sigma2[1] == doctest::Approx(s2z + 0.5).epsilon(1e-10));

    CHECK(series.delta[0] == 0.0);
    CHECK(series.delta_n[0] == 0.0);
    CHECK(series.sigma1[0] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("linear entropy never exceeds the von-Neumann entropy for qubit pairs") {
    for (const char* name : {"case_a", "case_f", "case_g"}) {
        const EntropySeries series = run_two_qubit_scenario(
            preset_config(Regime::two_qubits, name));
        REQUIRE(series.size() == 2000);
        for (Index i = 0; i < series.size(); ++i) {
            CHECK(series.delta[i] <= series.delta_n[i] + 1e-9);
            CHECK(series.delta[i] >= 0.0);
            CHECK(series.delta_n[i] <= 1.0);
            CHECK(series.sigma1[i] >= -1e-12);
            CHECK(series.sigma1[i] <= 1.0 + 1e-12);
            CHECK(series.sigma2[i] >= -1e-12);
            CHECK(series.sigma2[i] <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("both entropies turn at the same times") {
    const EntropySeries series = run_two_qubit_scenario(
        preset_config(Regime::two_qubits, "case_a"));
    const auto turns = turning_points(series.delta, 1e-6);
    REQUIRE(turns.size() > 2);
    for (const auto& [i, type] : turns)
        CHECK(has_turning_near(series.delta_n, i, type));
}

TEST_CASE("entanglement grows quadratically at short times") {
    ScenarioConfig cfg = preset_config(Regime::two_qubits, "case_a");
    cfg.grid = TimeGrid{0.0, 0.1, 101};
    const EntropySeries series = run_two_qubit_scenario(cfg);

    // Least-squares slope of log delta against log t over the first decade.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = 10;
    for (int i = 1; i <= n; ++i) {
        const double x = std::log(series.times[i]);
        const double y = std::log(series.delta[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("uniform environment initial state runs as a pure ket") {
    ScenarioConfig cfg = default_config(Regime::environment);
    cfg.model.s1 = SpinMagnitude{4};  // s1 = 2 keeps the oracle propagator cheap
    cfg.model.alpha = 0.9;
    cfg.initial1 = InitialSpec::uniform();
    cfg.initial2 = InitialSpec::coherent(CoherentLabel(1.0, 0.0));
    cfg.grid = TimeGrid{0.0, 1.4, 3};
    const EntropySeries series = run_environment_scenario(cfg);

    CHECK(series.delta[0] == 0.0);
    CHECK(series.sigma1[0] == doctest::Approx(0.5).epsilon(1e-13));

    const Vector psi0 = tensor(uniform_state(cfg.model.s1),
                               coherent_state(cfg.model.s2, cfg.initial2.z))
                            .amplitudes();
    const Matrix u = oracle::evolution_operator(build_hamiltonian(cfg.model), 0.7);
    const Vector psi = u * psi0;
    const Matrix rho2 = oracle::partial_trace_literal(psi * psi.adjoint(), 5, 2, 2);
    const double delta_ref = 2.0 * (1.0 - rho2.cwiseAbs2().sum());
    CHECK(series.times[1] == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(series.delta[1] == doctest::Approx(delta_ref).epsilon(1e-9));
}

TEST_CASE("thermal environment equals literal ensemble mixing") {
    ScenarioConfig cfg = default_config(Regime::environment);
    cfg.model.s1 = SpinMagnitude{4};  // s1 = 2, dim 5
    cfg.model.alpha = 0.9;
    const double temperature = 1.3;
    cfg.initial1 = InitialSpec::thermal(temperature);
    cfg.initial2 = InitialSpec::coherent(CoherentLabel(0.7, 0.2));
    cfg.grid = TimeGrid{0.0, 5.0, 6};
    const EntropySeries series = run_environment_scenario(cfg);

    const SpinMagnitude s1 = cfg.model.s1;
    const Index d1 = s1.dim();
    RealVector weights(d1);
    for (Index k = 0; k < d1; ++k) weights[k] = std::exp(-s1.m_at(k) / temperature);
    weights /= weights.sum();

    const Matrix h = build_hamiltonian(cfg.model);
    const Vector chi = coherent_state(cfg.model.s2, cfg.initial2.z).amplitudes();
    const Matrix s1z = spin_operators(s1).sz;
    const Matrix s1z_full = kron(s1z, Matrix::Identity(2, 2));

    for (Index i = 0; i < series.size(); ++i) {
        const Matrix u = oracle::evolution_operator(h, series.times[i]);
        Matrix rho2 = Matrix::Zero(2, 2);
        double exp_s1z = 0.0;
        for (Index k = 0; k < d1; ++k) {
            Vector psi0 = Vector::Zero(2 * d1);
            psi0[2 * k] = chi[0];
            psi0[2 * k + 1] = chi[1];
            const Vector psi = u * psi0;
            rho2 += weights[k] * oracle::partial_trace_literal(psi * psi.adjoint(), d1, 2, 2);
            exp_s1z += weights[k] * (psi.adjoint() * s1z_full * psi)(0, 0).real();
        }
        const double delta_ref = 2.0 * (1.0 - rho2.cwiseAbs2().sum());
        const Eigen::Vector2d lam = oracle::hermitian2_eigenvalues(rho2);
        const double s2z = -0.5 * rho2(0, 0).real() + 0.5 * rho2(1, 1).real();

        CHECK(series.delta[i] == doctest::Approx(delta_ref).epsilon(1e-9));
        if (lam.minCoeff() > 1e-12)
            CHECK(series.delta_n[i] ==
                  doctest::Approx(oracle::von_neumann_2x2(rho2)).epsilon(1e-9));
        CHECK(series.sigma1[i] ==
              doctest::Approx((exp_s1z + s1.value()) / (2.0 * s1.value())).epsilon(1e-9));
        CHECK(series.sigma2[i] == doctest::Approx(s2z + 0.5).epsilon(1e-9));
    }
}

TEST_CASE("semiclassical runs return the classical companions") {
    ScenarioConfig cfg = default_config(Regime::semiclassical);
    cfg.model.s1 = SpinMagnitude{4};  // s = 2 keeps the spectrum small
    cfg.model.s2 = SpinMagnitude{4};
    cfg.grid = TimeGrid{0.0, 20.0, 101};
    cfg.initial1 = InitialSpec::canonical(CanonicalPair{1.0, 0.5});
    cfg.initial2 = InitialSpec::canonical(CanonicalPair{-0.8, 0.3});

    SemiclassicalOptions options;
    options.section_crossings = 5;
    options.with_lyapunov = true;
    options.lyapunov_horizon = 50.0;
    const SemiclassicalResult result = run_semiclassical_scenario(cfg, options);

    REQUIRE(result.series.size() == 101);
    CHECK(result.classical_start.q1 == 1.0);
    CHECK(result.classical_start.p1 == 0.5);
    CHECK(result.classical_start.q2 == -0.8);
    CHECK(result.classical_start.p2 == 0.3);

    REQUIRE(result.trajectory.has_value());
    REQUIRE(result.trajectory->size() == 101);
    CHECK(result.trajectory->times[100] == doctest::Approx(20.0).epsilon(1e-15));
    const double e0 = result.trajectory->energies[0];
    for (Index i = 0; i < result.trajectory->size(); ++i)
        CHECK(std::abs(result.trajectory->energies[i] - e0) < 1e-8);

    REQUIRE(result.section.has_value());
    CHECK(result.section->complete);
    CHECK(result.section->points.size() == 5);

    REQUIRE(result.lyapunov.has_value());
    CHECK(std::isfinite(*result.lyapunov));

    // Entropies stay meaningful for the modest spin too.
    for (Index i = 0; i < result.series.size(); ++i) {
        CHECK(result.series.delta[i] >= 0.0);
        CHECK(result.series.delta_n[i] <= 1.0);
    }
}

TEST_CASE("classical start maps coherent labels onto the spheres") {
    ScenarioConfig cfg = default_config(Regime::semiclassical);
    cfg.initial1 = InitialSpec::coherent(CoherentLabel(0.5, 0.0));
    cfg.initial2 = InitialSpec::coherent(CoherentLabel(0.0, 0.0));
    const ClassicalState x0 = classical_start_of(cfg);
    const double expected_q1 = std::sqrt(60.0) * 0.5 / std::sqrt(1.25);
    CHECK(x0.q1 == doctest::Approx(expected_q1).epsilon(1e-14));
    CHECK(x0.p1 == 0.0);
    CHECK(x0.q2 == 0.0);
    CHECK(x0.p2 == 0.0);
}

TEST_CASE("run_scenario dispatches to the regime runner") {
    ScenarioConfig tq = preset_config(Regime::two_qubits, "case_b");
    tq.grid = TimeGrid{0.0, 5.0, 21};
    CHECK(series_equal(run_scenario(tq), run_two_qubit_scenario(tq)));

    ScenarioConfig env = default_config(Regime::environment);
    env.model.s1 = SpinMagnitude{2};
    env.initial1 = InitialSpec::thermal(0.4);
    env.grid = TimeGrid{0.0, 3.0, 7};
    CHECK(series_equal(run_scenario(env), run_environment_scenario(env)));

    ScenarioConfig sc = default_config(Regime::semiclassical);
    sc.model.s1 = SpinMagnitude{4};
    sc.model.s2 = SpinMagnitude{4};
    sc.grid = TimeGrid{0.0, 5.0, 11};
    SemiclassicalOptions options;
    options.with_trajectory = false;
    CHECK(series_equal(run_scenario(sc), run_semiclassical_scenario(sc, options).series));
}

TEST_CASE("identical configs give bit-identical series") {
    const ScenarioConfig cfg = preset_config(Regime::two_qubits, "case_g");
    CHECK(series_equal(run_two_qubit_scenario(cfg), run_two_qubit_scenario(cfg)));

    ScenarioConfig env = preset_config(Regime::environment, "thermal");
    env.model.s1 = SpinMagnitude{8};
    env.initial1 = InitialSpec::thermal(0.4);
    env.grid = TimeGrid{0.0, 10.0, 32};
    CHECK(series_equal(run_environment_scenario(env), run_environment_scenario(env)));
}

TEST_CASE("semiclassical presets split by recoherence behaviour") {
    SemiclassicalOptions options;
    options.with_trajectory = false;

    const auto events_of = [&](const char* name, EntropySeries* out = nullptr) {
        const ScenarioConfig cfg = preset_config(Regime::semiclassical, name);
        EntropySeries series = run_semiclassical_scenario(cfg, options).series;
        auto events = detect_recoherences(series);
        if (out) *out = std::move(series);
        return events;
    };

    // The chaotic run saturates for good; the island runs keep dipping.
    CHECK(events_of("chaotic").empty());
    CHECK(events_of("periodic").size() >= 1);

    EntropySeries regular;
    const auto events = events_of("regular", &regular);
    REQUIRE(events.size() >= 2);

    // Each dip happens while spin 1 sits in the low-polarization region it
    // started from: sigma1 at every event minimum is below its own median.
    const double median = quantile(regular.sigma1, 0.5);
    const double dt = regular.times[1] - regular.times[0];
    for (const RecoherenceEvent& event : events) {
        const auto i = static_cast<Index>(std::lround(event.t_min / dt));
        REQUIRE(std::abs(regular.times[i] - event.t_min) < 1e-9);
        CHECK(regular.sigma1[i] < median);
    }
}
