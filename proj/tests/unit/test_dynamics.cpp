// test_dynamics.cpp — Analytic solutions, Lindblad semigroup and hybrid propagation

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

#include <numbers>

#include "decotime/dynamics.hpp"

using namespace decotime;
using namespace decotime::dynamics;
using core::Basis;
using core::DensityMatrix;
using testing::rel_diff;
using testing::thrown_code;

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

const DensityMatrix kTiltedState = core::superposition_state(1.25 * std::numbers::pi);

DensityMatrix random_state(std::mt19937_64& g) {
    const double r11 = testing::uniform(g, 0.0, 1.0);
    const double radius = std::sqrt(r11 * (1.0 - r11)) * testing::uniform(g, 0.0, 1.0);
    return DensityMatrix::make(r11, std::polar(radius, testing::uniform(g, -3.0, 3.0)), Basis::Z);
}

BathParams zero_t(double eta) { return {eta, 1.0, bath::InverseTemperature::zero_temperature()}; }
BathParams finite(double eta, double beta) { return {eta, 1.0, bath::InverseTemperature::finite(beta)}; }

} // namespace

TEST_CASE("system parameters") {
    CHECK(thrown_code([] { SystemParams{0.0, 0.0}.validate(); }) == ErrorCode::ZeroStrength);
    CHECK(thrown_code([] { SystemParams{-1.0, 1.0}.validate(); }) == ErrorCode::InvalidParameter);
    CHECK(SystemParams{0.0, 1.5}.omega_rate() == doctest::Approx(2.25));
    CHECK(SystemParams{0.3, 1.0}.omega_rate() == doctest::Approx(std::sqrt(1.0 - 0.36)));
    CHECK(thrown_code([] { SystemParams{1.0, 1.0}.omega_rate(); }) == ErrorCode::DegenerateOmega);
    CHECK(SystemParams{0.0, 1.0, Observable::SigmaX}.measured_basis() == Basis::X);
    CHECK((SystemParams{0.0, 2.0, Observable::SigmaX}.lindblad_operator() - 2.0 * core::sigma_x()).norm() == 0.0);
    CHECK(to_string(Method::HybridNumeric) == "hybrid");
    CHECK(to_string(Observable::SigmaZ) == "sigma_z");
}

TEST_CASE("analytic sigma_z solution") {
    const SystemParams s{0.5, 1.0, Observable::SigmaZ};
    auto g = testing::rng(51);
    SUBCASE("populations stay constant") {
        for (int k = 0; k < 20; ++k) {
            const auto rho0 = random_state(g);
            const double t = testing::uniform(g, 0.0, 5.0);
            CHECK(analytic_z(rho0, t, s, finite(0.05, 1.0)).rho11() == doctest::Approx(rho0.rho11()).epsilon(1e-15));
        }
    }
    SUBCASE("eta = 0 is the bare dephasing envelope and phase") {
        const auto rho0 = DensityMatrix::make(0.4, {0.2, 0.3}, Basis::Z);
        for (double t : {0.0, 0.3, 1.7}) {
            const cplx expected = rho0.rho12() * std::exp(-2.0 * t) * std::exp(-2.0 * I * 0.5 * t);
            CHECK(std::abs(analytic_z(rho0, t, s, finite(0.0, 1.0)).rho12() - expected) < 1e-15);
        }
    }
    SUBCASE("envelope ratio matches the quadrature exponent") {
        const auto rho0 = DensityMatrix::make(0.5, {0.3, -0.1}, Basis::Z);
        const BathParams b = finite(0.05, 1.0);
        const double ratio = std::abs(analytic_z(rho0, 0.5, s, b).rho12()) / std::abs(rho0.rho12());
        CHECK(rel_diff(ratio, std::exp(bath::decoherence_exponent_z(0.5, b)) * std::exp(-1.0)) < 1e-6);
    }
    SUBCASE("Gamma and quadrature sources agree") {
        const BathParams b = finite(0.08, 0.7);
        for (double t : {0.2, 2.0, 9.0}) {
            const auto a = analytic_z(kTiltedState, t, s, b, DecoherenceSource::GammaClosedForm);
            const auto q = analytic_z(kTiltedState, t, s, b, DecoherenceSource::Quadrature);
            CHECK(std::abs(a.rho12() - q.rho12()) < 1e-9);
        }
    }
    SUBCASE("accepts X-basis input, returns Z basis") {
        const auto x = core::change_basis(kTiltedState, Basis::X);
        CHECK(analytic_z(x, 0.0, s, finite(0.05, 1.0)).basis() == Basis::Z);
        CHECK(std::abs(analytic_z(x, 0.0, s, finite(0.05, 1.0)).rho12() - kTiltedState.rho12()) < 1e-15);
    }
    SUBCASE("errors") {
        CHECK(thrown_code([&] { analytic_z(kTiltedState, 1.0, {0.0, 1.0, Observable::SigmaX}, finite(0.05, 1.0)); }) ==
              ErrorCode::WrongObservable);
        CHECK(thrown_code([&] { analytic_z(kTiltedState, 1.0, s, zero_t(0.05)); }) ==
              ErrorCode::ZeroTemperatureUnsupported);
        CHECK_NOTHROW(analytic_z(kTiltedState, 1.0, s, zero_t(0.05), DecoherenceSource::Quadrature));
        CHECK(thrown_code([&] { analytic_z(kTiltedState, -1.0, s, finite(0.05, 1.0)); }) ==
              ErrorCode::InvalidParameter);
    }
}

TEST_CASE("analytic sigma_x solution") {
    const SystemParams s{0.0, 1.0, Observable::SigmaX};
    auto g = testing::rng(52);
    SUBCASE("t = 0 reproduces the initial state in the X basis") {
        for (int k = 0; k < 30; ++k) {
            const auto rho0 = random_state(g);
            const auto out = analytic_x(rho0, 0.0, s, zero_t(0.05));
            CHECK(out.basis() == Basis::X);
            CHECK((out.matrix() - core::change_basis(rho0, Basis::X).matrix()).norm() < 1e-12);
        }
    }
    SUBCASE("initial coherence of the tilted superposition") {
        CHECK(std::abs(analytic_x(kTiltedState, 0.0, s, zero_t(0.05)).rho12()) ==
              doctest::Approx(0.353553).epsilon(1e-6));
    }
    SUBCASE("eta = 0 equals the Lindblad semigroup") {
        for (int k = 0; k < 10; ++k) {
            const auto rho0 = random_state(g);
            const auto traj = propagate_lindblad(rho0, 2.0, s, 9);
            for (const auto& smp : traj.samples) {
                CHECK((analytic_x(rho0, smp.t, s, zero_t(0.0)).matrix() - smp.rho.matrix()).norm() < 1e-10);
            }
        }
    }
    SUBCASE("bath speeds up the loss of coherence") {
        for (double t : {0.3, 0.8, 1.5}) {
            CHECK(std::abs(analytic_x(kTiltedState, t, s, zero_t(0.05)).rho12()) <
                  std::abs(analytic_x(kTiltedState, t, s, zero_t(0.0)).rho12()));
        }
    }
    SUBCASE("errors") {
        CHECK(thrown_code([&] { analytic_x(kTiltedState, 1.0, {0.0, 1.0, Observable::SigmaZ}, zero_t(0.05)); }) ==
              ErrorCode::WrongObservable);
        CHECK(thrown_code([&] { analytic_x(kTiltedState, 1.0, s, finite(0.05, 1.0)); }) ==
              ErrorCode::RequiresZeroTemperature);
        CHECK(thrown_code([&] { analytic_x(kTiltedState, 1.0, {0.2, 1.0, Observable::SigmaX}, zero_t(0.05)); }) ==
              ErrorCode::RequiresZeroSplitting);
    }
}

TEST_CASE("Lindblad propagation") {
    auto g = testing::rng(53);
    for (int k = 0; k < 10; ++k) {
        const SystemParams s{testing::uniform(g, 0.0, 1.0), testing::uniform(g, 0.2, 2.0),
                             k % 2 ? Observable::SigmaX : Observable::SigmaZ};
        const auto traj = propagate_lindblad(random_state(g), 3.0, s, 31);
        CHECK(traj.samples.size() == 31);
        CHECK(traj.max_trace_drift < 1e-12);
        CHECK(traj.positivity_violations == 0);
        CHECK(traj.samples.back().t == 3.0);
        CHECK(traj.samples.front().rho.basis() == s.measured_basis());
    }
    SUBCASE("sigma_z measurement at eta = 0: exact exponential envelope") {
        const SystemParams s{0.4, 1.2, Observable::SigmaZ};
        const auto traj = propagate_lindblad(kTiltedState, 2.0, s, 11);
        for (const auto& smp : traj.samples) {
            CHECK(std::abs(smp.abs_rho12 - std::abs(kTiltedState.rho12()) * std::exp(-2.0 * 1.44 * smp.t)) < 1e-14);
            CHECK(std::abs(smp.rho.rho12() - analytic_z(kTiltedState, smp.t, s, finite(0.0, 1.0)).rho12()) < 1e-14);
        }
    }
}

TEST_CASE("uniform time grid and sampled functions") {
    const auto ts = uniform_times(2.0, 5);
    CHECK(ts.size() == 5);
    CHECK(ts[1] == doctest::Approx(0.5));
    CHECK(ts.back() == 2.0);
    CHECK(uniform_times(0.0, 10).size() == 1);

    const SampledFunction f({0.0, 1.0, 3.0}, {1.0, 3.0, -1.0});
    CHECK(f(-1.0) == 1.0);
    CHECK(f(0.5) == doctest::Approx(2.0));
    CHECK(f(2.0) == doctest::Approx(1.0));
    CHECK(f(5.0) == -1.0);
    CHECK(thrown_code([] { SampledFunction({}, {}); }) == ErrorCode::InvalidParameter);
    CHECK(thrown_code([] { coherence_modulus(Trajectory{}); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("hybrid propagation") {
    SUBCASE("default step follows the fastest scale") {
        CHECK(PropagatorConfig::default_dt({0.0, 2.0}, zero_t(0.1)) == doctest::Approx(2.5e-4));
        CHECK(PropagatorConfig::default_dt({0.0, 0.5}, zero_t(0.1)) == doctest::Approx(1e-3));
        CHECK(PropagatorConfig::default_dt({0.0, 0.5}, finite(0.1, 0.2)) == doctest::Approx(2e-4));
        PropagatorConfig c;
        c.dt = -1.0;
        CHECK(thrown_code([&] { c.validate(); }) == ErrorCode::InvalidParameter);
        c = {};
        c.output_stride = 0;
        CHECK(thrown_code([&] { c.validate(); }) == ErrorCode::InvalidParameter);
    }
    SUBCASE("no bath: exactly the Lindblad semigroup") {
        const SystemParams s{0.3, 0.9, Observable::SigmaX};
        const auto hyb = propagate_hybrid(kTiltedState, 1.0, s, zero_t(0.0));
        const auto lin = propagate_lindblad(kTiltedState, 1.0, s, 2);
        CHECK((hyb.samples.back().rho.matrix() - lin.samples.back().rho.matrix()).norm() < 1e-12);
    }
    SUBCASE("memory generator vanishes at t = 0 and preserves the trace") {
        HybridPropagator p(kTiltedState, {0.0, 1.0, Observable::SigmaX}, zero_t(1.0));
        CHECK(p.memory_generator(0).norm() == 0.0);
        for (std::size_t m : {1u, 2u, 7u, 40u}) {
            CHECK((core::trace_functional() * p.memory_generator(m)).norm() < 1e-12);
        }
    }
    SUBCASE("weak coupling sigma_x: agrees with the analytic solution") {
        const SystemParams s{0.0, 1.0, Observable::SigmaX};
        const auto traj = propagate_hybrid(kTiltedState, 1.5, s, zero_t(0.05), {std::nullopt, 50});
        CHECK(traj.samples.size() == 31);
        for (const auto& smp : traj.samples) {
            const double analytic = std::abs(analytic_x(kTiltedState, smp.t, s, zero_t(0.05)).rho12());
            CHECK(rel_diff(smp.abs_rho12, analytic) < 1e-8);
            CHECK(smp.rho.rho11() == doctest::Approx(analytic_x(kTiltedState, smp.t, s, zero_t(0.05)).rho11()));
        }
        CHECK(traj.max_trace_drift < 1e-12);
        CHECK(traj.positivity_violations == 0);
    }
    SUBCASE("sigma_z at finite temperature: agrees with the Gamma closed form") {
        const SystemParams s{0.4, 0.8, Observable::SigmaZ};
        const BathParams b = finite(0.1, 1.0);
        const auto traj = propagate_hybrid(kTiltedState, 2.0, s, b, {std::nullopt, 250});
        for (const auto& smp : traj.samples) {
            CHECK(std::abs(smp.rho.rho12() - analytic_z(kTiltedState, smp.t, s, b).rho12()) < 1e-8);
        }
    }
    SUBCASE("dense output matches the step grid and stays smooth between steps") {
        const SystemParams s{0.0, 1.0, Observable::SigmaX};
        PropagatorConfig c;
        c.dt = 0.01;
        HybridPropagator p(kTiltedState, s, zero_t(0.05), c);
        p.advance_to(0.5);
        CHECK(p.steps() == 50);
        CHECK((p.state_at(0.3).matrix() - p.state_at_step(30).matrix()).norm() < 1e-14);
        const double mid = std::abs(core::change_basis(p.state_at(0.305), Basis::X).rho12());
        const double exact = std::abs(analytic_x(kTiltedState, 0.305, s, zero_t(0.05)).rho12());
        CHECK(rel_diff(mid, exact) < 1e-7);
        CHECK(thrown_code([&] { p.state_at_step(1000); }) == ErrorCode::InvalidParameter);
    }
    SUBCASE("strong coupling runs to completion and reports its diagnostics") {
        const SystemParams s{0.0, 1.0, Observable::SigmaX};
        const auto traj = propagate_hybrid(kTiltedState, 1.0, s, zero_t(5.0), {std::nullopt, 100});
        CHECK(traj.samples.size() == 11);
        CHECK(traj.max_trace_drift < 1e-10);
        CHECK(traj.samples.back().abs_rho12 < traj.samples.front().abs_rho12);
        CHECK(traj.min_positivity_margin <= traj.samples.front().rho.positivity_margin());
    }
    SUBCASE("lands exactly on t_end") {
        PropagatorConfig c;
        c.dt = 0.03;
        const auto traj = propagate_hybrid(kTiltedState, 0.1, {0.0, 1.0, Observable::SigmaX}, zero_t(0.05), c);
        CHECK(traj.samples.back().t == 0.1);
        CHECK(propagate_hybrid(kTiltedState, 0.0, {0.0, 1.0}, zero_t(0.05)).samples.size() == 1);
    }
}
