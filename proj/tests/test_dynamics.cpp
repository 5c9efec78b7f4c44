#include "lindblad/dynamics.hpp"

#include "lindblad/measurement.hpp"
#include "testgen.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>

using namespace lindblad;

namespace {

LindbladSystem qubit_system(double ell, double h) {
    return LindbladSystem(h * sigma_x(), {ell * sigma_z()});
}

DensityMatrix plus_state() {
    return DensityMatrix(0.5 * (identity(2) + sigma_x()));
}

}  // namespace

TEST_CASE("DensityMatrix validation") {
    CHECK_NOTHROW(DensityMatrix(0.5 * identity(2)));
    // non-Hermitian
    Matrix bad = 0.5 * identity(2);
    bad(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);
    // trace != 1
    CHECK_THROWS_AS(DensityMatrix{Matrix(0.6 * identity(2))}, std::invalid_argument);
    // negative eigenvalue
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix{neg}, std::invalid_argument);
}

TEST_CASE("sample_times: stride and cap") {
    auto times = sample_times(10.0, 1e-3);  // 10000 steps, stride 10
    CHECK(times.size() == 1001);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == 10.0);

    times = sample_times(0.0, 1e-3);
    REQUIRE(times.size() == 1);
    CHECK(times[0] == 0.0);

    times = sample_times(0.5, 1e-3);  // 500 steps, stride 1
    CHECK(times.size() == 501);

    CHECK_THROWS_AS(sample_times(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_times(1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_times(-1.0, 0.1), std::invalid_argument);
}

TEST_CASE("integrate: off-diagonal decay of the worked example") {
    const Trajectory traj = integrate(qubit_system(1.0, 0.0), plus_state(), 10.0, 1e-3);
    REQUIRE(traj.times.size() == 1001);
    const Matrix& final_state = traj.states.back().matrix();
    // σ₁ component decays at rate 2: ρ(10)₀₁ = e^{-20}/2
    const double expected = 0.5 * std::exp(-20.0);
    CHECK(std::abs(final_state(0, 1).real() - expected) < 1e-11);
    CHECK(std::abs(final_state(0, 1).imag()) < 1e-11);
    CHECK(final_state(0, 0).real() == doctest::Approx(0.5));

    for (const StepDiagnostics& diag : traj.diagnostics) {
        CHECK(diag.trace_defect <= 1e-9);
        CHECK(diag.min_eigenvalue >= -1e-9);
    }
}

TEST_CASE("integrate: zero generator keeps the state constant") {
    const LindbladSystem zero(Matrix::Zero(2, 2), {});
    const Trajectory traj = integrate(zero, plus_state(), 2.0, 1e-2);
    for (const DensityMatrix& state : traj.states) {
        CHECK((state.matrix() - plus_state().matrix()).norm() < 1e-14);
    }
    for (const StepDiagnostics& diag : traj.diagnostics) {
        CHECK(diag.entropy == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("integrate: t_end = 0 gives the single-sample trajectory") {
    const Trajectory traj = integrate(qubit_system(1.0, 0.0), plus_state(), 0.0, 1e-2);
    REQUIRE(traj.times.size() == 1);
    CHECK(traj.times[0] == 0.0);
    CHECK((traj.states[0].matrix() - plus_state().matrix()).norm() < 1e-15);
}

TEST_CASE("integrate matches spectral propagation on a random balanced system") {
    Lcg64 rng(31);
    const LindbladSystem sys = testgen::random_balanced_system(rng, 3, 2);
    const DensityMatrix rho0(testgen::random_density(rng, 3));
    const Superoperator super = build_superoperator(sys);
    const SpectralPropagator prop(super);

    const Trajectory traj = integrate(sys, rho0, 10.0, 1e-3);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const Matrix ref = prop.state_at(rho0.matrix(), traj.times[k]);
        worst = std::max(worst, (traj.states[k].matrix() - ref).norm());
    }
    CHECK(worst <= 1e-6);
    CHECK((traj.states.back().matrix() -
           propagate_spectral(super, rho0, 10.0).matrix()).norm() <= 1e-7);
}

TEST_CASE("integrate: halving dt improves accuracy at 4th order") {
    Lcg64 rng(32);
    const LindbladSystem sys = testgen::random_balanced_system(rng, 3, 1);
    const DensityMatrix rho0(testgen::random_density(rng, 3));
    const SpectralPropagator prop(build_superoperator(sys));
    const Matrix ref = prop.state_at(rho0.matrix(), 1.0);

    const double err_coarse =
        (integrate(sys, rho0, 1.0, 0.02).states.back().matrix() - ref).norm();
    const double err_fine =
        (integrate(sys, rho0, 1.0, 0.01).states.back().matrix() - ref).norm();
    CHECK(err_coarse / err_fine >= 8.0);
}

TEST_CASE("integrate aborts on positivity violation with the offending time") {
    // dt far beyond the stability limit blows the state out of the cone
    try {
        integrate(qubit_system(1.0, 0.0), plus_state(), 10.0, 5.0);
        FAIL("expected integration_abort");
    } catch (const integration_abort& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time <= 10.0);
    }
}

TEST_CASE("entropy along balanced trajectories never decreases") {
    Lcg64 rng(33);
    for (int rep = 0; rep < 3; ++rep) {
        const LindbladSystem sys = testgen::random_balanced_system(rng, 3, 2);
        REQUIRE(entropy_condition_defect(sys) <= 1e-13);
        const DensityMatrix rho0(testgen::random_density(rng, 3));
        const Trajectory traj = integrate(sys, rho0, 3.0, 1e-3);
        for (std::size_t k = 1; k < traj.diagnostics.size(); ++k) {
            CHECK(traj.diagnostics[k].entropy - traj.diagnostics[k - 1].entropy >= -1e-8);
        }
    }
}

TEST_CASE("propagate_spectral: t = 0 round trip and stationary states") {
    Lcg64 rng(34);
    const LindbladSystem sys = testgen::random_balanced_system(rng, 3, 1);
    const DensityMatrix rho0(testgen::random_density(rng, 3));
    const Superoperator super = build_superoperator(sys);
    CHECK((propagate_spectral(super, rho0, 0.0).matrix() - rho0.matrix()).norm() <= 1e-12);

    // σ₃ spans a stationary direction of the h = 0 qubit
    const DensityMatrix up(0.5 * (identity(2) + sigma_z()));
    const Superoperator qs = build_superoperator(qubit_system(1.0, 0.0));
    for (double t : {0.3, 2.0, 7.5}) {
        CHECK((propagate_spectral(qs, up, t).matrix() - up.matrix()).norm() <= 1e-12);
    }
    CHECK_THROWS_AS(propagate_spectral(qs, up, -1.0), std::invalid_argument);
}

TEST_CASE("propagate_spectral agrees with integrate on the driven qubit") {
    const DensityMatrix up(0.5 * (identity(2) + sigma_z()));
    const LindbladSystem sys = qubit_system(1.0, 1.0);
    const Superoperator super = build_superoperator(sys);
    const Matrix via_spectral = propagate_spectral(super, up, 5.0).matrix();
    const Matrix via_rk4 = integrate(sys, up, 5.0, 1e-3).states.back().matrix();
    CHECK((via_spectral - via_rk4).norm() <= 1e-6);
}

TEST_CASE("von_neumann_entropy: pure, maximally mixed, two-level mixture") {
    Lcg64 rng(35);
    const Matrix u = testgen::random_unitary(rng, 3);
    const DensityMatrix pure(u.col(0) * u.col(0).adjoint());
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-10));

    CHECK(von_neumann_entropy(DensityMatrix(0.5 * identity(2))) ==
          doctest::Approx(std::log(2.0)));

    Matrix mix = Matrix::Zero(2, 2);
    mix(0, 0) = 0.7;
    mix(1, 1) = 0.3;
    // scalar evaluation of -0.7 ln 0.7 - 0.3 ln 0.3
    CHECK(von_neumann_entropy(DensityMatrix(mix)) ==
          doctest::Approx(0.6108643020548935).epsilon(1e-12));

    // raw-matrix route rejects eigenvalues below the clamp window
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(von_neumann_entropy(neg), std::invalid_argument);
}

TEST_CASE("asymptotic_state: qubit limits") {
    // h = 0: σ₃ survives, σ₁ decays; the plus state settles to 1/2
    const DensityMatrix limit0 = asymptotic_state(qubit_system(1.0, 0.0), plus_state());
    CHECK((limit0.matrix() - 0.5 * identity(2)).norm() <= 1e-10);

    // h ≠ 0: everything except the identity decays
    Lcg64 rng(36);
    for (int rep = 0; rep < 3; ++rep) {
        const DensityMatrix rho0(testgen::random_density(rng, 2));
        const DensityMatrix limit = asymptotic_state(qubit_system(1.0, 1.0), rho0);
        CHECK((limit.matrix() - 0.5 * identity(2)).norm() <= 1e-10);
    }

    // σ₃ component survives exactly
    const DensityMatrix tilted(0.5 * identity(2) + 0.3 * sigma_z());
    const DensityMatrix limit_z = asymptotic_state(qubit_system(1.0, 0.0), tilted);
    CHECK((limit_z.matrix() - tilted.matrix()).norm() <= 1e-10);
}

TEST_CASE("asymptotic_state matches the measurement-basis limit in d = 4") {
    Lcg64 rng(37);
    const testgen::Apparatus app = testgen::random_apparatus(rng, 4, 2);
    const DensityMatrix rho0(testgen::random_density(rng, 4));
    const DensityMatrix via_spectrum = asymptotic_state(app.system, rho0);
    const CollapseOutcome via_basis = born_collapse(app.basis, rho0);
    CHECK((via_spectrum.matrix() - via_basis.state.matrix()).norm() <= 1e-8);
}

TEST_CASE("asymptotic_state refuses oscillatory stationary modes") {
    // pure Hamiltonian evolution has eigenvalues ±2i on the coherences
    const LindbladSystem ham_only(sigma_z(), {});
    CHECK_THROWS_AS(asymptotic_state(ham_only, plus_state()), numerical_error);
}

TEST_CASE("default_time_step") {
    CHECK(default_time_step(qubit_system(1.0, 0.0)) == doctest::Approx(1e-2));
    // ||S||_F = 100·2√2 for ℓ = 10, so the 0.1/||S|| branch wins
    CHECK(default_time_step(qubit_system(10.0, 0.0)) ==
          doctest::Approx(0.1 / (200.0 * std::sqrt(2.0))));
    const LindbladSystem zero(Matrix::Zero(2, 2), {});
    CHECK(default_time_step(zero) == doctest::Approx(1e-2));
}
