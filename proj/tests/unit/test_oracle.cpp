#include <doctest.h>

#include <cmath>

#include <spinsense/channels.hpp>
#include <spinsense/oracle.hpp>
#include <spinsense/states.hpp>

using namespace spinsense;

TEST_CASE("lindblad_rhs vanishes on a maximally mixed dephasing fixed point") {
  const int n = 2;
  const ComplexMatrix rho = ComplexMatrix::Identity(4, 4) / 4.0;
  LindbladProblem p = make_dephasing_problem(n, {0.3, 0.3}, 1.0, rho);
  p.rho0 = rho;
  CHECK(lindblad_rhs(rho, p).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("lindblad_rhs single-qubit dephasing off-diagonal") {
  const double gamma = 0.4, phi = 1.3;
  const ComplexMatrix rho = density_from_pure(product_plus_state(1));
  const LindbladProblem p = make_dephasing_problem(1, {gamma}, phi, rho);
  const ComplexMatrix rhs = lindblad_rhs(rho, p);
  const Complex expected = Complex(-2.0 * gamma, -phi) * 0.5;
  CHECK(std::abs(rhs(0, 1) - expected) < 1e-15);
  CHECK(std::abs(rhs(0, 0)) < 1e-15);
  CHECK(std::abs(rhs(1, 1)) < 1e-15);
}

TEST_CASE("lindblad_rhs single-qubit emission drains the excited state") {
  const double gamma = 0.7;
  const ComplexMatrix rho = density_from_pure(single_qubit_delta_state(1.0));
  const LindbladProblem p = make_emission_problem(1, gamma, 0.0, rho);
  const ComplexMatrix rhs = lindblad_rhs(rho, p);
  CHECK(std::abs(rhs(0, 0) + gamma) < 1e-15);
  CHECK(std::abs(rhs(1, 1) - gamma) < 1e-15);
  CHECK(std::abs(rhs(0, 1)) < 1e-15);
}

TEST_CASE("lindblad generator annihilates the trace") {
  const ComplexMatrix rho0 = density_from_pure(ghz_state(3));
  for (bool emission : {false, true}) {
    const LindbladProblem p =
        emission ? make_emission_problem(3, 0.5, 0.9, rho0)
                 : make_dephasing_problem(3, {0.5, 0.2, 0.8}, 0.9, rho0);
    const ComplexMatrix out = lindblad_rhs(rho0, p);
    CHECK(std::abs(out.trace()) < 1e-12);
    CHECK(max_hermitian_asymmetry(out) < 1e-12);
  }
}

TEST_CASE("integrate returns rho0 at t = 0 and preserves structure") {
  const ComplexMatrix rho0 = density_from_pure(ghz_state(2));
  const LindbladProblem p = make_dephasing_problem(2, {0.5, 0.5}, 1.0, rho0);
  IntegratorConfig cfg;
  cfg.step = default_step(0.5, 1.0);
  CHECK((integrate(p, 0.0, cfg) - rho0).cwiseAbs().maxCoeff() == 0.0);

  // Trace drift and Hermiticity hold along the whole trajectory, not only
  // at the final time.
  for (double t : {0.25, 1.0, 2.0, 5.0}) {
    const ComplexMatrix rho = integrate(p, t, cfg);
    CHECK(std::abs(rho.trace().real() - 1.0) < 1e-9);
    CHECK(max_hermitian_asymmetry(rho) < 1e-10);
  }
}

TEST_CASE("oracle matches dephasing_propagate on one qubit") {
  const double gamma = 0.25, phi = 1.0;
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(1));
  const LindbladProblem p = make_dephasing_problem(1, {gamma}, phi, rho0);
  IntegratorConfig cfg;
  cfg.step = default_step(gamma, phi);
  const ComplexMatrix numeric = integrate(p, 2.0, cfg);
  const ComplexMatrix analytic = dephasing_propagate(
      rho0, DephasingChannel::uniform(1, gamma, phi), 2.0);
  CHECK((numeric - analytic).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("oracle matches emission_propagate on a two-qubit GHZ state") {
  const double gamma = 0.5, phi = 0.7;
  const ComplexMatrix rho0 = density_from_pure(ghz_state(2));
  const LindbladProblem p = make_emission_problem(2, gamma, phi, rho0);
  IntegratorConfig cfg;
  cfg.step = default_step(gamma, phi);
  const ComplexMatrix numeric = integrate(p, 3.0, cfg);
  const ComplexMatrix analytic =
      emission_propagate(rho0, EmissionChannel{gamma, phi}, 3.0);
  CHECK((numeric - analytic).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("compare_trajectories against an integrate-backed propagator") {
  // Sample times and step are chosen binary-exact so the streaming
  // integration and the restarted one take identical steps.
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(2));
  const LindbladProblem p = make_dephasing_problem(2, {0.5, 0.5}, 1.0, rho0);
  IntegratorConfig cfg;
  cfg.step = 0.015625;
  const Propagator self = [&p, &cfg](const ComplexMatrix&, double t) {
    return integrate(p, t, cfg);
  };
  const TrajectoryDeviation dev =
      compare_trajectories(self, p, {0.25, 0.5, 1.0}, cfg);
  CHECK(dev.max_abs < 1e-12);
}

TEST_CASE("compare_trajectories bounds both channels at N = 3") {
  const double gamma = 1.0, phi = 1.0;
  IntegratorConfig cfg;
  cfg.step = default_step(gamma, phi);
  std::vector<double> times{0.0};
  for (double t : log_spaced(29, 1e-3 / gamma, 5.0 / gamma)) times.push_back(t);

  const ComplexMatrix rho0 = density_from_pure(ghz_state(3));

  const LindbladProblem deph = make_dephasing_problem(
      3, std::vector<double>(3, gamma), phi, rho0);
  const DephasingChannel dch = DephasingChannel::uniform(3, gamma, phi);
  const TrajectoryDeviation ddev = compare_trajectories(
      [&dch](const ComplexMatrix& r, double t) {
        return dephasing_propagate(r, dch, t);
      },
      deph, times, cfg);
  CHECK(ddev.max_abs < 1e-6);

  const LindbladProblem emi = make_emission_problem(3, gamma, phi, rho0);
  const EmissionChannel ech{gamma, phi};
  const TrajectoryDeviation edev = compare_trajectories(
      [&ech](const ComplexMatrix& r, double t) {
        return emission_propagate(r, ech, t);
      },
      emi, times, cfg);
  CHECK(edev.max_abs < 1e-6);
}

TEST_CASE("halving the step shrinks the error by about 2^4") {
  const double gamma = 1.0, phi = 1.0, t = 2.0;
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(1));
  const LindbladProblem p = make_dephasing_problem(1, {gamma}, phi, rho0);
  const ComplexMatrix exact =
      dephasing_propagate(rho0, DephasingChannel::uniform(1, gamma, phi), t);

  const auto error_at = [&](double step) {
    IntegratorConfig cfg;
    cfg.step = step;
    return (integrate(p, t, cfg) - exact).cwiseAbs().maxCoeff();
  };
  const double ratio = error_at(0.05) / error_at(0.025);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("integrate aborts on a blow-up with the step index") {
  // A deliberately unstable configuration: the step is far beyond the
  // stability region, so the iteration diverges to non-finite values.
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(1));
  LindbladProblem p = make_dephasing_problem(1, {1e8}, 0.0, rho0);
  IntegratorConfig cfg;
  cfg.step = 1.0;
  try {
    integrate(p, 50.0, cfg);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(e.step_index() >= 1);
  }
}

TEST_CASE("oracle rejects invalid problems") {
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(1));
  IntegratorConfig cfg;

  LindbladProblem negative = make_dephasing_problem(1, {0.5}, 1.0, rho0);
  negative.dissipators[0].second = -0.1;
  CHECK_THROWS_AS(integrate(negative, 1.0, cfg), std::invalid_argument);

  const ComplexMatrix big0 = density_from_pure(ghz_state(7));
  const LindbladProblem big =
      make_dephasing_problem(7, std::vector<double>(7, 0.5), 1.0, big0);
  CHECK_THROWS_AS(integrate(big, 0.1, cfg), std::invalid_argument);

  CHECK_THROWS_AS(integrate(make_dephasing_problem(1, {0.5}, 1.0, rho0), -1.0,
                            cfg),
                  std::invalid_argument);
}
