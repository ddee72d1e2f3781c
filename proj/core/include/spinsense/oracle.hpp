// Brute-force Lindblad integrator used to validate the analytic channels.
// Operators are assembled here from scratch (sigma^z|0> = +|0>,
// sigma^- = |1><0|) so that this path shares no evolution code with the
// closed-form propagators.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "spinsense/numerics.hpp"

namespace spinsense {

struct LindbladProblem {
  ComplexMatrix hamiltonian;
  std::vector<std::pair<ComplexMatrix, double>> dissipators;  // (L, gamma>=0)
  ComplexMatrix rho0;
};

struct IntegratorConfig {
  double step = 1e-3;
  int dim_cap = 64;  // 2^6; dense RK4 beyond this is a deliberate opt-in
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, long step_index)
      : std::runtime_error(what), step_index_(step_index) {}
  long step_index() const { return step_index_; }

 private:
  long step_index_;
};

/// Single-site operator embedded at `site` (1-based; bit site-1 of the basis
/// index) of an N-site register.
ComplexMatrix single_site_operator(int sites, int site,
                                   const Eigen::Matrix2cd& op);

ComplexMatrix pauli_z();
ComplexMatrix sigma_minus();

/// H = phi * J^z with J^z = sum_j sigma_j^z / 2.
ComplexMatrix field_hamiltonian(int sites, double phi);

LindbladProblem make_dephasing_problem(int sites,
                                       const std::vector<double>& rates,
                                       double phi, const ComplexMatrix& rho0);
LindbladProblem make_emission_problem(int sites, double gamma, double phi,
                                      const ComplexMatrix& rho0);

/// Default step 1e-3 * min(1/gamma_max, 1/|phi|, 1).
double default_step(double gamma_max, double phi);

/// rho_dot = -i[H, rho] + sum_a gamma_a (L_a rho L_a^dag
///                                       - {L_a^dag L_a, rho} / 2).
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladProblem& p);

/// Fixed-step classical fourth-order integration of lindblad_rhs from 0 to
/// t_final. NaN/Inf along the trajectory aborts with the step index.
ComplexMatrix integrate(const LindbladProblem& p, double t_final,
                        const IntegratorConfig& cfg);

using Propagator =
    std::function<ComplexMatrix(const ComplexMatrix& rho0, double t)>;

struct TrajectoryDeviation {
  double max_abs = 0.0;
  double worst_time = 0.0;
  Eigen::Index worst_row = 0;
  Eigen::Index worst_col = 0;
};

/// Integrates p once through the ascending sample times and reports the
/// worst entrywise |analytic - numeric| with its location.
TrajectoryDeviation compare_trajectories(const Propagator& analytic,
                                         const LindbladProblem& p,
                                         const std::vector<double>& times,
                                         const IntegratorConfig& cfg);

}  // namespace spinsense
