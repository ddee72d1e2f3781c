// Quantum Fisher information and the gain quantities built on it:
// metrological gain G(t) = Q(t)/t^2, its time integral (IMG), closed-form
// references for the covered scenario families, the entangled-vs-separable
// crossover, and the two-qubit concurrence check.
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "spinsense/channels.hpp"
#include "spinsense/states.hpp"

namespace spinsense {

enum class Channel { Dephasing, Emission };

struct SensingScenario {
  int sites = 1;
  Channel channel = Channel::Dephasing;
  StateKind state = StateKind::ghz();
  double gamma = 0.0;  // uniform rate; signed values only reach closed forms
  std::optional<std::vector<double>> rates;  // per-site dephasing, product state
  double phi = 1.0;

  void validate() const;
  double min_rate() const;  // slowest per-site rate (gamma when uniform)
  double max_rate() const;
};

struct GainCurve {
  std::vector<double> times;
  std::vector<double> qfi;
  std::vector<double> gain;
  std::vector<double> img_cumulative;      // integral of gain from 0 to t_i
  std::vector<double> closed_form_gain;    // empty when the family is uncovered
};

/// Q = 2 sum_{m,n} |<psi_m| drho |psi_n>|^2 / (lambda_m + lambda_n) over the
/// eigensystem of rho; pairs with lambda_m + lambda_n <= 1e-12 are skipped.
double qfi(const ComplexMatrix& rho, const ComplexMatrix& drho_dphi);

/// Same sum evaluated on a precomputed eigensystem; no unit-trace
/// requirement, so invariant-subspace restrictions can reuse it.
double qfi_from_eig(const EigDecomposition& eig, const ComplexMatrix& drho);

/// Field derivative d rho/d phi = (i t / 2) [rho, sum_j sigma_j^z], i.e.
/// entry (k,l) -> (i t / 2)(s_l - s_k) rho(k,l). Exact for any trajectory
/// whose phi dependence sits in the e^{At} phase envelope, which covers
/// both channels here; named for the dephasing case where the commutator
/// form is usually quoted.
ComplexMatrix dphi_rho_dephasing(const ComplexMatrix& rho_t, double t);

/// Central difference (rho(phi+h) - rho(phi-h)) / 2h of a density-matrix
/// family; the result is exactly hermitized. Used to cross-check the
/// commutator derivative, not in the production pipelines.
ComplexMatrix dphi_rho_numeric(
    const std::function<ComplexMatrix(double)>& rho_at_phi, double phi,
    double h_phi);

/// Scenario wrapper around the stencil above.
ComplexMatrix dphi_rho_numeric(const SensingScenario& sc, double t,
                               double h_phi);

double default_phi_step(double phi);

/// G = Q / t^2, t > 0. The t = 0 limit is scenario information and lives in
/// the gain evaluators below.
double metrological_gain(double q, double t);

/// lim_{t->0+} Q(t)/t^2 = 4 Var_psi(J^z) for a pure initial state.
double initial_gain_limit(const PureState& psi);

/// Full dense pipeline: propagate 2^N x 2^N, differentiate, eigendecompose,
/// Q/t^2. This is the path the verification suites drive.
double gain_numeric(const SensingScenario& sc, double t);

/// Same quantity through the scenario's cheapest exact representation:
/// the 2x2 GHZ block, or the per-site factorization for product states.
/// Falls back to the dense pipeline when no reduction applies.
double gain_fast(const SensingScenario& sc, double t);

/// Integral of the gain over [0, 40/r_min] by adaptive quadrature; the
/// dropped tail is below 1e-15 of the value by the exponential envelope.
double integrated_gain(const SensingScenario& sc, double rel_tol);

bool closed_form_covered(const SensingScenario& sc);

/// Closed-form G(t) for the covered families (signed gamma allowed):
///   dephasing GHZ        N^2 exp(-4 N gamma t)
///   dephasing product    N exp(-4 gamma t), or sum_a exp(-4 gamma_a t)
///   dephasing delta      (1 - delta^2) exp(-4 gamma t)
///   emission GHZ         2 N^2 e^{-N g t} / (1 + (1 - e^{-g t})^N + e^{-N g t})
///   emission product     N exp(-gamma t)
/// Uncovered families raise domain_error pointing at the numeric pipeline.
double closed_form_gain(const SensingScenario& sc, double t);

struct ImgReference {
  double value = 0.0;
  // Emission GHZ only: 2 N ln2 / gamma, which is also the large-N value.
  std::optional<double> upper_bound;
  // Emission GHZ only: N / gamma from the asymptotic decay of the gain.
  std::optional<double> asymptotic_estimate;
};

/// Closed-form IMG. The emission GHZ value is the x = e^{-gamma t}
/// substitution integral evaluated by quadrature; everything else is exact.
ImgReference closed_form_img(const SensingScenario& sc);

struct CrossoverResult {
  double t_star;             // first time with G_ent <= G_sep, by bisection
  double analytic_reference; // ln N / (4 (N-1) gamma), or the emission window
};

CrossoverResult gain_ratio_crossover(int sites, double gamma, Channel channel);

/// Wootters concurrence of a two-qubit density matrix.
double two_qubit_concurrence(const ComplexMatrix& rho);

/// Slowest closed-form decay rate of the scenario (sets the IMG horizon).
double slowest_decay_rate(const SensingScenario& sc);

std::vector<double> auto_time_grid(const SensingScenario& sc, int count = 200);

/// Full-density propagation of the scenario's initial state to time t.
ComplexMatrix propagate_scenario(const SensingScenario& sc, double t);

GainCurve compute_gain_curve(const SensingScenario& sc,
                             const std::vector<double>& times,
                             double rel_tol = 1e-9);

}  // namespace spinsense
