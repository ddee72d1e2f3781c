#include "spinsense/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace spinsense {

namespace {

void check_problem(const LindbladProblem& p) {
  const Eigen::Index dim = p.rho0.rows();
  if (dim < 1 || p.rho0.cols() != dim) {
    throw std::invalid_argument("LindbladProblem: rho0 must be square");
  }
  if (p.hamiltonian.rows() != dim || p.hamiltonian.cols() != dim) {
    throw std::invalid_argument("LindbladProblem: H/rho0 dimension mismatch");
  }
  if (!is_hermitian(p.hamiltonian, kHermTol)) {
    throw std::invalid_argument("LindbladProblem: H is not Hermitian");
  }
  if (!is_hermitian(p.rho0, kEigTol) ||
      std::abs(p.rho0.trace().real() - 1.0) > kEigTol) {
    throw std::invalid_argument(
        "LindbladProblem: rho0 must be Hermitian with unit trace");
  }
  for (const auto& [l, gamma] : p.dissipators) {
    if (l.rows() != dim || l.cols() != dim) {
      throw std::invalid_argument(
          "LindbladProblem: dissipator dimension mismatch");
    }
    if (gamma < 0.0) {
      throw std::invalid_argument(
          "LindbladProblem: negative rates are not a CPTP map");
    }
  }
}

double recommended_max_step(const LindbladProblem& p) {
  double scale = p.hamiltonian.norm();
  for (const auto& [l, gamma] : p.dissipators) {
    scale = std::max(scale, gamma * l.squaredNorm());
  }
  return scale > 0.0 ? 1e-2 / scale : std::numeric_limits<double>::infinity();
}

// Dissipator operators with their adjoint products computed once per
// problem; the RK4 loop evaluates the right-hand side four times per step.
struct PreparedOps {
  std::vector<ComplexMatrix> l, l_dag, l_dag_l;
  std::vector<double> gamma;
};

PreparedOps prepare(const LindbladProblem& p) {
  PreparedOps ops;
  for (const auto& [l, gamma] : p.dissipators) {
    if (gamma == 0.0) continue;
    ops.l.push_back(l);
    ops.l_dag.push_back(l.adjoint());
    ops.l_dag_l.push_back(l.adjoint() * l);
    ops.gamma.push_back(gamma);
  }
  return ops;
}

ComplexMatrix rhs_prepared(const ComplexMatrix& rho, const ComplexMatrix& h,
                           const PreparedOps& ops) {
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix out = -i_unit * (h * rho - rho * h);
  for (std::size_t a = 0; a < ops.l.size(); ++a) {
    out += ops.gamma[a] *
           (ops.l[a] * rho * ops.l_dag[a] -
            0.5 * (ops.l_dag_l[a] * rho + rho * ops.l_dag_l[a]));
  }
  return out;
}

ComplexMatrix rk4_step(const ComplexMatrix& rho, double h_step,
                       const ComplexMatrix& h, const PreparedOps& ops) {
  const ComplexMatrix k1 = rhs_prepared(rho, h, ops);
  const ComplexMatrix k2 = rhs_prepared(rho + 0.5 * h_step * k1, h, ops);
  const ComplexMatrix k3 = rhs_prepared(rho + 0.5 * h_step * k2, h, ops);
  const ComplexMatrix k4 = rhs_prepared(rho + h_step * k3, h, ops);
  return rho + (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Advances rho in place from t_from to t_to in steps of at most cfg.step.
void advance(ComplexMatrix& rho, double t_from, double t_to,
             const IntegratorConfig& cfg, const ComplexMatrix& h,
             const PreparedOps& ops, long& step_index) {
  const double span = t_to - t_from;
  if (span <= 0.0) return;
  const long steps = std::max<long>(1, static_cast<long>(std::ceil(span / cfg.step)));
  const double h_step = span / static_cast<double>(steps);
  for (long s = 0; s < steps; ++s) {
    rho = rk4_step(rho, h_step, h, ops);
    ++step_index;
    if (!rho.allFinite()) {
      throw IntegrationError(
          "integrate: non-finite density matrix at step " +
              std::to_string(step_index),
          step_index);
    }
  }
}

}  // namespace

ComplexMatrix single_site_operator(int sites, int site,
                                   const Eigen::Matrix2cd& op) {
  if (sites < 1 || sites > kMaxSites || site < 1 || site > sites) {
    throw std::invalid_argument("single_site_operator: bad site index");
  }
  const std::size_t dim = std::size_t(1) << sites;
  const std::size_t bit = std::size_t(1) << (site - 1);
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const std::size_t rest = k & ~bit;
    const int kj = (k & bit) ? 1 : 0;
    for (int lj = 0; lj < 2; ++lj) {
      const Complex v = op(kj, lj);
      if (v == Complex(0.0, 0.0)) continue;
      const std::size_t l = rest | (lj ? bit : 0u);
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = v;
    }
  }
  return m;
}

ComplexMatrix pauli_z() {
  Eigen::Matrix2cd z;
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

ComplexMatrix sigma_minus() {
  Eigen::Matrix2cd m;
  m << 0.0, 0.0, 1.0, 0.0;  // |1><0|
  return m;
}

ComplexMatrix field_hamiltonian(int sites, double phi) {
  const Eigen::Index dim = Eigen::Index(1) << sites;
  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  const Eigen::Matrix2cd z = 0.5 * pauli_z();
  for (int j = 1; j <= sites; ++j) {
    h += single_site_operator(sites, j, z);
  }
  return phi * h;
}

LindbladProblem make_dephasing_problem(int sites,
                                       const std::vector<double>& rates,
                                       double phi, const ComplexMatrix& rho0) {
  if (static_cast<int>(rates.size()) != sites) {
    throw std::invalid_argument("make_dephasing_problem: rates/site mismatch");
  }
  LindbladProblem p;
  p.hamiltonian = field_hamiltonian(sites, phi);
  const Eigen::Matrix2cd z = pauli_z();
  for (int j = 1; j <= sites; ++j) {
    p.dissipators.emplace_back(single_site_operator(sites, j, z),
                               rates[static_cast<std::size_t>(j - 1)]);
  }
  p.rho0 = rho0;
  return p;
}

LindbladProblem make_emission_problem(int sites, double gamma, double phi,
                                      const ComplexMatrix& rho0) {
  LindbladProblem p;
  p.hamiltonian = field_hamiltonian(sites, phi);
  const Eigen::Matrix2cd sm = sigma_minus();
  for (int j = 1; j <= sites; ++j) {
    p.dissipators.emplace_back(single_site_operator(sites, j, sm), gamma);
  }
  p.rho0 = rho0;
  return p;
}

double default_step(double gamma_max, double phi) {
  double inv = 1.0;
  if (gamma_max > 0.0) inv = std::min(inv, 1.0 / gamma_max);
  if (phi != 0.0) inv = std::min(inv, 1.0 / std::abs(phi));
  return 1e-3 * inv;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, const LindbladProblem& p) {
  if (rho.rows() != p.hamiltonian.rows() || rho.cols() != p.hamiltonian.cols()) {
    throw std::invalid_argument("lindblad_rhs: dimension mismatch");
  }
  for (const auto& [l, gamma] : p.dissipators) {
    if (l.rows() != rho.rows() || l.cols() != rho.cols()) {
      throw std::invalid_argument("lindblad_rhs: dissipator dimension mismatch");
    }
  }
  return rhs_prepared(rho, p.hamiltonian, prepare(p));
}

ComplexMatrix integrate(const LindbladProblem& p, double t_final,
                        const IntegratorConfig& cfg) {
  check_problem(p);
  if (t_final < 0.0) {
    throw std::invalid_argument("integrate: t_final must be >= 0");
  }
  if (!(cfg.step > 0.0)) {
    throw std::invalid_argument("integrate: step must be positive");
  }
  if (p.rho0.rows() > cfg.dim_cap) {
    throw std::invalid_argument(
        "integrate: dimension exceeds the configured oracle cap");
  }
  if (cfg.step > recommended_max_step(p)) {
    std::cerr << "warning: integrator step " << cfg.step
              << " exceeds the recommended bound "
              << recommended_max_step(p) << "\n";
  }
  const PreparedOps ops = prepare(p);
  ComplexMatrix rho = p.rho0;
  long step_index = 0;
  advance(rho, 0.0, t_final, cfg, p.hamiltonian, ops, step_index);
  return rho;
}

TrajectoryDeviation compare_trajectories(const Propagator& analytic,
                                         const LindbladProblem& p,
                                         const std::vector<double>& times,
                                         const IntegratorConfig& cfg) {
  check_problem(p);
  if (!(cfg.step > 0.0)) {
    throw std::invalid_argument("compare_trajectories: step must be positive");
  }
  if (p.rho0.rows() > cfg.dim_cap) {
    throw std::invalid_argument(
        "compare_trajectories: dimension exceeds the configured oracle cap");
  }
  if (!std::is_sorted(times.begin(), times.end()) ||
      (!times.empty() && times.front() < 0.0)) {
    throw std::invalid_argument(
        "compare_trajectories: times must be ascending and non-negative");
  }
  {
    const ComplexMatrix probe = analytic(p.rho0, 0.0);
    if (probe.rows() != p.rho0.rows() || probe.cols() != p.rho0.cols()) {
      throw std::invalid_argument(
          "compare_trajectories: propagator dimension mismatch");
    }
  }

  const PreparedOps ops = prepare(p);
  TrajectoryDeviation dev;
  ComplexMatrix rho = p.rho0;
  double t_prev = 0.0;
  long step_index = 0;
  for (double t : times) {
    advance(rho, t_prev, t, cfg, p.hamiltonian, ops, step_index);
    t_prev = t;
    const ComplexMatrix ref = analytic(p.rho0, t);
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      for (Eigen::Index c = 0; c < rho.cols(); ++c) {
        const double d = std::abs(ref(r, c) - rho(r, c));
        if (d > dev.max_abs) {
          dev.max_abs = d;
          dev.worst_time = t;
          dev.worst_row = r;
          dev.worst_col = c;
        }
      }
    }
  }
  return dev;
}

}  // namespace spinsense
