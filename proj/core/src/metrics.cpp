#include "spinsense/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace spinsense {

namespace {

bool is_product_state(const StateKind& s) {
  return s.kind == StateKind::Kind::ProductPlus;
}

bool is_ghz_state(const StateKind& s) { return s.kind == StateKind::Kind::Ghz; }

bool is_delta_state(const StateKind& s) {
  return s.kind == StateKind::Kind::SingleQubitDelta;
}

DephasingChannel dephasing_channel_of(const SensingScenario& sc, double phi) {
  if (sc.rates) {
    return DephasingChannel{*sc.rates, phi};
  }
  return DephasingChannel::uniform(sc.sites, sc.gamma, phi);
}

// 2x2 single-site trajectory, the building block of the product-state
// factorization. `rate` is the site's own dephasing rate.
ComplexMatrix single_site_density(Channel channel, double rate, double phi,
                                  double t) {
  const ComplexMatrix rho0 = density_from_pure(product_plus_state(1));
  if (channel == Channel::Dephasing) {
    return dephasing_propagate(rho0, DephasingChannel::uniform(1, rate, phi), t);
  }
  return emission_propagate(rho0, EmissionChannel{rate, phi}, t);
}

ComplexMatrix reduced_block_density(const SensingScenario& sc, double phi,
                                    double t) {
  const ReducedGhzBlock r =
      sc.channel == Channel::Dephasing
          ? ghz_dephasing_reduced(sc.sites, sc.gamma, phi, t)
          : ghz_emission_reduced(sc.sites, sc.gamma, phi, t);
  return ComplexMatrix(r.block);
}

// Dephasing derivative on the GHZ block, where the parity sums of the two
// basis states are +N and -N.
ComplexMatrix dphi_block_commutator(const ComplexMatrix& block, int sites,
                                   double t) {
  ComplexMatrix out(2, 2);
  const Complex i_unit(0.0, 1.0);
  out(0, 0) = Complex(0.0, 0.0);
  out(1, 1) = Complex(0.0, 0.0);
  out(0, 1) = i_unit * (0.5 * t) * (-2.0 * sites) * block(0, 1);
  out(1, 0) = i_unit * (0.5 * t) * (2.0 * sites) * block(1, 0);
  return out;
}

double qfi_of_pair(const ComplexMatrix& rho, const ComplexMatrix& drho) {
  return qfi_from_eig(hermitian_eig(rho), drho);
}

// Per-site gain contribution q_a(t)/t^2 for one factor of a product state.
double single_site_gain(Channel channel, double rate, double phi, double t) {
  const ComplexMatrix rho_t = single_site_density(channel, rate, phi, t);
  return qfi_of_pair(rho_t, dphi_rho_dephasing(rho_t, t)) / (t * t);
}

}  // namespace

void SensingScenario::validate() const {
  // The dense-matrix cap (kMaxSites) is enforced where 2^N objects are
  // actually built; closed-form and reduced-block paths take any N >= 1.
  if (sites < 1) {
    throw std::invalid_argument("SensingScenario: N must be >= 1");
  }
  if (is_delta_state(state)) {
    if (sites != 1) {
      throw std::invalid_argument(
          "SensingScenario: the delta state is defined for N = 1 only");
    }
    if (!(state.delta >= -1.0 && state.delta <= 1.0)) {
      throw std::invalid_argument("SensingScenario: delta outside [-1, 1]");
    }
  }
  if (rates) {
    if (channel != Channel::Dephasing || !is_product_state(state)) {
      throw std::invalid_argument(
          "SensingScenario: per-site rates apply to dephasing product "
          "states only");
    }
    if (static_cast<int>(rates->size()) != sites) {
      throw std::invalid_argument(
          "SensingScenario: rates array length must equal N");
    }
  }
}

double SensingScenario::min_rate() const {
  if (rates && !rates->empty()) {
    return *std::min_element(rates->begin(), rates->end());
  }
  return gamma;
}

double SensingScenario::max_rate() const {
  if (rates && !rates->empty()) {
    return *std::max_element(rates->begin(), rates->end());
  }
  return gamma;
}

double qfi(const ComplexMatrix& rho, const ComplexMatrix& drho_dphi) {
  if (!is_hermitian(rho, kEigTol)) {
    throw NonHermitianError("qfi: rho is not Hermitian",
                            max_hermitian_asymmetry(rho));
  }
  if (!is_hermitian(drho_dphi, kEigTol)) {
    throw NonHermitianError("qfi: drho/dphi is not Hermitian",
                            max_hermitian_asymmetry(drho_dphi));
  }
  if (std::abs(rho.trace().real() - 1.0) > kEigTol) {
    throw std::invalid_argument("qfi: rho must have unit trace");
  }
  if (std::abs(drho_dphi.trace()) > 1e-8) {
    throw std::invalid_argument("qfi: drho/dphi must be traceless");
  }
  return qfi_from_eig(hermitian_eig(rho), drho_dphi);
}

double qfi_from_eig(const EigDecomposition& eig, const ComplexMatrix& drho) {
  if (eig.eigenvectors.rows() != drho.rows() ||
      eig.eigenvectors.cols() != drho.cols()) {
    throw std::invalid_argument("qfi_from_eig: dimension mismatch");
  }
  const ComplexMatrix w = eig.eigenvectors.adjoint() * drho * eig.eigenvectors;
  const Eigen::Index dim = w.rows();
  double q = 0.0;
  for (Eigen::Index m = 0; m < dim; ++m) {
    for (Eigen::Index n = 0; n < dim; ++n) {
      const double denom = eig.eigenvalues(m) + eig.eigenvalues(n);
      if (denom <= kQfiEigenvalueCut) continue;
      q += std::norm(w(m, n)) / denom;
    }
  }
  return 2.0 * q;
}

ComplexMatrix dphi_rho_dephasing(const ComplexMatrix& rho_t, double t) {
  const Eigen::Index dim = rho_t.rows();
  int sites = 0;
  while ((Eigen::Index(1) << sites) < dim && sites <= kMaxSites) ++sites;
  if ((Eigen::Index(1) << sites) != dim || rho_t.cols() != dim) {
    throw std::invalid_argument("dphi_rho_dephasing: dimension is not 2^N");
  }
  const Complex i_unit(0.0, 1.0);
  ComplexMatrix out(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const int sk = spin_parity_sum(static_cast<std::uint64_t>(k), sites);
    for (Eigen::Index l = 0; l < dim; ++l) {
      const int sl = spin_parity_sum(static_cast<std::uint64_t>(l), sites);
      out(k, l) = i_unit * (0.5 * t) * static_cast<double>(sl - sk) * rho_t(k, l);
    }
  }
  return out;
}

ComplexMatrix dphi_rho_numeric(
    const std::function<ComplexMatrix(double)>& rho_at_phi, double phi,
    double h_phi) {
  if (!(h_phi >= 1e-7 && h_phi <= 1e-3)) {
    throw std::invalid_argument("dphi_rho_numeric: h_phi outside [1e-7, 1e-3]");
  }
  const ComplexMatrix d =
      (rho_at_phi(phi + h_phi) - rho_at_phi(phi - h_phi)) / (2.0 * h_phi);
  return 0.5 * (d + d.adjoint().eval());
}

ComplexMatrix dphi_rho_numeric(const SensingScenario& sc, double t,
                               double h_phi) {
  sc.validate();
  return dphi_rho_numeric(
      [&](double p) {
        SensingScenario shifted = sc;
        shifted.phi = p;
        return propagate_scenario(shifted, t);
      },
      sc.phi, h_phi);
}

double default_phi_step(double phi) { return 1e-5 * std::max(1.0, std::abs(phi)); }

double metrological_gain(double q, double t) {
  if (!(t > 0.0)) {
    throw std::invalid_argument(
        "metrological_gain: t must be positive; the t = 0 limit is provided "
        "by the scenario gain evaluators");
  }
  return q / (t * t);
}

double initial_gain_limit(const PureState& psi) {
  if (!is_normalized(psi)) {
    throw std::invalid_argument("initial_gain_limit: state not normalized");
  }
  double mean = 0.0;
  double second = 0.0;
  for (Eigen::Index k = 0; k < psi.amplitudes.size(); ++k) {
    const double w = std::norm(psi.amplitudes(k));
    const double jz =
        0.5 * spin_parity_sum(static_cast<std::uint64_t>(k), psi.sites);
    mean += w * jz;
    second += w * jz * jz;
  }
  return 4.0 * (second - mean * mean);
}

ComplexMatrix propagate_scenario(const SensingScenario& sc, double t) {
  sc.validate();
  const ComplexMatrix rho0 =
      density_from_pure(make_initial_state(sc.state, sc.sites));
  if (sc.channel == Channel::Dephasing) {
    return dephasing_propagate(rho0, dephasing_channel_of(sc, sc.phi), t);
  }
  return emission_propagate(rho0, EmissionChannel{sc.gamma, sc.phi}, t);
}

double gain_numeric(const SensingScenario& sc, double t) {
  sc.validate();
  if (t == 0.0) {
    return initial_gain_limit(make_initial_state(sc.state, sc.sites));
  }
  const ComplexMatrix rho_t = propagate_scenario(sc, t);
  // Both exact solutions carry phi only through the diagonal phase envelope
  // e^{At}, so the commutator derivative applies to the emission trajectory
  // as well; dphi_rho_numeric cross-checks this in the tests.
  const ComplexMatrix drho = dphi_rho_dephasing(rho_t, t);
  return qfi(rho_t, drho) / (t * t);
}

double gain_fast(const SensingScenario& sc, double t) {
  sc.validate();
  if (t == 0.0) {
    // Scenario-level t -> 0 limits, valid for any N: 4 Var(J^z) of the
    // initial state.
    if (is_ghz_state(sc.state)) {
      return static_cast<double>(sc.sites) * sc.sites;
    }
    if (is_product_state(sc.state)) {
      return static_cast<double>(sc.sites);
    }
    return 1.0 - sc.state.delta * sc.state.delta;
  }
  if (is_ghz_state(sc.state)) {
    const ComplexMatrix block = reduced_block_density(sc, sc.phi, t);
    const ComplexMatrix dblock = dphi_block_commutator(block, sc.sites, t);
    // Eigenvectors outside span{|(N,0)>, |(N,N)>} annihilate drho, so the
    // block eigensystem carries the whole QFI sum.
    return qfi_of_pair(block, dblock) / (t * t);
  }
  if (is_product_state(sc.state)) {
    double g = 0.0;
    if (sc.rates) {
      for (double rate : *sc.rates) {
        g += single_site_gain(sc.channel, rate, sc.phi, t);
      }
    } else {
      g = sc.sites * single_site_gain(sc.channel, sc.gamma, sc.phi, t);
    }
    return g;
  }
  return gain_numeric(sc, t);
}

double integrated_gain(const SensingScenario& sc, double rel_tol) {
  sc.validate();
  if (!(sc.min_rate() > 0.0)) {
    throw std::invalid_argument(
        "integrated_gain: requires gamma > 0 (the integral has no finite "
        "horizon otherwise)");
  }
  const double t_max = 40.0 / slowest_decay_rate(sc);
  const auto result = adaptive_quadrature(
      [&](double t) { return gain_fast(sc, t); }, 0.0, t_max, rel_tol);
  return result.value;
}

bool closed_form_covered(const SensingScenario& sc) {
  if (sc.channel == Channel::Dephasing) {
    return true;  // GHZ, product (incl. per-site rates), delta
  }
  return is_ghz_state(sc.state) || is_product_state(sc.state);
}

double closed_form_gain(const SensingScenario& sc, double t) {
  sc.validate();
  const double n = sc.sites;
  if (sc.channel == Channel::Dephasing) {
    if (is_ghz_state(sc.state)) {
      return n * n * std::exp(-4.0 * n * sc.gamma * t);
    }
    if (is_product_state(sc.state)) {
      if (sc.rates) {
        double g = 0.0;
        for (double rate : *sc.rates) g += std::exp(-4.0 * rate * t);
        return g;
      }
      return n * std::exp(-4.0 * sc.gamma * t);
    }
    const double d = sc.state.delta;
    return (1.0 - d * d) * std::exp(-4.0 * sc.gamma * t);
  }
  if (is_ghz_state(sc.state)) {
    const double x = std::exp(-sc.gamma * t);
    const double lambda = 1.0 - x;
    return 2.0 * n * n * std::pow(x, sc.sites) /
           (1.0 + std::pow(lambda, sc.sites) + std::pow(x, sc.sites));
  }
  if (is_product_state(sc.state)) {
    return n * std::exp(-sc.gamma * t);
  }
  throw std::domain_error(
      "closed_form_gain: no closed form for this scenario family; use the "
      "numeric pipeline");
}

ImgReference closed_form_img(const SensingScenario& sc) {
  sc.validate();
  if (!(sc.min_rate() > 0.0)) {
    throw std::invalid_argument("closed_form_img: requires gamma > 0");
  }
  const double n = sc.sites;
  ImgReference out;
  if (sc.channel == Channel::Dephasing) {
    if (is_ghz_state(sc.state)) {
      out.value = n / (4.0 * sc.gamma);
    } else if (is_product_state(sc.state)) {
      if (sc.rates) {
        out.value = 0.0;
        for (double rate : *sc.rates) out.value += 1.0 / (4.0 * rate);
      } else {
        out.value = n / (4.0 * sc.gamma);
      }
    } else {
      const double d = sc.state.delta;
      out.value = (1.0 - d * d) / (4.0 * sc.gamma);
    }
    return out;
  }
  if (is_ghz_state(sc.state)) {
    // x = e^{-gamma t} substitution removes the infinite horizon.
    const int sites = sc.sites;
    const auto integrand = [sites](double x) {
      return std::pow(x, sites - 1) /
             (1.0 + std::pow(1.0 - x, sites) + std::pow(x, sites));
    };
    const auto q = adaptive_quadrature(integrand, 0.0, 1.0, 1e-10);
    out.value = 2.0 * n * n * q.value / sc.gamma;
    out.upper_bound = 2.0 * n * std::log(2.0) / sc.gamma;
    out.asymptotic_estimate = n / sc.gamma;
    return out;
  }
  if (is_product_state(sc.state)) {
    out.value = n / sc.gamma;
    return out;
  }
  throw std::domain_error(
      "closed_form_img: no closed form for this scenario family; use "
      "integrated_gain");
}

CrossoverResult gain_ratio_crossover(int sites, double gamma, Channel channel) {
  if (sites < 2) {
    throw std::invalid_argument(
        "gain_ratio_crossover: requires N >= 2 (the ratio is identically 1 "
        "at N = 1)");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("gain_ratio_crossover: requires gamma > 0");
  }
  SensingScenario ent{sites, channel, StateKind::ghz(), gamma, std::nullopt, 1.0};
  SensingScenario sep{sites, channel, StateKind::product_plus(), gamma,
                      std::nullopt, 1.0};
  const auto diff = [&](double t) {
    return closed_form_gain(ent, t) - closed_form_gain(sep, t);
  };

  const double reference =
      channel == Channel::Dephasing
          ? std::log(static_cast<double>(sites)) / (4.0 * (sites - 1) * gamma)
          : std::log(static_cast<double>(sites)) / ((sites - 1) * gamma);

  double lo = 1e-6 / gamma;
  double hi = 10.0 * reference;
  if (!(diff(lo) > 0.0)) {
    lo = 0.0;  // entangled advantage already spent at the left bracket edge
  }
  if (!(diff(hi) < 0.0)) {
    throw std::runtime_error(
        "gain_ratio_crossover: no sign change inside the bracket");
  }
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (diff(mid) > 0.0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), reference};
}

double two_qubit_concurrence(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("two_qubit_concurrence: needs a 4x4 matrix");
  }
  if (!is_hermitian(rho, kEigTol) ||
      std::abs(rho.trace().real() - 1.0) > kEigTol) {
    throw std::invalid_argument(
        "two_qubit_concurrence: not a density matrix");
  }
  Eigen::Matrix2cd sy;
  const Complex i_unit(0.0, 1.0);
  sy << 0.0, -i_unit, i_unit, 0.0;
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          yy(2 * a + b, 2 * c + d) = sy(a, c) * sy(b, d);

  const Eigen::Matrix4cd r = rho * yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(r, false);
  std::array<double, 4> roots{};
  for (int i = 0; i < 4; ++i) {
    roots[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

double slowest_decay_rate(const SensingScenario& sc) {
  sc.validate();
  if (!(sc.min_rate() > 0.0)) {
    throw std::invalid_argument("slowest_decay_rate: requires gamma > 0");
  }
  if (sc.channel == Channel::Dephasing) {
    if (is_ghz_state(sc.state)) return 4.0 * sc.sites * sc.gamma;
    return 4.0 * sc.min_rate();
  }
  if (is_ghz_state(sc.state)) return sc.sites * sc.gamma;
  return sc.gamma;
}

std::vector<double> auto_time_grid(const SensingScenario& sc, int count) {
  const double r_min = slowest_decay_rate(sc);
  const double gamma_eff = sc.min_rate();
  return log_spaced(count, 1e-3 / gamma_eff, 40.0 / r_min);
}

GainCurve compute_gain_curve(const SensingScenario& sc,
                             const std::vector<double>& times,
                             double rel_tol) {
  sc.validate();
  if (times.empty()) {
    throw std::invalid_argument("compute_gain_curve: empty time grid");
  }
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw std::invalid_argument(
        "compute_gain_curve: times must be ascending and non-negative");
  }

  const bool covered = closed_form_covered(sc);
  GainCurve curve;
  curve.times = times;
  curve.qfi.reserve(times.size());
  curve.gain.reserve(times.size());
  curve.img_cumulative.reserve(times.size());
  if (covered) curve.closed_form_gain.reserve(times.size());

  const auto integrand = [&](double t) { return gain_fast(sc, t); };
  double cumulative = 0.0;
  double t_prev = 0.0;
  for (double t : times) {
    const double g = gain_fast(sc, t);
    curve.gain.push_back(g);
    curve.qfi.push_back(g * t * t);
    if (t > t_prev) {
      cumulative += adaptive_quadrature(integrand, t_prev, t, rel_tol).value;
      t_prev = t;
    }
    curve.img_cumulative.push_back(cumulative);
    if (covered) curve.closed_form_gain.push_back(closed_form_gain(sc, t));
  }
  return curve;
}

}  // namespace spinsense
