#include "spinsense/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinsense {

namespace {

void check_density_input(const ComplexMatrix& rho0, int sites, double t,
                         const char* op) {
  if (t < 0.0) {
    throw std::invalid_argument(std::string(op) + ": t must be >= 0");
  }
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument(std::string(op) + ": site count out of range");
  }
  const Eigen::Index dim = Eigen::Index(1) << sites;
  if (rho0.rows() != dim || rho0.cols() != dim) {
    throw std::invalid_argument(std::string(op) +
                                ": rho0 dimension does not match 2^N");
  }
  if (!is_hermitian(rho0, kEigTol)) {
    throw std::invalid_argument(std::string(op) + ": rho0 is not Hermitian");
  }
  if (std::abs(rho0.trace().real() - 1.0) > kEigTol ||
      std::abs(rho0.trace().imag()) > kEigTol) {
    throw std::invalid_argument(std::string(op) + ": rho0 is not unit trace");
  }
}

int infer_sites(const ComplexMatrix& rho0) {
  const Eigen::Index dim = rho0.rows();
  int sites = 0;
  while ((Eigen::Index(1) << sites) < dim && sites <= kMaxSites) {
    ++sites;
  }
  return sites;
}

}  // namespace

DephasingChannel DephasingChannel::uniform(int sites, double gamma,
                                           double phi) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument("DephasingChannel: site count out of range");
  }
  return {std::vector<double>(static_cast<std::size_t>(sites), gamma), phi};
}

ComplexMatrix dephasing_propagate(const ComplexMatrix& rho0,
                                  const DephasingChannel& ch, double t) {
  const int sites = ch.sites();
  check_density_input(rho0, sites, t, "dephasing_propagate");
  for (double g : ch.rates) {
    if (g < 0.0) {
      throw std::invalid_argument(
          "dephasing_propagate: negative rates are not CPTP; signed rates "
          "live in the closed-form layer only");
    }
  }

  const std::size_t dim = std::size_t(1) << sites;

  // rate_sum[x] = sum of gamma_j over the set bits of x.
  std::vector<double> rate_sum(dim, 0.0);
  for (std::size_t x = 1; x < dim; ++x) {
    const int low = std::countr_zero(x);
    rate_sum[x] = rate_sum[x & (x - 1)] + ch.rates[static_cast<std::size_t>(low)];
  }

  ComplexMatrix out(rho0.rows(), rho0.cols());
  for (std::size_t k = 0; k < dim; ++k) {
    const int wk = popcount_index(k);
    for (std::size_t l = 0; l < dim; ++l) {
      const int wl = popcount_index(l);
      const double decay = std::exp(-2.0 * t * rate_sum[k ^ l]);
      const Complex phase =
          std::polar(1.0, -ch.phi * t * static_cast<double>(wl - wk));
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          rho0(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
          decay * phase;
    }
  }
  return out;
}

ComplexMatrix emission_propagate(const ComplexMatrix& rho0,
                                 const EmissionChannel& ch, double t) {
  const int sites = infer_sites(rho0);
  check_density_input(rho0, sites, t, "emission_propagate");
  if (ch.gamma < 0.0) {
    throw std::invalid_argument("emission_propagate: gamma must be >= 0");
  }

  const std::size_t dim = std::size_t(1) << sites;
  const double lambda = -std::expm1(-ch.gamma * t);  // 1 - e^{-gamma t}

  ComplexMatrix rho_i = rho0;
  // Each site factor reads only entries with bit j clear on both indices and
  // writes entries with bit j set on both, so in-place accumulation is safe
  // and the factors commute.
  for (int j = 0; j < sites; ++j) {
    const std::size_t bit = std::size_t(1) << j;
    for (std::size_t k = 0; k < dim; ++k) {
      if (k & bit) continue;
      for (std::size_t l = 0; l < dim; ++l) {
        if (l & bit) continue;
        rho_i(static_cast<Eigen::Index>(k | bit),
              static_cast<Eigen::Index>(l | bit)) +=
            lambda * rho_i(static_cast<Eigen::Index>(k),
                           static_cast<Eigen::Index>(l));
      }
    }
  }

  // Diagonal envelope: a_k + conj(a_l) with
  // a_k = (-i phi/2 - gamma/4) s_k - N gamma / 4.
  ComplexMatrix out(rho0.rows(), rho0.cols());
  for (std::size_t k = 0; k < dim; ++k) {
    const int sk = sites - 2 * popcount_index(k);
    for (std::size_t l = 0; l < dim; ++l) {
      const int sl = sites - 2 * popcount_index(l);
      const double re =
          -0.25 * ch.gamma * static_cast<double>(sk + sl) - 0.5 * sites * ch.gamma;
      const double im = -0.5 * ch.phi * static_cast<double>(sk - sl);
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
          rho_i(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
          std::exp(re * t) * std::polar(1.0, im * t);
    }
  }
  return out;
}

ReducedGhzBlock ghz_dephasing_reduced(int sites, double gamma, double phi,
                                      double t) {
  if (sites < 1 || gamma < 0.0 || t < 0.0) {
    throw std::invalid_argument("ghz_dephasing_reduced: invalid arguments");
  }
  const Complex off =
      0.5 * std::exp(-2.0 * sites * gamma * t) * std::polar(1.0, -sites * phi * t);
  ReducedGhzBlock r;
  r.block << Complex(0.5, 0.0), off, std::conj(off), Complex(0.5, 0.0);
  return r;
}

ReducedGhzBlock ghz_emission_reduced(int sites, double gamma, double phi,
                                     double t) {
  if (sites < 1 || gamma < 0.0 || t < 0.0) {
    throw std::invalid_argument("ghz_emission_reduced: invalid arguments");
  }
  const double x = std::exp(-gamma * t);       // (1 - Lambda)
  const double lambda = -std::expm1(-gamma * t);
  const Complex off =
      0.5 * std::pow(x, 0.5 * sites) * std::polar(1.0, -sites * phi * t);

  ReducedGhzBlock r;
  r.block << Complex(0.5 * std::pow(x, sites), 0.0), off, std::conj(off),
      Complex(0.5 * (1.0 + std::pow(lambda, sites)), 0.0);
  r.diagonal_tail.reserve(static_cast<std::size_t>(sites > 0 ? sites - 1 : 0));
  for (int n = 1; n < sites; ++n) {
    r.diagonal_tail.push_back(0.5 * binomial_coefficient(sites, n) *
                              std::pow(lambda, n) * std::pow(x, sites - n));
  }
  return r;
}

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;
  }
  return c;
}

}  // namespace spinsense
