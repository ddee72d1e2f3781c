#include "spinsense/states.hpp"

#include <cmath>
#include <stdexcept>

namespace spinsense {

namespace {

void check_sites(int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument("state construction: N must lie in [1, " +
                                std::to_string(kMaxSites) + "]");
  }
}

}  // namespace

PureState ghz_state(int sites) {
  check_sites(sites);
  const Eigen::Index dim = Eigen::Index(1) << sites;
  ComplexVector amp = ComplexVector::Zero(dim);
  const double w = 1.0 / std::sqrt(2.0);
  amp(0) = w;
  amp(dim - 1) = w;
  return {sites, std::move(amp)};
}

PureState product_plus_state(int sites) {
  check_sites(sites);
  const Eigen::Index dim = Eigen::Index(1) << sites;
  const double w = std::pow(2.0, -0.5 * sites);
  return {sites, ComplexVector::Constant(dim, Complex(w, 0.0))};
}

PureState single_qubit_delta_state(double delta, double relative_phase) {
  if (!(delta >= -1.0 && delta <= 1.0)) {
    throw std::invalid_argument(
        "single_qubit_delta_state: delta must lie in [-1, 1]");
  }
  ComplexVector amp(2);
  amp(0) = std::sqrt(0.5 * (1.0 + delta));
  amp(1) = std::polar(std::sqrt(0.5 * (1.0 - delta)), relative_phase);
  return {1, std::move(amp)};
}

PureState make_initial_state(const StateKind& kind, int sites) {
  switch (kind.kind) {
    case StateKind::Kind::Ghz:
      return ghz_state(sites);
    case StateKind::Kind::ProductPlus:
      return product_plus_state(sites);
    case StateKind::Kind::SingleQubitDelta:
      if (sites != 1) {
        throw std::invalid_argument(
            "single-qubit delta state is defined for N = 1 only");
      }
      return single_qubit_delta_state(kind.delta, kind.relative_phase);
  }
  throw std::logic_error("make_initial_state: unknown state kind");
}

ComplexMatrix density_from_pure(const PureState& psi) {
  if (!is_normalized(psi)) {
    throw std::invalid_argument("density_from_pure: state is not normalized");
  }
  return psi.amplitudes * psi.amplitudes.adjoint();
}

bool is_normalized(const PureState& psi, double tol) {
  if (psi.sites < 1 || psi.amplitudes.size() != (Eigen::Index(1) << psi.sites)) {
    return false;
  }
  return std::abs(psi.amplitudes.squaredNorm() - 1.0) <= tol;
}

}  // namespace spinsense
