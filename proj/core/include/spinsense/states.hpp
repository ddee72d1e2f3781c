// Initial sensor states: GHZ, uniform product, and the single-qubit
// delta-weighted superposition, plus conversion to density matrices.
#pragma once

#include <cstdint>

#include "spinsense/numerics.hpp"

namespace spinsense {

struct PureState {
  int sites = 0;              // N
  ComplexVector amplitudes;   // length 2^N over the computational spin basis
};

struct StateKind {
  enum class Kind { Ghz, ProductPlus, SingleQubitDelta };

  Kind kind = Kind::Ghz;
  double delta = 0.0;          // SingleQubitDelta only, in [-1, 1]
  double relative_phase = 0.0; // radians applied to the |1> component

  static StateKind ghz() { return {Kind::Ghz, 0.0, 0.0}; }
  static StateKind product_plus() { return {Kind::ProductPlus, 0.0, 0.0}; }
  static StateKind single_qubit_delta(double delta, double phase = 0.0) {
    return {Kind::SingleQubitDelta, delta, phase};
  }
};

/// (|00...0> + |11...1>)/sqrt(2).
PureState ghz_state(int sites);

/// ((|0> + |1>)/sqrt(2))^{tensor N}; every amplitude is 2^{-N/2}.
PureState product_plus_state(int sites);

/// alpha|0> + beta|1> with |alpha|^2 = (1+delta)/2 and the relative phase
/// on the |1> component. delta = +-1 gives the poles |0> / |1>.
PureState single_qubit_delta_state(double delta, double relative_phase = 0.0);

PureState make_initial_state(const StateKind& kind, int sites);

/// Rank-1 projector |psi><psi|.
ComplexMatrix density_from_pure(const PureState& psi);

bool is_normalized(const PureState& psi, double tol = kHermTol);

}  // namespace spinsense
