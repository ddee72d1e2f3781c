// Exact time propagation of the sensor density matrix under local dephasing
// (L_j = sigma_j^z) and local emission (L_j = sigma_j^-), both with the
// field Hamiltonian phi * J^z. Every map here is closed-form in t, so any
// non-negative time is evaluated exactly; there is no internal grid.
#pragma once

#include <vector>

#include "spinsense/numerics.hpp"

namespace spinsense {

struct DephasingChannel {
  std::vector<double> rates;  // gamma_j >= 0, one per site
  double phi = 0.0;           // field strength (hbar = 1)

  static DephasingChannel uniform(int sites, double gamma, double phi);
  int sites() const { return static_cast<int>(rates.size()); }
};

struct EmissionChannel {
  double gamma = 0.0;  // uniform rate; per-site emission is unsupported
  double phi = 0.0;
};

/// 2x2 restriction of a GHZ trajectory to span{|(N,0)>, |(N,N)>}. For the
/// emission channel the remaining population sits on the diagonal and is
/// returned aggregated per down-spin count n = 1..N-1.
struct ReducedGhzBlock {
  Eigen::Matrix2cd block;
  std::vector<double> diagonal_tail;
};

/// Elementwise dephasing map:
///   <k|rho(t)|l> = <k|rho(0)|l> * exp(-2t * sum_{j in k xor l} gamma_j)
///                              * exp(-i phi t (wt(l) - wt(k))).
/// Reduces to the uniform-rate exp(-2 gamma t d(k,l)) decay and preserves
/// the trace exactly.
ComplexMatrix dephasing_propagate(const ComplexMatrix& rho0,
                                  const DephasingChannel& ch, double t);

/// Superoperator solution of the emission channel: apply the N factors
/// (I + Lambda(t) L_j) with L_j[rho] = sigma_j^- rho sigma_j^+, then the
/// diagonal envelope exp(A t) rho exp(A^dag t) with
/// A|k> = [(-i phi/2 - gamma/4) s_k - N gamma/4] |k>.
ComplexMatrix emission_propagate(const ComplexMatrix& rho0,
                                 const EmissionChannel& ch, double t);

/// GHZ dephasing restricted to the two extremal basis states: diagonals 1/2,
/// off-diagonal exp(-2 N gamma t) exp(-i N phi t) / 2. Tail is empty.
ReducedGhzBlock ghz_dephasing_reduced(int sites, double gamma, double phi,
                                      double t);

/// GHZ emission block
///   [[ (1-L)^N,            (1-L)^{N/2} e^{-iN phi t} ],
///    [ (1-L)^{N/2} e^{iN phi t},  1 + L^N            ]] / 2
/// with L = Lambda(t) = 1 - e^{-gamma t}; tail populations
/// C(N,n) Lambda^n e^{(n-N) gamma t} / 2 for n = 1..N-1.
ReducedGhzBlock ghz_emission_reduced(int sites, double gamma, double phi,
                                     double t);

double binomial_coefficient(int n, int k);

}  // namespace spinsense
