// Dense Hermitian eigensolver wrapper, adaptive Simpson quadrature, and
// bit-basis helpers shared by the state, channel, and metric layers.
#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spinsense {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Centralized tolerances so the library and its tests agree on one value.
inline constexpr double kEigTol = 1e-10;   // eig input/contract tolerance
inline constexpr double kHermTol = 1e-12;  // strict Hermiticity of stored states
inline constexpr double kQfiEigenvalueCut = 1e-12;
inline constexpr int kMaxSites = 12;       // dense 2^N work stays desk-scale

class NonHermitianError : public std::invalid_argument {
 public:
  NonHermitianError(const std::string& what, double max_asymmetry)
      : std::invalid_argument(what), max_asymmetry_(max_asymmetry) {}
  double max_asymmetry() const { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

class EigConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_estimate,
                  double error_estimate)
      : std::runtime_error(what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}
  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

/// Largest |M(i,j) - conj(M(j,i))| over all index pairs.
double max_hermitian_asymmetry(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kEigTol);

struct EigDecomposition {
  RealVector eigenvalues;    // ascending
  ComplexMatrix eigenvectors;  // orthonormal columns, same order
};

/// Full eigensystem of a Hermitian matrix. Eigenvalues come out ascending and
/// V reconstructs the input to kEigTol. Rejects inputs whose asymmetry
/// exceeds `herm_tol` and reports the offending magnitude.
EigDecomposition hermitian_eig(const ComplexMatrix& m,
                               double herm_tol = kEigTol);

struct QuadratureResult {
  double value;
  double error_estimate;  // absolute, from interval-halving comparisons
};

/// Adaptive Simpson integration of f over [a, b] to relative tolerance
/// rel_tol. Recursion depth is capped at 40; exhausting it raises
/// QuadratureError carrying the best estimate so far.
QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double a, double b, double rel_tol);

inline int popcount_index(std::uint64_t k) {
  return std::popcount(k);
}

/// Sum of (-1)^{k_j} over the N sites encoded in the bits of k,
/// i.e. N - 2*popcount(k). Bit j of k holds the state of site j+1
/// (0 = spin up).
inline int spin_parity_sum(std::uint64_t k, int sites) {
  if (sites < 1 || sites > kMaxSites) {
    throw std::invalid_argument("spin_parity_sum: site count out of range");
  }
  if (k >> sites) {
    throw std::invalid_argument("spin_parity_sum: index outside 2^N basis");
  }
  return sites - 2 * std::popcount(k);
}

/// count points logarithmically spaced on [lo, hi], endpoints included.
std::vector<double> log_spaced(int count, double lo, double hi);

}  // namespace spinsense
