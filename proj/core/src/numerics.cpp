#include "spinsense/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spinsense {

double max_hermitian_asymmetry(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_hermitian_asymmetry(m) <= tol;
}

EigDecomposition hermitian_eig(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  const double asym = max_hermitian_asymmetry(m);
  if (asym > herm_tol) {
    throw NonHermitianError(
        "hermitian_eig: input asymmetry " + std::to_string(asym) +
            " exceeds tolerance " + std::to_string(herm_tol),
        asym);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw EigConvergenceError("hermitian_eig: solver failed to converge (dim " +
                              std::to_string(m.rows()) + ")");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  double abs_tol;
  double accumulated_error = 0.0;
  bool exhausted = false;
};

constexpr int kMaxDepth = 40;

double simpson(double fa, double fm, double fb, double h6) {
  return h6 * (fa + 4.0 * fm + fb);
}

// Classic adaptive Simpson: accept a cell when the halved estimate moves by
// less than 15x the local error budget, else recurse on both halves.
double adaptive_step(SimpsonState& st, double a, double b, double fa,
                     double fm, double fb, double whole, double eps,
                     int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = simpson(fa, flm, fm, (m - a) / 6.0);
  const double right = simpson(fm, frm, fb, (b - m) / 6.0);
  const double delta = left + right - whole;
  if (depth >= kMaxDepth) {
    st.exhausted = true;
    st.accumulated_error += std::abs(delta);
    return left + right + delta / 15.0;
  }
  // Second condition: the halved estimate moved by less than the rounding
  // floor of the cell values, so further splitting cannot help.
  const double fp_floor = 16.0 * std::numeric_limits<double>::epsilon() *
                          (std::abs(left) + std::abs(right));
  if (std::abs(delta) <= std::max(15.0 * eps, fp_floor)) {
    st.accumulated_error += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return adaptive_step(st, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
         adaptive_step(st, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

namespace {

// 128-panel composite Simpson, used only to set the absolute error budget.
double pilot_estimate(const std::function<double(double)>& f, double a,
                      double b) {
  constexpr int kPanels = 128;
  const double h = (b - a) / kPanels;
  double acc = f(a) + f(b);
  for (int i = 1; i < kPanels; ++i) {
    acc += (i % 2 == 0 ? 2.0 : 4.0) * f(a + h * i);
  }
  return acc * h / 3.0;
}

}  // namespace

QuadratureResult adaptive_quadrature(const std::function<double(double)>& f,
                                     double a, double b, double rel_tol) {
  if (!(a < b)) {
    throw std::invalid_argument("adaptive_quadrature: requires a < b");
  }
  if (!(rel_tol > 0.0) || rel_tol > 1e-2) {
    throw std::invalid_argument(
        "adaptive_quadrature: rel_tol must lie in (0, 1e-2]");
  }

  const double fa = f(a);
  const double fb = f(b);
  const double mid = 0.5 * (a + b);
  const double fm = f(mid);
  const double whole = simpson(fa, fm, fb, (b - a) / 6.0);

  // Absolute budget from the pilot magnitude; the floor keeps integrals that
  // are genuinely ~0 from demanding exact zeros.
  const double scale = std::max(std::abs(pilot_estimate(f, a, b)), 1e-300);
  const double eps = 0.5 * rel_tol * scale;

  SimpsonState st{f, eps};
  const double value = adaptive_step(st, a, b, fa, fm, fb, whole, eps, 0);
  if (!std::isfinite(value)) {
    throw QuadratureError("adaptive_quadrature: non-finite integrand", value,
                          st.accumulated_error);
  }
  if (st.exhausted) {
    throw QuadratureError(
        "adaptive_quadrature: max subdivision depth reached, error estimate " +
            std::to_string(st.accumulated_error),
        value, st.accumulated_error);
  }
  return {value, st.accumulated_error};
}

std::vector<double> log_spaced(int count, double lo, double hi) {
  if (count < 1 || !(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_spaced: need count >= 1 and 0 < lo < hi");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                           static_cast<double>(count - 1));
  }
  out.back() = hi;
  return out;
}

}  // namespace spinsense
