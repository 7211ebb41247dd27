#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "kusuoka/orbits.hpp"

namespace kusuoka {

using Complex = std::complex<double>;

/// A zeta value; near_pole marks |det(I - zL)| < 1e-12, where value is left as NaN.
struct ZetaValue {
  Complex value{1.0, 0.0};
  Complex log_value{0.0, 0.0};
  bool near_pole = false;
  /// Bound on |log zeta - log value| from truncation.
  double tail_bound = 0.0;
  int terms = 0;
};

/// Rigorous tail bound dim (|z| beta)^{N+1} / ((N+1)(1 - |z| beta)) of the log-series after N terms.
double zeta_tail_bound(int dim, double abs_z_beta, int n_terms);

/// exp(sum_{n<=N} z^n tr(L^n) / n). With n_terms = 0 the length is chosen so the tail bound is below 1e-13.
ZetaValue zeta_series(const BlockOperator<double>& op, Complex z, double beta, int n_terms = 0);

/// 1 / det(I - z L) via LU of the dense complex matrix.
template <typename Scalar>
ZetaValue zeta_rational(const BlockOperator<Scalar>& op, Complex z) {
  const Matrix<Complex> a = op.dense().template cast<Complex>();
  const Matrix<Complex> m = Matrix<Complex>::Identity(a.rows(), a.cols()) - z * a;
  const Complex det = Eigen::PartialPivLU<Matrix<Complex>>(m).determinant();
  ZetaValue out;
  if (std::abs(det) < 1e-12) {
    out.near_pole = true;
    out.value = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    out.log_value = out.value;
    return out;
  }
  out.value = 1.0 / det;
  out.log_value = -std::log(det);
  return out;
}

/// det(I - z L) for the dense complex matrix.
Complex transfer_determinant(const Matrix<Complex>& l, Complex z);

/// Smallest positive real root of det(I - zL): march from 0 in steps 1/(1000 ||L||) to the
/// first sign change, then bisect.
double pole_on_axis(const BlockOperator<double>& op);

/// Euler product over the supplied orbit records.
ZetaValue zeta_euler(const std::vector<OrbitRecord>& records, Complex z, double beta, int dim);

/// Euler product over all prime orbits of period <= max_period, one value per z, streamed
/// without storing records.
std::vector<ZetaValue> zeta_euler(const PushForwardFamily& family, const Potential& v, const std::vector<Complex>& zs,
                                  int max_period, double beta, const EnumerationOptions& options = {});

/// True when every pair of tPsi_i commutes to relative precision 1e-12.
bool commuting_family(const PushForwardFamily& family);

/// Euler product grouped by letter content; exact for commuting families and memory-1 V,
/// which makes orbit data a function of the content alone.
std::vector<ZetaValue> zeta_euler_by_content(const PushForwardFamily& family, const Potential& v,
                                             const std::vector<Complex>& zs, int max_period, double beta);

/// Number of Lyndon words with the given letter counts.
double lyndon_content_count(const std::vector<int>& counts);
double log_lyndon_content_count(const std::vector<int>& counts);

/// Block operator with complex weights exp(-s V).
BlockOperator<Complex> minus_v_operator(std::shared_ptr<const PushForwardFamily> family, const Potential& v, Complex s);

/// zeta_{-V}(s) = 1 / det(I - L_{-sV}).
ZetaValue zeta_minus_v(std::shared_ptr<const PushForwardFamily> family, const Potential& v, Complex s);

/// zeta'/zeta at s, as tr((I - L)^{-1} dL/ds).
Complex zeta_minus_v_log_derivative(std::shared_ptr<const PushForwardFamily> family, const Potential& v, Complex s);

struct LineScanRow {
  double y;
  Complex det;
};

struct LineScan {
  std::vector<LineScanRow> rows;
  /// Minimum |det| over rows with |y| >= exclusion.
  double min_abs = 0.0;
  double argmin_y = 0.0;
};

/// |det(I - L_{-(1+iy)V})| over the grid.
LineScan line_scan(std::shared_ptr<const PushForwardFamily> family, const Potential& v, const std::vector<double>& ys,
                   double exclusion = 0.1);

}  // namespace kusuoka
