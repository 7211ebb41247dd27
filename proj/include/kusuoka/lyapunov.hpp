#pragma once

#include <span>

#include "kusuoka/exterior_algebra.hpp"
#include "kusuoka/symbolic.hpp"

namespace kusuoka {

/// H^l(x) mu^{1/2} as Q * diag(exp(log_d)) * U with Q orthogonal and U unit upper triangular,
/// where H^l(x) = P_{x_0} ... P_{x_{l-1}}.
struct CocycleState {
  int l = 0;
  MatrixXd q;
  VectorXd log_d;
  MatrixXd u;
  bool reduced_rank = false;
};

CocycleState cocycle_state(const PushForwardFamily& family, const MatrixXd& mu_total, std::span<const Symbol> word,
                           int l);

struct LyapunovEstimate {
  /// [H^l mu tH^l]^{1/(2l)}.
  MatrixXd lambda;
  /// Eigenvalues of lambda, descending.
  VectorXd eigenvalues;
  /// Log singular values of H^l mu^{1/2}, descending.
  VectorXd log_singular;
  /// (e_1 - e_2) / e_1 for the two largest eigenvalues; 1 when the form space is one-dimensional.
  double gap = 1.0;
  bool reduced_rank = false;
};

LyapunovEstimate lyap_matrix(const PushForwardFamily& family, const MatrixXd& mu_total, std::span<const Symbol> word,
                             int l);

struct OseledetsEstimate {
  /// H^l mu tH^l normalized to unit HS norm.
  MatrixXd projection;
  /// ||P^2 - P||_HS with P the trace-normalized projection.
  double idempotency_defect = 0.0;
  /// sigma_2^2 / sigma_1^2; 0 at rank one.
  double rank_ratio = 0.0;
  double gap = 1.0;
};

OseledetsEstimate oseledets_projection(const PushForwardFamily& family, const MatrixXd& mu_total,
                                       std::span<const Symbol> word, int l);

/// Angle 2 asin(||A/||A|| - B/||B|| || / 2) between two nonzero matrices in the HS geometry.
double hs_angle(const MatrixXd& a, const MatrixXd& b);

}  // namespace kusuoka
