#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "kusuoka/block_operator.hpp"

namespace kusuoka {

struct PerronOptions {
  double tol = 1e-12;
  int max_iter = 200000;
  bool estimate_diameter = true;
  int diameter_directions = 8;
  std::uint64_t seed = 1;
};

struct SpectralResult {
  double beta = 0.0;
  std::vector<MatrixXd> Q;
  std::vector<MatrixXd> mu;
  int iterations = 0;
  int adjoint_iterations = 0;
  double residual_theta = 0.0;
  /// Cone diameter of L^k with k the potential memory; infinite if some image leaves the open cone.
  double cone_diameter = 0.0;
  double right_residual = 0.0;
  double left_residual = 0.0;
};

/// Cone power iteration for the Perron eigenvalue and both eigenvectors.
SpectralResult perron(const BlockOperator<double>& op, const PerronOptions& options = {});

double pressure(const IfsSpec& ifs, int q, const Potential& v, const PerronOptions& options = {});
double pressure(std::shared_ptr<const PushForwardFamily> family, const Potential& v, const PerronOptions& options = {});

/// Unique c with P(-c vhat) = 0, by bisection on the strictly decreasing map c -> P(-c vhat).
double pressure_root(std::shared_ptr<const PushForwardFamily> family, const Potential& vhat, double tol = 1e-11);
double pressure_root(const IfsSpec& ifs, int q, const Potential& vhat, double tol = 1e-11);

/// Largest pairwise cone distance among images of rank-one single-state generators under op^power.
double estimate_cone_diameter(const BlockOperator<double>& op, int power, int random_directions, std::uint64_t seed);

/// op^power applied to a stacked vector.
VectorXd apply_power(const BlockOperator<double>& op, VectorXd x, int power);

/// Eigenvalues of the dense matrix sorted by modulus, largest first.
std::vector<std::complex<double>> dense_spectrum(const BlockOperator<double>& op);

/// Cylinder masses of the matrix-valued Gibbs measure and its scalar Kusuoka shadow.
class CylinderMeasure {
 public:
  CylinderMeasure(std::shared_ptr<const PushForwardFamily> family, Potential v, SpectralResult spectral);

  const PushForwardFamily& family() const { return *family_; }
  std::shared_ptr<const PushForwardFamily> family_ptr() const { return family_; }
  const Potential& potential() const { return v_; }
  const SpectralResult& spectral() const { return spectral_; }
  int memory() const { return v_.memory(); }
  int symbols() const { return family_->symbols(); }
  double beta() const { return spectral_.beta; }

  /// State index of the first k-1 symbols.
  int state_of(std::span<const Symbol> w) const;
  const MatrixXd& Q_state(int u) const { return spectral_.Q.at(u); }

  MatrixXd mu(std::span<const Symbol> w) const;
  double kappa(std::span<const Symbol> w) const;
  MatrixXd mu_total() const;

  /// Cylinder mass of w as a scaled congruence: exp(log_scale) * P mu_tail P^T.
  struct Factor {
    MatrixXd p;
    double log_scale;
    int tail_state;
  };
  Factor factor(std::span<const Symbol> w) const;

 private:
  std::shared_ptr<const PushForwardFamily> family_;
  Potential v_;
  SpectralResult spectral_;
  double log_beta_;
};

CylinderMeasure kusuoka_measure(const IfsSpec& ifs, int q, const Potential& v, const PerronOptions& options = {});

/// Ancestral sample x_0 .. x_{n-1} from the Kusuoka measure.
Word sample_kappa(const CylinderMeasure& cm, int n, std::uint64_t seed);

/// kappa([i c_0 .. c_{l-1}]) / kappa([c_0 .. c_{l-1}]).
double conditional_prob(const CylinderMeasure& cm, Symbol i, std::span<const Symbol> context, int depth);

/// conditional_prob for every leading symbol at once.
std::vector<double> conditional_probs(const CylinderMeasure& cm, std::span<const Symbol> context, int depth);

/// The same conditional probability from the density field M at depth l.
double conditional_prob_density(const CylinderMeasure& cm, Symbol i, std::span<const Symbol> context, int depth);

/// tPsi_{w_0} o ... o tPsi_{w_{l-1}}(mu(Sigma)) normalized so (Q_state(w), M)_HS = 1.
MatrixXd density_M(const CylinderMeasure& cm, std::span<const Symbol> prefix);

/// HS distance between density_M at prefix lengths l and l-1.
double density_cauchy_defect(const CylinderMeasure& cm, std::span<const Symbol> prefix);

/// Ratio bounds of mu([w]) against exp(V^l) / beta^l * tPsi_w(mu(Sigma)); memory-1 potentials.
std::pair<double, double> gibbs_ratio_bounds(const CylinderMeasure& cm, std::span<const Symbol> w);

struct VariationalEstimate {
  double entropy = 0.0;
  double energy = 0.0;
  double log_term = 0.0;
  double value = 0.0;
  double se_entropy = 0.0;
  double se_energy = 0.0;
  double se_log_term = 0.0;
  /// Standard error treating the three terms as separate Monte-Carlo integrals.
  double se_combined = 0.0;
  /// Sample standard error of the per-sample sum.
  double se_value = 0.0;
  long samples = 0;
  long normalization_violations = 0;
};

struct VariationalOptions {
  long samples = 100000;
  int depth = 24;
  std::uint64_t seed = 1;
  int workers = 1;
  int streams = 64;
};

/// I(kappa_V, M^(depth)) with the density field of the measure itself.
VariationalEstimate variational_kusuoka(const CylinderMeasure& cm, const VariationalOptions& options);

/// I(m, M) for the product measure with the given weights and M(x) proportional to Q_state(x)^{-1}.
VariationalEstimate variational_bernoulli(const CylinderMeasure& cm, std::span<const double> weights,
                                          const VariationalOptions& options);

}  // namespace kusuoka
