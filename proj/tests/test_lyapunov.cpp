#include <doctest.h>

#include <cmath>

#include "kusuoka/lyapunov.hpp"
#include "kusuoka/transfer.hpp"

using namespace kusuoka;

namespace {

VectorXd singular_values(const MatrixXd& a) { return Eigen::JacobiSVD<MatrixXd>(a).singularValues(); }

// Largest |log s| over the singular values s of a.
double log_distortion(const MatrixXd& a) {
  const VectorXd s = singular_values(a);
  return std::max(std::abs(std::log(s(0))), std::abs(std::log(s(s.size() - 1))));
}

MatrixXd psd_power(const MatrixXd& a, double p) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(a);
  return es.eigenvectors() * es.eigenvalues().array().pow(p).matrix().asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

TEST_CASE("dyadic Lyapunov estimate is the scalar one half") {
  const auto cm = kusuoka_measure(dyadic(), 1, Potential::constant(2, 0.0));
  const Word w = sample_kappa(cm, 50, 1);
  const MatrixXd one = MatrixXd::Identity(1, 1);
  for (int l : {1, 7, 50}) {
    const LyapunovEstimate e = lyap_matrix(cm.family(), one, w, l);
    CHECK(e.lambda(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.gap == 1.0);
    const OseledetsEstimate p = oseledets_projection(cm.family(), cm.mu_total(), w, l);
    CHECK(p.projection(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.idempotency_defect <= 1e-14);
    CHECK(p.rank_ratio == 0.0);
  }
  // With the Perron mass the estimate carries mu^{1/(2l)} and tends to 1/2.
  const double mass = cm.mu_total()(0, 0);
  const LyapunovEstimate e = lyap_matrix(cm.family(), cm.mu_total(), w, 50);
  CHECK(e.lambda(0, 0) == doctest::Approx(0.5 * std::pow(mass, 1.0 / 100.0)).epsilon(1e-13));
}

TEST_CASE("conformal rotation family has top eigenvalue rho") {
  const auto cm = kusuoka_measure(rotation_family(0.9), 1, Potential::constant(3, 0.0));
  const MatrixXd id = MatrixXd::Identity(2, 2);
  const Word w = sample_kappa(cm, 120, 2);
  for (int l : {1, 30, 120}) {
    const LyapunovEstimate e = lyap_matrix(cm.family(), id, w, l);
    CHECK(std::abs(e.eigenvalues(0) - 0.9) <= 1e-10);
    CHECK(std::abs(e.eigenvalues(1) - 0.9) <= 1e-10);
    CHECK((e.lambda - 0.9 * id).norm() <= 1e-10);
  }
}

TEST_CASE("Lyapunov estimates are symmetric PSD and satisfy the determinant identity") {
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const MatrixXd mu = cm.mu_total();
  const double half_log_det_mu = 0.5 * std::log(mu.determinant());
  for (int i = 0; i < 8; ++i) {
    const Word w = sample_kappa(cm, 400, 10 + i);
    for (int l : {5, 50, 200, 400}) {
      const LyapunovEstimate e = lyap_matrix(cm.family(), mu, w, l);
      CHECK((e.lambda - e.lambda.transpose()).norm() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<MatrixXd>(e.lambda).eigenvalues().minCoeff() >= -1e-10);
      CHECK(e.eigenvalues(0) >= e.eigenvalues(1));
      CHECK_FALSE(e.reduced_rank);
      double log_det = half_log_det_mu;
      for (int j = 0; j < l; ++j) log_det += std::log(std::abs(cm.family().pullbacks[w[j]].determinant()));
      CHECK(e.log_singular.sum() == doctest::Approx(log_det).epsilon(1e-10));
    }
  }
}

TEST_CASE("estimate agrees with the direct fractional power on short words") {
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const MatrixXd mu = cm.mu_total();
  const Word w = sample_kappa(cm, 12, 3);
  for (int l = 1; l <= 12; ++l) {
    MatrixXd h = MatrixXd::Identity(2, 2);
    for (int j = 0; j < l; ++j) h = h * cm.family().pullbacks[w[j]];
    const MatrixXd direct = psd_power(symmetrize(MatrixXd(h * mu * h.transpose())), 1.0 / (2.0 * l));
    CHECK((lyap_matrix(cm.family(), mu, w, l).lambda - direct).norm() <= 1e-9);
  }
}

TEST_CASE("top eigenvalue stabilizes in l") {
  // Differences between l and 2l, averaged over words; they shrink like l^{-1/2}.
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const MatrixXd mu = cm.mu_total();
  const std::vector<int> ls{50, 100, 200, 400, 800, 1600, 3200};
  std::vector<double> mean_step(ls.size() - 1, 0.0);
  const int words = 16;
  for (int i = 0; i < words; ++i) {
    const Word w = sample_kappa(cm, ls.back(), 20 + i);
    for (std::size_t j = 0; j + 1 < ls.size(); ++j) {
      const double a = std::log(lyap_matrix(cm.family(), mu, w, ls[j]).eigenvalues(0));
      const double b = std::log(lyap_matrix(cm.family(), mu, w, ls[j + 1]).eigenvalues(0));
      mean_step[j] += std::abs(a - b) / words;
    }
  }
  CHECK(mean_step.back() < 0.5 * mean_step.front());
  CHECK(mean_step.back() <= 1e-2);
}

TEST_CASE("shifting the start index moves log eigenvalues by O(1/l)") {
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const MatrixXd mu = cm.mu_total();
  const MatrixXd root = psd_power(mu, 0.5);
  const MatrixXd root_inv = psd_power(mu, -0.5);
  const int l = 200;
  for (int i = 0; i < 16; ++i) {
    const Word w = sample_kappa(cm, l + 1, 40 + i);
    const LyapunovEstimate a = lyap_matrix(cm.family(), mu, w, l);
    const LyapunovEstimate b = lyap_matrix(cm.family(), mu, std::span<const Symbol>(w.data() + 1, l), l);
    // H^l(x) = P_{x_0} H^{l-1}(sx) and H^l(sx) = H^{l-1}(sx) P_{x_l}.
    const double bound = log_distortion(cm.family().pullbacks[w[0]]) +
                         log_distortion(MatrixXd(root_inv * cm.family().pullbacks[w[l]] * root));
    for (int k = 0; k < 2; ++k)
      CHECK(std::abs(std::log(a.eigenvalues(k)) - std::log(b.eigenvalues(k))) <= bound / l + 1e-12);
  }
}

TEST_CASE("Oseledets projection becomes rank one on the gasket") {
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const MatrixXd mu = cm.mu_total();
  for (int i = 0; i < 8; ++i) {
    const Word w = sample_kappa(cm, 200, 60 + i);
    double last_defect = 1.0;
    for (int l : {2, 10, 50, 200}) {
      const OseledetsEstimate p = oseledets_projection(cm.family(), mu, w, l);
      CHECK(p.projection.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p.idempotency_defect <= last_defect + 1e-15);
      last_defect = p.idempotency_defect;
      if (l == 200) {
        CHECK(p.gap > 1e-3);
        CHECK(p.idempotency_defect <= 1e-2);
        CHECK(p.rank_ratio <= 1e-12);
        const MatrixXd m = density_M(cm, std::span<const Symbol>(w.data(), l));
        CHECK(hs_angle(p.projection, m) <= 1e-2);
      }
    }
  }
}

TEST_CASE("HS angle") {
  MatrixXd a = MatrixXd::Zero(2, 2);
  a(0, 0) = 1.0;
  MatrixXd b = MatrixXd::Zero(2, 2);
  b(1, 1) = 1.0;
  CHECK(hs_angle(a, 3.0 * a) == doctest::Approx(0.0).scale(1.0));
  CHECK(hs_angle(a, b) == doctest::Approx(std::acos(0.0)));
  CHECK(hs_angle(a, -a) == doctest::Approx(2.0 * std::acos(0.0)));
  CHECK_THROWS_AS(hs_angle(a, MatrixXd::Zero(2, 2)), ArgumentError);
  CHECK_THROWS_AS(hs_angle(a, MatrixXd::Zero(3, 3)), ArgumentError);
}

TEST_CASE("argument validation and reduced rank") {
  const auto cm = kusuoka_measure(harmonic_gasket(), 1, Potential::constant(3, 0.0));
  const Word w = sample_kappa(cm, 10, 5);
  CHECK_THROWS_AS(lyap_matrix(cm.family(), cm.mu_total(), w, 0), ArgumentError);
  CHECK_THROWS_AS(lyap_matrix(cm.family(), cm.mu_total(), w, 11), ArgumentError);
  CHECK_THROWS_AS(lyap_matrix(cm.family(), MatrixXd::Identity(3, 3), w, 5), ArgumentError);
  MatrixXd rank_one = MatrixXd::Zero(2, 2);
  rank_one(0, 0) = 1.0;
  const LyapunovEstimate e = lyap_matrix(cm.family(), rank_one, w, 5);
  CHECK(e.reduced_rank);
  CHECK(e.lambda.allFinite());
}
