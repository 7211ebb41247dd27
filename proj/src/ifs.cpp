#include "kusuoka/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace kusuoka {

VectorXd AffineMap::fixed_point() const {
  const auto n = linear.rows();
  return (MatrixXd::Identity(n, n) - linear).partialPivLu().solve(offset);
}

const char* to_string(Verification v) {
  switch (v) {
    case Verification::AnalyticallyVerified: return "analytically-verified";
    case Verification::SymbolicOnly: return "symbolic-only";
    case Verification::Unverified: return "unverified";
  }
  return "unverified";
}

IfsSpec::IfsSpec(std::vector<AffineMap> maps, Verification verification, std::string name)
    : maps_(std::move(maps)), d_(0), eta_(0.0), verification_(verification), name_(std::move(name)) {
  if (maps_.size() < 2) throw ArgumentError("IfsSpec: at least two maps are required");
  if (maps_.size() > 255) throw ArgumentError("IfsSpec: at most 255 maps are supported");
  d_ = static_cast<int>(maps_.front().linear.rows());
  if (d_ < 1) throw ArgumentError("IfsSpec: empty linear part");
  for (const auto& m : maps_) {
    if (m.linear.rows() != d_ || m.linear.cols() != d_ || m.offset.size() != d_)
      throw ArgumentError("IfsSpec: inconsistent map dimensions");
    if (!m.linear.allFinite() || !m.offset.allFinite()) throw ArgumentError("IfsSpec: non-finite entries");
    Eigen::JacobiSVD<MatrixXd> svd(m.linear);
    const double norm = svd.singularValues()(0);
    if (!(norm < 1.0)) throw ArgumentError("IfsSpec: map is not a contraction");
    if (!(std::abs(m.linear.determinant()) > 1e-12)) throw ArgumentError("IfsSpec: linear part is singular");
    eta_ = std::max(eta_, norm);
  }
}

std::vector<MatrixXd> IfsSpec::linear_parts() const {
  std::vector<MatrixXd> out;
  for (const auto& m : maps_) out.push_back(m.linear);
  return out;
}

PushForwardFamily IfsSpec::family(int q) const {
  if (q < 1 || q > d_) throw ArgumentError("degree q out of range for this IFS");
  if (symbols() < binomial(d_, q))
    throw ArgumentError("t < binomial(d, q): the family cannot be nondegenerate");
  const auto parts = linear_parts();
  return PushForwardFamily(parts, q);
}

IfsSpec harmonic_gasket() {
  const double s3 = std::sqrt(3.0);
  MatrixXd t1(2, 2), t2(2, 2), t3(2, 2);
  t1 << 3.0 / 5, 0, 0, 1.0 / 5;
  t2 << 3.0 / 10, s3 / 10, s3 / 10, 1.0 / 2;
  t3 << 3.0 / 10, -s3 / 10, -s3 / 10, 1.0 / 2;
  const VectorXd b = (VectorXd(2) << 1.0, 1.0 / s3).finished();
  const VectorXd c = (VectorXd(2) << 1.0, -1.0 / s3).finished();
  std::vector<AffineMap> maps{
      {t1, VectorXd::Zero(2)},
      {t2, b - t2 * b},
      {t3, c - t3 * c},
  };
  return IfsSpec(std::move(maps), Verification::AnalyticallyVerified, "harmonic_gasket");
}

IfsSpec rotation_family(double rho) {
  const double angles[] = {0.0, 2.0 * std::numbers::pi / 3.0, 4.0 * std::numbers::pi / 3.0};
  return rotation_family(rho, angles);
}

IfsSpec rotation_family(double rho, std::span<const double> angles) {
  if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("rotation_family: rho must lie in (0, 1)");
  if (angles.size() < 2) throw ArgumentError("rotation_family: need at least two maps");
  std::vector<AffineMap> maps;
  for (double a : angles) {
    MatrixXd r(2, 2);
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    const VectorXd vertex = (VectorXd(2) << std::cos(a), std::sin(a)).finished();
    maps.push_back({rho * r, (1.0 - rho) * vertex});
  }
  return IfsSpec(std::move(maps), Verification::SymbolicOnly, "rotation_family");
}

IfsSpec line_family(double rho, int t) {
  if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("line_family: rho must lie in (0, 1)");
  if (t < 2) throw ArgumentError("line_family: need at least two maps");
  std::vector<AffineMap> maps;
  for (int j = 0; j < t; ++j) {
    maps.push_back({MatrixXd::Constant(1, 1, rho), VectorXd::Constant(1, j * (1.0 - rho) / (t - 1))});
  }
  return IfsSpec(std::move(maps), Verification::SymbolicOnly, "line_family");
}

IfsSpec dyadic() {
  IfsSpec base = line_family(0.5, 2);
  return IfsSpec(base.maps(), Verification::AnalyticallyVerified, "dyadic");
}

NdEstimate check_nd(const IfsSpec& ifs, int q, long n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ArgumentError("check_nd: need at least one sample");
  const PushForwardFamily fam = ifs.family(q);
  const int c = fam.form_dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto unit = [&] {
    VectorXd v(c);
    for (int i = 0; i < c; ++i) v(i) = normal(rng);
    const double n = v.norm();
    return n > 0 ? VectorXd(v / n) : VectorXd(VectorXd::Unit(c, 0));
  };

  NdEstimate best{std::numeric_limits<double>::infinity(), VectorXd(), VectorXd()};
  for (long s = 0; s < n_samples; ++s) {
    VectorXd cv = unit();
    VectorXd ev = unit();
    double worst = 0.0;
    for (const auto& p : fam.pullbacks) worst = std::max(worst, std::abs(ev.dot(p * cv)));
    if (worst < best.gamma) best = {worst, cv, ev};
  }
  if (best.gamma <= 1e-8)
    throw NondegeneracyError("nondegeneracy condition fails at the returned witness", best.gamma, best.c, best.e);
  return best;
}

double attractor_diameter_bound(const IfsSpec& ifs) {
  constexpr int kDepth = 8;
  std::vector<VectorXd> pts;
  for (const auto& m : ifs.maps()) pts.push_back(m.fixed_point());

  auto key = [](const VectorXd& x) {
    std::vector<long long> k(x.size());
    for (int i = 0; i < x.size(); ++i) k[i] = std::llround(x(i) * 1e12);
    return k;
  };
  std::set<std::vector<long long>> seen;
  std::vector<VectorXd> all;
  for (const auto& p : pts)
    if (seen.insert(key(p)).second) all.push_back(p);

  std::vector<VectorXd> frontier = all;
  for (int level = 0; level < kDepth; ++level) {
    std::vector<VectorXd> next;
    for (const auto& x : frontier)
      for (const auto& m : ifs.maps()) {
        VectorXd y = m(x);
        if (seen.insert(key(y)).second) {
          all.push_back(y);
          next.push_back(std::move(y));
        }
      }
    frontier = std::move(next);
  }

  double diam = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) diam = std::max(diam, (all[i] - all[j]).norm());

  const double slack = std::pow(ifs.eta(), kDepth + 1);
  if (2.0 * slack < 1.0) return diam / (1.0 - 2.0 * slack);

  // Contraction about the first fixed point bounds the whole attractor.
  const VectorXd a = ifs.maps().front().fixed_point();
  double r = 0.0;
  for (const auto& m : ifs.maps()) r = std::max(r, (m(a) - a).norm());
  return std::max(diam, 2.0 * r / (1.0 - ifs.eta()));
}

CodedPoint code_point(const IfsSpec& ifs, std::span<const std::uint8_t> word, const VectorXd& anchor,
                      std::optional<double> diameter_bound) {
  if (anchor.size() != ifs.dimension()) throw ArgumentError("code_point: anchor dimension mismatch");
  const double diam = diameter_bound ? *diameter_bound : attractor_diameter_bound(ifs);
  VectorXd x = anchor;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it >= ifs.symbols()) throw ArgumentError("code_point: symbol out of range");
    x = ifs.map(*it)(x);
  }
  return {x, std::pow(ifs.eta(), static_cast<double>(word.size())) * diam};
}

}  // namespace kusuoka
