#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kusuoka/exterior_algebra.hpp"

namespace kusuoka {

struct AffineMap {
  MatrixXd linear;
  VectorXd offset;

  VectorXd operator()(const VectorXd& x) const { return linear * x + offset; }
  VectorXd fixed_point() const;
};

enum class Verification { AnalyticallyVerified, SymbolicOnly, Unverified };

const char* to_string(Verification v);

/// Finite family of affine contractions with invertible linear parts.
class IfsSpec {
 public:
  explicit IfsSpec(std::vector<AffineMap> maps, Verification verification = Verification::Unverified,
                   std::string name = "custom");

  int dimension() const { return d_; }
  int symbols() const { return static_cast<int>(maps_.size()); }
  double eta() const { return eta_; }
  const std::vector<AffineMap>& maps() const { return maps_; }
  const AffineMap& map(int i) const { return maps_.at(i); }
  Verification verification() const { return verification_; }
  const std::string& name() const { return name_; }

  std::vector<MatrixXd> linear_parts() const;
  PushForwardFamily family(int q) const;

 private:
  std::vector<AffineMap> maps_;
  int d_;
  double eta_;
  Verification verification_;
  std::string name_;
};

IfsSpec harmonic_gasket();
IfsSpec rotation_family(double rho);
/// x -> rho R(a_j) x + (1 - rho) (cos a_j, sin a_j) for the given angles a_j.
IfsSpec rotation_family(double rho, std::span<const double> angles);
/// x -> rho x + j (1 - rho)/(t - 1) on the line, j = 0..t-1.
IfsSpec line_family(double rho, int t);
IfsSpec dyadic();

struct NdEstimate {
  double gamma;
  VectorXd c;
  VectorXd e;
};

/// Monte-Carlo estimate of min over unit c, e of max_i |(P_i c, e)|.
NdEstimate check_nd(const IfsSpec& ifs, int q, long n_samples, std::uint64_t seed);

/// Upper bound on the attractor diameter from depth-8 images of the fixed points.
double attractor_diameter_bound(const IfsSpec& ifs);

struct CodedPoint {
  VectorXd point;
  double error_bound;
};

/// psi_{w_0} o ... o psi_{w_l}(anchor), with the distance bound to the cylinder set.
CodedPoint code_point(const IfsSpec& ifs, std::span<const std::uint8_t> word, const VectorXd& anchor,
                      std::optional<double> diameter_bound = std::nullopt);

}  // namespace kusuoka
