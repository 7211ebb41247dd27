#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "kusuoka/exterior_algebra.hpp"
#include "kusuoka/ifs.hpp"
#include "kusuoka/symbolic.hpp"

namespace kusuoka {

/// Finite-memory transfer operator acting on vectors of per-state symmetric matrices.
///
/// States are words u of length k-1, encoded base t with u_1 most significant. The block
/// for symbol i and output state u is weight(i, u) * Psi_i applied to the component at the
/// input state (i, u_1 .. u_{k-2}).
template <typename Scalar>
class BlockOperator {
 public:
  BlockOperator(std::shared_ptr<const PushForwardFamily> family, int memory, std::vector<Scalar> weights)
      : family_(std::move(family)), k_(memory), weights_(std::move(weights)) {
    if (!family_) throw ArgumentError("BlockOperator: missing family");
    if (k_ < 1) throw ArgumentError("BlockOperator: memory must be at least 1");
    const int t = family_->symbols();
    states_ = 1;
    for (int j = 1; j < k_; ++j) states_ *= t;
    if (static_cast<long>(weights_.size()) != static_cast<long>(states_) * t)
      throw ArgumentError("BlockOperator: weight table must have t^k entries");
    for (const auto& p : family_->psi) psi_.push_back(p.template cast<Scalar>());
  }

  const PushForwardFamily& family() const { return *family_; }
  std::shared_ptr<const PushForwardFamily> family_ptr() const { return family_; }
  int memory() const { return k_; }
  int symbols() const { return family_->symbols(); }
  int states() const { return states_; }
  int block_size() const { return family_->block_size(); }
  int dimension() const { return states_ * block_size(); }

  int input_state(int symbol, int state) const { return k_ == 1 ? 0 : symbol * (states_ / symbols()) + state / symbols(); }
  Scalar weight(int symbol, int state) const { return weights_[static_cast<std::size_t>(symbol) * states_ + state]; }

  Vector<Scalar> apply(const Vector<Scalar>& x) const {
    check(x);
    const int m = block_size();
    Vector<Scalar> y = Vector<Scalar>::Zero(dimension());
    for (int u = 0; u < states_; ++u)
      for (int i = 0; i < symbols(); ++i)
        y.segment(u * m, m) += weight(i, u) * (psi_[i] * x.segment(input_state(i, u) * m, m));
    return y;
  }

  Vector<Scalar> apply_adjoint(const Vector<Scalar>& x) const {
    check(x);
    const int m = block_size();
    Vector<Scalar> y = Vector<Scalar>::Zero(dimension());
    for (int u = 0; u < states_; ++u)
      for (int i = 0; i < symbols(); ++i)
        y.segment(input_state(i, u) * m, m) += weight(i, u) * (psi_[i].transpose() * x.segment(u * m, m));
    return y;
  }

  Matrix<Scalar> dense() const {
    const int m = block_size();
    Matrix<Scalar> a = Matrix<Scalar>::Zero(dimension(), dimension());
    for (int u = 0; u < states_; ++u)
      for (int i = 0; i < symbols(); ++i) a.block(u * m, input_state(i, u) * m, m, m) += weight(i, u) * psi_[i];
    return a;
  }

  /// Per-state symmetric matrices from a stacked coordinate vector.
  std::vector<Matrix<Scalar>> unstack(const Vector<Scalar>& x) const {
    std::vector<Matrix<Scalar>> out;
    const int m = block_size();
    for (int u = 0; u < states_; ++u) out.push_back(family_->basis.template matrix<Scalar>(x.segment(u * m, m)));
    return out;
  }

  Vector<Scalar> stack(const std::vector<Matrix<Scalar>>& blocks) const {
    if (static_cast<int>(blocks.size()) != states_) throw ArgumentError("BlockOperator: state count mismatch");
    const int m = block_size();
    Vector<Scalar> x(dimension());
    for (int u = 0; u < states_; ++u) x.segment(u * m, m) = family_->basis.template coords<Scalar>(blocks[u]);
    return x;
  }

 private:
  void check(const Vector<Scalar>& x) const {
    if (x.size() != dimension()) throw ArgumentError("BlockOperator: vector dimension mismatch");
  }

  std::shared_ptr<const PushForwardFamily> family_;
  int k_;
  int states_;
  std::vector<Scalar> weights_;
  std::vector<Matrix<Scalar>> psi_;
};

/// Weights exp(coupling * V) for every symbol/state pair.
template <typename Scalar>
BlockOperator<Scalar> build_block_operator(std::shared_ptr<const PushForwardFamily> family, const Potential& v,
                                           Scalar coupling) {
  if (v.symbols() != family->symbols()) throw ArgumentError("potential alphabet does not match the IFS");
  std::vector<Scalar> w;
  w.reserve(v.table().size());
  for (double x : v.table()) w.push_back(std::exp(coupling * Scalar(x)));
  return BlockOperator<Scalar>(std::move(family), v.memory(), std::move(w));
}

BlockOperator<double> build_block_operator(std::shared_ptr<const PushForwardFamily> family, const Potential& v);
BlockOperator<double> build_block_operator(const IfsSpec& ifs, int q, const Potential& v);

std::shared_ptr<const PushForwardFamily> make_family(const IfsSpec& ifs, int q);

}  // namespace kusuoka
