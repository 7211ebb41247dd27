#include "kusuoka/block_operator.hpp"

namespace kusuoka {

std::shared_ptr<const PushForwardFamily> make_family(const IfsSpec& ifs, int q) {
  return std::make_shared<const PushForwardFamily>(ifs.family(q));
}

BlockOperator<double> build_block_operator(std::shared_ptr<const PushForwardFamily> family, const Potential& v) {
  return build_block_operator<double>(std::move(family), v, 1.0);
}

BlockOperator<double> build_block_operator(const IfsSpec& ifs, int q, const Potential& v) {
  return build_block_operator(make_family(ifs, q), v);
}

}  // namespace kusuoka
