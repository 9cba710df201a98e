#include <string>

#include "ergoalloc/aog.hpp"
#include "ergoalloc/errors.hpp"

namespace ergoalloc {

AndOrGraph build_sequential(int piece_count, std::vector<Worker> agents) {
  if (piece_count < 2 || piece_count > kMaxPieces)
    throw InvalidAssembly("sequential assembly needs 2..64 pieces");
  std::vector<Operation> ops;
  std::vector<std::string> labels;
  for (int first = 0; first < piece_count; ++first) {
    for (int last = first + 1; last < piece_count; ++last) {
      for (int cut = first; cut < last; ++cut) {
        ops.push_back({SubAssembly::range(first, last), SubAssembly::range(first, cut),
                       SubAssembly::range(cut + 1, last), static_cast<ActionId>(labels.size())});
        labels.push_back("j" + std::to_string(first + 1) + "_" + std::to_string(cut + 1) + "_" +
                         std::to_string(last + 1));
      }
    }
  }
  return AndOrGraph(piece_count, {}, std::move(labels), std::move(agents), std::move(ops));
}

AndOrGraph build_scarce(int piece_count, std::vector<Worker> agents) {
  if (piece_count < 2 || piece_count > kMaxPieces)
    throw InvalidAssembly("scarce assembly needs 2..64 pieces");
  std::vector<Operation> ops;
  std::vector<std::string> labels;
  for (int k = 1; k < piece_count; ++k) {
    ops.push_back({SubAssembly::range(0, k), SubAssembly::range(0, k - 1), SubAssembly::single(k),
                   static_cast<ActionId>(labels.size())});
    labels.push_back("attach" + std::to_string(k + 1));
  }
  return AndOrGraph(piece_count, {}, std::move(labels), std::move(agents), std::move(ops));
}

}  // namespace ergoalloc
