#ifndef MFE_MODEL_BASED_HPP
#define MFE_MODEL_BASED_HPP

#include <cmath>
#include <map>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/measure.hpp"
#include "mfe/tree.hpp"

namespace mfe {

/// Structural measures of a decision tree induced from `data`.
///
/// Per-leaf vectors follow the tree's preorder. A tree without splits is
/// a single leaf at level 0: leavesHomo then fails (its shape is 0) and the
/// node-derived vectors are [0].
inline std::vector<MeasureResult> extract_model_based(const TreeModel& tree, const Dataset& data) {
  const auto leaves = tree.leaves();
  const auto nodes = tree.nodes();
  const auto n = static_cast<double>(data.n());
  const auto d = static_cast<double>(data.d());
  const auto z = static_cast<double>(leaves.size());

  std::vector<double> branch;
  std::vector<double> corrob;
  std::vector<double> shape;
  std::vector<double> lpc(tree.class_count(), 0.0);
  std::map<double, std::size_t> same_prob;
  for (const auto* leaf : leaves) {
    branch.push_back(static_cast<double>(leaf->level));
    corrob.push_back(static_cast<double>(leaf->inst) / n);
    const double p = leaf->prob();
    shape.push_back(-p * std::log2(p));
    lpc[static_cast<std::size_t>(leaf->predicted_class)] += 1.0 / z;
    ++same_prob[p];
  }

  std::vector<double> homo;
  bool homo_failed = false;
  for (double s : shape) {
    if (s <= 0.0) {
      homo_failed = true;
      break;
    }
    homo.push_back(z / s);
  }

  std::vector<double> imbalance;
  for (const auto* leaf : leaves) {
    const double p = leaf->prob();
    const double share = p * static_cast<double>(same_prob[p]);
    imbalance.push_back(share > 0.0 ? -share * std::log2(share) : 0.0);
  }

  std::vector<double> per_level;
  std::vector<double> repeated;
  if (!nodes.empty()) {
    std::size_t max_level = 0;
    for (const auto* node : nodes) max_level = std::max(max_level, node->level);
    per_level.assign(max_level + 1, 0.0);
    std::vector<double> per_attr(tree.attribute_count(), 0.0);
    for (const auto* node : nodes) {
      per_level[node->level] += 1.0;
      per_attr[node->attribute] += 1.0;
    }
    for (double c : per_attr) {
      if (c > 0.0) repeated.push_back(c);
    }
  } else {
    per_level = {0.0};
    repeated = {0.0};
  }

  std::vector<double> depth;
  for (const auto& e : tree.elements()) depth.push_back(static_cast<double>(e.level));

  std::vector<MeasureResult> out;
  out.push_back(MeasureResult::single("leaves", z));
  out.push_back(MeasureResult::multi("leavesBranch", std::move(branch)));
  out.push_back(MeasureResult::multi("leavesCorrob", std::move(corrob)));
  out.push_back(homo_failed ? MeasureResult::failure("leavesHomo", ExceptionKind::division_by_zero, true)
                            : MeasureResult::multi("leavesHomo", std::move(homo)));
  out.push_back(MeasureResult::multi("leavesPerClass", std::move(lpc)));
  out.push_back(MeasureResult::single("nodes", static_cast<double>(nodes.size())));
  out.push_back(d > 0 ? MeasureResult::single("nodesPerAttr", static_cast<double>(nodes.size()) / d)
                      : MeasureResult::failure("nodesPerAttr", ExceptionKind::division_by_zero, false));
  out.push_back(MeasureResult::single("nodesPerInst", static_cast<double>(nodes.size()) / n));
  out.push_back(MeasureResult::multi("nodesPerLevel", std::move(per_level)));
  out.push_back(MeasureResult::multi("nodesRepeated", std::move(repeated)));
  out.push_back(MeasureResult::multi("treeDepth", std::move(depth)));
  out.push_back(MeasureResult::multi("treeImbalance", std::move(imbalance)));
  out.push_back(MeasureResult::multi("treeShape", std::move(shape)));
  if (tree.attribute_count() == 0) {
    out.push_back(MeasureResult::failure("varImportance", ExceptionKind::domain, true));
  } else {
    out.push_back(MeasureResult::multi("varImportance", tree.importance()));
  }
  return out;
}

}  // namespace mfe

#endif  // MFE_MODEL_BASED_HPP
