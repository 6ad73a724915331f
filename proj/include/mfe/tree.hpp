#ifndef MFE_TREE_HPP
#define MFE_TREE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"

namespace mfe {

/// Growth controls. Defaults follow the usual CART/rpart conventions.
struct TreeParams {
  /// Nodes with fewer instances are not split.
  std::size_t min_split = 20;
  /// A split must decrease the (root-normalized) impurity by at least
  /// complexity * root impurity.
  double complexity = 0.01;
  std::optional<std::size_t> max_depth;

  /// Depth-1 tree that splits whenever any split helps.
  static TreeParams stump() { return TreeParams{2, 0.0, 1}; }
};

/// A tree element: an internal node (split) or a leaf.
struct TreeElement {
  bool leaf = true;
  std::size_t level = 0;
  std::size_t inst = 0;
  std::vector<double> class_counts;
  int predicted_class = 0;

  // Split description, internal nodes only.
  std::size_t attribute = 0;
  bool categorical_split = false;
  double threshold = 0.0;  // numeric: go left when value <= threshold
  int category = 0;        // categorical: go left when code == category
  /// n_t*G_t - n_L*G_L - n_R*G_R, in instances * Gini.
  double impurity_decrease = 0.0;
  int left = -1;
  int right = -1;

  /// Probability of reaching this element in a uniform random walk from the root.
  double prob() const { return std::ldexp(1.0, -static_cast<int>(level)); }
};

/// Binary decision tree stored in preorder; element 0 is the root.
class TreeModel {
 public:
  TreeModel(std::vector<TreeElement> elements, std::size_t attributes, std::size_t classes)
      : elements_(std::move(elements)), attributes_(attributes), classes_(classes) {
    validate();
  }

  const std::vector<TreeElement>& elements() const { return elements_; }
  std::size_t attribute_count() const { return attributes_; }
  std::size_t class_count() const { return classes_; }

  std::vector<const TreeElement*> leaves() const { return select(true); }
  std::vector<const TreeElement*> nodes() const { return select(false); }
  bool degenerate() const { return elements_.size() == 1; }

  std::size_t depth() const {
    std::size_t m = 0;
    for (const auto& e : elements_) m = std::max(m, e.level);
    return m;
  }

  /// Per-attribute total impurity decrease, normalized to sum 1; all zeros
  /// for a tree without splits.
  std::vector<double> importance() const {
    std::vector<double> imp(attributes_, 0.0);
    for (const auto& e : elements_) {
      if (!e.leaf) imp[e.attribute] += e.impurity_decrease;
    }
    const double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total > 0.0) {
      for (double& v : imp) v /= total;
    }
    return imp;
  }

  int predict(const Dataset& data, std::size_t row) const {
    const TreeElement* e = &elements_.front();
    while (!e->leaf) {
      const Column& col = data.column(e->attribute);
      const bool go_left = e->categorical_split ? col.codes()[row] == e->category : col.values()[row] <= e->threshold;
      e = &elements_[static_cast<std::size_t>(go_left ? e->left : e->right)];
    }
    return e->predicted_class;
  }

  void dump(std::ostream& os, const Dataset* data = nullptr) const { dump_element(os, 0, data); }

 private:
  std::vector<const TreeElement*> select(bool leaf) const {
    std::vector<const TreeElement*> out;
    for (const auto& e : elements_) {
      if (e.leaf == leaf) out.push_back(&e);
    }
    return out;
  }

  void validate() const {
    if (elements_.empty()) throw InvalidDatasetError("tree has no elements");
    if (elements_.front().level != 0) throw InvalidDatasetError("tree root must be at level 0");
    std::vector<int> parents(elements_.size(), 0);
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const auto& e = elements_[i];
      if (e.leaf) {
        if (e.left != -1 || e.right != -1) throw InvalidDatasetError("tree leaf has children");
        continue;
      }
      if (e.attribute >= attributes_) throw InvalidDatasetError("tree node splits on an unknown attribute");
      for (int child : {e.left, e.right}) {
        if (child <= static_cast<int>(i) || child >= static_cast<int>(elements_.size())) {
          throw InvalidDatasetError("tree node child index out of order");
        }
        if (elements_[static_cast<std::size_t>(child)].level != e.level + 1) {
          throw InvalidDatasetError("tree child level must be parent level + 1");
        }
        ++parents[static_cast<std::size_t>(child)];
      }
    }
    for (std::size_t i = 1; i < parents.size(); ++i) {
      if (parents[i] != 1) throw InvalidDatasetError("tree element without exactly one parent");
    }
  }

  void dump_element(std::ostream& os, std::size_t index, const Dataset* data) const {
    const auto& e = elements_[index];
    os << std::string(2 * e.level, ' ');
    if (e.leaf) {
      os << "leaf class=" << e.predicted_class << " inst=" << e.inst << '\n';
      return;
    }
    const std::string attr = data ? data->column(e.attribute).name() : "a" + std::to_string(e.attribute);
    if (e.categorical_split) {
      os << attr << " == " << (data ? data->column(e.attribute).levels()[static_cast<std::size_t>(e.category)]
                                    : std::to_string(e.category));
    } else {
      os << attr << " <= " << e.threshold;
    }
    os << " inst=" << e.inst << '\n';
    dump_element(os, static_cast<std::size_t>(e.left), data);
    dump_element(os, static_cast<std::size_t>(e.right), data);
  }

  std::vector<TreeElement> elements_;
  std::size_t attributes_ = 0;
  std::size_t classes_ = 0;
};

/// Best split of one node, as found by exhaustive search.
struct SplitCandidate {
  std::size_t attribute = 0;
  bool categorical = false;
  double threshold = 0.0;
  int category = 0;
  double decrease = 0.0;  // n_t*G_t - n_L*G_L - n_R*G_R
};

namespace detail {

inline double gini(std::span<const double> counts, double total) {
  if (total <= 0.0) return 0.0;
  double s = 0.0;
  for (double c : counts) s += (c / total) * (c / total);
  return 1.0 - s;
}

inline std::vector<double> count_classes(const Dataset& data, std::span<const std::size_t> rows) {
  std::vector<double> counts(data.q(), 0.0);
  for (auto r : rows) counts[static_cast<std::size_t>(data.labels()[r])] += 1.0;
  return counts;
}

inline int majority(std::span<const double> counts) {
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

/// Gains closer than this are ties, resolved by attribute then threshold order.
inline constexpr double kSplitTieTolerance = 1e-12;

}  // namespace detail

/// Exhaustive Gini search over the given attributes. Numeric thresholds are
/// midpoints between consecutive distinct values; categorical splits isolate
/// one category. Ties keep the lowest attribute index, then the lowest
/// threshold or category code.
inline std::optional<SplitCandidate> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                                std::span<const std::size_t> attributes) {
  const auto q = data.q();
  const auto parent = detail::count_classes(data, rows);
  const auto total = static_cast<double>(rows.size());
  const double parent_term = total * detail::gini(parent, total);
  std::optional<SplitCandidate> best;
  auto consider = [&](const SplitCandidate& c) {
    if (c.decrease <= detail::kSplitTieTolerance) return;
    if (!best || c.decrease > best->decrease + detail::kSplitTieTolerance) best = c;
  };

  std::vector<double> left(q);
  std::vector<double> right(q);
  for (auto a : attributes) {
    const Column& col = data.column(a);
    if (col.is_numeric()) {
      std::vector<std::pair<double, int>> pairs;
      pairs.reserve(rows.size());
      for (auto r : rows) pairs.emplace_back(col.values()[r], data.labels()[r]);
      std::sort(pairs.begin(), pairs.end());
      std::fill(left.begin(), left.end(), 0.0);
      right = parent;
      for (std::size_t i = 0; i + 1 < pairs.size(); ++i) {
        left[static_cast<std::size_t>(pairs[i].second)] += 1.0;
        right[static_cast<std::size_t>(pairs[i].second)] -= 1.0;
        if (pairs[i].first == pairs[i + 1].first) continue;
        const auto nl = static_cast<double>(i + 1);
        const double nr = total - nl;
        SplitCandidate c;
        c.attribute = a;
        c.threshold = 0.5 * (pairs[i].first + pairs[i + 1].first);
        if (c.threshold >= pairs[i + 1].first) c.threshold = pairs[i].first;
        c.decrease = parent_term - nl * detail::gini(left, nl) - nr * detail::gini(right, nr);
        consider(c);
      }
    } else {
      std::vector<double> by_level(col.level_count() * q, 0.0);
      std::vector<double> level_total(col.level_count(), 0.0);
      for (auto r : rows) {
        const auto code = static_cast<std::size_t>(col.codes()[r]);
        by_level[code * q + static_cast<std::size_t>(data.labels()[r])] += 1.0;
        level_total[code] += 1.0;
      }
      for (std::size_t level = 0; level < col.level_count(); ++level) {
        const double nl = level_total[level];
        if (nl <= 0.0 || nl >= total) continue;
        for (std::size_t k = 0; k < q; ++k) {
          left[k] = by_level[level * q + k];
          right[k] = parent[k] - left[k];
        }
        SplitCandidate c;
        c.attribute = a;
        c.categorical = true;
        c.category = static_cast<int>(level);
        c.decrease = parent_term - nl * detail::gini(left, nl) - (total - nl) * detail::gini(right, total - nl);
        consider(c);
      }
    }
  }
  return best;
}

namespace detail {

class CartBuilder {
 public:
  CartBuilder(const Dataset& data, std::span<const std::size_t> attributes, const TreeParams& params,
              double root_size, double root_impurity)
      : data_(data), attributes_(attributes), params_(params),
        min_decrease_(params.complexity * root_impurity * root_size) {}

  int grow(std::vector<std::size_t> rows, std::size_t level) {
    const auto counts = count_classes(data_, rows);
    const auto total = static_cast<double>(rows.size());
    const auto index = static_cast<int>(elements_.size());
    TreeElement e;
    e.level = level;
    e.inst = rows.size();
    e.class_counts = counts;
    e.predicted_class = majority(counts);
    elements_.push_back(e);

    const bool pure = gini(counts, total) <= 0.0;
    const bool too_small = rows.size() < params_.min_split;
    const bool too_deep = params_.max_depth && level >= *params_.max_depth;
    if (pure || too_small || too_deep) return index;
    const auto split = best_split(data_, rows, attributes_);
    if (!split || split->decrease < min_decrease_) return index;

    std::vector<std::size_t> left_rows;
    std::vector<std::size_t> right_rows;
    const Column& col = data_.column(split->attribute);
    for (auto r : rows) {
      const bool go_left = split->categorical ? col.codes()[r] == split->category : col.values()[r] <= split->threshold;
      (go_left ? left_rows : right_rows).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    {
      auto& node = elements_[static_cast<std::size_t>(index)];
      node.leaf = false;
      node.attribute = split->attribute;
      node.categorical_split = split->categorical;
      node.threshold = split->threshold;
      node.category = split->category;
      node.impurity_decrease = split->decrease;
    }
    const int left = grow(std::move(left_rows), level + 1);
    const int right = grow(std::move(right_rows), level + 1);
    elements_[static_cast<std::size_t>(index)].left = left;
    elements_[static_cast<std::size_t>(index)].right = right;
    return index;
  }

  std::vector<TreeElement> take() { return std::move(elements_); }

 private:
  const Dataset& data_;
  std::span<const std::size_t> attributes_;
  TreeParams params_;
  double min_decrease_;
  std::vector<TreeElement> elements_;
};

}  // namespace detail

/// Grows a Gini CART tree on the given rows using only the given attributes.
inline TreeModel induce_cart(const Dataset& data, std::span<const std::size_t> rows,
                             std::span<const std::size_t> attributes, const TreeParams& params = {}) {
  if (rows.empty()) throw InvalidDatasetError("cannot grow a tree on zero rows");
  const auto counts = detail::count_classes(data, rows);
  const auto total = static_cast<double>(rows.size());
  detail::CartBuilder builder(data, attributes, params, total, detail::gini(counts, total));
  builder.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return TreeModel(builder.take(), data.d(), data.q());
}

/// Grows a CART tree on the whole dataset. The search is fully
/// deterministic, so the seed does not influence the result; it is kept
/// for interface stability with randomized tie-breaking variants.
inline TreeModel induce_cart(const Dataset& data, std::uint64_t seed = 0, const TreeParams& params = {}) {
  (void)seed;
  std::vector<std::size_t> rows(data.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  std::vector<std::size_t> attributes(data.d());
  std::iota(attributes.begin(), attributes.end(), std::size_t{0});
  return induce_cart(data, rows, attributes, params);
}

}  // namespace mfe

#endif  // MFE_TREE_HPP
