#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "fixtures.hpp"
#include "mfe/model_based.hpp"
#include "mfe/tree.hpp"
#include "oracles.hpp"

namespace {

mfe::MeasureResult find(const std::vector<mfe::MeasureResult>& rs, const std::string& name) {
  for (const auto& r : rs) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("no measure " + name);
}

/// Four stacked XOR corners; the unequal corner sizes give greedy search a
/// useful first split.
mfe::Dataset xor40() {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> c;
  auto add = [&](double cx, double cy, int count, const char* label) {
    for (int i = 0; i < count; ++i) {
      x.push_back(cx);
      y.push_back(cy);
      c.emplace_back(label);
    }
  };
  add(0, 0, 14, "A");
  add(0, 1, 6, "B");
  add(1, 0, 10, "B");
  add(1, 1, 10, "A");
  return mfe::Dataset("xor", {mfe::Column::numeric("x", x), mfe::Column::numeric("y", y)}, mfe::Column::categorical("c", c));
}

mfe::Dataset separable40() {
  std::vector<double> x(40);
  std::vector<std::string> c(40);
  for (std::size_t i = 0; i < 40; ++i) {
    x[i] = static_cast<double>(i);
    c[i] = i < 17 ? "lo" : "hi";
  }
  return mfe::Dataset("sep", {mfe::Column::numeric("x", x)}, mfe::Column::categorical("c", c));
}

/// Replays the tree on the data and checks every node against an exhaustive
/// split search over the rows that reach it.
void check_against_oracle(const mfe::TreeModel& tree, const mfe::Dataset& data, const mfe::TreeParams& params) {
  std::vector<oracle::Vec> cols;
  for (const auto& c : data.columns()) cols.emplace_back(c.values().begin(), c.values().end());
  const std::vector<int> labels(data.labels().begin(), data.labels().end());
  std::vector<std::size_t> all(data.n());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const double root_term = static_cast<double>(data.n()) * oracle::gini(labels);

  std::function<void(int, const std::vector<std::size_t>&)> visit = [&](int index, const std::vector<std::size_t>& rows) {
    const auto& e = tree.elements()[static_cast<std::size_t>(index)];
    EXPECT_EQ(e.inst, rows.size());
    const auto best = oracle::best_numeric_split(cols, labels, rows);
    std::vector<int> ys;
    for (auto r : rows) ys.push_back(labels[r]);
    if (e.leaf) {
      const bool stop = oracle::gini(ys) == 0.0 || rows.size() < params.min_split || best.decrease < params.complexity * root_term;
      EXPECT_TRUE(stop) << "leaf " << index << " could have been split";
      return;
    }
    EXPECT_EQ(e.attribute, best.attribute) << "node " << index;
    EXPECT_DOUBLE_EQ(e.threshold, best.threshold) << "node " << index;
    EXPECT_NEAR(e.impurity_decrease, best.decrease, 1e-9);
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) (cols[e.attribute][r] <= e.threshold ? left : right).push_back(r);
    visit(e.left, left);
    visit(e.right, right);
  };
  visit(0, all);
}

/// root -> (leaf, node -> (node -> (leaf, leaf), leaf)), 20 instances.
mfe::TreeModel seven_element_tree() {
  auto leaf = [](std::size_t level, std::size_t inst, int cls) {
    mfe::TreeElement e;
    e.level = level;
    e.inst = inst;
    e.predicted_class = cls;
    e.class_counts = {cls == 0 ? double(inst) : 0.0, cls == 1 ? double(inst) : 0.0};
    return e;
  };
  auto node = [](std::size_t level, std::size_t inst, std::size_t attr, double dec, int l, int r) {
    mfe::TreeElement e;
    e.leaf = false;
    e.level = level;
    e.inst = inst;
    e.attribute = attr;
    e.impurity_decrease = dec;
    e.left = l;
    e.right = r;
    e.class_counts = {0, 0};
    return e;
  };
  return mfe::TreeModel({node(0, 20, 0, 4.0, 1, 2), leaf(1, 10, 0), node(1, 10, 1, 1.0, 3, 6), node(2, 5, 0, 1.0, 4, 5),
                         leaf(3, 3, 1), leaf(3, 2, 0), leaf(2, 5, 1)},
                        3, 2);
}

mfe::Dataset twenty_rows() {
  std::vector<std::string> y(20);
  for (std::size_t i = 0; i < 20; ++i) y[i] = i % 2 ? "a" : "b";
  std::vector<double> v(20, 1.0);
  return mfe::Dataset("d", {mfe::Column::numeric("a0", v), mfe::Column::numeric("a1", v), mfe::Column::numeric("a2", v)},
                      mfe::Column::categorical("y", y));
}

}  // namespace

TEST(Cart, SeparableDataGivesOneSplit) {
  const auto d = separable40();
  const auto tree = mfe::induce_cart(d);
  ASSERT_EQ(tree.nodes().size(), 1u);
  ASSERT_EQ(tree.leaves().size(), 2u);
  EXPECT_DOUBLE_EQ(tree.elements()[0].threshold, 16.5);
  for (const auto* l : tree.leaves()) {
    EXPECT_EQ(l->level, 1u);
    EXPECT_EQ(mfe::detail::gini(l->class_counts, static_cast<double>(l->inst)), 0.0);
  }
  check_against_oracle(tree, d, {});
  const auto ms = mfe::extract_model_based(tree, d);
  EXPECT_EQ(find(ms, "nodesPerLevel").values, std::vector<double>{1});
  EXPECT_EQ(find(ms, "leaves").values[0], 2.0);
  EXPECT_EQ(find(ms, "nodes").values[0], 1.0);
}

TEST(Cart, XorMatchesExhaustiveSearch) {
  const auto d = xor40();
  const auto tree = mfe::induce_cart(d);
  EXPECT_EQ(tree.depth(), 2u);
  EXPECT_EQ(tree.leaves().size(), 4u);
  check_against_oracle(tree, d, {});
  for (std::size_t i = 0; i < d.n(); ++i) EXPECT_EQ(tree.predict(d, i), d.labels()[i]);
}

TEST(Cart, RandomDataMatchesExhaustiveSearch) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = fixture::synthetic(seed, {120, 4, 0, 2 + seed % 3, 0.8});
    mfe::TreeParams params;
    check_against_oracle(mfe::induce_cart(d, 0, params), d, params);
    params.min_split = 2;
    params.complexity = 0.0;
    check_against_oracle(mfe::induce_cart(d, 0, params), d, params);
  }
}

TEST(Cart, PureInputIsDegenerate) {
  const auto d = mfe::Dataset("pure", {mfe::Column::numeric("x", {1, 2, 3})}, mfe::Column::categorical("y", {"a", "a", "a"}), true);
  const auto tree = mfe::induce_cart(d);
  EXPECT_TRUE(tree.degenerate());
  const auto ms = mfe::extract_model_based(tree, d);
  EXPECT_TRUE(find(ms, "leavesHomo").failed());
  EXPECT_EQ(find(ms, "nodesPerLevel").values, std::vector<double>{0});
  EXPECT_EQ(find(ms, "nodesRepeated").values, std::vector<double>{0});
  EXPECT_EQ(find(ms, "leaves").values[0], 1.0);
  EXPECT_EQ(find(ms, "treeShape").values, std::vector<double>{0});
}

TEST(Cart, CategoricalSplitIsolatesOneLevel) {
  std::vector<std::string> c;
  std::vector<std::string> y;
  for (int i = 0; i < 30; ++i) {
    c.push_back(i % 3 == 0 ? "red" : i % 3 == 1 ? "green" : "blue");
    y.push_back(i % 3 == 1 ? "go" : "stop");
  }
  const auto d = mfe::Dataset("cat", {mfe::Column::categorical("colour", c)}, mfe::Column::categorical("y", y));
  const auto tree = mfe::induce_cart(d);
  ASSERT_EQ(tree.nodes().size(), 1u);
  EXPECT_TRUE(tree.elements()[0].categorical_split);
  EXPECT_EQ(d.column(0).levels()[static_cast<std::size_t>(tree.elements()[0].category)], "green");
  std::ostringstream dump;
  tree.dump(dump, &d);
  EXPECT_NE(dump.str().find("green"), std::string::npos);
}

TEST(Cart, StumpUsesOnlyGivenAttribute) {
  const auto d = xor40();
  std::vector<std::size_t> rows(d.n());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  const std::size_t attrs[] = {1};
  const auto stump = mfe::induce_cart(d, rows, attrs, mfe::TreeParams::stump());
  EXPECT_EQ(stump.depth(), 1u);
  EXPECT_EQ(stump.elements()[0].attribute, 1u);
}

TEST(TreeModel, RejectsMalformedStructure) {
  mfe::TreeElement root;
  root.leaf = false;
  root.left = 1;
  root.right = 1;
  mfe::TreeElement child;
  child.level = 1;
  EXPECT_THROW(mfe::TreeModel({root, child}, 1, 2), mfe::Error);
  mfe::TreeElement lonely;
  lonely.level = 1;
  EXPECT_THROW(mfe::TreeModel({lonely}, 1, 2), mfe::Error);
}

TEST(ModelBased, SevenElementFixture) {
  const auto tree = seven_element_tree();
  const auto ms = mfe::extract_model_based(tree, twenty_rows());
  const double homo_mid = 4.0 / 0.375;
  EXPECT_EQ(find(ms, "leaves").values, std::vector<double>{4});
  EXPECT_EQ(find(ms, "leavesBranch").values, (std::vector<double>{1, 3, 3, 2}));
  EXPECT_EQ(find(ms, "leavesCorrob").values, (std::vector<double>{0.5, 0.15, 0.1, 0.25}));
  const auto homo = find(ms, "leavesHomo").values;
  ASSERT_EQ(homo.size(), 4u);
  EXPECT_DOUBLE_EQ(homo[0], 8.0);
  EXPECT_DOUBLE_EQ(homo[1], homo_mid);
  EXPECT_DOUBLE_EQ(homo[2], homo_mid);
  EXPECT_DOUBLE_EQ(homo[3], 8.0);
  EXPECT_EQ(find(ms, "leavesPerClass").values, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(find(ms, "nodes").values, std::vector<double>{3});
  EXPECT_DOUBLE_EQ(find(ms, "nodesPerAttr").values[0], 1.0);
  EXPECT_DOUBLE_EQ(find(ms, "nodesPerInst").values[0], 0.15);
  EXPECT_EQ(find(ms, "nodesPerLevel").values, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(find(ms, "nodesRepeated").values, (std::vector<double>{2, 1}));
  EXPECT_EQ(find(ms, "treeDepth").values, (std::vector<double>{0, 1, 1, 2, 3, 3, 2}));
  const auto imbalance = find(ms, "treeImbalance").values;
  ASSERT_EQ(imbalance.size(), 4u);
  for (double v : imbalance) EXPECT_DOUBLE_EQ(v, 0.5);
  EXPECT_EQ(find(ms, "treeShape").values, (std::vector<double>{0.5, 0.375, 0.375, 0.5}));
  const auto imp = find(ms, "varImportance").values;
  ASSERT_EQ(imp.size(), 3u);
  EXPECT_DOUBLE_EQ(imp[0], 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(imp[1], 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(imp[2], 0.0);
}

TEST(ModelBased, BalancedAndLeftHeavyShapes) {
  auto leaf = [](std::size_t level) {
    mfe::TreeElement e;
    e.level = level;
    e.inst = 5;
    e.class_counts = {5, 0};
    return e;
  };
  auto node = [](std::size_t level, int l, int r) {
    mfe::TreeElement e;
    e.leaf = false;
    e.level = level;
    e.inst = 10;
    e.left = l;
    e.right = r;
    e.impurity_decrease = 1.0;
    e.class_counts = {10, 0};
    return e;
  };
  const mfe::TreeModel balanced({node(0, 1, 4), node(1, 2, 3), leaf(2), leaf(2), node(1, 5, 6), leaf(2), leaf(2)}, 3, 2);
  const auto b = mfe::extract_model_based(balanced, twenty_rows());
  for (double v : find(b, "treeShape").values) EXPECT_DOUBLE_EQ(v, 0.5);
  for (double v : find(b, "treeImbalance").values) EXPECT_DOUBLE_EQ(v, 0.0);

  const mfe::TreeModel left_heavy({node(0, 1, 4), node(1, 2, 3), leaf(2), leaf(2), leaf(1)}, 3, 2);
  const auto l = mfe::extract_model_based(left_heavy, twenty_rows());
  EXPECT_EQ(find(l, "treeShape").values, (std::vector<double>{0.5, 0.5, 0.5}));
}

TEST(ModelBased, StructuralProperties) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto d = fixture::synthetic(seed, {80 + 10 * seed, 4, 2, 2 + seed % 3, 0.7});
    const auto tree = mfe::induce_cart(d);
    if (tree.degenerate()) continue;
    const auto ms = mfe::extract_model_based(tree, d);
    EXPECT_EQ(find(ms, "leaves").values[0], find(ms, "nodes").values[0] + 1.0);
    auto total = [&](const char* name) {
      const auto v = find(ms, name).values;
      return std::accumulate(v.begin(), v.end(), 0.0);
    };
    EXPECT_NEAR(total("leavesCorrob"), 1.0, 1e-12);
    EXPECT_NEAR(total("leavesPerClass"), 1.0, 1e-12);
    EXPECT_NEAR(total("varImportance"), 1.0, 1e-12);
    double prob = 0.0;
    for (const auto* leaf : tree.leaves()) prob += leaf->prob();
    EXPECT_NEAR(prob, 1.0, 1e-12);
    const auto depth = find(ms, "treeDepth").values;
    const double max_depth = *std::max_element(depth.begin(), depth.end());
    for (double b : find(ms, "leavesBranch").values) EXPECT_LE(b, max_depth);
    for (const auto& e : tree.elements()) {
      if (!e.leaf) {
        EXPECT_EQ(tree.elements()[static_cast<std::size_t>(e.left)].level, e.level + 1);
        EXPECT_EQ(tree.elements()[static_cast<std::size_t>(e.right)].level, e.level + 1);
      }
    }
  }
}
