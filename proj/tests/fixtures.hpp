#ifndef MFE_TESTS_FIXTURES_HPP
#define MFE_TESTS_FIXTURES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/rng.hpp"

namespace fixture {

inline const std::vector<double> kX1{1.2, 3.4, 2.2, 5.1, 4.4, 0.7, 3.3, 2.9};
inline const std::vector<double> kX2{10, 12, 9, 15, 14, 8, 12, 10};
inline const std::vector<std::string> kC1{"a", "b", "a", "c", "b", "a", "c", "b"};
inline const std::vector<std::string> kC2{"u", "v", "v", "u", "u", "v", "u", "v"};
inline const std::vector<std::string> kY{"p", "n", "p", "n", "n", "p", "n", "p"};

/// Hand-authored 8x4 mixed dataset: two numeric and two categorical columns.
inline mfe::Dataset mixed8() {
  return mfe::Dataset("mixed8",
                      {mfe::Column::numeric("x1", kX1), mfe::Column::numeric("x2", kX2),
                       mfe::Column::categorical("c1", kC1), mfe::Column::categorical("c2", kC2)},
                      mfe::Column::categorical("class", kY));
}

inline mfe::Column labels(const std::string& name, const std::vector<int>& codes, std::size_t q) {
  std::vector<std::string> levels;
  for (std::size_t c = 0; c < q; ++c) levels.push_back("c" + std::to_string(c));
  return mfe::Column::from_codes(name, codes, levels);
}

struct SyntheticSpec {
  std::size_t n = 100;
  std::size_t numeric = 3;
  std::size_t categorical = 2;
  std::size_t classes = 2;
  double signal = 1.0;  // class shift of the informative numeric columns
};

/// Mixed-type data whose first half of numeric columns and first
/// categorical column depend on the class; the rest is noise.
inline mfe::Dataset synthetic(std::uint64_t seed, const SyntheticSpec& spec) {
  mfe::Rng rng(seed);
  std::vector<int> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) y[i] = static_cast<int>(i % spec.classes);
  rng.shuffle(y);
  std::vector<mfe::Column> cols;
  for (std::size_t j = 0; j < spec.numeric; ++j) {
    std::vector<double> v(spec.n);
    const bool informative = j < (spec.numeric + 1) / 2;
    for (std::size_t i = 0; i < spec.n; ++i) v[i] = rng.normal() + (informative ? spec.signal * y[i] : 0.0);
    cols.push_back(mfe::Column::numeric("num" + std::to_string(j), std::move(v)));
  }
  for (std::size_t j = 0; j < spec.categorical; ++j) {
    std::vector<std::string> v(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
      const bool follow = j == 0 && rng.uniform() < 0.7;
      const auto level = follow ? static_cast<std::uint64_t>(y[i]) % 3 : rng.below(3);
      v[i] = "L" + std::to_string(level);
    }
    cols.push_back(mfe::Column::categorical("cat" + std::to_string(j), v));
  }
  return mfe::Dataset("synthetic" + std::to_string(seed), std::move(cols), labels("class", y, spec.classes));
}

}  // namespace fixture

#endif  // MFE_TESTS_FIXTURES_HPP
