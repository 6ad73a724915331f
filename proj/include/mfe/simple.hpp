#ifndef MFE_SIMPLE_HPP
#define MFE_SIMPLE_HPP

#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/measure.hpp"

namespace mfe {

/// The simple measures: counts and ratios of attributes, instances and classes.
inline std::vector<MeasureResult> extract_simple(const Dataset& data) {
  const auto n = static_cast<double>(data.n());
  const auto d = static_cast<double>(data.d());
  const auto num = static_cast<double>(data.numeric_count());
  const auto cat = static_cast<double>(data.categorical_count());

  double binary = 0.0;
  for (const auto& col : data.columns()) binary += col.distinct_count() == 2 ? 1.0 : 0.0;

  std::vector<MeasureResult> out;
  out.push_back(d > 0 ? MeasureResult::single("attrToInst", d / n)
                      : MeasureResult::single("attrToInst", 0.0));
  if (num > 0) {
    out.push_back(MeasureResult::single("catToNum", cat / num));
  } else {
    auto r = MeasureResult::failure("catToNum", ExceptionKind::division_by_zero, false);
    r.substitutes = {d};
    out.push_back(std::move(r));
  }

  std::vector<double> freq(data.q(), 0.0);
  for (int y : data.labels()) freq[static_cast<std::size_t>(y)] += 1.0;
  for (double& f : freq) f /= n;
  out.push_back(MeasureResult::multi("freqClass", std::move(freq)));

  out.push_back(d > 0 ? MeasureResult::single("instToAttr", n / d)
                      : MeasureResult::failure("instToAttr", ExceptionKind::division_by_zero, false));
  out.push_back(MeasureResult::single("nrAttr", d));
  out.push_back(MeasureResult::single("nrBin", binary));
  out.push_back(MeasureResult::single("nrCat", d - num));
  out.push_back(MeasureResult::single("nrClass", static_cast<double>(data.q())));
  out.push_back(MeasureResult::single("nrInst", n));
  out.push_back(MeasureResult::single("nrNum", num));
  if (cat > 0) {
    out.push_back(MeasureResult::single("numToCat", num / cat));
  } else {
    auto r = MeasureResult::failure("numToCat", ExceptionKind::division_by_zero, false);
    r.substitutes = {d};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mfe

#endif  // MFE_SIMPLE_HPP
