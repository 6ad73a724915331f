#ifndef MFE_ENGINE_HPP
#define MFE_ENGINE_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "mfe/dataset.hpp"
#include "mfe/error.hpp"
#include "mfe/infotheo.hpp"
#include "mfe/io.hpp"
#include "mfe/landmarking.hpp"
#include "mfe/measure.hpp"
#include "mfe/model_based.hpp"
#include "mfe/simple.hpp"
#include "mfe/statistical.hpp"
#include "mfe/summarize.hpp"
#include "mfe/transform.hpp"
#include "mfe/tree.hpp"

namespace mfe {

enum class Group { simple, statistical, infotheo, model, landmarking };

inline constexpr Group kAllGroups[] = {Group::simple, Group::statistical, Group::infotheo, Group::model,
                                       Group::landmarking};

inline std::string_view to_string(Group g) {
  switch (g) {
    case Group::simple: return "simple";
    case Group::statistical: return "statistical";
    case Group::infotheo: return "infotheo";
    case Group::model: return "model";
    case Group::landmarking: return "landmarking";
  }
  return "simple";
}

inline std::optional<Group> parse_group(std::string_view name) {
  for (auto g : kAllGroups) {
    if (to_string(g) == name) return g;
  }
  return std::nullopt;
}

enum class Scenario { transform, ignore, rescale, by_class, two_folds };

inline std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::transform: return "transform";
    case Scenario::ignore: return "ignore";
    case Scenario::rescale: return "rescale";
    case Scenario::by_class: return "by-class";
    case Scenario::two_folds: return "2-folds";
  }
  return "transform";
}

inline std::optional<Scenario> parse_scenario(std::string_view name) {
  for (auto s : {Scenario::transform, Scenario::ignore, Scenario::rescale, Scenario::by_class, Scenario::two_folds}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

struct ExtractionConfig {
  std::vector<Group> groups{std::begin(kAllGroups), std::end(kAllGroups)};
  Scenario scenario = Scenario::transform;
  SummarizerSpec summarizers;
  bool statistical_transform = true;
  bool infotheo_transform = true;
  bool by_class = false;
  bool rescale = false;
  std::size_t folds = 10;
  ScoreMetric score = ScoreMetric::accuracy;
  CorrelationMethod cor_method = CorrelationMethod::pearson;
  double tau = 0.5;
  double trim = 0.2;
  bool proportions = false;
  std::uint64_t seed = 0;
  bool raw_output = false;

  void validate() const {
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
    if (!(trim >= 0.0 && trim < 0.5)) throw ConfigError("trim fraction must lie in [0, 0.5)");
    if (groups.empty()) throw ConfigError("no measure group selected");
    if (!raw_output) summarizers.validate();
  }

  /// Copy with the flags the scenario implies.
  ExtractionConfig resolved() const {
    ExtractionConfig c = *this;
    c.statistical_transform = scenario != Scenario::ignore;
    c.infotheo_transform = scenario != Scenario::ignore;
    c.rescale = scenario == Scenario::rescale;
    c.by_class = scenario == Scenario::by_class;
    if (scenario == Scenario::two_folds) c.folds = 2;
    return c;
  }

  bool wants(Group g) const { return std::find(groups.begin(), groups.end(), g) != groups.end(); }
};

/// How an exceptional measure was resolved.
struct ExceptionEntry {
  std::string measure;  // "<group>.<measure>"
  std::string kind;
  std::string handling;  // "default", "dropped", "missing"
};

struct MetaFeatureRecord {
  std::string dataset;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t q = 0;
  std::vector<std::pair<std::string, std::optional<double>>> features;
  std::vector<std::pair<std::string, double>> timing;  // group -> seconds
  double total_seconds = 0.0;
  std::vector<ExceptionEntry> exceptions;
  std::vector<std::string> warnings;
  std::string error;

  std::optional<double> feature(std::string_view key) const {
    for (const auto& [k, v] : features) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  bool has_feature(std::string_view key) const {
    return std::any_of(features.begin(), features.end(), [&](const auto& f) { return f.first == key; });
  }

  std::size_t missing_count() const {
    return static_cast<std::size_t>(std::count_if(features.begin(), features.end(), [](const auto& f) { return !f.second; }));
  }
};

namespace detail {

/// Applies the default policy to one raw measure result, logs the
/// exception once, then summarizes (or emits raw values) into `record`.
inline void emit_measure(std::string_view group, MeasureResult result, const ExtractionConfig& config,
                         MetaFeatureRecord& record) {
  const std::string qualified = std::string(group) + "." + result.name;
  if (result.failed() || result.failed_elements() > 0) {
    const auto kind = result.exception ? *result.exception : result.element_exception.value_or(ExceptionKind::domain);
    std::string handling;
    if (has_measure_default(result.name)) {
      try {
        result = apply_measure_default(result);
        handling = "default";
      } catch (const NoDefaultError&) {
      }
    }
    if (handling.empty()) handling = (!result.failed() && result.multi_valued) ? "dropped" : "missing";
    record.exceptions.push_back({qualified, std::string(to_string(kind)), handling});
  }

  if (config.raw_output) {
    if (!result.multi_valued) {
      const bool ok = !result.values.empty() && !std::isnan(result.values.front());
      record.features.emplace_back(qualified, ok ? std::optional<double>(result.values.front()) : std::nullopt);
      return;
    }
    for (std::size_t i = 0; i < result.values.size(); ++i) {
      const double v = result.values[i];
      record.features.emplace_back(qualified + "." + std::to_string(i),
                                   std::isnan(v) ? std::nullopt : std::optional<double>(v));
    }
    if (result.failed()) record.features.emplace_back(qualified + ".0", std::nullopt);
    return;
  }

  const auto& spec = result.multi_valued ? config.summarizers : SummarizerSpec::identity_marker();
  for (auto& [key, value] : summarize(result, spec)) {
    record.features.emplace_back(std::string(group) + "." + key,
                                 std::isfinite(value) ? std::optional<double>(value) : std::nullopt);
  }
}

/// Concatenates same-named measures computed on per-class partitions.
/// Single-valued measures become multi-valued; a failed single value
/// contributes NaN so element defaults can still apply.
inline std::vector<MeasureResult> pool_by_class(const std::vector<std::vector<MeasureResult>>& parts) {
  std::vector<MeasureResult> pooled;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::size_t> contributed;
  for (const auto& part : parts) {
    for (const auto& r : part) {
      auto [it, inserted] = index.try_emplace(r.name, pooled.size());
      if (inserted) {
        MeasureResult m;
        m.name = r.name;
        m.multi_valued = true;
        pooled.push_back(std::move(m));
      }
      auto& m = pooled[it->second];
      if (r.failed()) {
        if (!m.element_exception) m.element_exception = r.exception;
        if (!r.multi_valued) {
          m.values.push_back(stats::kNaN);
          m.substitutes.push_back(stats::kNaN);
          ++contributed[r.name];
        }
        continue;
      }
      if (r.element_exception && !m.element_exception) m.element_exception = r.element_exception;
      for (std::size_t i = 0; i < r.values.size(); ++i) {
        m.values.push_back(r.values[i]);
        m.substitutes.push_back(i < r.substitutes.size() ? r.substitutes[i] : stats::kNaN);
      }
      ++contributed[r.name];
    }
  }
  for (auto& m : pooled) {
    if (contributed[m.name] == 0) {
      const auto kind = m.element_exception.value_or(ExceptionKind::domain);
      m = MeasureResult::failure(m.name, kind, true);
    }
  }
  return pooled;
}

inline void append(std::vector<MeasureResult>& into, std::vector<MeasureResult> more) {
  for (auto& m : more) into.push_back(std::move(m));
}

inline std::vector<MeasureResult> statistical_measures(const Dataset& view, const ExtractionConfig& config,
                                                       bool discriminant) {
  std::vector<MeasureResult> out = extract_descriptive(view, config.trim);
  append(out, extract_correlation(view, config.cor_method, config.tau));
  append(out, extract_distribution_counts(view, config.seed, config.proportions));
  if (discriminant) {
    append(out, extract_discriminant(view));
  } else {
    out.push_back(covariance_eigenvalues(view));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace detail

/// Characterizes one dataset under the configured scenario.
inline MetaFeatureRecord run_extraction(const Dataset& dataset, const ExtractionConfig& user_config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const ExtractionConfig config = user_config.resolved();
  config.validate();

  MetaFeatureRecord record;
  record.dataset = dataset.name();
  record.n = dataset.n();
  record.d = dataset.d();
  record.q = dataset.q();

  const Dataset base = config.rescale ? rescale_minmax(dataset) : dataset;

  for (auto group : kAllGroups) {
    if (!config.wants(group)) continue;
    const auto group_start = Clock::now();
    std::vector<MeasureResult> results;
    switch (group) {
      case Group::simple: results = extract_simple(base); break;
      case Group::statistical: {
        const Dataset view = config.statistical_transform ? binarize(base) : base.only(ColumnKind::numeric);
        if (config.by_class) {
          std::vector<std::vector<MeasureResult>> parts;
          for (const auto& part : split_by_class(view)) parts.push_back(detail::statistical_measures(part, config, false));
          results = detail::pool_by_class(parts);
        } else {
          results = detail::statistical_measures(view, config, true);
        }
        break;
      }
      case Group::infotheo: {
        const Dataset view = config.infotheo_transform ? discretize(base) : base.only(ColumnKind::categorical);
        results = extract_infotheo(view);
        break;
      }
      case Group::model: results = extract_model_based(induce_cart(base, config.seed), base); break;
      case Group::landmarking: {
        if (config.folds > base.n()) {
          record.warnings.push_back("landmarking skipped: " + std::to_string(config.folds) + " folds exceed " +
                                    std::to_string(base.n()) + " instances");
          for (const char* name : {"bestNode", "eliteNN", "linearDiscr", "naiveBayes", "oneNN", "randomNode", "worstNode"}) {
            results.push_back(MeasureResult::failure(name, ExceptionKind::insufficient_data, true));
          }
          break;
        }
        const auto plan = make_folds(base, config.folds, config.seed);
        for (const auto& w : plan.warnings) record.warnings.push_back(w);
        results = extract_landmarking(base, LandmarkingConfig{config.folds, config.score, config.seed});
        break;
      }
    }
    for (auto& r : results) detail::emit_measure(to_string(group), std::move(r), config, record);
    const std::chrono::duration<double> elapsed = Clock::now() - group_start;
    record.timing.emplace_back(std::string(to_string(group)), elapsed.count());
  }
  const std::chrono::duration<double> total = Clock::now() - start;
  record.total_seconds = total.count();
  return record;
}

/// Loads and characterizes every path; a dataset that fails to load or
/// extract becomes a record carrying only its error message. Up to
/// `workers` datasets run concurrently; output order follows `paths`.
inline std::vector<MetaFeatureRecord> run_corpus(const std::vector<std::filesystem::path>& paths,
                                                 const ExtractionConfig& config, const LoadOptions& load = {},
                                                 std::size_t workers = 1) {
  if (paths.empty()) throw ConfigError("corpus is empty");
  config.resolved().validate();
  std::vector<MetaFeatureRecord> records(paths.size());
  auto process = [&](std::size_t i) {
    try {
      records[i] = run_extraction(load_dataset(paths[i], load), config);
    } catch (const std::exception& e) {
      records[i] = MetaFeatureRecord{};
      records[i].dataset = paths[i].stem().string();
      records[i].error = e.what();
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, paths.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < paths.size(); ++i) process(i);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < paths.size(); i = next++) process(i);
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace mfe

#endif  // MFE_ENGINE_HPP
