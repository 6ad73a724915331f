#ifndef MFE_TOOLS_CLI_HPP
#define MFE_TOOLS_CLI_HPP

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mfe/mfe.hpp"

namespace mfe::cli {

enum ExitCode : int { ok = 0, usage = 1, data = 2 };

namespace detail {

/// Writes to `path` when given, to `out` otherwise.
template <typename Fn>
int emit(const std::string& path, std::ostream& out, std::ostream& err, Fn&& write) {
  if (path.empty() || path == "-") {
    write(out);
    return ok;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot write '" << path << "'\n";
    return data;
  }
  write(file);
  return ok;
}

template <typename Report>
void write_report(const Report& report, const std::string& format, std::ostream& os) {
  if (format == "text") {
    write_text(report, os);
  } else {
    os << to_json(report).dump(2) << '\n';
  }
}

}  // namespace detail

/// Runs the command line; returns 0 on success, 1 on a usage error and
/// 2 on a data error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Meta-feature extraction and meta-base analysis for tabular classification datasets", "mfe"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  // extract
  auto* extract = app.add_subcommand("extract", "Characterize datasets and print a meta-base");
  std::vector<std::string> paths;
  std::vector<std::string> groups;
  std::string scenario = "transform";
  std::size_t folds = 10;
  std::string score = "accuracy";
  std::uint64_t seed = 0;
  std::string out_format = "csv";
  std::string output;
  bool raw = false;
  std::vector<std::string> summary;
  std::size_t bins = 10;
  std::string cor = "pearson";
  std::string target;
  char separator = ',';
  std::size_t workers = 1;
  bool proportions = false;

  std::vector<std::string> group_names;
  for (auto g : kAllGroups) group_names.emplace_back(to_string(g));
  extract->add_option("paths", paths, "CSV or ARFF files")->required();
  extract->add_option("--groups", groups, "Measure groups (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember(group_names));
  extract->add_option("--scenario", scenario, "transform, ignore, rescale, by-class or 2-folds")
      ->check(CLI::IsMember({"transform", "ignore", "rescale", "by-class", "2-folds"}))
      ->capture_default_str();
  extract->add_option("--folds", folds, "Cross-validation folds for landmarking")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  extract->add_option("--score", score, "accuracy, balanced_accuracy or kappa")
      ->check(CLI::IsMember({"accuracy", "balanced_accuracy", "kappa"}))
      ->capture_default_str();
  extract->add_option("--seed", seed, "Random seed")->capture_default_str();
  extract->add_option("--out", out_format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  extract->add_option("-o,--output", output, "Output file (default: standard output)");
  extract->add_flag("--raw", raw, "Emit every measure value instead of summaries");
  std::vector<std::string> summarizer_names;
  for (auto s : {Summarizer::mean, Summarizer::sd, Summarizer::min, Summarizer::max, Summarizer::median,
                 Summarizer::quartiles, Summarizer::iq_range, Summarizer::range, Summarizer::kurtosis,
                 Summarizer::skewness, Summarizer::count, Summarizer::histogram}) {
    summarizer_names.emplace_back(to_string(s));
  }
  extract->add_option("--summary", summary, "Summarization functions (comma separated)")
      ->delimiter(',')
      ->check(CLI::IsMember(summarizer_names));
  extract->add_option("--bins", bins, "Histogram bins")->check(CLI::Range(std::size_t{2}, std::size_t{10000}))->capture_default_str();
  extract->add_option("--cor", cor, "Correlation method")
      ->check(CLI::IsMember({"pearson", "spearman", "kendall"}))
      ->capture_default_str();
  extract->add_option("--target", target, "Target column (default: last)");
  extract->add_option("--sep", separator, "CSV separator")->capture_default_str();
  extract->add_option("--workers", workers, "Datasets processed concurrently")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}))
      ->capture_default_str();
  extract->add_flag("--proportions", proportions, "Also emit propNorm and propOutliers");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Analyses over a meta-base");
  analyze->require_subcommand(1);
  std::string metabase_path;
  std::string format = "json";
  double threshold = 0.95;
  std::string dump_corr;
  auto* redundancy = analyze->add_subcommand("redundancy", "Correlation-based redundancy filter");
  redundancy->add_option("metabase", metabase_path, "Meta-base CSV or JSON")->required();
  redundancy->add_option("--threshold", threshold, "Absolute Spearman threshold in (0, 1]")
      ->check(CLI::Validator(
          [](const std::string& s) {
            double v = 0.0;
            try {
              v = std::stod(s);
            } catch (...) {
              return std::string("not a number");
            }
            return (v > 0.0 && v <= 1.0) ? std::string() : std::string("threshold must lie in (0, 1]");
          },
          "(0,1]"))
      ->capture_default_str();
  redundancy->add_option("--dump-corr", dump_corr, "Write the correlation matrix as CSV");
  auto* missing = analyze->add_subcommand("missing", "Missing-value counts per group and summarizer");
  missing->add_option("metabase", metabase_path, "Meta-base CSV or JSON")->required();
  auto* timing = analyze->add_subcommand("timing", "Per-group extraction time by dataset size");
  timing->add_option("metabase", metabase_path, "Meta-base CSV or JSON")->required();
  for (auto* sub : {redundancy, missing, timing}) {
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    sub->add_option("-o,--output", output, "Output file (default: standard output)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? ok : usage;
  }

  try {
    if (extract->parsed()) {
      ExtractionConfig config;
      if (!groups.empty()) {
        config.groups.clear();
        for (const auto& g : groups) {
          const auto parsed = *parse_group(g);
          if (!config.wants(parsed)) config.groups.push_back(parsed);
        }
      }
      config.scenario = *parse_scenario(scenario);
      config.folds = folds;
      config.score = score == "kappa" ? ScoreMetric::kappa
                     : score == "balanced_accuracy" ? ScoreMetric::balanced_accuracy
                                                    : ScoreMetric::accuracy;
      config.seed = seed;
      config.raw_output = raw;
      config.proportions = proportions;
      config.cor_method = cor == "spearman" ? CorrelationMethod::spearman
                          : cor == "kendall" ? CorrelationMethod::kendall
                                             : CorrelationMethod::pearson;
      if (!summary.empty()) {
        config.summarizers.functions.clear();
        for (const auto& s : summary) config.summarizers.functions.push_back(*parse_summarizer(s));
      }
      config.summarizers.histogram_bins = bins;
      try {
        config.resolved().validate();
      } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
      }
      std::vector<std::filesystem::path> files(paths.begin(), paths.end());
      LoadOptions load;
      load.target_name = target;
      load.separator = separator;
      const auto records = run_corpus(files, config, load, workers);
      std::size_t failed = 0;
      for (const auto& r : records) {
        if (!r.error.empty()) {
          ++failed;
          err << "error: " << r.dataset << ": " << r.error << '\n';
        }
        for (const auto& w : r.warnings) err << "warning: " << r.dataset << ": " << w << '\n';
      }
      const int written = detail::emit(output, out, err, [&](std::ostream& os) {
        if (out_format == "json") {
          os << metabase_json(records).dump(2) << '\n';
        } else {
          write_metabase_csv(build_metabase(records), os);
        }
      });
      if (written != ok) return written;
      return failed == records.size() ? data : ok;
    }

    const Metabase mb = load_metabase(metabase_path);
    if (redundancy->parsed()) {
      const auto report = redundancy_filter(mb, threshold);
      if (!dump_corr.empty()) {
        std::vector<std::size_t> columns;
        const auto constant = constant_features(mb);
        for (std::size_t j = 0; j < mb.features.size(); ++j) {
          if (!std::binary_search(constant.begin(), constant.end(), j)) columns.push_back(j);
        }
        std::ofstream file(dump_corr, std::ios::binary);
        if (!file) {
          err << "error: cannot write '" << dump_corr << "'\n";
          return data;
        }
        write_correlation_csv(correlation_matrix(mb, columns), file);
      }
      return detail::emit(output, out, err, [&](std::ostream& os) { detail::write_report(report, format, os); });
    }
    if (missing->parsed()) {
      const auto report = missing_report(mb);
      return detail::emit(output, out, err, [&](std::ostream& os) { detail::write_report(report, format, os); });
    }
    if (timing->parsed()) {
      const auto report = timing_report(mb);
      return detail::emit(output, out, err, [&](std::ostream& os) { detail::write_report(report, format, os); });
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return data;
  }
  err << app.help();
  return usage;
}

}  // namespace mfe::cli

#endif  // MFE_TOOLS_CLI_HPP
