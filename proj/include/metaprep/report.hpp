#pragma once

// Report files written by the CLI. Every table starts with one
// `# config: k=v;k=v` line so the outputs carry the resolved run settings.
// Nothing time-dependent is written.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaprep/evaluation.hpp"
#include "metaprep/forest.hpp"
#include "metaprep/metadb.hpp"
#include "metaprep/openml.hpp"

namespace metaprep {

// Resolved command settings in insertion order.
class RunConfig {
 public:
  void set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
      if (k == key) {
        v = std::move(value);
        return;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
  }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
      if (!out.empty()) out += ';';
      out += k + '=' + v;
    }
    return out;
  }

  std::string header_line() const { return "# config: " + to_string() + "\n"; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

// File name -> content.
using ReportFiles = std::map<std::string, std::string>;

inline void write_reports(const ReportFiles& files, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, content] : files) write_file_atomic(dir / name, content);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

// "knn:3" -> "knn-3", safe in file names.
inline std::string file_tag(std::string s) {
  for (char& c : s) {
    if (c == ':' || c == '/' || c == '\\') c = '-';
  }
  return s;
}

inline std::string impact_table(const std::vector<ImpactDistribution>& rows, const RunConfig& config) {
  std::ostringstream out;
  out << config.header_line();
  out << "group\tcount\tpositive_pct\tnegative_pct\tzero_pct\tdistance\tred\tgreen\tblue\n";
  for (const auto& d : rows) {
    out << d.group << '\t' << d.count << '\t' << format_double(d.positive) << '\t' << format_double(d.negative) << '\t'
        << format_double(d.zero) << '\t' << format_double(d.distance) << '\t' << d.rgb[0] << '\t' << d.rgb[1] << '\t'
        << d.rgb[2] << '\n';
  }
  return out.str();
}

// Distribution tables for one algorithm's meta-database.
inline ReportFiles impact_reports(const MetaDatabase& db, const RunConfig& config) {
  const std::string tag = file_tag(db.algorithm);
  ReportFiles files;
  files["impact_" + tag + "_total.tsv"] = impact_table(impact_distribution(db, ImpactGrouping::AlgorithmTotal), config);
  files["impact_" + tag + "_by_kind.tsv"] =
      impact_table(impact_distribution(db, ImpactGrouping::TransformationKind), config);
  return files;
}

inline ReportFiles evaluation_reports(const LoovReport& loov, const RunConfig& config, std::size_t max_k = 10) {
  const auto records = records_from(loov);
  const auto corpus = corpus_measures(records);
  const auto lk = lk_matrix(records, max_k);
  const auto sig = significance_matrix(lk);
  const auto gains = gain_report(records);
  const std::string head = config.header_line();
  ReportFiles files;

  {
    std::ostringstream out;
    out << head << "dataset\ttransformation\tp_pos\tp_neg\tp_zero\tpredicted\tactual\timpact\n";
    for (const auto& fold : loov.folds) {
      for (const auto& p : fold.predictions) {
        out << fold.dataset << '\t' << p.transformation << '\t' << format_double(p.probabilities.positive) << '\t'
            << format_double(p.probabilities.negative) << '\t' << format_double(p.probabilities.zero) << '\t'
            << to_string(p.predicted) << '\t' << to_string(p.actual) << '\t' << format_double(p.response_value)
            << '\n';
      }
    }
    files["predictions.tsv"] = out.str();
  }
  {
    std::ostringstream out;
    out << head << "dataset\ttraining_rows\ttraining_datasets\ttest_in_training\n";
    for (const auto& fold : loov.folds) {
      bool leaked = false;
      for (const auto& d : fold.training_datasets) leaked = leaked || d == fold.dataset;
      out << fold.dataset << '\t' << fold.training_rows << '\t' << fold.training_datasets.size() << '\t'
          << (leaked ? "yes" : "no") << '\n';
    }
    files["loov_audit.tsv"] = out.str();
  }
  {
    std::ostringstream out;
    out << head << "dataset\ttransformations\treal_positives\tpredicted_positives\tpa\tpr\toverall_recall\tg\n";
    for (const auto& r : records) {
      if (!r.relevant()) continue;
      const auto m = dataset_measures(r);
      out << r.dataset << '\t' << r.size() << '\t' << r.real_positives() << '\t' << r.predicted_positives() << '\t'
          << format_optional(m.pa) << '\t' << format_optional(m.pr) << '\t' << format_optional(m.overall_recall)
          << '\t' << format_optional(m.g) << '\n';
    }
    files["dataset_measures.tsv"] = out.str();
  }
  {
    const auto c = triclass_confusion(records);
    std::ostringstream out;
    out << head << "predicted\tactual_positive\tactual_negative\tactual_zero\n";
    out << "positive\t" << format_double(c.TP) << '\t' << format_double(c.FP_N) << '\t' << format_double(c.FP_0) << '\n';
    out << "negative\t" << format_double(c.FN_P) << '\t' << format_double(c.TN) << '\t' << format_double(c.FN_0) << '\n';
    out << "zero\t" << format_double(c.F0_P) << '\t' << format_double(c.F0_N) << '\t' << format_double(c.T0) << '\n';
    files["confusion.tsv"] = out.str();
  }
  {
    std::ostringstream out;
    out << head << "L\tK\tcount\thits\ttrials\taccuracy\tmean_ratio\trandom_baseline\tp_value\tsignificant\n";
    for (std::size_t L = 0; L <= lk.max_l; ++L) {
      for (std::size_t K = 1; K <= lk.max_k; ++K) {
        const auto& cell = lk.at(L, K);
        if (cell.count == 0) continue;
        const double p = *sig[L][K - 1];
        out << L << '\t' << K << '\t' << cell.count << '\t' << cell.hits << '\t' << cell.trials << '\t'
            << format_double(cell.accuracy) << '\t' << format_double(cell.mean_ratio) << '\t'
            << format_double(cell.random_baseline) << '\t' << format_double(p) << '\t'
            << (p < kSignificanceLevel ? "yes" : "no") << '\n';
      }
    }
    files["lk_matrix.tsv"] = out.str();
  }
  {
    std::ostringstream out;
    out << head << "K\tdatasets\tweighted_accuracy\tweighted_random\n";
    for (std::size_t K = 1; K <= lk.max_k; ++K) {
      if (lk.column_count[K - 1] == 0) continue;
      out << K << '\t' << lk.column_count[K - 1] << '\t' << format_double(lk.weighted_average[K - 1]) << '\t'
          << format_double(lk.weighted_random[K - 1]) << '\n';
    }
    files["random_pick.tsv"] = out.str();
  }
  {
    std::ostringstream out;
    out << head << "dataset\tndcg\tdcg\tdcg_best\tdcg_worst\tndcg_top1\n";
    for (const auto& d : gains.datasets) {
      out << d.dataset << '\t' << format_optional(d.all.ndcg) << '\t' << format_double(d.all.recommended) << '\t'
          << format_double(d.all.best) << '\t' << format_double(d.all.worst) << '\t' << format_optional(d.top1.ndcg)
          << '\n';
    }
    files["ndcg.tsv"] = out.str();
  }

  nlohmann::ordered_json s;
  s["config"] = config.to_json();
  s["datasets"] = records.size();
  s["relevant_datasets"] = corpus.relevant;
  s["positive_rate"] = lk.positive_rate;
  s["measures"] = {{"pa", corpus.pa},
                   {"pr", corpus.pr},
                   {"overall_recall", corpus.overall_recall},
                   {"g", corpus.g},
                   {"pa_datasets", corpus.pa_count},
                   {"pr_datasets", corpus.pr_count},
                   {"overall_recall_datasets", corpus.or_count},
                   {"g_datasets", corpus.g_count},
                   {"pr_dropped_terms", corpus.pr_dropped_terms}};
  s["ndcg"] = {{"mean", gains.mean_ndcg},
               {"datasets", gains.count},
               {"mean_top1", gains.mean_ndcg_top1},
               {"datasets_top1", gains.count_top1}};
  nlohmann::ordered_json topk = nlohmann::ordered_json::array();
  for (std::size_t K = 1; K <= lk.max_k; ++K) {
    if (lk.column_count[K - 1] == 0) continue;
    topk.push_back({{"k", K},
                    {"datasets", lk.column_count[K - 1]},
                    {"accuracy", lk.weighted_average[K - 1]},
                    {"random", lk.weighted_random[K - 1]}});
  }
  s["top_k"] = topk;
  files["summary.json"] = s.dump(2) + "\n";
  return files;
}

}  // namespace metaprep
