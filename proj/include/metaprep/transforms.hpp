#pragma once

// Pre-processing operators, their enumeration for a dataset, and a canonical
// text form.
//
// Text grammar (whitespace-free, parse/print round-trip):
//
//   spec   := kind '(' args ')'
//   kind   := discretize_sup | discretize_unsup | nominal_to_binary_sup
//           | nominal_to_binary_unsup | normalize | standardize
//           | impute_continuous | impute_categorical | pca
//   args   := arg (',' arg)*
//   arg    := 'global' | 'all' | 'attr=' INT | 'bins=' INT | 'var=' NUMBER
//
// Printed forms: discretize_sup(attr=3), discretize_unsup(all,bins=10),
// normalize(global), pca(var=0.95).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"
#include "metaprep/metafeatures.hpp"

namespace metaprep {

class SpecError : public Error {
 public:
  using Error::Error;
};

enum class TransformKind {
  DiscretizeSupervised,
  DiscretizeUnsupervised,
  NominalToBinarySupervised,
  NominalToBinaryUnsupervised,
  Normalize,
  Standardize,
  ImputeMissingContinuous,
  ImputeMissingCategorical,
  PrincipalComponents,
};

inline constexpr std::array<TransformKind, 9> kAllTransformKinds = {
    TransformKind::DiscretizeSupervised,     TransformKind::DiscretizeUnsupervised,
    TransformKind::NominalToBinarySupervised, TransformKind::NominalToBinaryUnsupervised,
    TransformKind::Normalize,                TransformKind::Standardize,
    TransformKind::ImputeMissingContinuous,  TransformKind::ImputeMissingCategorical,
    TransformKind::PrincipalComponents,
};

inline constexpr std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::DiscretizeSupervised: return "discretize_sup";
    case TransformKind::DiscretizeUnsupervised: return "discretize_unsup";
    case TransformKind::NominalToBinarySupervised: return "nominal_to_binary_sup";
    case TransformKind::NominalToBinaryUnsupervised: return "nominal_to_binary_unsup";
    case TransformKind::Normalize: return "normalize";
    case TransformKind::Standardize: return "standardize";
    case TransformKind::ImputeMissingContinuous: return "impute_continuous";
    case TransformKind::ImputeMissingCategorical: return "impute_categorical";
    case TransformKind::PrincipalComponents: return "pca";
  }
  return "?";
}

inline std::optional<TransformKind> transform_kind_from_string(std::string_view s) {
  for (auto k : kAllTransformKinds) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

// Local kinds target one attribute or all compatible ones; global kinds
// always act on every compatible attribute.
inline constexpr bool is_local_kind(TransformKind kind) {
  return kind == TransformKind::DiscretizeSupervised || kind == TransformKind::DiscretizeUnsupervised ||
         kind == TransformKind::NominalToBinaryUnsupervised;
}

inline constexpr bool is_supervised_kind(TransformKind kind) {
  return kind == TransformKind::DiscretizeSupervised || kind == TransformKind::NominalToBinarySupervised;
}

inline constexpr AttributeKind input_type(TransformKind kind) {
  switch (kind) {
    case TransformKind::NominalToBinarySupervised:
    case TransformKind::NominalToBinaryUnsupervised:
    case TransformKind::ImputeMissingCategorical:
      return AttributeKind::Categorical;
    default:
      return AttributeKind::Continuous;
  }
}

struct Scope {
  enum class Type { Global, Local, LocalAll };
  Type type = Type::Global;
  std::size_t attr = 0;  // Local only

  static Scope global() { return {Type::Global, 0}; }
  static Scope local(std::size_t attr) { return {Type::Local, attr}; }
  static Scope all() { return {Type::LocalAll, 0}; }

  friend bool operator==(const Scope&, const Scope&) = default;
};

inline constexpr int kDefaultBins = 10;
inline constexpr double kDefaultVarianceCoverage = 0.95;

class TransformationSpec {
 public:
  // Fills default params and checks scope legality; throws SpecError.
  TransformationSpec(TransformKind kind, Scope scope, std::map<std::string, double> params = {})
      : kind_(kind), scope_(scope), params_(std::move(params)) {
    if (is_local_kind(kind_) && scope_.type == Scope::Type::Global) {
      throw SpecError(std::string(metaprep::to_string(kind_)) + " is local: scope must be attr=i or all");
    }
    if (!is_local_kind(kind_) && scope_.type != Scope::Type::Global) {
      throw SpecError(std::string(metaprep::to_string(kind_)) + " is global: scope must be global");
    }
    std::set<std::string> allowed;
    if (kind_ == TransformKind::DiscretizeUnsupervised) {
      allowed = {"bins"};
      params_.try_emplace("bins", kDefaultBins);
      const double b = params_["bins"];
      if (b < 1 || b != std::floor(b)) throw SpecError("bins must be a positive integer");
    } else if (kind_ == TransformKind::PrincipalComponents) {
      allowed = {"variance_coverage"};
      params_.try_emplace("variance_coverage", kDefaultVarianceCoverage);
      const double v = params_["variance_coverage"];
      if (!(v > 0.0 && v <= 1.0)) throw SpecError("variance coverage must lie in (0, 1]");
    }
    for (const auto& [key, value] : params_) {
      if (!allowed.count(key)) throw SpecError("unknown parameter '" + key + "' for " + std::string(metaprep::to_string(kind_)));
    }
  }

  TransformKind kind() const { return kind_; }
  const Scope& scope() const { return scope_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& key) const { return params_.at(key); }

  std::string to_string() const {
    std::string out(metaprep::to_string(kind_));
    out += '(';
    std::vector<std::string> args;
    switch (scope_.type) {
      case Scope::Type::Global:
        if (kind_ != TransformKind::PrincipalComponents) args.emplace_back("global");
        break;
      case Scope::Type::Local: args.push_back("attr=" + std::to_string(scope_.attr)); break;
      case Scope::Type::LocalAll: args.emplace_back("all"); break;
    }
    if (kind_ == TransformKind::DiscretizeUnsupervised) {
      args.push_back("bins=" + std::to_string(static_cast<long long>(params_.at("bins"))));
    }
    if (kind_ == TransformKind::PrincipalComponents) {
      args.push_back("var=" + format_double(params_.at("variance_coverage")));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i];
    }
    out += ')';
    return out;
  }

  static TransformationSpec parse(std::string_view text) {
    text = trim(text);
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') throw SpecError("malformed transformation '" + std::string(text) + "'");
    const auto kind = transform_kind_from_string(trim(text.substr(0, open)));
    if (!kind) throw SpecError("unknown transformation kind in '" + std::string(text) + "'");
    const auto inner = trim(text.substr(open + 1, text.size() - open - 2));
    std::optional<Scope> scope;
    std::map<std::string, double> params;
    if (!inner.empty()) {
      for (const auto& raw : split(inner, ',')) {
        const auto arg = trim(raw);
        if (arg == "global") {
          scope = Scope::global();
        } else if (arg == "all") {
          scope = Scope::all();
        } else if (arg.substr(0, 5) == "attr=") {
          const auto v = parse_int(arg.substr(5));
          if (!v || *v < 0) throw SpecError("bad attribute index in '" + std::string(text) + "'");
          scope = Scope::local(static_cast<std::size_t>(*v));
        } else if (arg.substr(0, 5) == "bins=") {
          const auto v = parse_int(arg.substr(5));
          if (!v) throw SpecError("bad bins in '" + std::string(text) + "'");
          params["bins"] = static_cast<double>(*v);
        } else if (arg.substr(0, 4) == "var=") {
          const auto v = parse_double(arg.substr(4));
          if (!v) throw SpecError("bad variance coverage in '" + std::string(text) + "'");
          params["variance_coverage"] = *v;
        } else {
          throw SpecError("unknown argument '" + std::string(arg) + "'");
        }
      }
    }
    if (!scope) {
      if (is_local_kind(*kind)) throw SpecError("missing scope in '" + std::string(text) + "'");
      scope = Scope::global();
    }
    return TransformationSpec(*kind, *scope, std::move(params));
  }

  friend bool operator==(const TransformationSpec&, const TransformationSpec&) = default;

 private:
  TransformKind kind_;
  Scope scope_;
  std::map<std::string, double> params_;
};

struct TransformedDataset {
  Dataset dataset;
  std::string source;
  TransformationSpec spec;
};

// ---------------------------------------------------------------------------
// Enumeration.

inline std::vector<TransformationSpec> enumerate_applicable(const Dataset& ds) {
  std::vector<TransformationSpec> out;
  const auto conts = ds.predictors_of_kind(AttributeKind::Continuous);
  const auto cats = ds.predictors_of_kind(AttributeKind::Categorical);
  auto has_missing = [&](const std::vector<std::size_t>& attrs) {
    for (std::size_t a : attrs) {
      for (double v : ds.column(a)) {
        if (is_missing(v)) return true;
      }
    }
    return false;
  };
  for (auto kind : kAllTransformKinds) {
    const auto& compatible = input_type(kind) == AttributeKind::Continuous ? conts : cats;
    if (compatible.empty()) continue;
    if (is_local_kind(kind)) {
      for (std::size_t a : compatible) out.emplace_back(kind, Scope::local(a));
      if (compatible.size() >= 2) out.emplace_back(kind, Scope::all());
      continue;
    }
    if ((kind == TransformKind::ImputeMissingContinuous || kind == TransformKind::ImputeMissingCategorical) &&
        !has_missing(compatible)) {
      continue;
    }
    out.emplace_back(kind, Scope::global());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Supervised discretization (minimum description length cut selection).

namespace mdl_detail {

struct ValueGroup {
  double value;
  std::vector<double> counts;  // per class
};

inline double entropy_range(const std::vector<double>& counts) { return stats::entropy_of_counts(counts); }

inline std::size_t classes_present(const std::vector<double>& counts) {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }));
}

inline bool is_pure(const std::vector<double>& counts) { return classes_present(counts) <= 1; }

inline std::size_t single_class(const std::vector<double>& counts) {
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] > 0.0) return c;
  }
  return 0;
}

// Boundary between two adjacent distinct values unless both are pure and of
// the same class.
inline bool is_boundary(const ValueGroup& a, const ValueGroup& b) {
  if (is_pure(a.counts) && is_pure(b.counts)) return single_class(a.counts) != single_class(b.counts);
  return true;
}

inline void split_recursive(const std::vector<ValueGroup>& groups, std::size_t lo, std::size_t hi, std::size_t num_classes,
                            std::vector<double>& cuts) {
  if (hi - lo < 2) return;
  std::vector<double> total(num_classes, 0.0);
  for (std::size_t g = lo; g < hi; ++g) {
    for (std::size_t c = 0; c < num_classes; ++c) total[c] += groups[g].counts[c];
  }
  double n = 0.0;
  for (double c : total) n += c;
  const double ent_s = entropy_range(total);

  std::vector<double> left(num_classes, 0.0);
  double best_gain = -1.0;
  std::size_t best_split = 0;
  std::vector<double> best_left, best_right;
  for (std::size_t g = lo; g + 1 < hi; ++g) {
    for (std::size_t c = 0; c < num_classes; ++c) left[c] += groups[g].counts[c];
    if (!is_boundary(groups[g], groups[g + 1])) continue;
    std::vector<double> right(num_classes);
    double nl = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      right[c] = total[c] - left[c];
      nl += left[c];
    }
    const double nr = n - nl;
    const double e = (nl / n) * entropy_range(left) + (nr / n) * entropy_range(right);
    const double gain = ent_s - e;
    if (gain > best_gain) {  // strict: ties keep the lower cut
      best_gain = gain;
      best_split = g + 1;
      best_left = left;
      best_right = right;
    }
  }
  if (best_gain <= 0.0) return;
  const double k = static_cast<double>(classes_present(total));
  const double k1 = static_cast<double>(classes_present(best_left));
  const double k2 = static_cast<double>(classes_present(best_right));
  const double delta = std::log2(std::pow(3.0, k) - 2.0) -
                       (k * ent_s - k1 * entropy_range(best_left) - k2 * entropy_range(best_right));
  const double threshold = (std::log2(n - 1.0) + delta) / n;
  if (!(best_gain > threshold)) return;
  split_recursive(groups, lo, best_split, num_classes, cuts);
  cuts.push_back((groups[best_split - 1].value + groups[best_split].value) / 2.0);
  split_recursive(groups, best_split, hi, num_classes, cuts);
}

}  // namespace mdl_detail

// Accepted cut points (ascending) for a continuous attribute. Missing cells
// are ignored.
inline std::vector<double> mdl_cut_points(std::span<const double> values, std::span<const std::size_t> classes,
                                          std::size_t num_classes) {
  std::vector<std::pair<double, std::size_t>> pairs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!is_missing(values[i])) pairs.emplace_back(values[i], classes[i]);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<mdl_detail::ValueGroup> groups;
  for (const auto& [v, c] : pairs) {
    if (groups.empty() || groups.back().value != v) groups.push_back({v, std::vector<double>(num_classes, 0.0)});
    groups.back().counts[c] += 1.0;
  }
  std::vector<double> cuts;
  mdl_detail::split_recursive(groups, 0, groups.size(), num_classes, cuts);
  return cuts;
}

// ---------------------------------------------------------------------------
// Principal components.

struct PcaFit {
  std::vector<double> means;        // per input attribute
  std::vector<double> scales;       // sample std, 0 for constant inputs
  Eigen::MatrixXd components;       // inputs x retained, orthonormal columns
  std::vector<double> eigenvalues;  // all, descending
  double retained_fraction = 1.0;
};

inline PcaFit pca_fit(const Dataset& ds, const std::vector<std::size_t>& attrs, double coverage) {
  const std::size_t n = ds.num_rows();
  const std::size_t p = attrs.size();
  PcaFit fit;
  Eigen::MatrixXd x(n, p);
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> vals;
    for (double v : ds.column(attrs[j])) {
      if (!is_missing(v)) vals.push_back(v);
    }
    const double mean = stats::mean(vals);
    const double sd = stats::sample_std(vals);
    fit.means.push_back(mean);
    fit.scales.push_back(sd);
    const auto col = ds.column(attrs[j]);
    for (std::size_t r = 0; r < n; ++r) {
      const double v = is_missing(col[r]) ? mean : col[r];
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = sd > 0.0 ? (v - mean) / sd : 0.0;
    }
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
  if (n > 1) cov = (x.transpose() * x) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd evecs = solver.eigenvectors();

  double total = 0.0;
  for (Eigen::Index i = 0; i < evals.size(); ++i) total += std::max(0.0, evals(i));
  for (Eigen::Index i = evals.size(); i-- > 0;) fit.eigenvalues.push_back(evals(i));

  std::size_t keep = 1;
  double cumulative = 0.0;
  if (total > 0.0) {
    keep = p;
    for (std::size_t i = 0; i < p; ++i) {
      cumulative += std::max(0.0, fit.eigenvalues[i]);
      if (cumulative / total >= coverage - 1e-9) {
        keep = i + 1;
        break;
      }
    }
    fit.retained_fraction = 0.0;
    for (std::size_t i = 0; i < keep; ++i) fit.retained_fraction += std::max(0.0, fit.eigenvalues[i]) / total;
  }
  fit.components.resize(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(keep));
  for (std::size_t c = 0; c < keep; ++c) {
    Eigen::VectorXd v = evecs.col(static_cast<Eigen::Index>(p - 1 - c));
    // Sign convention: the largest-magnitude loading is positive.
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < v.size(); ++i) {
      if (std::abs(v(i)) > std::abs(v(arg)) + 1e-12) arg = i;
    }
    if (v(arg) < 0) v = -v;
    fit.components.col(static_cast<Eigen::Index>(c)) = v;
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Application.

namespace transform_detail {

// Accumulates output attributes while walking the input ones in order.
class Builder {
 public:
  explicit Builder(const Dataset& src) : src_(src) {
    for (const auto& a : src.attributes()) taken_.insert(a.name);
  }

  void keep(std::size_t attr) {
    if (attr == src_.class_index()) class_index_ = attrs_.size();
    attrs_.push_back(src_.attribute(attr));
    cols_.emplace_back(src_.column(attr).begin(), src_.column(attr).end());
  }

  void add(Attribute attr, std::vector<double> col) {
    attrs_.push_back(std::move(attr));
    cols_.push_back(std::move(col));
  }

  // Unique among input names and names already produced.
  std::string fresh_name(const std::string& base) {
    std::string name = base;
    while (taken_.count(name) && !released_.count(name)) name += "_";
    taken_.insert(name);
    released_.erase(name);
    return name;
  }

  // Input attribute being replaced: its name may be reused.
  void release(std::size_t attr) { released_.insert(src_.attribute(attr).name); }

  Dataset finish() { return Dataset(src_.name(), std::move(attrs_), class_index_, std::move(cols_)); }

 private:
  const Dataset& src_;
  std::vector<Attribute> attrs_;
  std::vector<std::vector<double>> cols_;
  std::size_t class_index_ = 0;
  std::unordered_set<std::string> taken_;
  std::unordered_set<std::string> released_;
};

inline std::vector<double> observed(std::span<const double> col) {
  std::vector<double> out;
  for (double v : col) {
    if (!is_missing(v)) out.push_back(v);
  }
  return out;
}

inline std::vector<std::string> bin_labels(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back("bin" + std::to_string(i));
  return out;
}

// Index of the bin for x given ascending cut points; x equal to a cut goes
// to the lower bin.
inline double bin_of(double x, const std::vector<double>& cuts) {
  if (is_missing(x)) return missing;
  const auto it = std::lower_bound(cuts.begin(), cuts.end(), x);
  return static_cast<double>(it - cuts.begin());
}

inline std::vector<std::size_t> targets(const TransformationSpec& spec, const Dataset& ds) {
  const AttributeKind want = input_type(spec.kind());
  if (spec.scope().type == Scope::Type::Local) {
    const std::size_t a = spec.scope().attr;
    if (a >= ds.num_attributes() || !ds.is_predictor(a) || ds.attribute(a).kind != want) {
      throw SpecError(spec.to_string() + " does not apply to attribute " + std::to_string(a) + " of '" + ds.name() + "'");
    }
    return {a};
  }
  auto out = ds.predictors_of_kind(want);
  if (out.empty()) throw SpecError(spec.to_string() + " has no compatible attribute in '" + ds.name() + "'");
  return out;
}

}  // namespace transform_detail

inline TransformedDataset apply(const TransformationSpec& spec, const Dataset& ds) {
  using namespace transform_detail;
  const auto target_list = targets(spec, ds);
  const std::set<std::size_t> target(target_list.begin(), target_list.end());
  Builder b(ds);
  const std::size_t n = ds.num_rows();

  if (spec.kind() == TransformKind::PrincipalComponents) {
    const auto fit = pca_fit(ds, target_list, spec.param("variance_coverage"));
    const auto k = static_cast<std::size_t>(fit.components.cols());
    bool placed = false;
    for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
      if (!target.count(a)) {
        b.keep(a);
        continue;
      }
      b.release(a);
      if (placed) continue;
      placed = true;
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<double> col(n, 0.0);
        for (std::size_t j = 0; j < target_list.size(); ++j) {
          if (fit.scales[j] <= 0.0) continue;
          const double w = fit.components(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
          const auto src = ds.column(target_list[j]);
          for (std::size_t r = 0; r < n; ++r) {
            const double v = is_missing(src[r]) ? fit.means[j] : src[r];
            col[r] += w * (v - fit.means[j]) / fit.scales[j];
          }
        }
        b.add(Attribute::continuous(b.fresh_name("PC" + std::to_string(c + 1))), std::move(col));
      }
    }
    return {b.finish(), ds.name(), spec};
  }

  // Supervised nominal-to-binary: categories are ranked by the mean class
  // index of their rows (empty categories last, ties by category index), then
  // coded with k-1 cumulative indicators: indicator j is 1 when the value's
  // rank is at least j.
  for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
    if (!target.count(a)) {
      b.keep(a);
      continue;
    }
    const Attribute& attr = ds.attribute(a);
    const auto col = ds.column(a);
    switch (spec.kind()) {
      case TransformKind::Normalize: {
        const auto vals = observed(col);
        double lo = 0.0, hi = 0.0;
        if (!vals.empty()) {
          lo = *std::min_element(vals.begin(), vals.end());
          hi = *std::max_element(vals.begin(), vals.end());
        }
        std::vector<double> out(n);
        for (std::size_t r = 0; r < n; ++r) {
          if (is_missing(col[r])) out[r] = missing;
          else out[r] = hi > lo ? (col[r] - lo) / (hi - lo) : 0.0;
        }
        b.add(attr, std::move(out));
        break;
      }
      case TransformKind::Standardize: {
        const auto vals = observed(col);
        const double mean = stats::mean(vals);
        const double sd = stats::sample_std(vals);
        std::vector<double> out(n);
        for (std::size_t r = 0; r < n; ++r) {
          if (is_missing(col[r])) out[r] = missing;
          else out[r] = sd > 0.0 ? (col[r] - mean) / sd : 0.0;
        }
        b.add(attr, std::move(out));
        break;
      }
      case TransformKind::DiscretizeUnsupervised: {
        const auto bins = static_cast<std::size_t>(spec.param("bins"));
        const auto vals = observed(col);
        std::vector<double> cuts;
        if (!vals.empty()) {
          const double lo = *std::min_element(vals.begin(), vals.end());
          const double hi = *std::max_element(vals.begin(), vals.end());
          if (hi > lo) {
            const double width = (hi - lo) / static_cast<double>(bins);
            for (std::size_t j = 1; j < bins; ++j) cuts.push_back(lo + static_cast<double>(j) * width);
          }
        }
        std::vector<double> out(n);
        for (std::size_t r = 0; r < n; ++r) out[r] = bin_of(col[r], cuts);
        b.add(Attribute::categorical(attr.name, bin_labels(bins)), std::move(out));
        break;
      }
      case TransformKind::DiscretizeSupervised: {
        std::vector<std::size_t> classes(n);
        for (std::size_t r = 0; r < n; ++r) classes[r] = ds.class_of(r);
        const auto cuts = mdl_cut_points(col, classes, ds.num_classes());
        std::vector<double> out(n);
        for (std::size_t r = 0; r < n; ++r) out[r] = bin_of(col[r], cuts);
        b.add(Attribute::categorical(attr.name, bin_labels(cuts.size() + 1)), std::move(out));
        break;
      }
      case TransformKind::NominalToBinaryUnsupervised: {
        b.release(a);
        const std::size_t k = attr.num_categories();
        auto indicator = [&](std::size_t category) {
          std::vector<double> out(n);
          for (std::size_t r = 0; r < n; ++r) {
            out[r] = is_missing(col[r]) ? missing : (static_cast<std::size_t>(col[r]) == category ? 1.0 : 0.0);
          }
          return out;
        };
        if (k == 2) {
          b.add(Attribute::continuous(b.fresh_name(attr.name + "=" + attr.categories[1])), indicator(1));
        } else {
          for (std::size_t c = 0; c < k; ++c) {
            b.add(Attribute::continuous(b.fresh_name(attr.name + "=" + attr.categories[c])), indicator(c));
          }
        }
        break;
      }
      case TransformKind::NominalToBinarySupervised: {
        b.release(a);
        const std::size_t k = attr.num_categories();
        std::vector<double> sum(k, 0.0), count(k, 0.0);
        for (std::size_t r = 0; r < n; ++r) {
          if (is_missing(col[r])) continue;
          const auto c = static_cast<std::size_t>(col[r]);
          sum[c] += static_cast<double>(ds.class_of(r));
          count[c] += 1.0;
        }
        std::vector<std::size_t> order(k);
        for (std::size_t c = 0; c < k; ++c) order[c] = c;
        auto key = [&](std::size_t c) {
          return count[c] > 0.0 ? sum[c] / count[c] : std::numeric_limits<double>::infinity();
        };
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
        std::vector<std::size_t> rank(k);
        for (std::size_t pos = 0; pos < k; ++pos) rank[order[pos]] = pos;
        const std::size_t outputs = std::max<std::size_t>(1, k - 1);
        for (std::size_t j = 1; j <= outputs; ++j) {
          std::vector<double> out(n);
          for (std::size_t r = 0; r < n; ++r) {
            out[r] = is_missing(col[r]) ? missing : (rank[static_cast<std::size_t>(col[r])] >= j ? 1.0 : 0.0);
          }
          b.add(Attribute::continuous(b.fresh_name(attr.name + "_rank" + std::to_string(j))), std::move(out));
        }
        break;
      }
      case TransformKind::ImputeMissingContinuous: {
        const double fill = stats::mean(observed(col));
        std::vector<double> out(col.begin(), col.end());
        for (double& v : out) {
          if (is_missing(v)) v = fill;
        }
        b.add(attr, std::move(out));
        break;
      }
      case TransformKind::ImputeMissingCategorical: {
        std::vector<std::size_t> counts(attr.num_categories(), 0);
        for (double v : col) {
          if (!is_missing(v)) ++counts[static_cast<std::size_t>(v)];
        }
        const auto mode = static_cast<double>(std::max_element(counts.begin(), counts.end()) - counts.begin());
        std::vector<double> out(col.begin(), col.end());
        for (double& v : out) {
          if (is_missing(v)) v = mode;
        }
        b.add(attr, std::move(out));
        break;
      }
      case TransformKind::PrincipalComponents:
        break;  // handled above
    }
  }
  return {b.finish(), ds.name(), spec};
}

}  // namespace metaprep
