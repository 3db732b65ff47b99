#pragma once

// In-memory tabular dataset: typed attributes, a categorical class column and
// a column-major cell grid.
//
// Cells are doubles. A continuous cell holds its value, a categorical cell the
// index of its category, and a missing cell holds NaN (see `missing`). The
// constructor rejects non-finite numbers, so NaN never means anything else.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "metaprep/common.hpp"

namespace metaprep {

enum class AttributeKind { Continuous, Categorical };

inline constexpr double missing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double cell) { return std::isnan(cell); }

struct Attribute {
  std::string name;
  AttributeKind kind = AttributeKind::Continuous;
  std::vector<std::string> categories;  // categorical only

  static Attribute continuous(std::string name) {
    return Attribute{std::move(name), AttributeKind::Continuous, {}};
  }
  static Attribute categorical(std::string name, std::vector<std::string> categories) {
    return Attribute{std::move(name), AttributeKind::Categorical, std::move(categories)};
  }

  bool is_continuous() const { return kind == AttributeKind::Continuous; }
  bool is_categorical() const { return kind == AttributeKind::Categorical; }
  std::size_t num_categories() const { return categories.size(); }

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

class Dataset {
 public:
  // Validates every invariant and throws DatasetError on violation.
  Dataset(std::string name, std::vector<Attribute> attributes, std::size_t class_index,
          std::vector<std::vector<double>> columns)
      : name_(std::move(name)),
        attributes_(std::move(attributes)),
        class_index_(class_index),
        columns_(std::move(columns)) {
    validate();
  }

  const std::string& name() const { return name_; }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  std::size_t num_attributes() const { return attributes_.size(); }
  std::size_t num_rows() const { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t class_index() const { return class_index_; }
  const Attribute& class_attribute() const { return attributes_[class_index_]; }
  std::size_t num_classes() const { return class_attribute().num_categories(); }

  std::span<const double> column(std::size_t attr) const { return columns_.at(attr); }
  const std::vector<std::vector<double>>& columns() const { return columns_; }
  double value(std::size_t row, std::size_t attr) const { return columns_[attr][row]; }
  std::size_t class_of(std::size_t row) const {
    return static_cast<std::size_t>(columns_[class_index_][row]);
  }

  bool is_predictor(std::size_t attr) const { return attr != class_index_; }

  // Predictor attribute indices in column order.
  std::vector<std::size_t> predictors() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (i != class_index_) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> predictors_of_kind(AttributeKind kind) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
      if (i != class_index_ && attributes_[i].kind == kind) out.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (double c : columns_[class_index_]) ++counts[static_cast<std::size_t>(c)];
    return counts;
  }

  // Copy restricted to the given rows, in the given order.
  Dataset subset(std::span<const std::size_t> rows) const {
    std::vector<std::vector<double>> cols(columns_.size());
    for (std::size_t a = 0; a < columns_.size(); ++a) {
      cols[a].reserve(rows.size());
      for (std::size_t r : rows) cols[a].push_back(columns_[a].at(r));
    }
    return Dataset(name_, attributes_, class_index_, std::move(cols));
  }

  Dataset renamed(std::string name) const {
    Dataset copy = *this;
    copy.name_ = std::move(name);
    return copy;
  }

  // Structural equality; missing cells compare equal to each other.
  friend bool operator==(const Dataset& a, const Dataset& b) {
    if (a.name_ != b.name_ || a.attributes_ != b.attributes_ || a.class_index_ != b.class_index_ ||
        a.columns_.size() != b.columns_.size()) {
      return false;
    }
    for (std::size_t c = 0; c < a.columns_.size(); ++c) {
      const auto& x = a.columns_[c];
      const auto& y = b.columns_[c];
      if (x.size() != y.size()) return false;
      for (std::size_t r = 0; r < x.size(); ++r) {
        if (is_missing(x[r]) != is_missing(y[r])) return false;
        if (!is_missing(x[r]) && x[r] != y[r]) return false;
      }
    }
    return true;
  }

 private:
  void validate() const {
    if (attributes_.size() < 2) throw DatasetError("dataset needs a class and at least one predictor");
    if (columns_.size() != attributes_.size()) throw DatasetError("column count differs from attribute count");
    if (class_index_ >= attributes_.size()) throw DatasetError("class index out of range");
    const std::size_t n = columns_.front().size();
    if (n == 0) throw DatasetError("dataset has no rows");
    std::unordered_set<std::string> names;
    for (std::size_t a = 0; a < attributes_.size(); ++a) {
      const Attribute& attr = attributes_[a];
      if (!names.insert(attr.name).second) throw DatasetError("duplicate attribute name '" + attr.name + "'");
      if (attr.is_categorical() && attr.categories.empty()) {
        throw DatasetError("categorical attribute '" + attr.name + "' has no categories");
      }
      if (attr.is_continuous() && !attr.categories.empty()) {
        throw DatasetError("continuous attribute '" + attr.name + "' declares categories");
      }
      if (columns_[a].size() != n) throw DatasetError("ragged column '" + attr.name + "'");
      for (double v : columns_[a]) {
        if (is_missing(v)) continue;
        if (!std::isfinite(v)) throw DatasetError("non-finite value in '" + attr.name + "'");
        if (attr.is_categorical()) {
          if (v < 0 || v != std::floor(v) || v >= static_cast<double>(attr.categories.size())) {
            throw DatasetError("category index out of range in '" + attr.name + "'");
          }
        }
      }
    }
    const Attribute& cls = attributes_[class_index_];
    if (!cls.is_categorical() || cls.categories.size() < 2) {
      throw DatasetError("class attribute '" + cls.name + "' must be categorical with at least 2 categories");
    }
    for (double v : columns_[class_index_]) {
      if (is_missing(v)) throw DatasetError("class attribute '" + cls.name + "' has missing cells");
    }
  }

  std::string name_;
  std::vector<Attribute> attributes_;
  std::size_t class_index_ = 0;
  std::vector<std::vector<double>> columns_;
};

}  // namespace metaprep
