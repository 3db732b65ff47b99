#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"

namespace metaprep::testing {

// Continuous predictors x1.. plus a class with labels c0..c{k-1}.
inline Dataset continuous_dataset(const std::vector<std::vector<double>>& predictors, const std::vector<int>& cls,
                                  std::size_t num_classes = 2, const std::string& name = "t") {
  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < predictors.size(); ++j) {
    attrs.push_back(Attribute::continuous("x" + std::to_string(j + 1)));
    cols.push_back(predictors[j]);
  }
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < num_classes; ++c) labels.push_back("c" + std::to_string(c));
  attrs.push_back(Attribute::categorical("class", labels));
  cols.emplace_back(cls.begin(), cls.end());
  const std::size_t ci = attrs.size() - 1;
  return Dataset(name, std::move(attrs), ci, std::move(cols));
}

// Random dataset with a mix of attribute kinds and missing cells.
inline Dataset random_dataset(std::uint64_t seed, std::size_t rows = 20, std::size_t conts = 2, std::size_t cats = 2,
                              double missing_rate = 0.1, std::size_t classes = 2) {
  Rng rng(seed);
  std::vector<Attribute> attrs;
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < conts; ++j) {
    attrs.push_back(Attribute::continuous("x" + std::to_string(j + 1)));
    std::vector<double> col(rows);
    for (double& v : col) v = rng.bernoulli(missing_rate) ? missing : std::round(rng.normal() * 1000.0) / 100.0;
    cols.push_back(std::move(col));
  }
  for (std::size_t j = 0; j < cats; ++j) {
    const std::size_t m = 2 + rng.index(3);
    std::vector<std::string> labels;
    for (std::size_t v = 0; v < m; ++v) labels.push_back("v" + std::to_string(v));
    attrs.push_back(Attribute::categorical("a" + std::to_string(j + 1), labels));
    std::vector<double> col(rows);
    for (double& v : col) v = rng.bernoulli(missing_rate) ? missing : static_cast<double>(rng.index(m));
    cols.push_back(std::move(col));
  }
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < classes; ++c) labels.push_back("k" + std::to_string(c));
  attrs.push_back(Attribute::categorical("class", labels));
  std::vector<double> cls(rows);
  for (std::size_t r = 0; r < rows; ++r) cls[r] = static_cast<double>(r < classes ? r : rng.index(classes));
  cols.push_back(std::move(cls));
  const std::size_t ci = attrs.size() - 1;
  return Dataset("random" + std::to_string(seed), std::move(attrs), ci, std::move(cols));
}

}  // namespace metaprep::testing
