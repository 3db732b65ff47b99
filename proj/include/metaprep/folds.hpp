#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "metaprep/common.hpp"
#include "metaprep/dataset.hpp"

namespace metaprep {

struct FoldAssignment {
  std::vector<std::size_t> fold_of_row;
  std::size_t k = 0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < fold_of_row.size(); ++r) {
      if (fold_of_row[r] == fold) rows.push_back(r);
    }
    return rows;
  }

  std::vector<std::size_t> train_rows(std::size_t fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < fold_of_row.size(); ++r) {
      if (fold_of_row[r] != fold) rows.push_back(r);
    }
    return rows;
  }
};

// Stratified k-fold split. Rows of each class are shuffled, then dealt
// round-robin; the dealing position carries over from one class to the next
// so that fold sizes stay balanced too. Depends only on the class column,
// n, k and seed, so a transformed dataset gets the same folds as its source.
inline FoldAssignment stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("fold count must be at least 2");
  const std::size_t n = ds.num_rows();
  if (k > n) throw ArgumentError("fold count " + std::to_string(k) + " exceeds row count " + std::to_string(n));

  std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
  for (std::size_t r = 0; r < n; ++r) by_class[ds.class_of(r)].push_back(r);

  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold_of_row.assign(n, 0);
  Rng rng(mix_seed(seed, 0xf01d));
  std::size_t next_fold = 0;
  for (auto& rows : by_class) {
    rng.shuffle(rows);
    for (std::size_t r : rows) {
      out.fold_of_row[r] = next_fold;
      next_fold = (next_fold + 1) % k;
    }
  }
  return out;
}

}  // namespace metaprep
