#pragma once

// The shipped learners and their command-line names: tree, nb, knn:k, logistic.

#include <memory>
#include <string>
#include <string_view>

#include "metaprep/classifier.hpp"
#include "metaprep/decision_tree.hpp"
#include "metaprep/knn.hpp"
#include "metaprep/logistic.hpp"
#include "metaprep/naive_bayes.hpp"

namespace metaprep {

enum class ClassifierFamily { DecisionTree, NaiveBayes, KNearest, LogisticRegression };

struct ClassifierKind {
  ClassifierFamily family = ClassifierFamily::DecisionTree;
  std::size_t k = 1;  // KNearest only

  std::string to_string() const {
    switch (family) {
      case ClassifierFamily::DecisionTree: return "tree";
      case ClassifierFamily::NaiveBayes: return "nb";
      case ClassifierFamily::KNearest: return "knn:" + std::to_string(k);
      case ClassifierFamily::LogisticRegression: return "logistic";
    }
    return "?";
  }

  // Accepts tree, nb, knn (k = 1), knn:k and logistic.
  static ClassifierKind parse(std::string_view s) {
    s = trim(s);
    if (s == "tree") return {ClassifierFamily::DecisionTree, 1};
    if (s == "nb") return {ClassifierFamily::NaiveBayes, 1};
    if (s == "logistic") return {ClassifierFamily::LogisticRegression, 1};
    if (s == "knn") return {ClassifierFamily::KNearest, 1};
    if (s.substr(0, 4) == "knn:") {
      const auto k = parse_int(s.substr(4));
      if (!k || *k < 1) throw ArgumentError("knn needs k >= 1, got '" + std::string(s) + "'");
      return {ClassifierFamily::KNearest, static_cast<std::size_t>(*k)};
    }
    throw ArgumentError("unknown algorithm '" + std::string(s) + "' (expected tree, nb, knn:k or logistic)");
  }

  friend bool operator==(const ClassifierKind&, const ClassifierKind&) = default;
};

inline std::unique_ptr<Classifier> make_classifier(const ClassifierKind& kind) {
  switch (kind.family) {
    case ClassifierFamily::DecisionTree: return std::make_unique<DecisionTree>();
    case ClassifierFamily::NaiveBayes: return std::make_unique<NaiveBayes>();
    case ClassifierFamily::KNearest: return std::make_unique<KNearest>(kind.k);
    case ClassifierFamily::LogisticRegression: return std::make_unique<LogisticRegression>();
  }
  throw ArgumentError("unknown classifier family");
}

}  // namespace metaprep
