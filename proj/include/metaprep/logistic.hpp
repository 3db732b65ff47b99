#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <numeric>
#include <vector>

#include "metaprep/classifier.hpp"
#include "metaprep/metafeatures.hpp"

namespace metaprep {

// Multinomial logistic regression with an L2 penalty on the non-intercept
// weights. Inputs are encoded internally: continuous attributes are
// mean-imputed and standardized with training statistics, categorical ones
// are mode-imputed and one-hot encoded. The objective is minimized with
// L-BFGS until the gradient norm drops to `tolerance` or `max_iter` is hit.
class LogisticRegression : public Classifier {
 public:
  struct Options {
    double lambda = 1e-4;
    double tolerance = 1e-6;
    std::size_t max_iter = 1000;
    std::size_t history = 10;
  };

  LogisticRegression() = default;
  explicit LogisticRegression(Options options) : options_(options) {}

  std::string name() const override { return "logistic"; }

  std::vector<Prediction> fit_predict(const Dataset& train, const Dataset& test, std::uint64_t /*seed*/) const override {
    check_schema(train, test);
    const Encoder enc(train);
    const auto x_train = enc.encode(train);
    std::vector<std::size_t> y(train.num_rows());
    for (std::size_t r = 0; r < y.size(); ++r) y[r] = train.class_of(r);
    const std::size_t num_classes = train.num_classes();
    const auto w = fit(x_train, y, enc.width(), num_classes);

    const auto x_test = enc.encode(test);
    std::vector<Prediction> out;
    out.reserve(test.num_rows());
    std::vector<double> z(num_classes);
    for (std::size_t r = 0; r < test.num_rows(); ++r) {
      softmax_row(w, &x_test[r * enc.width()], enc.width(), num_classes, z);
      out.push_back({argmax(z), z});
    }
    return out;
  }

  // Objective value and gradient for weights laid out class-major, each
  // class holding `width` feature weights followed by its intercept.
  double objective(const std::vector<double>& w, const std::vector<double>& x, const std::vector<std::size_t>& y,
                   std::size_t width, std::size_t num_classes, std::vector<double>& grad) const {
    const std::size_t n = y.size();
    const std::size_t stride = width + 1;
    grad.assign(w.size(), 0.0);
    double loss = 0.0;
    std::vector<double> p(num_classes);
    for (std::size_t r = 0; r < n; ++r) {
      const double* row = &x[r * width];
      softmax_row(w, row, width, num_classes, p);
      loss -= std::log(std::max(p[y[r]], 1e-300));
      for (std::size_t c = 0; c < num_classes; ++c) {
        const double err = p[c] - (c == y[r] ? 1.0 : 0.0);
        double* g = &grad[c * stride];
        for (std::size_t j = 0; j < width; ++j) g[j] += err * row[j];
        g[width] += err;
      }
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    loss *= inv_n;
    for (double& g : grad) g *= inv_n;
    for (std::size_t c = 0; c < num_classes; ++c) {
      for (std::size_t j = 0; j < width; ++j) {
        const double wj = w[c * stride + j];
        loss += 0.5 * options_.lambda * wj * wj;
        grad[c * stride + j] += options_.lambda * wj;
      }
    }
    return loss;
  }

  std::vector<double> fit(const std::vector<double>& x, const std::vector<std::size_t>& y, std::size_t width,
                          std::size_t num_classes) const {
    const std::size_t dim = num_classes * (width + 1);
    std::vector<double> w(dim, 0.0), g, w_new(dim), g_new, dir(dim);
    double f = objective(w, x, y, width, num_classes, g);
    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    for (std::size_t iter = 0; iter < options_.max_iter; ++iter) {
      if (norm(g) <= options_.tolerance) break;
      // Two-loop recursion.
      dir = g;
      std::vector<double> alpha(s_hist.size());
      for (std::size_t i = s_hist.size(); i-- > 0;) {
        alpha[i] = rho_hist[i] * dot(s_hist[i], dir);
        axpy(-alpha[i], y_hist[i], dir);
      }
      if (!s_hist.empty()) {
        const double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
        for (double& d : dir) d *= gamma;
      }
      for (std::size_t i = 0; i < s_hist.size(); ++i) {
        const double beta = rho_hist[i] * dot(y_hist[i], dir);
        axpy(alpha[i] - beta, s_hist[i], dir);
      }
      for (double& d : dir) d = -d;
      double slope = dot(g, dir);
      if (slope >= 0.0) {  // not a descent direction: restart from steepest descent
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        for (std::size_t i = 0; i < dim; ++i) dir[i] = -g[i];
        slope = dot(g, dir);
      }
      double step = s_hist.empty() ? std::min(1.0, 1.0 / norm(g)) : 1.0;
      double f_new = 0.0;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (std::size_t i = 0; i < dim; ++i) w_new[i] = w[i] + step * dir[i];
        f_new = objective(w_new, x, y, width, num_classes, g_new);
        if (f_new <= f + 1e-4 * step * slope) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      std::vector<double> s(dim), yk(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        s[i] = w_new[i] - w[i];
        yk[i] = g_new[i] - g[i];
      }
      const double sy = dot(s, yk);
      if (sy > 1e-12) {
        s_hist.push_back(std::move(s));
        y_hist.push_back(std::move(yk));
        rho_hist.push_back(1.0 / sy);
        if (s_hist.size() > options_.history) {
          s_hist.pop_front();
          y_hist.pop_front();
          rho_hist.pop_front();
        }
      }
      w.swap(w_new);
      g.swap(g_new);
      f = f_new;
    }
    return w;
  }

 private:
  class Encoder {
   public:
    explicit Encoder(const Dataset& train) {
      for (std::size_t a : train.predictors()) {
        Column col;
        col.attr = a;
        const auto values = train.column(a);
        if (train.attribute(a).is_continuous()) {
          std::vector<double> known;
          for (double v : values) {
            if (!is_missing(v)) known.push_back(v);
          }
          col.mean = stats::mean(known);
          const double sd = stats::sample_std(known);
          col.scale = sd > 0.0 ? sd : 0.0;
          col.offset = width_;
          width_ += 1;
        } else {
          col.categories = train.attribute(a).num_categories();
          std::vector<std::size_t> counts(col.categories, 0);
          for (double v : values) {
            if (!is_missing(v)) ++counts[static_cast<std::size_t>(v)];
          }
          col.mode = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
          col.offset = width_;
          width_ += col.categories;
        }
        columns_.push_back(col);
      }
    }

    std::size_t width() const { return width_; }

    std::vector<double> encode(const Dataset& ds) const {
      std::vector<double> x(ds.num_rows() * width_, 0.0);
      for (const auto& col : columns_) {
        const auto values = ds.column(col.attr);
        for (std::size_t r = 0; r < ds.num_rows(); ++r) {
          double* row = &x[r * width_];
          const double v = values[r];
          if (col.categories == 0) {
            const double filled = is_missing(v) ? col.mean : v;
            row[col.offset] = col.scale > 0.0 ? (filled - col.mean) / col.scale : 0.0;
          } else {
            const std::size_t cat = is_missing(v) ? col.mode : static_cast<std::size_t>(v);
            row[col.offset + cat] = 1.0;
          }
        }
      }
      return x;
    }

   private:
    struct Column {
      std::size_t attr = 0;
      std::size_t offset = 0;
      std::size_t categories = 0;  // 0 for continuous
      double mean = 0.0;
      double scale = 0.0;
      std::size_t mode = 0;
    };
    std::vector<Column> columns_;
    std::size_t width_ = 0;
  };

  static void softmax_row(const std::vector<double>& w, const double* row, std::size_t width, std::size_t num_classes,
                          std::vector<double>& out) {
    const std::size_t stride = width + 1;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < num_classes; ++c) {
      const double* wc = &w[c * stride];
      double z = wc[width];
      for (std::size_t j = 0; j < width; ++j) z += wc[j] * row[j];
      out[c] = z;
      top = std::max(top, z);
    }
    double sum = 0.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      out[c] = std::exp(out[c] - top);
      sum += out[c];
    }
    for (std::size_t c = 0; c < num_classes; ++c) out[c] /= sum;
  }

  static double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
  }
  static double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }
  static void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
  }

  Options options_;
};

}  // namespace metaprep
