#include <algorithm>
#include <cmath>

#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"

namespace saa {

std::vector<std::size_t> cluster_assign(const DenseMatrix& x, const DenseMatrix& h) {
  if (h.rows() == 0 || h.cols() != x.cols()) throw InvalidInput("cluster_assign: shape mismatch");
  std::vector<std::size_t> out(x.rows(), 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double best = squared_distance(x.row(i), h.row(0));
    for (std::size_t j = 1; j < h.rows(); ++j) {
      const double d = squared_distance(x.row(i), h.row(j));
      if (d < best) {
        best = d;
        out[i] = j;
      }
    }
  }
  return out;
}

ClusterMetrics cluster_metrics(const std::vector<std::size_t>& true_labels, const std::vector<std::size_t>& est_labels,
                               std::size_t k) {
  if (k == 0) throw InvalidInput("cluster_metrics: k must be positive");
  if (true_labels.size() != est_labels.size()) throw InvalidInput("cluster_metrics: label vectors differ in length");
  if (true_labels.empty()) throw InvalidInput("cluster_metrics: no samples");
  ClusterMetrics c;
  c.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < true_labels.size(); ++i) {
    if (true_labels[i] >= k || est_labels[i] >= k) throw InvalidInput("cluster_metrics: label out of range");
    ++c.confusion[est_labels[i]][true_labels[i]];
  }
  const double m = static_cast<double>(true_labels.size());
  double purity = 0.0, ent = 0.0;
  for (const auto& row : c.confusion) {
    std::size_t mr = 0, best = 0;
    for (std::size_t v : row) {
      mr += v;
      best = std::max(best, v);
    }
    purity += static_cast<double>(best);
    for (std::size_t v : row) {
      if (v == 0) continue;
      const double p = static_cast<double>(v);
      ent += p * std::log2(p / static_cast<double>(mr));
    }
  }
  c.purity = purity / m;
  c.entropy = k > 1 ? -ent / (m * std::log2(static_cast<double>(k))) : 0.0;
  if (c.entropy == 0.0) c.entropy = 0.0;  // no negative zero
  return c;
}

void to_json(nlohmann::json& j, const ClusterMetrics& c) {
  j = nlohmann::json{{"purity", c.purity}, {"entropy", c.entropy}, {"confusion", c.confusion}};
}

}  // namespace saa
