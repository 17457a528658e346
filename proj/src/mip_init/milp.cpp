#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/mip_init.hpp"

namespace saa {

double Cut::intercept() const {
  double s = value;
  const auto gv = grad.values();
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i]) s -= gv[i];
  }
  return s;
}

double Cut::evaluate(const Pattern& z) const {
  if (z.size() != grad.size()) throw InvalidInput("cut and pattern sizes differ");
  double s = intercept();
  const auto gv = grad.values();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i]) s += gv[i];
  }
  return s;
}

double CutSet::model(const Pattern& z) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const Cut& c : cuts) best = std::max(best, c.evaluate(z));
  return best;
}

double optimality_gap(double upper, double lower) {
  if (upper <= 0.0 || upper <= lower) return 0.0;
  return (upper - lower) / upper;
}

namespace {

nlohmann::json ones_of(const Pattern& z) {
  nlohmann::json a = nlohmann::json::array();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i]) a.push_back(i);
  }
  return a;
}

Pattern pattern_from_ones(const nlohmann::json& a, std::size_t size) {
  Pattern z(size, 0);
  for (const auto& v : a) {
    const auto i = v.get<std::size_t>();
    if (i >= size) throw InvalidInput("cut set: pattern index out of range");
    z[i] = 1;
  }
  return z;
}

}  // namespace

nlohmann::json to_json(const CutSet& cs) {
  nlohmann::json j;
  j["k"] = cs.k;
  j["n"] = cs.n;
  j["best_upper"] = cs.best_upper;
  j["best_lower"] = cs.best_lower;
  j["gap"] = cs.gap;
  j["cuts"] = nlohmann::json::array();
  for (const Cut& c : cs.cuts) {
    nlohmann::json g = nlohmann::json::array();
    for (std::size_t i = 0; i < c.grad.rows(); ++i) {
      const auto r = c.grad.row(i);
      g.push_back(std::vector<double>(r.begin(), r.end()));
    }
    j["cuts"].push_back({{"pattern", ones_of(c.pattern)}, {"value", c.value}, {"grad", g}});
  }
  j["rounds"] = nlohmann::json::array();
  for (const RoundRecord& r : cs.rounds) {
    j["rounds"].push_back({{"pattern", ones_of(r.pattern)},
                           {"value", r.value},
                           {"lower", r.lower},
                           {"upper", r.upper},
                           {"gap", r.gap}});
  }
  return j;
}

CutSet cutset_from_json(const nlohmann::json& j) {
  try {
    CutSet cs;
    cs.k = j.at("k").get<std::size_t>();
    cs.n = j.at("n").get<std::size_t>();
    cs.best_upper = j.at("best_upper").get<double>();
    cs.best_lower = j.at("best_lower").get<double>();
    cs.gap = j.at("gap").get<double>();
    for (const auto& c : j.at("cuts")) {
      Cut cut;
      cut.pattern = pattern_from_ones(c.at("pattern"), cs.k * cs.n);
      cut.value = c.at("value").get<double>();
      cut.grad = DenseMatrix::from_rows(c.at("grad").get<std::vector<std::vector<double>>>());
      if (cut.grad.rows() != cs.k || cut.grad.cols() != cs.n) throw InvalidInput("cut set: gradient has wrong shape");
      cs.cuts.push_back(std::move(cut));
    }
    for (const auto& r : j.at("rounds")) {
      RoundRecord rec;
      rec.pattern = pattern_from_ones(r.at("pattern"), cs.k * cs.n);
      rec.value = r.at("value").get<double>();
      rec.lower = r.at("lower").get<double>();
      rec.upper = r.at("upper").get<double>();
      rec.gap = r.at("gap").get<double>();
      cs.rounds.push_back(std::move(rec));
    }
    return cs;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("cut set: malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

enum : std::uint8_t { kFree = 0, kOne = 1, kZero = 2 };

struct Node {
  std::vector<std::uint8_t> state;
  std::vector<double> fixed_sum;  // per cut: intercept + sum of coefficients fixed to one
  std::size_t ones = 0;
  double bound = 0.0;
};

class Solver {
 public:
  Solver(const CutSet& cs, std::size_t ell, const MilpOptions& opts) : cs_(cs), ell_(ell), opts_(opts) {
    nvars_ = cs.cuts.front().grad.size();
    order_.resize(cs.cuts.size());
    column_sum_.assign(nvars_, 0.0);
    for (std::size_t c = 0; c < cs.cuts.size(); ++c) {
      const auto gv = cs.cuts[c].grad.values();
      auto& ord = order_[c];
      for (std::size_t j = 0; j < nvars_; ++j) {
        if (gv[j] < 0.0) ord.push_back(j);
        column_sum_[j] += gv[j];
      }
      std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return gv[a] < gv[b]; });
    }
    picks_.resize(cs.cuts.size());
    votes_.assign(nvars_, 0);
  }

  MilpResult run() {
    const auto start = std::chrono::steady_clock::now();
    MilpResult res;

    Node root;
    root.state.assign(nvars_, kFree);
    root.fixed_sum.resize(cs_.cuts.size());
    for (std::size_t c = 0; c < cs_.cuts.size(); ++c) root.fixed_sum[c] = cs_.cuts[c].intercept();

    best_z_.assign(nvars_, 0);
    best_value_ = model_from_fixed(root, {});

    std::vector<Node> stack;
    root.bound = bound(root);
    stack.push_back(std::move(root));
    bool truncated = false;
    while (!stack.empty()) {
      if (nodes_ >= opts_.node_limit) {
        truncated = true;
        break;
      }
      if (opts_.time_limit_seconds > 0.0 && (nodes_ & 31) == 0) {
        const std::chrono::duration<double> el = std::chrono::steady_clock::now() - start;
        if (el.count() > opts_.time_limit_seconds) {
          truncated = true;
          break;
        }
      }
      Node node = std::move(stack.back());
      stack.pop_back();
      if (node.bound >= best_value_ - prune_tol()) continue;
      ++nodes_;

      // Bound evaluation also fills picks_; recompute for the popped node.
      const double b = bound(node);
      if (b >= best_value_ - prune_tol()) continue;

      // Candidate from the binding cut's greedy completion.
      consider(completion(node, binding_));

      const std::size_t var = branch_variable(node);
      if (var == nvars_) {
        // Every cut's greedy completion agrees, so that completion attains the bound.
        continue;
      }

      Node one = node;
      one.state[var] = kOne;
      one.ones += 1;
      for (std::size_t c = 0; c < cs_.cuts.size(); ++c) one.fixed_sum[c] += cs_.cuts[c].grad.values()[var];
      one.bound = bound(one);
      Node zero = std::move(node);
      zero.state[var] = kZero;
      zero.bound = bound(zero);

      // Depth first; the better bound is explored first, the one-branch on ties.
      if (zero.bound < one.bound) {
        stack.push_back(std::move(one));
        stack.push_back(std::move(zero));
      } else {
        stack.push_back(std::move(zero));
        stack.push_back(std::move(one));
      }
    }

    res.z = best_z_;
    res.eta = best_value_;
    res.nodes = nodes_;
    res.optimal = !truncated;
    res.lower_bound = best_value_;
    if (truncated) {
      for (const Node& n : stack) res.lower_bound = std::min(res.lower_bound, n.bound);
    }
    return res;
  }

 private:
  double prune_tol() const { return 1e-12 * std::max(1.0, std::abs(best_value_)); }

  // Per-cut greedy minimum over the free variables; records the picks and the binding cut.
  double bound(const Node& node) {
    const std::size_t budget = ell_ > node.ones ? ell_ - node.ones : 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cs_.cuts.size(); ++c) {
      const auto gv = cs_.cuts[c].grad.values();
      auto& pk = picks_[c];
      pk.clear();
      double s = node.fixed_sum[c];
      for (std::size_t j : order_[c]) {
        if (pk.size() >= budget) break;
        if (node.state[j] != kFree) continue;
        pk.push_back(j);
        s += gv[j];
      }
      if (s > best) {
        best = s;
        binding_ = c;
      }
    }
    return best;
  }

  Pattern completion(const Node& node, std::size_t cut) const {
    Pattern z(nvars_, 0);
    for (std::size_t j = 0; j < nvars_; ++j) z[j] = node.state[j] == kOne ? 1 : 0;
    for (std::size_t j : picks_[cut]) z[j] = 1;
    return z;
  }

  double model_from_fixed(const Node& node, const std::vector<std::size_t>& extra) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cs_.cuts.size(); ++c) {
      double s = node.fixed_sum[c];
      for (std::size_t j : extra) s += cs_.cuts[c].grad.values()[j];
      best = std::max(best, s);
    }
    return best;
  }

  void consider(const Pattern& z) {
    const double v = cs_.model(z);
    const double tol = prune_tol();
    if (v < best_value_ - tol || (v <= best_value_ + tol && z < best_z_)) {
      best_value_ = std::min(v, best_value_);
      best_z_ = z;
    }
  }

  // Free variable picked by some but not all cuts with the largest |sum of
  // coefficients|; nvars_ when the cuts agree.
  std::size_t branch_variable(const Node& node) {
    for (const auto& pk : picks_) {
      for (std::size_t j : pk) ++votes_[j];
    }
    const std::size_t ncuts = cs_.cuts.size();
    std::size_t var = nvars_;
    double score = -1.0;
    for (const auto& pk : picks_) {
      for (std::size_t j : pk) {
        if (votes_[j] == ncuts || node.state[j] != kFree) continue;
        const double s = std::abs(column_sum_[j]);
        if (s > score || (s == score && j < var)) {
          score = s;
          var = j;
        }
      }
    }
    for (const auto& pk : picks_) {
      for (std::size_t j : pk) votes_[j] = 0;
    }
    return var;
  }

  const CutSet& cs_;
  std::size_t ell_;
  MilpOptions opts_;
  std::size_t nvars_ = 0;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<double> column_sum_;
  std::vector<std::vector<std::size_t>> picks_;
  std::vector<std::size_t> votes_;
  std::size_t binding_ = 0;
  Pattern best_z_;
  double best_value_ = 0.0;
  std::size_t nodes_ = 0;
};

}  // namespace

MilpResult BranchAndBound::solve(const CutSet& cuts, std::size_t ell) {
  if (cuts.cuts.empty()) throw InvalidInput("milp: at least one cut is required");
  const std::size_t size = cuts.cuts.front().grad.size();
  for (const Cut& c : cuts.cuts) {
    if (c.grad.size() != size || c.pattern.size() != size) throw InvalidInput("milp: cuts have inconsistent sizes");
  }
  Solver s(cuts, ell, opts_);
  return s.run();
}

MilpResult milp_min_cuts(const CutSet& cuts, std::size_t ell, const MilpOptions& opts) {
  BranchAndBound bb(opts);
  return bb.solve(cuts, ell);
}

}  // namespace saa
