// Copyright 2026 The Prefrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prefrank/equilibrium.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

namespace prefrank {
namespace {

using Graph = std::vector<std::vector<std::size_t>>;

Graph PositiveEdges(const Eigen::MatrixXd& p) {
  const auto n = static_cast<std::size_t>(p.rows());
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) {
        g[i].push_back(j);
      }
    }
  }
  return g;
}

// Tarjan's algorithm, iterative so deep chains cannot overflow the stack.
std::vector<std::vector<std::size_t>> StronglyConnected(const Graph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> order(n, kUnset), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> classes;
  std::size_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (order[root] != kUnset) continue;
    // (vertex, next edge to explore)
    std::vector<std::pair<std::size_t, std::size_t>> call;
    call.emplace_back(root, 0);
    order[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < g[v].size()) {
        const std::size_t w = g[v][edge++];
        if (order[w] == kUnset) {
          order[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], order[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
      if (low[done] == order[done]) {
        std::vector<std::size_t> cls;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          cls.push_back(w);
        } while (w != done);
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
      }
    }
  }
  std::sort(classes.begin(), classes.end());
  return classes;
}

// gcd of (level[u] + 1 - level[v]) over edges inside the class, with levels
// from a BFS rooted in the class. A class with no internal edge gets 1.
int ClassPeriod(const Graph& g, const std::vector<std::size_t>& cls,
                const std::vector<std::size_t>& class_of, std::size_t id) {
  std::vector<long> level(g.size(), -1);
  std::queue<std::size_t> frontier;
  level[cls.front()] = 0;
  frontier.push(cls.front());
  long period = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop();
    for (std::size_t v : g[u]) {
      if (class_of[v] != id) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        frontier.push(v);
      } else {
        period = std::gcd(period, std::labs(level[u] + 1 - level[v]));
      }
    }
  }
  return period == 0 ? 1 : static_cast<int>(period);
}

AuthorityDistribution Iterate(const Eigen::MatrixXd& p,
                              const SolveOptions& options) {
  const Eigen::Index n = p.rows();
  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  Eigen::RowVectorXd next(n);
  for (std::int64_t it = 1; it <= options.max_iter; ++it) {
    next.noalias() = pi * p;
    const double diff = (next - pi).cwiseAbs().maxCoeff();
    pi.swap(next);
    if (diff <= options.tolerance) {
      pi /= pi.sum();
      AuthorityDistribution out;
      out.scores = pi;
      out.iterations = it;
      out.residual = (pi - pi * p).cwiseAbs().maxCoeff();
      return out;
    }
  }
  std::ostringstream msg;
  msg << "power iteration did not converge within " << options.max_iter
      << " iterations";
  throw NonConvergenceError(msg.str(), pi);
}

}  // namespace

std::string StructureReport::describe(
    const std::vector<std::string>& ids) const {
  std::ostringstream out;
  out << (irreducible ? "irreducible" : "reducible") << ", "
      << (aperiodic ? "aperiodic" : "periodic") << "; "
      << communicating_classes.size() << " communicating class"
      << (communicating_classes.size() == 1 ? "" : "es") << ":";
  for (std::size_t c = 0; c < communicating_classes.size(); ++c) {
    out << " {";
    for (std::size_t k = 0; k < communicating_classes[c].size(); ++k) {
      const std::size_t v = communicating_classes[c][k];
      if (k > 0) out << ",";
      if (v < ids.size()) {
        out << ids[v];
      } else {
        out << v;
      }
    }
    out << "} period " << period[c] << ";";
  }
  return out.str();
}

StructureReport check_structure(const Eigen::MatrixXd& p) {
  const Graph g = PositiveEdges(p);
  StructureReport report;
  report.communicating_classes = StronglyConnected(g);
  std::vector<std::size_t> class_of(g.size(), 0);
  for (std::size_t c = 0; c < report.communicating_classes.size(); ++c) {
    for (std::size_t v : report.communicating_classes[c]) class_of[v] = c;
  }
  report.aperiodic = true;
  for (std::size_t c = 0; c < report.communicating_classes.size(); ++c) {
    const int d = ClassPeriod(g, report.communicating_classes[c], class_of, c);
    report.period.push_back(d);
    if (d != 1) report.aperiodic = false;
  }
  report.irreducible = report.communicating_classes.size() == 1;
  return report;
}

AuthorityDistribution solve_authority(const Eigen::MatrixXd& p,
                                      const SolveOptions& options) {
  StructureReport report = check_structure(p);
  if (!report.irreducible || !report.aperiodic) {
    throw StructureError("transition matrix is " + report.describe(), report);
  }
  return Iterate(p, options);
}

AuthorityDistribution solve_authority(const TransitionMatrix& p,
                                      const SolveOptions& options) {
  StructureReport report = check_structure(p.entries);
  if (!report.irreducible || !report.aperiodic) {
    throw StructureError("transition matrix is " + report.describe(p.index),
                         report);
  }
  AuthorityDistribution out = Iterate(p.entries, options);
  out.index = p.index;
  return out;
}

std::vector<int> competition_ranks(const Eigen::RowVectorXd& scores) {
  const auto n = static_cast<std::size_t>(scores.size());
  std::vector<int> rank(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (scores(static_cast<Eigen::Index>(j)) >
          scores(static_cast<Eigen::Index>(i))) {
        ++rank[i];
      }
    }
  }
  return rank;
}

Ranking rank_from_scores(const AuthorityDistribution& pi) {
  const auto n = static_cast<std::size_t>(pi.scores.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return pi.scores(static_cast<Eigen::Index>(a)) >
                            pi.scores(static_cast<Eigen::Index>(b));
                   });
  auto id_of = [&](std::size_t k) {
    return k < pi.index.size() ? pi.index[k] : std::to_string(k);
  };
  Ranking out;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t k = order[pos];
    const double score = pi.scores(static_cast<Eigen::Index>(k));
    RankEntry entry{static_cast<int>(pos) + 1, k, id_of(k), score};
    if (pos > 0 && out.entries.back().score == score) {
      entry.rank = out.entries.back().rank;
    }
    out.entries.push_back(std::move(entry));
  }
  for (std::size_t pos = 0; pos < n;) {
    std::size_t end = pos + 1;
    while (end < n && out.entries[end].rank == out.entries[pos].rank) ++end;
    if (end - pos > 1) {
      std::vector<std::string> group;
      for (std::size_t k = pos; k < end; ++k)
        group.push_back(out.entries[k].id);
      out.tie_groups.push_back(std::move(group));
    }
    pos = end;
  }
  return out;
}

Eigen::RowVectorXd reference_ranking(const TransitionMatrix& p,
                                     const std::string& id) {
  auto it = std::find(p.index.begin(), p.index.end(), id);
  if (it == p.index.end()) {
    throw InputError(InputError::Kind::kUnknownId,
                     "unknown institution id '" + id + "'");
  }
  return p.entries.row(it - p.index.begin());
}

Eigen::VectorXd baseline_weighted_score(const Eigen::VectorXd& weights,
                                        const Eigen::MatrixXd& criteria) {
  if (weights.size() != criteria.rows()) {
    throw InputError(InputError::Kind::kInvalidArgument,
                     "weights length " + std::to_string(weights.size()) +
                         " does not match " + std::to_string(criteria.rows()) +
                         " criteria");
  }
  return criteria.transpose() * weights;
}

}  // namespace prefrank
