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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace prefrank::oracle {

Eigen::RowVectorXd StationaryDirect(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd a = p.transpose() - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd x = a.fullPivLu().solve(b);
  return x.transpose();
}

std::pair<double, double> ScoreTestInterval(double s, double m, double z) {
  auto f = [&](double p) {
    return (s - p) * (s - p) - z * z * p * (1 - p) / m;
  };
  auto root = [&](double lo, double hi) {
    // f(lo) and f(hi) differ in sign.
    const bool lo_positive = f(lo) > 0;
    for (int k = 0; k < 200; ++k) {
      const double mid = 0.5 * (lo + hi);
      if ((f(mid) > 0) == lo_positive) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };
  return {root(0.0, s), root(s, 1.0)};
}

double SizeForLowerBound(double s, double eta, double z) {
  double lo = std::log(1e-9), hi = std::log(1e15);
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (ScoreTestInterval(s, std::exp(mid), z).first < eta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

Eigen::MatrixXd RandomIrreducible(std::size_t n, std::mt19937_64& rng,
                                  double sparsity) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd p(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      p(i, j) = (i != j && u(rng) < sparsity) ? 0.0 : 0.05 + u(rng);
    }
  }
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Index a = perm[k], b = perm[(k + 1) % n];
    if (p(a, b) == 0.0) p(a, b) = 0.05 + u(rng);
  }
  for (Eigen::Index i = 0; i < nn; ++i) p.row(i) /= p.row(i).sum();
  return p;
}

Eigen::MatrixXd PerturbDiagonal(const Eigen::MatrixXd& p, std::size_t i,
                                double h) {
  Eigen::MatrixXd q = p;
  const auto r = static_cast<Eigen::Index>(i);
  const double old = p(r, r);
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    if (k != r) q(r, k) = p(r, k) * (1.0 - old - h) / (1.0 - old);
  }
  q(r, r) = old + h;
  return q;
}

Eigen::MatrixXd PerturbCross(const Eigen::MatrixXd& p, std::size_t j,
                             std::size_t i, double h) {
  Eigen::MatrixXd q = p;
  const auto r = static_cast<Eigen::Index>(j);
  const auto c = static_cast<Eigen::Index>(i);
  const double rest = 1.0 - p(r, c) - p(r, r);
  for (Eigen::Index k = 0; k < p.cols(); ++k) {
    if (k != r && k != c) q(r, k) = p(r, k) * (rest - h) / rest;
  }
  q(r, c) = p(r, c) + h;
  return q;
}

Eigen::RowVectorXd FiniteDiffDiagonal(const Eigen::MatrixXd& p, std::size_t i,
                                      double h) {
  return (StationaryDirect(PerturbDiagonal(p, i, h)) -
          StationaryDirect(PerturbDiagonal(p, i, -h))) /
         (2.0 * h);
}

Eigen::RowVectorXd FiniteDiffCross(const Eigen::MatrixXd& p, std::size_t j,
                                   std::size_t i, double h) {
  return (StationaryDirect(PerturbCross(p, j, i, h)) -
          StationaryDirect(PerturbCross(p, j, i, -h))) /
         (2.0 * h);
}

std::pair<double, double> BetaMomentsNumeric(double a, double b) {
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto density = [&](double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return std::exp(log_norm + (a - 1) * std::log(x) +
                    (b - 1) * std::log1p(-x));
  };
  const int n = 200000;  // even
  const double h = 1.0 / n;
  double m0 = 0, m1 = 0, m2 = 0;
  for (int k = 0; k <= n; ++k) {
    const double x = k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    const double d = density(x);
    m0 += w * d;
    m1 += w * d * x;
    m2 += w * d * x * x;
  }
  m0 *= h / 3;
  m1 *= h / 3;
  m2 *= h / 3;
  const double mean = m1 / m0;
  return {mean, m2 / m0 - mean * mean};
}

}  // namespace prefrank::oracle
