// Copyright 2026 The erkit Authors.
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

#include "erkit/objective.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "erkit/error.h"

namespace erkit::objective {
namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidEpsilon, "epsilon must satisfy 0 <= epsilon < 1");
  }
}

void CheckTargets(const TokenLogits& logits, std::span<const std::size_t> targets) {
  if (targets.size() != logits.rows()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(targets.size()) + " targets for " +
                                                std::to_string(logits.rows()) + " rows");
  }
}

// Smoothed loss of one row in extended precision.
long double ExtendedRowLoss(std::span<const long double> row, std::size_t target,
                            double epsilon) {
  const long double peak = *std::max_element(row.begin(), row.end());
  long double sum = 0.0L;
  for (long double x : row) sum += std::exp(x - peak);
  const long double lse = peak + std::log(sum);
  const long double v = static_cast<long double>(row.size());
  long double loss = 0.0L;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const long double q = (i == target ? 1.0L - epsilon : 0.0L) + epsilon / v;
    loss += q * (lse - row[i]);
  }
  return loss;
}

}  // namespace

TokenLogits::TokenLogits(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows_ < 1 || cols_ < 2) {
    throw Error(ErrorCode::kInvalidArgument, "logits need K >= 1 rows and V >= 2 columns");
  }
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kLengthMismatch, "logit storage does not match K x V");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); })) {
    throw Error(ErrorCode::kInvalidArgument, "logits must be finite");
  }
}

TokenLogits::TokenLogits(std::size_t rows, std::size_t cols)
    : TokenLogits(rows, cols, std::vector<double>(rows * cols, 0.0)) {}

double LogSumExp(std::span<const double> row) {
  const double peak = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double x : row) sum += std::exp(x - peak);
  return peak + std::log(sum);
}

double CrossEntropy(std::span<const double> logits, std::size_t target) {
  if (target >= logits.size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "target " + std::to_string(target),
                static_cast<std::int64_t>(target));
  }
  return LogSumExp(logits) - logits[target];
}

double LabelSmoothedCe(std::span<const double> logits, std::size_t target, double epsilon) {
  CheckEpsilon(epsilon);
  const double nll = CrossEntropy(logits, target);
  const double lse = LogSumExp(logits);
  // sum_v -log p_v, the loss against the uniform distribution times V.
  double uniform = 0.0;
  for (double x : logits) uniform += lse - x;
  const double v = static_cast<double>(logits.size());
  return (1.0 - epsilon) * nll + (epsilon / v) * uniform;
}

double SequenceLoss(const TokenLogits& logits, std::span<const std::size_t> targets,
                    double epsilon) {
  CheckTargets(logits, targets);
  double sum = 0.0;
  for (std::size_t k = 0; k < logits.rows(); ++k) {
    sum += LabelSmoothedCe(logits.row(k), targets[k], epsilon);
  }
  return sum / static_cast<double>(logits.rows());
}

TokenLogits SequenceLossGrad(const TokenLogits& logits, std::span<const std::size_t> targets,
                             double epsilon) {
  CheckTargets(logits, targets);
  CheckEpsilon(epsilon);
  const std::size_t rows = logits.rows();
  const std::size_t cols = logits.cols();
  const double inv_k = 1.0 / static_cast<double>(rows);
  const double smooth = epsilon / static_cast<double>(cols);
  TokenLogits grad(rows, cols);
  for (std::size_t k = 0; k < rows; ++k) {
    if (targets[k] >= cols) {
      throw Error(ErrorCode::kIndexOutOfRange, "target " + std::to_string(targets[k]),
                  static_cast<std::int64_t>(targets[k]));
    }
    auto row = logits.row(k);
    const double lse = LogSumExp(row);
    for (std::size_t v = 0; v < cols; ++v) {
      const double q = (v == targets[k] ? 1.0 - epsilon : 0.0) + smooth;
      grad.at(k, v) = (std::exp(row[v] - lse) - q) * inv_k;
    }
  }
  return grad;
}

LossBreakdown MultitaskLoss(double entity, double rationale, double qa) {
  return LossBreakdown{entity, rationale, qa, entity + rationale + qa};
}

GradCheckResult CheckGradient(const TokenLogits& logits, std::span<const std::size_t> targets,
                              double epsilon, double step) {
  const TokenLogits analytic = SequenceLossGrad(logits, targets, epsilon);
  const long double inv_k = 1.0L / static_cast<long double>(logits.rows());
  GradCheckResult result;
  for (std::size_t k = 0; k < logits.rows(); ++k) {
    // Only row k changes under a probe of (k, v); the other rows cancel.
    std::vector<long double> row(logits.row(k).begin(), logits.row(k).end());
    for (std::size_t v = 0; v < logits.cols(); ++v) {
      const long double original = row[v];
      row[v] = original + step;
      const long double up = ExtendedRowLoss(row, targets[k], epsilon);
      row[v] = original - step;
      const long double down = ExtendedRowLoss(row, targets[k], epsilon);
      row[v] = original;
      const double numeric = static_cast<double>((up - down) / (2.0L * step) * inv_k);
      const double abs_err = std::abs(numeric - analytic.at(k, v));
      const double denom = std::max({std::abs(numeric), std::abs(analytic.at(k, v)), 1e-8});
      result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
      result.max_relative_error = std::max(result.max_relative_error, abs_err / denom);
    }
  }
  return result;
}

}  // namespace erkit::objective
