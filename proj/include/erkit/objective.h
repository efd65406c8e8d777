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

#ifndef ERKIT_OBJECTIVE_H_
#define ERKIT_OBJECTIVE_H_

// Label-smoothed token cross-entropy averaged over a target sequence, the
// multi-task sum, and its analytic gradient.
//
// With V classes and smoothing epsilon the target distribution is
//   q_v = (1 - epsilon) * [v == target] + epsilon / V
// and the per-token loss is -sum_v q_v * log softmax(logits)_v.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace erkit::objective {

inline constexpr double kPretrainSmoothing = 0.2;
inline constexpr double kFinetuneSmoothing = 0.1;

// K x V score table, row-major. All entries finite, K >= 1, V >= 2.
class TokenLogits {
 public:
  TokenLogits(std::size_t rows, std::size_t cols, std::vector<double> values);
  TokenLogits(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t k) const {
    return std::span<const double>(values_).subspan(k * cols_, cols_);
  }
  std::span<double> mutable_row(std::size_t k) {
    return std::span<double>(values_).subspan(k * cols_, cols_);
  }
  double at(std::size_t k, std::size_t v) const { return values_[k * cols_ + v]; }
  double& at(std::size_t k, std::size_t v) { return values_[k * cols_ + v]; }
  std::span<const double> values() const { return values_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

double LogSumExp(std::span<const double> row);

// log softmax(row)[target] negated; the epsilon == 0 special case.
double CrossEntropy(std::span<const double> logits, std::size_t target);

// Throws kIndexOutOfRange or kInvalidEpsilon (needs 0 <= epsilon < 1).
double LabelSmoothedCe(std::span<const double> logits, std::size_t target, double epsilon);

// Mean of LabelSmoothedCe over rows. Throws kLengthMismatch.
double SequenceLoss(const TokenLogits& logits, std::span<const std::size_t> targets,
                    double epsilon);

// d SequenceLoss / d logits = (softmax(row) - q) / K.
TokenLogits SequenceLossGrad(const TokenLogits& logits, std::span<const std::size_t> targets,
                             double epsilon);

struct LossBreakdown {
  double entity = 0.0;
  double rationale = 0.0;
  double qa = 0.0;
  double total = 0.0;
};

// Unweighted sum of the three task losses.
LossBreakdown MultitaskLoss(double entity, double rationale, double qa);

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
};

// Compares SequenceLossGrad with central differences of SequenceLoss.
// Relative error uses max(|analytic|, |numeric|, 1e-8) as denominator.
GradCheckResult CheckGradient(const TokenLogits& logits, std::span<const std::size_t> targets,
                              double epsilon, double step = 1e-5);

}  // namespace erkit::objective

#endif  // ERKIT_OBJECTIVE_H_
