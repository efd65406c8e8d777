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

#include "erkit/simd/kernels.h"

namespace erkit::simd::scalar {

float Dot(const float* a, const float* b, std::size_t n) {
  float sum = 0.0f;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

float SquaredNorm(const float* a, std::size_t n) { return Dot(a, a, n); }

void DotRows(const float* query, const float* rows, std::size_t n_rows,
             std::size_t dim, float* out) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    out[r] = Dot(query, rows + r * dim, dim);
  }
}

}  // namespace erkit::simd::scalar
