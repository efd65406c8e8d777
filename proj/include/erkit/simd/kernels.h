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

#ifndef ERKIT_SIMD_KERNELS_H_
#define ERKIT_SIMD_KERNELS_H_

// Similarity kernels used by matching, leak filtering and visual matching.
//
// Every kernel has a portable scalar reference in `scalar::` and, when the
// build enables it, an AVX2+FMA variant in `avx2::`. The unqualified entry
// points dispatch to the best variant the running CPU supports. Setting the
// environment variable ERKIT_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace erkit::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view IsaName(Isa isa);

// Best ISA supported by both this build and the running CPU.
Isa DetectedIsa();
Isa ActiveIsa();
// Throws Error(kInvalidArgument) if `isa` is not supported here.
void SetActiveIsa(Isa isa);

float Dot(std::span<const float> a, std::span<const float> b);
float SquaredNorm(std::span<const float> a);
// out[i] = <query, row i>, rows stored row-major with query.size() columns.
void DotRows(std::span<const float> query, std::span<const float> rows,
             std::span<float> out);

namespace scalar {
float Dot(const float* a, const float* b, std::size_t n);
float SquaredNorm(const float* a, std::size_t n);
void DotRows(const float* query, const float* rows, std::size_t n_rows,
             std::size_t dim, float* out);
}  // namespace scalar

#if defined(ERKIT_HAVE_AVX2)
namespace avx2 {
float Dot(const float* a, const float* b, std::size_t n);
float SquaredNorm(const float* a, std::size_t n);
void DotRows(const float* query, const float* rows, std::size_t n_rows,
             std::size_t dim, float* out);
}  // namespace avx2
#endif

}  // namespace erkit::simd

#endif  // ERKIT_SIMD_KERNELS_H_
