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

#include <atomic>
#include <cstdlib>
#include <string>

#include "erkit/error.h"
#include "erkit/simd/kernels.h"

namespace erkit::simd {
namespace {

bool CpuHasAvx2() {
#if defined(ERKIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa InitialIsa() {
  const char* forced = std::getenv("ERKIT_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") return Isa::kScalar;
  return DetectedIsa();
}

std::atomic<Isa>& ActiveSlot() {
  static std::atomic<Isa> slot{InitialIsa()};
  return slot;
}

void CheckDims(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

Isa DetectedIsa() {
  static const Isa detected = CpuHasAvx2() ? Isa::kAvx2 : Isa::kScalar;
  return detected;
}

Isa ActiveIsa() { return ActiveSlot().load(std::memory_order_relaxed); }

void SetActiveIsa(Isa isa) {
  if (isa == Isa::kAvx2 && DetectedIsa() != Isa::kAvx2) {
    throw Error(ErrorCode::kInvalidArgument, "avx2 not supported on this CPU");
  }
  ActiveSlot().store(isa, std::memory_order_relaxed);
}

float Dot(std::span<const float> a, std::span<const float> b) {
  CheckDims(a.size(), b.size());
#if defined(ERKIT_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) return avx2::Dot(a.data(), b.data(), a.size());
#endif
  return scalar::Dot(a.data(), b.data(), a.size());
}

float SquaredNorm(std::span<const float> a) {
#if defined(ERKIT_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) return avx2::SquaredNorm(a.data(), a.size());
#endif
  return scalar::SquaredNorm(a.data(), a.size());
}

void DotRows(std::span<const float> query, std::span<const float> rows,
             std::span<float> out) {
  const std::size_t dim = query.size();
  if (dim == 0 ? !rows.empty() : rows.size() % dim != 0) {
    throw Error(ErrorCode::kDimensionMismatch,
                "row storage is not a multiple of the query dimension");
  }
  const std::size_t n_rows = dim == 0 ? out.size() : rows.size() / dim;
  CheckDims(out.size(), n_rows);
#if defined(ERKIT_HAVE_AVX2)
  if (ActiveIsa() == Isa::kAvx2) {
    avx2::DotRows(query.data(), rows.data(), n_rows, dim, out.data());
    return;
  }
#endif
  scalar::DotRows(query.data(), rows.data(), n_rows, dim, out.data());
}

}  // namespace erkit::simd
