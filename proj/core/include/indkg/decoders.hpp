// Copyright 2026 The indkg Authors.
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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "indkg/autodiff.hpp"

namespace indkg {

enum class DecoderType { kNone, kTransE, kDistMult, kRotatE };

// KGE triple scorer; higher means more plausible.
//   TransE:   -||h + r - t||_p
//   DistMult: sum_i h_i r_i t_i
//   RotatE:   gamma - sum_i |h_i * exp(i theta_i) - t_i|
// RotatE entity vectors of width 2m hold [real parts | imaginary parts] and
// the relation holds m phases, so every rotation has unit modulus.
struct DecoderKind {
  DecoderType type = DecoderType::kNone;
  int p = 2;
  double gamma = 10.0;
};

DecoderType parse_decoder_type(std::string_view s);
std::string_view to_string(DecoderType t);

// Width of the stored relation parameter for entity width `dim`.
std::size_t decoder_relation_width(const DecoderKind& kind, std::size_t dim);

double kge_score(const DecoderKind& kind, std::span<const double> h, std::span<const double> r,
                 std::span<const double> t);

// Row-wise on a tape: h, t are (m x dim), r is (m x relation width); result
// is (m x 1).
ad::Var kge_score(const DecoderKind& kind, ad::Var h, ad::Var r, ad::Var t);

// Maps an angle into (-pi, pi].
double wrap_phase(double x);

}  // namespace indkg
