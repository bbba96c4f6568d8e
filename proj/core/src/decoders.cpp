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

#include "indkg/decoders.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "indkg/error.hpp"

namespace indkg {

DecoderType parse_decoder_type(std::string_view s) {
  if (s == "none") return DecoderType::kNone;
  if (s == "transe") return DecoderType::kTransE;
  if (s == "distmult") return DecoderType::kDistMult;
  if (s == "rotate") return DecoderType::kRotatE;
  fail(ErrorCode::kInvalidArgument, "unknown decoder '" + std::string(s) + "'");
}

std::string_view to_string(DecoderType t) {
  switch (t) {
    case DecoderType::kNone: return "none";
    case DecoderType::kTransE: return "transe";
    case DecoderType::kDistMult: return "distmult";
    case DecoderType::kRotatE: return "rotate";
  }
  return "?";
}

std::size_t decoder_relation_width(const DecoderKind& kind, std::size_t dim) {
  if (kind.type == DecoderType::kRotatE) {
    if (dim % 2 != 0) fail(ErrorCode::kShapeMismatch, "RotatE needs an even entity width");
    return dim / 2;
  }
  return dim;
}

double wrap_phase(double x) {
  constexpr double kPi = std::numbers::pi;
  double y = std::fmod(x + kPi, 2.0 * kPi);
  if (y < 0) y += 2.0 * kPi;
  y -= kPi;
  return y == -kPi ? kPi : y;
}

double kge_score(const DecoderKind& kind, std::span<const double> h, std::span<const double> r,
                 std::span<const double> t) {
  if (h.size() != t.size() || r.size() != decoder_relation_width(kind, h.size())) {
    fail(ErrorCode::kShapeMismatch, "kge_score operand widths");
  }
  switch (kind.type) {
    case DecoderType::kTransE: {
      double acc = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = h[i] + r[i] - t[i];
        acc += kind.p == 1 ? std::fabs(x) : x * x;
      }
      return kind.p == 1 ? -acc : -std::sqrt(acc);
    }
    case DecoderType::kDistMult: {
      double acc = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) acc += h[i] * r[i] * t[i];
      return acc;
    }
    case DecoderType::kRotatE: {
      const std::size_t m = r.size();
      double dist = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::complex<double> hc(h[i], h[m + i]);
        const std::complex<double> tc(t[i], t[m + i]);
        dist += std::abs(hc * std::polar(1.0, r[i]) - tc);
      }
      return kind.gamma - dist;
    }
    case DecoderType::kNone: break;
  }
  fail(ErrorCode::kInvalidArgument, "kge_score with decoder 'none'");
}

ad::Var kge_score(const DecoderKind& kind, ad::Var h, ad::Var r, ad::Var t) {
  if (h.rows() != t.rows() || h.rows() != r.rows() || h.cols() != t.cols() ||
      r.cols() != decoder_relation_width(kind, h.cols())) {
    fail(ErrorCode::kShapeMismatch, "kge_score operand shapes");
  }
  switch (kind.type) {
    case DecoderType::kTransE:
      if (kind.p != 1 && kind.p != 2) fail(ErrorCode::kInvalidArgument, "TransE p must be 1 or 2");
      return ad::neg(ad::pnorm_rows(ad::sub(ad::add(h, r), t), kind.p));
    case DecoderType::kDistMult:
      return ad::sum_cols(ad::mul(ad::mul(h, r), t));
    case DecoderType::kRotatE: {
      const std::size_t m = r.cols();
      const ad::Var hr = ad::slice_cols(h, 0, m);
      const ad::Var hi = ad::slice_cols(h, m, 2 * m);
      const ad::Var tr = ad::slice_cols(t, 0, m);
      const ad::Var ti = ad::slice_cols(t, m, 2 * m);
      const ad::Var c = ad::cos(r);
      const ad::Var s = ad::sin(r);
      const ad::Var re = ad::sub(ad::sub(ad::mul(hr, c), ad::mul(hi, s)), tr);
      const ad::Var im = ad::sub(ad::add(ad::mul(hr, s), ad::mul(hi, c)), ti);
      const ad::Var modulus = ad::sqrt(ad::add(ad::square(re), ad::square(im)));
      return ad::add_scalar(ad::neg(ad::sum_cols(modulus)), kind.gamma);
    }
    case DecoderType::kNone: break;
  }
  fail(ErrorCode::kInvalidArgument, "kge_score with decoder 'none'");
}

}  // namespace indkg
