#include <algorithm>
#include <cmath>
#include <string>

#include "hypercover/errors.hpp"
#include "hypercover/protocol.hpp"

namespace hypercover {

std::string_view to_string(Variant v) { return v == Variant::FullDeal ? "A" : "B"; }

std::string_view to_string(AlphaMode m) { return m == AlphaMode::Global ? "global" : "per-edge"; }

std::string_view to_string(AlphaBranch b) {
  switch (b) {
    case AlphaBranch::Scaled: return "scaled";
    case AlphaBranch::Clamped: return "clamped";
    case AlphaBranch::Otherwise: return "otherwise";
  }
  return "otherwise";
}

Variant variant_from_string(std::string_view s) {
  if (s == "A" || s == "a" || s == "full") return Variant::FullDeal;
  if (s == "B" || s == "b" || s == "half") return Variant::HalfDeal;
  throw Error(ErrorCode::BadInput, "unknown variant '" + std::string(s) + "'");
}

AlphaMode alpha_mode_from_string(std::string_view s) {
  if (s == "global") return AlphaMode::Global;
  if (s == "per-edge" || s == "per_edge") return AlphaMode::PerEdge;
  throw Error(ErrorCode::BadInput, "unknown alpha mode '" + std::string(s) + "'");
}

AlphaChoice choose_alpha(std::uint32_t f, const BigInt& delta, const Rational& epsilon,
                         const Rational& gamma) {
  const double d = std::max(3.0, delta.get_d());
  const double log_delta = std::log2(d);
  const double log_f_eps = std::max(1.0, std::log2(static_cast<double>(f) / epsilon.get_d()));
  const double x =
      log_delta / (static_cast<double>(std::max<std::uint32_t>(f, 1)) * log_f_eps * std::log2(log_delta));
  const double threshold = std::pow(log_delta, gamma.get_d() / 2.0);

  AlphaChoice choice;
  choice.formula_value = x;
  choice.alpha = 2;
  if (x >= threshold) {
    if (x > 2.0) {
      choice.branch = AlphaBranch::Scaled;
      Rational dyadic(BigInt(std::floor(x * 256.0)), 256);
      dyadic.canonicalize();
      if (dyadic > 2) choice.alpha = dyadic;
    } else {
      choice.branch = AlphaBranch::Clamped;
    }
  } else {
    choice.branch = AlphaBranch::Otherwise;
  }
  return choice;
}

Rational ProtocolParams::edge_alpha(std::uint64_t local_delta) const {
  if (alpha_mode == AlphaMode::Global) return alpha;
  return choose_alpha(f, BigInt(std::to_string(local_delta)), epsilon, gamma).alpha;
}

ProtocolParams compute_params(std::uint32_t f, const BigInt& delta, const Rational& epsilon,
                              const Rational& gamma, Variant variant, AlphaMode alpha_mode) {
  if (epsilon <= 0 || epsilon > 1) {
    throw Error(ErrorCode::BadEpsilon, "epsilon must lie in (0, 1], got " + to_fraction_string(epsilon));
  }
  if (gamma <= 0 || gamma >= 1) {
    throw Error(ErrorCode::BadInput, "gamma must lie in (0, 1)");
  }
  ProtocolParams p;
  p.epsilon = epsilon;
  p.f = std::max<std::uint32_t>(f, 1);
  p.beta = epsilon / (Rational(p.f) + epsilon);
  p.beta.canonicalize();
  p.z = static_cast<std::uint32_t>(ceil_log(2, 1 / p.beta));
  p.gamma = gamma;
  p.delta = delta;
  p.variant = variant;
  p.alpha_mode = alpha_mode;
  const AlphaChoice choice = choose_alpha(p.f, delta, epsilon, gamma);
  p.alpha = choice.alpha;
  p.alpha_branch = choice.branch;
  p.alpha_formula = choice.formula_value;
  return p;
}

Rational initial_deal(std::span<const BigInt> weights, std::span<const std::uint64_t> degrees) {
  if (weights.empty() || weights.size() != degrees.size()) {
    throw Error(ErrorCode::BadInput, "initial_deal needs one degree per weight");
  }
  Rational best;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (degrees[i] == 0) throw Error(ErrorCode::BadInput, "member of an edge with degree 0");
    Rational q(weights[i], BigInt(std::to_string(degrees[i])));
    q.canonicalize();
    if (i == 0 || q < best) best = q;
  }
  return best / 2;
}

}  // namespace hypercover
