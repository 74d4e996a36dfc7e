#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "adhm/linalg.hpp"

namespace adhm {

enum class Verdict { Holds, Fails, Unknown };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

/// Outcome of a non-degeneracy or surjectivity test. `witness` is non-empty
/// exactly when the verdict is Fails. It holds one subspace (C1, C2,
/// surjectivity) or the pair (V0, V1) for the projective-plane conditions.
/// df-surjectivity failures carry the unit-norm kernel element instead.
struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<Subspace> witness;
  std::optional<CMat> witness_map;

  bool holds() const { return verdict == Verdict::Holds; }
  bool fails() const { return verdict == Verdict::Fails; }

  static CheckResult hold() { return {Verdict::Holds, {}, std::nullopt}; }
  static CheckResult unknown() { return {Verdict::Unknown, {}, std::nullopt}; }
  static CheckResult fail(std::vector<Subspace> w) {
    return {Verdict::Fails, std::move(w), std::nullopt};
  }
};

}  // namespace adhm
