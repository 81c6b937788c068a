#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string_view>
#include <vector>

namespace qbound {

enum class Inequality : std::uint8_t {
  Chernoff,
  Bernstein,
  Hoeffding,
  HoeffdingSerfling,
  BernsteinSerfling,
};

inline constexpr Inequality kAllInequalities[] = {
    Inequality::Chernoff, Inequality::Bernstein, Inequality::Hoeffding,
    Inequality::HoeffdingSerfling, Inequality::BernsteinSerfling};

std::string_view to_string(Inequality inequality) noexcept;

// Only the Serfling variants apply to sampling without replacement.
constexpr bool is_without_replacement(Inequality inequality) noexcept {
  return inequality == Inequality::HoeffdingSerfling ||
         inequality == Inequality::BernsteinSerfling;
}

enum class Side : std::uint8_t { Over, Under };

std::string_view to_string(Side side) noexcept;

// Small value-type set of inequality kinds, iterated in declaration order.
class InequalitySet {
 public:
  constexpr InequalitySet() = default;
  constexpr InequalitySet(std::initializer_list<Inequality> kinds) {
    for (Inequality kind : kinds) insert(kind);
  }

  constexpr void insert(Inequality kind) noexcept { bits_ |= bit(kind); }
  constexpr bool contains(Inequality kind) const noexcept { return (bits_ & bit(kind)) != 0; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  std::vector<Inequality> members() const;

  // Chernoff + Bernstein, optionally extended with Hoeffding.
  static constexpr InequalitySet with_replacement(bool with_hoeffding = false) {
    InequalitySet set{Inequality::Chernoff, Inequality::Bernstein};
    if (with_hoeffding) set.insert(Inequality::Hoeffding);
    return set;
  }
  static constexpr InequalitySet without_replacement() {
    return {Inequality::HoeffdingSerfling, Inequality::BernsteinSerfling};
  }

  friend constexpr bool operator==(InequalitySet, InequalitySet) = default;

 private:
  static constexpr std::uint8_t bit(Inequality kind) noexcept {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(kind));
  }
  std::uint8_t bits_ = 0;
};

struct BoundTerm {
  Inequality inequality;
  Side side;
  double probability = 1.0;  // clamped to [0, 1]; meaningless when !applicable
  bool applicable = true;
};

// Omega bounds P(over-estimate), Psi bounds P(under-estimate);
// confidence = max(0, 1 - omega - psi) is a lower bound on P(Q-error <= q).
struct BoundResult {
  double omega = 1.0;
  double psi = 1.0;
  double confidence = 0.0;
  std::vector<BoundTerm> terms;
  std::optional<Inequality> omega_source;  // term that attained the minimum
  std::optional<Inequality> psi_source;
  bool degenerate = false;  // C = 0: every exponent vanishes, confidence reported as 0

  const BoundTerm* find(Inequality inequality, Side side) const noexcept;
};

// Folds per-side terms into a BoundResult (min per side, then clamp).
BoundResult combine_terms(std::vector<BoundTerm> terms);

}  // namespace qbound
