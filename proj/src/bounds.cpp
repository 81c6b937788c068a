#include "qbound/bounds.hpp"

#include <algorithm>

namespace qbound {

std::string_view to_string(Inequality inequality) noexcept {
  switch (inequality) {
    case Inequality::Chernoff: return "chernoff";
    case Inequality::Bernstein: return "bernstein";
    case Inequality::Hoeffding: return "hoeffding";
    case Inequality::HoeffdingSerfling: return "hoeffding_serfling";
    case Inequality::BernsteinSerfling: return "bernstein_serfling";
  }
  return "unknown";
}

std::string_view to_string(Side side) noexcept {
  return side == Side::Over ? "over" : "under";
}

std::vector<Inequality> InequalitySet::members() const {
  std::vector<Inequality> out;
  for (Inequality kind : kAllInequalities) {
    if (contains(kind)) out.push_back(kind);
  }
  return out;
}

const BoundTerm* BoundResult::find(Inequality inequality, Side side) const noexcept {
  for (const BoundTerm& term : terms) {
    if (term.inequality == inequality && term.side == side) return &term;
  }
  return nullptr;
}

BoundResult combine_terms(std::vector<BoundTerm> terms) {
  BoundResult result;
  for (const BoundTerm& term : terms) {
    if (!term.applicable) continue;
    double& slot = term.side == Side::Over ? result.omega : result.psi;
    auto& source = term.side == Side::Over ? result.omega_source : result.psi_source;
    if (!source || term.probability < slot) {
      slot = term.probability;
      source = term.inequality;
    }
  }
  result.confidence = std::max(0.0, 1.0 - result.omega - result.psi);
  result.terms = std::move(terms);
  return result;
}

}  // namespace qbound
