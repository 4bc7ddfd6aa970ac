#pragma once

#include <map>
#include <string>
#include <vector>

#include "kappa/graph.hpp"

namespace kappa {

/// Morphism of the chi-parametrized (signed) Brauer category: a partial
/// bijection between leg sets together with ordered matchings on the
/// uncovered parts, scaled by a ChiScalar. In the signed variant reversing a
/// matching pair costs a sign.
struct BrauerMorphism {
  bool signed_variant = false;
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::map<std::string, std::string> bij;                  // S° -> T°
  std::vector<std::pair<std::string, std::string>> cups;   // matching on S \ S°
  std::vector<std::pair<std::string, std::string>> caps;   // matching on T \ T°
  ChiScalar coeff = ChiScalar(1);

  static BrauerMorphism identity(const std::vector<std::string>& legs, bool signed_variant);

  void validate() const;  // throws graph_error when not a partition
  /// Orients every pair by leg order and sorts; in the signed variant each
  /// reversal multiplies the coefficient by -1.
  void normalize();
  bool is_downward() const { return caps.empty(); }
  bool operator==(const BrauerMorphism& o) const;
};

/// Diagrammatic composition g . f; closed circles become (chi-2) in the
/// unsigned category and -(chi-2) per compatibly oriented circle in the
/// signed one.
BrauerMorphism compose(const BrauerMorphism& g, const BrauerMorphism& f);

/// Action on graph vectors: cups contract legs, caps adjoin bivalent strand
/// vertices, the bijection renames. The vector's leg set must equal the
/// morphism's source.
GraphVector act(const BrauerMorphism& m, const GraphVector& v);

}  // namespace kappa
