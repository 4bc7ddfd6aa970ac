#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kappa/chi.hpp"
#include "kappa/label.hpp"

namespace kappa {

struct graph_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Leg names compare numerically when both sides are plain nonnegative
/// integers, lexicographically otherwise.
bool leg_less(const std::string& a, const std::string& b);

/// One side of a matching pair: a half-edge index (h >= 0) or a leg name.
struct End {
  int h = -1;
  std::string leg;
  bool is_leg() const { return h < 0; }
  static End half(int i) { return End{i, {}}; }
  static End of_leg(std::string s) { return End{-1, std::move(s)}; }
  bool operator==(const End& o) const { return h == o.h && leg == o.leg; }
};

/// Marked oriented graph: ordered vertices with label monomials, ordered
/// half-edges with weakly monotone incidence, and an ordered perfect matching
/// on half-edges and legs. Legs attach to half-edges only; a bivalent vertex
/// labelled 1 plays the role of a bare strand between two legs.
struct MarkedGraph {
  int n = 1;
  Flavor flavor = Flavor::Closed;
  std::vector<LabelMonomial> labels;       // one per vertex
  std::vector<int> incidence;              // half-edge -> vertex, weakly increasing
  std::vector<std::pair<End, End>> pairs;  // ordered matching

  int num_vertices() const { return static_cast<int>(labels.size()); }
  int num_half_edges() const { return static_cast<int>(incidence.size()); }
  int valence(int v) const;
  std::pair<int, int> slot_range(int v) const;  // [first, last) half-edge
  std::vector<std::string> leg_names() const;   // sorted by leg_less
  bool has_internal_edge() const;
  void check() const;  // throws graph_error on malformed input

  /// Total degree sum_v (|c(v)| + n(val(v)-2)).
  int degree() const;

  bool operator==(const MarkedGraph& o) const;
  bool operator<(const MarkedGraph& o) const;
};

struct CanonResult {
  MarkedGraph graph;
  int sign = 1;     // +1 or -1
  bool zero = false;  // an orientation-reversing automorphism exists (n odd)
};

/// Deterministic representative of the isomorphism class together with the
/// Koszul sign relating the input to it. Sign convention: the graph expands
/// to the ordered word of its half-edges, each of degree n; a reordering
/// contributes the permutation sign to the n-th power and every reversed
/// matching pair contributes (-1)^n.
CanonResult canonicalize(const MarkedGraph& g);

/// Parity (+1/-1) of a permutation given as images perm[i].
int perm_sign(const std::vector<int>& perm);

/// Linear combination of canonical marked graphs over ChiScalar. Terms of
/// pointed flavors additionally carry an external label monomial.
struct GraphVector {
  struct Key {
    MarkedGraph g;
    LabelMonomial external;
    bool operator<(const Key& o) const;
    bool operator==(const Key& o) const { return g == o.g && external == o.external; }
  };

  int n = 1;
  Flavor flavor = Flavor::Closed;
  std::vector<std::string> legs;  // presentation order
  std::map<Key, ChiScalar> terms;

  GraphVector() = default;
  GraphVector(int n_, Flavor f) : n(n_), flavor(f) {}

  bool is_zero() const { return terms.empty(); }
  /// Normalizes (scalar rules), canonicalizes and merges in a raw graph term.
  void add_term(const MarkedGraph& g, const ChiScalar& c,
                const LabelMonomial& external = LabelMonomial::one());
  /// Merges an already-canonical term without renormalizing.
  void add_canonical(const MarkedGraph& g, const ChiScalar& c, const LabelMonomial& external);

  GraphVector operator+(const GraphVector& o) const;
  GraphVector operator-(const GraphVector& o) const;
  GraphVector operator*(const ChiScalar& c) const;
  /// Disjoint-union product; leg sets must be disjoint.
  GraphVector operator*(const GraphVector& o) const;

  bool operator==(const GraphVector& o) const;

  /// Common total degree of the terms (graph degree plus external degree).
  std::optional<int> homogeneous_degree() const;
};

/// The empty-graph unit vector (no legs) with coefficient c.
GraphVector scalar_vector(int n, Flavor f, const ChiScalar& c);

/// Single corolla: one vertex with the given label, one leg per name, in the
/// written order.
GraphVector corolla(int n, Flavor f, const std::vector<std::string>& legs,
                    const LabelMonomial& label,
                    const LabelMonomial& external = LabelMonomial::one());

/// Bare strand between two legs (bivalent vertex labelled 1).
GraphVector strand(int n, Flavor f, const std::string& a, const std::string& b);

/// Relabels legs via the bijection sigma (old name -> new name) and
/// re-canonicalizes; Koszul signs are picked up by canonicalization.
GraphVector permute_legs(const GraphVector& v, const std::map<std::string, std::string>& sigma);

}  // namespace kappa
