#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kappa/graph.hpp"

namespace kappa {

/// Result of applying the flavor's scalar rules to a single graph until none
/// matches. The rules are single-output, so no vector is needed: rule (b)
/// kills the graph, 0-valent e-vertices contribute chi, 0-valent degree-2n
/// Pontryagin vertices kill it, blue 1-valent e-vertices kill it, and the
/// low-Pontryagin splitting moves p_i (i <= floor(n/4)) into a dedicated
/// 0-valent e.p_i vertex (flavor closed) or the external label (pointed).
struct Normalized {
  bool zero = false;
  ChiScalar coeff = ChiScalar(1);
  LabelMonomial ext = LabelMonomial::one();
  MarkedGraph graph;  // canonical
};
Normalized normalize_graph(const MarkedGraph& g);

/// Scalar rules as a vector-level operation.
GraphVector apply_scalar_rules(const MarkedGraph& g);

/// Contracts one matching pair whose two elements are both half-edges, via
/// the modified (blue) or unmodified (red) contraction formula of the
/// flavor. Output terms are normalized and canonical.
GraphVector contract_edge(const MarkedGraph& g, int pair_index);

/// lambda_{i,j}: joins the legs i and j of every term by an edge (the two
/// leg strands become bivalent vertices which are then spliced away), and
/// removes i, j from the leg list.
GraphVector contract_legs(const GraphVector& v, const std::string& i, const std::string& j);

/// One part of a labelled partition: a set of legs with a label monomial.
struct Part {
  std::vector<std::string> legs;  // sorted by leg_less
  LabelMonomial label;
  bool operator==(const Part& o) const { return legs == o.legs && label == o.label; }
  bool operator<(const Part& o) const;
};

/// Corolla normal-form basis element: partition of the leg set with labels,
/// plus an external label in pointed flavors.
struct LabeledPartition {
  std::vector<Part> parts;  // sorted
  void sort_parts();
  bool operator==(const LabeledPartition& o) const { return parts == o.parts; }
  bool operator<(const LabeledPartition& o) const { return parts < o.parts; }
  int degree(int n) const;
};

struct CorollaVector {
  struct Key {
    LabeledPartition partition;
    LabelMonomial external;
    bool operator<(const Key& o) const;
    bool operator==(const Key& o) const {
      return partition == o.partition && external == o.external;
    }
  };
  int n = 1;
  Flavor flavor = Flavor::Closed;
  std::vector<std::string> legs;
  std::map<Key, ChiScalar> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const LabeledPartition& p, const LabelMonomial& ext, const ChiScalar& c);
  CorollaVector operator+(const CorollaVector& o) const;
  CorollaVector operator-(const CorollaVector& o) const;
  CorollaVector operator*(const ChiScalar& c) const;
  bool operator==(const CorollaVector& o) const;
};

/// The canonical marked graph presenting a labelled partition: one vertex per
/// part (in sorted part order), slots attached to the part's legs in leg_less
/// order.
MarkedGraph partition_graph(int n, Flavor f, const LabeledPartition& p);

/// Converts a corolla vector back to a graph vector.
GraphVector corolla_to_graphs(const CorollaVector& v);

enum class Strategy { Deterministic, SeededRandom };

/// Rewrites every term to the corolla (labelled partition) basis by
/// repeatedly contracting internal edges. The deterministic strategy always
/// contracts the lexicographically smallest internal edge of the canonical
/// form; the seeded-random strategy picks uniformly per term and step.
CorollaVector reduce_to_corollas(const GraphVector& v,
                                 Strategy strategy = Strategy::Deterministic,
                                 std::uint64_t seed = 0);

}  // namespace kappa
