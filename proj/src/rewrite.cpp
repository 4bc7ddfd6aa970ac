#include "kappa/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <random>

namespace kappa {

namespace {

/// Intermediate mutable form for graph surgery. Slot ids are arbitrary
/// unique ints; the word order is vertex order, then slot order within each
/// vertex.
struct LEnd {
  int slot = -1;
  std::string leg;
  bool is_leg() const { return slot < 0; }
  static LEnd of_slot(int s) { return LEnd{s, {}}; }
  static LEnd of_leg(std::string l) { return LEnd{-1, std::move(l)}; }
};

struct Loose {
  int n = 1;
  Flavor flavor = Flavor::Closed;
  struct V {
    LabelMonomial label;
    std::vector<int> slots;
  };
  std::vector<V> verts;
  std::vector<std::pair<LEnd, LEnd>> pairs;

  std::vector<int> word() const {
    std::vector<int> w;
    for (const auto& v : verts) w.insert(w.end(), v.slots.begin(), v.slots.end());
    return w;
  }

  MarkedGraph freeze() const {
    MarkedGraph g;
    g.n = n;
    g.flavor = flavor;
    std::map<int, int> id;
    for (const auto& v : verts) {
      g.labels.push_back(v.label);
      for (int s : v.slots) {
        id[s] = static_cast<int>(g.incidence.size());
        g.incidence.push_back(static_cast<int>(g.labels.size()) - 1);
      }
    }
    for (const auto& pr : pairs) {
      End a = pr.first.is_leg() ? End::of_leg(pr.first.leg) : End::half(id.at(pr.first.slot));
      End b = pr.second.is_leg() ? End::of_leg(pr.second.leg) : End::half(id.at(pr.second.slot));
      g.pairs.emplace_back(a, b);
    }
    return g;
  }
};

Loose loose_of(const MarkedGraph& g) {
  Loose L;
  L.n = g.n;
  L.flavor = g.flavor;
  L.verts.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) L.verts[v].label = g.labels[v];
  for (int h = 0; h < g.num_half_edges(); ++h) L.verts[g.incidence[h]].slots.push_back(h);
  for (const auto& pr : g.pairs) {
    auto conv = [](const End& e) {
      return e.is_leg() ? LEnd::of_leg(e.leg) : LEnd::of_slot(e.h);
    };
    L.pairs.emplace_back(conv(pr.first), conv(pr.second));
  }
  return L;
}

/// Koszul sign relating two presentations of the same loose graph (same slot
/// id set, same unordered pairs): permutation parity of the slot word to the
/// n-th power times (-1)^n per reversed pair.
int relate_sign(const Loose& before, const Loose& after) {
  if (before.n % 2 == 0) return 1;
  std::vector<int> wb = before.word(), wa = after.word();
  std::map<int, int> posa;
  for (size_t i = 0; i < wa.size(); ++i) posa[wa[i]] = static_cast<int>(i);
  std::vector<int> perm;
  perm.reserve(wb.size());
  for (int s : wb) perm.push_back(posa.at(s));
  int sign = perm_sign(perm);
  // pair reversals: match pairs by their (unordered) content
  auto key = [](const LEnd& e) { return e.is_leg() ? std::make_pair(-1, e.leg) : std::make_pair(e.slot, std::string()); };
  std::map<std::pair<std::pair<int, std::string>, std::pair<int, std::string>>, int> orient;
  for (const auto& pr : before.pairs) {
    auto a = key(pr.first), b = key(pr.second);
    if (b < a) {
      orient[{b, a}] = 1;  // stored reversed w.r.t. sorted form
    } else {
      orient[{a, b}] = 0;
    }
  }
  int flips = 0;
  for (const auto& pr : after.pairs) {
    auto a = key(pr.first), b = key(pr.second);
    int o = (b < a) ? 1 : 0;
    auto it = orient.find(b < a ? std::make_pair(b, a) : std::make_pair(a, b));
    if (it != orient.end() && it->second != o) ++flips;
  }
  if (flips % 2) sign = -sign;
  return sign;
}

int slot_vertex(const Loose& L, int slot) {
  for (size_t v = 0; v < L.verts.size(); ++v)
    for (int s : L.verts[v].slots)
      if (s == slot) return static_cast<int>(v);
  throw graph_error("slot not found");
}

/// Moves pair `pi`'s first slot to the end of its vertex, second slot to the
/// front of its vertex, and the second vertex directly after the first.
/// Returns the prepared graph and the sign relating input to it.
struct Prep {
  Loose L;
  int sign = 1;
  int u = -1, w = -1;  // vertex indices in L (w == u for loops)
  int p = -1, q = -1;  // the contracted slots, pair oriented (p, q)
};

Prep prep_edge(const Loose& in, int pi) {
  Prep P;
  const auto& pr = in.pairs[pi];
  if (pr.first.is_leg() || pr.second.is_leg()) throw graph_error("pair is not an internal edge");
  P.p = pr.first.slot;
  P.q = pr.second.slot;
  int u = slot_vertex(in, P.p), w = slot_vertex(in, P.q);
  Loose L = in;
  if (u == w) {
    // loop: slots (p, q, rest...)
    auto& sl = L.verts[u].slots;
    std::vector<int> ns{P.p, P.q};
    for (int s : sl)
      if (s != P.p && s != P.q) ns.push_back(s);
    sl = ns;
    P.u = P.w = u;
  } else {
    auto& su = L.verts[u].slots;
    su.erase(std::find(su.begin(), su.end(), P.p));
    su.push_back(P.p);
    auto& sw = L.verts[w].slots;
    sw.erase(std::find(sw.begin(), sw.end(), P.q));
    sw.insert(sw.begin(), P.q);
    // move w's vertex directly after u
    Loose L2;
    L2.n = L.n;
    L2.flavor = L.flavor;
    std::vector<int> order;
    for (int v = 0; v < static_cast<int>(L.verts.size()); ++v) {
      if (v == w) continue;
      order.push_back(v);
      if (v == u) order.push_back(w);
    }
    int nu = -1, nw = -1;
    for (size_t k = 0; k < order.size(); ++k) {
      if (order[k] == u) nu = static_cast<int>(k);
      if (order[k] == w) nw = static_cast<int>(k);
      L2.verts.push_back(L.verts[order[k]]);
    }
    L2.pairs = L.pairs;
    L = std::move(L2);
    P.u = nu;
    P.w = nw;
  }
  P.sign = relate_sign(in, L);
  P.L = std::move(L);
  return P;
}

void erase_pair_with_slot(Loose& L, int slot) {
  for (size_t i = 0; i < L.pairs.size(); ++i) {
    const auto& pr = L.pairs[i];
    if ((!pr.first.is_leg() && pr.first.slot == slot) ||
        (!pr.second.is_leg() && pr.second.slot == slot)) {
      L.pairs.erase(L.pairs.begin() + i);
      return;
    }
  }
}

void append_vertex(Loose& L, const LabelMonomial& label) {
  L.verts.push_back({label, {}});
}

}  // namespace

Normalized normalize_graph(const MarkedGraph& g0) {
  Normalized out;
  MarkedGraph g = g0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < g.num_vertices() && !changed; ++v) {
      const LabelMonomial& c = g.labels[v];
      int val = g.valence(v);
      for (size_t i = 0; i < c.p.size(); ++i)
        if (c.p[i] > 0 && static_cast<int>(i + 1) > g.n - 1)
          throw graph_error("label uses p_" + std::to_string(i + 1) + " beyond n-1");
      // rule (b): negative virtual degree kills the graph
      if (c.degree(g.n) + g.n * (val - 2) < 0) {
        out.zero = true;
        return out;
      }
      if (val == 0) {
        if (c.is_euler()) {  // rule (c): 0-valent e-vertex equals chi
          out.coeff *= ChiScalar::chi();
          g.labels.erase(g.labels.begin() + v);
          for (auto& x : g.incidence)
            if (x > v) --x;
          changed = true;
          continue;
        }
        if (c.pure_pontryagin() && c.degree(g.n) == 2 * g.n) {
          out.zero = true;
          return out;
        }
      }
      if (is_blue(g.flavor) && val == 1 && c.is_euler()) {  // rule (c''')
        out.zero = true;
        return out;
      }
      // rules (c''), (c''''): low-Pontryagin splitting
      if (g.flavor == Flavor::Pointed || g.flavor == Flavor::Closed) {
        int i = c.lowest_low_p(g.n);
        if (i > 0) {
          LabelMonomial upsilon = LabelMonomial::euler() * LabelMonomial::pont(i);
          if (g.flavor == Flavor::Closed && val == 0 && c == upsilon)
            continue;  // the dedicated 0-valent e.p_i generator stays
          out.coeff *= ChiScalar::inv_chi();
          g.labels[v] = c.div_p(i);
          if (g.flavor == Flavor::Closed) {
            g.labels.push_back(upsilon);
          } else {
            out.ext = out.ext * LabelMonomial::pont(i);
          }
          changed = true;
          continue;
        }
      }
    }
  }
  CanonResult cr = canonicalize(g);
  if (cr.zero) {
    out.zero = true;
    return out;
  }
  if (cr.sign < 0) out.coeff = -out.coeff;
  out.graph = std::move(cr.graph);
  return out;
}

GraphVector apply_scalar_rules(const MarkedGraph& g) {
  GraphVector v(g.n, g.flavor);
  v.legs = g.leg_names();
  v.add_term(g, ChiScalar(1));
  return v;
}

GraphVector contract_edge(const MarkedGraph& g, int pair_index) {
  if (pair_index < 0 || pair_index >= static_cast<int>(g.pairs.size()))
    throw graph_error("pair index out of range");
  Loose in = loose_of(g);
  Prep P = prep_edge(in, pair_index);
  GraphVector out(g.n, g.flavor);
  out.legs = g.leg_names();
  const bool blue = is_blue(g.flavor);
  const bool pointed = has_external(g.flavor);
  ChiScalar s(P.sign);

  auto emit = [&](const Loose& L, const ChiScalar& c, const LabelMonomial& ext) {
    out.add_term(L.freeze(), c, ext);
  };

  if (P.u == P.w) {  // loop
    Loose base = P.L;
    base.pairs.erase(base.pairs.begin() + pair_index);
    auto& slots = base.verts[P.u].slots;
    slots.erase(slots.begin(), slots.begin() + 2);  // p, q were moved to the front
    LabelMonomial c = base.verts[P.u].label;
    int rest = static_cast<int>(slots.size());
    if (blue) {
      Loose t1 = base;
      t1.verts[P.u].label = c * LabelMonomial::euler();
      emit(t1, s * ChiScalar::chi_minus(2) / ChiScalar::chi(), LabelMonomial::one());
      Loose t2 = base;
      append_vertex(t2, LabelMonomial::euler(2));
      emit(t2, s * ChiScalar::inv_chi().pow(2), LabelMonomial::one());
    } else {
      Loose t1 = base;
      t1.verts[P.u].label = c * LabelMonomial::euler();
      emit(t1, s, LabelMonomial::one());
      if (pointed) {
        Loose t2 = base;
        emit(t2, s, LabelMonomial::euler());
      }
      if (rest == 0 && (pointed || c.is_one())) {
        Loose t3 = base;
        t3.verts.erase(t3.verts.begin() + P.u);
        emit(t3, s * ChiScalar(-2), pointed ? c : LabelMonomial::one());
      }
    }
  } else {  // edge between distinct vertices
    Loose base = P.L;
    base.pairs.erase(base.pairs.begin() + pair_index);
    auto& su = base.verts[P.u].slots;
    su.pop_back();  // p at the end
    auto& sw = base.verts[P.w].slots;
    sw.erase(sw.begin());  // q at the front
    LabelMonomial cu = base.verts[P.u].label, cw = base.verts[P.w].label;
    int restU = static_cast<int>(su.size()), restW = static_cast<int>(sw.size());

    {  // merged term
      Loose t1 = base;
      t1.verts[P.u].label = cu * cw;
      t1.verts[P.u].slots.insert(t1.verts[P.u].slots.end(), t1.verts[P.w].slots.begin(),
                                 t1.verts[P.w].slots.end());
      t1.verts.erase(t1.verts.begin() + P.w);
      emit(t1, s, LabelMonomial::one());
    }
    if (blue) {
      Loose t2 = base;
      append_vertex(t2, LabelMonomial::euler(2));
      emit(t2, s * ChiScalar::inv_chi().pow(2), LabelMonomial::one());
      Loose t3 = base;
      t3.verts[P.u].label = cu * LabelMonomial::euler();
      emit(t3, -(s * ChiScalar::inv_chi()), LabelMonomial::one());
      Loose t4 = base;
      t4.verts[P.w].label = cw * LabelMonomial::euler();
      emit(t4, -(s * ChiScalar::inv_chi()), LabelMonomial::one());
    } else {
      if (pointed) {
        Loose t2 = base;
        emit(t2, s, LabelMonomial::euler());
      }
      if (restU == 0 && (pointed || cu.is_one())) {
        Loose t3 = base;
        t3.verts.erase(t3.verts.begin() + P.u);
        emit(t3, -s, pointed ? cu : LabelMonomial::one());
      }
      if (restW == 0 && (pointed || cw.is_one())) {
        Loose t4 = base;
        t4.verts.erase(t4.verts.begin() + P.w);
        emit(t4, -s, pointed ? cw : LabelMonomial::one());
      }
    }
  }
  return out;
}

namespace {

bool is_strand_vertex(const Loose& L, int v) {
  return L.verts[v].label.is_one() && L.verts[v].slots.size() == 2;
}

/// Exact splice of a matching pair at least one of whose endpoints lies on a
/// bivalent vertex labelled 1 (the contraction formula's correction terms
/// all vanish there). Returns the merged graph and the Koszul sign.
std::pair<Loose, int> splice_merge(const Loose& in, int pi) {
  Prep P = prep_edge(in, pi);
  if (P.u == P.w) throw graph_error("splice_merge on a loop");
  assert(is_strand_vertex(in, slot_vertex(in, P.p)) || is_strand_vertex(in, slot_vertex(in, P.q)));
  Loose t = P.L;
  t.pairs.erase(t.pairs.begin() + pi);
  t.verts[P.u].slots.pop_back();
  t.verts[P.w].slots.erase(t.verts[P.w].slots.begin());
  t.verts[P.u].label = t.verts[P.u].label * t.verts[P.w].label;
  t.verts[P.u].slots.insert(t.verts[P.u].slots.end(), t.verts[P.w].slots.begin(),
                            t.verts[P.w].slots.end());
  t.verts.erase(t.verts.begin() + P.w);
  return {std::move(t), P.sign};
}

}  // namespace

GraphVector contract_legs(const GraphVector& v, const std::string& i, const std::string& j) {
  if (i == j) throw graph_error("contract_legs needs two distinct legs");
  auto have = [&](const std::string& l) {
    return std::find(v.legs.begin(), v.legs.end(), l) != v.legs.end();
  };
  if (!have(i) || !have(j)) throw graph_error("contract_legs: no such leg");
  GraphVector out(v.n, v.flavor);
  for (const auto& l : v.legs)
    if (l != i && l != j) out.legs.push_back(l);

  int next_slot_base = 1 << 24;  // distinct from any real half-edge index

  for (const auto& [key, coeff] : v.terms) {
    Loose L = loose_of(key.g);
    int a0 = next_slot_base, a1 = next_slot_base + 1, b0 = next_slot_base + 2,
        b1 = next_slot_base + 3;
    auto rewire = [&](const std::string& leg, int slot) {
      for (auto& pr : L.pairs) {
        if (pr.first.is_leg() && pr.first.leg == leg) {
          pr.first = LEnd::of_slot(slot);
          return;
        }
        if (pr.second.is_leg() && pr.second.leg == leg) {
          pr.second = LEnd::of_slot(slot);
          return;
        }
      }
      throw graph_error("leg not attached: " + leg);
    };
    rewire(i, a0);
    rewire(j, b0);
    L.verts.push_back({LabelMonomial::one(), {a0, a1}});
    L.verts.push_back({LabelMonomial::one(), {b0, b1}});
    L.pairs.emplace_back(LEnd::of_slot(a1), LEnd::of_slot(b1));

    int sign = 1;
    // splice away every strand vertex that touches an internal edge
    bool again = true;
    while (again) {
      again = false;
      for (size_t pi = 0; pi < L.pairs.size() && !again; ++pi) {
        const auto& pr = L.pairs[pi];
        if (pr.first.is_leg() || pr.second.is_leg()) continue;
        int vu = slot_vertex(L, pr.first.slot), vw = slot_vertex(L, pr.second.slot);
        if (vu == vw) continue;  // loops handled below
        if (is_strand_vertex(L, vu) || is_strand_vertex(L, vw)) {
          auto [merged, s] = splice_merge(L, static_cast<int>(pi));
          L = std::move(merged);
          sign *= s;
          again = true;
        }
      }
    }
    // a circle with no real vertices: loop on a strand vertex
    MarkedGraph g = L.freeze();
    int loop_at_strand = -1;
    for (size_t pi = 0; pi < g.pairs.size(); ++pi) {
      const auto& pr = g.pairs[pi];
      if (pr.first.is_leg() || pr.second.is_leg()) continue;
      int vu = g.incidence[pr.first.h];
      if (vu == g.incidence[pr.second.h] && g.labels[vu].is_one() && g.valence(vu) == 2) {
        loop_at_strand = static_cast<int>(pi);
        break;
      }
    }
    if (loop_at_strand >= 0) {
      GraphVector circ = contract_edge(g, loop_at_strand);
      for (const auto& [k2, c2] : circ.terms)
        out.add_canonical(k2.g, c2 * coeff * ChiScalar(sign), key.external * k2.external);
    } else {
      out.add_term(g, coeff * ChiScalar(sign), key.external);
    }
  }
  return out;
}

bool Part::operator<(const Part& o) const {
  if (legs.size() != o.legs.size()) return legs.size() < o.legs.size();
  if (!(label == o.label)) return label < o.label;
  for (size_t k = 0; k < legs.size(); ++k) {
    if (legs[k] != o.legs[k]) return leg_less(legs[k], o.legs[k]);
  }
  return false;
}

void LabeledPartition::sort_parts() { std::sort(parts.begin(), parts.end()); }

int LabeledPartition::degree(int n) const {
  int d = 0;
  for (const auto& pt : parts)
    d += pt.label.degree(n) + n * (static_cast<int>(pt.legs.size()) - 2);
  return d;
}

bool CorollaVector::Key::operator<(const Key& o) const {
  if (!(partition == o.partition)) return partition < o.partition;
  return external < o.external;
}

void CorollaVector::add(const LabeledPartition& p, const LabelMonomial& ext, const ChiScalar& c) {
  if (c.is_zero()) return;
  Key k{p, ext};
  auto it = terms.find(k);
  if (it == terms.end()) {
    terms.emplace(std::move(k), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

CorollaVector CorollaVector::operator+(const CorollaVector& o) const {
  CorollaVector r = *this;
  for (const auto& [k, c] : o.terms) r.add(k.partition, k.external, c);
  return r;
}

CorollaVector CorollaVector::operator-(const CorollaVector& o) const {
  return *this + (o * ChiScalar(-1));
}

CorollaVector CorollaVector::operator*(const ChiScalar& c) const {
  CorollaVector r;
  r.n = n;
  r.flavor = flavor;
  r.legs = legs;
  if (c.is_zero()) return r;
  for (const auto& [k, x] : terms) r.terms.emplace(k, x * c);
  return r;
}

bool CorollaVector::operator==(const CorollaVector& o) const {
  return n == o.n && flavor == o.flavor && terms == o.terms;
}

MarkedGraph partition_graph(int n, Flavor f, const LabeledPartition& p) {
  MarkedGraph g;
  g.n = n;
  g.flavor = f;
  int h = 0;
  for (size_t v = 0; v < p.parts.size(); ++v) {
    g.labels.push_back(p.parts[v].label);
    for (const auto& leg : p.parts[v].legs) {
      g.incidence.push_back(static_cast<int>(v));
      g.pairs.emplace_back(End::half(h++), End::of_leg(leg));
    }
  }
  return g;
}

GraphVector corolla_to_graphs(const CorollaVector& v) {
  GraphVector out(v.n, v.flavor);
  out.legs = v.legs;
  for (const auto& [k, c] : v.terms)
    out.add_term(partition_graph(v.n, v.flavor, k.partition), c, k.external);
  return out;
}

namespace {

LabeledPartition terminal_partition(const MarkedGraph& g) {
  LabeledPartition p;
  p.parts.resize(g.num_vertices());
  for (int v = 0; v < g.num_vertices(); ++v) p.parts[v].label = g.labels[v];
  for (const auto& pr : g.pairs) {
    if (pr.first.is_leg() || pr.second.is_leg()) {
      const End& he = pr.first.is_leg() ? pr.second : pr.first;
      const End& le = pr.first.is_leg() ? pr.first : pr.second;
      p.parts[g.incidence[he.h]].legs.push_back(le.leg);
    }
  }
  for (auto& pt : p.parts) std::sort(pt.legs.begin(), pt.legs.end(), leg_less);
  p.sort_parts();
  return p;
}

struct Reducer {
  Strategy strategy;
  std::mt19937_64 rng;
  std::map<MarkedGraph, CorollaVector> memo;

  CorollaVector reduce_graph(const MarkedGraph& g) {
    if (strategy == Strategy::Deterministic) {
      auto it = memo.find(g);
      if (it != memo.end()) return it->second;
    }
    CorollaVector out;
    out.n = g.n;
    out.flavor = g.flavor;
    out.legs = g.leg_names();
    std::vector<int> internal;
    for (size_t pi = 0; pi < g.pairs.size(); ++pi)
      if (!g.pairs[pi].first.is_leg() && !g.pairs[pi].second.is_leg())
        internal.push_back(static_cast<int>(pi));
    if (internal.empty()) {
      LabeledPartition p = terminal_partition(g);
      CanonResult pc = canonicalize(partition_graph(g.n, g.flavor, p));
      if (!pc.zero) {
        if (!(pc.graph == g)) throw graph_error("partition graph mismatch");
        out.add(p, LabelMonomial::one(), ChiScalar(pc.sign));
      }
    } else {
      int pick = internal.front();
      if (strategy == Strategy::SeededRandom)
        pick = internal[std::uniform_int_distribution<size_t>(0, internal.size() - 1)(rng)];
      GraphVector step = contract_edge(g, pick);
      for (const auto& [k, c] : step.terms) {
        CorollaVector sub = reduce_graph(k.g);
        for (const auto& [k2, c2] : sub.terms)
          out.add(k2.partition, k2.external * k.external, c2 * c);
      }
    }
    if (strategy == Strategy::Deterministic) memo.emplace(g, out);
    return out;
  }
};

}  // namespace

CorollaVector reduce_to_corollas(const GraphVector& v, Strategy strategy, std::uint64_t seed) {
  thread_local Reducer det_reducer{Strategy::Deterministic, std::mt19937_64(0), {}};
  Reducer local{strategy, std::mt19937_64(seed), {}};
  Reducer& r = (strategy == Strategy::Deterministic) ? det_reducer : local;
  CorollaVector out;
  out.n = v.n;
  out.flavor = v.flavor;
  out.legs = v.legs;
  for (const auto& [k, c] : v.terms) {
    CorollaVector sub = r.reduce_graph(k.g);
    for (const auto& [k2, c2] : sub.terms)
      out.add(k2.partition, k2.external * k.external, c2 * c);
  }
  return out;
}

}  // namespace kappa
