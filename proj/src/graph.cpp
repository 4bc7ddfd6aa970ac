#include "kappa/graph.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "kappa/rewrite.hpp"

namespace kappa {

bool leg_less(const std::string& a, const std::string& b) {
  auto numeric = [](const std::string& s, unsigned long& v) {
    if (s.empty() || s.size() > 18) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    v = std::stoul(s);
    return true;
  };
  unsigned long va = 0, vb = 0;
  bool na = numeric(a, va), nb = numeric(b, vb);
  if (na != nb) return na;  // numbers before identifiers
  if (na && nb && va != vb) return va < vb;
  return a < b;
}

int MarkedGraph::valence(int v) const {
  auto [lo, hi] = slot_range(v);
  return hi - lo;
}

std::pair<int, int> MarkedGraph::slot_range(int v) const {
  int lo = 0;
  while (lo < num_half_edges() && incidence[lo] < v) ++lo;
  int hi = lo;
  while (hi < num_half_edges() && incidence[hi] == v) ++hi;
  return {lo, hi};
}

std::vector<std::string> MarkedGraph::leg_names() const {
  std::vector<std::string> out;
  for (const auto& pr : pairs) {
    if (pr.first.is_leg()) out.push_back(pr.first.leg);
    if (pr.second.is_leg()) out.push_back(pr.second.leg);
  }
  std::sort(out.begin(), out.end(), leg_less);
  return out;
}

bool MarkedGraph::has_internal_edge() const {
  for (const auto& pr : pairs)
    if (!pr.first.is_leg() && !pr.second.is_leg()) return true;
  return false;
}

void MarkedGraph::check() const {
  for (size_t i = 1; i < incidence.size(); ++i)
    if (incidence[i] < incidence[i - 1]) throw graph_error("incidence not monotone");
  if (!incidence.empty() && incidence.back() >= num_vertices())
    throw graph_error("incidence out of range");
  std::vector<int> seen(num_half_edges(), 0);
  std::set<std::string> legs;
  for (const auto& pr : pairs) {
    for (const End* e : {&pr.first, &pr.second}) {
      if (e->is_leg()) {
        if (!legs.insert(e->leg).second) throw graph_error("leg matched twice: " + e->leg);
      } else {
        if (e->h >= num_half_edges()) throw graph_error("half-edge out of range");
        if (seen[e->h]++) throw graph_error("half-edge matched twice");
      }
    }
    if (pr.first.is_leg() && pr.second.is_leg())
      throw graph_error("direct leg-leg pair; use a bivalent strand vertex");
  }
  for (int s : seen)
    if (!s) throw graph_error("unmatched half-edge");
}

int MarkedGraph::degree() const {
  int d = 0;
  for (int v = 0; v < num_vertices(); ++v)
    d += labels[v].degree(n) + n * (valence(v) - 2);
  return d;
}

static int end_code(const End& e, const std::vector<std::string>& legs_sorted, int H) {
  if (!e.is_leg()) return e.h;
  auto it = std::lower_bound(legs_sorted.begin(), legs_sorted.end(), e.leg, leg_less);
  return H + static_cast<int>(it - legs_sorted.begin());
}

bool MarkedGraph::operator==(const MarkedGraph& o) const {
  return n == o.n && flavor == o.flavor && labels == o.labels && incidence == o.incidence &&
         pairs == o.pairs;
}

bool MarkedGraph::operator<(const MarkedGraph& o) const {
  if (n != o.n) return n < o.n;
  if (flavor != o.flavor) return flavor < o.flavor;
  if (labels.size() != o.labels.size()) return labels.size() < o.labels.size();
  for (size_t i = 0; i < labels.size(); ++i) {
    if (!(labels[i] == o.labels[i])) return labels[i] < o.labels[i];
  }
  if (incidence != o.incidence) return incidence < o.incidence;
  auto key = [](const MarkedGraph& g) {
    std::vector<std::pair<int, std::string>> k;
    for (const auto& pr : g.pairs) {
      k.emplace_back(pr.first.h, pr.first.leg);
      k.emplace_back(pr.second.h, pr.second.leg);
    }
    return k;
  };
  return key(*this) < key(o);
}

int perm_sign(const std::vector<int>& perm) {
  int inv = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inv;
  return (inv % 2 == 0) ? 1 : -1;
}

namespace {

struct VertexView {
  std::vector<int> leg_ranks;                    // sorted leg partner ranks
  int loops = 0;                                 // number of loop pairs
  std::vector<std::pair<int, int>> nbrs;         // (other vertex, pair index)
  std::vector<long> base_inv;                    // label/valence/legs/loops invariant
};

struct CanonSearch {
  const MarkedGraph& g;
  int V, H;
  std::vector<std::string> legs_sorted;
  std::vector<VertexView> view;
  std::vector<std::pair<End, End>> prs;

  // search state
  std::vector<int> order;        // new position -> old vertex
  std::vector<int> pos_of;       // old vertex -> new position or -1
  std::vector<long> best_code;
  bool have_best = false;
  std::vector<std::vector<int>> best_orders;
  long long leaves = 0;

  explicit CanonSearch(const MarkedGraph& gg) : g(gg) {
    V = g.num_vertices();
    H = g.num_half_edges();
    legs_sorted = g.leg_names();
    view.resize(V);
    prs = g.pairs;
    for (int v = 0; v < V; ++v) {
      auto& vv = view[v];
      vv.base_inv.push_back(g.labels[v].e);
      vv.base_inv.push_back(static_cast<long>(g.labels[v].p.size()));
      for (int x : g.labels[v].p) vv.base_inv.push_back(x);
      vv.base_inv.push_back(g.valence(v));
    }
    for (size_t pi = 0; pi < prs.size(); ++pi) {
      const auto& pr = prs[pi];
      const bool l1 = pr.first.is_leg(), l2 = pr.second.is_leg();
      if (l1 || l2) {
        const End& le = l1 ? pr.first : pr.second;
        const End& he = l1 ? pr.second : pr.first;
        int v = g.incidence[he.h];
        view[v].leg_ranks.push_back(end_code(le, legs_sorted, H) - H);
      } else {
        int u = g.incidence[pr.first.h], w = g.incidence[pr.second.h];
        if (u == w) {
          view[u].loops++;
        } else {
          view[u].nbrs.emplace_back(w, static_cast<int>(pi));
          view[w].nbrs.emplace_back(u, static_cast<int>(pi));
        }
      }
    }
    for (int v = 0; v < V; ++v) {
      auto& vv = view[v];
      std::sort(vv.leg_ranks.begin(), vv.leg_ranks.end());
      vv.base_inv.push_back(vv.loops);
      vv.base_inv.push_back(static_cast<long>(vv.leg_ranks.size()));
      for (int r : vv.leg_ranks) vv.base_inv.push_back(r);
    }
  }

  // Encoding block for placing old vertex v at the next position; back edges
  // (to already-placed vertices) encoded ascending, with count negated so
  // that better-connected candidates compare smaller.
  std::vector<long> block(int v) const {
    std::vector<long> b = view[v].base_inv;
    std::vector<int> back;
    for (auto [u, pi] : view[v].nbrs)
      if (pos_of[u] >= 0) back.push_back(pos_of[u]);
    std::sort(back.begin(), back.end());
    b.push_back(-static_cast<long>(back.size()));
    for (int x : back) b.push_back(x);
    return b;
  }

  void dfs(std::vector<long>& code, bool already_better) {
    int k = static_cast<int>(order.size());
    if (k == V) {
      if (!have_best || code < best_code) {
        best_code = code;
        best_orders.assign(1, order);
        have_best = true;
      } else if (code == best_code) {
        best_orders.push_back(order);
      }
      ++leaves;
      return;
    }
    // smallest block among unplaced vertices
    std::vector<long> minb;
    std::vector<int> cands;
    for (int v = 0; v < V; ++v) {
      if (pos_of[v] >= 0) continue;
      std::vector<long> b = block(v);
      if (cands.empty() || b < minb) {
        minb = std::move(b);
        cands.assign(1, v);
      } else if (b == minb) {
        cands.push_back(v);
      }
    }
    size_t base = code.size();
    code.push_back(static_cast<long>(minb.size()));
    code.insert(code.end(), minb.begin(), minb.end());
    bool child_better = already_better;
    if (have_best && !already_better) {
      // prefix [0, base) equals best_code so far; compare the new block
      bool worse = false;
      size_t m = std::min(code.size(), best_code.size());
      for (size_t i = base; i < m; ++i) {
        if (code[i] > best_code[i]) {
          worse = true;
          break;
        }
        if (code[i] < best_code[i]) {
          child_better = true;
          break;
        }
      }
      if (!worse && !child_better && code.size() > best_code.size()) worse = true;
      if (worse) {
        code.resize(base);
        return;
      }
    }
    for (int v : cands) {
      pos_of[v] = k;
      order.push_back(v);
      dfs(code, child_better);
      order.pop_back();
      pos_of[v] = -1;
    }
    code.resize(base);
  }

  // Builds the canonical structure and the relating sign for a given order.
  void realize(const std::vector<int>& ord, MarkedGraph& out, int& sign) const {
    std::vector<int> pos(V);
    for (int k = 0; k < V; ++k) pos[ord[k]] = k;
    // partner lookup per half-edge
    struct Part {
      bool leg = false;
      int other = -1;  // half-edge
      int legrank = -1;
      int pair_index = -1;
      int side = 0;  // 0 = first element of pair
    };
    std::vector<Part> part(H);
    for (size_t pi = 0; pi < prs.size(); ++pi) {
      const auto& pr = prs[pi];
      auto fill = [&](const End& self, const End& other, int side) {
        if (self.is_leg()) return;
        Part& p = part[self.h];
        p.pair_index = static_cast<int>(pi);
        p.side = side;
        if (other.is_leg()) {
          p.leg = true;
          p.legrank = end_code(other, legs_sorted, H) - H;
        } else {
          p.other = other.h;
        }
      };
      fill(pr.first, pr.second, 0);
      fill(pr.second, pr.first, 1);
    }
    std::vector<int> newid(H, -1);
    int next = 0;
    for (int k = 0; k < V; ++k) {
      int v = ord[k];
      auto [lo, hi] = g.slot_range(v);
      std::vector<std::pair<std::array<long, 4>, int>> keyed;
      for (int h = lo; h < hi; ++h) {
        const Part& p = part[h];
        std::array<long, 4> key{};
        if (p.leg) {
          key = {0, p.legrank, 0, 0};
        } else {
          int u = g.incidence[p.other];
          if (pos[u] < k)
            key = {1, pos[u], newid[p.other], 0};
          else if (pos[u] == k)
            key = {2, p.pair_index, p.side, 0};
          else
            key = {3, pos[u], p.pair_index, p.side};
        }
        keyed.emplace_back(key, h);
      }
      std::sort(keyed.begin(), keyed.end());
      for (auto& [key, h] : keyed) newid[h] = next++;
    }
    // output graph
    out.n = g.n;
    out.flavor = g.flavor;
    out.labels.clear();
    out.incidence.clear();
    for (int k = 0; k < V; ++k) {
      out.labels.push_back(g.labels[ord[k]]);
      for (int i = 0; i < g.valence(ord[k]); ++i) out.incidence.push_back(k);
    }
    int flips = 0;
    std::vector<std::pair<End, End>> np;
    for (const auto& pr : prs) {
      End a = pr.first, b = pr.second;
      if (!a.is_leg()) a.h = newid[a.h];
      if (!b.is_leg()) b.h = newid[b.h];
      bool flip = false;
      if (!a.is_leg() && !b.is_leg())
        flip = a.h > b.h;
      else if (a.is_leg())
        flip = true;  // canonical orientation is (half-edge, leg)
      if (flip) {
        std::swap(a, b);
        ++flips;
      }
      np.emplace_back(a, b);
    }
    std::sort(np.begin(), np.end(), [&](const auto& x, const auto& y) {
      auto ex = std::make_pair(end_code(x.first, legs_sorted, H), end_code(x.second, legs_sorted, H));
      auto ey = std::make_pair(end_code(y.first, legs_sorted, H), end_code(y.second, legs_sorted, H));
      return ex < ey;
    });
    out.pairs = std::move(np);
    if (g.n % 2 == 0) {
      sign = 1;
      return;
    }
    std::vector<int> perm(H);
    for (int h = 0; h < H; ++h) perm[h] = newid[h];
    sign = perm_sign(perm) * ((flips % 2 == 0) ? 1 : -1);
  }
};

}  // namespace

CanonResult canonicalize(const MarkedGraph& g) {
  g.check();
  CanonSearch s(g);
  s.pos_of.assign(s.V, -1);
  std::vector<long> code;
  s.dfs(code, false);
  CanonResult res;
  if (s.best_orders.empty()) {  // empty graph
    res.graph = g;
    res.sign = 1;
    return res;
  }
  int sign0 = 1;
  s.realize(s.best_orders[0], res.graph, sign0);
  res.sign = sign0;
  if (g.n % 2 == 1) {
    for (size_t i = 1; i < s.best_orders.size(); ++i) {
      MarkedGraph tmp;
      int si = 1;
      s.realize(s.best_orders[i], tmp, si);
      if (si != sign0) {
        res.zero = true;
        break;
      }
    }
  }
  return res;
}

bool GraphVector::Key::operator<(const Key& o) const {
  if (!(g == o.g)) return g < o.g;
  return external < o.external;
}

void GraphVector::add_term(const MarkedGraph& g, const ChiScalar& c, const LabelMonomial& external) {
  if (c.is_zero()) return;
  Normalized nm = normalize_graph(g);
  if (nm.zero) return;
  add_canonical(nm.graph, c * nm.coeff, external * nm.ext);
}

void GraphVector::add_canonical(const MarkedGraph& g, const ChiScalar& c,
                                const LabelMonomial& external) {
  if (c.is_zero()) return;
  Key k{g, external};
  auto it = terms.find(k);
  if (it == terms.end()) {
    terms.emplace(std::move(k), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }
}

GraphVector GraphVector::operator+(const GraphVector& o) const {
  if (n != o.n || flavor != o.flavor) throw graph_error("adding vectors of different kind");
  std::set<std::string> sl(legs.begin(), legs.end()), ol(o.legs.begin(), o.legs.end());
  if (sl != ol) throw graph_error("adding vectors with different leg sets");
  GraphVector r = *this;
  for (const auto& [k, c] : o.terms) r.add_canonical(k.g, c, k.external);
  return r;
}

GraphVector GraphVector::operator-(const GraphVector& o) const {
  return *this + (o * ChiScalar(-1));
}

GraphVector GraphVector::operator*(const ChiScalar& c) const {
  GraphVector r(n, flavor);
  r.legs = legs;
  if (c.is_zero()) return r;
  for (const auto& [k, x] : terms) r.terms.emplace(k, x * c);
  return r;
}

GraphVector GraphVector::operator*(const GraphVector& o) const {
  if (n != o.n || flavor != o.flavor) throw graph_error("multiplying vectors of different kind");
  GraphVector r(n, flavor);
  r.legs = legs;
  for (const auto& l : o.legs) {
    if (std::find(legs.begin(), legs.end(), l) != legs.end())
      throw graph_error("product with repeated leg: " + l);
    r.legs.push_back(l);
  }
  for (const auto& [ka, ca] : terms) {
    for (const auto& [kb, cb] : o.terms) {
      MarkedGraph m;
      m.n = n;
      m.flavor = flavor;
      m.labels = ka.g.labels;
      m.labels.insert(m.labels.end(), kb.g.labels.begin(), kb.g.labels.end());
      m.incidence = ka.g.incidence;
      int voff = ka.g.num_vertices(), hoff = ka.g.num_half_edges();
      for (int x : kb.g.incidence) m.incidence.push_back(x + voff);
      m.pairs = ka.g.pairs;
      for (auto pr : kb.g.pairs) {
        if (!pr.first.is_leg()) pr.first.h += hoff;
        if (!pr.second.is_leg()) pr.second.h += hoff;
        m.pairs.push_back(pr);
      }
      r.add_term(m, ca * cb, ka.external * kb.external);
    }
  }
  return r;
}

bool GraphVector::operator==(const GraphVector& o) const {
  if (n != o.n || flavor != o.flavor) return false;
  return terms == o.terms;
}

std::optional<int> GraphVector::homogeneous_degree() const {
  std::optional<int> d;
  for (const auto& [k, c] : terms) {
    int t = k.g.degree() + k.external.degree(n);
    if (!d) d = t;
    if (*d != t) return std::nullopt;
  }
  return d;
}

GraphVector scalar_vector(int n, Flavor f, const ChiScalar& c) {
  GraphVector v(n, f);
  MarkedGraph empty;
  empty.n = n;
  empty.flavor = f;
  v.add_term(empty, c);
  return v;
}

GraphVector corolla(int n, Flavor f, const std::vector<std::string>& legs,
                    const LabelMonomial& label, const LabelMonomial& external) {
  GraphVector v(n, f);
  v.legs = legs;
  MarkedGraph g;
  g.n = n;
  g.flavor = f;
  g.labels.push_back(label);
  for (size_t i = 0; i < legs.size(); ++i) {
    g.incidence.push_back(0);
    g.pairs.emplace_back(End::half(static_cast<int>(i)), End::of_leg(legs[i]));
  }
  v.add_term(g, ChiScalar(1), external);
  return v;
}

GraphVector strand(int n, Flavor f, const std::string& a, const std::string& b) {
  return corolla(n, f, {a, b}, LabelMonomial::one());
}

GraphVector permute_legs(const GraphVector& v, const std::map<std::string, std::string>& sigma) {
  GraphVector r(v.n, v.flavor);
  auto ren = [&](const std::string& s) {
    auto it = sigma.find(s);
    return it == sigma.end() ? s : it->second;
  };
  r.legs.reserve(v.legs.size());
  for (const auto& l : v.legs) r.legs.push_back(ren(l));
  for (const auto& [k, c] : v.terms) {
    MarkedGraph g = k.g;
    for (auto& pr : g.pairs) {
      if (pr.first.is_leg()) pr.first.leg = ren(pr.first.leg);
      if (pr.second.is_leg()) pr.second.leg = ren(pr.second.leg);
    }
    r.add_term(g, c, k.external);
  }
  return r;
}

}  // namespace kappa
