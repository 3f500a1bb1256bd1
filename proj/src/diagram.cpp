#include "lls/diagram.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace lls {

std::variant<GlobalDiagram, EdgeConflict> assemble(const SeriesPresentation& sp) {
  const MetricGraph& g = sp.graph;
  GlobalDiagram gd;
  gd.mult.resize(g.num_edges());
  std::vector<LocalDiagram> local;
  local.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    local.push_back(local_diagram(g, v, sp.at[v]));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const EdgeRec& rec = g.edge(e);
    int m0 = local[rec.ends[0]].mult.at({e, 0});
    int m1 = local[rec.ends[1]].mult.at({e, 1});
    // Continuity along the edge: equal magnitude, opposite sign.
    if (m0 != -m1) return EdgeConflict{e, m0, m1};
    gd.mult[e] = m0;  // slope read from ends[0] toward ends[1]
  }
  return gd;
}

Rat cycle_integral(const MetricGraph& g, const GlobalDiagram& gd, const Cycle& c) {
  Rat total = 0;
  for (const auto& oe : c) {
    Rat step = gd.mult[oe.edge] * g.edge(oe.edge).length;
    total += oe.forward ? step : -step;
  }
  return total;
}

std::optional<CycleObstruction> check_solvable(const MetricGraph& g,
                                               const GlobalDiagram& gd) {
  for (const Cycle& c : g.cycle_basis()) {
    Rat integral = cycle_integral(g, gd, c);
    if (integral == 0) continue;
    Cycle cert = c;
    if (integral < 0) {  // normalize the certificate to a positive integral
      std::reverse(cert.begin(), cert.end());
      for (auto& oe : cert) oe.forward = !oe.forward;
      integral = -integral;
    }
    return CycleObstruction{std::move(cert), std::move(integral)};
  }
  return std::nullopt;
}

RhoSolution solve_rho(const MetricGraph& g, const GlobalDiagram& gd) {
  if (auto obs = check_solvable(g, gd))
    throw Error("solve_rho called on a non-solvable diagram (cycle integral " +
                rat_str(obs->integral) + ")");
  RhoSolution rho;
  rho.diagram = gd;
  rho.value.assign(g.num_vertices(), Rat(0));

  // Integrate over the smallest-edge-id spanning tree from vertex 0. The
  // result is independent of the tree because the form is exact.
  std::vector<bool> seen(g.num_vertices(), false);
  std::vector<bool> in_tree(g.num_edges(), false);
  {
    std::vector<int> comp(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v) comp[v] = v;
    std::function<int(int)> find = [&](int x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      int a = find(g.edge(e).ends[0]), b = find(g.edge(e).ends[1]);
      if (a != b) {
        comp[std::max(a, b)] = std::min(a, b);
        in_tree[e] = true;
      }
    }
  }
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [e, slot] : g.incident(v)) {
      if (!in_tree[e]) continue;
      int u = g.edge(e).ends[1 - slot];
      if (seen[u]) continue;
      seen[u] = true;
      // slope from v toward u
      int m = slot == 0 ? gd.mult[e] : -gd.mult[e];
      rho.value[u] = rho.value[v] + m * g.edge(e).length;
      q.push(u);
    }
  }
  Rat mn = rho.value[0];
  for (const Rat& v : rho.value) mn = std::min(mn, v);
  for (Rat& v : rho.value) v -= mn;
  return rho;
}

Rat RhoSolution::at(const MetricGraph& g, const PointRef& p) const {
  return g.eval_pl(value, p);
}

Rat ExceptionalSet::min_gap() const {
  Rat gap = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    Rat d = values[i] - values[i - 1];
    if (gap == 0 || d < gap) gap = d;
  }
  return gap;
}

ExceptionalSet exceptional_points(const SeriesPresentation& sp, const RhoSolution& rho) {
  const MetricGraph& g = sp.graph;
  ExceptionalSet out;
  out.exceptional.resize(g.num_vertices());
  std::vector<Rat> vals;
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    bool ordinary = false;
    if (g.valence(v) == 2 && sp.at[v].genus == 0) {
      auto inc = g.incident(v);
      int s0 = rho.diagram.slope(TangentDir{PointRef::at_vertex(v), inc[0].first, inc[0].second});
      int s1 = rho.diagram.slope(TangentDir{PointRef::at_vertex(v), inc[1].first, inc[1].second});
      ordinary = s0 == -s1;
    }
    out.exceptional[v] = !ordinary;
    if (!ordinary) vals.push_back(rho.value[v]);
  }
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  out.values = std::move(vals);
  return out;
}

}  // namespace lls
