#include "lls/metric_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace lls {

namespace {

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // keep the smaller id as representative, for determinism
    if (a > b) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

bool valid_id(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

MetricGraph MetricGraph::build(const std::vector<std::string>& vertex_names,
                               const std::vector<EdgeSpec>& edges) {
  MetricGraph g;
  for (const auto& name : vertex_names) {
    if (!valid_id(name)) throw Error("vertex id '" + name + "' is not [A-Za-z0-9_.-]+");
    if (g.vertex_idx_.count(name)) throw Error("duplicate vertex id '" + name + "'");
    g.vertex_idx_[name] = static_cast<int>(g.vertex_names_.size());
    g.vertex_names_.push_back(name);
  }
  g.incident_.resize(g.vertex_names_.size());
  for (const auto& e : edges) {
    if (!valid_id(e.name)) throw Error("edge id '" + e.name + "' is not [A-Za-z0-9_.-]+");
    if (g.edge_idx_.count(e.name)) throw Error("duplicate edge id '" + e.name + "'");
    auto it0 = g.vertex_idx_.find(e.from);
    auto it1 = g.vertex_idx_.find(e.to);
    if (it0 == g.vertex_idx_.end()) throw Error("edge '" + e.name + "': unknown end '" + e.from + "'");
    if (it1 == g.vertex_idx_.end()) throw Error("edge '" + e.name + "': unknown end '" + e.to + "'");
    if (e.length <= 0) throw Error("edge '" + e.name + "': length must be > 0");
    EdgeId id = static_cast<int>(g.edges_.size());
    g.edge_idx_[e.name] = id;
    g.edges_.push_back(EdgeRec{e.name, {it0->second, it1->second}, e.length});
    g.incident_[it0->second].push_back({id, 0});
    g.incident_[it1->second].push_back({id, 1});
  }
  for (auto& inc : g.incident_) std::sort(inc.begin(), inc.end());

  if (g.num_vertices() == 0) throw Error("graph has no vertices");
  DSU dsu(g.num_vertices());
  for (const auto& e : g.edges_) dsu.unite(e.ends[0], e.ends[1]);
  for (int v = 0; v < g.num_vertices(); ++v)
    if (dsu.find(v) != dsu.find(0)) throw Error("graph is not connected");
  return g;
}

VertexId MetricGraph::vertex_index(const std::string& name) const {
  auto it = vertex_idx_.find(name);
  if (it == vertex_idx_.end()) throw Error("unknown vertex '" + name + "'");
  return it->second;
}

EdgeId MetricGraph::edge_index(const std::string& name) const {
  auto it = edge_idx_.find(name);
  if (it == edge_idx_.end()) throw Error("unknown edge '" + name + "'");
  return it->second;
}

bool MetricGraph::has_vertex(const std::string& name) const {
  return vertex_idx_.count(name) != 0;
}

int MetricGraph::genus() const { return num_edges() - num_vertices() + 1; }

Rat MetricGraph::total_length() const {
  Rat t = 0;
  for (const auto& e : edges_) t += e.length;
  return t;
}

void MetricGraph::check_point(const PointRef& p) const {
  if (p.is_vertex) {
    if (p.vertex < 0 || p.vertex >= num_vertices()) throw Error("invalid vertex ref");
  } else {
    if (p.edge < 0 || p.edge >= num_edges()) throw Error("invalid edge ref");
    if (!(p.offset > 0 && p.offset < edges_[p.edge].length))
      throw Error("interior point offset must satisfy 0 < offset < length (edge '" +
                  edges_[p.edge].name + "')");
  }
}

std::vector<TangentDir> MetricGraph::tangents_at(const PointRef& p) const {
  check_point(p);
  std::vector<TangentDir> out;
  if (p.is_vertex) {
    for (auto [e, slot] : incident_[p.vertex]) out.push_back(TangentDir{p, e, slot});
  } else {
    out.push_back(TangentDir{p, p.edge, 0});
    out.push_back(TangentDir{p, p.edge, 1});
  }
  return out;
}

std::vector<Cycle> MetricGraph::cycle_basis() const {
  // Spanning tree greedily over ascending edge ids.
  DSU dsu(num_vertices());
  std::vector<bool> in_tree(num_edges(), false);
  for (EdgeId e = 0; e < num_edges(); ++e)
    if (dsu.unite(edges_[e].ends[0], edges_[e].ends[1])) in_tree[e] = true;

  // Parent pointers of the tree, rooted at vertex 0.
  std::vector<int> parent(num_vertices(), -1), parent_edge(num_vertices(), -1);
  std::vector<bool> seen(num_vertices(), false);
  std::queue<int> q;
  q.push(0);
  seen[0] = true;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [e, slot] : incident_[v]) {
      if (!in_tree[e]) continue;
      int u = edges_[e].ends[1 - slot];
      if (seen[u]) continue;
      seen[u] = true;
      parent[u] = v;
      parent_edge[u] = e;
      q.push(u);
    }
  }
  auto path_up = [&](int v) {
    std::vector<std::pair<EdgeId, bool>> steps;  // (edge, traversed 0->1?)
    while (parent[v] != -1) {
      EdgeId e = parent_edge[v];
      bool fwd = edges_[e].ends[1] == v && edges_[e].ends[0] == parent[v];
      // traversing from v toward parent: reverse of tree direction
      steps.push_back({e, !fwd});
      v = parent[v];
    }
    return steps;
  };

  std::vector<Cycle> out;
  for (EdgeId e = 0; e < num_edges(); ++e) {
    if (in_tree[e]) continue;
    int a = edges_[e].ends[0], b = edges_[e].ends[1];
    Cycle c;
    c.push_back(OrientedEdge{e, true});  // a -> b
    if (a == b) {
      out.push_back(std::move(c));
      continue;
    }
    // tree path b -> a: combine root paths, dropping the common suffix
    auto pb = path_up(b), pa = path_up(a);
    while (!pb.empty() && !pa.empty() && pb.back() == pa.back()) {
      pb.pop_back();
      pa.pop_back();
    }
    for (auto [edge, fwd] : pb) c.push_back(OrientedEdge{edge, fwd});
    for (auto it = pa.rbegin(); it != pa.rend(); ++it)
      c.push_back(OrientedEdge{it->first, !it->second});
    out.push_back(std::move(c));
  }
  return out;
}

Rat MetricGraph::eval_pl(const std::vector<Rat>& vertex_values, const PointRef& p) const {
  check_point(p);
  if (vertex_values.size() != static_cast<size_t>(num_vertices()))
    throw Error("eval_pl: values must cover all vertices");
  if (p.is_vertex) return vertex_values[p.vertex];
  const EdgeRec& e = edges_[p.edge];
  const Rat& v0 = vertex_values[e.ends[0]];
  const Rat& v1 = vertex_values[e.ends[1]];
  return v0 + (v1 - v0) * p.offset / e.length;
}

std::string MetricGraph::tangent_key(EdgeId e, int slot) const {
  const EdgeRec& rec = edges_[e];
  std::string key = rec.name + "@" + vertex_names_[rec.ends[slot]];
  if (rec.ends[0] == rec.ends[1]) key += "#" + std::to_string(slot);
  return key;
}

std::pair<EdgeId, int> MetricGraph::parse_tangent_key(const std::string& key) const {
  auto at = key.find('@');
  if (at == std::string::npos) throw Error("tangent key '" + key + "' lacks '@'");
  std::string edge_name = key.substr(0, at);
  std::string rest = key.substr(at + 1);
  int want_slot = -1;
  auto hash = rest.find('#');
  if (hash != std::string::npos) {
    std::string s = rest.substr(hash + 1);
    if (s != "0" && s != "1") throw Error("tangent key '" + key + "': bad slot");
    want_slot = s == "1" ? 1 : 0;
    rest = rest.substr(0, hash);
  }
  EdgeId e = edge_index(edge_name);
  VertexId v = vertex_index(rest);
  const EdgeRec& rec = edges_[e];
  bool loop = rec.ends[0] == rec.ends[1];
  if (loop) {
    if (rec.ends[0] != v) throw Error("tangent key '" + key + "': vertex not an end");
    if (want_slot < 0)
      throw Error("tangent key '" + key + "': loop tangents need a #slot suffix");
    return {e, want_slot};
  }
  if (want_slot >= 0) throw Error("tangent key '" + key + "': #slot only valid on loops");
  if (rec.ends[0] == v) return {e, 0};
  if (rec.ends[1] == v) return {e, 1};
  throw Error("tangent key '" + key + "': vertex is not an end of the edge");
}

MetricGraph::Subdivision MetricGraph::subdivide(const std::vector<PointRef>& pts) const {
  // Collect distinct interior offsets per edge.
  std::vector<std::set<Rat>> cuts(num_edges());
  for (const auto& p : pts) {
    check_point(p);
    if (!p.is_vertex) cuts[p.edge].insert(p.offset);
  }

  std::vector<std::string> vnames = vertex_names_;
  std::vector<EdgeSpec> especs;
  Subdivision sub;
  sub.edge_pieces.resize(num_edges());
  std::map<std::pair<EdgeId, Rat>, std::string> new_names;

  size_t next_edge_count = 0;
  for (EdgeId e = 0; e < num_edges(); ++e) {
    const EdgeRec& rec = edges_[e];
    if (cuts[e].empty()) {
      especs.push_back(EdgeSpec{rec.name, vertex_names_[rec.ends[0]],
                                vertex_names_[rec.ends[1]], rec.length});
      sub.edge_pieces[e].push_back(static_cast<int>(next_edge_count++));
      continue;
    }
    std::string prev = vertex_names_[rec.ends[0]];
    Rat prev_off = 0;
    int piece = 0;
    for (const Rat& off : cuts[e]) {
      std::string vn = rec.name + "_at_" + rat_str(off);
      // '/' is not a legal id character; write p_q for fractions
      for (auto& ch : vn)
        if (ch == '/') ch = '_';
      new_names[{e, off}] = vn;
      vnames.push_back(vn);
      especs.push_back(EdgeSpec{rec.name + "_" + std::to_string(piece++), prev, vn,
                                off - prev_off});
      sub.edge_pieces[e].push_back(static_cast<int>(next_edge_count++));
      prev = vn;
      prev_off = off;
    }
    especs.push_back(EdgeSpec{rec.name + "_" + std::to_string(piece), prev,
                              vertex_names_[rec.ends[1]], rec.length - prev_off});
    sub.edge_pieces[e].push_back(static_cast<int>(next_edge_count++));
  }

  sub.graph = MetricGraph::build(vnames, especs);
  sub.vertex_map.resize(num_vertices());
  for (int v = 0; v < num_vertices(); ++v)
    sub.vertex_map[v] = sub.graph.vertex_index(vertex_names_[v]);
  for (const auto& [key, name] : new_names)
    sub.point_map[PointRef::inside(key.first, key.second)] = sub.graph.vertex_index(name);
  return sub;
}

PointRef MetricGraph::Subdivision::translate_point(const MetricGraph&,
                                                   const PointRef& p) const {
  if (p.is_vertex) return PointRef::at_vertex(vertex_map[p.vertex]);
  auto it = point_map.find(p);
  if (it != point_map.end()) return PointRef::at_vertex(it->second);
  // Locate the piece containing the offset.
  Rat acc = 0;
  for (EdgeId piece : edge_pieces[p.edge]) {
    const EdgeRec& rec = graph.edge(piece);
    if (p.offset < acc + rec.length) return PointRef::inside(piece, p.offset - acc);
    acc += rec.length;
  }
  throw Error("translate_point: offset out of range");
}

TangentDir MetricGraph::Subdivision::translate_tangent(const MetricGraph& old,
                                                       const TangentDir& t) const {
  PointRef base = translate_point(old, t.base);
  const auto& pieces = edge_pieces[t.edge];
  if (t.base.is_vertex) {
    // Tangent attached at slot t.end of the old edge: first or last piece,
    // at the matching slot (pieces inherit the old orientation).
    EdgeId piece = t.end == 0 ? pieces.front() : pieces.back();
    const EdgeRec& rec = graph.edge(piece);
    int slot = rec.ends[0] == rec.ends[1] ? t.end : (t.end == 0 ? 0 : 1);
    if (pieces.size() == 1 && rec.ends[0] == rec.ends[1]) slot = t.end;
    return TangentDir{base, piece, slot};
  }
  // Interior old point: either it became a vertex or sits inside a piece.
  if (base.is_vertex) {
    // Pointing toward old ends[t.end]; pieces are ordered from ends[0], so
    // the piece below the new vertex is the one ending at it.
    size_t idx = 0;
    while (idx < pieces.size() && graph.edge(pieces[idx]).ends[1] != base.vertex) ++idx;
    if (t.end == 0) return TangentDir{base, pieces[idx], 1};
    return TangentDir{base, pieces[idx + 1], 0};
  }
  return TangentDir{base, base.edge, t.end};
}

}  // namespace lls
