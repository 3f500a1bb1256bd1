#include "lls/bifurcation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace lls {

namespace {

struct DSU {
  std::vector<int> parent;
  explicit DSU(int n) : parent(n, -1) {}
  void activate(int v) {
    if (parent[v] == -1) parent[v] = v;
  }
  bool active(int v) const { return parent[v] != -1; }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // min id stays representative
    parent[b] = a;
  }
};

// Components of {v : rho(v) (strict ? > : >=) level} with edges whose both
// ends qualify; -1 for absent vertices.
std::vector<VertexId> level_components(const MetricGraph& g, const std::vector<Rat>& rho,
                                       const Rat& level, bool strict) {
  DSU dsu(g.num_vertices());
  auto in = [&](VertexId v) { return strict ? rho[v] > level : rho[v] >= level; };
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (in(v)) dsu.activate(v);
  for (const auto& e : g.edges())
    if (in(e.ends[0]) && in(e.ends[1])) dsu.unite(e.ends[0], e.ends[1]);
  std::vector<VertexId> rep(g.num_vertices(), -1);
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (in(v)) rep[v] = dsu.find(v);
  return rep;
}

}  // namespace

int BifurcationTree::node_at(const TreePointId& id) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].depth == id.depth && nodes[i].rep == id.crep) return static_cast<int>(i);
  return -1;
}

Rat BifurcationTree::join_depth(int a, int b) const {
  while (a != b) {
    if (nodes[a].depth < nodes[b].depth)
      b = nodes[b].parent;
    else
      a = nodes[a].parent;
    if (a < 0 || b < 0) throw Error("join_depth: disconnected nodes");
  }
  return nodes[a].depth;
}

Rat BifurcationTree::distance(int a, int b) const {
  return nodes[a].depth + nodes[b].depth - 2 * join_depth(a, b);
}

int ProjectionMaps::level_index(const Rat& depth) const {
  auto it = std::lower_bound(levels_.begin(), levels_.end(), depth);
  if (it == levels_.end() || *it != depth)
    throw Error("query depth " + rat_str(depth) + " is not a vertex level");
  return static_cast<int>(it - levels_.begin());
}

TreePointId ProjectionMaps::point_image(VertexId v) const {
  int li = level_index(rho_hat_[v]);
  return TreePointId{rho_hat_[v], closed_rep_[li][v]};
}

VertexId ProjectionMaps::closed_rep_at(const Rat& depth, VertexId v) const {
  return closed_rep_[level_index(depth)][v];
}

VertexId ProjectionMaps::open_rep_at(const Rat& depth, VertexId v) const {
  return open_rep_[level_index(depth)][v];
}

TreeTangentId ProjectionMaps::push_forward(const TangentDir& t) const {
  if (!t.base.is_vertex) throw Error("push_forward: tangent must be based at a vertex");
  VertexId v = t.base.vertex;
  if (diagram_.slope(t) <= 0) throw Error("push_forward: not a forward tangent");
  VertexId u = graph_.edge(t.edge).ends[1 - t.end];
  int li = level_index(rho_hat_[v]);
  return TreeTangentId{rho_hat_[v], closed_rep_[li][v], open_rep_[li][u]};
}

ProjectionMaps::Pushed ProjectionMaps::pushforward(const TangentDir& t) const {
  if (!t.base.is_vertex) throw Error("pushforward: tangent must be based at a vertex");
  Pushed out;
  out.at = point_image(t.base.vertex);
  if (diagram_.slope(t) > 0) {
    out.forward = true;
    out.fwd = push_forward(t);
    return out;
  }
  if (out.at.depth == 0)
    throw Error("pushforward: the root has no backward tangent direction");
  out.forward = false;
  return out;
}

std::vector<std::pair<TangentDir, TreeTangentId>> ProjectionMaps::forward_tangents(
    VertexId v) const {
  std::vector<std::pair<TangentDir, TreeTangentId>> out;
  for (auto [e, slot] : graph_.incident(v)) {
    TangentDir t{PointRef::at_vertex(v), e, slot};
    if (diagram_.slope(t) > 0) out.push_back({t, push_forward(t)});
  }
  return out;
}

int ProjectionMaps::node_of_vertex(VertexId v) const {
  if (!at_node_[v]) return -1;
  auto it = node_index_.find(point_image(v));
  return it == node_index_.end() ? -1 : it->second;
}

std::pair<BifurcationTree, ProjectionMaps> build_biftree(const MetricGraph& g,
                                                         const RhoSolution& rho) {
  BifurcationTree bt;
  ProjectionMaps pm;
  pm.graph_ = g;
  pm.diagram_ = rho.diagram;
  pm.rho_hat_ = rho.value;
  bt.rho_hat = rho.value;

  std::vector<Rat> levels = rho.value;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  pm.levels_ = levels;
  int L = static_cast<int>(levels.size());
  pm.closed_rep_.resize(L);
  pm.open_rep_.resize(L);
  for (int li = 0; li < L; ++li) {
    pm.closed_rep_[li] = level_components(g, rho.value, levels[li], false);
    pm.open_rep_[li] = level_components(g, rho.value, levels[li], true);
  }

  // Descending sweep with an incremental union-find; nodes are born at leaf,
  // merge, and root events.
  struct TmpNode {
    Rat depth;
    VertexId rep;
    std::vector<VertexId> vertices;
    int parent = -1;
    std::vector<VertexId> fwd_orep;
    std::vector<int> children;
  };
  std::vector<TmpNode> tmp;
  DSU cur(g.num_vertices());
  std::map<VertexId, int> anchor;  // component representative -> node above

  std::vector<std::vector<VertexId>> at_level(L);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto it = std::lower_bound(levels.begin(), levels.end(), rho.value[v]);
    at_level[it - levels.begin()].push_back(v);
  }

  pm.up_anchor_.assign(g.num_vertices(), -1);
  pm.at_node_.assign(g.num_vertices(), false);

  for (int li = L - 1; li >= 0; --li) {
    const Rat& level = levels[li];
    // Pre-level component representative per active vertex (= the open
    // superlevel structure at this level).
    std::vector<std::pair<VertexId, VertexId>> pre;  // (vertex, pre rep)
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (cur.active(v)) pre.push_back({v, cur.find(v)});

    for (VertexId v : at_level[li]) cur.activate(v);
    for (const auto& e : g.edges()) {
      if (!cur.active(e.ends[0]) || !cur.active(e.ends[1])) continue;
      if (rho.value[e.ends[0]] == level || rho.value[e.ends[1]] == level)
        cur.unite(e.ends[0], e.ends[1]);
    }

    // Group this level's vertices by their final component.
    std::map<VertexId, std::vector<VertexId>> touched;  // final rep -> new vertices
    for (VertexId v : at_level[li]) touched[cur.find(v)].push_back(v);

    for (auto& [rep, fresh] : touched) {
      // Pre-level components swallowed by this component.
      std::set<VertexId> pre_reps;
      for (const auto& [v, r] : pre)
        if (cur.find(v) == rep) pre_reps.insert(r);

      bool is_bottom = li == 0;
      if (pre_reps.size() == 1 && !is_bottom) {
        // Pass-through: the growing edge continues.
        int a = anchor.at(*pre_reps.begin());
        anchor.erase(*pre_reps.begin());
        anchor[rep] = a;
        for (VertexId v : fresh) pm.up_anchor_[v] = a;
        continue;
      }
      int id = static_cast<int>(tmp.size());
      TmpNode n;
      n.depth = level;
      n.rep = rep;
      for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (cur.active(v) && cur.find(v) == rep) n.vertices.push_back(v);
      for (VertexId r : pre_reps) {
        int child = anchor.at(r);
        anchor.erase(r);
        n.fwd_orep.push_back(r);
        n.children.push_back(child);
        tmp[child].parent = id;
      }
      tmp.push_back(std::move(n));
      anchor[rep] = id;
      for (VertexId v : fresh) {
        pm.up_anchor_[v] = id;
        pm.at_node_[v] = true;
      }
    }
  }
  if (anchor.size() != 1) throw Error("build_biftree: graph is not connected");

  // Edge fragments of each component, computed against the node's depth.
  auto fragments_of = [&](const TmpNode& n) {
    std::vector<EdgeFragment> out;
    std::set<VertexId> members(n.vertices.begin(), n.vertices.end());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const EdgeRec& rec = g.edge(e);
      const Rat& v0 = rho.value[rec.ends[0]];
      const Rat& v1 = rho.value[rec.ends[1]];
      if (v0 >= n.depth && v1 >= n.depth) {
        if (members.count(rec.ends[0])) out.push_back(EdgeFragment{e, Rat(0), rec.length});
        continue;
      }
      VertexId hi = v0 >= v1 ? rec.ends[0] : rec.ends[1];
      if (rho.value[hi] < n.depth || !members.count(hi)) continue;
      // crossing offset where rho == depth, measured from ends[0]
      Rat x = (n.depth - v0) * rec.length / (v1 - v0);
      if (v0 < v1) {
        if (x < rec.length) out.push_back(EdgeFragment{e, x, rec.length});
      } else {
        if (x > 0) out.push_back(EdgeFragment{e, Rat(0), x});
      }
    }
    return out;
  };

  // Sort nodes by (depth, rep) and remap indices.
  std::vector<int> order(tmp.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (tmp[a].depth != tmp[b].depth) return tmp[a].depth < tmp[b].depth;
    return tmp[a].rep < tmp[b].rep;
  });
  std::vector<int> newidx(tmp.size());
  for (size_t i = 0; i < order.size(); ++i) newidx[order[i]] = static_cast<int>(i);

  bt.nodes.resize(tmp.size());
  for (size_t i = 0; i < order.size(); ++i) {
    const TmpNode& n = tmp[order[i]];
    BifNode out;
    out.depth = n.depth;
    out.rep = n.rep;
    out.vertices = n.vertices;
    out.fragments = fragments_of(n);
    out.parent = n.parent < 0 ? -1 : newidx[n.parent];
    out.fwd_orep = n.fwd_orep;
    for (int c : n.children) out.children.push_back(newidx[c]);
    // Keep tangents sorted by their open-component representative.
    std::vector<size_t> perm(out.fwd_orep.size());
    for (size_t k = 0; k < perm.size(); ++k) perm[k] = k;
    std::sort(perm.begin(), perm.end(),
              [&](size_t a, size_t b) { return out.fwd_orep[a] < out.fwd_orep[b]; });
    std::vector<VertexId> so;
    std::vector<int> sc;
    for (size_t k : perm) {
      so.push_back(out.fwd_orep[k]);
      sc.push_back(out.children[k]);
    }
    out.fwd_orep = std::move(so);
    out.children = std::move(sc);
    bt.nodes[i] = std::move(out);
  }
  for (size_t i = 0; i < bt.nodes.size(); ++i) {
    BifNode& n = bt.nodes[i];
    if (n.parent >= 0) n.parent_len = n.depth - bt.nodes[n.parent].depth;
    if (n.parent < 0) bt.root = static_cast<int>(i);
    if (n.is_bifurcation()) bt.bif_nodes.push_back(static_cast<int>(i));
    pm.node_index_[TreePointId{n.depth, n.rep}] = static_cast<int>(i);
  }
  for (auto& a : pm.up_anchor_) a = newidx[a];
  return {std::move(bt), std::move(pm)};
}

// ---- Partition systems -------------------------------------------------------

std::vector<std::vector<int>> all_partitions_rgs(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> rgs(n, 0);
  std::function<void(int, int)> rec = [&](int i, int mx) {
    if (i == n) {
      out.push_back(rgs);
      return;
    }
    for (int b = 0; b <= mx + 1; ++b) {
      rgs[i] = b;
      rec(i + 1, std::max(mx, b));
    }
  };
  if (n == 0)
    out.push_back({});
  else
    rec(0, -1);
  return out;
}

SystemEnumerator::SystemEnumerator(const BifurcationTree& bt) {
  for (int ni : bt.bif_nodes) {
    sizes_.push_back(bt.nodes[ni].fwd_count());
    all_.push_back(all_partitions_rgs(sizes_.back()));
  }
  pos_.assign(all_.size(), 0);
}

std::optional<BifPartitionSystem> SystemEnumerator::next() {
  if (done_) return std::nullopt;
  if (!first_) {
    // odometer, last node fastest
    int i = static_cast<int>(all_.size()) - 1;
    while (i >= 0) {
      if (++pos_[i] < all_[i].size()) break;
      pos_[i] = 0;
      --i;
    }
    if (i < 0) {
      done_ = true;
      return std::nullopt;
    }
  }
  first_ = false;
  BifPartitionSystem sys;
  for (size_t i = 0; i < all_.size(); ++i) sys.rgs.push_back(all_[i][pos_[i]]);
  if (all_.empty()) {
    done_ = true;  // exactly one empty system
  }
  return sys;
}

long long SystemEnumerator::count(const BifurcationTree& bt) {
  long long c = 1;
  for (int ni : bt.bif_nodes)
    c *= static_cast<long long>(all_partitions_rgs(bt.nodes[ni].fwd_count()).size());
  return c;
}

// ---- Delta-glued partition trees ----------------------------------------------

PartitionTree delta_glue(const BifurcationTree& bt, const BifPartitionSystem& sys,
                         const Rat& delta, const ExceptionalSet& exc) {
  if (delta <= 0) throw Error("delta_glue: delta must be positive");
  Rat gap = exc.min_gap();
  if (gap != 0 && delta >= gap)
    throw Error("delta_glue: delta must be less than the minimal gap " + rat_str(gap) +
                " between exceptional values");
  if (sys.rgs.size() != bt.bif_nodes.size())
    throw Error("delta_glue: system does not match the tree's bifurcation nodes");

  PartitionTree pt;
  pt.kind = PartitionTree::Kind::DeltaGlued;
  pt.system = sys;
  pt.delta = delta;
  pt.rho_hat = bt.rho_hat;
  pt.node_image.assign(bt.nodes.size(), -1);
  pt.tangent_image.resize(bt.nodes.size());

  std::map<int, int> bif_index;
  for (size_t i = 0; i < bt.bif_nodes.size(); ++i) bif_index[bt.bif_nodes[i]] = static_cast<int>(i);

  // Pending parent info per bifurcation-tree node, filled by its parent.
  std::vector<std::pair<int, Rat>> pending(bt.nodes.size(), {-1, Rat(0)});

  // Nodes are sorted by depth, so parents come first.
  for (size_t i = 0; i < bt.nodes.size(); ++i) {
    const BifNode& n = bt.nodes[i];
    TNode tn;
    tn.depth = n.depth;
    tn.src_bnode = static_cast<int>(i);
    if (n.parent >= 0) {
      tn.parent = pending[i].first;
      tn.parent_len = tn.depth - pt.tnodes[tn.parent].depth;
    }
    int self = static_cast<int>(pt.tnodes.size());
    pt.tnodes.push_back(tn);
    if (tn.parent >= 0) pt.tnodes[tn.parent].children.push_back(self);
    pt.node_image[i] = self;

    // Route the forward tangents: through a split tnode for every
    // non-singleton block, directly otherwise.
    pt.tangent_image[i].assign(n.fwd_count(), -1);
    if (n.fwd_count() == 0) continue;
    std::vector<int> block(n.fwd_count(), 0);
    int nblocks = 1;
    if (n.is_bifurcation()) {
      block = sys.rgs[bif_index.at(static_cast<int>(i))];
      nblocks = 0;
      for (int b : block) nblocks = std::max(nblocks, b + 1);
    }
    for (int b = 0; b < nblocks; ++b) {
      std::vector<int> members;
      for (int j = 0; j < n.fwd_count(); ++j)
        if (block[j] == b) members.push_back(j);
      if (members.empty()) continue;
      if (members.size() == 1) {
        int child = n.children[members[0]];
        pending[child] = {self, Rat(0)};
        // tangent_image resolved when the child tnode is created
        pt.tangent_image[i][members[0]] = -2 - child;  // placeholder
      } else {
        TNode split;
        split.depth = n.depth + delta;
        split.parent = self;
        split.parent_len = delta;
        split.src_bnode = -1;
        int sid = static_cast<int>(pt.tnodes.size());
        pt.tnodes.push_back(split);
        pt.tnodes[self].children.push_back(sid);
        for (int j : members) {
          pending[n.children[j]] = {sid, Rat(0)};
          pt.tangent_image[i][j] = sid;
        }
      }
    }
  }
  // Resolve placeholders now that every image tnode exists.
  for (size_t i = 0; i < bt.nodes.size(); ++i)
    for (auto& te : pt.tangent_image[i])
      if (te <= -2) te = pt.node_image[-(te + 2)];
  for (auto& tn : pt.tnodes) std::sort(tn.children.begin(), tn.children.end());
  return pt;
}

PartitionTree segment_tree(const BifurcationTree& bt) {
  PartitionTree pt;
  pt.kind = PartitionTree::Kind::Segment;
  pt.rho_hat = bt.rho_hat;
  Rat mx = 0;
  for (const Rat& v : bt.rho_hat) mx = std::max(mx, v);
  TNode root;
  root.depth = 0;
  pt.tnodes.push_back(root);
  TNode top;
  top.depth = mx;
  top.parent = 0;
  top.parent_len = mx;
  pt.tnodes.push_back(top);
  pt.tnodes[0].children.push_back(1);
  return pt;
}

TPoint PartitionTree::locate(int anchor_node, const Rat& depth,
                             const BifurcationTree& bt) const {
  if (kind == Kind::Segment) {
    TPoint p;
    p.depth = depth;
    if (depth == 0) {
      p.is_node = true;
      p.tnode = 0;
    } else if (depth == tnodes[1].depth) {
      p.is_node = true;
      p.tnode = 1;
    } else {
      p.is_node = false;
      p.tedge = 1;
    }
    return p;
  }
  const BifNode& a = bt.nodes[anchor_node];
  TPoint p;
  p.depth = depth;
  if (depth == a.depth) {
    p.is_node = true;
    p.tnode = node_image[anchor_node];
    return p;
  }
  if (depth > a.depth || a.parent < 0)
    throw Error("locate: depth outside the anchor's edge");
  const BifNode& parent = bt.nodes[a.parent];
  if (depth == parent.depth) {
    p.is_node = true;
    p.tnode = node_image[a.parent];
    return p;
  }
  // Which tangent of the parent leads to the anchor?
  int j = -1;
  for (int k = 0; k < parent.fwd_count(); ++k)
    if (parent.children[k] == anchor_node) j = k;
  if (j < 0) throw Error("locate: broken parent link");
  int te = tangent_image[a.parent][j];
  bool through_split = tnodes[te].src_bnode == -1;
  if (!through_split) {
    p.is_node = false;
    p.tedge = te;
    return p;
  }
  Rat split_depth = parent.depth + delta;
  if (depth < split_depth) {
    p.is_node = false;
    p.tedge = te;  // inside the glued stub
  } else if (depth == split_depth) {
    p.is_node = true;
    p.tnode = te;
  } else {
    p.is_node = false;
    p.tedge = node_image[anchor_node];
  }
  return p;
}

int PartitionTree::push_tangent(int anchor_node, const Rat& depth, VertexId orep,
                                const BifurcationTree& bt, const ProjectionMaps& pm) const {
  if (kind == Kind::Segment) return 1;
  const BifNode& a = bt.nodes[anchor_node];
  if (depth == a.depth) {
    for (int j = 0; j < a.fwd_count(); ++j)
      if (a.fwd_orep[j] == orep) return tangent_image[anchor_node][j];
    // The open component may be represented differently at the node's level;
    // compare through the projection tables.
    for (int j = 0; j < a.fwd_count(); ++j)
      if (pm.open_rep_at(depth, a.fwd_orep[j]) == orep) return tangent_image[anchor_node][j];
    throw Error("push_tangent: tangent does not belong to the anchor node");
  }
  // Interior of the edge below the anchor: the forward direction continues
  // toward the anchor.
  TPoint p = locate(anchor_node, depth, bt);
  if (p.is_node && tnodes[p.tnode].src_bnode == -1) {
    // Split node: continue along the branch that carries the anchor.
    return node_image[anchor_node];
  }
  if (p.is_node) throw Error("push_tangent: interior point resolved to a node");
  return p.tedge;
}

std::vector<int> PartitionTree::forward_edges_at(const TPoint& p) const {
  if (p.is_node) return tnodes[p.tnode].children;
  return {p.tedge};
}

BifPartitionSystem phi_lambda(const BifurcationTree& bt, const PartitionTree& pt) {
  if (!pt.same_rho(bt)) throw Error("phi_lambda: partition tree over a different rho");
  BifPartitionSystem sys;
  for (int ni : bt.bif_nodes) {
    const BifNode& n = bt.nodes[ni];
    std::vector<int> rgs(n.fwd_count());
    if (pt.kind == PartitionTree::Kind::Segment) {
      std::fill(rgs.begin(), rgs.end(), 0);
    } else {
      std::map<int, int> seen;  // image T-edge -> block id (first-occurrence order)
      for (int j = 0; j < n.fwd_count(); ++j) {
        int te = pt.tangent_image[ni][j];
        auto it = seen.find(te);
        if (it == seen.end()) {
          int b = static_cast<int>(seen.size());
          seen[te] = b;
          rgs[j] = b;
        } else {
          rgs[j] = it->second;
        }
      }
    }
    sys.rgs.push_back(std::move(rgs));
  }
  return sys;
}

bool refinement_leq(const BifurcationTree& bt, const PartitionTree& pt1,
                    const PartitionTree& pt2) {
  if (!pt1.same_rho(bt) || !pt2.same_rho(bt))
    throw Error("refinement_leq: trees over different rho");
  if (bt.bif_nodes.empty()) return true;  // all partition trees coincide
  if (pt2.kind == PartitionTree::Kind::Segment) return true;
  if (pt1.kind == PartitionTree::Kind::Segment) return false;
  bool any_glued = false;
  for (size_t i = 0; i < bt.bif_nodes.size(); ++i) {
    const auto& r1 = pt1.system.rgs[i];
    const auto& r2 = pt2.system.rgs[i];
    for (size_t a = 0; a < r1.size(); ++a)
      for (size_t b = a + 1; b < r1.size(); ++b)
        if (r1[a] == r1[b]) {
          any_glued = true;
          if (r2[a] != r2[b]) return false;
        }
  }
  if (any_glued && pt1.delta > pt2.delta) return false;
  return true;
}

}  // namespace lls
