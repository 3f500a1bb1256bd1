#include "lls/smoothing.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace lls {

namespace {

struct VertexSpec {
  std::string name;
  int orig = -1;  // Gamma vertex id, -1 for branch vertices
  TImagePoint image;
  int degree = 1;
};

struct EdgeSpecM {
  std::string name;
  int v0, v1;  // indices into the vertex spec list
  Rat length;
  int orig = -1;  // Gamma edge id
  int image = -1; // T-edge
  int expansion = 1;
};

struct Builder {
  const PartitionTree* tree = nullptr;
  std::vector<VertexSpec> verts;
  std::vector<EdgeSpecM> edges;
  int branch_counter = 0;

  int add_vertex(VertexSpec v) {
    verts.push_back(std::move(v));
    return static_cast<int>(verts.size()) - 1;
  }
  void add_edge(EdgeSpecM e) { edges.push_back(std::move(e)); }

  Rat tnode_depth(int tn) const { return tree->tnodes[tn].depth; }

  // Distance from a T-point to the first tnode in a given direction.
  // direction >= 0: the forward edge id; direction == -1: backward.
  std::pair<Rat, int> first_stop(const TPoint& p, int direction) const {
    if (direction >= 0) {
      return {tnode_depth(direction) - p.depth, direction};
    }
    int below;
    if (p.is_node)
      below = tree->tnodes[p.tnode].parent;
    else
      below = tree->tnodes[p.tedge].parent;
    if (below < 0) throw Error("witness: backward direction at the root");
    return {p.depth - tnode_depth(below), below};
  }

  // Attaches one branch of ramification r at host vertex `host`, covering
  // the component of T minus the image point of `host` in `direction`.
  // Returns the total pullback mass of the root tnode inside the branch
  // (r if the component contains the root, else 0).
  int attach_branch(int host, const TPoint& at, int direction, int r) {
    int bid = branch_counter++;
    std::string prefix = "br" + std::to_string(bid);
    auto [dist, stop] = first_stop(at, direction);
    Rat l = dist / 2;

    // The tnodes of the component, and for each one its "entry" edge image.
    // Forward: the subtree hanging above `direction`. Backward: everything
    // except the forward side of the containing edge.
    std::set<int> comp;
    if (direction >= 0) {
      std::vector<int> stack{direction};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        comp.insert(x);
        for (int c : tree->tnodes[x].children) stack.push_back(c);
      }
    } else {
      int avoid = at.is_node ? at.tnode : at.tedge;  // subtree not in the component
      std::set<int> sub;
      std::vector<int> stack{avoid};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        sub.insert(x);
        for (int c : tree->tnodes[x].children) stack.push_back(c);
      }
      for (int x = 0; x < static_cast<int>(tree->tnodes.size()); ++x)
        if (!sub.count(x)) comp.insert(x);
      if (!at.is_node) comp.erase(at.tedge);
    }
    bool has_root = comp.count(0) != 0;

    // Stub handling: for r >= 2, a glued segment of length l/r with
    // expansion r, then r copies of the component beyond map-distance l.
    int attach_at = host;
    int edge_seq = 0;
    if (r >= 2) {
      Rat split_depth = direction >= 0 ? Rat(at.depth + l) : Rat(at.depth - l);
      VertexSpec y;
      y.name = prefix + ".y";
      y.image.is_node = false;
      y.image.tedge = direction >= 0 ? stop : (at.is_node ? at.tnode : at.tedge);
      // Backward stubs that land exactly on the lower tnode cannot happen:
      // l is half the distance to it.
      y.image.depth = split_depth;
      y.degree = r;
      int yid = add_vertex(y);
      EdgeSpecM stub;
      stub.name = prefix + ".e" + std::to_string(edge_seq++);
      stub.v0 = host;
      stub.v1 = yid;
      stub.length = l / r;
      stub.image = y.image.tedge;
      stub.expansion = r;
      add_edge(stub);
      attach_at = yid;
    }

    int copies = r >= 2 ? r : 1;
    for (int c = 0; c < copies; ++c) {
      std::string cp = prefix + ".c" + std::to_string(c);
      // Vertex per component tnode.
      std::map<int, int> vert_of;
      for (int tn : comp) {
        VertexSpec vs;
        vs.name = cp + ".n" + std::to_string(tn);
        vs.image.is_node = true;
        vs.image.tnode = tn;
        vs.image.depth = tnode_depth(tn);
        vs.degree = 1;
        vert_of[tn] = add_vertex(vs);
      }
      // Entry edge from the attachment point to the first stop.
      Rat entry_len = r >= 2 ? dist - l : dist;
      int entry_image = direction >= 0 ? stop
                        : at.is_node   ? at.tnode
                                       : at.tedge;
      EdgeSpecM entry;
      entry.name = cp + ".e" + std::to_string(edge_seq++);
      entry.v0 = attach_at;
      entry.v1 = vert_of.at(stop);
      entry.length = entry_len;
      entry.image = entry_image;
      entry.expansion = 1;
      add_edge(entry);
      // All T-edges with both endpoints inside the component.
      for (int tn : comp) {
        int par = tree->tnodes[tn].parent;
        if (par < 0 || !comp.count(par)) continue;
        EdgeSpecM e;
        e.name = cp + ".e" + std::to_string(edge_seq++);
        e.v0 = vert_of.at(par);
        e.v1 = vert_of.at(tn);
        e.length = tree->tnodes[tn].parent_len;
        e.image = tn;
        e.expansion = 1;
        add_edge(e);
      }
    }
    return has_root ? r : 0;
  }
};

// Multiset subtraction profile - used; throws if not contained.
std::vector<int> remove_rams(std::vector<int> profile, const std::vector<int>& used,
                             const std::string& where) {
  for (int r : used) {
    auto it = std::find(profile.begin(), profile.end(), r);
    if (it == profile.end())
      throw Error(where + ": fiber profile does not contain a marked ramification of " +
                  std::to_string(r));
    profile.erase(it);
  }
  return profile;
}

}  // namespace

HarmonicMorphismData build_witness_morphism(const SeriesPresentation& sp_in,
                                            const IGCWitness& witness) {
  SeriesPresentation sp = strip_base_points(sp_in);

  // Re-derive the pipeline on the subdivided graph. Subdividing at the tree
  // depths makes every edge map into a single T-edge; the new points are
  // ordinary, so the bifurcation tree is unchanged node for node.
  auto gd0 = std::get<GlobalDiagram>(assemble(sp));
  RhoSolution rho0 = solve_rho(sp.graph, gd0);

  std::set<Rat> depths;
  for (const auto& tn : witness.tree.tnodes) depths.insert(tn.depth);
  std::vector<PointRef> cuts;
  for (EdgeId e = 0; e < sp.graph.num_edges(); ++e) {
    const EdgeRec& rec = sp.graph.edge(e);
    const Rat& v0 = rho0.value[rec.ends[0]];
    const Rat& v1 = rho0.value[rec.ends[1]];
    for (const Rat& d : depths) {
      if (d <= std::min(v0, v1) || d >= std::max(v0, v1)) continue;
      Rat x = (d - v0) * rec.length / (v1 - v0);
      cuts.push_back(PointRef::inside(e, x));
    }
  }
  auto sub = sp.graph.subdivide(cuts);

  SeriesPresentation spm;
  spm.graph = sub.graph;
  spm.at.resize(sub.graph.num_vertices());
  for (VertexId v = 0; v < sp.graph.num_vertices(); ++v)
    spm.at[sub.vertex_map[v]] = translate_curve_data(sp.graph, sub, v, sp.at[v]);
  for (const auto& [pt, nv] : sub.point_map) {
    int m = gd0.mult[pt.edge];
    auto inc = sub.graph.incident(nv);
    if (inc.size() != 2) throw Error("witness: subdivision vertex is not of valence two");
    // Pieces are numbered from the old ends[0]; the incident list is sorted,
    // so inc[0] is the piece on the ends[0] side.
    TanAt side0{inc[0].first, inc[0].second};
    TanAt side1{inc[1].first, inc[1].second};
    TanAt downhill = m > 0 ? side0 : side1;
    TanAt uphill = m > 0 ? side1 : side0;
    spm.at[nv] = ordinary_curve_data(sub.graph, nv, downhill, uphill, std::abs(m), Rat(0));
  }

  auto gd = std::get<GlobalDiagram>(assemble(spm));
  RhoSolution rho = solve_rho(spm.graph, gd);
  ExceptionalSet exc = exceptional_points(spm, rho);
  auto [bt, pm] = build_biftree(spm.graph, rho);
  PartitionTree tree = delta_glue(bt, witness.system, witness.delta, exc);
  if (tree.tnodes.size() != witness.tree.tnodes.size())
    throw Error("witness: tree changed under subdivision");

  HarmonicMorphismData hm;
  hm.tree = tree;

  // Tangent values per T-edge: blocks keep the admissible collection's
  // values; edges out of split nodes are tuned fresh (0,1,2,... per node).
  for (size_t ni = 0; ni < bt.nodes.size(); ++ni) {
    const BifNode& n = bt.nodes[ni];
    for (int j = 0; j < n.fwd_count(); ++j) {
      TreeTangentId tt{n.depth, n.rep, n.fwd_orep[j]};
      auto it = witness.eta.find(tt);
      Rat v = it != witness.eta.end() ? it->second : Rat(0);
      hm.xi[tree.tangent_image[ni][j]] = v;
    }
  }
  for (int tn = 0; tn < static_cast<int>(tree.tnodes.size()); ++tn) {
    if (tree.tnodes[tn].src_bnode != -1) continue;  // split nodes only
    Rat next = 0;
    for (int c : tree.tnodes[tn].children) hm.xi[c] = next++;
  }

  Builder bld;
  bld.tree = &tree;

  // Host vertices and edges from the subdivided graph.
  for (VertexId v = 0; v < spm.graph.num_vertices(); ++v) {
    VertexSpec vs;
    vs.name = spm.graph.vertex_name(v);
    vs.orig = -1;
    vs.degree = spm.at[v].f_degree;
    TPoint p = tree.locate(pm.anchor_above(v), rho.value[v], bt);
    vs.image.is_node = p.is_node;
    vs.image.tnode = p.tnode;
    vs.image.tedge = p.tedge;
    vs.image.depth = p.depth;
    bld.add_vertex(vs);
  }
  std::vector<int> vert_orig(spm.graph.num_vertices(), -1);
  for (VertexId v = 0; v < sp.graph.num_vertices(); ++v) {
    bld.verts[sub.vertex_map[v]].orig = v;
    vert_orig[sub.vertex_map[v]] = v;
  }
  std::vector<int> piece_orig(spm.graph.num_edges(), -1);
  for (EdgeId e = 0; e < sp.graph.num_edges(); ++e)
    for (EdgeId piece : sub.edge_pieces[e]) piece_orig[piece] = e;
  for (EdgeId e = 0; e < spm.graph.num_edges(); ++e) {
    const EdgeRec& rec = spm.graph.edge(e);
    int m = gd.mult[e];
    VertexId lo = m > 0 ? rec.ends[0] : rec.ends[1];
    // T-edge the edge climbs into, read at its lower endpoint.
    TangentDir up{PointRef::at_vertex(lo), e, m > 0 ? 0 : 1};
    TreeTangentId tt = pm.push_forward(up);
    int te = tree.push_tangent(pm.anchor_above(lo), rho.value[lo], tt.orep, bt, pm);
    EdgeSpecM es;
    es.name = rec.name;
    es.v0 = rec.ends[0];
    es.v1 = rec.ends[1];
    es.length = rec.length;
    es.orig = piece_orig[e];
    es.image = te;
    es.expansion = std::abs(m);
    bld.add_edge(es);
  }

  // Fiber completion at every host vertex.
  for (VertexId v = 0; v < spm.graph.num_vertices(); ++v) {
    const CurveData& cd = spm.at[v];
    const TPoint p{bld.verts[v].image.is_node, bld.verts[v].image.tnode,
                   bld.verts[v].image.tedge, bld.verts[v].image.depth};
    bool excp = exc.exceptional[v];
    std::optional<std::pair<Rat, Rat>> ab = witness.ab_of(v);
    if (excp && !ab) throw Error("witness: exceptional point missing from the alpha/beta table");

    // Matched forward tangents per T-edge.
    std::map<int, std::vector<TanAt>> matched;
    for (const auto& [t, tt] : pm.forward_tangents(v)) {
      int te = tree.push_tangent(pm.anchor_above(v), rho.value[v], tt.orep, bt, pm);
      matched[te].push_back({t.edge, t.end});
    }

    for (int te : tree.forward_edges_at(p)) {
      std::vector<int> used;
      std::optional<Rat> fiber_value;  // value of f_v over this tangent
      auto it = matched.find(te);
      if (it != matched.end()) {
        for (const TanAt& t : it->second) {
          const MarkedPoint& mp = cd.marked.at(t);
          used.push_back(mp.ram);
          if (fiber_value && *fiber_value != mp.value.finite)
            throw Error("witness: matched tangents with different values at '" +
                        spm.graph.vertex_name(v) + "'");
          fiber_value = mp.value.finite;
          if (excp && p.is_node) {
            Rat g = ab->first + ab->second * mp.value.finite;
            if (g != hm.xi.at(te))
              throw Error("witness: admissible value mismatch at '" +
                          spm.graph.vertex_name(v) + "'");
          }
        }
      }
      // Fiber profile of f_v over this tangent's value.
      std::vector<int> profile;
      if (excp) {
        if (!fiber_value) fiber_value = (hm.xi.at(te) - ab->first) / ab->second;
        auto fit = cd.fibers.find(*fiber_value);
        if (fit != cd.fibers.end()) {
          profile = fit->second;
        } else {
          profile = used;
          int s = 0;
          for (int r : used) s += r;
          for (; s < cd.f_degree; ++s) profile.push_back(1);
        }
      } else {
        // Ordinary or tuned point: generic fibers outside the matched one.
        profile = used;
        int s = 0;
        for (int r : used) s += r;
        for (; s < cd.f_degree; ++s) profile.push_back(1);
      }
      std::vector<int> rest =
          remove_rams(profile, used, "witness at '" + spm.graph.vertex_name(v) + "'");
      for (int r : rest) bld.attach_branch(v, p, te, r);
    }

    // Backward direction: marked poles are the matched tangents; unmarked
    // poles pull the rootward component in, and their branches carry the
    // pullback of (u').
    bool at_root = rho.value[v] == 0;
    int backward_ram = 0;
    for (auto [e, slot] : spm.graph.incident(v)) {
      TangentDir t{PointRef::at_vertex(v), e, slot};
      if (gd.slope(t) < 0) backward_ram += -gd.slope(t);
    }
    if (at_root) {
      if (backward_ram != 0) throw Error("witness: backward tangent at the root fiber");
      for (const auto& pe : cd.poles) {
        if (pe.marked) throw Error("witness: marked pole at a minimum point");
        hm.retract.push_back(
            RetractEntry{vert_orig[v] >= 0 ? vert_orig[v] : -1, pe.point, pe.order});
      }
    } else {
      for (const auto& pe : cd.poles) {
        if (pe.marked) continue;
        int mass = bld.attach_branch(v, p, -1, pe.order);
        if (mass != pe.order)
          throw Error("witness: rootward branch lost pullback mass at '" +
                      spm.graph.vertex_name(v) + "'");
        hm.retract.push_back(
            RetractEntry{vert_orig[v] >= 0 ? vert_orig[v] : -1, pe.point, pe.order});
      }
    }
  }

  // Freeze the modification graph.
  std::vector<std::string> vnames;
  for (const auto& vs : bld.verts) vnames.push_back(vs.name);
  std::vector<EdgeSpec> especs;
  for (const auto& es : bld.edges)
    especs.push_back(EdgeSpec{es.name, vnames[es.v0], vnames[es.v1], es.length});
  hm.mod = MetricGraph::build(vnames, especs);
  for (const auto& vs : bld.verts) {
    hm.orig_vertex.push_back(vs.orig);
    hm.vertex_image.push_back(vs.image);
    hm.local_degree.push_back(vs.degree);
  }
  for (const auto& es : bld.edges) {
    hm.orig_edge.push_back(es.orig);
    hm.edge_image.push_back(es.image);
    hm.expansion.push_back(es.expansion);
  }
  hm.branch_count = bld.branch_counter;
  // The degree of the morphism equals the degree of the pullback of (u'),
  // i.e. the stripped series degree; the fiber over the root tnode includes
  // both depth-zero host vertices and the root copies inside branches.
  hm.total_degree = sp.series_degree();

  std::sort(hm.retract.begin(), hm.retract.end(), [](const RetractEntry& a, const RetractEntry& b) {
    if (a.gamma_vertex != b.gamma_vertex) return a.gamma_vertex < b.gamma_vertex;
    return a.point_label < b.point_label;
  });
  return hm;
}

std::vector<Violation> verify_harmonic(const HarmonicMorphismData& hm,
                                       const SeriesPresentation& sp) {
  std::vector<Violation> out;
  const MetricGraph& g = hm.mod;
  auto bad = [&](const std::string& where, const std::string& what) {
    out.push_back({where, what});
  };

  if (hm.orig_edge.size() != static_cast<size_t>(g.num_edges()) ||
      hm.vertex_image.size() != static_cast<size_t>(g.num_vertices())) {
    bad("morphism", "tables do not match the modification graph");
    return out;
  }

  // Piecewise-linear consistency: the image segment of each edge has length
  // expansion * edge length, read off the endpoint depths.
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const EdgeRec& rec = g.edge(e);
    Rat d0 = hm.vertex_image[rec.ends[0]].depth;
    Rat d1 = hm.vertex_image[rec.ends[1]].depth;
    Rat span = d1 > d0 ? d1 - d0 : d0 - d1;
    if (span != hm.expansion[e] * rec.length)
      bad("edge " + rec.name, "image length != expansion * length");
    if (hm.expansion[e] < 1) bad("edge " + rec.name, "expansion factor < 1");
  }

  // (b) Expansion factors of original tangents equal the diagram
  // multiplicities.
  auto asm_res = assemble(sp);
  if (std::holds_alternative<GlobalDiagram>(asm_res)) {
    const GlobalDiagram& gd = std::get<GlobalDiagram>(asm_res);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (hm.orig_edge[e] < 0) continue;
      if (hm.expansion[e] != std::abs(gd.mult[hm.orig_edge[e]]))
        bad("edge " + g.edge(e).name, "expansion != |multiplicity| of the original edge");
    }
  } else {
    bad("morphism", "presentation is not diagrammatic");
  }

  // (a) Balancing and degree constancy at every vertex: for each tree
  // tangent at the image, the matched expansions sum to the local degree.
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const TImagePoint& img = hm.vertex_image[v];
    // tangent -> (T-direction): forward edges by T-edge id, backward as -1.
    std::map<int, int> sums;
    if (img.is_node) {
      for (int c : hm.tree.tnodes[img.tnode].children) sums[c] = 0;
      if (hm.tree.tnodes[img.tnode].parent >= 0) sums[-1] = 0;
    } else {
      sums[img.tedge] = 0;
      sums[-1] = 0;
    }
    // The tree edge below the image point (absent at the root).
    int below = img.is_node ? (hm.tree.tnodes[img.tnode].parent >= 0 ? img.tnode : -2)
                            : img.tedge;
    for (auto [e, slot] : g.incident(v)) {
      Rat mine = img.depth;
      Rat other = hm.vertex_image[g.edge(e).ends[1 - slot]].depth;
      if (g.edge(e).ends[0] == g.edge(e).ends[1]) {
        bad("vertex " + g.vertex_name(v), "modification contains a loop");
        continue;
      }
      bool up = other > mine;
      if (!up && hm.edge_image[e] != below) {
        bad("vertex " + g.vertex_name(v),
            "edge " + g.edge(e).name + " descends into the wrong tree edge");
        continue;
      }
      int key = up ? hm.edge_image[e] : -1;
      if (!sums.count(key)) {
        bad("vertex " + g.vertex_name(v),
            "edge " + g.edge(e).name + " maps to a tangent absent at the image");
        continue;
      }
      sums[key] += hm.expansion[e];
    }
    for (const auto& [key, s] : sums) {
      if (s != hm.local_degree[v]) {
        bad("vertex " + g.vertex_name(v),
            "balancing fails: tangent sum " + std::to_string(s) + " != local degree " +
                std::to_string(hm.local_degree[v]));
        break;
      }
    }
  }

  // Global degree: fibers over every tnode sum to the morphism degree.
  {
    std::map<int, int> fiber_sum;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
      if (hm.vertex_image[v].is_node) fiber_sum[hm.vertex_image[v].tnode] += hm.local_degree[v];
    for (const auto& [tn, s] : fiber_sum)
      if (s != hm.total_degree) {
        bad("tree node " + std::to_string(tn),
            "fiber degree " + std::to_string(s) + " != morphism degree " +
                std::to_string(hm.total_degree));
        break;
      }
  }

  // (c) The pullback of (u') retracts to the divisor of sp minus its base
  // points (equivalently: the unmarked-pole divisor).
  {
    std::map<std::pair<int, std::string>, int> want, got;
    for (VertexId v = 0; v < sp.graph.num_vertices(); ++v)
      for (const auto& de : unmarked_pole_divisor(sp.at[v]))
        want[{v, de.point}] += de.mult;
    for (const auto& re : hm.retract) got[{re.gamma_vertex, re.point_label}] += re.mult;
    if (want != got) bad("pullback", "retract of the pullback divisor differs from D");
  }

  return out;
}

}  // namespace lls
