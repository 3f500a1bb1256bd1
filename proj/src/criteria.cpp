#include "lls/smoothing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace lls {

bool criterion_compact(const SeriesPresentation& sp) {
  if (sp.graph.genus() != 0) throw Error("criterion_compact: underlying graph is not a tree");
  DiagrammaticReport rep = check_diagrammatic(sp);
  if (!rep.ok) return false;
  for (const auto& pr : rep.points)
    if (!pr.refined) return false;
  return std::holds_alternative<GlobalDiagram>(assemble(sp));
}

std::pair<SeriesPresentation, SeriesPresentation> glue_decompose(
    const SeriesPresentation& sp, VertexId cut) {
  const MetricGraph& g = sp.graph;
  // Components of the graph minus the cut vertex.
  std::vector<int> comp(g.num_vertices(), -1);
  int ncomp = 0;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (s == cut || comp[s] >= 0) continue;
    int id = ncomp++;
    std::vector<VertexId> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (auto [e, slot] : g.incident(v)) {
        VertexId u = g.edge(e).ends[1 - slot];
        if (u == cut || comp[u] >= 0) continue;
        comp[u] = id;
        stack.push_back(u);
      }
    }
  }
  if (ncomp < 2) throw Error("glue_decompose: '" + g.vertex_name(cut) + "' is not a cut vertex");

  // Side one: the component holding the smallest vertex id (plus any loops
  // at the cut vertex); side two: everything else.
  int first_comp = -1;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (v != cut) {
      first_comp = comp[v];
      break;
    }
  std::vector<EdgeId> side1, side2;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const EdgeRec& rec = g.edge(e);
    VertexId other = rec.ends[0] == cut ? rec.ends[1] : rec.ends[0];
    bool in_first = other == cut ? true : comp[other] == first_comp;
    (in_first ? side1 : side2).push_back(e);
  }
  return {restrict_to(sp, side1), restrict_to(sp, side2)};
}

std::optional<std::vector<std::vector<EdgeId>>> separate_loops(const MetricGraph& g) {
  // Biconnected components by the classic lowlink DFS; self-loops form their
  // own component.
  std::vector<int> disc(g.num_vertices(), 0), low(g.num_vertices(), 0);
  std::vector<bool> edge_used(g.num_edges(), false);
  std::vector<EdgeId> stack;
  std::vector<std::vector<EdgeId>> comps;
  int timer = 0;

  std::function<void(VertexId)> dfs = [&](VertexId u) {
    disc[u] = low[u] = ++timer;
    for (auto [e, slot] : g.incident(u)) {
      if (edge_used[e]) continue;
      VertexId v = g.edge(e).ends[1 - slot];
      edge_used[e] = true;
      if (v == u) {
        comps.push_back({e});  // self-loop
        continue;
      }
      stack.push_back(e);
      if (!disc[v]) {
        dfs(v);
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= disc[u]) {
          std::vector<EdgeId> c;
          while (true) {
            EdgeId top = stack.back();
            stack.pop_back();
            c.push_back(top);
            if (top == e) break;
          }
          comps.push_back(std::move(c));
        }
      } else {
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  dfs(0);

  std::vector<std::vector<EdgeId>> loops;
  for (auto& c : comps) {
    if (c.size() == 1) {
      const EdgeRec& rec = g.edge(c[0]);
      if (rec.ends[0] == rec.ends[1]) loops.push_back(c);  // a circle
      continue;  // bridge
    }
    std::map<VertexId, int> deg;
    for (EdgeId e : c) {
      deg[g.edge(e).ends[0]]++;
      deg[g.edge(e).ends[1]]++;
    }
    for (const auto& [v, d] : deg)
      if (d != 2) return std::nullopt;  // a 2-connected block that is not a circle
    std::sort(c.begin(), c.end());
    loops.push_back(c);
  }
  if (static_cast<int>(loops.size()) != g.genus()) return std::nullopt;
  std::sort(loops.begin(), loops.end());
  return loops;
}

bool criterion_loops(const SeriesPresentation& sp, std::vector<LoopReport>* out) {
  auto loops = separate_loops(sp.graph);
  if (!loops) throw Error("criterion_loops: graph is not made of separate loops");

  auto [neg, data] = run_pipeline(sp);
  if (neg) return false;  // not diagrammatic or not solvable, hence not smoothable
  const RhoSolution& rho = *data.rho;

  bool all_pass = true;
  for (const auto& loop : *loops) {
    std::set<VertexId> on_loop;
    for (EdgeId e : loop) {
      on_loop.insert(sp.graph.edge(e).ends[0]);
      on_loop.insert(sp.graph.edge(e).ends[1]);
    }
    Rat mn;
    bool first = true;
    for (VertexId v : on_loop) {
      if (first || rho.value[v] < mn) mn = rho.value[v];
      first = false;
    }
    LoopReport lr;
    lr.loop = loop;
    for (VertexId v : on_loop) {
      if (rho.value[v] != mn) continue;
      lr.min_points.push_back(v);
      // The two forward tangents along the loop.
      std::vector<TanAt> fwd;
      for (auto [e, slot] : sp.graph.incident(v)) {
        if (!std::binary_search(loop.begin(), loop.end(), e)) continue;
        TangentDir t{PointRef::at_vertex(v), e, slot};
        if (rho.diagram.slope(t) > 0) fwd.push_back({e, slot});
      }
      if (fwd.size() != 2)
        throw Error("criterion_loops: loop minimum without two forward directions");
      if (data.local[v].equivalent(fwd[0], fwd[1])) lr.closing_points.push_back(v);
    }
    int k = static_cast<int>(lr.min_points.size());
    int c = static_cast<int>(lr.closing_points.size());
    // Closing points force equal values on their two flanking arcs, opening
    // points force distinct ones; contracting the closing identifications
    // leaves a cyclic adjacent-distinct problem, which is unsolvable exactly
    // for a single self-identified arc. A singleton minimum shares one arc
    // on both sides and must close.
    lr.pass = k == 1 ? c == 1 : k - c != 1;
    if (!lr.pass) all_pass = false;
    if (out) out->push_back(std::move(lr));
  }
  return all_pass;
}

// ---- Harris-Mumford ----------------------------------------------------------

namespace {

// Moebius normalization so that exactly the designated central marked point
// is a pole: values map through v -> 1/(v - c) (or v -> 1/v when c = inf).
HMEyeSpec invert_eye(const HMEyeSpec& eye) {
  HMEyeSpec out = eye;
  const FnValue c = eye.central->value;
  auto transform = [&](const FnValue& v) -> FnValue {
    if (c.infinite) {  // v -> 1/v
      if (v.infinite) return FnValue::of(Rat(0));
      if (v.finite == 0) return FnValue::inf();
      return FnValue::of(1 / v.finite);
    }
    if (v.infinite) return FnValue::of(Rat(0));
    if (v.finite == c.finite) return FnValue::inf();
    return FnValue::of(1 / (v.finite - c.finite));
  };
  for (auto& pr : out.pairs) {
    pr.value[0] = transform(pr.value[0]);
    pr.value[1] = transform(pr.value[1]);
  }
  out.central->value = transform(c);  // becomes the pole
  return out;
}

}  // namespace

HarrisMumfordResult criterion_harris_mumford(const HarrisMumfordSpec& spec) {
  HarrisMumfordResult res;
  if (spec.type != 1 && spec.type != 2) {
    res.failure = "type must be I or II";
    return res;
  }
  if (spec.eyes.size() != static_cast<size_t>(spec.type)) {
    res.failure = "type " + std::to_string(spec.type) + " needs " +
                  std::to_string(spec.type) + " eye(s)";
    return res;
  }
  for (const auto& eye : spec.eyes) {
    for (const auto& pr : eye.pairs) {
      if (pr.value[0] != pr.value[1] || pr.ram[0] != pr.ram[1]) {
        res.failure = "pedal '" + pr.pedal + "': pair values or ramification indices differ";
        return res;
      }
      if (pr.half_length[0] != pr.half_length[1]) {
        res.failure = "pedal '" + pr.pedal + "': the two edge lengths differ";
        return res;
      }
    }
  }

  std::vector<HMEyeSpec> eyes(spec.eyes);
  if (spec.type == 2) {
    if (!eyes[0].central || !eyes[1].central) {
      res.failure = "type II needs central marked points on both eyes";
      return res;
    }
    if (eyes[0].central->ram != eyes[1].central->ram) {
      res.failure = "central ramification indices differ";
      return res;
    }
    bool p0 = eyes[0].central->value.infinite;
    bool p1 = eyes[1].central->value.infinite;
    // Normalize so that exactly the second eye holds the pole.
    if (p0 && p1)
      eyes[0] = invert_eye(eyes[0]);
    else if (p0 && !p1)
      std::swap(eyes[0], eyes[1]);
    else if (!p0 && !p1)
      eyes[1] = invert_eye(eyes[1]);
  }

  // Degree sanity: the infinity fibers must fit inside the degrees.
  for (const auto& eye : eyes) {
    int marked_pole = 0;
    std::map<Rat, int> fiber_load;
    for (const auto& pr : eye.pairs) {
      if (pr.value[0].infinite)
        marked_pole += 2 * pr.ram[0];
      else
        fiber_load[pr.value[0].finite] += 2 * pr.ram[0];
    }
    if (eye.central) {
      if (eye.central->value.infinite)
        marked_pole += eye.central->ram;
      else
        fiber_load[eye.central->value.finite] += eye.central->ram;
    }
    if (marked_pole > eye.f_degree) {
      res.failure = "eye '" + eye.name + "': marked pole orders exceed the degree";
      return res;
    }
    for (const auto& [v, load] : fiber_load)
      if (load > eye.f_degree) {
        res.failure = "eye '" + eye.name + "': fiber over " + rat_str(v) +
                      " exceeds the degree";
        return res;
      }
  }
  res.conditions_ok = true;

  // Construct the regulated presentation.
  std::vector<std::string> vnames;
  std::vector<EdgeSpec> especs;
  std::map<std::string, CurveData> curves;  // by vertex name, tangent keys resolved later
  struct RawTan {
    std::string vertex;
    std::string edge;  // key resolution happens after the graph is built
    MarkedPoint mp;
  };
  std::vector<RawTan> raws;

  for (const auto& eye : eyes) vnames.push_back(eye.name);
  for (size_t ei = 0; ei < eyes.size(); ++ei) {
    const HMEyeSpec& eye = eyes[ei];
    CurveData cd;
    cd.genus = eye.genus;
    cd.f_degree = eye.f_degree;
    curves[eye.name] = cd;
    for (const auto& pr : eye.pairs) {
      vnames.push_back(pr.pedal);
      std::string ea = "L_" + pr.pedal + ".a";
      std::string eb = "L_" + pr.pedal + ".b";
      especs.push_back(EdgeSpec{ea, eye.name, pr.pedal, pr.half_length[0]});
      especs.push_back(EdgeSpec{eb, eye.name, pr.pedal, pr.half_length[1]});
      raws.push_back(RawTan{eye.name, ea, MarkedPoint{pr.value[0], pr.ram[0]}});
      raws.push_back(RawTan{eye.name, eb, MarkedPoint{pr.value[1], pr.ram[1]}});
      // Pedal curves: the loop maximum carries two marked poles; the loop
      // minimum carries a closing pair of equal values.
      CurveData pc;
      pc.genus = 0;
      pc.f_degree = 2 * pr.ram[0];
      if (pr.value[0].infinite) {
        raws.push_back(RawTan{pr.pedal, ea, MarkedPoint{FnValue::of(Rat(0)), pr.ram[0]}});
        raws.push_back(RawTan{pr.pedal, eb, MarkedPoint{FnValue::of(Rat(0)), pr.ram[0]}});
        pc.poles.push_back(PoleEntry{"pw", 2 * pr.ram[0], false});
        pc.divisor.push_back(DivisorEntry{"pw", 2 * pr.ram[0], false});
        pc.fibers[Rat(0)] = {pr.ram[0], pr.ram[0]};
      } else {
        raws.push_back(RawTan{pr.pedal, ea, MarkedPoint{FnValue::inf(), pr.ram[0]}});
        raws.push_back(RawTan{pr.pedal, eb, MarkedPoint{FnValue::inf(), pr.ram[0]}});
        // pole entries are marked; filled in the resolution pass
      }
      curves[pr.pedal] = pc;
    }
  }
  if (spec.type == 2) {
    especs.push_back(EdgeSpec{"seg", eyes[0].name, eyes[1].name, spec.segment_length});
    raws.push_back(RawTan{eyes[0].name, "seg", *eyes[0].central});
    raws.push_back(RawTan{eyes[1].name, "seg", *eyes[1].central});
  }

  SeriesPresentation sp;
  sp.graph = MetricGraph::build(vnames, especs);
  sp.at.resize(sp.graph.num_vertices());
  for (const auto& raw : raws) {
    VertexId v = sp.graph.vertex_index(raw.vertex);
    EdgeId e = sp.graph.edge_index(raw.edge);
    int slot = sp.graph.edge(e).ends[0] == v ? 0 : 1;
    curves[raw.vertex].marked[{e, slot}] = raw.mp;
    if (raw.mp.value.infinite)
      curves[raw.vertex].poles.push_back(
          PoleEntry{sp.graph.tangent_key(e, slot), raw.mp.ram, true});
  }
  // Unmarked poles and the base-point-free divisor at the eyes.
  for (const auto& eye : eyes) {
    CurveData& cd = curves[eye.name];
    int marked_pole = 0;
    for (const auto& pe : cd.poles) marked_pole += pe.order;
    for (int k = 0; k < eye.f_degree - marked_pole; ++k) {
      std::string label = "w" + std::to_string(k);
      cd.poles.push_back(PoleEntry{label, 1, false});
      cd.divisor.push_back(DivisorEntry{label, 1, false});
    }
  }
  for (const auto& [name, cd] : curves) sp.at[sp.graph.vertex_index(name)] = cd;
  res.sp = sp;
  res.verdict = smoothable(sp);
  return res;
}

SaturationReport saturation_check(const MetrizedComplexData& mc,
                                  const std::vector<SaturationCandidate>& candidates) {
  SaturationReport rep;
  for (const auto& cand : candidates) {
    SaturationOutcome oc;
    oc.name = cand.name;
    try {
      SeriesPresentation sp = saturate(mc, cand.fill);
      oc.verdict = smoothable(sp);
      if (oc.verdict->smoothable()) rep.any_smoothable = true;
      if (oc.verdict->igc_infeasible)
        for (VertexId v : oc.verdict->igc_infeasible->forced_zero)
          oc.forced_zero_names.push_back(sp.graph.vertex_name(v));
    } catch (const Error& e) {
      oc.error = e.what();
    }
    rep.candidates.push_back(std::move(oc));
  }
  return rep;
}

}  // namespace lls
