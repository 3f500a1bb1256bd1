#include "lls/io.hpp"

#include <algorithm>
#include <sstream>

namespace lls {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(path + ": " + what);
}

Rat get_rat(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (!j.is_string()) fail(path, "expected an exact rational as a string");
  auto r = rat_parse(j.get<std::string>());
  if (!r) fail(path, "malformed rational '" + j.get<std::string>() + "'");
  return *r;
}

FnValue get_value(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return FnValue::of(Rat(j.get<long long>()));
  if (!j.is_string()) fail(path, "expected a rational or \"inf\"");
  auto v = fnvalue_parse(j.get<std::string>());
  if (!v) fail(path, "malformed value '" + j.get<std::string>() + "'");
  return *v;
}

int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

const Json& need(const Json& j, const std::string& key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

std::vector<PoleEntry> parse_poles(const Json& j, const std::string& path) {
  std::vector<PoleEntry> out;
  if (!j.is_array()) fail(path, "expected an array");
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& pj = j[i];
    PoleEntry pe;
    pe.point = need(pj, "point", path).get<std::string>();
    pe.order = get_int(need(pj, "order", path), path);
    pe.marked = pj.value("marked", false);
    out.push_back(std::move(pe));
  }
  return out;
}

std::vector<DivisorEntry> parse_divisor(const Json& j, const std::string& path) {
  std::vector<DivisorEntry> out;
  if (!j.is_array()) fail(path, "expected an array");
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& dj = j[i];
    DivisorEntry de;
    de.point = need(dj, "point", path).get<std::string>();
    de.mult = get_int(need(dj, "mult", path), path);
    de.marked = dj.value("marked", false);
    out.push_back(std::move(de));
  }
  return out;
}

std::map<Rat, std::vector<int>> parse_fibers(const Json& j, const std::string& path) {
  std::map<Rat, std::vector<int>> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    Rat v = rat_parse_or_throw(it.key(), path);
    std::vector<int> prof;
    for (const Json& r : it.value()) prof.push_back(get_int(r, path));
    std::sort(prof.begin(), prof.end());
    out[v] = prof;
  }
  return out;
}

RawCurveData parse_raw_curve(const Json& j, const std::string& path) {
  RawCurveData cd;
  cd.genus = j.contains("curve_genus") ? get_int(j["curve_genus"], path) : 0;
  cd.f_degree = get_int(need(j, "f_degree", path), path);
  const Json& marked = need(j, "marked", path);
  for (auto it = marked.begin(); it != marked.end(); ++it) {
    MarkedPoint mp;
    mp.value = get_value(need(it.value(), "value", path), path + ".marked." + it.key());
    mp.ram = get_int(need(it.value(), "ram", path), path + ".marked." + it.key());
    cd.marked.push_back({it.key(), mp});
  }
  if (j.contains("poles")) cd.poles = parse_poles(j["poles"], path + ".poles");
  if (j.contains("divisor")) cd.divisor = parse_divisor(j["divisor"], path + ".divisor");
  if (j.contains("fibers")) cd.fibers = parse_fibers(j["fibers"], path + ".fibers");
  return cd;
}

CurveData resolve_curve(const MetricGraph& g, VertexId v, const RawCurveData& raw,
                        const std::string& path) {
  CurveData cd;
  cd.genus = raw.genus;
  cd.f_degree = raw.f_degree;
  cd.fibers = raw.fibers;
  cd.poles = raw.poles;
  cd.divisor = raw.divisor;
  for (const auto& [key, mp] : raw.marked) {
    try {
      auto t = g.parse_tangent_key(key);
      if (g.edge(t.first).ends[t.second] != v)
        fail(path, "tangent key '" + key + "' is not based at '" + g.vertex_name(v) + "'");
      cd.marked[t] = mp;
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  return cd;
}

PointRef parse_point_ref(const MetricGraph& g, const Json& j, const std::string& path) {
  if (j.is_string()) return PointRef::at_vertex(g.vertex_index(j.get<std::string>()));
  EdgeId e = g.edge_index(need(j, "edge", path).get<std::string>());
  Rat off = get_rat(need(j, "offset", path), path);
  PointRef p = PointRef::inside(e, off);
  g.check_point(p);
  return p;
}

Json rat_json(const Rat& r) { return Json(rat_str(r)); }

void parse_hm_block(const Json& j, InstanceDocument& doc) {
  const Json& hj = j["harris_mumford"];
  HarrisMumfordSpec hm;
  std::string type = need(hj, "type", "harris_mumford").get<std::string>();
  hm.type = type == "I" ? 1 : type == "II" ? 2 : 0;
  if (hm.type == 0) fail("harris_mumford", "type must be \"I\" or \"II\"");
  if (hj.contains("segment_length"))
    hm.segment_length = get_rat(hj["segment_length"], "harris_mumford.segment_length");
  else
    hm.segment_length = 1;
  for (const Json& ej : need(hj, "eyes", "harris_mumford")) {
    HMEyeSpec eye;
    eye.name = need(ej, "name", "harris_mumford.eyes").get<std::string>();
    eye.genus = ej.contains("genus") ? get_int(ej["genus"], "eye genus") : 0;
    eye.f_degree = get_int(need(ej, "f_degree", "harris_mumford.eyes"), "eye degree");
    if (ej.contains("central")) {
      MarkedPoint mp;
      mp.value = get_value(need(ej["central"], "value", "central"), "central value");
      mp.ram = get_int(need(ej["central"], "ram", "central"), "central ram");
      eye.central = mp;
    }
    if (ej.contains("pairs"))
      for (const Json& pj : ej["pairs"]) {
        HMPairSpec pr;
        pr.pedal = need(pj, "pedal", "pair").get<std::string>();
        const Json& vals = need(pj, "values", "pair");
        const Json& rams = need(pj, "rams", "pair");
        if (vals.size() != 2 || rams.size() != 2) fail("pair", "values/rams must be pairs");
        pr.value[0] = get_value(vals[0], "pair value");
        pr.value[1] = get_value(vals[1], "pair value");
        pr.ram[0] = get_int(rams[0], "pair ram");
        pr.ram[1] = get_int(rams[1], "pair ram");
        if (pj.contains("lengths")) {
          pr.half_length[0] = get_rat(pj["lengths"][0], "pair length");
          pr.half_length[1] = get_rat(pj["lengths"][1], "pair length");
        } else {
          pr.half_length[0] = pr.half_length[1] = 1;
        }
        eye.pairs.push_back(std::move(pr));
      }
    hm.eyes.push_back(std::move(eye));
  }
  doc.harris_mumford = std::move(hm);
}

}  // namespace

InstanceDocument parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("document is not valid JSON: ") + e.what());
  }
  return parse_instance_json(j);
}

InstanceDocument parse_instance_json(const Json& j) {
  InstanceDocument doc;

  if (!j.contains("graph")) {
    // Harris-Mumford documents carry their own construction data.
    if (!j.contains("harris_mumford")) fail("$", "missing field 'graph'");
    parse_hm_block(j, doc);
    return doc;
  }
  const Json& gj = j["graph"];
  std::vector<std::string> vnames;
  for (const Json& v : need(gj, "vertices", "graph")) vnames.push_back(v.get<std::string>());
  std::vector<EdgeSpec> especs;
  const Json& edges = need(gj, "edges", "graph");
  for (size_t i = 0; i < edges.size(); ++i) {
    const Json& ej = edges[i];
    std::string path = "graph.edges[" + std::to_string(i) + "]";
    EdgeSpec es;
    es.name = need(ej, "id", path).get<std::string>();
    const Json& ends = need(ej, "ends", path);
    if (!ends.is_array() || ends.size() != 2) fail(path, "'ends' must be a pair");
    es.from = ends[0].get<std::string>();
    es.to = ends[1].get<std::string>();
    es.length = get_rat(need(ej, "length", path), path + ".length");
    if (es.length <= 0) fail(path, "length must be > 0");
    especs.push_back(std::move(es));
  }
  MetricGraph graph = MetricGraph::build(vnames, especs);

  std::map<VertexId, CurveData> curves;
  if (j.contains("distinguished")) {
    const Json& dj = j["distinguished"];
    for (auto it = dj.begin(); it != dj.end(); ++it) {
      std::string path = "distinguished." + it.key();
      VertexId v = graph.vertex_index(it.key());
      RawCurveData raw = parse_raw_curve(it.value(), path);
      curves[v] = resolve_curve(graph, v, raw, path);
    }
  }

  if (j.contains("metrized_complex")) {
    const Json& mj = j["metrized_complex"];
    MetrizedComplexData mc;
    mc.graph = graph;
    std::set<std::string> aset;
    for (const Json& n : need(mj, "curves_at", "metrized_complex"))
      aset.insert(n.get<std::string>());
    for (const auto& [v, cd] : curves) {
      if (!aset.count(graph.vertex_name(v)))
        fail("metrized_complex", "'" + graph.vertex_name(v) +
                                     "' has curve data but is not in curves_at");
      mc.curves[v] = cd;
    }
    for (const std::string& name : aset)
      if (!mc.curves.count(graph.vertex_index(name)))
        fail("metrized_complex", "curves_at names '" + name + "' without curve data");
    if (mj.contains("tropical_divisor"))
      for (auto it = mj["tropical_divisor"].begin(); it != mj["tropical_divisor"].end(); ++it)
        mc.tropical_mass[graph.vertex_index(it.key())] =
            get_int(it.value(), "metrized_complex.tropical_divisor");
    doc.mc = std::move(mc);

    if (mj.contains("saturations")) {
      const Json& sats = mj["saturations"];
      for (size_t i = 0; i < sats.size(); ++i) {
        const Json& sj = sats[i];
        std::string path = "metrized_complex.saturations[" + std::to_string(i) + "]";
        SaturationCandidate cand;
        cand.name = sj.value("name", "candidate-" + std::to_string(i));
        for (const Json& pj : need(sj, "points", path)) {
          SaturationFill f;
          f.where = parse_point_ref(graph, need(pj, "at", path), path);
          const Json& cj = need(pj, "curve", path);
          f.curve = parse_raw_curve(cj, path + ".curve");
          cand.fill.push_back(std::move(f));
        }
        doc.saturations.push_back(std::move(cand));
      }
    }
  } else {
    SeriesPresentation sp;
    sp.graph = graph;
    sp.at.resize(graph.num_vertices());
    for (VertexId v = 0; v < graph.num_vertices(); ++v) {
      auto it = curves.find(v);
      if (it == curves.end())
        fail("distinguished", "vertex '" + graph.vertex_name(v) + "' has no curve data");
      sp.at[v] = it->second;
    }
    if (j.contains("genus")) sp.declared_genus = get_int(j["genus"], "genus");
    doc.series = std::move(sp);
  }

  if (j.contains("harris_mumford")) parse_hm_block(j, doc);
  return doc;
}

Json serialize_presentation(const SeriesPresentation& sp) {
  Json j;
  if (sp.declared_genus) j["genus"] = *sp.declared_genus;
  Json gj;
  Json verts = Json::array();
  for (int v = 0; v < sp.graph.num_vertices(); ++v) verts.push_back(sp.graph.vertex_name(v));
  gj["vertices"] = verts;
  Json edges = Json::array();
  for (int e = 0; e < sp.graph.num_edges(); ++e) {
    const EdgeRec& rec = sp.graph.edge(e);
    Json ej;
    ej["id"] = rec.name;
    ej["ends"] = Json::array({sp.graph.vertex_name(rec.ends[0]), sp.graph.vertex_name(rec.ends[1])});
    ej["length"] = rat_json(rec.length);
    edges.push_back(ej);
  }
  gj["edges"] = edges;
  j["graph"] = gj;

  Json dj;
  for (int v = 0; v < sp.graph.num_vertices(); ++v) {
    const CurveData& cd = sp.at[v];
    Json cj;
    cj["curve_genus"] = cd.genus;
    cj["f_degree"] = cd.f_degree;
    Json mj;
    for (const auto& [t, mp] : cd.marked) {
      Json m;
      m["value"] = fnvalue_str(mp.value);
      m["ram"] = mp.ram;
      mj[sp.graph.tangent_key(t.first, t.second)] = m;
    }
    cj["marked"] = mj;
    Json pj = Json::array();
    for (const auto& pe : cd.poles) {
      Json p;
      p["point"] = pe.point;
      p["order"] = pe.order;
      if (pe.marked) p["marked"] = true;
      pj.push_back(p);
    }
    cj["poles"] = pj;
    Json dvj = Json::array();
    for (const auto& de : cd.divisor) {
      Json d;
      d["point"] = de.point;
      d["mult"] = de.mult;
      if (de.marked) d["marked"] = true;
      dvj.push_back(d);
    }
    cj["divisor"] = dvj;
    if (!cd.fibers.empty()) {
      Json fj;
      for (const auto& [val, prof] : cd.fibers) fj[rat_str(val)] = prof;
      cj["fibers"] = fj;
    }
    dj[sp.graph.vertex_name(v)] = cj;
  }
  j["distinguished"] = dj;
  return j;
}

// ---- Reports ------------------------------------------------------------------

std::string serialize_report(const ReportDocument& r) {
  Json j;
  j["command"] = r.command;
  j["exit"] = r.exit_code;
  j["report"] = r.body;
  return j.dump(2) + "\n";
}

ReportDocument parse_report(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("report is not valid JSON: ") + e.what());
  }
  ReportDocument r;
  r.command = need(j, "command", "report").get<std::string>();
  r.exit_code = get_int(need(j, "exit", "report"), "report.exit");
  r.body = need(j, "report", "report");
  return r;
}

namespace {

Json tree_json(const PartitionTree& pt) {
  Json tj = Json::array();
  for (size_t i = 0; i < pt.tnodes.size(); ++i) {
    const TNode& tn = pt.tnodes[i];
    Json nj;
    nj["id"] = static_cast<int>(i);
    nj["depth"] = rat_json(tn.depth);
    nj["parent"] = tn.parent;
    if (tn.parent >= 0) nj["edge_length"] = rat_json(tn.parent_len);
    nj["split"] = tn.src_bnode < 0;
    tj.push_back(nj);
  }
  return tj;
}

}  // namespace

Json witness_json(const IGCWitness& w) {
  Json j;
  Json ab;
  for (size_t i = 0; i < w.exceptional.size(); ++i) {
    Json e;
    e["vertex"] = w.exceptional[i];
    e["alpha"] = rat_json(w.alpha_beta[i].first);
    e["beta"] = rat_json(w.alpha_beta[i].second);
    ab.push_back(e);
  }
  j["alpha_beta"] = ab;
  j["delta"] = rat_json(w.delta);
  Json sys = Json::array();
  for (const auto& rgs : w.system.rgs) sys.push_back(rgs);
  j["system"] = sys;
  Json eta = Json::array();
  for (const auto& [tt, val] : w.eta) {
    Json e;
    e["depth"] = rat_json(tt.depth);
    e["component"] = tt.crep;
    e["into"] = tt.orep;
    e["value"] = rat_json(val);
    eta.push_back(e);
  }
  j["eta"] = eta;
  j["tree"] = tree_json(w.tree);
  return j;
}

Json verdict_json(const Verdict& v, const SeriesPresentation& sp) {
  Json j;
  j["verdict"] = v.kind_str();
  switch (v.kind) {
    case Verdict::Kind::NotDiagrammatic: {
      const NotDiagrammatic& nd = *v.not_diagrammatic;
      if (nd.incompatible) {
        j["incompatible_at"] = sp.graph.vertex_name(nd.incompatible->first);
        j["deficient_point"] = nd.incompatible->second;
      }
      if (nd.conflict) {
        Json c;
        c["edge"] = sp.graph.edge(nd.conflict->edge).name;
        c["mult_at_end0"] = nd.conflict->mult_at_end0;
        c["mult_at_end1"] = nd.conflict->mult_at_end1;
        j["edge_conflict"] = c;
      }
      break;
    }
    case Verdict::Kind::NotSolvable: {
      const CycleObstruction& obs = v.not_solvable->obstruction;
      Json cyc = Json::array();
      for (const auto& oe : obs.cycle) {
        Json s;
        s["edge"] = sp.graph.edge(oe.edge).name;
        s["forward"] = oe.forward;
        cyc.push_back(s);
      }
      j["cycle"] = cyc;
      j["integral"] = rat_json(obs.integral);
      break;
    }
    case Verdict::Kind::IgcInfeasible: {
      Json fz = Json::array();
      for (VertexId p : v.igc_infeasible->forced_zero) fz.push_back(sp.graph.vertex_name(p));
      j["forced_zero_beta"] = fz;
      j["constraint_classes"] = v.igc_infeasible->constraints;
      break;
    }
    case Verdict::Kind::Smoothable: {
      Json w = witness_json(*v.witness);
      // Attach vertex names for readability.
      Json ab = Json::array();
      for (size_t i = 0; i < v.witness->exceptional.size(); ++i) {
        Json e;
        e["vertex"] = sp.graph.vertex_name(v.witness->exceptional[i]);
        e["alpha"] = rat_json(v.witness->alpha_beta[i].first);
        e["beta"] = rat_json(v.witness->alpha_beta[i].second);
        ab.push_back(e);
      }
      w["alpha_beta"] = ab;
      j["witness"] = w;
      break;
    }
  }
  return j;
}

Json morphism_json(const HarmonicMorphismData& hm) {
  Json j;
  j["tree"] = tree_json(hm.tree);
  Json xi;
  for (const auto& [te, val] : hm.xi) xi[std::to_string(te)] = rat_json(val);
  j["xi"] = xi;
  Json vj = Json::array();
  for (int v = 0; v < hm.mod.num_vertices(); ++v) {
    Json e;
    e["name"] = hm.mod.vertex_name(v);
    e["orig"] = hm.orig_vertex[v];
    e["degree"] = hm.local_degree[v];
    Json img;
    img["is_node"] = hm.vertex_image[v].is_node;
    img["at"] = hm.vertex_image[v].is_node ? hm.vertex_image[v].tnode : hm.vertex_image[v].tedge;
    img["depth"] = rat_json(hm.vertex_image[v].depth);
    e["image"] = img;
    vj.push_back(e);
  }
  j["vertices"] = vj;
  Json ej = Json::array();
  for (int e = 0; e < hm.mod.num_edges(); ++e) {
    const EdgeRec& rec = hm.mod.edge(e);
    Json x;
    x["name"] = rec.name;
    x["ends"] = Json::array({hm.mod.vertex_name(rec.ends[0]), hm.mod.vertex_name(rec.ends[1])});
    x["length"] = rat_json(rec.length);
    x["orig"] = hm.orig_edge[e];
    x["image"] = hm.edge_image[e];
    x["expansion"] = hm.expansion[e];
    ej.push_back(x);
  }
  j["edges"] = ej;
  Json rj = Json::array();
  for (const auto& re : hm.retract) {
    Json x;
    x["vertex"] = re.gamma_vertex;
    x["point"] = re.point_label;
    x["mult"] = re.mult;
    rj.push_back(x);
  }
  j["retract"] = rj;
  j["branches"] = hm.branch_count;
  j["degree"] = hm.total_degree;
  return j;
}

HarmonicMorphismData parse_morphism(const Json& j) {
  HarmonicMorphismData hm;
  for (const Json& nj : need(j, "tree", "morphism")) {
    TNode tn;
    tn.depth = get_rat(need(nj, "depth", "tree"), "tree.depth");
    tn.parent = get_int(need(nj, "parent", "tree"), "tree.parent");
    if (tn.parent >= 0) tn.parent_len = get_rat(need(nj, "edge_length", "tree"), "tree");
    tn.src_bnode = nj.value("split", false) ? -1 : 0;
    hm.tree.tnodes.push_back(tn);
  }
  for (size_t i = 0; i < hm.tree.tnodes.size(); ++i) {
    int p = hm.tree.tnodes[i].parent;
    if (p >= 0) hm.tree.tnodes[p].children.push_back(static_cast<int>(i));
  }
  if (j.contains("xi"))
    for (auto it = j["xi"].begin(); it != j["xi"].end(); ++it)
      hm.xi[std::stoi(it.key())] = get_rat(it.value(), "xi");

  std::vector<std::string> vnames;
  for (const Json& vj : need(j, "vertices", "morphism")) {
    vnames.push_back(need(vj, "name", "vertex").get<std::string>());
    hm.orig_vertex.push_back(get_int(need(vj, "orig", "vertex"), "vertex.orig"));
    hm.local_degree.push_back(get_int(need(vj, "degree", "vertex"), "vertex.degree"));
    const Json& img = need(vj, "image", "vertex");
    TImagePoint ip;
    ip.is_node = img["is_node"].get<bool>();
    (ip.is_node ? ip.tnode : ip.tedge) = get_int(need(img, "at", "image"), "image.at");
    ip.depth = get_rat(need(img, "depth", "image"), "image.depth");
    hm.vertex_image.push_back(ip);
  }
  std::vector<EdgeSpec> especs;
  for (const Json& ej : need(j, "edges", "morphism")) {
    EdgeSpec es;
    es.name = need(ej, "name", "edge").get<std::string>();
    es.from = ej["ends"][0].get<std::string>();
    es.to = ej["ends"][1].get<std::string>();
    es.length = get_rat(need(ej, "length", "edge"), "edge.length");
    especs.push_back(es);
    hm.orig_edge.push_back(get_int(need(ej, "orig", "edge"), "edge.orig"));
    hm.edge_image.push_back(get_int(need(ej, "image", "edge"), "edge.image"));
    hm.expansion.push_back(get_int(need(ej, "expansion", "edge"), "edge.expansion"));
  }
  hm.mod = MetricGraph::build(vnames, especs);
  for (const Json& rj : need(j, "retract", "morphism")) {
    RetractEntry re;
    re.gamma_vertex = get_int(need(rj, "vertex", "retract"), "retract.vertex");
    re.point_label = need(rj, "point", "retract").get<std::string>();
    re.mult = get_int(need(rj, "mult", "retract"), "retract.mult");
    hm.retract.push_back(re);
  }
  hm.branch_count = get_int(need(j, "branches", "morphism"), "branches");
  hm.total_degree = get_int(need(j, "degree", "morphism"), "degree");
  return hm;
}

// ---- DOT ------------------------------------------------------------------------

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string dot_graph(const SeriesPresentation& sp, const GlobalDiagram* gd) {
  std::ostringstream os;
  os << "graph gamma {\n";
  for (int v = 0; v < sp.graph.num_vertices(); ++v) {
    os << "  \"" << dot_escape(sp.graph.vertex_name(v)) << "\" [label=\""
       << dot_escape(sp.graph.vertex_name(v));
    if (sp.at.size() == static_cast<size_t>(sp.graph.num_vertices()) && sp.at[v].genus > 0)
      os << " (g=" << sp.at[v].genus << ")";
    os << "\"];\n";
  }
  for (int e = 0; e < sp.graph.num_edges(); ++e) {
    const EdgeRec& rec = sp.graph.edge(e);
    os << "  \"" << dot_escape(sp.graph.vertex_name(rec.ends[0])) << "\" -- \""
       << dot_escape(sp.graph.vertex_name(rec.ends[1])) << "\" [label=\"" << rec.name
       << ": l=" << rat_str(rec.length);
    if (gd) os << ", m=" << gd->mult[e];
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string dot_biftree(const BifurcationTree& bt) {
  std::ostringstream os;
  os << "digraph biftree {\n  rankdir=BT;\n";
  for (size_t i = 0; i < bt.nodes.size(); ++i) {
    const BifNode& n = bt.nodes[i];
    os << "  n" << i << " [label=\"depth=" << rat_str(n.depth);
    if (n.is_leaf()) os << " leaf";
    if (n.is_bifurcation()) os << " bif";
    if (static_cast<int>(i) == bt.root) os << " root";
    os << "\"];\n";
  }
  for (size_t i = 0; i < bt.nodes.size(); ++i)
    if (bt.nodes[i].parent >= 0)
      os << "  n" << bt.nodes[i].parent << " -> n" << i << " [label=\""
         << rat_str(bt.nodes[i].parent_len) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string dot_partition_tree(const PartitionTree& pt) {
  std::ostringstream os;
  os << "digraph partition_tree {\n  rankdir=BT;\n";
  for (size_t i = 0; i < pt.tnodes.size(); ++i) {
    os << "  t" << i << " [label=\"depth=" << rat_str(pt.tnodes[i].depth);
    if (pt.tnodes[i].src_bnode < 0) os << " split";
    os << "\"];\n";
  }
  for (size_t i = 0; i < pt.tnodes.size(); ++i)
    if (pt.tnodes[i].parent >= 0)
      os << "  t" << pt.tnodes[i].parent << " -> t" << i << " [label=\""
         << rat_str(pt.tnodes[i].parent_len) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string dot_morphism(const HarmonicMorphismData& hm) {
  std::ostringstream os;
  os << "graph modification {\n";
  for (int v = 0; v < hm.mod.num_vertices(); ++v)
    os << "  \"" << dot_escape(hm.mod.vertex_name(v)) << "\" [label=\""
       << dot_escape(hm.mod.vertex_name(v)) << " deg=" << hm.local_degree[v] << "\"];\n";
  for (int e = 0; e < hm.mod.num_edges(); ++e) {
    const EdgeRec& rec = hm.mod.edge(e);
    os << "  \"" << dot_escape(hm.mod.vertex_name(rec.ends[0])) << "\" -- \""
       << dot_escape(hm.mod.vertex_name(rec.ends[1])) << "\" [label=\"x" << hm.expansion[e]
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace lls
