#include "lls/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace lls;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const std::string& command, int exit_code, Json body) {
  ReportDocument r;
  r.command = command;
  r.exit_code = exit_code;
  r.body = std::move(body);
  std::cout << serialize_report(r);
  return exit_code;
}

int emit_error(const std::string& command, const std::string& what) {
  Json body;
  body["error"] = what;
  return emit(command, 2, std::move(body));
}

const SeriesPresentation& need_series(const InstanceDocument& doc) {
  if (!doc.series)
    throw Error("this instance is a metrized complex; only 'saturations' applies");
  return *doc.series;
}

int cmd_validate(const InstanceDocument& doc) {
  const SeriesPresentation& sp = need_series(doc);
  Json body;
  auto vio = validate_presentation(sp);
  Json vj = Json::array();
  for (const auto& v : vio) {
    Json x;
    x["where"] = v.where;
    x["what"] = v.what;
    vj.push_back(x);
  }
  body["violations"] = vj;
  if (!vio.empty()) {
    body["ok"] = false;
    return emit("validate", 1, std::move(body));
  }
  DiagrammaticReport rep = check_diagrammatic(sp);
  Json pts;
  bool refined_everywhere = true;
  for (int v = 0; v < sp.graph.num_vertices(); ++v) {
    const PointReport& pr = rep.points[v];
    Json x;
    x["compatible"] = pr.compatible;
    x["refined"] = pr.refined;
    refined_everywhere = refined_everywhere && pr.refined;
    if (!pr.compatible) x["deficient_point"] = pr.problem;
    Json bp = Json::array();
    for (const auto& de : pr.base_points) {
      Json b;
      b["point"] = de.point;
      b["mult"] = de.mult;
      bp.push_back(b);
    }
    x["base_points"] = bp;
    pts[sp.graph.vertex_name(v)] = x;
  }
  body["points"] = pts;
  auto asm_res = assemble(sp);
  bool continuous = std::holds_alternative<GlobalDiagram>(asm_res);
  if (!continuous) {
    const EdgeConflict& c = std::get<EdgeConflict>(asm_res);
    Json cj;
    cj["edge"] = sp.graph.edge(c.edge).name;
    cj["mult_at_end0"] = c.mult_at_end0;
    cj["mult_at_end1"] = c.mult_at_end1;
    body["edge_conflict"] = cj;
  }
  bool ok = rep.ok && refined_everywhere && continuous;
  body["ok"] = ok;
  body["diagrammatic"] = ok;
  return emit("validate", ok ? 0 : 1, std::move(body));
}

int cmd_rho(const InstanceDocument& doc) {
  const SeriesPresentation& sp = need_series(doc);
  auto [neg, data] = run_pipeline(sp);
  if (neg && neg->kind != Verdict::Kind::Smoothable)
    return emit("rho", 1, verdict_json(*neg, sp));
  Json body;
  Json vals;
  for (int v = 0; v < sp.graph.num_vertices(); ++v)
    vals[sp.graph.vertex_name(v)] = rat_str(data.rho->value[v]);
  body["rho_hat"] = vals;
  Json mults;
  for (int e = 0; e < sp.graph.num_edges(); ++e)
    mults[sp.graph.edge(e).name] = data.gd->mult[e];
  body["multiplicities"] = mults;
  Json exc = Json::array();
  for (int v = 0; v < sp.graph.num_vertices(); ++v)
    if (data.exc->exceptional[v]) exc.push_back(sp.graph.vertex_name(v));
  body["exceptional_points"] = exc;
  Json evals = Json::array();
  for (const Rat& c : data.exc->values) evals.push_back(rat_str(c));
  body["exceptional_values"] = evals;
  return emit("rho", 0, std::move(body));
}

Json biftree_body(const SeriesPresentation& sp, const PipelineData& data) {
  const BifurcationTree& bt = *data.bt;
  Json body;
  Json nodes = Json::array();
  for (size_t i = 0; i < bt.nodes.size(); ++i) {
    const BifNode& n = bt.nodes[i];
    Json nj;
    nj["id"] = static_cast<int>(i);
    nj["depth"] = rat_str(n.depth);
    nj["parent"] = n.parent;
    if (n.parent >= 0) nj["edge_length"] = rat_str(n.parent_len);
    nj["leaf"] = n.is_leaf();
    nj["bifurcation"] = n.is_bifurcation();
    nj["root"] = static_cast<int>(i) == bt.root;
    nj["forward_tangents"] = n.fwd_count();
    Json comp = Json::array();
    for (VertexId v : n.vertices) comp.push_back(sp.graph.vertex_name(v));
    nj["component_vertices"] = comp;
    nodes.push_back(nj);
  }
  body["nodes"] = nodes;
  Json proj;
  for (int v = 0; v < sp.graph.num_vertices(); ++v) {
    TreePointId id = data.pm->point_image(v);
    Json pj;
    pj["depth"] = rat_str(id.depth);
    pj["component"] = sp.graph.vertex_name(id.crep);
    int ni = data.bt->node_at(id);
    pj["node"] = ni;
    proj[sp.graph.vertex_name(v)] = pj;
  }
  body["projection"] = proj;
  return body;
}

int cmd_biftree(const InstanceDocument& doc) {
  const SeriesPresentation& sp = need_series(doc);
  auto [neg, data] = run_pipeline(sp);
  if (neg) return emit("biftree", 1, verdict_json(*neg, sp));
  return emit("biftree", 0, biftree_body(sp, data));
}

int cmd_systems(const InstanceDocument& doc, int level) {
  const SeriesPresentation& sp = need_series(doc);
  if (level < 1 || level > 4) throw Error("--level must be in 1..4");
  auto [neg, data] = run_pipeline(sp);
  if (neg) return emit("systems", 1, verdict_json(*neg, sp));
  const BifurcationTree& bt = *data.bt;
  Json body;
  Json bif = Json::array();
  for (int ni : bt.bif_nodes) {
    Json nj;
    nj["node"] = ni;
    Json tj = Json::array();
    for (VertexId o : bt.nodes[ni].fwd_orep) tj.push_back(sp.graph.vertex_name(o));
    nj["tangents"] = tj;
    bif.push_back(nj);
  }
  body["bifurcation_nodes"] = bif;
  SystemEnumerator en(bt);
  Json systems = Json::array();
  long long total = 0, passing = 0;
  while (auto sys = en.next()) {
    ++total;
    bool pass = true;
    if (level >= 2)
      pass = level_filter(*sys, 2, data.local, sp, *data.rho, bt, *data.pm);
    if (pass && level >= 3)
      pass = level_filter(*sys, 3, data.local, sp, *data.rho, bt, *data.pm);
    if (pass && level >= 4)
      pass = level4_membership(*sys, sp, *data.rho, bt, *data.pm, *data.exc);
    if (!pass) continue;
    ++passing;
    Json sj = Json::array();
    for (const auto& rgs : sys->rgs) sj.push_back(rgs);
    systems.push_back(sj);
  }
  body["level"] = level;
  body["total_systems"] = total;
  body["passing"] = passing;
  body["systems"] = systems;
  return emit("systems", 0, std::move(body));
}

int cmd_smoothable(const InstanceDocument& doc, bool with_witness) {
  const SeriesPresentation& sp = need_series(doc);
  Verdict v = smoothable(sp);
  Json body = verdict_json(v, sp);
  if (v.smoothable() && with_witness) {
    HarmonicMorphismData hm = build_witness_morphism(sp, *v.witness);
    auto vio = verify_harmonic(hm, sp);
    Json vj = Json::array();
    for (const auto& x : vio) {
      Json y;
      y["where"] = x.where;
      y["what"] = x.what;
      vj.push_back(y);
    }
    body["morphism"] = morphism_json(hm);
    body["morphism_check"] = vj;
    if (!vio.empty()) return emit("smoothable", 1, std::move(body));
  }
  return emit("smoothable", v.smoothable() ? 0 : 1, std::move(body));
}

int cmd_criteria(const InstanceDocument& doc, const std::string& which) {
  Json body;
  if (which == "compact") {
    const SeriesPresentation& sp = need_series(doc);
    bool ok = criterion_compact(sp);
    body["criterion"] = "compact";
    body["smoothable"] = ok;
    Verdict v = smoothable(sp);
    body["pipeline"] = verdict_json(v, sp);
    if (ok != v.smoothable()) throw Error("criterion_compact disagrees with the pipeline");
    return emit("criteria", ok ? 0 : 1, std::move(body));
  }
  if (which == "loops") {
    const SeriesPresentation& sp = need_series(doc);
    std::vector<LoopReport> reports;
    bool ok = criterion_loops(sp, &reports);
    body["criterion"] = "loops";
    body["smoothable"] = ok;
    Json lj = Json::array();
    for (const auto& lr : reports) {
      Json x;
      Json edges = Json::array();
      for (EdgeId e : lr.loop) edges.push_back(sp.graph.edge(e).name);
      x["edges"] = edges;
      Json mins = Json::array();
      for (VertexId v : lr.min_points) mins.push_back(sp.graph.vertex_name(v));
      x["min_points"] = mins;
      Json cls = Json::array();
      for (VertexId v : lr.closing_points) cls.push_back(sp.graph.vertex_name(v));
      x["closing_points"] = cls;
      x["pass"] = lr.pass;
      lj.push_back(x);
    }
    body["loops"] = lj;
    return emit("criteria", ok ? 0 : 1, std::move(body));
  }
  if (which == "hm") {
    if (!doc.harris_mumford) throw Error("instance has no harris_mumford block");
    HarrisMumfordResult res = criterion_harris_mumford(*doc.harris_mumford);
    body["criterion"] = "hm";
    body["conditions_ok"] = res.conditions_ok;
    if (!res.conditions_ok) {
      body["failure"] = res.failure;
      return emit("criteria", 1, std::move(body));
    }
    body["pipeline"] = verdict_json(*res.verdict, *res.sp);
    body["instance"] = serialize_presentation(*res.sp);
    return emit("criteria", res.verdict->smoothable() ? 0 : 1, std::move(body));
  }
  throw Error("unknown criterion '" + which + "' (compact|loops|hm)");
}

int cmd_saturations(const InstanceDocument& doc) {
  if (!doc.mc) throw Error("instance has no metrized_complex block");
  SaturationReport rep = saturation_check(*doc.mc, doc.saturations);
  Json body;
  Json cj = Json::array();
  for (const auto& oc : rep.candidates) {
    Json x;
    x["name"] = oc.name;
    if (oc.verdict) {
      x["verdict"] = oc.verdict->kind_str();
      if (oc.verdict->kind == Verdict::Kind::IgcInfeasible)
        x["forced_zero_beta"] = oc.forced_zero_names;
    } else {
      x["error"] = oc.error;
    }
    cj.push_back(x);
  }
  body["candidates"] = cj;
  body["smoothable"] = rep.any_smoothable;
  return emit("saturations", rep.any_smoothable ? 0 : 1, std::move(body));
}

int cmd_export(const InstanceDocument& doc, const std::string& what,
               const std::string& out_path) {
  const SeriesPresentation& sp = need_series(doc);
  std::string dot;
  if (what == "gamma") {
    auto asm_res = assemble(sp);
    const GlobalDiagram* gd =
        std::holds_alternative<GlobalDiagram>(asm_res) ? &std::get<GlobalDiagram>(asm_res) : nullptr;
    dot = dot_graph(sp, gd);
  } else if (what == "biftree") {
    auto [neg, data] = run_pipeline(sp);
    if (neg) return emit("export", 1, verdict_json(*neg, sp));
    dot = dot_biftree(*data.bt);
  } else if (what == "witness") {
    Verdict v = smoothable(sp);
    if (!v.smoothable()) return emit("export", 1, verdict_json(v, sp));
    HarmonicMorphismData hm = build_witness_morphism(sp, *v.witness);
    dot = dot_morphism(hm);
  } else {
    throw Error("unknown export '" + what + "' (gamma|biftree|witness)");
  }
  if (out_path.empty()) {
    std::cout << dot;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write '" + out_path + "'");
    out << dot;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact smoothability decisions for rank-one series on saturated metrized complexes"};
  app.require_subcommand(1);

  std::string instance_path, out_path, criteria_which = "compact", export_what = "gamma";
  std::string export_format = "dot";
  int level = 4;
  bool with_witness = false;

  auto add_instance = [&](CLI::App* sub) {
    sub->add_option("instance", instance_path, "instance document (JSON)")->required();
  };

  CLI::App* validate = app.add_subcommand("validate", "structural and diagrammatic checks");
  add_instance(validate);
  CLI::App* rho = app.add_subcommand("rho", "solve the characteristic equation");
  add_instance(rho);
  CLI::App* biftree = app.add_subcommand("biftree", "bifurcation tree and projection");
  add_instance(biftree);
  CLI::App* systems = app.add_subcommand("systems", "enumerate partition systems by level");
  add_instance(systems);
  systems->add_option("--level", level, "filter level 1..4 (default 4)");
  CLI::App* smooth = app.add_subcommand("smoothable", "full smoothability decision");
  add_instance(smooth);
  smooth->add_flag("--witness", with_witness, "build and verify the witness morphism");
  CLI::App* criteria = app.add_subcommand("criteria", "special-case criteria");
  criteria->add_option("which", criteria_which, "compact|loops|hm")->required();
  add_instance(criteria);
  CLI::App* saturations = app.add_subcommand("saturations", "decide over supplied saturations");
  add_instance(saturations);
  CLI::App* exp = app.add_subcommand("export", "DOT export");
  add_instance(exp);
  exp->add_option("--what", export_what, "gamma|biftree|witness");
  exp->add_option("--format", export_format, "dot");
  exp->add_option("--out", out_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    InstanceDocument doc = parse_instance(read_file(instance_path));
    if (command == "validate") return cmd_validate(doc);
    if (command == "rho") return cmd_rho(doc);
    if (command == "biftree") return cmd_biftree(doc);
    if (command == "systems") return cmd_systems(doc, level);
    if (command == "smoothable") return cmd_smoothable(doc, with_witness);
    if (command == "criteria") return cmd_criteria(doc, criteria_which);
    if (command == "saturations") return cmd_saturations(doc);
    if (command == "export") {
      if (export_format != "dot") throw Error("only --format dot is supported");
      return cmd_export(doc, export_what, out_path);
    }
    throw Error("unknown command");
  } catch (const Error& e) {
    return emit_error(command, e.what());
  } catch (const std::exception& e) {
    return emit_error(command, std::string("internal: ") + e.what());
  }
}
