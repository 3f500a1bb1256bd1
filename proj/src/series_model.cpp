#include "lls/series_model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace lls {

int CurveData::divisor_degree() const {
  int d = 0;
  for (const auto& e : divisor) d += e.mult;
  return d;
}

int SeriesPresentation::series_degree() const {
  int d = 0;
  for (const auto& cd : at) d += cd.divisor_degree();
  return d;
}

int SeriesPresentation::total_genus() const {
  int g = graph.genus();
  for (const auto& cd : at) g += cd.genus;
  return g;
}

namespace {

bool looks_like_tangent_key(const std::string& s) { return s.find('@') != std::string::npos; }

// Resolves a marked point label at p to the tangent it names, or throws.
TanAt resolve_marked(const MetricGraph& g, VertexId p, const std::string& key) {
  auto t = g.parse_tangent_key(key);
  const EdgeRec& e = g.edge(t.first);
  if (e.ends[t.second] != p)
    throw Error("tangent key '" + key + "' is not based at vertex '" + g.vertex_name(p) + "'");
  return t;
}

}  // namespace

std::vector<Violation> validate_curve_data(const MetricGraph& g, VertexId p,
                                           const CurveData& cd) {
  std::vector<Violation> out;
  const std::string where = "curve at '" + g.vertex_name(p) + "'";
  auto bad = [&](const std::string& what) { out.push_back({where, what}); };

  if (cd.genus < 0) bad("curve genus must be >= 0");
  if (cd.f_degree < 1) bad("f_degree must be >= 1");

  // The reduction map is total and injective: exactly one marked point per
  // tangent direction.
  std::set<TanAt> tans;
  for (const auto& t : g.tangents_at(PointRef::at_vertex(p))) tans.insert({t.edge, t.end});
  for (const auto& [t, mp] : cd.marked) {
    if (!tans.count(t))
      bad("marked table names tangent " + g.tangent_key(t.first, t.second) +
          " which is not incident");
    if (mp.ram < 1) bad("ramification index at " + g.tangent_key(t.first, t.second) + " must be >= 1");
  }
  for (const auto& t : tans)
    if (!cd.marked.count(t))
      bad("tangent " + g.tangent_key(t.first, t.second) + " has no marked-point entry");

  // Pole list: orders positive, labels unique, marked entries match the
  // infinity-valued tangents one to one, orders sum to the degree.
  int pole_sum = 0;
  std::set<std::string> pole_labels;
  std::map<TanAt, int> marked_pole_order;
  for (const auto& pe : cd.poles) {
    if (pe.order < 1) bad("pole order at '" + pe.point + "' must be >= 1");
    if (!pole_labels.insert(pe.point).second) bad("duplicate pole entry '" + pe.point + "'");
    pole_sum += pe.order;
    if (pe.marked) {
      try {
        TanAt t = resolve_marked(g, p, pe.point);
        marked_pole_order[t] = pe.order;
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (looks_like_tangent_key(pe.point)) {
      bad("unmarked pole label '" + pe.point + "' must not contain '@'");
    }
  }
  if (pole_sum != cd.f_degree)
    bad("pole orders sum to " + std::to_string(pole_sum) + ", expected f_degree " +
        std::to_string(cd.f_degree));
  for (const auto& [t, mp] : cd.marked) {
    auto it = marked_pole_order.find(t);
    if (mp.value.infinite) {
      if (it == marked_pole_order.end())
        bad("marked point " + g.tangent_key(t.first, t.second) +
            " has value inf but is missing from the pole list");
      else if (it->second != mp.ram)
        bad("marked pole " + g.tangent_key(t.first, t.second) +
            " has order != its ramification index");
    } else if (it != marked_pole_order.end()) {
      bad("marked point " + g.tangent_key(t.first, t.second) +
          " is listed as a pole but its value is finite");
    }
  }

  // Marked rams over a common finite value fit inside one fiber; declared
  // fiber profiles must contain them and fill up to the degree.
  std::map<Rat, std::vector<int>> value_rams;
  for (const auto& [t, mp] : cd.marked)
    if (!mp.value.infinite) value_rams[mp.value.finite].push_back(mp.ram);
  for (auto& [v, rams] : value_rams) {
    std::sort(rams.begin(), rams.end());
    int s = 0;
    for (int r : rams) s += r;
    if (s > cd.f_degree)
      bad("marked ramification over value " + rat_str(v) + " exceeds f_degree");
  }
  for (const auto& [v, prof] : cd.fibers) {
    int s = 0;
    for (int r : prof) {
      if (r < 1) bad("fiber profile over " + rat_str(v) + " has entry < 1");
      s += r;
    }
    if (s != cd.f_degree)
      bad("fiber profile over " + rat_str(v) + " sums to " + std::to_string(s) +
          ", expected f_degree " + std::to_string(cd.f_degree));
    auto it = value_rams.find(v);
    if (it != value_rams.end()) {
      std::vector<int> prof_sorted = prof;
      std::sort(prof_sorted.begin(), prof_sorted.end());
      // multiset inclusion
      auto pi = prof_sorted.begin();
      bool ok = true;
      for (int r : it->second) {
        pi = std::find(pi, prof_sorted.end(), r);
        if (pi == prof_sorted.end()) {
          ok = false;
          break;
        }
        ++pi;
      }
      if (!ok) bad("fiber profile over " + rat_str(v) + " does not contain the marked rams");
    }
  }

  // Divisor entries.
  std::set<std::string> div_labels;
  for (const auto& de : cd.divisor) {
    if (de.mult < 1) bad("divisor multiplicity at '" + de.point + "' must be >= 1");
    if (!div_labels.insert(de.point).second) bad("duplicate divisor entry '" + de.point + "'");
    if (de.marked) {
      try {
        resolve_marked(g, p, de.point);
      } catch (const Error& e) {
        bad(e.what());
      }
    } else if (looks_like_tangent_key(de.point)) {
      bad("unmarked divisor label '" + de.point + "' must not contain '@'");
    }
  }

  // Riemann-Hurwitz bound on the declared branching of f: C_p -> P^1.
  int branching = 0;
  for (const auto& pe : cd.poles) branching += pe.order - 1;
  std::set<Rat> declared;
  for (const auto& [v, prof] : cd.fibers) {
    declared.insert(v);
    for (int r : prof) branching += r - 1;
  }
  for (const auto& [v, rams] : value_rams)
    if (!declared.count(v))
      for (int r : rams) branching += r - 1;
  if (branching > 2 * cd.genus - 2 + 2 * cd.f_degree)
    bad("declared ramification exceeds the Riemann-Hurwitz bound for genus " +
        std::to_string(cd.genus) + ", degree " + std::to_string(cd.f_degree));

  return out;
}

std::vector<Violation> validate_presentation(const SeriesPresentation& sp) {
  std::vector<Violation> out;
  if (sp.at.size() != static_cast<size_t>(sp.graph.num_vertices())) {
    out.push_back({"presentation", "every vertex needs curve data"});
    return out;
  }
  for (VertexId v = 0; v < sp.graph.num_vertices(); ++v) {
    auto vio = validate_curve_data(sp.graph, v, sp.at[v]);
    out.insert(out.end(), vio.begin(), vio.end());
  }
  if (sp.declared_genus && *sp.declared_genus != sp.total_genus())
    out.push_back({"presentation", "declared genus " + std::to_string(*sp.declared_genus) +
                                       " != graph genus + sum of curve genera = " +
                                       std::to_string(sp.total_genus())});
  return out;
}

LocalDiagram local_diagram(const MetricGraph& /*g*/, VertexId /*p*/, const CurveData& cd) {
  LocalDiagram ld;
  std::set<FnValue> values;
  for (const auto& [t, mp] : cd.marked) values.insert(mp.value);
  std::map<FnValue, int> cls;
  for (const auto& v : values) {  // finite ascending, infinity last
    int id = static_cast<int>(cls.size());
    cls[v] = id;
  }
  ld.num_classes = static_cast<int>(cls.size());
  for (const auto& [t, mp] : cd.marked) {
    ld.mult[t] = mp.value.infinite ? -mp.ram : mp.ram;
    ld.cls[t] = cls[mp.value];
  }
  return ld;
}

std::vector<DivisorEntry> unmarked_pole_divisor(const CurveData& cd) {
  std::vector<DivisorEntry> out;
  for (const auto& pe : cd.poles)
    if (!pe.marked) out.push_back(DivisorEntry{pe.point, pe.order, false});
  return out;
}

int DiagrammaticReport::total_base_points() const {
  int n = 0;
  for (const auto& pr : points)
    for (const auto& bp : pr.base_points) n += bp.mult;
  return n;
}

DiagrammaticReport check_diagrammatic(const SeriesPresentation& sp) {
  DiagrammaticReport rep;
  rep.points.resize(sp.graph.num_vertices());
  for (VertexId p = 0; p < sp.graph.num_vertices(); ++p) {
    const CurveData& cd = sp.at[p];
    PointReport& pr = rep.points[p];
    std::map<std::string, int> dp;  // unmarked part of D_p
    bool marked_support = false;
    for (const auto& de : cd.divisor) {
      if (de.marked)
        marked_support = true;
      else
        dp[de.point] += de.mult;
    }
    for (const auto& u : unmarked_pole_divisor(cd)) {
      auto it = dp.find(u.point);
      if (it == dp.end() || it->second < u.mult) {
        pr.compatible = false;
        pr.problem = u.point;
        break;
      }
      it->second -= u.mult;
      if (it->second == 0) dp.erase(it);
    }
    if (pr.compatible) {
      for (const auto& [label, mult] : dp)
        pr.base_points.push_back(DivisorEntry{label, mult, false});
      for (const auto& de : cd.divisor)
        if (de.marked) pr.base_points.push_back(DivisorEntry{de.point, de.mult, true});
      pr.refined = !marked_support;
    } else {
      rep.ok = false;
    }
    if (!pr.compatible) rep.ok = false;
  }
  return rep;
}

SeriesPresentation strip_base_points(const SeriesPresentation& sp) {
  SeriesPresentation out = sp;
  for (auto& cd : out.at) cd.divisor = unmarked_pole_divisor(cd);
  return out;
}

namespace {

// Turns the tangent at (e, slot) of `old_g` into an opaque unmarked label for
// a restriction that removed the edge.
std::string detached_label(const MetricGraph& old_g, EdgeId e, int slot) {
  std::string key = old_g.tangent_key(e, slot);
  for (auto& c : key)
    if (c == '@' || c == '#') c = '_';
  return "cut_" + key;
}

}  // namespace

SeriesPresentation restrict_to(const SeriesPresentation& sp,
                               const std::vector<EdgeId>& edges) {
  std::set<EdgeId> keep(edges.begin(), edges.end());
  if (keep.empty()) throw Error("restrict_to: empty edge set");
  std::set<VertexId> verts;
  for (EdgeId e : keep) {
    verts.insert(sp.graph.edge(e).ends[0]);
    verts.insert(sp.graph.edge(e).ends[1]);
  }
  std::vector<std::string> vnames;
  for (VertexId v : verts) vnames.push_back(sp.graph.vertex_name(v));
  std::vector<EdgeSpec> especs;
  for (EdgeId e : keep) {
    const EdgeRec& rec = sp.graph.edge(e);
    especs.push_back(EdgeSpec{rec.name, sp.graph.vertex_name(rec.ends[0]),
                              sp.graph.vertex_name(rec.ends[1]), rec.length});
  }
  SeriesPresentation out;
  out.graph = MetricGraph::build(vnames, especs);  // throws if disconnected

  out.at.resize(out.graph.num_vertices());
  for (VertexId v : verts) {
    VertexId nv = out.graph.vertex_index(sp.graph.vertex_name(v));
    const CurveData& cd = sp.at[v];
    CurveData ncd;
    ncd.genus = cd.genus;
    ncd.f_degree = cd.f_degree;
    ncd.fibers = cd.fibers;

    std::map<TanAt, TanAt> tmap;  // old tangent -> new tangent, kept edges only
    for (auto [e, slot] : sp.graph.incident(v))
      if (keep.count(e)) tmap[{e, slot}] = {out.graph.edge_index(sp.graph.edge(e).name), slot};

    std::map<std::string, std::string> relabel;  // old marked key -> opaque label
    std::map<std::string, int> extra_divisor;
    for (const auto& [t, mp] : cd.marked) {
      auto it = tmap.find(t);
      if (it != tmap.end()) {
        ncd.marked[it->second] = mp;
        continue;
      }
      // Removed direction: the marked point becomes an ordinary point of C_v.
      std::string label = detached_label(sp.graph, t.first, t.second);
      relabel[sp.graph.tangent_key(t.first, t.second)] = label;
      if (mp.value.infinite) {
        extra_divisor[label] += mp.ram;  // boundary divisor correction
      } else if (!ncd.fibers.count(mp.value.finite)) {
        // Keep the non-simple fiber structure visible after detaching.
        std::vector<int> prof;
        for (const auto& [t2, mp2] : cd.marked)
          if (!mp2.value.infinite && mp2.value.finite == mp.value.finite)
            prof.push_back(mp2.ram);
        int s = 0;
        for (int r : prof) s += r;
        for (; s < cd.f_degree; ++s) prof.push_back(1);
        std::sort(prof.begin(), prof.end());
        ncd.fibers[mp.value.finite] = prof;
      }
    }
    for (const auto& pe : cd.poles) {
      auto it = relabel.find(pe.point);
      if (pe.marked && it != relabel.end())
        ncd.poles.push_back(PoleEntry{it->second, pe.order, false});
      else
        ncd.poles.push_back(pe);
    }
    for (const auto& de : cd.divisor) {
      auto it = relabel.find(de.point);
      if (de.marked && it != relabel.end())
        extra_divisor[it->second] += de.mult;
      else
        ncd.divisor.push_back(de);
    }
    for (const auto& [label, mult] : extra_divisor)
      ncd.divisor.push_back(DivisorEntry{label, mult, false});
    std::sort(ncd.divisor.begin(), ncd.divisor.end(),
              [](const DivisorEntry& a, const DivisorEntry& b) { return a.point < b.point; });
    std::sort(ncd.poles.begin(), ncd.poles.end(),
              [](const PoleEntry& a, const PoleEntry& b) { return a.point < b.point; });
    out.at[nv] = std::move(ncd);
  }
  return out;
}

CurveData ordinary_curve_data(const MetricGraph& g, VertexId /*v*/, TanAt downhill,
                              TanAt uphill, int m, const Rat& out_value) {
  CurveData cd;
  cd.genus = 0;
  cd.f_degree = m;
  cd.marked[downhill] = MarkedPoint{FnValue::inf(), m};
  cd.marked[uphill] = MarkedPoint{FnValue::of(out_value), m};
  cd.poles.push_back(PoleEntry{g.tangent_key(downhill.first, downhill.second), m, true});
  return cd;
}

CurveData translate_curve_data(const MetricGraph& old_g,
                               const MetricGraph::Subdivision& sub, VertexId old_v,
                               const CurveData& cd) {
  CurveData ncd = cd;
  ncd.marked.clear();
  ncd.poles.clear();
  std::map<std::string, std::string> keymap;
  for (const auto& [t, mp] : cd.marked) {
    TangentDir old_t{PointRef::at_vertex(old_v), t.first, t.second};
    TangentDir nt = sub.translate_tangent(old_g, old_t);
    ncd.marked[{nt.edge, nt.end}] = mp;
    keymap[old_g.tangent_key(t.first, t.second)] = sub.graph.tangent_key(nt.edge, nt.end);
  }
  for (const auto& pe : cd.poles) {
    PoleEntry np = pe;
    if (pe.marked) np.point = keymap.at(pe.point);
    ncd.poles.push_back(np);
  }
  for (auto& de : ncd.divisor)
    if (de.marked) de.point = keymap.at(de.point);
  return ncd;
}

SeriesPresentation saturate(const MetrizedComplexData& mc,
                            const std::vector<SaturationFill>& fill) {
  std::vector<PointRef> new_points;
  for (const auto& f : fill)
    if (!f.where.is_vertex) new_points.push_back(f.where);
  auto sub = mc.graph.subdivide(new_points);

  SeriesPresentation out;
  out.graph = sub.graph;
  out.at.resize(out.graph.num_vertices());
  std::vector<bool> have(out.graph.num_vertices(), false);

  for (const auto& [v, cd] : mc.curves) {
    VertexId nv = sub.vertex_map[v];
    out.at[nv] = translate_curve_data(mc.graph, sub, v, cd);
    have[nv] = true;
  }
  for (const auto& f : fill) {
    VertexId nv;
    std::map<std::string, TanAt> resolve;  // raw key -> tangent on the new graph
    if (f.where.is_vertex) {
      if (mc.curves.count(f.where.vertex))
        throw Error("saturation fill-in overrides curve data at '" +
                    mc.graph.vertex_name(f.where.vertex) + "'");
      nv = sub.vertex_map[f.where.vertex];
      for (auto [e, slot] : mc.graph.incident(f.where.vertex)) {
        TangentDir nt = sub.translate_tangent(
            mc.graph, TangentDir{PointRef::at_vertex(f.where.vertex), e, slot});
        resolve[mc.graph.tangent_key(e, slot)] = {nt.edge, nt.end};
      }
    } else {
      nv = sub.point_map.at(f.where);
      for (int end = 0; end < 2; ++end) {
        TangentDir nt =
            sub.translate_tangent(mc.graph, TangentDir{f.where, f.where.edge, end});
        resolve[mc.graph.edge(f.where.edge).name + "@" + std::to_string(end)] = {nt.edge,
                                                                                 nt.end};
      }
    }
    if (have[nv]) throw Error("duplicate saturation fill-in at '" + sub.graph.vertex_name(nv) + "'");
    CurveData cd;
    cd.genus = f.curve.genus;
    cd.f_degree = f.curve.f_degree;
    cd.fibers = f.curve.fibers;
    auto lookup = [&](const std::string& key) {
      auto it = resolve.find(key);
      if (it == resolve.end())
        throw Error("saturation fill-in at '" + sub.graph.vertex_name(nv) +
                    "': unknown tangent key '" + key + "'");
      return it->second;
    };
    for (const auto& [key, mp] : f.curve.marked) cd.marked[lookup(key)] = mp;
    for (const auto& pe : f.curve.poles) {
      PoleEntry np = pe;
      if (pe.marked) {
        TanAt t = lookup(pe.point);
        np.point = sub.graph.tangent_key(t.first, t.second);
      }
      cd.poles.push_back(np);
    }
    for (const auto& de : f.curve.divisor) {
      DivisorEntry nd = de;
      if (de.marked) {
        TanAt t = lookup(de.point);
        nd.point = sub.graph.tangent_key(t.first, t.second);
      }
      cd.divisor.push_back(nd);
    }
    out.at[nv] = std::move(cd);
    have[nv] = true;
  }
  for (VertexId v = 0; v < out.graph.num_vertices(); ++v)
    if (!have[v])
      throw Error("saturation leaves vertex '" + out.graph.vertex_name(v) +
                  "' without curve data");

  // Tropical masses declared by the metrized complex must be matched.
  for (const auto& [v, mass] : mc.tropical_mass) {
    VertexId nv = sub.vertex_map[v];
    if (out.at[nv].divisor_degree() != mass)
      throw Error("saturation divisor degree at '" + mc.graph.vertex_name(v) + "' is " +
                  std::to_string(out.at[nv].divisor_degree()) + ", declared " +
                  std::to_string(mass));
  }
  // Points the complex never mentioned carry no tropical mass.
  for (VertexId v = 0; v < mc.graph.num_vertices(); ++v) {
    if (mc.curves.count(v) || mc.tropical_mass.count(v)) continue;
    VertexId nv = sub.vertex_map[v];
    if (out.at[nv].divisor_degree() != 0)
      throw Error("saturation places divisor mass at '" + mc.graph.vertex_name(v) +
                  "', which the metrized complex declares empty");
  }
  for (const auto& f : fill) {
    if (f.where.is_vertex) continue;
    VertexId nv = sub.point_map.at(f.where);
    if (out.at[nv].divisor_degree() != 0)
      throw Error("saturation places divisor mass at interior point '" +
                  sub.graph.vertex_name(nv) + "'");
  }
  return out;
}

}  // namespace lls
