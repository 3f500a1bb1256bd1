#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lls::testing {

std::string instance_path(const std::string& name) {
  return std::string(LLS_INSTANCE_DIR) + "/" + name;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceDocument load_instance(const std::string& name) {
  return parse_instance(read_file(instance_path(name)));
}

SeriesPresentation ebif() { return *load_instance("ebif.json").series; }

SeriesPresentation lattice(const std::string& variant) {
  return *load_instance("lattice_" + variant + ".json").series;
}

SeriesPresentation nonsolvable_cycle() {
  return *load_instance("nonsolvable_cycle.json").series;
}

namespace {

// Builds consistent curve data for a vertex once the incident multiplicities
// and the out-tangent values are fixed. Incoming tangents (negative slope)
// become marked poles; the degree is padded with simple unmarked poles until
// the pole sum, the fiber loads, and the Riemann-Hurwitz bound all fit.
CurveData make_curve(const MetricGraph& g, VertexId v,
                     const std::map<TanAt, int>& slope,
                     const std::map<TanAt, Rat>& out_value, int genus,
                     bool base_point) {
  (void)v;
  CurveData cd;
  cd.genus = genus;
  int in_sum = 0;
  std::map<Rat, int> load;
  for (const auto& [t, m] : slope) {
    if (m < 0) {
      cd.marked[t] = MarkedPoint{FnValue::inf(), -m};
      cd.poles.push_back(PoleEntry{g.tangent_key(t.first, t.second), -m, true});
      in_sum += -m;
    } else {
      const Rat& val = out_value.at(t);
      cd.marked[t] = MarkedPoint{FnValue::of(val), m};
      load[val] += m;
    }
  }
  int d = std::max(in_sum, 1);
  for (const auto& [val, l] : load) d = std::max(d, l);
  int branching = 0;
  for (const auto& [t, mp] : cd.marked) branching += mp.ram - 1;
  while (2 * cd.genus - 2 + 2 * d < branching) ++d;
  cd.f_degree = d;
  for (int k = 0; k < d - in_sum; ++k) {
    std::string label = "u" + std::to_string(k);
    cd.poles.push_back(PoleEntry{label, 1, false});
    cd.divisor.push_back(DivisorEntry{label, 1, false});
  }
  if (base_point) cd.divisor.push_back(DivisorEntry{"bp", 1, false});
  return cd;
}

Rat pick_length(std::mt19937_64& rng) {
  static const char* pool[] = {"1", "1/2", "2", "1/3", "3/2"};
  return *rat_parse(pool[rng() % 5]);
}

}  // namespace

SeriesPresentation random_tree_instance(std::mt19937_64& rng, int max_edges,
                                        int max_degree) {
  int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_edges));
  std::vector<std::string> vnames;
  for (int i = 0; i < n; ++i) vnames.push_back("t" + std::to_string(i));
  std::vector<EdgeSpec> especs;
  std::vector<int> valence(n, 0);
  for (int i = 1; i < n; ++i) {
    int parent = static_cast<int>(rng() % static_cast<unsigned>(i));
    for (int tries = 0; valence[parent] >= 4 && tries < 8; ++tries)
      parent = static_cast<int>(rng() % static_cast<unsigned>(i));
    valence[parent]++;
    valence[i]++;
    especs.push_back(
        EdgeSpec{"te" + std::to_string(i), vnames[parent], vnames[i], pick_length(rng)});
  }
  MetricGraph g = MetricGraph::build(vnames, especs);

  // Signed multiplicity per edge (in the ends[0]->ends[1] direction);
  // multiplicity 2 only where both endpoint valences stay within budget.
  std::vector<int> mult(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    int m = 1;
    if (g.valence(g.edge(e).ends[0]) <= 2 && g.valence(g.edge(e).ends[1]) <= 2 &&
        rng() % 3 == 0)
      m = 2;
    mult[e] = rng() % 2 == 0 ? m : -m;
  }

  SeriesPresentation sp;
  sp.graph = g;
  sp.at.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    std::map<TanAt, int> slope;
    std::map<TanAt, Rat> out_value;
    for (auto [e, s] : g.incident(v)) {
      int m = s == 0 ? mult[e] : -mult[e];
      slope[{e, s}] = m;
      if (m > 0) out_value[{e, s}] = Rat(static_cast<int>(rng() % 3));
    }
    int genus = rng() % 5 == 0 ? 1 : 0;
    sp.at[v] = make_curve(g, v, slope, out_value, genus, rng() % 4 == 0);
    if (sp.at[v].f_degree > max_degree)
      sp.at[v] = make_curve(g, v, slope, out_value, 0, false);
  }
  return sp;
}

SeriesPresentation loop_instance(int k, const std::vector<bool>& closing) {
  // Cycle with 2k vertices alternating between value 0 (minima, even index)
  // and value 1 (maxima, odd index); all multiplicities 1.
  int n = 2 * k;
  std::vector<std::string> vnames;
  for (int i = 0; i < n; ++i) vnames.push_back("c" + std::to_string(i));
  std::vector<EdgeSpec> especs;
  for (int i = 0; i < n; ++i)
    especs.push_back(
        EdgeSpec{"le" + std::to_string(i), vnames[i], vnames[(i + 1) % n], Rat(1)});
  MetricGraph g = MetricGraph::build(vnames, especs);
  SeriesPresentation sp;
  sp.graph = g;
  sp.at.resize(n);
  for (VertexId v = 0; v < n; ++v) {
    std::map<TanAt, int> slope;
    std::map<TanAt, Rat> out_value;
    bool is_min = v % 2 == 0;
    int idx = 0;
    for (auto [e, s] : g.incident(v)) {
      int m = is_min ? 1 : -1;
      slope[{e, s}] = m;
      if (m > 0) {
        bool close = closing[v / 2];
        out_value[{e, s}] = close ? Rat(0) : Rat(idx);
        ++idx;
      }
    }
    sp.at[v] = make_curve(g, v, slope, out_value, 0, false);
  }
  return sp;
}

SeriesPresentation random_loops_instance(std::mt19937_64& rng, int max_loops) {
  int nloops = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_loops));
  std::vector<std::string> vnames;
  std::vector<EdgeSpec> especs;
  struct VInfo {
    Rat value;
    bool loop_min = false;
    bool closing = false;
    int loop = -1;
  };
  std::map<std::string, VInfo> info;
  std::map<std::string, int> edge_mult;
  std::vector<std::string> anchors;  // one vertex per loop for bridging

  int eseq = 0;
  for (int j = 0; j < nloops; ++j) {
    int k = 1 + static_cast<int>(rng() % 3);  // minima per loop
    int m = 2 * k;
    Rat base = Rat(10 * j);
    std::vector<std::string> ring;
    for (int i = 0; i < m; ++i) {
      std::string name = "g" + std::to_string(j) + "v" + std::to_string(i);
      ring.push_back(name);
      VInfo vi;
      vi.loop = j;
      if (i % 2 == 0) {
        bool raised = k >= 2 && rng() % 4 == 0;  // a non-global local minimum
        vi.value = raised ? base + Rat(1, 2) : base;
        vi.loop_min = true;
        vi.closing = rng() % 2 == 0;
      } else {
        vi.value = base + 1 + static_cast<int>(rng() % 2);
      }
      info[name] = vi;
      vnames.push_back(name);
    }
    for (int i = 0; i < m; ++i) {
      const std::string& a = ring[i];
      const std::string& b = ring[(i + 1) % m];
      Rat diff = info[a].value > info[b].value ? info[a].value - info[b].value
                                               : info[b].value - info[a].value;
      int mu = 1 + static_cast<int>(rng() % 2);
      std::string name = "ge" + std::to_string(eseq++);
      edge_mult[name] = mu;
      especs.push_back(EdgeSpec{name, a, b, diff / mu});
    }
    anchors.push_back(ring[rng() % m]);
    if (j > 0) {
      const std::string& a = anchors[j - 1];
      const std::string& b = anchors[j];
      Rat diff = info[b].value - info[a].value;
      std::string name = "bridge" + std::to_string(j);
      edge_mult[name] = 1;
      especs.push_back(EdgeSpec{name, a, b, diff});
    }
  }
  MetricGraph g = MetricGraph::build(vnames, especs);

  SeriesPresentation sp;
  sp.graph = g;
  sp.at.resize(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const VInfo& vi = info.at(g.vertex_name(v));
    std::map<TanAt, int> slope;
    std::map<TanAt, Rat> out_value;
    int fresh = 10;
    int loop_out = 1;
    for (auto [e, s] : g.incident(v)) {
      VertexId u = g.edge(e).ends[1 - s];
      const VInfo& ui = info.at(g.vertex_name(u));
      Rat diff = ui.value - vi.value;
      int mu = edge_mult.at(g.edge(e).name);
      int m = diff > 0 ? mu : -mu;
      slope[{e, s}] = m;
      if (m > 0) {
        bool is_loop_edge = g.edge(e).name[0] == 'g' && ui.loop == vi.loop;
        if (vi.loop_min && vi.value == Rat(10 * vi.loop) && is_loop_edge) {
          out_value[{e, s}] = vi.closing ? Rat(0) : Rat(loop_out);
          ++loop_out;
        } else {
          out_value[{e, s}] = Rat(fresh++);
        }
      }
    }
    sp.at[v] = make_curve(g, v, slope, out_value, rng() % 6 == 0 ? 1 : 0, rng() % 5 == 0);
  }
  return sp;
}

}  // namespace lls::testing
