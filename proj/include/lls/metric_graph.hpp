#pragma once

#include "lls/rational.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lls {

// Vertices and edges are referred to by dense indices internally; the
// user-facing string names are kept for diagnostics and serialization.
using VertexId = int;
using EdgeId = int;

struct EdgeRec {
  std::string name;
  VertexId ends[2];  // equal for loops
  Rat length;        // > 0
};

// A point of the metric graph: a vertex, or a point strictly inside an edge
// (0 < offset < length, measured from ends[0]). Offset-0/offset-length forms
// are rejected so every point has one canonical encoding.
struct PointRef {
  bool is_vertex = true;
  VertexId vertex = -1;
  EdgeId edge = -1;
  Rat offset;

  static PointRef at_vertex(VertexId v) {
    PointRef p;
    p.is_vertex = true;
    p.vertex = v;
    return p;
  }
  static PointRef inside(EdgeId e, Rat off) {
    PointRef p;
    p.is_vertex = false;
    p.edge = e;
    p.offset = std::move(off);
    return p;
  }
  bool operator==(const PointRef& o) const {
    if (is_vertex != o.is_vertex) return false;
    return is_vertex ? vertex == o.vertex : (edge == o.edge && offset == o.offset);
  }
  bool operator<(const PointRef& o) const {
    if (is_vertex != o.is_vertex) return is_vertex;
    if (is_vertex) return vertex < o.vertex;
    if (edge != o.edge) return edge < o.edge;
    return offset < o.offset;
  }
};

// A tangent direction. For a vertex-based tangent, `end` is the endpoint
// slot the tangent is attached at (so a loop contributes two distinct
// tangents, slots 0 and 1, at the same vertex). For an interior point,
// `end` is the endpoint slot the tangent points toward.
struct TangentDir {
  PointRef base;
  EdgeId edge = -1;
  int end = 0;

  bool operator==(const TangentDir& o) const {
    return base == o.base && edge == o.edge && end == o.end;
  }
  bool operator<(const TangentDir& o) const {
    if (!(base == o.base)) return base < o.base;
    if (edge != o.edge) return edge < o.edge;
    return end < o.end;
  }
};

struct OrientedEdge {
  EdgeId edge;
  bool forward;  // traversed ends[0] -> ends[1]?
};
using Cycle = std::vector<OrientedEdge>;

struct EdgeSpec {
  std::string name;
  std::string from, to;
  Rat length;
};

class MetricGraph {
 public:
  // Throws lls::Error on dangling ends, nonpositive lengths, duplicate
  // names, or a disconnected result.
  static MetricGraph build(const std::vector<std::string>& vertex_names,
                           const std::vector<EdgeSpec>& edges);

  int num_vertices() const { return static_cast<int>(vertex_names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
  const EdgeRec& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<EdgeRec>& edges() const { return edges_; }
  VertexId vertex_index(const std::string& name) const;  // throws if unknown
  EdgeId edge_index(const std::string& name) const;
  bool has_vertex(const std::string& name) const;

  // Edge ends incident to v, as (edge, slot) pairs sorted by (edge, slot).
  const std::vector<std::pair<EdgeId, int>>& incident(VertexId v) const {
    return incident_[v];
  }
  int valence(VertexId v) const { return static_cast<int>(incident_[v].size()); }

  int genus() const;  // #edges - #vertices + 1
  Rat total_length() const;

  std::vector<TangentDir> tangents_at(const PointRef& p) const;

  // Fundamental cycles of the spanning tree picked by smallest edge id.
  // One cycle per non-tree edge, ordered by that edge's id; each starts with
  // the non-tree edge traversed forward.
  std::vector<Cycle> cycle_basis() const;

  // PL interpolation of per-vertex values at p (edge slopes are the implied
  // constants).
  Rat eval_pl(const std::vector<Rat>& vertex_values, const PointRef& p) const;

  void check_point(const PointRef& p) const;  // throws on invalid refs

  struct Subdivision;

  // Returns a graph in which every requested point is a vertex. Duplicate
  // interior points collapse; total per-edge length and the genus are
  // preserved exactly.
  Subdivision subdivide(const std::vector<PointRef>& pts) const;

  // Canonical tangent keys: "edge@vertex" (plus "#slot" for loops).
  std::string tangent_key(EdgeId e, int slot) const;
  // Resolves a key to a (edge, slot) pair at the stated vertex.
  std::pair<EdgeId, int> parse_tangent_key(const std::string& key) const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<EdgeRec> edges_;
  std::map<std::string, VertexId> vertex_idx_;
  std::map<std::string, EdgeId> edge_idx_;
  std::vector<std::vector<std::pair<EdgeId, int>>> incident_;
};

struct MetricGraph::Subdivision {
  MetricGraph graph;
  // Old vertex id -> new vertex id (vertices are never removed).
  std::vector<VertexId> vertex_map;
  // Old edge id -> new edge ids ordered from old ends[0] to ends[1].
  std::vector<std::vector<EdgeId>> edge_pieces;
  // New vertices created for requested interior points.
  std::map<PointRef, VertexId> point_map;

  PointRef translate_point(const MetricGraph& old, const PointRef& p) const;
  TangentDir translate_tangent(const MetricGraph& old, const TangentDir& t) const;
};

}  // namespace lls
