#pragma once

#include "lls/metric_graph.hpp"
#include "lls/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lls {

// Half-edge handle local to one vertex: (edge id, endpoint slot).
using TanAt = std::pair<EdgeId, int>;

struct MarkedPoint {
  FnValue value;
  int ram = 1;  // ramification index of f at the marked point, >= 1
};

struct PoleEntry {
  std::string point;  // tangent key if marked, opaque label otherwise
  int order = 1;
  bool marked = false;
};

struct DivisorEntry {
  std::string point;
  int mult = 1;
  bool marked = false;
};

// Finite presentation of the pair (C_p, H_p = <1, f_p>, D_p) at one
// distinguished point: curve genus, the value/ramification of f_p at every
// marked point, the pole divisor of f_p, the local divisor D_p, and any
// declared fiber structure over finite values (undeclared fibers default to
// all-simple points).
struct CurveData {
  int genus = 0;
  int f_degree = 1;
  std::map<TanAt, MarkedPoint> marked;          // one entry per tangent at p
  std::vector<PoleEntry> poles;                 // orders sum to f_degree
  std::vector<DivisorEntry> divisor;            // D_p
  std::map<Rat, std::vector<int>> fibers;       // finite value -> rams (sorted)

  int divisor_degree() const;
};

struct Violation {
  std::string where;
  std::string what;
};

// The series presentation: every graph vertex is a distinguished point and
// carries CurveData; points in edge interiors follow the implicit rule
// (projective line, two marked points, generic function of the edge degree).
struct SeriesPresentation {
  MetricGraph graph;
  std::vector<CurveData> at;           // indexed by VertexId
  std::optional<int> declared_genus;   // total genus of the complex, if stated

  int series_degree() const;           // sum of deg D_p
  int total_genus() const;             // g(Gamma) + sum g(C_p)
};

std::vector<Violation> validate_curve_data(const MetricGraph& g, VertexId p,
                                           const CurveData& cd);
// Structural validation of the whole presentation (per-point data, marked
// tables covering all tangents, declared genus).
std::vector<Violation> validate_presentation(const SeriesPresentation& sp);

// Local diagram at p derived from H_p: signed tangent multiplicities
// (-ram at poles, +ram otherwise) and the value-level-set partition of the
// tangents. Class ids are assigned in sorted value order, infinity last, so
// the In class (when nonempty) always has the largest id.
struct LocalDiagram {
  std::map<TanAt, int> mult;
  std::map<TanAt, int> cls;
  int num_classes = 0;

  bool equivalent(const TanAt& a, const TanAt& b) const {
    return cls.at(a) == cls.at(b);
  }
};

LocalDiagram local_diagram(const MetricGraph& g, VertexId p, const CurveData& cd);

struct PointReport {
  bool compatible = true;
  std::vector<DivisorEntry> base_points;  // D_p minus the unmarked-pole divisor
  bool refined = true;
  std::string problem;  // set when incompatible: the deficient point label
};

struct DiagrammaticReport {
  bool ok = true;
  std::vector<PointReport> points;  // indexed by VertexId
  int total_base_points() const;
};

// Pointwise compatibility of D_p with H_p; the edge-continuity half of
// "diagrammatic" lives in diagram_engine::assemble.
DiagrammaticReport check_diagrammatic(const SeriesPresentation& sp);

// Unmarked-pole divisor of f_p (the part of div^-(f_p) not hit by red_p).
std::vector<DivisorEntry> unmarked_pole_divisor(const CurveData& cd);

// Replaces every D_p by the unmarked-pole divisor of f_p. Smoothability is
// invariant under this operation.
SeriesPresentation strip_base_points(const SeriesPresentation& sp);

// Restriction to a connected closed subgraph spanned by the given edges.
// At boundary points the local divisor absorbs the poles of the removed
// incoming directions, which keeps the restriction compatible.
SeriesPresentation restrict_to(const SeriesPresentation& sp,
                               const std::vector<EdgeId>& edges);

// CurveData for an implicit ordinary point on an edge of multiplicity m:
// P^1, an order-m marked pole on the downhill side, value `out_value` with
// ramification m on the uphill side.
CurveData ordinary_curve_data(const MetricGraph& g, VertexId v, TanAt downhill,
                              TanAt uphill, int m, const Rat& out_value);

// Rewrites curve data at an original vertex against a subdivided graph
// (tangent keys move to the surviving edge pieces).
CurveData translate_curve_data(const MetricGraph& old_g,
                               const MetricGraph::Subdivision& sub, VertexId old_v,
                               const CurveData& cd);

// Curve data with unresolved marked-point keys, used for saturation
// fill-ins whose tangents live on a graph that only exists after
// subdivision. Keys at a vertex are ordinary tangent keys of the base
// graph; keys at an interior fill point are "<edge>@0" / "<edge>@1",
// naming the tangent that points toward that endpoint slot.
struct RawCurveData {
  int genus = 0;
  int f_degree = 1;
  std::vector<std::pair<std::string, MarkedPoint>> marked;
  std::vector<PoleEntry> poles;
  std::vector<DivisorEntry> divisor;
  std::map<Rat, std::vector<int>> fibers;
};

// Data for building a presentation out of metrized-complex data plus a
// candidate saturation (see smoothing::saturation_check).
struct SaturationFill {
  PointRef where;  // existing vertex without data, or an interior point
  RawCurveData curve;
};

struct MetrizedComplexData {
  MetricGraph graph;
  std::map<VertexId, CurveData> curves;   // the A-set
  std::map<VertexId, int> tropical_mass;  // required deg D_p at points off A
};

SeriesPresentation saturate(const MetrizedComplexData& mc,
                            const std::vector<SaturationFill>& fill);

}  // namespace lls
