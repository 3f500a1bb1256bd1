#pragma once

#include "lls/series_model.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace lls {

// One signed multiplicity per edge, read in the intrinsic ends[0]->ends[1]
// direction; the continuity property makes per-edge storage lossless.
struct GlobalDiagram {
  std::vector<int> mult;  // indexed by EdgeId, never 0

  // Outgoing slope of rho along a tangent direction.
  int slope(const TangentDir& t) const {
    int m = mult[t.edge];
    bool toward_end1 = t.base.is_vertex ? (t.end == 0) : (t.end == 1);
    return toward_end1 ? m : -m;
  }
};

struct EdgeConflict {
  EdgeId edge;
  int mult_at_end0;  // multiplicity demanded by the local diagram at ends[0]
  int mult_at_end1;
};

std::variant<GlobalDiagram, EdgeConflict> assemble(const SeriesPresentation& sp);

struct CycleObstruction {
  Cycle cycle;
  Rat integral;  // nonzero; orientation normalized so the integral is > 0
};

// Exactness test: integrates the 1-form over every fundamental cycle.
std::optional<CycleObstruction> check_solvable(const MetricGraph& g,
                                               const GlobalDiagram& gd);

// Integral of the form along an explicit cycle (exposed for certificates
// and basis-independence tests).
Rat cycle_integral(const MetricGraph& g, const GlobalDiagram& gd, const Cycle& c);

struct RhoSolution {
  std::vector<Rat> value;  // per vertex, normalized so min = 0 (rho-hat)
  GlobalDiagram diagram;

  Rat at(const MetricGraph& g, const PointRef& p) const;
};

// Integrates along the deterministic spanning tree from the smallest-id
// vertex, then shifts so the minimum is zero. Throws if the diagram is not
// solvable (contract violation).
RhoSolution solve_rho(const MetricGraph& g, const GlobalDiagram& gd);

struct ExceptionalSet {
  std::vector<bool> exceptional;  // per vertex
  std::vector<Rat> values;        // sorted distinct rho-hat values at exceptional points

  // Minimal positive gap between distinct exceptional values (0 if fewer
  // than two values).
  Rat min_gap() const;
};

// A vertex is ordinary iff it has valence two, slopes of equal magnitude and
// opposite signs, and genus zero; interior points are ordinary by construction.
ExceptionalSet exceptional_points(const SeriesPresentation& sp, const RhoSolution& rho);

}  // namespace lls
