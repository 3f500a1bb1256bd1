#pragma once

#include "lls/bifurcation.hpp"
#include "lls/linear.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lls {

struct NotDiagrammatic {
  // Pointwise incompatibility (vertex + deficient point label) or an edge
  // multiplicity conflict; exactly one is set.
  std::optional<std::pair<VertexId, std::string>> incompatible;
  std::optional<EdgeConflict> conflict;
};

struct NotSolvable {
  CycleObstruction obstruction;
};

struct IgcInfeasible {
  std::vector<VertexId> forced_zero;      // points with beta forced to 0
  std::vector<std::string> constraints;   // readable equations, for diagnosis
};

// Everything the compatibility algorithm produced for a positive answer:
// the (alpha, beta) table, the induced partition system, the glued tree and
// the tangent values the admissible collection takes.
struct IGCWitness {
  std::vector<VertexId> exceptional;            // sorted
  std::vector<std::pair<Rat, Rat>> alpha_beta;  // parallel to `exceptional`
  std::map<TreeTangentId, Rat> eta;             // constrained tree tangents
  BifPartitionSystem system;
  Rat delta;
  PartitionTree tree;
  std::vector<std::vector<Rat>> block_values;   // per bif node, per block

  std::optional<std::pair<Rat, Rat>> ab_of(VertexId v) const;
};

struct Verdict {
  enum class Kind { NotDiagrammatic, NotSolvable, IgcInfeasible, Smoothable };
  Kind kind;
  std::optional<NotDiagrammatic> not_diagrammatic;
  std::optional<NotSolvable> not_solvable;
  std::optional<IgcInfeasible> igc_infeasible;
  std::shared_ptr<IGCWitness> witness;  // Smoothable only

  bool smoothable() const { return kind == Kind::Smoothable; }
  std::string kind_str() const;
};

// Shared pipeline state up to rho (exposed so the CLI can reuse pieces).
struct PipelineData {
  DiagrammaticReport diag;
  std::optional<GlobalDiagram> gd;
  std::optional<RhoSolution> rho;
  std::optional<ExceptionalSet> exc;
  std::optional<BifurcationTree> bt;
  std::optional<ProjectionMaps> pm;
  std::vector<LocalDiagram> local;  // per vertex, once diagrammatic
};

// Runs check_diagrammatic -> assemble -> check_solvable -> solve_rho ->
// build_biftree. The verdict is set when an obstruction stops the pipeline
// early; otherwise everything in PipelineData is populated and the
// compatibility stage still has to run.
std::pair<std::optional<Verdict>, PipelineData> run_pipeline(const SeriesPresentation& sp);

// Level-II (same block => locally equivalent) and Level-III (iff) filters,
// checked at every distinguished point over all pairs of forward tangents.
bool level_filter(const BifPartitionSystem& sys, int level,
                  const std::vector<LocalDiagram>& local,
                  const SeriesPresentation& sp, const RhoSolution& rho,
                  const BifurcationTree& bt, const ProjectionMaps& pm);

// Algorithm: one variable pair (alpha_p, beta_p) per exceptional point, one
// linear equation per pair of forward tangents with equal projection and
// equal pushforward, solved exactly; feasibility additionally demands every
// beta_p nonzero on the solution space.
std::variant<IGCWitness, IgcInfeasible> igc_feasible(const SeriesPresentation& sp,
                                                     const RhoSolution& rho,
                                                     const BifurcationTree& bt,
                                                     const ProjectionMaps& pm,
                                                     const ExceptionalSet& exc);

// Level-IV membership of one partition system: within-block equalities,
// cross-block disequalities and nonzero betas, decided on the exact solution
// subspace. The system must already pass Level-III.
bool level4_membership(const BifPartitionSystem& sys, const SeriesPresentation& sp,
                       const RhoSolution& rho, const BifurcationTree& bt,
                       const ProjectionMaps& pm, const ExceptionalSet& exc);

// The full decision. A SMOOTHABLE verdict also cross-checks that the induced
// system passes level4_membership.
Verdict smoothable(const SeriesPresentation& sp);

// ---- Witness morphism -----------------------------------------------------

struct TImagePoint {
  bool is_node = false;
  int tnode = -1;  // when is_node
  int tedge = -1;  // when interior of the edge below tnode `tedge`
  Rat depth;
};

struct RetractEntry {
  VertexId gamma_vertex;
  std::string point_label;  // point of C_p the mass retracts to
  int mult;
};

// The modification Gamma^mod together with the harmonic map to the witness
// tree: per-vertex image points and local degrees, per-edge image edges and
// expansion factors, and the pullback bookkeeping of the degree-one divisor.
struct HarmonicMorphismData {
  PartitionTree tree;
  std::map<int, Rat> xi;  // T-edge -> tangent value at its parent node

  MetricGraph mod;
  std::vector<int> orig_vertex;  // mod vertex -> Gamma vertex or -1
  std::vector<int> orig_edge;    // mod edge -> Gamma edge or -1 (branch edges)
  std::vector<TImagePoint> vertex_image;
  std::vector<int> edge_image;   // mod edge -> T-edge (child tnode id)
  std::vector<int> expansion;    // per mod edge, >= 1
  std::vector<int> local_degree; // per mod vertex

  std::vector<RetractEntry> retract;  // retract onto Gamma of the pullback of (u')
  int branch_count = 0;
  int total_degree = 0;  // degree of the morphism
};

// Builds the modification and the pseudo-harmonic-to-harmonic repair: at
// every point, each tree tangent's fiber is completed by attaching shrunk
// glued copies of the corresponding subtree, per declared or default fiber
// profiles. Operates on the base-point-free part of sp.
HarmonicMorphismData build_witness_morphism(const SeriesPresentation& sp,
                                            const IGCWitness& witness);

// Checks (a) balancing and local-degree constancy at every point, (b)
// expansion = |multiplicity| on original tangents, (c) the pullback of (u')
// retracts onto Gamma to the divisor of sp (minus its base points).
std::vector<Violation> verify_harmonic(const HarmonicMorphismData& hm,
                                       const SeriesPresentation& sp);

// ---- Special-case criteria --------------------------------------------------

// Compact type: underlying graph must be a tree; smoothable iff diagrammatic.
bool criterion_compact(const SeriesPresentation& sp);

// Splits sp at a cut vertex into the two closed sides (component containing
// the smallest vertex id vs the rest), with the boundary divisor correction.
std::pair<SeriesPresentation, SeriesPresentation> glue_decompose(
    const SeriesPresentation& sp, VertexId cut);

// Separate-loops graphs: every biconnected component is a bridge or a cycle.
// Returns the loops (edge sets) or nothing if the shape is wrong.
std::optional<std::vector<std::vector<EdgeId>>> separate_loops(const MetricGraph& g);

struct LoopReport {
  std::vector<EdgeId> loop;
  std::vector<VertexId> min_points;      // argmin of rho restricted to the loop
  std::vector<VertexId> closing_points;  // subset with locally equivalent forward pair
  bool pass;
};

// Full combinatorial criterion: per loop, a singleton minimum must be
// closing; otherwise the closing points must be absent or of the same parity
// as the minimum set. Requires a solvable presentation.
bool criterion_loops(const SeriesPresentation& sp, std::vector<LoopReport>* out = nullptr);

// ---- Harris-Mumford complexes ----------------------------------------------

struct HMPairSpec {
  std::string pedal;
  FnValue value[2];
  int ram[2] = {1, 1};
  Rat half_length[2];  // lengths of the two edges joining the pair to its eye
};

struct HMEyeSpec {
  std::string name;
  int genus = 0;
  int f_degree = 1;
  std::vector<HMPairSpec> pairs;
  // Type II: marked point toward the central segment.
  std::optional<MarkedPoint> central;
};

struct HarrisMumfordSpec {
  int type = 1;  // 1 or 2
  std::vector<HMEyeSpec> eyes;
  Rat segment_length;  // type II
};

struct HarrisMumfordResult {
  bool conditions_ok = false;
  std::string failure;  // offending pedal or degree mismatch
  std::optional<SeriesPresentation> sp;
  std::optional<Verdict> verdict;
};

// Validates the pairing/degree conditions, constructs the regulated series
// per the constructive direction, and runs the pipeline on it.
HarrisMumfordResult criterion_harris_mumford(const HarrisMumfordSpec& spec);

// ---- Saturations of metrized complexes --------------------------------------

struct SaturationOutcome {
  std::string name;
  std::optional<Verdict> verdict;
  std::vector<std::string> forced_zero_names;  // resolved against the saturation
  std::string error;                           // inconsistent fill-in
};

struct SaturationReport {
  std::vector<SaturationOutcome> candidates;
  bool any_smoothable = false;
};

struct SaturationCandidate {
  std::string name;
  std::vector<SaturationFill> fill;
};

SaturationReport saturation_check(const MetrizedComplexData& mc,
                                  const std::vector<SaturationCandidate>& candidates);

}  // namespace lls
