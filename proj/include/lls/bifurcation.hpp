#pragma once

#include "lls/diagram.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lls {

// Identity of a point of the bifurcation tree: the closed superlevel
// component at the given depth, named by its smallest vertex id.
struct TreePointId {
  Rat depth;
  VertexId crep = -1;
  bool operator==(const TreePointId& o) const {
    return depth == o.depth && crep == o.crep;
  }
  bool operator<(const TreePointId& o) const {
    if (depth != o.depth) return depth < o.depth;
    return crep < o.crep;
  }
};

// Identity of a forward tangent of the bifurcation tree: the open superlevel
// component it points into, named by its smallest vertex id.
struct TreeTangentId {
  Rat depth;
  VertexId crep = -1;
  VertexId orep = -1;
  bool operator==(const TreeTangentId& o) const {
    return depth == o.depth && crep == o.crep && orep == o.orep;
  }
  bool operator<(const TreeTangentId& o) const {
    if (depth != o.depth) return depth < o.depth;
    if (crep != o.crep) return crep < o.crep;
    return orep < o.orep;
  }
};

struct EdgeFragment {
  EdgeId edge;
  Rat lo, hi;  // offsets from ends[0]; the closed sub-segment inside the component
};

struct BifNode {
  Rat depth;                 // rho-hat value of the closed component it names
  VertexId rep;              // smallest vertex id in the component
  std::vector<VertexId> vertices;      // component vertex set at its level
  std::vector<EdgeFragment> fragments; // component edge fragments at its level
  int parent = -1;
  Rat parent_len;            // = depth - nodes[parent].depth
  // Forward tangents, one per child branch, sorted by the open-component
  // representative; children[j] is the node at the top of branch j.
  std::vector<VertexId> fwd_orep;
  std::vector<int> children;

  int fwd_count() const { return static_cast<int>(fwd_orep.size()); }
  bool is_leaf() const { return fwd_orep.empty(); }
  bool is_bifurcation() const { return fwd_count() >= 2; }
};

class ProjectionMaps;

struct BifurcationTree {
  std::vector<BifNode> nodes;  // sorted by (depth, rep); root is the unique parent-less node
  int root = -1;
  std::vector<int> bif_nodes;  // indices with >= 2 forward tangents
  std::vector<Rat> rho_hat;    // per vertex; doubles as a same-rho fingerprint

  const BifNode& node(int i) const { return nodes[i]; }
  int node_at(const TreePointId& id) const;  // -1 if the point is not a node
  // Depth of the join of two nodes; d_B(a,b) = depth(a)+depth(b)-2*join_depth.
  Rat join_depth(int a, int b) const;
  Rat distance(int a, int b) const;
  bool same_rho(const BifurcationTree& o) const { return rho_hat == o.rho_hat; }
};

// Per-level connectivity tables plus the canonical projection data.
class ProjectionMaps {
 public:
  // pi_B on model vertices.
  TreePointId point_image(VertexId v) const;
  // Node containing pi_B(v) if it is a node, else -1.
  int node_of_vertex(VertexId v) const;
  // Node at the top of the tree edge containing pi_B(v) (equals
  // node_of_vertex when that is a node).
  int anchor_above(VertexId v) const { return up_anchor_[v]; }

  // Pushforward of a forward tangent (open superlevel component id).
  // Requires slope(t) > 0 at a vertex base.
  TreeTangentId push_forward(const TangentDir& t) const;
  // Pushforward of an arbitrary tangent: forward tangents map to forward
  // tree tangents, backward ones to the unique backward tangent at the
  // image point (absent at the root, which is an error).
  struct Pushed {
    bool forward;
    TreeTangentId fwd;   // when forward
    TreePointId at;      // the image point (backward tangents are named by it)
  };
  Pushed pushforward(const TangentDir& t) const;
  // All forward tangents at v with their pushforwards, sorted by tangent.
  std::vector<std::pair<TangentDir, TreeTangentId>> forward_tangents(VertexId v) const;

  // Representative of the closed (resp. open) superlevel component of a
  // vertex at an arbitrary query depth <= (resp. <) its own depth.
  VertexId closed_rep_at(const Rat& depth, VertexId v) const;
  VertexId open_rep_at(const Rat& depth, VertexId v) const;

  const std::vector<Rat>& levels() const { return levels_; }

 private:
  friend std::pair<BifurcationTree, ProjectionMaps> build_biftree(
      const MetricGraph& g, const RhoSolution& rho);

  MetricGraph graph_;
  GlobalDiagram diagram_;
  std::vector<Rat> rho_hat_;
  std::vector<Rat> levels_;  // distinct rho-hat values, ascending
  // Per level: component representative per vertex (-1 when absent).
  std::vector<std::vector<VertexId>> closed_rep_;  // rho >= level
  std::vector<std::vector<VertexId>> open_rep_;    // rho >  level
  std::vector<int> up_anchor_;      // per vertex
  std::vector<bool> at_node_;       // per vertex: is pi_B(v) a node?
  std::map<TreePointId, int> node_index_;

  int level_index(const Rat& depth) const;
};

std::pair<BifurcationTree, ProjectionMaps> build_biftree(const MetricGraph& g,
                                                         const RhoSolution& rho);

// A choice of set-partition of the forward tangents at every bifurcation
// node, stored as restricted growth strings over bt.bif_nodes in order.
struct BifPartitionSystem {
  std::vector<std::vector<int>> rgs;  // rgs[i][j] = block of tangent j at bif node i

  bool operator==(const BifPartitionSystem& o) const { return rgs == o.rgs; }
  int block_of(int bif_idx, int tangent_idx) const { return rgs[bif_idx][tangent_idx]; }
};

// Streams the Cartesian product of all set-partitions of each bifurcation
// node's forward tangents, in restricted-growth order (last node fastest).
class SystemEnumerator {
 public:
  explicit SystemEnumerator(const BifurcationTree& bt);
  std::optional<BifPartitionSystem> next();
  static long long count(const BifurcationTree& bt);  // product of Bell numbers

 private:
  std::vector<int> sizes_;
  std::vector<std::vector<std::vector<int>>> all_;  // per node: all RGS
  std::vector<size_t> pos_;
  bool done_ = false;
  bool first_ = true;
};

std::vector<std::vector<int>> all_partitions_rgs(int n);  // Bell(n) strings

struct TNode {
  Rat depth;
  int parent = -1;
  Rat parent_len;
  int src_bnode = -1;  // bifurcation-tree node this tnode is the image of, -1 for split nodes
  std::vector<int> children;
};

// Location of a point on the partition tree: a node or the interior of the
// edge below `tedge` (tedge = child-side tnode id).
struct TPoint {
  bool is_node = false;
  int tnode = -1;  // when is_node
  int tedge = -1;  // when interior: the upper tnode of the containing edge
  Rat depth;
  bool operator==(const TPoint& o) const {
    return is_node == o.is_node && depth == o.depth &&
           (is_node ? tnode == o.tnode : tedge == o.tedge);
  }
  bool operator<(const TPoint& o) const {
    if (depth != o.depth) return depth < o.depth;
    if (is_node != o.is_node) return is_node;
    return is_node ? tnode < o.tnode : tedge < o.tedge;
  }
};

struct PartitionTree {
  enum class Kind { DeltaGlued, Segment };
  Kind kind = Kind::DeltaGlued;
  BifPartitionSystem system;  // DeltaGlued only
  Rat delta;                  // DeltaGlued only
  std::vector<TNode> tnodes;  // troot is index 0
  std::vector<Rat> rho_hat;   // fingerprint of the underlying rho
  // Per bifurcation-tree node: its image tnode.
  std::vector<int> node_image;
  // Per bifurcation-tree node: T-edge (child tnode id) of each forward tangent.
  std::vector<std::vector<int>> tangent_image;

  bool same_rho(const BifurcationTree& bt) const { return rho_hat == bt.rho_hat; }

  // Image of a point of the bifurcation tree given on the edge below
  // `anchor` (or the node itself when depth matches).
  TPoint locate(int anchor_node, const Rat& depth, const BifurcationTree& bt) const;
  // T-edge the forward tangent at (anchor/depth) points into.
  int push_tangent(int anchor_node, const Rat& depth, VertexId orep,
                   const BifurcationTree& bt, const ProjectionMaps& pm) const;
  // Forward T-edges at a T-point, sorted; backward exists iff depth > 0.
  std::vector<int> forward_edges_at(const TPoint& p) const;
};

// Glues length-delta initial segments of same-block branches at every
// bifurcation node. Requires 0 < delta < the minimal gap between distinct
// exceptional values.
PartitionTree delta_glue(const BifurcationTree& bt, const BifPartitionSystem& sys,
                         const Rat& delta, const ExceptionalSet& exc);

PartitionTree segment_tree(const BifurcationTree& bt);

// Reads off, per bifurcation node, which forward tangents the canonical
// surjection Theta identifies. Throws if pt was built over a different rho.
BifPartitionSystem phi_lambda(const BifurcationTree& bt, const PartitionTree& pt);

// Partial order on partition trees: pt1 <= pt2 iff the partition of each
// depth level induced by pt1 refines the one induced by pt2.
bool refinement_leq(const BifurcationTree& bt, const PartitionTree& pt1,
                    const PartitionTree& pt2);

}  // namespace lls
