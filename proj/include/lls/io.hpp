#pragma once

#include "lls/smoothing.hpp"

#include <optional>
#include <string>

// nlohmann single-header from vendor/.
#include "json.hpp"

namespace lls {

using Json = nlohmann::ordered_json;

// One parsed instance document. `series` is present whenever every vertex
// carries curve data; metrized-complex documents (partial data plus
// saturation candidates) populate `mc` instead.
struct InstanceDocument {
  std::optional<SeriesPresentation> series;
  std::optional<MetrizedComplexData> mc;
  std::vector<SaturationCandidate> saturations;
  std::optional<HarrisMumfordSpec> harris_mumford;
};

// Throws lls::Error with a JSON-path-anchored message on malformed input.
InstanceDocument parse_instance(const std::string& text);
InstanceDocument parse_instance_json(const Json& j);

Json serialize_presentation(const SeriesPresentation& sp);

// ---- Reports ----------------------------------------------------------------

// Machine-checkable outcome document. Serialization is deterministic (ordered
// keys, exact rationals as strings) and round-trips losslessly.
struct ReportDocument {
  std::string command;
  int exit_code = 0;
  Json body;

  bool operator==(const ReportDocument& o) const {
    return command == o.command && exit_code == o.exit_code && body == o.body;
  }
};

std::string serialize_report(const ReportDocument& r);
ReportDocument parse_report(const std::string& text);

Json verdict_json(const Verdict& v, const SeriesPresentation& sp);
Json witness_json(const IGCWitness& w);
Json morphism_json(const HarmonicMorphismData& hm);

// Rebuilds HarmonicMorphismData from a serialized morphism section, so
// witness reports can be re-verified by feeding them back into
// verify_harmonic.
HarmonicMorphismData parse_morphism(const Json& j);

// ---- DOT export ---------------------------------------------------------------

std::string dot_graph(const SeriesPresentation& sp, const GlobalDiagram* gd);
std::string dot_biftree(const BifurcationTree& bt);
std::string dot_partition_tree(const PartitionTree& pt);
std::string dot_morphism(const HarmonicMorphismData& hm);

}  // namespace lls
