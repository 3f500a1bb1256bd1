#pragma once

#include "lls/io.hpp"

#include <random>
#include <string>

namespace lls::testing {

std::string instance_path(const std::string& name);
std::string read_file(const std::string& path);
InstanceDocument load_instance(const std::string& name);

// The worked examples, loaded from the shipped instance documents.
SeriesPresentation ebif();
SeriesPresentation lattice(const std::string& variant);  // "d1", "d2a", "d3"
SeriesPresentation nonsolvable_cycle();

// Random diagrammatic presentations on random trees (always smoothable).
SeriesPresentation random_tree_instance(std::mt19937_64& rng, int max_edges = 12,
                                        int max_degree = 4);

// Random solvable presentations on graphs made of 1..3 separate loops joined
// by bridges.
SeriesPresentation random_loops_instance(std::mt19937_64& rng, int max_loops = 3);

// A single-loop presentation with 2k alternating vertices whose k minima are
// closing exactly at the given positions.
SeriesPresentation loop_instance(int k, const std::vector<bool>& closing);

}  // namespace lls::testing
