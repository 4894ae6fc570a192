#pragma once
#include <iosfwd>
#include <map>
#include <string>

#include "percolab/geom.hpp"

namespace percolab {

struct SpatialGraph;  // graphs.hpp

// Point configuration CSV: header `id,x0,...,x{d-1},mark`, one row per point.
// Window and meta go to a sidecar of `key = value` lines.
void write_configuration_csv(std::ostream& os, const PointConfiguration& config);
void write_configuration_sidecar(std::ostream& os, const PointConfiguration& config);
PointConfiguration read_configuration_csv(std::istream& points_csv, std::istream& sidecar);

void save_configuration(const PointConfiguration& config, const std::string& csv_path,
                        const std::string& sidecar_path);
PointConfiguration load_configuration(const std::string& csv_path,
                                      const std::string& sidecar_path);

// Segment set CSV: `x0,y0,x1,y1`.
struct SegmentSet;  // procgen.hpp
void write_segments_csv(std::ostream& os, const SegmentSet& segments);

// Graph edge list CSV: `src,dst` (undirected rows have src < dst).
void write_graph_csv(std::ostream& os, const SpatialGraph& graph);

// Deterministic formatting used for every emitted number (shortest
// round-trippable representation), so output bytes are reproducible.
std::string format_double(double v);

std::map<std::string, std::string> read_keyvalue_lines(std::istream& is);

}  // namespace percolab
