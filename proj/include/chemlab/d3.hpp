#pragma once

#include <json.hpp>

#include "chemlab/mol.hpp"

namespace chemlab {

/// Force-graph document {"nodes": [...], "links": [...]} built from Graph(M).
/// Node objects: id, type, x, y, vx, vy, links, age. Port nodes have type
/// "in", "middle" or "out"; `links` lists the indices of incident links.
/// Link objects: source, target, value, age. Internal links (center to port)
/// have value 1, external links (port to port) value 2. Positions start on
/// the unit circle.
nlohmann::ordered_json export_d3(const MolPattern& pattern, const TypeRegistry& types);

} // namespace chemlab
