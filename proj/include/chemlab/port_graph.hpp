#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "chemlab/mol.hpp"

namespace chemlab {

enum class PortKind { In, Middle, Out };

std::string_view to_string(PortKind kind);

/// Kind of port `index` on a node of the given valence: the first port is
/// "in", the last (valence >= 2) is "out", anything between is "middle".
PortKind port_kind(std::size_t index, std::size_t valence);

/// Graph(M): one center vertex per mol node and one port vertex per port.
/// Vertex ids are shared between centers and ports; each mol node contributes
/// its center followed by its ports, in mol order.
struct PortGraph {
    struct Center {
        std::size_t id;
        std::string type;
        std::size_t mol_node;
    };
    struct Port {
        std::size_t id;
        std::size_t index; // 0-based port index on the owner
        PortKind kind;
        std::size_t owner; // center id
    };

    std::vector<Center> centers;
    std::vector<Port> ports;
    std::vector<std::pair<std::size_t, std::size_t>> internal_edges; // (center, port)
    std::vector<std::pair<std::size_t, std::size_t>> external_edges; // (port, port)

    std::size_t vertex_count() const { return centers.size() + ports.size(); }
};

/// Builds Graph(M). Patterns with free tags are capped first.
PortGraph to_port_graph(const MolPattern& pattern, const TypeRegistry& types);

} // namespace chemlab
