#include "chemlab/port_graph.hpp"

#include <unordered_map>

namespace chemlab {

std::string_view to_string(PortKind kind)
{
    switch (kind) {
    case PortKind::In: return "in";
    case PortKind::Middle: return "middle";
    case PortKind::Out: return "out";
    }
    return "in";
}

PortKind port_kind(std::size_t index, std::size_t valence)
{
    if (index == 0)
        return PortKind::In;
    if (index + 1 == valence)
        return PortKind::Out;
    return PortKind::Middle;
}

PortGraph to_port_graph(const MolPattern& pattern, const TypeRegistry& types)
{
    const Molecule mol = cap(pattern, types);
    PortGraph g;
    std::unordered_map<Tag, std::size_t> first_port;
    std::size_t next_id = 0;
    for (std::size_t i = 0; i < mol.nodes.size(); ++i) {
        const auto& node = mol.nodes[i];
        const std::size_t center = next_id++;
        g.centers.push_back({center, node.type, i});
        for (std::size_t p = 0; p < node.ports.size(); ++p) {
            const std::size_t port = next_id++;
            g.ports.push_back({port, p, port_kind(p, node.ports.size()), center});
            g.internal_edges.emplace_back(center, port);
            auto [it, inserted] = first_port.emplace(node.ports[p], port);
            if (!inserted)
                g.external_edges.emplace_back(it->second, port);
        }
    }
    return g;
}

} // namespace chemlab
