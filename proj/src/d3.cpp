#include "chemlab/d3.hpp"

#include <cmath>
#include <numbers>

#include "chemlab/port_graph.hpp"

namespace chemlab {

nlohmann::ordered_json export_d3(const MolPattern& pattern, const TypeRegistry& types)
{
    using nlohmann::ordered_json;
    const PortGraph g = to_port_graph(pattern, types);
    const std::size_t n = g.vertex_count();

    std::vector<std::string> type(n);
    for (const auto& c : g.centers)
        type[c.id] = c.type;
    for (const auto& p : g.ports)
        type[p.id] = std::string(to_string(p.kind));

    std::vector<std::vector<std::size_t>> incident(n);
    ordered_json links = ordered_json::array();
    auto add_link = [&](std::size_t s, std::size_t t, int value) {
        incident[s].push_back(links.size());
        incident[t].push_back(links.size());
        ordered_json l;
        l["source"] = s;
        l["target"] = t;
        l["value"] = value;
        l["age"] = 0;
        links.push_back(std::move(l));
    };
    for (const auto& [c, p] : g.internal_edges)
        add_link(c, p, 1);
    for (const auto& [a, b] : g.external_edges)
        add_link(a, b, 2);

    ordered_json nodes = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
        ordered_json node;
        node["id"] = i;
        node["type"] = type[i];
        node["x"] = std::cos(angle);
        node["y"] = std::sin(angle);
        node["vx"] = 0;
        node["vy"] = 0;
        node["links"] = incident[i];
        node["age"] = 0;
        nodes.push_back(std::move(node));
    }

    ordered_json doc;
    doc["nodes"] = std::move(nodes);
    doc["links"] = std::move(links);
    return doc;
}

} // namespace chemlab
