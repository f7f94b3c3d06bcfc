#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chemlab {

/// A mol node type: a name plus one orientation bit per port
/// (0 = "in", 1 = "out").
struct NodeType {
    std::string name;
    std::vector<int> valence_bits;
    bool is_arrow = false;
    bool is_free_cap = false;
    bool is_terminator = false;
    // Ports of an unoriented type accept either end of an edge.
    bool unoriented = false;

    std::size_t valence() const { return valence_bits.size(); }
    bool is_out(std::size_t port) const { return valence_bits.at(port) == 1; }

    bool operator==(const NodeType&) const = default;
};

/// Node types by name. Names are unique.
class TypeRegistry {
public:
    TypeRegistry() = default;

    // Throws Error(BadValence) for an empty or non-binary valence vector and
    // Error(ConfigSyntax) for a duplicate name.
    void add(NodeType type);

    const NodeType* find(const std::string& name) const;
    const NodeType& at(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }

    const std::vector<NodeType>& types() const { return types_; }
    std::size_t size() const { return types_.size(); }

    // Cap type for a free half-edge sitting on a port of the given kind.
    // For an "in" port this is a 1-valent cap with an out bit (FRIN),
    // for an "out" port a 1-valent cap with an in bit (FROUT), and for an
    // unoriented port the unoriented cap (FREE).
    const NodeType* cap_for(bool port_is_out, bool port_unoriented) const;

    // True when the edge joining the two ports respects orientation
    // (always true if either side is unoriented).
    static bool edge_ok(const NodeType& a, std::size_t pa, const NodeType& b, std::size_t pb);

private:
    std::vector<NodeType> types_;
    std::map<std::string, std::size_t> by_name_;
};

} // namespace chemlab
