#include "chemlab/node_type.hpp"

#include "chemlab/error.hpp"

namespace chemlab {

void TypeRegistry::add(NodeType type)
{
    if (type.valence_bits.empty())
        throw Error(ErrorCode::BadValence, "node type '" + type.name + "' has no ports");
    for (int bit : type.valence_bits)
        if (bit != 0 && bit != 1)
            throw Error(ErrorCode::BadValence, "node type '" + type.name + "' has a valence bit other than 0/1");
    if (by_name_.count(type.name))
        throw Error(ErrorCode::ConfigSyntax, "node type '" + type.name + "' declared twice");
    by_name_.emplace(type.name, types_.size());
    types_.push_back(std::move(type));
}

const NodeType* TypeRegistry::find(const std::string& name) const
{
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &types_[it->second];
}

const NodeType& TypeRegistry::at(const std::string& name) const
{
    if (auto* t = find(name))
        return *t;
    throw Error(ErrorCode::UnknownNodeType, "unknown node type '" + name + "'");
}

const NodeType* TypeRegistry::cap_for(bool port_is_out, bool port_unoriented) const
{
    for (const auto& t : types_) {
        if (!t.is_free_cap || t.valence() != 1)
            continue;
        if (port_unoriented) {
            if (t.unoriented)
                return &t;
        } else if (!t.unoriented && t.is_out(0) != port_is_out) {
            return &t;
        }
    }
    return nullptr;
}

bool TypeRegistry::edge_ok(const NodeType& a, std::size_t pa, const NodeType& b, std::size_t pb)
{
    if (a.unoriented || b.unoriented)
        return true;
    return a.is_out(pa) != b.is_out(pb);
}

} // namespace chemlab
