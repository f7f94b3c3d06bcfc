#pragma once

#include <compare>
#include <string>

#include "chemlab/mol.hpp"

namespace chemlab {

/// Labeling-independent encoding of a mol pattern's isomorphism class.
/// Two patterns get equal codes iff some node bijection preserving node
/// types, port indices and edges maps one onto the other. Free half-edges
/// are encoded as such, so callers that want Cap(M) semantics cap first.
struct CanonicalCode {
    std::string bytes;

    bool empty() const { return bytes.empty(); }
    auto operator<=>(const CanonicalCode&) const = default;

    /// RFC 4648 base-32 (lowercase, unpadded); the shareable form of the code.
    std::string to_base32() const;
};

/// Color refinement on the port adjacency, then, per connected component, a
/// breadth-first labeling from every root in the smallest refined color
/// class; the lexicographically least labeling wins. Ports are ordered, so a
/// root fixes the whole component and no deeper backtracking is needed.
/// Components are sorted before concatenation.
CanonicalCode canonical_code(const MolPattern& pattern);

bool is_isomorphic(const MolPattern& a, const MolPattern& b);

} // namespace chemlab
