#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chemlab/node_type.hpp"

namespace chemlab {

using Tag = std::string;

/// One line of mol notation: a node type and the tags on its ports, in port order.
struct MolNode {
    std::string type;
    std::vector<Tag> ports;

    bool operator==(const MolNode&) const = default;
};

/// A mol pattern. Every tag occurs at most twice; a molecule is a pattern
/// in which every tag occurs exactly twice.
struct MolPattern {
    std::vector<MolNode> nodes;

    bool empty() const { return nodes.empty(); }
    std::size_t size() const { return nodes.size(); }
    bool operator==(const MolPattern&) const = default;
};

using Molecule = MolPattern;

enum class Dialect { Newline, Caret };

/// Caret when the text holds a '^' and no line breaks other than a trailing one.
Dialect detect_dialect(std::string_view text);

/// Parses mol text and validates it against the registry.
/// Lines starting with '#' are comments. Throws Error with a 1-based
/// line/column on UnknownNodeType, ArityMismatch, TagOveruse, OrientationClash.
MolPattern parse_mol(std::string_view text, const TypeRegistry& types, Dialect dialect = Dialect::Newline);

/// Parses without type information (placeholder templates, tests).
/// Only tag discipline is checked.
MolPattern parse_mol_untyped(std::string_view text, Dialect dialect = Dialect::Newline);

std::string serialize_mol(const MolPattern& pattern, Dialect dialect = Dialect::Newline);

/// Checks types, arities, tag discipline and orientation. Throws on the first violation.
void validate(const MolPattern& pattern, const TypeRegistry& types);

std::set<Tag> free_tags(const MolPattern& pattern);
std::set<Tag> bound_tags(const MolPattern& pattern);
std::map<Tag, int> tag_counts(const MolPattern& pattern);
bool is_molecule(const MolPattern& pattern);

/// Adds one cap node per free half-edge. A molecule comes back unchanged.
/// Throws Error(MissingCapType) if a needed cap type is absent.
Molecule cap(const MolPattern& pattern, const TypeRegistry& types);

std::map<std::string, std::size_t> type_counts(const MolPattern& pattern);
std::size_t edge_count(const MolPattern& pattern);

/// Applies a tag renaming to every port. Tags missing from the map are kept.
MolPattern rename_tags(const MolPattern& pattern, const std::map<Tag, Tag>& renaming);

} // namespace chemlab
