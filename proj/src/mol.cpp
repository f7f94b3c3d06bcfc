#include "chemlab/mol.hpp"

#include <algorithm>
#include <unordered_map>

#include "chemlab/error.hpp"

namespace chemlab {

namespace {

struct Field {
    std::string text;
    std::size_t column;
};

struct Item {
    std::vector<Field> fields;
    std::size_t line;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::vector<Item> split_items(std::string_view text, Dialect dialect)
{
    const char sep = dialect == Dialect::Caret ? '^' : '\n';
    std::vector<Item> items;
    std::size_t line = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view raw = text.substr(start, end - start);

        Item item{{}, line};
        std::size_t i = 0;
        while (i < raw.size()) {
            while (i < raw.size() && is_space(raw[i]))
                ++i;
            std::size_t b = i;
            while (i < raw.size() && !is_space(raw[i]))
                ++i;
            if (i > b)
                item.fields.push_back({std::string(raw.substr(b, i - b)), b + 1});
        }
        bool comment = !item.fields.empty() && item.fields.front().text.starts_with('#');
        if (!item.fields.empty() && !comment)
            items.push_back(std::move(item));

        ++line;
        if (end == text.size())
            break;
        start = end + 1;
    }
    return items;
}

struct Occurrence {
    std::size_t node;
    std::size_t port;
};

// Shared tag-discipline check. When `types` is given, types, arities and
// orientation are checked too.
MolPattern build(const std::vector<Item>& items, const TypeRegistry* types)
{
    MolPattern out;
    std::unordered_map<Tag, std::vector<Occurrence>> seen;
    for (const auto& item : items) {
        const auto& head = item.fields.front();
        MolNode node{head.text, {}};
        const NodeType* nt = nullptr;
        if (types) {
            nt = types->find(head.text);
            if (!nt)
                throw Error(ErrorCode::UnknownNodeType, "unknown node type '" + head.text + "'", item.line, head.column);
            if (item.fields.size() - 1 != nt->valence())
                throw Error(ErrorCode::ArityMismatch,
                            "node type '" + head.text + "' has valence " + std::to_string(nt->valence()) + " but " +
                                std::to_string(item.fields.size() - 1) + " tags were given",
                            item.line, head.column);
        }
        const std::size_t index = out.nodes.size();
        for (std::size_t k = 1; k < item.fields.size(); ++k) {
            const auto& f = item.fields[k];
            auto& occ = seen[f.text];
            if (occ.size() == 2)
                throw Error(ErrorCode::TagOveruse, "tag '" + f.text + "' occurs more than twice", item.line, f.column);
            if (nt && occ.size() == 1) {
                const auto& first = occ.front();
                const NodeType& other = first.node == index ? *nt : types->at(out.nodes[first.node].type);
                if (!TypeRegistry::edge_ok(other, first.port, *nt, k - 1))
                    throw Error(ErrorCode::OrientationClash,
                                "tag '" + f.text + "' joins two ports of the same orientation", item.line, f.column);
            }
            occ.push_back({index, k - 1});
            node.ports.push_back(f.text);
        }
        out.nodes.push_back(std::move(node));
    }
    return out;
}

std::vector<Item> items_of(const MolPattern& p)
{
    std::vector<Item> items;
    items.reserve(p.nodes.size());
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        Item item{{{p.nodes[i].type, 1}}, i + 1};
        for (const auto& t : p.nodes[i].ports)
            item.fields.push_back({t, 0});
        items.push_back(std::move(item));
    }
    return items;
}

} // namespace

Dialect detect_dialect(std::string_view text)
{
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.find('^') != std::string_view::npos && text.find('\n') == std::string_view::npos)
        return Dialect::Caret;
    return Dialect::Newline;
}

MolPattern parse_mol(std::string_view text, const TypeRegistry& types, Dialect dialect)
{
    return build(split_items(text, dialect), &types);
}

MolPattern parse_mol_untyped(std::string_view text, Dialect dialect)
{
    return build(split_items(text, dialect), nullptr);
}

std::string serialize_mol(const MolPattern& pattern, Dialect dialect)
{
    const char sep = dialect == Dialect::Caret ? '^' : '\n';
    std::string out;
    for (std::size_t i = 0; i < pattern.nodes.size(); ++i) {
        if (i)
            out += sep;
        out += pattern.nodes[i].type;
        for (const auto& t : pattern.nodes[i].ports) {
            out += ' ';
            out += t;
        }
    }
    return out;
}

void validate(const MolPattern& pattern, const TypeRegistry& types)
{
    build(items_of(pattern), &types);
}

std::map<Tag, int> tag_counts(const MolPattern& pattern)
{
    std::map<Tag, int> counts;
    for (const auto& n : pattern.nodes)
        for (const auto& t : n.ports)
            ++counts[t];
    return counts;
}

std::set<Tag> free_tags(const MolPattern& pattern)
{
    std::set<Tag> out;
    for (const auto& [t, c] : tag_counts(pattern))
        if (c == 1)
            out.insert(t);
    return out;
}

std::set<Tag> bound_tags(const MolPattern& pattern)
{
    std::set<Tag> out;
    for (const auto& [t, c] : tag_counts(pattern))
        if (c == 2)
            out.insert(t);
    return out;
}

bool is_molecule(const MolPattern& pattern)
{
    for (const auto& [t, c] : tag_counts(pattern))
        if (c != 2)
            return false;
    return true;
}

Molecule cap(const MolPattern& pattern, const TypeRegistry& types)
{
    auto counts = tag_counts(pattern);
    Molecule out = pattern;
    for (const auto& node : pattern.nodes) {
        const NodeType& nt = types.at(node.type);
        for (std::size_t p = 0; p < node.ports.size(); ++p) {
            const Tag& t = node.ports[p];
            if (counts[t] != 1)
                continue;
            const NodeType* c = types.cap_for(nt.is_out(p), nt.unoriented);
            if (!c)
                throw Error(ErrorCode::MissingCapType,
                            "no cap type for free tag '" + t + "' on port " + std::to_string(p + 1) + " of " + node.type);
            out.nodes.push_back({c->name, {t}});
        }
    }
    return out;
}

std::map<std::string, std::size_t> type_counts(const MolPattern& pattern)
{
    std::map<std::string, std::size_t> counts;
    for (const auto& n : pattern.nodes)
        ++counts[n.type];
    return counts;
}

std::size_t edge_count(const MolPattern& pattern)
{
    std::size_t bound = 0;
    for (const auto& [t, c] : tag_counts(pattern))
        bound += c == 2;
    return bound;
}

MolPattern rename_tags(const MolPattern& pattern, const std::map<Tag, Tag>& renaming)
{
    MolPattern out = pattern;
    for (auto& n : out.nodes)
        for (auto& t : n.ports)
            if (auto it = renaming.find(t); it != renaming.end())
                t = it->second;
    return out;
}

} // namespace chemlab
