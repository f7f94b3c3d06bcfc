#include "chemlab/chemistry.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "chemlab/error.hpp"

namespace chemlab {

std::string_view to_string(RewriteKind kind)
{
    switch (kind) {
    case RewriteKind::Beta: return "BETA";
    case RewriteKind::Dist: return "DIST";
    case RewriteKind::FanIn: return "FAN-IN";
    case RewriteKind::Term: return "TERM";
    case RewriteKind::Comb: return "COMB";
    case RewriteKind::IcAnnihilate: return "IC-ANNIHILATE";
    case RewriteKind::IcCommute: return "IC-COMMUTE";
    }
    return "BETA";
}

RewriteKind rewrite_kind_from_string(std::string_view text)
{
    for (auto k : {RewriteKind::Beta, RewriteKind::Dist, RewriteKind::FanIn, RewriteKind::Term, RewriteKind::Comb,
                   RewriteKind::IcAnnihilate, RewriteKind::IcCommute})
        if (to_string(k) == text)
            return k;
    throw Error(ErrorCode::ConfigSyntax, "unknown rewrite kind '" + std::string(text) + "'");
}

namespace {

std::string default_group(RewriteKind kind)
{
    switch (kind) {
    case RewriteKind::IcAnnihilate: return "BETA";
    case RewriteKind::IcCommute: return "DIST";
    default: return std::string(to_string(kind));
    }
}

std::multiset<std::string> type_multiset(const MolPattern& p)
{
    std::multiset<std::string> s;
    for (const auto& n : p.nodes)
        s.insert(n.type);
    return s;
}

struct PortRef {
    const NodeType* type;
    std::size_t port;
};

// Every occurrence of each tag, with the port's node type (null if unknown).
std::map<Tag, std::vector<PortRef>> occurrences(const MolPattern& p, const TypeRegistry& types)
{
    std::map<Tag, std::vector<PortRef>> occ;
    for (const auto& n : p.nodes) {
        const NodeType* t = types.find(n.type);
        for (std::size_t k = 0; k < n.ports.size(); ++k)
            occ[n.ports[k]].push_back({t, k});
    }
    return occ;
}

} // namespace

std::vector<std::string> Rewrite::rhs_types() const
{
    std::vector<std::string> out;
    for (const auto& n : rhs.nodes)
        out.push_back(n.type);
    return out;
}

std::set<Tag> Rewrite::interface() const
{
    return free_tags(lhs);
}

MolPattern make_lhs_template(const NodeType& left, std::size_t left_port, const NodeType& right, std::size_t right_port)
{
    MolPattern lhs;
    MolNode l{left.name, {}};
    int next = 1;
    for (std::size_t k = 0; k < left.valence(); ++k)
        l.ports.push_back(std::to_string(next++));
    MolNode r{right.name, {}};
    for (std::size_t k = 0; k < right.valence(); ++k)
        r.ports.push_back(k == right_port ? l.ports[left_port] : std::to_string(next++));
    lhs.nodes = {std::move(l), std::move(r)};
    return lhs;
}

RewriteReport validate_rewrite(const Rewrite& rw, const Chemistry& chem)
{
    RewriteReport report;
    const auto& types = chem.types();
    auto fail = [&](ErrorCode code, const std::string& msg) { report.violations.push_back({code, rw.name + ": " + msg}); };

    const NodeType* left = types.find(rw.left);
    const NodeType* right = types.find(rw.right);
    if (!left)
        fail(ErrorCode::UnknownType, "unknown node type '" + rw.left + "'");
    if (!right)
        fail(ErrorCode::UnknownType, "unknown node type '" + rw.right + "'");
    if (!left || !right)
        return report;
    if (rw.left_contact_port >= left->valence() || rw.right_contact_port >= right->valence()) {
        fail(ErrorCode::BadValence, "contact port out of range");
        return report;
    }
    if (left->is_arrow || right->is_arrow)
        fail(ErrorCode::ConfigSyntax, "Arrow nodes are handled by COMB, not by listed rewrites");
    if (!TypeRegistry::edge_ok(*left, rw.left_contact_port, *right, rw.right_contact_port))
        fail(ErrorCode::OrientationClash, "contact edge joins two ports of the same orientation");
    if (rw.lhs.size() != 2 || rw.lhs != make_lhs_template(*left, rw.left_contact_port, *right, rw.right_contact_port))
        fail(ErrorCode::ConfigSyntax, "LHS template does not match the contact specification");

    report.interface = rw.interface();
    report.node_delta = rw.node_delta();

    for (const auto& n : rw.rhs.nodes) {
        const NodeType* t = types.find(n.type);
        if (!t)
            fail(ErrorCode::UnknownType, "unknown node type '" + n.type + "' in rhs");
        else if (t->valence() != n.ports.size())
            fail(ErrorCode::ArityMismatch, "rhs node '" + n.type + "' has " + std::to_string(n.ports.size()) + " ports, valence is " +
                 std::to_string(t->valence()));
    }
    if (!report.ok())
        return report;

    auto rhs_occ = occurrences(rw.rhs, types);
    for (const auto& [tag, refs] : rhs_occ)
        if (refs.size() > 2)
            fail(ErrorCode::TagOveruse, "rhs tag '" + tag + "' occurs more than twice");

    const auto rhs_free = free_tags(rw.rhs);
    if (rhs_free != report.interface) {
        std::ostringstream msg;
        msg << "interface mismatch: Free(LHS) = {";
        for (const auto& t : report.interface)
            msg << ' ' << t;
        msg << " } but Free(RHS) = {";
        for (const auto& t : rhs_free)
            msg << ' ' << t;
        msg << " }";
        fail(ErrorCode::InterfaceMismatch, msg.str());
        return report;
    }

    auto lhs_occ = occurrences(rw.lhs, types);
    for (const auto& [tag, refs] : rhs_occ) {
        if (refs.size() == 2) {
            if (!TypeRegistry::edge_ok(*refs[0].type, refs[0].port, *refs[1].type, refs[1].port))
                fail(ErrorCode::OrientationClash, "rhs edge '" + tag + "' joins two ports of the same orientation");
        } else {
            const PortRef& l = lhs_occ.at(tag).front();
            const PortRef& r = refs.front();
            if (!l.type->unoriented && !r.type->unoriented && l.type->is_out(l.port) != r.type->is_out(r.port))
                fail(ErrorCode::OrientationClash, "interface tag '" + tag + "' changes orientation");
        }
    }

    for (const auto& b : rw.blocks) {
        if (chem.find_rewrite(b))
            continue;
        auto dash = b.find('-');
        bool pattern = dash != std::string::npos && types.contains(b.substr(0, dash)) && types.contains(b.substr(dash + 1));
        if (!pattern)
            fail(ErrorCode::UnknownType, "blocks entry '" + b + "' names neither a rewrite nor a pair of node types");
    }

    if (rw.token1.has_value() != rw.token2.has_value())
        fail(ErrorCode::InterfaceMismatch, "token1 and token2 must be given together");
    if (rw.token1 && rw.token2) {
        const auto& t1 = *rw.token1;
        const auto& t2 = *rw.token2;
        if (type_multiset(t1) != type_multiset(rw.rhs))
            fail(ErrorCode::InterfaceMismatch, "token1 node types differ from the rhs node types");
        if (type_multiset(t2) != type_multiset(rw.lhs))
            fail(ErrorCode::InterfaceMismatch, "token2 node types differ from the lhs node types");
        if (!is_molecule(t1) || !is_molecule(t2))
            fail(ErrorCode::InterfaceMismatch, "tokens must be closed patterns");
        const auto t1_tags = bound_tags(t1);
        std::set<Tag> rhs_internal = bound_tags(rw.rhs);
        for (const auto& t : rhs_internal)
            if (!t1_tags.count(t))
                fail(ErrorCode::InterfaceMismatch, "rhs internal edge '" + t + "' is not supplied by token1");
        std::set<Tag> expected{rw.contact_tag()};
        for (const auto& t : t1_tags)
            if (!rhs_internal.count(t))
                expected.insert(t);
        if (bound_tags(t2) != expected)
            fail(ErrorCode::InterfaceMismatch, "token2 must hold exactly the LHS contact edge and the token1 edges the rhs does not use");
    }
    return report;
}

Chemistry::Chemistry(std::string name, TypeRegistry types, std::vector<Rewrite> rewrites)
    : name_(std::move(name)), types_(std::move(types)), rewrites_(std::move(rewrites))
{
    index();
}

void Chemistry::index()
{
    by_right_.clear();
    for (std::size_t i = 0; i < rewrites_.size(); ++i) {
        auto it = std::find_if(by_right_.begin(), by_right_.end(),
                               [&](const auto& e) { return e.first == rewrites_[i].right; });
        if (it == by_right_.end())
            by_right_.push_back({rewrites_[i].right, {i}});
        else
            it->second.push_back(i);
    }
}

const Rewrite* Chemistry::find_rewrite(const std::string& name) const
{
    auto idx = rewrite_index(name);
    return idx ? &rewrites_[*idx] : nullptr;
}

std::optional<std::size_t> Chemistry::rewrite_index(const std::string& name) const
{
    for (std::size_t i = 0; i < rewrites_.size(); ++i)
        if (rewrites_[i].name == name)
            return i;
    return std::nullopt;
}

bool Chemistry::oriented() const
{
    for (const auto& t : types_.types())
        if (!t.is_arrow && !t.is_free_cap && !t.unoriented)
            return true;
    return false;
}

const std::vector<std::size_t>& Chemistry::rewrites_for_right(const std::string& type) const
{
    static const std::vector<std::size_t> none;
    for (const auto& [t, list] : by_right_)
        if (t == type)
            return list;
    return none;
}

Chemistry Chemistry::without(const std::set<std::string>& rewrite_names) const
{
    std::vector<Rewrite> kept;
    for (const auto& rw : rewrites_)
        if (!rewrite_names.count(rw.name))
            kept.push_back(rw);
    Chemistry out(name_, types_, std::move(kept));
    out.source_ = source_;
    return out;
}

namespace {

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(std::string_view s)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

struct RawRewrite {
    std::map<std::string, std::string> keys;
    std::size_t line = 0;
};

std::size_t parse_port(const std::string& s, std::size_t line)
{
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used == s.size() && v >= 1)
            return static_cast<std::size_t>(v - 1);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigSyntax, "bad port number '" + s + "'", line);
}

Rewrite build_rewrite(const RawRewrite& raw, const TypeRegistry& types)
{
    auto get = [&](const std::string& key, bool required) -> std::string {
        auto it = raw.keys.find(key);
        if (it == raw.keys.end()) {
            if (required)
                throw Error(ErrorCode::ConfigSyntax, "rewrite is missing key '" + key + "'", raw.line);
            return {};
        }
        return it->second;
    };

    Rewrite rw;
    rw.name = get("name", true);
    rw.left = get("left", true);
    rw.right = get("right", true);
    rw.action = get("action", false);
    rw.kind = rewrite_kind_from_string(get("kind", true));
    rw.weight_group = get("group", false);
    if (rw.weight_group.empty())
        rw.weight_group = default_group(rw.kind);
    for (auto& b : words(get("blocks", false))) {
        if (b.ends_with(','))
            b.pop_back();
        if (!b.empty())
            rw.blocks.push_back(b);
    }

    auto contact = words(get("contact", true));
    if (contact.size() != 2)
        throw Error(ErrorCode::ConfigSyntax, "contact needs two port numbers (right node, left node)", raw.line);
    rw.right_contact_port = parse_port(contact[0], raw.line);
    rw.left_contact_port = parse_port(contact[1], raw.line);

    const NodeType* left = types.find(rw.left);
    const NodeType* right = types.find(rw.right);
    if (!left || !right)
        throw Error(ErrorCode::UnknownType, rw.name + ": unknown node type '" + (left ? rw.right : rw.left) + "'", raw.line);
    if (rw.left_contact_port >= left->valence() || rw.right_contact_port >= right->valence())
        throw Error(ErrorCode::BadValence, rw.name + ": contact port out of range", raw.line);
    rw.lhs = make_lhs_template(*left, rw.left_contact_port, *right, rw.right_contact_port);

    auto pattern = [&](const std::string& key) {
        try {
            return parse_mol_untyped(get(key, key == "rhs"), Dialect::Caret);
        } catch (const Error& e) {
            throw Error(e.code(), rw.name + ": " + key + ": " + e.what(), raw.line);
        }
    };
    rw.rhs = pattern("rhs");
    if (raw.keys.count("token1"))
        rw.token1 = pattern("token1");
    if (raw.keys.count("token2"))
        rw.token2 = pattern("token2");
    return rw;
}

} // namespace

Chemistry load_chemistry(std::string_view config_text)
{
    enum class Section { Top, Types, Rewrites } section = Section::Top;
    std::string name = "unnamed";
    TypeRegistry types;
    std::vector<RawRewrite> raws;

    std::istringstream in{std::string(config_text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s.starts_with('#'))
            continue;
        if (s.starts_with('[')) {
            if (s == "[types]")
                section = Section::Types;
            else if (s == "[rewrites]")
                section = Section::Rewrites;
            else if (s == "[chemistry]")
                section = Section::Top;
            else
                throw Error(ErrorCode::ConfigSyntax, "unknown section " + s, line_no);
            continue;
        }
        if (section == Section::Types) {
            auto w = words(s);
            NodeType t;
            t.name = w.front();
            for (std::size_t i = 1; i < w.size(); ++i) {
                const auto& f = w[i];
                if (f == "0" || f == "1")
                    t.valence_bits.push_back(f == "1");
                else if (f == "arrow")
                    t.is_arrow = true;
                else if (f == "cap")
                    t.is_free_cap = true;
                else if (f == "terminator")
                    t.is_terminator = true;
                else if (f == "unoriented")
                    t.unoriented = true;
                else
                    throw Error(ErrorCode::BadValence, "bad valence entry '" + f + "' for type " + t.name, line_no);
            }
            try {
                types.add(std::move(t));
            } catch (const Error& e) {
                throw Error(e.code(), e.what(), line_no);
            }
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ConfigSyntax, "expected 'key = value'", line_no);
        std::string key = trim(std::string_view(s).substr(0, eq));
        std::string value = trim(std::string_view(s).substr(eq + 1));
        if (section == Section::Top) {
            if (key != "name")
                throw Error(ErrorCode::ConfigSyntax, "unknown top-level key '" + key + "'", line_no);
            name = value;
            continue;
        }
        static const std::set<std::string> known{"name", "left", "right", "contact", "action", "kind",
                                                 "blocks", "rhs", "group", "token1", "token2"};
        if (!known.count(key))
            throw Error(ErrorCode::ConfigSyntax, "unknown rewrite key '" + key + "'", line_no);
        if (key == "name")
            raws.push_back({{}, line_no});
        if (raws.empty())
            throw Error(ErrorCode::ConfigSyntax, "a rewrite block must start with 'name ='", line_no);
        if (!raws.back().keys.emplace(key, value).second)
            throw Error(ErrorCode::ConfigSyntax, "key '" + key + "' repeated in one rewrite", line_no);
    }

    bool has_arrow = false, has_cap = false;
    for (const auto& t : types.types()) {
        has_arrow |= t.is_arrow && t.valence() == 2;
        has_cap |= t.is_free_cap && t.valence() == 1;
    }
    if (!has_arrow)
        throw Error(ErrorCode::UnknownType, "chemistry '" + name + "' declares no 2-valent arrow type");
    if (!has_cap)
        throw Error(ErrorCode::UnknownType, "chemistry '" + name + "' declares no 1-valent cap type");

    std::vector<Rewrite> rewrites;
    std::set<std::string> names;
    std::vector<std::size_t> lines;
    for (const auto& raw : raws) {
        Rewrite rw = build_rewrite(raw, types);
        if (!names.insert(rw.name).second)
            throw Error(ErrorCode::DuplicateRewriteName, "rewrite '" + rw.name + "' defined twice", raw.line);
        rewrites.push_back(std::move(rw));
        lines.push_back(raw.line);
    }

    Chemistry chem(name, std::move(types), std::move(rewrites));
    for (std::size_t i = 0; i < chem.rewrites().size(); ++i) {
        auto report = validate_rewrite(chem.rewrites()[i], chem);
        if (!report.ok())
            throw Error(report.violations.front().code, report.violations.front().message, lines[i]);
    }
    chem.set_source(std::string(config_text));
    return chem;
}

} // namespace chemlab
