#include "chemlab/hapax.hpp"

#include <algorithm>

#include "chemlab/error.hpp"

namespace chemlab {

namespace {

std::vector<Tag> rhs_internal_placeholders(const Rewrite& rw)
{
    std::vector<Tag> out;
    const auto bound = bound_tags(rw.rhs);
    for (const auto& n : rw.rhs.nodes)
        for (const auto& p : n.ports)
            if (bound.count(p) && std::find(out.begin(), out.end(), p) == out.end())
                out.push_back(p);
    return out;
}

std::size_t extra_count(const Rewrite& rw)
{
    const auto interface = rw.interface();
    if (interface.size() % 2 != 0)
        throw Error(ErrorCode::InterfaceMismatch, rw.name + ": odd interface, no generic token wiring");
    return interface.size() / 2;
}

MolPattern fill(const std::vector<MolNode>& shape_nodes, const std::vector<Tag>& pairs)
{
    MolPattern out;
    std::size_t at = 0;
    for (const auto& n : shape_nodes) {
        MolNode node{n.type, {}};
        for (std::size_t k = 0; k < n.ports.size(); ++k, ++at)
            node.ports.push_back(pairs.at(at / 2));
        out.nodes.push_back(std::move(node));
    }
    return out;
}

} // namespace

MolPattern token1_shape(const Rewrite& rw)
{
    if (rw.token1)
        return *rw.token1;
    auto tags = rhs_internal_placeholders(rw);
    const std::size_t k = extra_count(rw);
    for (std::size_t i = 1; i <= k; ++i)
        tags.push_back("_t" + std::to_string(i));
    return fill(rw.rhs.nodes, tags);
}

MolPattern token2_shape(const Rewrite& rw)
{
    if (rw.token2)
        return *rw.token2;
    std::vector<Tag> tags{rw.contact_tag()};
    const std::size_t k = extra_count(rw);
    for (std::size_t i = 1; i <= k; ++i)
        tags.push_back("_t" + std::to_string(i));
    return fill(rw.lhs.nodes, tags);
}

TokenLedger::TokenLedger(const MolPattern& mol)
{
    for (std::uint64_t k = 0;; ++k) {
        std::string candidate = k == 0 ? "h" : "h" + std::to_string(k) + "_";
        bool clash = false;
        for (const auto& n : mol.nodes)
            for (const auto& t : n.ports)
                clash |= t.starts_with(candidate);
        if (!clash) {
            prefix_ = std::move(candidate);
            return;
        }
    }
}

void TokenLedger::mint(const std::string& rewrite, std::size_t count)
{
    token1_[rewrite] += count;
}

void TokenLedger::mint_all(const Chemistry& chem, std::size_t count_per_rewrite)
{
    for (const auto& rw : chem.rewrites())
        mint(rw.name, count_per_rewrite);
}

std::size_t TokenLedger::token1_count(const std::string& rewrite) const
{
    auto it = token1_.find(rewrite);
    return it == token1_.end() ? 0 : it->second;
}

std::size_t TokenLedger::token2_count(const std::string& rewrite) const
{
    auto it = token2_.find(rewrite);
    return it == token2_.end() ? 0 : it->second;
}

std::size_t TokenLedger::absorbed(const std::string& arrow_type) const
{
    auto it = absorbed_.find(arrow_type);
    return it == absorbed_.end() ? 0 : it->second;
}

const MolPattern* TokenLedger::last_token2(const std::string& rewrite) const
{
    auto it = last_token2_.find(rewrite);
    return it == last_token2_.end() ? nullptr : &it->second;
}

MolPattern TokenLedger::take_token1(const Rewrite& rw)
{
    auto it = token1_.find(rw.name);
    if (it == token1_.end() || it->second == 0)
        throw Error(ErrorCode::InsufficientTokens, "no Token1 left for " + rw.name);
    MolPattern shape = token1_shape(rw);
    std::map<Tag, Tag> concrete;
    for (const auto& n : shape.nodes)
        for (const auto& p : n.ports)
            if (!concrete.count(p))
                concrete.emplace(p, prefix_ + std::to_string(counter_++));
    --it->second;
    return rename_tags(shape, concrete);
}

void TokenLedger::emit_token2(const std::string& rewrite, MolPattern token)
{
    ++token2_[rewrite];
    last_token2_[rewrite] = std::move(token);
}

void TokenLedger::absorb(const MolNode& arrow)
{
    ++absorbed_[arrow.type];
}

std::map<std::string, std::size_t> TokenLedger::node_counts(const Chemistry& chem) const
{
    std::map<std::string, std::size_t> out;
    for (const auto& rw : chem.rewrites()) {
        const std::size_t t1 = token1_count(rw.name);
        const std::size_t t2 = token2_count(rw.name);
        if (t1)
            for (const auto& n : rw.rhs.nodes)
                out[n.type] += t1;
        if (t2)
            for (const auto& n : rw.lhs.nodes)
                out[n.type] += t2;
    }
    for (const auto& [type, count] : absorbed_)
        out[type] += count;
    return out;
}

MolPattern hapax_apply_many(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem,
                            TokenLedger& ledger)
{
    std::map<std::string, std::size_t> need;
    for (const auto& m : matches) {
        check_match(mol, m, chem);
        ++need[chem.rewrites()[m.rewrite].name];
    }
    for (const auto& [name, n] : need)
        if (ledger.token1_count(name) < n)
            throw Error(ErrorCode::InsufficientTokens, "not enough Token1 for " + name);

    std::vector<std::map<Tag, Tag>> internal(matches.size());
    std::vector<MolPattern> token2(matches.size());
    TokenLedger work = ledger;
    for (std::size_t i = 0; i < matches.size(); ++i) {
        const Rewrite& rw = chem.rewrites()[matches[i].rewrite];
        const MolPattern shape = token1_shape(rw);
        const MolPattern token = work.take_token1(rw);
        std::map<Tag, Tag> placeholder_to_tag;
        for (std::size_t n = 0; n < shape.nodes.size(); ++n)
            for (std::size_t k = 0; k < shape.nodes[n].ports.size(); ++k)
                placeholder_to_tag[shape.nodes[n].ports[k]] = token.nodes[n].ports[k];
        internal[i] = placeholder_to_tag;
        placeholder_to_tag[rw.contact_tag()] = matches[i].tag_map.at(rw.contact_tag());
        token2[i] = rename_tags(token2_shape(rw), placeholder_to_tag);
    }

    std::size_t next = 0;
    MolPattern out = apply_matches_with(mol, matches, chem, [&](const Match&, const Rewrite&) { return internal[next++]; });
    for (std::size_t i = 0; i < matches.size(); ++i)
        work.emit_token2(chem.rewrites()[matches[i].rewrite].name, std::move(token2[i]));
    ledger = std::move(work);
    return out;
}

HapaxResult hapax_apply(const MolPattern& mol, const Match& match, const Chemistry& chem, TokenLedger ledger)
{
    MolPattern out = hapax_apply_many(mol, {match}, chem, ledger);
    return {std::move(out), std::move(ledger)};
}

MolPattern hapax_comb(const MolPattern& mol, const TypeRegistry& types, TokenLedger& ledger)
{
    CombResult r = comb_pass_detailed(mol, types);
    for (const auto& a : r.erased)
        ledger.absorb(a);
    return std::move(r.mol);
}

std::map<std::string, std::size_t> conserved_counts(const MolPattern& mol, const TokenLedger& ledger, const Chemistry& chem)
{
    auto counts = type_counts(mol);
    for (const auto& [type, n] : ledger.node_counts(chem))
        counts[type] += n;
    return counts;
}

} // namespace chemlab
