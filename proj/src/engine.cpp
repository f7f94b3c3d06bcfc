#include "chemlab/engine.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "chemlab/canon.hpp"
#include "chemlab/error.hpp"
#include "chemlab/hapax.hpp"

namespace chemlab {

MolIndex::MolIndex(const MolPattern& mol)
{
    occ_.reserve(mol.nodes.size() * 2);
    for (std::size_t i = 0; i < mol.nodes.size(); ++i)
        for (std::size_t k = 0; k < mol.nodes[i].ports.size(); ++k)
            occ_[mol.nodes[i].ports[k]].push_back({i, k});
}

std::optional<MolIndex::Occurrence> MolIndex::other_end(const Tag& tag, std::size_t node, std::size_t port) const
{
    auto it = occ_.find(tag);
    if (it == occ_.end())
        return std::nullopt;
    for (const auto& o : it->second)
        if (o.node != node || o.port != port)
            return o;
    return std::nullopt;
}

TagSource::TagSource(const MolPattern& mol)
{
    std::vector<const Tag*> tags;
    for (const auto& n : mol.nodes)
        for (const auto& t : n.ports)
            tags.push_back(&t);
    for (std::uint64_t k = 0;; ++k) {
        std::string candidate = k == 0 ? "g" : "g" + std::to_string(k) + "_";
        bool clash = std::any_of(tags.begin(), tags.end(), [&](const Tag* t) { return t->starts_with(candidate); });
        if (!clash) {
            prefix_ = std::move(candidate);
            break;
        }
    }
}

Tag TagSource::next()
{
    return prefix_ + std::to_string(counter_++);
}

std::vector<Match> match_at(const MolPattern& mol, std::size_t node_index, const Chemistry& chem)
{
    return match_at(mol, MolIndex(mol), node_index, chem);
}

std::vector<Match> match_at(const MolPattern& mol, const MolIndex& index, std::size_t node_index, const Chemistry& chem)
{
    std::vector<Match> out;
    const MolNode& anchor = mol.nodes.at(node_index);
    for (std::size_t r : chem.rewrites_for_right(anchor.type)) {
        const Rewrite& rw = chem.rewrites()[r];
        if (rw.right_contact_port >= anchor.ports.size())
            continue;
        const Tag& contact = anchor.ports[rw.right_contact_port];
        auto partner = index.other_end(contact, node_index, rw.right_contact_port);
        if (!partner || partner->node == node_index)
            continue;
        const MolNode& left = mol.nodes[partner->node];
        if (left.type != rw.left || partner->port != rw.left_contact_port || left.ports.size() != rw.lhs.nodes[0].ports.size())
            continue;

        Match m;
        m.rewrite = r;
        m.node_map = {partner->node, node_index};
        const MolNode* images[2] = {&left, &anchor};
        for (int line = 0; line < 2; ++line)
            for (std::size_t k = 0; k < rw.lhs.nodes[line].ports.size(); ++k)
                m.tag_map[rw.lhs.nodes[line].ports[k]] = images[line]->ports[k];
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(), [&](const Match& a, const Match& b) {
        return chem.rewrites()[a.rewrite].name < chem.rewrites()[b.rewrite].name;
    });
    return out;
}

std::vector<Match> find_matches(const MolPattern& mol, const Chemistry& chem, unsigned threads)
{
    const MolIndex index(mol);
    const std::size_t n = mol.nodes.size();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, n / 64))));

    std::vector<std::vector<Match>> chunks(threads);
    auto scan = [&](unsigned t) {
        const std::size_t begin = n * t / threads;
        const std::size_t end = n * (t + 1) / threads;
        for (std::size_t i = begin; i < end; ++i)
            for (auto& m : match_at(mol, index, i, chem))
                chunks[t].push_back(std::move(m));
    };
    if (threads == 1) {
        scan(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(scan, t);
        for (auto& th : pool)
            th.join();
    }

    std::vector<Match> out;
    std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
    for (auto& chunk : chunks)
        for (auto& m : chunk) {
            auto lo = std::min(m.node_map[0], m.node_map[1]);
            auto hi = std::max(m.node_map[0], m.node_map[1]);
            if (seen.emplace(m.rewrite, lo, hi).second)
                out.push_back(std::move(m));
        }
    return out;
}

bool conflicts(const Match& a, const Match& b)
{
    for (auto x : a.node_map)
        for (auto y : b.node_map)
            if (x == y)
                return true;
    return false;
}

void check_match(const MolPattern& mol, const Match& match, const Chemistry& chem)
{
    if (match.rewrite >= chem.rewrites().size())
        throw Error(ErrorCode::StaleMatch, "match refers to an unknown rewrite");
    const Rewrite& rw = chem.rewrites()[match.rewrite];
    if (match.node_map.size() != rw.lhs.size() || match.node_map[0] == match.node_map[1])
        throw Error(ErrorCode::StaleMatch, rw.name + ": malformed node map");
    for (std::size_t line = 0; line < rw.lhs.size(); ++line) {
        const std::size_t idx = match.node_map[line];
        if (idx >= mol.nodes.size())
            throw Error(ErrorCode::StaleMatch, rw.name + ": node " + std::to_string(idx + 1) + " no longer exists");
        const MolNode& node = mol.nodes[idx];
        const MolNode& tmpl = rw.lhs.nodes[line];
        if (node.type != tmpl.type || node.ports.size() != tmpl.ports.size())
            throw Error(ErrorCode::StaleMatch, rw.name + ": node " + std::to_string(idx + 1) + " changed type");
        for (std::size_t k = 0; k < tmpl.ports.size(); ++k) {
            auto it = match.tag_map.find(tmpl.ports[k]);
            if (it == match.tag_map.end() || it->second != node.ports[k])
                throw Error(ErrorCode::StaleMatch, rw.name + ": node " + std::to_string(idx + 1) + " was rewired");
        }
    }
}

MolPattern apply_matches_with(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem,
                              const InternalTags& internal_tags)
{
    std::vector<bool> removed(mol.nodes.size(), false);
    for (const auto& m : matches) {
        check_match(mol, m, chem);
        for (auto idx : m.node_map) {
            if (removed[idx])
                throw Error(ErrorCode::ConflictingMatches, "two selected matches share node " + std::to_string(idx + 1));
            removed[idx] = true;
        }
    }

    MolPattern out;
    out.nodes.reserve(mol.nodes.size() + matches.size() * 2);
    for (std::size_t i = 0; i < mol.nodes.size(); ++i)
        if (!removed[i])
            out.nodes.push_back(mol.nodes[i]);

    for (const auto& m : matches) {
        const Rewrite& rw = chem.rewrites()[m.rewrite];
        const auto interface = rw.interface();
        const auto internal = internal_tags(m, rw);
        for (const auto& tmpl : rw.rhs.nodes) {
            MolNode node{tmpl.type, {}};
            node.ports.reserve(tmpl.ports.size());
            for (const auto& p : tmpl.ports)
                node.ports.push_back(interface.count(p) ? m.tag_map.at(p) : internal.at(p));
            out.nodes.push_back(std::move(node));
        }
    }
    return out;
}

MolPattern apply_matches(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem, TagSource& tags)
{
    return apply_matches_with(mol, matches, chem, [&](const Match&, const Rewrite& rw) {
        std::map<Tag, Tag> fresh;
        for (const auto& node : rw.rhs.nodes)
            for (const auto& p : node.ports)
                if (!rw.interface().count(p) && !fresh.count(p))
                    fresh.emplace(p, tags.next());
        return fresh;
    });
}

MolPattern apply_match(const MolPattern& mol, const Match& match, const Chemistry& chem, TagSource& tags)
{
    return apply_matches(mol, {match}, chem, tags);
}

namespace {

bool is_arrow(const MolNode& n, const TypeRegistry& types)
{
    const NodeType* t = types.find(n.type);
    return t && t->is_arrow && n.ports.size() == 2;
}

} // namespace

CombResult comb_pass_detailed(const MolPattern& mol, const TypeRegistry& types)
{
    struct Occ {
        std::size_t node;
        std::size_t port;
    };
    std::vector<MolNode> nodes = mol.nodes;
    std::vector<bool> alive(nodes.size(), true);
    std::unordered_map<Tag, std::vector<Occ>> occ;
    std::deque<std::size_t> work;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t k = 0; k < nodes[i].ports.size(); ++k)
            occ[nodes[i].ports[k]].push_back({i, k});
        if (is_arrow(nodes[i], types))
            work.push_back(i);
    }

    CombResult result;
    while (!work.empty()) {
        const std::size_t x = work.front();
        work.pop_front();
        if (!alive[x])
            continue;
        const Tag e = nodes[x].ports[0];
        const Tag b = nodes[x].ports[1];
        if (e == b) {
            alive[x] = false;
            occ.erase(e);
            result.erased.push_back({nodes[x].type, {e, e}});
            continue;
        }
        auto& occ_e = occ[e];
        auto other = std::find_if(occ_e.begin(), occ_e.end(), [&](const Occ& o) { return o.node != x; });
        if (other == occ_e.end())
            continue;
        const Occ target = *other;
        nodes[target.node].ports[target.port] = b;
        occ.erase(e);
        for (auto& o : occ[b])
            if (o.node == x && o.port == 1)
                o = target;
        alive[x] = false;
        result.erased.push_back({nodes[x].type, {e, e}});
        if (is_arrow(nodes[target.node], types))
            work.push_back(target.node);
    }

    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (alive[i])
            result.mol.nodes.push_back(std::move(nodes[i]));
    return result;
}

MolPattern comb_pass(const MolPattern& mol, const TypeRegistry& types)
{
    return comb_pass_detailed(mol, types).mol;
}

std::vector<std::size_t> comb_candidates(const MolPattern& mol, const TypeRegistry& types)
{
    const MolIndex index(mol);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < mol.nodes.size(); ++i) {
        if (!is_arrow(mol.nodes[i], types))
            continue;
        const auto& n = mol.nodes[i];
        if (n.ports[0] == n.ports[1])
            out.push_back(i);
        else if (auto o = index.other_end(n.ports[0], i, 0); o && o->node != i)
            out.push_back(i);
    }
    return out;
}

MolPattern comb_one(const MolPattern& mol, std::size_t arrow, const TypeRegistry& types)
{
    const auto& n = mol.nodes.at(arrow);
    if (!is_arrow(n, types))
        throw Error(ErrorCode::StaleMatch, "node " + std::to_string(arrow + 1) + " is not an Arrow");
    MolPattern out;
    if (n.ports[0] == n.ports[1]) {
        for (std::size_t i = 0; i < mol.nodes.size(); ++i)
            if (i != arrow)
                out.nodes.push_back(mol.nodes[i]);
        return out;
    }
    const MolIndex index(mol);
    auto o = index.other_end(n.ports[0], arrow, 0);
    if (!o || o->node == arrow)
        throw Error(ErrorCode::StaleMatch, "Arrow at node " + std::to_string(arrow + 1) + " cannot be combed");
    for (std::size_t i = 0; i < mol.nodes.size(); ++i) {
        if (i == arrow)
            continue;
        MolNode copy = mol.nodes[i];
        if (i == o->node)
            copy.ports[o->port] = n.ports[1];
        out.nodes.push_back(std::move(copy));
    }
    return out;
}

std::string_view to_string(Policy policy)
{
    return policy == Policy::Random ? "random" : "deterministic";
}

Policy policy_from_string(std::string_view text)
{
    if (text == "random")
        return Policy::Random;
    if (text == "deterministic" || text == "deterministic-priority")
        return Policy::Deterministic;
    throw Error(ErrorCode::BadRequest, "unknown policy '" + std::string(text) + "'");
}

std::map<std::string, double> ReductionConfig::default_weights()
{
    return {{"BETA", 1.0}, {"FAN-IN", 1.0}, {"TERM", 1.0}, {"DIST", 0.5}};
}

double ReductionConfig::weight(const std::string& group) const
{
    auto it = weights.find(group);
    return it == weights.end() ? 1.0 : it->second;
}

namespace {

int kind_priority(RewriteKind kind)
{
    switch (kind) {
    case RewriteKind::Beta:
    case RewriteKind::IcAnnihilate: return 0;
    case RewriteKind::FanIn: return 1;
    case RewriteKind::Term: return 2;
    case RewriteKind::Dist:
    case RewriteKind::IcCommute: return 3;
    case RewriteKind::Comb: return 4;
    }
    return 5;
}

std::vector<Match> select_impl(const std::vector<Match>& matches, const Chemistry& chem, const ReductionConfig& config,
                               Rng& rng, const TokenLedger* ledger)
{
    std::vector<const Match*> order;
    for (const auto& m : matches)
        order.push_back(&m);

    if (config.policy == Policy::Random) {
        std::shuffle(order.begin(), order.end(), rng);
    } else {
        std::stable_sort(order.begin(), order.end(), [&](const Match* a, const Match* b) {
            int pa = kind_priority(chem.rewrites()[a->rewrite].kind);
            int pb = kind_priority(chem.rewrites()[b->rewrite].kind);
            if (pa != pb)
                return pa < pb;
            return a->node_map[1] < b->node_map[1];
        });
    }

    std::vector<bool> used;
    std::map<std::string, std::size_t> tokens_taken;
    std::vector<Match> out;
    for (const Match* m : order) {
        const Rewrite& rw = chem.rewrites()[m->rewrite];
        bool clash = false;
        for (auto idx : m->node_map)
            clash |= idx < used.size() && used[idx];
        if (clash)
            continue;
        if (ledger && ledger->token1_count(rw.name) <= tokens_taken[rw.name])
            continue;
        const double w = config.weight(rw.weight_group);
        bool accept = false;
        if (w >= 1.0)
            accept = true;
        else if (w > 0.0)
            accept = config.policy == Policy::Deterministic || std::bernoulli_distribution(w)(rng);
        if (!accept)
            continue;
        for (auto idx : m->node_map) {
            if (idx >= used.size())
                used.resize(idx + 1, false);
            used[idx] = true;
        }
        ++tokens_taken[rw.name];
        out.push_back(*m);
    }
    return out;
}

} // namespace

std::vector<Match> select_matches(const std::vector<Match>& matches, const Chemistry& chem, const ReductionConfig& config,
                                  Rng& rng)
{
    return select_impl(matches, chem, config, rng, nullptr);
}

std::string_view to_string(Termination t)
{
    switch (t) {
    case Termination::Running: return "running";
    case Termination::NoMatches: return "no_matches";
    case Termination::MaxSteps: return "max_steps";
    case Termination::Empty: return "empty";
    case Termination::NodeBound: return "node_bound";
    }
    return "running";
}

StepRecord census(const MolPattern& mol, std::size_t step)
{
    StepRecord r;
    r.step = step;
    r.nodes_before = r.nodes_pre_comb = r.nodes_after = mol.nodes.size();
    r.edges_after = edge_count(mol);
    r.counts = type_counts(mol);
    return r;
}

StepRecord step(ReductionState& state, const Chemistry& chem, const ReductionConfig& config, Rng& rng, TokenLedger* ledger)
{
    StepRecord rec = census(state.mol, state.steps + 1);
    if (state.mol.empty()) {
        state.status = Termination::Empty;
        return rec;
    }
    auto matches = find_matches(state.mol, chem, config.threads);
    // matches of a disabled group or of a rewrite out of tokens can never fire
    auto live = [&](const Match& m) {
        const Rewrite& rw = chem.rewrites()[m.rewrite];
        return config.weight(rw.weight_group) > 0.0 && (!ledger || ledger->token1_count(rw.name) > 0);
    };
    if (std::none_of(matches.begin(), matches.end(), live)) {
        state.status = Termination::NoMatches;
        return rec;
    }
    auto selected = select_impl(matches, chem, config, rng, ledger);
    for (const auto& m : selected)
        rec.applied.push_back({chem.rewrites()[m.rewrite].name, m.node_map});

    MolPattern next = ledger ? hapax_apply_many(state.mol, selected, chem, *ledger)
                             : apply_matches(state.mol, selected, chem, state.tags);
    rec.nodes_pre_comb = next.nodes.size();
    state.mol = ledger ? hapax_comb(next, chem.types(), *ledger) : comb_pass(next, chem.types());
    rec.nodes_after = state.mol.nodes.size();
    rec.edges_after = edge_count(state.mol);
    rec.counts = type_counts(state.mol);
    ++state.steps;
    if (state.mol.empty())
        state.status = Termination::Empty;
    else if (config.node_bound && state.mol.nodes.size() > config.node_bound)
        state.status = Termination::NodeBound;
    return rec;
}

ReductionTrace reduce(const MolPattern& mol, const Chemistry& chem, const ReductionConfig& config)
{
    ReductionTrace trace;
    trace.seed = config.seed;
    trace.initial_code = canonical_code(mol).to_base32();
    trace.initial = census(mol, 0);

    ReductionState state(mol);
    Rng rng(config.seed);
    std::optional<TokenLedger> ledger;
    if (config.hapax) {
        ledger.emplace(mol);
        ledger->mint_all(chem, config.hapax_tokens);
    }
    if (mol.empty())
        state.status = Termination::Empty;

    while (state.status == Termination::Running && state.steps < config.max_steps) {
        StepRecord rec = step(state, chem, config, rng, ledger ? &*ledger : nullptr);
        if (rec.step != state.steps)
            break; // nothing happened: no matches or empty
        trace.steps.push_back(std::move(rec));
        if (config.snapshot_every && state.steps % config.snapshot_every == 0)
            trace.snapshots.push_back({state.steps, serialize_mol(state.mol, Dialect::Caret)});
    }
    trace.termination = state.status == Termination::Running ? Termination::MaxSteps : state.status;
    trace.final_mol = std::move(state.mol);
    return trace;
}

namespace {

nlohmann::ordered_json counts_json(const std::map<std::string, std::size_t>& counts)
{
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [k, v] : counts)
        j[k] = v;
    return j;
}

} // namespace

std::string step_record_line(const StepRecord& s)
{
    using nlohmann::ordered_json;
    ordered_json j;
    j["record"] = "step";
    j["step"] = s.step;
    ordered_json rewrites = ordered_json::array();
    for (const auto& a : s.applied)
        rewrites.push_back({{"name", a.name}, {"nodes", a.nodes}});
    j["rewrite"] = std::move(rewrites);
    j["nodes_before"] = s.nodes_before;
    j["nodes_pre_comb"] = s.nodes_pre_comb;
    j["nodes_after"] = s.nodes_after;
    j["edges"] = s.edges_after;
    j["counts"] = counts_json(s.counts);
    return j.dump();
}

void write_trace(std::ostream& out, const ReductionTrace& trace)
{
    using nlohmann::ordered_json;
    ordered_json start;
    start["record"] = "start";
    start["seed"] = trace.seed;
    start["code"] = trace.initial_code;
    start["nodes"] = trace.initial.nodes_after;
    start["edges"] = trace.initial.edges_after;
    start["counts"] = counts_json(trace.initial.counts);
    out << start.dump() << '\n';

    std::size_t snap = 0;
    for (const auto& s : trace.steps) {
        out << step_record_line(s) << '\n';
        while (snap < trace.snapshots.size() && trace.snapshots[snap].step == s.step) {
            ordered_json sj;
            sj["record"] = "snapshot";
            sj["step"] = trace.snapshots[snap].step;
            sj["mol"] = trace.snapshots[snap].mol;
            out << sj.dump() << '\n';
            ++snap;
        }
    }

    ordered_json end;
    end["record"] = "end";
    end["termination"] = to_string(trace.termination);
    end["steps"] = trace.steps.size();
    end["nodes"] = trace.final_mol.nodes.size();
    out << end.dump() << '\n';
}

} // namespace chemlab
