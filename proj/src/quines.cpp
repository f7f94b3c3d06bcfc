#include "chemlab/quines.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <thread>

#include "chemlab/canon.hpp"
#include "chemlab/error.hpp"

namespace chemlab {

namespace {

using Adjacency = std::vector<std::vector<bool>>;

// Bron-Kerbosch with pivoting, on the complement of the conflict graph
// restricted to one component. Cliques there are independent sets here.
void bron_kerbosch(const Adjacency& conflict, std::vector<std::size_t>& r, std::vector<std::size_t> p,
                   std::vector<std::size_t> x, std::vector<std::vector<std::size_t>>& out, std::size_t limit, bool& truncated)
{
    if (truncated)
        return;
    if (p.empty() && x.empty()) {
        if (out.size() >= limit) {
            truncated = true;
            return;
        }
        auto set = r;
        std::sort(set.begin(), set.end());
        out.push_back(std::move(set));
        return;
    }
    auto compatible = [&](std::size_t a, std::size_t b) { return a != b && !conflict[a][b]; };

    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = 0;
    for (const auto* pool : {&p, &x})
        for (auto u : *pool) {
            std::size_t n = 0;
            for (auto v : p)
                n += compatible(u, v);
            if (n > best) {
                best = n;
                pivot = u;
            }
        }

    std::vector<std::size_t> candidates;
    for (auto v : p)
        if (!compatible(pivot, v))
            candidates.push_back(v);
    for (auto v : candidates) {
        std::vector<std::size_t> p2, x2;
        for (auto u : p)
            if (compatible(v, u))
                p2.push_back(u);
        for (auto u : x)
            if (compatible(v, u))
                x2.push_back(u);
        r.push_back(v);
        bron_kerbosch(conflict, r, std::move(p2), std::move(x2), out, limit, truncated);
        r.pop_back();
        if (truncated)
            return;
        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

} // namespace

MatchCollections maximal_collections(const MolPattern& mol, const Chemistry& chem, std::size_t limit)
{
    MatchCollections result;
    result.matches = find_matches(mol, chem);
    const std::size_t n = result.matches.size();
    if (n == 0 || limit == 0) {
        result.truncated = n > 0;
        return result;
    }

    Adjacency conflict(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (conflicts(result.matches[i], result.matches[j]))
                conflict[i][j] = conflict[j][i] = true;

    std::vector<int> component(n, -1);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t s = 0; s < n; ++s) {
        if (component[s] >= 0)
            continue;
        const int c = static_cast<int>(members.size());
        members.emplace_back();
        std::vector<std::size_t> stack{s};
        component[s] = c;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            members[c].push_back(u);
            for (std::size_t v = 0; v < n; ++v)
                if (conflict[u][v] && component[v] < 0) {
                    component[v] = c;
                    stack.push_back(v);
                }
        }
        std::sort(members[c].begin(), members[c].end());
    }

    std::vector<std::vector<std::vector<std::size_t>>> per_component;
    for (const auto& m : members) {
        std::vector<std::vector<std::size_t>> sets;
        std::vector<std::size_t> r;
        bool truncated = false;
        bron_kerbosch(conflict, r, m, {}, sets, limit, truncated);
        std::sort(sets.begin(), sets.end());
        result.truncated |= truncated;
        per_component.push_back(std::move(sets));
    }

    std::vector<std::size_t> digit(per_component.size(), 0);
    for (bool done = false; !done;) {
        if (result.sets.size() >= limit) {
            result.truncated = true;
            break;
        }
        std::vector<std::size_t> set;
        for (std::size_t c = 0; c < per_component.size(); ++c) {
            const auto& part = per_component[c][digit[c]];
            set.insert(set.end(), part.begin(), part.end());
        }
        std::sort(set.begin(), set.end());
        result.sets.push_back(std::move(set));

        for (std::size_t c = per_component.size();;) {
            if (c == 0) {
                done = true;
                break;
            }
            --c;
            if (++digit[c] < per_component[c].size())
                break;
            digit[c] = 0;
        }
    }
    return result;
}

std::string_view to_string(QuineStatus s)
{
    switch (s) {
    case QuineStatus::Quine: return "quine";
    case QuineStatus::NotQuine: return "not_quine";
    case QuineStatus::Inconclusive: return "inconclusive";
    }
    return "not_quine";
}

MolPattern apply_collection(const MolPattern& mol, const std::vector<Match>& collection, const Chemistry& chem)
{
    TagSource tags(mol);
    return comb_pass(apply_matches(mol, collection, chem, tags), chem.types());
}

QuineVerdict is_quine(const MolPattern& mol, const Chemistry& full_chem, const QuineLimits& limits)
{
    const Chemistry chem = limits.masked.empty() ? full_chem : full_chem.without(limits.masked);
    QuineVerdict verdict;
    verdict.limit = limits.collections;
    auto cols = maximal_collections(mol, chem, limits.collections);
    const auto target = canonical_code(mol);

    for (const auto& set : cols.sets) {
        ++verdict.collections_examined;
        std::vector<Match> collection;
        for (auto i : set)
            collection.push_back(cols.matches[i]);
        if (canonical_code(apply_collection(mol, collection, chem)) != target)
            continue;
        // Witness replay from scratch; a mismatch is an engine bug.
        if (!is_isomorphic(apply_collection(mol, collection, chem), mol))
            throw std::logic_error("quine witness failed to replay");
        verdict.status = QuineStatus::Quine;
        verdict.witness = std::move(collection);
        return verdict;
    }
    verdict.status = cols.truncated ? QuineStatus::Inconclusive : QuineStatus::NotQuine;
    return verdict;
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial)
{
    // splitmix64 over base + trial
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

QuineProfile empirical_profile(const MolPattern& mol, const Chemistry& chem, const ReductionConfig& config,
                               std::size_t trials, unsigned threads)
{
    QuineProfile profile;
    profile.trials = trials;
    profile.node_bound = config.node_bound ? config.node_bound : std::max<std::size_t>(100, 10 * mol.nodes.size());

    struct Outcome {
        Termination termination = Termination::Running;
        std::size_t steps = 0;
        std::size_t final_nodes = 0;
        std::size_t max_nodes = 0;
        std::size_t min_nodes = 0;
    };
    std::vector<Outcome> outcomes(trials);

    auto run = [&](std::size_t i) {
        ReductionConfig c = config;
        c.seed = trial_seed(config.seed, i);
        c.node_bound = profile.node_bound;
        c.threads = 1;
        c.snapshot_every = 0;
        ReductionTrace t = reduce(mol, chem, c);
        Outcome& o = outcomes[i];
        o.termination = t.termination;
        o.steps = t.steps.size();
        o.final_nodes = t.final_mol.nodes.size();
        o.max_nodes = o.min_nodes = mol.nodes.size();
        for (const auto& s : t.steps) {
            o.max_nodes = std::max(o.max_nodes, s.nodes_after);
            o.min_nodes = std::min(o.min_nodes, s.nodes_after);
        }
    };

    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, trials))));
    if (threads == 1) {
        for (std::size_t i = 0; i < trials; ++i)
            run(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (std::size_t i = t; i < trials; i += threads)
                    run(i);
            });
        for (auto& th : pool)
            th.join();
    }

    for (const auto& o : outcomes) {
        switch (o.termination) {
        case Termination::NoMatches:
        case Termination::Empty:
            ++profile.died;
            profile.lifespans.push_back(o.steps);
            break;
        case Termination::NodeBound: ++profile.grew_beyond_bound; break;
        default: ++profile.survived_horizon; break;
        }
        profile.final_nodes.push_back(o.final_nodes);
        profile.max_nodes.push_back(o.max_nodes);
        profile.min_nodes.push_back(o.min_nodes);
    }
    return profile;
}

MolPattern random_egg(const std::vector<std::string>& types, const Chemistry& chem, Rng& rng)
{
    struct Half {
        std::size_t node;
        std::size_t port;
    };
    MolPattern egg;
    std::vector<Half> ins, outs, any;
    bool saw_oriented = false, saw_unoriented = false;
    for (const auto& name : types) {
        const NodeType& t = chem.types().at(name);
        const std::size_t idx = egg.nodes.size();
        egg.nodes.push_back({t.name, std::vector<Tag>(t.valence())});
        (t.unoriented ? saw_unoriented : saw_oriented) = true;
        for (std::size_t k = 0; k < t.valence(); ++k) {
            any.push_back({idx, k});
            (t.is_out(k) ? outs : ins).push_back({idx, k});
        }
    }
    if (saw_oriented && saw_unoriented)
        throw Error(ErrorCode::ParityMismatch, "cannot mix oriented and unoriented node types in one egg");

    std::size_t next = 1;
    auto join = [&](const Half& a, const Half& b) {
        const Tag tag = std::to_string(next++);
        egg.nodes[a.node].ports[a.port] = tag;
        egg.nodes[b.node].ports[b.port] = tag;
    };
    if (saw_unoriented) {
        if (any.size() % 2 != 0)
            throw Error(ErrorCode::ParityMismatch, "odd number of half-edges (" + std::to_string(any.size()) + ")");
        std::shuffle(any.begin(), any.end(), rng);
        for (std::size_t i = 0; i + 1 < any.size(); i += 2)
            join(any[i], any[i + 1]);
    } else {
        if (ins.size() != outs.size())
            throw Error(ErrorCode::ParityMismatch, std::to_string(ins.size()) + " in half-edges but " +
                                                       std::to_string(outs.size()) + " out half-edges");
        std::shuffle(ins.begin(), ins.end(), rng);
        for (std::size_t i = 0; i < outs.size(); ++i)
            join(outs[i], ins[i]);
    }
    return egg;
}

} // namespace chemlab
