#include "chemlab/canon.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace chemlab {

namespace {

struct End {
    int node = -1;
    int port = -1;
};

using Adjacency = std::vector<std::vector<End>>;

Adjacency build_adjacency(const MolPattern& p)
{
    Adjacency adj(p.nodes.size());
    std::unordered_map<Tag, End> first;
    for (std::size_t i = 0; i < p.nodes.size(); ++i) {
        adj[i].resize(p.nodes[i].ports.size());
        for (std::size_t k = 0; k < p.nodes[i].ports.size(); ++k) {
            End here{static_cast<int>(i), static_cast<int>(k)};
            auto [it, inserted] = first.emplace(p.nodes[i].ports[k], here);
            if (!inserted) {
                adj[i][k] = it->second;
                adj[it->second.node][it->second.port] = here;
            }
        }
    }
    return adj;
}

std::vector<int> refine_colors(const MolPattern& p, const Adjacency& adj)
{
    const std::size_t n = p.nodes.size();
    std::vector<int> color(n);
    {
        std::map<std::string, int> rank;
        for (const auto& node : p.nodes)
            rank.emplace(node.type, 0);
        int r = 0;
        for (auto& [name, v] : rank)
            v = r++;
        for (std::size_t i = 0; i < n; ++i)
            color[i] = rank[p.nodes[i].type];
    }
    std::size_t classes = 0;
    for (;;) {
        std::vector<std::vector<int>> sig(n);
        for (std::size_t i = 0; i < n; ++i) {
            sig[i].push_back(color[i]);
            for (const End& e : adj[i]) {
                sig[i].push_back(e.node < 0 ? -1 : color[e.node]);
                sig[i].push_back(e.port);
            }
        }
        std::map<std::vector<int>, int> rank;
        for (const auto& s : sig)
            rank.emplace(s, 0);
        int r = 0;
        for (auto& [s, v] : rank)
            v = r++;
        for (std::size_t i = 0; i < n; ++i)
            color[i] = rank[sig[i]];
        if (rank.size() == classes)
            break;
        classes = rank.size();
    }
    return color;
}

std::string encode_from_root(const MolPattern& p, const Adjacency& adj, int root, std::vector<int>& local)
{
    std::vector<int> order;
    order.push_back(root);
    local[root] = 0;
    for (std::size_t head = 0; head < order.size(); ++head)
        for (const End& e : adj[order[head]])
            if (e.node >= 0 && local[e.node] < 0) {
                local[e.node] = static_cast<int>(order.size());
                order.push_back(e.node);
            }

    std::string out;
    for (int v : order) {
        const auto& type = p.nodes[v].type;
        out += std::to_string(type.size());
        out += ':';
        out += type;
        out += '[';
        for (const End& e : adj[v]) {
            if (e.node < 0) {
                out += '-';
            } else {
                out += std::to_string(local[e.node]);
                out += '.';
                out += std::to_string(e.port);
            }
            out += ',';
        }
        out += ']';
    }
    for (int v : order)
        local[v] = -1;
    return out;
}

constexpr char kBase32[] = "abcdefghijklmnopqrstuvwxyz234567";

} // namespace

std::string CanonicalCode::to_base32() const
{
    std::string out;
    std::uint32_t buffer = 0;
    int bits = 0;
    for (unsigned char c : bytes) {
        buffer = (buffer << 8) | c;
        bits += 8;
        while (bits >= 5) {
            out += kBase32[(buffer >> (bits - 5)) & 31];
            bits -= 5;
        }
    }
    if (bits > 0)
        out += kBase32[(buffer << (5 - bits)) & 31];
    return out;
}

CanonicalCode canonical_code(const MolPattern& pattern)
{
    const std::size_t n = pattern.nodes.size();
    if (n == 0)
        return {};
    const Adjacency adj = build_adjacency(pattern);
    const std::vector<int> color = refine_colors(pattern, adj);

    std::vector<int> component(n, -1);
    std::vector<std::vector<int>> members;
    for (std::size_t s = 0; s < n; ++s) {
        if (component[s] >= 0)
            continue;
        const int c = static_cast<int>(members.size());
        members.emplace_back();
        std::deque<int> queue{static_cast<int>(s)};
        component[s] = c;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            members[c].push_back(v);
            for (const End& e : adj[v])
                if (e.node >= 0 && component[e.node] < 0) {
                    component[e.node] = c;
                    queue.push_back(e.node);
                }
        }
    }

    std::vector<int> local(n, -1);
    std::vector<std::string> parts;
    parts.reserve(members.size());
    for (const auto& comp : members) {
        int min_color = color[comp.front()];
        for (int v : comp)
            min_color = std::min(min_color, color[v]);
        std::string best;
        bool have = false;
        for (int v : comp) {
            if (color[v] != min_color)
                continue;
            std::string s = encode_from_root(pattern, adj, v, local);
            if (!have || s < best) {
                best = std::move(s);
                have = true;
            }
        }
        parts.push_back(std::move(best));
    }
    std::sort(parts.begin(), parts.end());

    CanonicalCode code;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            code.bytes += '|';
        code.bytes += parts[i];
    }
    return code;
}

bool is_isomorphic(const MolPattern& a, const MolPattern& b)
{
    if (a.nodes.size() != b.nodes.size())
        return false;
    if (type_counts(a) != type_counts(b))
        return false;
    return canonical_code(a) == canonical_code(b);
}

} // namespace chemlab
