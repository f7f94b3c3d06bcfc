#include "chemlab/report.hpp"

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace chemlab {

std::shared_ptr<const Chemistry> resolve_chemistry(const std::string& name_or_path)
{
    for (const auto& n : builtin_names())
        if (n == name_or_path)
            return std::shared_ptr<const Chemistry>(&builtin(n), [](const Chemistry*) {});
    if (std::filesystem::is_regular_file(name_or_path)) {
        std::ifstream in(name_or_path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return std::make_shared<const Chemistry>(load_chemistry(ss.str()));
    }
    throw Error(ErrorCode::UnknownChemistry, "unknown chemistry '" + name_or_path + "'");
}

std::map<std::string, double> parse_weights(std::string_view text, std::map<std::string, double> base)
{
    std::size_t at = 0;
    while (at < text.size()) {
        std::size_t comma = text.find(',', at);
        if (comma == std::string_view::npos)
            comma = text.size();
        std::string_view item = text.substr(at, comma - at);
        at = comma + 1;
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw Error(ErrorCode::BadRequest, "weight '" + std::string(item) + "' is not GROUP=VALUE");
        std::string value(item.substr(eq + 1));
        double w = 0;
        std::size_t used = 0;
        try {
            w = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != value.size() || value.empty() || w < 0.0 || w > 1.0)
            throw Error(ErrorCode::BadRequest, "weight '" + std::string(item) + "' needs a value in [0, 1]");
        base[std::string(item.substr(0, eq))] = w;
    }
    return base;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

nlohmann::ordered_json match_json(const Match& m, const Chemistry& chem, std::size_t index)
{
    const Rewrite& rw = chem.rewrites()[m.rewrite];
    nlohmann::ordered_json j;
    j["index"] = index;
    j["name"] = rw.name;
    j["kind"] = to_string(rw.kind);
    j["group"] = rw.weight_group;
    j["nodes"] = m.node_map;
    return j;
}

nlohmann::ordered_json verdict_json(const QuineVerdict& v, const Chemistry& chem)
{
    nlohmann::ordered_json j;
    j["status"] = to_string(v.status);
    j["collections_examined"] = v.collections_examined;
    j["limit"] = v.limit;
    auto w = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < v.witness.size(); ++i)
        w.push_back(match_json(v.witness[i], chem, i));
    j["witness"] = std::move(w);
    return j;
}

nlohmann::ordered_json profile_json(const QuineProfile& p)
{
    nlohmann::ordered_json j;
    j["trials"] = p.trials;
    j["died"] = p.died;
    j["survived_horizon"] = p.survived_horizon;
    j["grew_beyond_bound"] = p.grew_beyond_bound;
    j["node_bound"] = p.node_bound;
    j["lifespans"] = p.lifespans;
    j["final_nodes"] = p.final_nodes;
    j["min_nodes"] = p.min_nodes;
    j["max_nodes"] = p.max_nodes;
    return j;
}

nlohmann::ordered_json error_json(const Error& e)
{
    nlohmann::ordered_json j;
    j["code"] = to_string(e.code());
    j["message"] = e.what();
    if (e.line())
        j["line"] = e.line();
    if (e.column())
        j["column"] = e.column();
    return {{"error", j}};
}

std::string verdict_text(const QuineVerdict& v, const Chemistry& chem)
{
    std::ostringstream out;
    out << "status: " << to_string(v.status) << '\n';
    out << "collections_examined: " << v.collections_examined << '\n';
    if (v.status == QuineStatus::Inconclusive)
        out << "limit: " << v.limit << '\n';
    for (const auto& m : v.witness) {
        out << "witness: " << chem.rewrites()[m.rewrite].name;
        for (auto n : m.node_map)
            out << ' ' << n + 1;
        out << '\n';
    }
    return out.str();
}

std::string profile_text(const QuineProfile& p)
{
    std::ostringstream out;
    out << "trials: " << p.trials << '\n';
    out << "died: " << p.died << '\n';
    out << "survived_horizon: " << p.survived_horizon << '\n';
    out << "grew_beyond_bound: " << p.grew_beyond_bound << '\n';
    out << "node_bound: " << p.node_bound << '\n';
    if (!p.lifespans.empty()) {
        auto sum = std::accumulate(p.lifespans.begin(), p.lifespans.end(), std::size_t{0});
        out << "mean_lifespan: " << static_cast<double>(sum) / static_cast<double>(p.lifespans.size()) << '\n';
    }
    if (!p.max_nodes.empty())
        out << "max_nodes: " << *std::max_element(p.max_nodes.begin(), p.max_nodes.end()) << '\n';
    if (!p.min_nodes.empty())
        out << "min_nodes: " << *std::min_element(p.min_nodes.begin(), p.min_nodes.end()) << '\n';
    return out.str();
}

} // namespace chemlab
