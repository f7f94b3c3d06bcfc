#include "chemlab/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "chemlab/canon.hpp"
#include "chemlab/d3.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/error.hpp"
#include "chemlab/lambda.hpp"
#include "chemlab/library.hpp"
#include "chemlab/quines.hpp"
#include "chemlab/report.hpp"
#include "chemlab/serve.hpp"

namespace chemlab {

namespace {

struct Input {
    std::string text;
    std::string chemistry; // from a library entry, if any
};

std::string read_all(std::istream& in)
{
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// "-" is stdin, "lib:ID" a library entry, anything else a file.
Input read_input(const std::string& source, const std::string& libdir, std::istream& in)
{
    if (source == "-")
        return {read_all(in), {}};
    if (source.starts_with("lib:")) {
        auto e = load_library_entry(libdir.empty() ? default_library_dir() : std::filesystem::path(libdir), source.substr(4));
        return {e.mol_text, e.chemistry};
    }
    std::ifstream f(source, std::ios::binary);
    if (!f)
        throw Error(ErrorCode::NotFound, "cannot read '" + source + "'");
    return {read_all(f), {}};
}

struct Common {
    std::string input = "-";
    std::string chem;
    std::string libdir;

    std::shared_ptr<const Chemistry> chemistry(const Input& in) const
    {
        if (!chem.empty())
            return resolve_chemistry(chem);
        return resolve_chemistry(in.chemistry.empty() ? "chemlambda-v2" : in.chemistry);
    }
};

struct Loaded {
    MolPattern mol;
    std::shared_ptr<const Chemistry> chem;
    Dialect dialect;
};

Loaded load(const Common& c, std::istream& in)
{
    Input input = read_input(c.input, c.libdir, in);
    auto chem = c.chemistry(input);
    Dialect d = detect_dialect(input.text);
    return {parse_mol(input.text, chem->types(), d), chem, d};
}

void add_common(CLI::App* sub, Common& c, bool with_input = true)
{
    if (with_input)
        sub->add_option("input", c.input, "mol file, '-' for stdin, or lib:ID")->capture_default_str();
    sub->add_option("--chem", c.chem, "chemistry name or config file (default chemlambda-v2)");
    sub->add_option("--libdir", c.libdir, "graph library directory");
}

std::string diagnostic(const Error& e)
{
    std::string s = "error: " + std::string(to_string(e.code()));
    if (e.line())
        s += " at line " + std::to_string(e.line());
    if (e.column())
        s += ", column " + std::to_string(e.column());
    return s + ": " + e.what();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Graph-rewriting artificial chemistry lab", "chemlab"};
    app.require_subcommand(1);

    // validate
    Common validate_c;
    auto* validate_cmd = app.add_subcommand("validate", "parse and check a mol file");
    add_common(validate_cmd, validate_c);

    // reduce
    Common reduce_c;
    std::uint64_t seed = 0;
    std::size_t steps = 1000;
    std::string policy = "random";
    std::string weights;
    bool hapax = false;
    std::size_t hapax_tokens = 1000;
    std::string trace_path;
    std::size_t snapshot_every = 0;
    unsigned threads = 1;
    bool caret = false;
    bool cap_first = false;
    std::size_t node_bound = 0;
    auto* reduce_cmd = app.add_subcommand("reduce", "run a reduction and print the final mol");
    add_common(reduce_cmd, reduce_c);
    reduce_cmd->add_option("--seed", seed, "RNG seed");
    reduce_cmd->add_option("--steps", steps, "maximum number of steps")->capture_default_str();
    reduce_cmd->add_option("--policy", policy, "random | deterministic")->capture_default_str();
    reduce_cmd->add_option("--weights", weights, "GROUP=P,... e.g. DIST=0.5,BETA=1");
    reduce_cmd->add_flag("--hapax", hapax, "token-conservative rewriting");
    reduce_cmd->add_option("--hapax-tokens", hapax_tokens, "Token1 per rewrite")->capture_default_str();
    reduce_cmd->add_option("--trace", trace_path, "write the JSON-lines trace here ('-' for stdout)");
    reduce_cmd->add_option("--snapshot-every", snapshot_every, "mol snapshot every k steps");
    reduce_cmd->add_option("--threads", threads, "threads for match finding")->capture_default_str();
    reduce_cmd->add_option("--node-bound", node_bound, "stop above this many nodes");
    reduce_cmd->add_flag("--cap", cap_first, "cap free half-edges before reducing");
    reduce_cmd->add_flag("--caret", caret, "print the final mol in the caret dialect");

    // quine
    Common quine_c;
    bool empirical = false;
    bool exact = false;
    std::size_t trials = 100;
    std::size_t limit = 100000;
    std::string mask;
    bool json = false;
    auto* quine_cmd = app.add_subcommand("quine", "exact quine check or empirical profile");
    add_common(quine_cmd, quine_c);
    quine_cmd->add_flag("--exact", exact, "decide by enumerating maximal collections (default)");
    quine_cmd->add_flag("--empirical", empirical, "profile random reductions");
    quine_cmd->add_option("--trials", trials, "empirical trials")->capture_default_str();
    quine_cmd->add_option("--steps", steps, "empirical horizon")->capture_default_str();
    quine_cmd->add_option("--limit", limit, "collection limit for --exact")->capture_default_str();
    quine_cmd->add_option("--seed", seed, "base seed");
    quine_cmd->add_option("--policy", policy, "random | deterministic")->capture_default_str();
    quine_cmd->add_option("--weights", weights, "GROUP=P,...");
    quine_cmd->add_option("--node-bound", node_bound, "growth bound for --empirical");
    quine_cmd->add_option("--mask", mask, "rewrites to leave out, comma separated");
    quine_cmd->add_option("--threads", threads, "profile threads");
    quine_cmd->add_flag("--json", json, "JSON output");

    // egg
    Common egg_c;
    std::string types;
    std::size_t count = 1;
    bool egg_newline = false;
    auto* egg_cmd = app.add_subcommand("egg", "random molecules with a given node multiset");
    add_common(egg_cmd, egg_c, false);
    egg_cmd->add_option("--types", types, "node types, e.g. A,L,FI,FO")->required();
    egg_cmd->add_option("--seed", seed, "RNG seed");
    egg_cmd->add_option("--count", count, "number of eggs")->capture_default_str();
    egg_cmd->add_flag("--newline", egg_newline, "newline dialect, eggs separated by blank lines");

    // lambda2mol
    std::string term = "-";
    std::string fanout = "FO";
    bool lambda_caret = false;
    auto* lambda_cmd = app.add_subcommand("lambda2mol", "compile a lambda term to a chemlambda molecule");
    lambda_cmd->add_option("term", term, "term text, or '-' for stdin")->capture_default_str();
    lambda_cmd->add_option("--fanout", fanout, "FO | FOE")->check(CLI::IsMember({"FO", "FOE"}))->capture_default_str();
    lambda_cmd->add_flag("--caret", lambda_caret, "caret dialect");

    // export-d3
    Common d3_c;
    auto* d3_cmd = app.add_subcommand("export-d3", "force-graph nodes/links document");
    add_common(d3_cmd, d3_c);

    // canon
    Common canon_c;
    auto* canon_cmd = app.add_subcommand("canon", "base-32 canonical code");
    add_common(canon_cmd, canon_c);

    // serve
    ServeOptions serve_opts;
    std::string serve_libdir;
    auto* serve_cmd = app.add_subcommand("serve", "HTTP endpoint for the lab UI");
    serve_cmd->add_option("--port", serve_opts.port, "port (0 = any)")->capture_default_str();
    serve_cmd->add_option("--host", serve_opts.host, "bind address")->capture_default_str();
    serve_cmd->add_option("--libdir", serve_libdir, "graph library directory");

    // library
    std::string lib_action = "list";
    std::string lib_id;
    std::string lib_dir;
    auto* lib_cmd = app.add_subcommand("library", "list or show graph library entries");
    lib_cmd->add_option("action", lib_action, "list | show")->check(CLI::IsMember({"list", "show"}))->capture_default_str();
    lib_cmd->add_option("id", lib_id, "entry id for show");
    lib_cmd->add_option("--libdir", lib_dir, "graph library directory");

    // chem
    std::string chem_action = "list";
    std::string chem_arg;
    auto* chem_cmd = app.add_subcommand("chem", "list, show or check chemistries");
    chem_cmd->add_option("action", chem_action, "list | show | check")
        ->check(CLI::IsMember({"list", "show", "check"}))
        ->capture_default_str();
    chem_cmd->add_option("name", chem_arg, "built-in name (show) or config file (check)");

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*validate_cmd) {
            auto l = load(validate_c, in);
            out << "ok: " << l.mol.nodes.size() << " nodes, " << edge_count(l.mol) << " edges, " << free_tags(l.mol).size()
                << " free\n";
        } else if (*reduce_cmd) {
            auto l = load(reduce_c, in);
            ReductionConfig config;
            config.seed = seed;
            config.max_steps = steps;
            config.policy = policy_from_string(policy);
            config.weights = parse_weights(weights);
            config.hapax = hapax;
            config.hapax_tokens = hapax_tokens;
            config.snapshot_every = snapshot_every;
            config.threads = threads;
            config.node_bound = node_bound;
            MolPattern mol = cap_first ? cap(l.mol, l.chem->types()) : l.mol;
            auto trace = reduce(mol, *l.chem, config);
            if (trace_path == "-") {
                write_trace(out, trace);
            } else {
                if (!trace_path.empty()) {
                    std::ofstream t(trace_path, std::ios::binary);
                    if (!t)
                        throw Error(ErrorCode::NotFound, "cannot write '" + trace_path + "'");
                    write_trace(t, trace);
                }
                auto text = serialize_mol(trace.final_mol, caret ? Dialect::Caret : l.dialect);
                out << text << (text.empty() ? "" : "\n");
            }
        } else if (*quine_cmd) {
            auto l = load(quine_c, in);
            if (empirical && exact)
                throw Error(ErrorCode::BadRequest, "choose one of --exact and --empirical");
            if (empirical) {
                if (trials == 0)
                    throw Error(ErrorCode::BadRequest, "--trials must be at least 1");
                ReductionConfig config;
                config.seed = seed;
                config.max_steps = steps;
                config.policy = policy_from_string(policy);
                config.weights = parse_weights(weights);
                config.node_bound = node_bound;
                auto p = empirical_profile(l.mol, *l.chem, config, trials,
                                           threads > 1 ? threads : std::max(1u, std::thread::hardware_concurrency()));
                out << (json ? profile_json(p).dump(2) + "\n" : profile_text(p));
            } else {
                QuineLimits limits;
                limits.collections = limit;
                for (const auto& m : split_list(mask))
                    limits.masked.insert(m);
                auto v = is_quine(l.mol, *l.chem, limits);
                out << (json ? verdict_json(v, *l.chem).dump(2) + "\n" : verdict_text(v, *l.chem));
            }
        } else if (*egg_cmd) {
            auto chem = resolve_chemistry(egg_c.chem.empty() ? "chemlambda+ic" : egg_c.chem);
            auto list = split_list(types);
            Rng rng(seed);
            for (std::size_t i = 0; i < count; ++i) {
                auto egg = random_egg(list, *chem, rng);
                if (egg_newline)
                    out << (i ? "\n" : "") << serialize_mol(egg) << "\n";
                else
                    out << serialize_mol(egg, Dialect::Caret) << "\n";
            }
        } else if (*lambda_cmd) {
            std::string text = term == "-" ? read_all(in) : term;
            LambdaOptions opts;
            opts.fanout = fanout == "FOE" ? Fanout::FOE : Fanout::FO;
            auto mol = term_to_mol(parse_lambda(text), opts);
            out << serialize_mol(mol, lambda_caret ? Dialect::Caret : Dialect::Newline) << "\n";
        } else if (*d3_cmd) {
            auto l = load(d3_c, in);
            out << export_d3(l.mol, l.chem->types()).dump(2) << "\n";
        } else if (*canon_cmd) {
            auto l = load(canon_c, in);
            out << canonical_code(cap(l.mol, l.chem->types())).to_base32() << "\n";
        } else if (*serve_cmd) {
            serve_opts.library_dir = serve_libdir;
            Server server(serve_opts);
            err << "serving on http://" << serve_opts.host << ":" << serve_opts.port << "\n";
            server.serve_forever();
        } else if (*lib_cmd) {
            std::filesystem::path dir = lib_dir.empty() ? default_library_dir() : std::filesystem::path(lib_dir);
            if (lib_action == "list") {
                for (const auto& e : load_library(dir)) {
                    std::string first = e.comment.substr(0, e.comment.find('\n'));
                    out << e.id << "\t" << e.chemistry << "\t" << first << "\n";
                }
            } else {
                if (lib_id.empty())
                    throw Error(ErrorCode::BadRequest, "library show needs an id");
                auto e = load_library_entry(dir, lib_id);
                out << e.mol_text << (e.mol_text.ends_with('\n') ? "" : "\n");
            }
        } else if (*chem_cmd) {
            if (chem_action == "list") {
                for (const auto& n : builtin_names()) {
                    const auto& c = builtin(n);
                    out << n << "\t" << c.types().size() << " types\t" << c.rewrites().size() << " rewrites\n";
                }
            } else if (chem_action == "show") {
                out << builtin_source(chem_arg.empty() ? "chemlambda-v2" : chem_arg);
            } else {
                if (chem_arg.empty())
                    throw Error(ErrorCode::BadRequest, "chem check needs a config file");
                auto c = resolve_chemistry(chem_arg);
                out << "ok: " << c->name() << ", " << c->types().size() << " types, " << c->rewrites().size()
                    << " rewrites\n";
                for (const auto& rw : c->rewrites())
                    out << "  " << rw.name << "\t" << to_string(rw.kind) << "\tdelta " << rw.node_delta() << "\n";
            }
        }
    } catch (const Error& e) {
        err << diagnostic(e) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace chemlab
