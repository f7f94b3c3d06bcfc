#include "chemlab/serve.hpp"

#include <sstream>

#include <httplib.h>

#include "chemlab/canon.hpp"
#include "chemlab/d3.hpp"
#include "chemlab/error.hpp"
#include "chemlab/lambda.hpp"
#include "chemlab/library.hpp"
#include "chemlab/quines.hpp"
#include "chemlab/report.hpp"

namespace chemlab {

namespace {

Json parse_line(const std::string& line)
{
    return Json::parse(line);
}

std::string start_line(const MolPattern& mol, std::uint64_t seed)
{
    ReductionTrace t;
    t.seed = seed;
    t.initial_code = canonical_code(mol).to_base32();
    t.initial = census(mol, 0);
    std::ostringstream out;
    write_trace(out, t);
    std::string s = out.str();
    return s.substr(0, s.find('\n'));
}

template <class T>
T field(const Json& body, const char* key, T fallback)
{
    if (!body.contains(key) || body[key].is_null())
        return fallback;
    try {
        return body[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::BadRequest, std::string("field '") + key + "' has the wrong type");
    }
}

std::map<std::string, double> weights_from(const Json& j, std::map<std::string, double> base)
{
    if (!j.is_object())
        throw Error(ErrorCode::BadRequest, "weights must be an object");
    for (const auto& [k, v] : j.items()) {
        if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0)
            throw Error(ErrorCode::BadRequest, "weight '" + k + "' needs a number in [0, 1]");
        base[k] = v.get<double>();
    }
    return base;
}

ReductionConfig config_from(const Json& body)
{
    ReductionConfig c;
    c.seed = field<std::uint64_t>(body, "seed", 0);
    c.policy = policy_from_string(field<std::string>(body, "policy", "random"));
    if (body.contains("weights"))
        c.weights = weights_from(body["weights"], c.weights);
    c.hapax = field<bool>(body, "hapax", false);
    c.hapax_tokens = field<std::size_t>(body, "hapax_tokens", c.hapax_tokens);
    c.node_bound = field<std::size_t>(body, "node_bound", 0);
    c.max_steps = field<std::size_t>(body, "steps", c.max_steps);
    return c;
}

} // namespace

Session::Session(std::string id, MolPattern mol, std::shared_ptr<const Chemistry> chem, ReductionConfig config)
    : id_(std::move(id)), chem_(std::move(chem)), config_(std::move(config)), state_(std::move(mol)), rng_(config_.seed)
{
    if (config_.hapax) {
        ledger_.emplace(state_.mol);
        ledger_->mint_all(*chem_, config_.hapax_tokens);
    }
    start_line_ = start_line(state_.mol, config_.seed);
    if (state_.mol.empty())
        state_.status = Termination::Empty;
}

Session::~Session()
{
    close();
}

void Session::close()
{
    std::thread t;
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
        running_ = false;
        t = std::move(runner_);
    }
    changed_.notify_all();
    if (t.joinable() && t.get_id() != std::this_thread::get_id())
        t.join();
    else if (t.joinable())
        t.detach();
}

void Session::record(const StepRecord& rec)
{
    std::string line = step_record_line(rec);
    trace_.push_back(line);
    events_.push_back(line);
    changed_.notify_all();
}

Json Session::status_locked() const
{
    Json j;
    j["id"] = id_;
    j["step"] = state_.steps;
    j["status"] = to_string(state_.status);
    j["running"] = running_;
    j["nodes"] = state_.mol.nodes.size();
    j["policy"] = to_string(config_.policy);
    Json w = Json::object();
    for (const auto& [k, v] : config_.weights)
        w[k] = v;
    j["weights"] = std::move(w);
    j["hapax"] = config_.hapax;
    return j;
}

Json Session::status() const
{
    std::lock_guard lock(mutex_);
    return status_locked();
}

Json Session::step_locked()
{
    if (state_.status != Termination::Running)
        return nullptr;
    const std::size_t before = state_.steps;
    StepRecord rec = chemlab::step(state_, *chem_, config_, rng_, ledger_ ? &*ledger_ : nullptr);
    if (state_.steps == before) {
        events_.push_back(status_locked().dump());
        changed_.notify_all();
        return nullptr;
    }
    record(rec);
    return parse_line(trace_.back());
}

Json Session::step(std::size_t n)
{
    std::lock_guard lock(mutex_);
    Json records = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
        Json r = step_locked();
        if (r.is_null())
            break;
        records.push_back(std::move(r));
    }
    Json j = status_locked();
    j["records"] = std::move(records);
    return j;
}

Json Session::run(std::size_t steps, std::chrono::milliseconds interval)
{
    std::thread old;
    {
        std::lock_guard lock(mutex_);
        if (running_ || closed_)
            return status_locked();
        old = std::move(runner_);
    }
    if (old.joinable())
        old.join();

    std::lock_guard lock(mutex_);
    if (running_ || closed_)
        return status_locked();
    running_ = true;
    run_budget_ = steps;
    runner_ = std::thread([this, interval] {
        std::unique_lock lk(mutex_);
        while (running_ && !closed_) {
            if (step_locked().is_null() || (run_budget_ && --run_budget_ == 0)) {
                running_ = false;
                break;
            }
            changed_.wait_for(lk, interval, [&] { return !running_ || closed_; });
        }
        events_.push_back(status_locked().dump());
        changed_.notify_all();
    });
    return status_locked();
}

void Session::stop_runner()
{
    std::thread t;
    {
        std::lock_guard lock(mutex_);
        running_ = false;
        t = std::move(runner_);
    }
    changed_.notify_all();
    if (t.joinable())
        t.join();
}

Json Session::pause()
{
    stop_runner();
    return status();
}

Json Session::set_weights(const std::map<std::string, double>& weights)
{
    std::lock_guard lock(mutex_);
    for (const auto& [k, v] : weights) {
        if (v < 0.0 || v > 1.0)
            throw Error(ErrorCode::BadRequest, "weight '" + k + "' needs a number in [0, 1]");
        config_.weights[k] = v;
    }
    return status_locked();
}

Json Session::set_policy(Policy policy)
{
    std::lock_guard lock(mutex_);
    config_.policy = policy;
    return status_locked();
}

Json Session::snapshot() const
{
    std::lock_guard lock(mutex_);
    Json j = status_locked();
    j["mol"] = serialize_mol(state_.mol);
    Json counts = Json::object();
    for (const auto& [k, v] : type_counts(state_.mol))
        counts[k] = v;
    j["counts"] = std::move(counts);
    j["graph"] = export_d3(state_.mol, chem_->types());
    return j;
}

Json Session::matches() const
{
    std::lock_guard lock(mutex_);
    Json list = Json::array();
    auto ms = find_matches(state_.mol, *chem_);
    for (std::size_t i = 0; i < ms.size(); ++i)
        list.push_back(match_json(ms[i], *chem_, i));
    Json j;
    j["step"] = state_.steps;
    j["matches"] = std::move(list);
    return j;
}

Json Session::fire(std::size_t index)
{
    std::lock_guard lock(mutex_);
    auto ms = find_matches(state_.mol, *chem_);
    if (index >= ms.size())
        throw Error(ErrorCode::NotFound, "no match with index " + std::to_string(index));
    const Match& m = ms[index];
    StepRecord rec = census(state_.mol, state_.steps + 1);
    rec.applied.push_back({chem_->rewrites()[m.rewrite].name, m.node_map});
    MolPattern next = ledger_ ? hapax_apply_many(state_.mol, {m}, *chem_, *ledger_)
                              : apply_matches(state_.mol, {m}, *chem_, state_.tags);
    rec.nodes_pre_comb = next.nodes.size();
    state_.mol = ledger_ ? hapax_comb(next, chem_->types(), *ledger_) : comb_pass(next, chem_->types());
    rec.nodes_after = state_.mol.nodes.size();
    rec.edges_after = edge_count(state_.mol);
    rec.counts = type_counts(state_.mol);
    ++state_.steps;
    state_.status = state_.mol.empty() ? Termination::Empty : Termination::Running;
    record(rec);
    Json j = status_locked();
    j["records"] = Json::array({parse_line(trace_.back())});
    return j;
}

std::string Session::trace() const
{
    std::lock_guard lock(mutex_);
    std::string out = start_line_ + '\n';
    for (const auto& l : trace_)
        out += l + '\n';
    return out;
}

std::vector<std::string> Session::events_since(std::size_t& cursor, std::chrono::milliseconds wait, bool& closed) const
{
    std::unique_lock lock(mutex_);
    changed_.wait_for(lock, wait, [&] { return events_.size() > cursor || closed_; });
    closed = closed_;
    std::vector<std::string> out;
    for (; cursor < events_.size(); ++cursor)
        out.push_back(events_[cursor]);
    return out;
}

SessionManager::SessionManager(std::filesystem::path library_dir)
    : library_dir_(library_dir.empty() ? default_library_dir() : std::move(library_dir))
{
}

std::pair<MolPattern, std::shared_ptr<const Chemistry>> SessionManager::molecule_from(const Json& body) const
{
    if (!body.is_object())
        throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    std::string chem_name = field<std::string>(body, "chem", "");
    MolPattern mol;
    std::shared_ptr<const Chemistry> chem;
    if (body.contains("library")) {
        auto entry = load_library_entry(library_dir_, field<std::string>(body, "library", ""));
        chem = resolve_chemistry(chem_name.empty() ? entry.chemistry : chem_name);
        mol = parse_mol(entry.mol_text, chem->types(), detect_dialect(entry.mol_text));
    } else if (body.contains("lambda")) {
        chem = resolve_chemistry(chem_name.empty() ? "chemlambda-v2" : chem_name);
        LambdaOptions opts;
        opts.fanout = field<std::string>(body, "fanout", "FO") == "FOE" ? Fanout::FOE : Fanout::FO;
        mol = term_to_mol(parse_lambda(field<std::string>(body, "lambda", "")), opts);
        validate(mol, chem->types());
    } else if (body.contains("mol")) {
        chem = resolve_chemistry(chem_name.empty() ? "chemlambda-v2" : chem_name);
        const std::string text = field<std::string>(body, "mol", "");
        mol = parse_mol(text, chem->types(), detect_dialect(text));
    } else {
        throw Error(ErrorCode::BadRequest, "one of 'mol', 'lambda' or 'library' is required");
    }
    if (field<bool>(body, "cap", false))
        mol = cap(mol, chem->types());
    return {std::move(mol), std::move(chem)};
}

Json SessionManager::create(const Json& body)
{
    auto [mol, chem] = molecule_from(body);
    ReductionConfig config = config_from(body);
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mutex_);
        std::string id = "s" + std::to_string(next_id_++);
        s = std::make_shared<Session>(id, std::move(mol), std::move(chem), std::move(config));
        sessions_[id] = s;
    }
    return s->snapshot();
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const
{
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw Error(ErrorCode::NotFound, "no session '" + id + "'");
    return it->second;
}

void SessionManager::remove(const std::string& id)
{
    std::shared_ptr<Session> s;
    {
        std::lock_guard lock(mutex_);
        auto it = sessions_.find(id);
        if (it == sessions_.end())
            throw Error(ErrorCode::NotFound, "no session '" + id + "'");
        s = std::move(it->second);
        sessions_.erase(it);
    }
    s->close();
}

std::vector<std::string> SessionManager::ids() const
{
    std::lock_guard lock(mutex_);
    std::vector<std::string> out;
    for (const auto& [id, s] : sessions_)
        out.push_back(id);
    return out;
}

Json handle_quine(const SessionManager& sm, const Json& body)
{
    auto [mol, chem] = sm.molecule_from(body);
    const std::string mode = field<std::string>(body, "mode", "exact");
    Json j;
    j["mode"] = mode;
    if (mode == "exact") {
        QuineLimits limits;
        limits.collections = field<std::size_t>(body, "limit", limits.collections);
        limits.masked = field<std::set<std::string>>(body, "mask", {});
        j["verdict"] = verdict_json(is_quine(mol, *chem, limits), *chem);
    } else if (mode == "empirical") {
        ReductionConfig c = config_from(body);
        const auto trials = field<std::size_t>(body, "trials", 100);
        if (trials == 0)
            throw Error(ErrorCode::BadRequest, "trials must be at least 1");
        j["profile"] = profile_json(empirical_profile(mol, *chem, c, trials, std::thread::hardware_concurrency()));
    } else {
        throw Error(ErrorCode::BadRequest, "mode must be 'exact' or 'empirical'");
    }
    return j;
}

Json handle_egg(const Json& body)
{
    std::vector<std::string> types;
    if (body.contains("types") && body["types"].is_array())
        types = field<std::vector<std::string>>(body, "types", {});
    else
        types = split_list(field<std::string>(body, "types", ""));
    if (types.empty())
        throw Error(ErrorCode::BadRequest, "'types' must list at least one node type");
    auto chem = resolve_chemistry(field<std::string>(body, "chem", "chemlambda+ic"));
    Rng rng(field<std::uint64_t>(body, "seed", 0));
    const auto count = field<std::size_t>(body, "count", 1);
    Json mols = Json::array();
    for (std::size_t i = 0; i < count; ++i)
        mols.push_back(serialize_mol(random_egg(types, *chem, rng)));
    Json j;
    j["chem"] = chem->name();
    j["mols"] = std::move(mols);
    return j;
}

Json handle_lambda2mol(const Json& body)
{
    if (!body.is_object() || !body.contains("term"))
        throw Error(ErrorCode::BadRequest, "'term' is required");
    LambdaOptions opts;
    const auto fanout = field<std::string>(body, "fanout", "FO");
    if (fanout != "FO" && fanout != "FOE")
        throw Error(ErrorCode::BadRequest, "fanout must be FO or FOE");
    opts.fanout = fanout == "FOE" ? Fanout::FOE : Fanout::FO;
    auto mol = term_to_mol(parse_lambda(field<std::string>(body, "term", "")), opts);
    Json j;
    j["mol"] = serialize_mol(mol);
    j["caret"] = serialize_mol(mol, Dialect::Caret);
    return j;
}

Json handle_library_list(const SessionManager& sm)
{
    Json list = Json::array();
    for (const auto& e : load_library(sm.library_dir())) {
        Json j;
        j["id"] = e.id;
        j["chemistry"] = e.chemistry;
        j["comment"] = e.comment;
        list.push_back(std::move(j));
    }
    return Json{{"entries", std::move(list)}};
}

Json handle_library_get(const SessionManager& sm, const std::string& id)
{
    auto e = load_library_entry(sm.library_dir(), id);
    Json j;
    j["id"] = e.id;
    j["chemistry"] = e.chemistry;
    j["comment"] = e.comment;
    j["mol"] = e.mol_text;
    return j;
}

struct Server::Impl {
    ServeOptions options;
    SessionManager sessions;
    httplib::Server http;
    std::thread thread;
    int port = 0;

    explicit Impl(ServeOptions o) : options(std::move(o)), sessions(options.library_dir) { routes(); }

    static int status_for(ErrorCode code)
    {
        return code == ErrorCode::NotFound ? 404 : 400;
    }

    template <class F>
    auto guarded(F f)
    {
        return [f](const httplib::Request& req, httplib::Response& res) {
            try {
                Json body = Json::object();
                if (!req.body.empty())
                    body = Json::parse(req.body);
                Json out = f(req, body);
                res.set_content(out.dump(), "application/json");
            } catch (const Error& e) {
                res.status = status_for(e.code());
                res.set_content(error_json(e).dump(), "application/json");
            } catch (const nlohmann::json::exception& e) {
                res.status = 400;
                res.set_content(error_json(Error(ErrorCode::BadRequest, e.what())).dump(), "application/json");
            } catch (const std::exception& e) {
                res.status = 500;
                res.set_content(Json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(), "application/json");
            }
        };
    }

    std::shared_ptr<Session> session(const httplib::Request& req) { return sessions.get(req.path_params.at("id")); }

    void routes()
    {
        using R = const httplib::Request&;
        http.Get("/api/health", guarded([](R, const Json&) { return Json{{"ok", true}}; }));
        http.Get("/api/chemistries", guarded([](R, const Json&) { return Json{{"chemistries", builtin_names()}}; }));
        http.Get("/api/library", guarded([this](R, const Json&) { return handle_library_list(sessions); }));
        http.Get("/api/library/:id",
                 guarded([this](R req, const Json&) { return handle_library_get(sessions, req.path_params.at("id")); }));
        http.Post("/api/sessions", guarded([this](R, const Json& b) { return sessions.create(b); }));
        http.Get("/api/sessions", guarded([this](R, const Json&) { return Json{{"sessions", sessions.ids()}}; }));
        http.Get("/api/sessions/:id", guarded([this](R req, const Json&) { return session(req)->status(); }));
        http.Delete("/api/sessions/:id", guarded([this](R req, const Json&) {
                        sessions.remove(req.path_params.at("id"));
                        return Json{{"deleted", req.path_params.at("id")}};
                    }));
        http.Post("/api/sessions/:id/step",
                  guarded([this](R req, const Json& b) { return session(req)->step(field<std::size_t>(b, "n", 1)); }));
        http.Post("/api/sessions/:id/run", guarded([this](R req, const Json& b) {
                      return session(req)->run(field<std::size_t>(b, "steps", 0),
                                               std::chrono::milliseconds(field<long>(b, "interval_ms", 100)));
                  }));
        http.Post("/api/sessions/:id/pause", guarded([this](R req, const Json&) { return session(req)->pause(); }));
        http.Post("/api/sessions/:id/weights", guarded([this](R req, const Json& b) {
                      auto s = session(req);
                      if (b.contains("policy"))
                          s->set_policy(policy_from_string(field<std::string>(b, "policy", "random")));
                      return s->set_weights(weights_from(b.value("weights", Json::object()), {}));
                  }));
        http.Get("/api/sessions/:id/snapshot", guarded([this](R req, const Json&) { return session(req)->snapshot(); }));
        http.Get("/api/sessions/:id/matches", guarded([this](R req, const Json&) { return session(req)->matches(); }));
        http.Post("/api/sessions/:id/fire",
                  guarded([this](R req, const Json& b) { return session(req)->fire(field<std::size_t>(b, "index", 0)); }));
        http.Get("/api/sessions/:id/trace", [this](R req, httplib::Response& res) {
            try {
                res.set_content(session(req)->trace(), "application/x-ndjson");
            } catch (const Error& e) {
                res.status = status_for(e.code());
                res.set_content(error_json(e).dump(), "application/json");
            }
        });
        http.Get("/api/sessions/:id/events", [this](R req, httplib::Response& res) {
            std::shared_ptr<Session> s;
            try {
                s = session(req);
            } catch (const Error& e) {
                res.status = status_for(e.code());
                res.set_content(error_json(e).dump(), "application/json");
                return;
            }
            auto cursor = std::make_shared<std::size_t>(0);
            if (req.has_param("from"))
                *cursor = std::stoul(req.get_param_value("from"));
            res.set_header("Cache-Control", "no-cache");
            res.set_chunked_content_provider("text/event-stream", [s, cursor](std::size_t, httplib::DataSink& sink) {
                bool closed = false;
                for (const auto& e : s->events_since(*cursor, std::chrono::milliseconds(500), closed)) {
                    std::string msg = "data: " + e + "\n\n";
                    if (!sink.write(msg.data(), msg.size()))
                        return false;
                }
                if (closed) {
                    sink.done();
                    return true;
                }
                return sink.is_writable();
            });
        });
        http.Post("/api/quine", guarded([this](R, const Json& b) { return handle_quine(sessions, b); }));
        http.Post("/api/egg", guarded([](R, const Json& b) { return handle_egg(b); }));
        http.Post("/api/lambda2mol", guarded([](R, const Json& b) { return handle_lambda2mol(b); }));
    }

    int bind()
    {
        if (options.port == 0)
            port = http.bind_to_any_port(options.host);
        else
            port = http.bind_to_port(options.host, options.port) ? options.port : -1;
        if (port < 0)
            throw Error(ErrorCode::BadRequest, "cannot bind " + options.host + ":" + std::to_string(options.port));
        return port;
    }
};

Server::Server(ServeOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server()
{
    stop();
}

int Server::start()
{
    int port = impl_->bind();
    impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
    impl_->http.wait_until_ready();
    return port;
}

void Server::serve_forever()
{
    impl_->bind();
    impl_->http.listen_after_bind();
}

void Server::stop()
{
    if (!impl_)
        return;
    for (const auto& id : impl_->sessions.ids())
        impl_->sessions.get(id)->close();
    impl_->http.stop();
    if (impl_->thread.joinable())
        impl_->thread.join();
}

SessionManager& Server::sessions()
{
    return impl_->sessions;
}

} // namespace chemlab
