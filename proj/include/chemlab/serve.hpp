#pragma once

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "chemlab/chemistry.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/hapax.hpp"

namespace chemlab {

using Json = nlohmann::ordered_json;

/// A server-owned reduction. Every public call takes the session lock, so
/// commands on one session are serialized; different sessions share nothing.
class Session {
public:
    Session(std::string id, MolPattern mol, std::shared_ptr<const Chemistry> chem, ReductionConfig config);
    ~Session();

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const { return id_; }

    /// Runs up to n steps; returns their trace records.
    Json step(std::size_t n);
    /// Starts a background runner (at most `steps` steps, 0 = until it stops).
    Json run(std::size_t steps, std::chrono::milliseconds interval);
    Json pause();
    Json set_weights(const std::map<std::string, double>& weights);
    Json set_policy(Policy policy);
    Json snapshot() const;
    Json matches() const;
    /// Applies the index-th current match alone, then COMB.
    Json fire(std::size_t index);
    Json status() const;
    /// The session trace: the start record followed by one line per step.
    std::string trace() const;

    /// Events with sequence number >= cursor, waiting up to `wait` for one.
    /// Returns an empty vector on timeout; `closed` reports a deleted session.
    std::vector<std::string> events_since(std::size_t& cursor, std::chrono::milliseconds wait, bool& closed) const;

    void close();

private:
    Json step_locked();
    Json status_locked() const;
    void record(const StepRecord& rec);
    void stop_runner();

    std::string id_;
    std::shared_ptr<const Chemistry> chem_;
    ReductionConfig config_;
    ReductionState state_;
    Rng rng_;
    std::optional<TokenLedger> ledger_;
    std::string start_line_;
    std::vector<std::string> trace_;

    mutable std::mutex mutex_;
    mutable std::condition_variable changed_;
    std::vector<std::string> events_;
    bool closed_ = false;

    std::thread runner_;
    bool running_ = false;
    std::size_t run_budget_ = 0;
};

struct SessionRequest {
    MolPattern mol;
    std::string chemistry = "chemlambda-v2";
    ReductionConfig config;
};

class SessionManager {
public:
    explicit SessionManager(std::filesystem::path library_dir = {});

    /// Body fields: one of mol / lambda / library, plus optional chem, seed,
    /// policy, weights, hapax, hapax_tokens, node_bound, fanout, cap.
    Json create(const Json& body);
    std::shared_ptr<Session> get(const std::string& id) const;
    void remove(const std::string& id);
    std::vector<std::string> ids() const;

    const std::filesystem::path& library_dir() const { return library_dir_; }

    /// Parses the molecule and chemistry fields shared by several endpoints.
    std::pair<MolPattern, std::shared_ptr<const Chemistry>> molecule_from(const Json& body) const;

private:
    std::filesystem::path library_dir_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t next_id_ = 1;
};

/// Stateless endpoints, as JSON in / JSON out.
Json handle_quine(const SessionManager& sm, const Json& body);
Json handle_egg(const Json& body);
Json handle_lambda2mol(const Json& body);
Json handle_library_list(const SessionManager& sm);
Json handle_library_get(const SessionManager& sm, const std::string& id);

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8080; // 0 picks a free port
    std::filesystem::path library_dir;
};

/// HTTP front end. Routes are documented in README.md.
class Server {
public:
    explicit Server(ServeOptions options);
    ~Server();

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Binds and serves on the calling thread until stop().
    void serve_forever();
    void stop();

    SessionManager& sessions();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace chemlab
