#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "chemlab/library.hpp"
#include "chemlab/serve.hpp"

using namespace chemlab;
using nlohmann::json;

namespace {

struct Fixture {
    Server server{ServeOptions{"127.0.0.1", 0, default_library_dir()}};
    int port = server.start();
    httplib::Client client{"127.0.0.1", port};

    json post(const std::string& path, const json& body, int want = 200) {
        auto r = client.Post(path, body.dump(), "application/json");
        REQUIRE(r);
        CHECK(r->status == want);
        return json::parse(r->body);
    }
    json get(const std::string& path, int want = 200) {
        auto r = client.Get(path);
        REQUIRE(r);
        CHECK(r->status == want);
        return json::parse(r->body);
    }
};

} // namespace

TEST_CASE("health, chemistries, library") {
    Fixture f;
    CHECK(f.get("/api/health")["ok"] == true);
    CHECK(f.get("/api/chemistries")["chemistries"].size() == 3);
    auto lib = f.get("/api/library");
    CHECK(lib.is_array() ? lib.size() >= 4 : lib["entries"].size() >= 4);
    auto e = f.get("/api/library/ic_quine_8");
    CHECK(e["chemistry"] == "ic");
    auto missing = f.get("/api/library/nope", 404);
    CHECK(missing["error"]["code"] == "NotFound");
}

TEST_CASE("session lifecycle") {
    Fixture f;
    auto s = f.post("/api/sessions", {{"lambda", "(\\x.x \\y.y)"}, {"seed", 1}});
    std::string id = s["id"];
    auto path = "/api/sessions/" + id;
    CHECK(f.get(path)["step"] == 0);

    auto snap = f.get(path + "/snapshot");
    CHECK(snap.contains("mol"));
    CHECK(snap["graph"].contains("nodes"));

    auto st = f.post(path + "/step", {{"n", 5}});
    CHECK(st["records"].size() == 1);
    CHECK(st["status"] == "no_matches");
    auto trace = f.client.Get(path + "/trace");
    REQUIRE(trace);
    CHECK(std::count(trace->body.begin(), trace->body.end(), '\n') == 2);

    CHECK(f.get("/api/sessions")["sessions"].size() == 1);
    auto r = f.client.Delete(path);
    REQUIRE(r);
    CHECK(r->status == 200);
    f.get(path, 404);
}

TEST_CASE("bad requests") {
    Fixture f;
    auto e = f.post("/api/sessions", {{"mol", "L a a a"}}, 400);
    CHECK(e["error"]["code"] == "TagOveruse");
    CHECK(e["error"]["line"] == 1);
    f.post("/api/sessions", {{"lambda", "(\\x.x"}}, 400);
    f.post("/api/lambda2mol", json::object(), 400);
    f.post("/api/egg", {{"types", "A,A"}}, 400);
    auto s = f.post("/api/sessions", {{"mol", "L 1 2 3\nA 3 4 1"}});
    f.post("/api/sessions/" + s["id"].get<std::string>() + "/weights", {{"weights", {{"DIST", 3}}}}, 400);
    f.post("/api/sessions/" + s["id"].get<std::string>() + "/fire", {{"index", 99}}, 404);
}

TEST_CASE("same seed gives the same session; sessions are isolated") {
    Fixture f;
    json body = {{"library", "chemlambda_quine_10a"}, {"seed", 77}};
    std::string a = f.post("/api/sessions", body)["id"];
    std::string b = f.post("/api/sessions", body)["id"];
    std::string c = f.post("/api/sessions", {{"library", "ic_quine_8"}, {"seed", 1}})["id"];
    auto ra = f.post("/api/sessions/" + a + "/step", {{"n", 20}});
    f.post("/api/sessions/" + c + "/step", {{"n", 7}});
    auto rb = f.post("/api/sessions/" + b + "/step", {{"n", 20}});
    CHECK(ra["records"] == rb["records"]);
    CHECK(f.get("/api/sessions/" + a + "/snapshot")["mol"] == f.get("/api/sessions/" + b + "/snapshot")["mol"]);
    CHECK(f.get("/api/sessions/" + c)["step"] == 7);
}

TEST_CASE("weights and fire") {
    Fixture f;
    // L-A competes with A-FO
    std::string id = f.post("/api/sessions", {{"mol", "L 1 2 3\nA 3 4 5\nFO 5 6 7\nFRIN 1\nT 2\nFRIN 4\nFROUT 6\nFROUT 7"}})["id"];
    auto path = "/api/sessions/" + id;
    auto w = f.post(path + "/weights", {{"weights", {{"BETA", 0}}}, {"policy", "deterministic"}});
    CHECK(w["weights"]["BETA"] == 0);
    CHECK(w["policy"] == "deterministic");
    auto m = f.get(path + "/matches")["matches"];
    REQUIRE(m.size() == 2);
    auto st = f.post(path + "/step", {{"n", 1}});
    REQUIRE(st["records"].size() == 1);
    CHECK(st["records"][0]["rewrite"][0]["name"] != "L-A");

    std::string id2 = f.post("/api/sessions", {{"mol", "L 1 2 3\nA 3 4 5\nFO 5 6 7\nFRIN 1\nT 2\nFRIN 4\nFROUT 6\nFROUT 7"}})["id"];
    auto ms = f.get("/api/sessions/" + id2 + "/matches")["matches"];
    std::size_t beta = 0;
    for (std::size_t i = 0; i < ms.size(); ++i)
        if (ms[i]["name"] == "L-A") beta = i;
    auto fired = f.post("/api/sessions/" + id2 + "/fire", {{"index", beta}});
    CHECK(fired["records"][0]["rewrite"][0]["name"] == "L-A");
}

TEST_CASE("stateless endpoints") {
    Fixture f;
    auto q = f.post("/api/quine", {{"library", "ic_quine_8"}});
    CHECK(q["verdict"]["status"] == "quine");
    auto p = f.post("/api/quine", {{"library", "chemlambda_quine_10a"}, {"mode", "empirical"}, {"trials", 5}, {"steps", 50}});
    CHECK(p["profile"]["trials"] == 5);
    auto e = f.post("/api/egg", {{"types", json::array({"GAMMA", "DELTA"})}, {"count", 3}, {"seed", 2}});
    CHECK(e["mols"].size() == 3);
    auto l = f.post("/api/lambda2mol", {{"term", "\\x.x"}});
    CHECK(l["mol"] == "L 1 1 2\nFROUT 2");
    CHECK(l["caret"] == "L 1 1 2^FROUT 2");
}

TEST_CASE("server-sent step events") {
    Fixture f;
    std::string id = f.post("/api/sessions", {{"library", "chemlambda_quine_10a"}, {"seed", 3}})["id"];
    auto st = f.post("/api/sessions/" + id + "/step", {{"n", 3}});
    // one event per step record, plus a status event if the session stopped early
    const std::size_t records = st["records"].size();
    const std::size_t expected = records + (st["records"].size() < 3 ? 1 : 0);
    std::string got;
    std::size_t steps = 0, statuses = 0;
    f.client.set_read_timeout(5, 0);
    f.client.Get("/api/sessions/" + id + "/events?from=0", [&](const char* data, std::size_t n) {
        got.append(data, n);
        for (std::size_t pos; (pos = got.find("\n\n")) != std::string::npos;) {
            std::string ev = got.substr(0, pos);
            got.erase(0, pos + 2);
            CHECK(ev.rfind("data: ", 0) == 0);
            auto j = json::parse(ev.substr(6));
            if (j.contains("record")) {
                CHECK(j["record"] == "step");
                CHECK(j["step"] == steps + 1);
                ++steps;
            } else {
                CHECK(j["id"] == id);
                ++statuses;
            }
        }
        return steps + statuses < expected;
    });
    CHECK(steps == records);
    CHECK(steps + statuses == expected);
}

TEST_CASE("background run stops at its budget; pause") {
    Fixture f;
    std::string id = f.post("/api/sessions", {{"library", "ic_quine_8"}, {"seed", 2}})["id"];
    auto path = "/api/sessions/" + id;
    f.post(path + "/run", {{"steps", 4}, {"interval_ms", 1}});
    json s;
    for (int i = 0; i < 200; ++i) {
        s = f.get(path);
        if (!s["running"].get<bool>()) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    CHECK_FALSE(s["running"].get<bool>());
    CHECK(s["step"].get<int>() <= 4);
    CHECK(s["step"].get<int>() >= 1);

    f.post(path + "/run", {{"steps", 0}, {"interval_ms", 50}});
    auto p = f.post(path + "/pause", json::object());
    CHECK_FALSE(p["running"].get<bool>());
    auto after = f.get(path)["step"];
    std::this_thread::sleep_for(std::chrono::milliseconds(150));
    CHECK(f.get(path)["step"] == after);
}
