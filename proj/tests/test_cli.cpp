#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "chemlab/cli.hpp"

using namespace chemlab;

namespace {

struct Run {
    int rc;
    std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& stdin_text = "") {
    args.insert(args.begin(), "chemlab");
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    int rc = run_cli(args, in, out, err);
    return {rc, out.str(), err.str()};
}

} // namespace

TEST_CASE("validate") {
    auto r = cli({"validate", "-"}, "L c b a\nA a d e\n");
    CHECK(r.rc == 0);
    CHECK(r.out == "ok: 2 nodes, 1 edges, 4 free\n");
    r = cli({"validate", "-"}, "L a a a\n");
    CHECK(r.rc == 1);
    CHECK(r.err == "error: TagOveruse at line 1, column 7: tag 'a' occurs more than twice\n");
    CHECK(cli({"validate", "/nonexistent.mol"}).rc == 1);
    CHECK(cli({"validate", "lib:no_such_entry"}).rc == 1);
}

TEST_CASE("usage errors") {
    CHECK(cli({}).rc == 1);
    CHECK(cli({"frobnicate"}).rc == 1);
    CHECK(cli({"reduce", "-", "--policy", "sideways"}, "T 1\nFRIN 1").rc == 1);
    CHECK(cli({"reduce", "-", "--weights", "DIST=2"}, "T 1\nFRIN 1").rc == 1);
}

TEST_CASE("reduce keeps the input dialect") {
    auto r = cli({"reduce", "-"}, "L c b a\nA a d e\n");
    CHECK(r.rc == 0);
    CHECK(r.out == "Arrow c e\nArrow d b\n");
    r = cli({"reduce", "-", "--cap"}, "L c b a^A a d e");
    CHECK(r.out == "FRIN e^FROUT b^FRIN b^FROUT e\n");
}

TEST_CASE("reduce trace is reproducible") {
    std::vector<std::string> args = {"reduce", "lib:chemlambda_quine_10b", "--seed", "5", "--steps", "50", "--trace", "-"};
    auto a = cli(args);
    auto b = cli(args);
    args.push_back("--threads");
    args.push_back("3");
    auto c = cli(args);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
    std::istringstream in(a.out);
    std::string line;
    std::getline(in, line);
    auto start = nlohmann::json::parse(line);
    CHECK(start["record"] == "start");
    CHECK(start["seed"] == 5);
}

TEST_CASE("quine, egg, lambda2mol, canon, library, chem") {
    auto q = cli({"quine", "lib:ic_quine_8"});
    CHECK(q.rc == 0);
    CHECK(q.out.rfind("status: quine\n", 0) == 0);
    auto qj = cli({"quine", "lib:ic_quine_8", "--json"});
    CHECK(nlohmann::json::parse(qj.out)["status"] == "quine");
    CHECK(cli({"quine", "lib:ic_quine_8", "--exact", "--empirical"}).rc == 1);

    auto e = cli({"egg", "--types", "A,L", "--seed", "3", "--count", "2"});
    CHECK(e.rc == 0);
    CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 2);
    CHECK(cli({"egg", "--types", "A,A"}).rc == 1);

    auto l = cli({"lambda2mol", "\\x.x"});
    CHECK(l.out == "L 1 1 2\nFROUT 2\n");
    auto bad = cli({"lambda2mol", "(\\x.x"});
    CHECK(bad.rc == 1);
    CHECK(bad.err.find("SyntaxError at line 1, column 6") != std::string::npos);

    auto c1 = cli({"canon", "-"}, "L 1 2 3\nA 3 2 1");
    auto c2 = cli({"canon", "-"}, "A z y x\nL x y z");
    CHECK(c1.rc == 0);
    CHECK(c1.out == c2.out);

    auto list = cli({"library", "list"});
    CHECK(list.out.find("ic_quine_8\tic\t") != std::string::npos);
    CHECK(cli({"library", "show", "ic_quine_8"}).out.find("# chemistry: ic") != std::string::npos);
    CHECK(cli({"chem", "list"}).out.find("chemlambda-v2\t") != std::string::npos);
    CHECK(cli({"chem", "show", "ic"}).out.find("GAMMA-DELTA") != std::string::npos);
    CHECK(cli({"chem", "check", CHEMLAB_SOURCE_DIR "/chemistries/toy.chem"}).rc == 0);
}

TEST_CASE("export-d3") {
    auto r = cli({"export-d3", "-"}, "L c b a\nA a d e");
    REQUIRE(r.rc == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["nodes"].size() == 16);
    CHECK(j["links"].size() == 15);
}
