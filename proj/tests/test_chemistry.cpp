#include <doctest.h>

#include "chemlab/chemistry.hpp"
#include "chemlab/error.hpp"

using namespace chemlab;

namespace {

ErrorCode load_error(const std::string& text) {
    try {
        load_chemistry(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("config accepted");
    return ErrorCode::BadRequest;
}

const std::string kTypes = "name = t\n[types]\nA 0 0 0 unoriented\nC 0 0 unoriented\nArrow 0 1 arrow\nFREE 0 cap unoriented\n[rewrites]\n";

} // namespace

TEST_CASE("built-in chemistries validate") {
    for (const auto& name : builtin_names()) {
        const auto& c = builtin(name);
        CHECK(c.name() == name);
        CHECK_FALSE(c.rewrites().empty());
        for (const auto& rw : c.rewrites()) {
            auto r = validate_rewrite(rw, c);
            INFO(name << " " << rw.name);
            CHECK(r.ok());
        }
        // the shipped source text loads to the same chemistry
        auto again = load_chemistry(builtin_source(name));
        CHECK(again.rewrites().size() == c.rewrites().size());
        CHECK(again.types().size() == c.types().size());
    }
    CHECK(builtin("chemlambda-v2").rewrites().size() == 15);
    CHECK(builtin("ic").rewrites().size() == 3);
    CHECK(builtin("chemlambda+ic").rewrites().size() == 18);
}

TEST_CASE("unknown chemistry") {
    CHECK_THROWS_AS(builtin("nope"), Error);
}

TEST_CASE("L-A rewrite has the beta shape") {
    const auto& c = builtin("chemlambda-v2");
    const Rewrite* la = c.find_rewrite("L-A");
    REQUIRE(la);
    CHECK(la->kind == RewriteKind::Beta);
    CHECK(la->lhs.nodes.size() == 2);
    CHECK(la->rhs.nodes.size() == 2);
    CHECK(la->node_delta() == 0);
    for (auto& n : la->rhs.nodes) CHECK(n.type == "Arrow");
    CHECK(la->interface().size() == 4);
}

TEST_CASE("LHS template from the contact") {
    const auto& t = builtin("chemlambda-v2").types();
    auto lhs = make_lhs_template(t.at("L"), 2, t.at("A"), 0);
    CHECK(serialize_mol(lhs) == "L 1 2 3\nA 3 4 5");
}

TEST_CASE("config errors") {
    CHECK(load_error(kTypes + "name = X\nleft = A\nright = A\ncontact = 1 3\nkind = BETA\nrhs = C 1 2\n") ==
          ErrorCode::InterfaceMismatch);
    CHECK(load_error(kTypes + "name = X\nleft = A\nright = Q\ncontact = 1 3\nkind = BETA\nrhs = C 1 2 ^ C 4 5\n") ==
          ErrorCode::UnknownType);
    std::string rw = "name = X\nleft = A\nright = A\ncontact = 1 3\nkind = BETA\nrhs = C 1 2 ^ C 4 5\n\n";
    CHECK(load_error(kTypes + rw + rw) == ErrorCode::DuplicateRewriteName);
    CHECK(load_error("name = t\n[types]\nA 0 2 0\n") == ErrorCode::BadValence);
    CHECK(load_error(kTypes + "name = X\nleft = A\nright = A\ncontact = 1 3\nkind = WHAT\nrhs = C 1 2 ^ C 4 5\n") ==
          ErrorCode::ConfigSyntax);
    CHECK_NOTHROW(load_chemistry(kTypes + rw));
}

TEST_CASE("masking and indexing") {
    const auto& c = builtin("chemlambda-v2");
    auto m = c.without({"L-A"});
    CHECK(m.rewrites().size() == c.rewrites().size() - 1);
    CHECK(m.find_rewrite("L-A") == nullptr);
    CHECK(c.rewrite_index("L-A").has_value());
    CHECK(c.oriented());
    CHECK_FALSE(builtin("ic").oriented());
    for (auto i : c.rewrites_for_right("A")) CHECK(c.rewrites()[i].right == "A");
}
