#include <doctest.h>

#include "chemlab/canon.hpp"
#include "chemlab/chemistry.hpp"
#include "chemlab/error.hpp"
#include "chemlab/lambda.hpp"
#include "oracles.hpp"

using namespace chemlab;

TEST_CASE("parser shapes") {
    auto omega = parse_lambda("(\\x.(x x) \\x.(x x))");
    CHECK(omega->kind == Term::Kind::App);
    CHECK(omega->left->kind == Term::Kind::Lam);
    CHECK(omega->right->kind == Term::Kind::Lam);
    auto app3 = parse_lambda("f a b");
    CHECK(to_string(app3) == "((f a) b)");
    CHECK(parse_lambda("λx.x")->kind == Term::Kind::Lam);
    CHECK(parse_lambda("x'")->name == "x'");
}

TEST_CASE("to_string reads back") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        auto t = oracle::random_term(rng, 5);
        auto back = parse_lambda(to_string(t));
        CHECK(to_string(back) == to_string(t));
    }
}

TEST_CASE("syntax errors have a column") {
    for (auto [text, col] : std::vector<std::pair<std::string, std::size_t>>{{"(\\x.x", 6}, {"\\.x", 2}, {")", 1}}) {
        INFO(text);
        try {
            parse_lambda(text);
            FAIL("accepted");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::SyntaxError);
            CHECK(e.line() == 1);
            CHECK(e.column() == col);
        }
    }
    CHECK_THROWS_AS(parse_lambda(""), Error);
}

TEST_CASE("identity compiles to one L") {
    auto m = term_to_mol(parse_lambda("\\x.x"));
    CHECK(serialize_mol(m) == "L 1 1 2\nFROUT 2");
}

TEST_CASE("compiled terms are valid molecules with the census counts") {
    const auto& t = builtin("chemlambda-v2").types();
    std::mt19937_64 rng(2);
    for (int i = 0; i < 300; ++i) {
        auto term = oracle::random_term(rng, 6);
        LambdaOptions opt;
        opt.fanout = i % 2 ? Fanout::FOE : Fanout::FO;
        auto m = term_to_mol(term, opt);
        CHECK(is_molecule(m));
        CHECK_NOTHROW(validate(m, t));
        auto o = oracle::count_term(term);
        auto c = lambda_census(term);
        CHECK(c.abstractions == o.lam);
        CHECK(c.applications == o.app);
        CHECK(c.unused_binders == o.unused);
        CHECK(c.fanouts == o.fanouts);
        CHECK(c.free_variables == o.free_names);
        CHECK(type_counts(m)[i % 2 ? "FOE" : "FO"] == o.fanouts);
    }
}

TEST_CASE("normal-order oracle sanity") {
    auto nf = oracle::normal_order(parse_lambda("((\\x.\\y.x a) b)"));
    REQUIRE(nf);
    CHECK(to_string(nf) == "a");
    // capture avoidance
    nf = oracle::normal_order(parse_lambda("(\\x.\\y.(x y) y)"));
    REQUIRE(nf);
    CHECK(oracle::alpha_equal(nf, parse_lambda("\\z.(y z)")));
    CHECK(oracle::normal_order(parse_lambda("(\\x.(x x) \\x.(x x))"), 50) == nullptr);
}

TEST_CASE("linear terms reduce to the compiled normal form") {
    const auto& chem = builtin("chemlambda-v2");
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        auto t = oracle::random_linear_term(rng, 5);
        auto nf = oracle::normal_order(t);
        REQUIRE(nf);
        ReductionConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i);
        cfg.max_steps = 10000;
        auto tr = reduce(term_to_mol(t), chem, cfg);
        CHECK(tr.termination == Termination::NoMatches);
        CHECK(is_isomorphic(tr.final_mol, term_to_mol(nf)));
    }
}
