#include <doctest.h>

#include "chemlab/canon.hpp"
#include "chemlab/error.hpp"
#include "chemlab/hapax.hpp"
#include "chemlab/lambda.hpp"
#include "oracles.hpp"

using namespace chemlab;

namespace {

const Chemistry& cl() { return builtin("chemlambda-v2"); }

} // namespace

TEST_CASE("L-A tokens") {
    const Rewrite& la = *cl().find_rewrite("L-A");
    auto t2 = token2_shape(la);
    CHECK(oracle::brute_isomorphic(t2, parse_mol_untyped("L b' a b'\nA a' a a'")));
    auto t1 = token1_shape(la);
    CHECK(type_counts(t1) == type_counts(la.rhs));
    CHECK(is_molecule(t1));
}

TEST_CASE("generic token shapes carry the right types") {
    for (const auto& rw : cl().rewrites()) {
        INFO(rw.name);
        auto t1 = token1_shape(rw);
        auto t2 = token2_shape(rw);
        CHECK(type_counts(t1) == type_counts(rw.rhs));
        CHECK(type_counts(t2) == type_counts(rw.lhs));
        CHECK(is_molecule(t1));
        CHECK(is_molecule(t2));
    }
}

TEST_CASE("ledger bookkeeping") {
    auto mol = parse_mol("L 1 2 3\nA 3 4 5", cl().types());
    TokenLedger ledger(mol);
    ledger.mint("L-A", 2);
    CHECK(ledger.token1_count("L-A") == 2);
    CHECK(ledger.token2_count("L-A") == 0);
    auto t = ledger.take_token1(*cl().find_rewrite("L-A"));
    CHECK(ledger.token1_count("L-A") == 1);
    for (auto& tag : free_tags(t)) CHECK(tag.empty());
    for (auto& n : t.nodes)
        for (auto& p : n.ports) CHECK(p.rfind("h", 0) == 0);
    ledger.take_token1(*cl().find_rewrite("L-A"));
    CHECK_THROWS_AS(ledger.take_token1(*cl().find_rewrite("L-A")), Error);
}

TEST_CASE("hapax beta keeps the census and reuses no fresh tag") {
    auto mol = parse_mol("L 1 2 3\nA 3 4 5", cl().types());
    TokenLedger ledger(mol);
    ledger.mint_all(cl(), 3);
    auto before = conserved_counts(mol, ledger, cl());
    auto ms = find_matches(mol, cl());
    REQUIRE(ms.size() == 1);
    auto r = hapax_apply(mol, ms[0], cl(), ledger);
    CHECK(conserved_counts(r.mol, r.ledger, cl()) == before);
    CHECK(r.ledger.token2_count("L-A") == 1);
    REQUIRE(r.ledger.last_token2("L-A"));
    CHECK(oracle::brute_isomorphic(*r.ledger.last_token2("L-A"),
                                   parse_mol_untyped("L b' a b'\nA a' a a'")));
    // the non-hapax result up to isomorphism
    TagSource t(mol);
    CHECK(is_isomorphic(r.mol, apply_match(mol, ms[0], cl(), t)));

    auto combed = hapax_comb(r.mol, cl().types(), r.ledger);
    CHECK(conserved_counts(combed, r.ledger, cl()) == before);
}

TEST_CASE("hapax reduction runs out of tokens") {
    auto mol = term_to_mol(parse_lambda("(\\x.x (\\y.y \\z.z))"));
    ReductionConfig cfg;
    cfg.hapax = true;
    cfg.hapax_tokens = 1;
    cfg.policy = Policy::Deterministic;
    auto tr = reduce(mol, cl(), cfg);
    // two beta redexes in sequence, one L-A token
    std::size_t betas = 0;
    for (auto& s : tr.steps)
        for (auto& a : s.applied) betas += a.name == "L-A";
    CHECK(betas == 1);
    CHECK(tr.termination == Termination::NoMatches);
}
