#include <doctest.h>

#include "chemlab/chemistry.hpp"
#include "chemlab/error.hpp"
#include "chemlab/mol.hpp"
#include "chemlab/port_graph.hpp"

using namespace chemlab;

namespace {

const TypeRegistry& cl() { return builtin("chemlambda-v2").types(); }

ErrorCode code_of(const std::string& text, std::size_t* line = nullptr, std::size_t* col = nullptr) {
    try {
        parse_mol(text, cl());
    } catch (const Error& e) {
        if (line) *line = e.line();
        if (col) *col = e.column();
        return e.code();
    }
    FAIL("no error for: " << text);
    return ErrorCode::BadRequest;
}

} // namespace

TEST_CASE("newline and caret dialects round trip") {
    auto m = parse_mol("L 1 2 3\nA 3 4 1\n", cl());
    CHECK(m.nodes.size() == 2);
    CHECK(m.nodes[1] == MolNode{"A", {"3", "4", "1"}});
    CHECK(serialize_mol(m) == "L 1 2 3\nA 3 4 1");
    CHECK(serialize_mol(m, Dialect::Caret) == "L 1 2 3^A 3 4 1");
    CHECK(parse_mol("L 1 2 3^A 3 4 1", cl(), Dialect::Caret) == m);
    CHECK(detect_dialect("L 1 2 3^A 3 4 1\n") == Dialect::Caret);
    CHECK(detect_dialect("L 1 2 3\nA 3 4 1") == Dialect::Newline);
}

TEST_CASE("comments and blank lines are skipped") {
    auto m = parse_mol("# a comment\n\nL 1 2 3\n   # indented\nA 3 4 1\n", cl());
    CHECK(m.nodes.size() == 2);
}

TEST_CASE("parse errors carry code and position") {
    std::size_t line = 0, col = 0;
    CHECK(code_of("A a b", &line, &col) == ErrorCode::ArityMismatch);
    CHECK(line == 1);
    CHECK(code_of("L a a a", &line, &col) == ErrorCode::TagOveruse);
    CHECK(col == 7);
    CHECK(code_of("FOO a") == ErrorCode::UnknownNodeType);
    CHECK(code_of("L a b c\nL a d e", &line, &col) == ErrorCode::OrientationClash);
    CHECK(line == 2);
    CHECK(code_of("A a b c\n# note\nFO c d", &line) == ErrorCode::ArityMismatch);
    CHECK(line == 3);
}

TEST_CASE("free and bound tags, molecules, caps") {
    auto p = parse_mol("L c b a\nA a d e", cl());
    CHECK(free_tags(p) == std::set<Tag>{"b", "c", "d", "e"});
    CHECK(bound_tags(p) == std::set<Tag>{"a"});
    CHECK_FALSE(is_molecule(p));
    CHECK(edge_count(p) == 1);

    auto capped = cap(p, cl());
    CHECK(is_molecule(capped));
    CHECK(capped.nodes.size() == 6);
    auto tc = type_counts(capped);
    CHECK(tc["FRIN"] == 2);
    CHECK(tc["FROUT"] == 2);
    CHECK(cap(capped, cl()) == capped);

    const auto& ic = builtin("ic").types();
    auto g = parse_mol("GAMMA x y z", ic);
    CHECK(type_counts(cap(g, ic))["FREE"] == 3);
}

TEST_CASE("unoriented ports accept any pairing") {
    const auto& ic = builtin("ic").types();
    CHECK_NOTHROW(parse_mol("GAMMA a b c\nDELTA a b c", ic));
    CHECK_NOTHROW(parse_mol("GAMMA a a b\nGAMMA b c c", ic));
}

TEST_CASE("rename_tags") {
    auto m = parse_mol("L 1 2 3\nA 3 4 1", cl());
    auto r = rename_tags(m, {{"3", "x"}});
    CHECK(r.nodes[0].ports == std::vector<Tag>{"1", "2", "x"});
    CHECK(r.nodes[1].ports[0] == "x");
}

TEST_CASE("port graph of a capped pattern") {
    auto g = to_port_graph(parse_mol("L c b a\nA a d e", cl()), cl());
    // 2 + 4 caps; 3+3+4*1 ports
    CHECK(g.centers.size() == 6);
    CHECK(g.ports.size() == 10);
    CHECK(g.internal_edges.size() == 10);
    CHECK(g.external_edges.size() == 5);
    CHECK(g.vertex_count() == 16);
    CHECK(port_kind(0, 3) == PortKind::In);
    CHECK(port_kind(1, 3) == PortKind::Middle);
    CHECK(port_kind(2, 3) == PortKind::Out);
    CHECK(port_kind(0, 1) == PortKind::In);
}
