#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "chemlab/mol.hpp"

namespace chemlab {

struct Span {
    std::size_t begin = 0; // byte offsets into the source
    std::size_t end = 0;
};

/// Untyped lambda term. Children are shared and never mutated.
struct Term {
    enum class Kind { Var, Lam, App };

    Kind kind = Kind::Var;
    std::string name; // variable name, or the binder of a Lam
    std::shared_ptr<const Term> left;  // Lam body, or App function
    std::shared_ptr<const Term> right; // App argument
    Span span;

    static std::shared_ptr<const Term> var(std::string name, Span span = {});
    static std::shared_ptr<const Term> lam(std::string binder, std::shared_ptr<const Term> body, Span span = {});
    static std::shared_ptr<const Term> app(std::shared_ptr<const Term> fun, std::shared_ptr<const Term> arg, Span span = {});
};

using TermPtr = std::shared_ptr<const Term>;

/// term  := app
/// app   := atom atom*           (left-associative)
/// atom  := var | ("\" | "λ") var "." atom | "(" app ")"
/// A lambda body is a single atom, so "(\x.x \y.y)" is an application.
/// Variables are runs of letters, digits, '_' and '\''.
/// Throws Error(SyntaxError) with a 1-based column.
TermPtr parse_lambda(std::string_view text);

/// Fully parenthesized text that parse_lambda reads back to the same term.
std::string to_string(const TermPtr& term);

enum class Fanout { FO, FOE };

struct LambdaOptions {
    Fanout fanout = Fanout::FO;
};

/// One L per abstraction (body, variable, result), one A per application
/// (function, argument, result), a T on each unused binder, a left-combed
/// chain of n-1 fan-outs for a variable used n >= 2 times, one FRIN per free
/// variable name and a FROUT on the root. Tags are "1", "2", ...
MolPattern term_to_mol(const TermPtr& term, const LambdaOptions& options = {});

struct LambdaCensus {
    std::size_t abstractions = 0;
    std::size_t applications = 0;
    std::size_t unused_binders = 0;
    std::size_t fanouts = 0; // sum of (uses - 1) over variables used at least twice
    std::size_t free_variables = 0;
};

LambdaCensus lambda_census(const TermPtr& term);

} // namespace chemlab
