#pragma once

// Reference implementations used to check the library. They are slow and
// simple on purpose and share no code with src/ beyond the data types.

#include <cstddef>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chemlab/chemistry.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/lambda.hpp"
#include "chemlab/mol.hpp"

namespace oracle {

using chemlab::MolPattern;
using chemlab::TermPtr;

/// Tries every type-preserving node bijection and checks that the induced
/// tag map is a consistent bijection.
bool brute_isomorphic(const MolPattern& a, const MolPattern& b);

/// Same molecule with shuffled node order and fresh tag names.
MolPattern scramble(const MolPattern& m, std::mt19937_64& rng);

/// One COMB step written from the rule text: Arrow e e disappears; an Arrow
/// a b whose a also sits on another node is removed and that other port
/// gets b. Returns the indices of Arrows that can step.
std::vector<std::size_t> comb_steppable(const MolPattern& m, const chemlab::TypeRegistry& types);
MolPattern comb_step(const MolPattern& m, std::size_t arrow);
/// Fixpoints reached by every elimination order, as a list of molecules.
std::vector<MolPattern> comb_all_orders(const MolPattern& m, const chemlab::TypeRegistry& types);

/// Every inclusion-maximal independent set of the graph given by the
/// conflict predicate, by subset enumeration. Sets are ascending index lists.
std::vector<std::vector<std::size_t>> brute_maximal_independent_sets(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

/// Capture-avoiding substitution and normal-order reduction to normal form.
/// Returns nullptr when the step budget runs out.
TermPtr normal_order(const TermPtr& t, std::size_t max_steps = 10000);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

/// Closed term in which every binder is used exactly once.
TermPtr random_linear_term(std::mt19937_64& rng, int depth);
/// Arbitrary term over a few variable names, possibly with free variables.
TermPtr random_term(std::mt19937_64& rng, int depth);

struct TermCounts {
    std::size_t lam = 0, app = 0, unused = 0, fanouts = 0, free_names = 0;
};
TermCounts count_term(const TermPtr& t);

/// Random closed molecule over a type pool. Retries parity failures and
/// throws std::runtime_error if none of 10000 draws can be wired.
MolPattern random_molecule(const chemlab::Chemistry& chem, const std::vector<std::string>& pool, std::size_t nodes,
                           std::mt19937_64& rng);

} // namespace oracle
