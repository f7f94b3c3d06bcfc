#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chemlab/chemistry.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/mol.hpp"

namespace chemlab {

struct MatchCollections {
    std::vector<Match> matches;                     // find_matches order
    std::vector<std::vector<std::size_t>> sets;     // indices into matches, ascending
    bool truncated = false;
};

/// Inclusion-maximal sets of pairwise non-conflicting matches, at most
/// `limit` of them, in a fixed order. The conflict graph is split into
/// connected components; each component's maximal independent sets come
/// from Bron-Kerbosch on the complement, and the sets of the whole graph
/// are their product. A molecule without matches has no collections (the
/// empty collection is never reported).
MatchCollections maximal_collections(const MolPattern& mol, const Chemistry& chem, std::size_t limit = 100000);

enum class QuineStatus { Quine, NotQuine, Inconclusive };

std::string_view to_string(QuineStatus s);

struct QuineLimits {
    std::size_t collections = 100000;
    // Rewrites left out of the chemistry for this check.
    std::set<std::string> masked;
};

struct QuineVerdict {
    QuineStatus status = QuineStatus::NotQuine;
    std::vector<Match> witness;
    std::size_t collections_examined = 0;
    std::size_t limit = 0;
};

/// Parallel application of a collection followed by COMB.
MolPattern apply_collection(const MolPattern& mol, const std::vector<Match>& collection, const Chemistry& chem);

QuineVerdict is_quine(const MolPattern& mol, const Chemistry& chem, const QuineLimits& limits = {});

struct QuineProfile {
    std::size_t trials = 0;
    std::size_t died = 0;
    std::size_t survived_horizon = 0;
    std::size_t grew_beyond_bound = 0;
    std::vector<std::size_t> lifespans;   // steps to death, one per dead trial, in trial order
    std::vector<std::size_t> final_nodes; // per trial
    std::vector<std::size_t> max_nodes;   // per trial
    std::vector<std::size_t> min_nodes;   // per trial
    std::size_t node_bound = 0;
};

/// Independent seeded reductions. Trial i uses a seed derived from
/// (config.seed, i), so the profile does not depend on `threads`.
/// A zero config.node_bound becomes 10 x the input size (at least 100).
QuineProfile empirical_profile(const MolPattern& mol, const Chemistry& chem, const ReductionConfig& config,
                               std::size_t trials, unsigned threads = 1);

std::uint64_t trial_seed(std::uint64_t base, std::size_t trial);

/// A molecule with exactly these node types, ports joined by a uniformly
/// random perfect matching (out to in when the types are oriented).
/// Throws Error(ParityMismatch) or Error(UnknownNodeType).
MolPattern random_egg(const std::vector<std::string>& types, const Chemistry& chem, Rng& rng);

} // namespace chemlab
