#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <functional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "chemlab/chemistry.hpp"
#include "chemlab/mol.hpp"

namespace chemlab {

/// Where each tag sits: at most two (node, port) occurrences.
class MolIndex {
public:
    struct Occurrence {
        std::size_t node;
        std::size_t port;
    };

    explicit MolIndex(const MolPattern& mol);

    /// The occurrence of the tag other than (node, port), if any.
    std::optional<Occurrence> other_end(const Tag& tag, std::size_t node, std::size_t port) const;

private:
    std::unordered_map<Tag, std::vector<Occurrence>> occ_;
};

/// A located LHS occurrence. node_map[0] is the image of the left-typed LHS
/// line, node_map[1] of the right-typed one. tag_map sends every LHS
/// placeholder to a molecule tag (injective on the contact tag, at most
/// 2-to-1 on the interface).
struct Match {
    std::size_t rewrite = 0; // index into Chemistry::rewrites()
    std::vector<std::size_t> node_map;
    std::map<Tag, Tag> tag_map;

    bool operator==(const Match&) const = default;
};

/// Fresh tags that never collide with the molecule it was built for.
/// Emits <prefix><counter>, with the prefix chosen so that no existing tag
/// starts with it.
class TagSource {
public:
    explicit TagSource(const MolPattern& mol);

    Tag next();
    const std::string& prefix() const { return prefix_; }

private:
    std::string prefix_;
    std::uint64_t counter_ = 0;
};

std::vector<Match> match_at(const MolPattern& mol, std::size_t node_index, const Chemistry& chem);
std::vector<Match> match_at(const MolPattern& mol, const MolIndex& index, std::size_t node_index, const Chemistry& chem);

/// Every match, ordered by (anchor node index, rewrite name). A pair matched
/// from both of its nodes by the same rewrite is reported once.
/// `threads` > 1 splits the scan; the result does not depend on it.
std::vector<Match> find_matches(const MolPattern& mol, const Chemistry& chem, unsigned threads = 1);

/// Matches conflict when their node images intersect.
bool conflicts(const Match& a, const Match& b);

/// Throws Error(StaleMatch) if the match no longer describes the molecule.
void check_match(const MolPattern& mol, const Match& match, const Chemistry& chem);

/// Parallel application: all LHS images are spliced out, then one RHS copy
/// per match is appended in the given order. RHS-internal edges get tags
/// from `tags`; interface edges inherit the molecule's tags.
/// Throws Error(StaleMatch) or Error(ConflictingMatches).
MolPattern apply_matches(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem, TagSource& tags);
MolPattern apply_match(const MolPattern& mol, const Match& match, const Chemistry& chem, TagSource& tags);

/// Supplies the tags of one match's RHS-internal placeholders.
using InternalTags = std::function<std::map<Tag, Tag>(const Match&, const Rewrite&)>;

/// apply_matches with a caller-chosen source for RHS-internal tags.
MolPattern apply_matches_with(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem,
                              const InternalTags& internal_tags);

struct CombResult {
    MolPattern mol;
    // Each erased Arrow as a closed node "Arrow e e" on the edge it freed.
    std::vector<MolNode> erased;
};

/// Eliminates Arrow nodes to a fixpoint: an Arrow whose first port shares
/// its tag with another node is spliced out, and Arrow self-loops vanish.
/// Arrows whose first port is free stay.
CombResult comb_pass_detailed(const MolPattern& mol, const TypeRegistry& types);
MolPattern comb_pass(const MolPattern& mol, const TypeRegistry& types);

/// Arrow nodes that a single COMB step could erase right now.
std::vector<std::size_t> comb_candidates(const MolPattern& mol, const TypeRegistry& types);
/// One COMB step on the given Arrow node.
MolPattern comb_one(const MolPattern& mol, std::size_t arrow, const TypeRegistry& types);

enum class Policy { Random, Deterministic };

std::string_view to_string(Policy policy);
Policy policy_from_string(std::string_view text);

struct ReductionConfig {
    std::uint64_t seed = 0;
    std::size_t max_steps = 1000;
    // Selection probability per weight group. Missing groups default to 1.
    std::map<std::string, double> weights = default_weights();
    Policy policy = Policy::Random;
    bool hapax = false;
    // Token1 count minted per rewrite when hapax is on.
    std::size_t hapax_tokens = 1000;
    unsigned threads = 1;
    // Record a mol snapshot every k steps (0 = never).
    std::size_t snapshot_every = 0;
    // Stop once the molecule grows beyond this many nodes (0 = no bound).
    std::size_t node_bound = 0;

    static std::map<std::string, double> default_weights();
    double weight(const std::string& group) const;
};

using Rng = std::mt19937_64;

/// Random policy: shuffle, then greedily accept each match that does not
/// conflict with an accepted one, with probability weights[group].
/// Deterministic policy: kind priority BETA > FAN-IN > TERM > DIST, then node
/// order; every non-conflicting match of a group with positive weight is taken.
std::vector<Match> select_matches(const std::vector<Match>& matches, const Chemistry& chem, const ReductionConfig& config,
                                  Rng& rng);

struct AppliedRewrite {
    std::string name;
    std::vector<std::size_t> nodes;
};

struct StepRecord {
    std::size_t step = 0;
    std::vector<AppliedRewrite> applied;
    std::size_t nodes_before = 0;
    std::size_t nodes_pre_comb = 0;
    std::size_t nodes_after = 0;
    std::size_t edges_after = 0;
    std::map<std::string, std::size_t> counts;
};

enum class Termination { Running, NoMatches, MaxSteps, Empty, NodeBound };

std::string_view to_string(Termination t);

class TokenLedger;

struct ReductionState {
    MolPattern mol;
    TagSource tags;
    std::size_t steps = 0;
    Termination status = Termination::Running;

    explicit ReductionState(MolPattern m) : mol(std::move(m)), tags(mol) {}
};

/// One round: find, select, apply in parallel, COMB. When no match can fire
/// (none found, or all of them in weight-0 groups or out of hapax tokens) the
/// molecule is left alone and the status becomes NoMatches.
StepRecord step(ReductionState& state, const Chemistry& chem, const ReductionConfig& config, Rng& rng,
                TokenLedger* ledger = nullptr);

struct Snapshot {
    std::size_t step;
    std::string mol;
};

struct ReductionTrace {
    std::string initial_code; // base-32 canonical code of the input
    std::uint64_t seed = 0;
    StepRecord initial;
    std::vector<StepRecord> steps;
    std::vector<Snapshot> snapshots;
    MolPattern final_mol;
    Termination termination = Termination::Running;
};

ReductionTrace reduce(const MolPattern& mol, const Chemistry& chem, const ReductionConfig& config);

/// One JSON object per line: the initial census, every step, and an end record.
void write_trace(std::ostream& out, const ReductionTrace& trace);

/// The JSON line write_trace emits for one step.
std::string step_record_line(const StepRecord& record);

StepRecord census(const MolPattern& mol, std::size_t step);

} // namespace chemlab
