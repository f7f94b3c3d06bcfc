#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chemlab/chemistry.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/mol.hpp"

namespace chemlab {

// Token-conservative rewriting. Every rewrite LHS -> RHS is run in the form
//
//     LHS + Token1 --> RHS + Token2
//
// where Token1 carries the RHS node types and Token2 the LHS node types, so
// the per-type node census of molecule plus ledger never changes and no
// fresh tag is drawn: RHS-internal edges reuse Token1's edges, and Token2
// keeps the LHS contact edge plus the Token1 edges the RHS left over.

/// Token1 wiring over placeholders: the configured one, or the RHS types
/// with ports filled pairwise from (RHS-internal placeholders, extras).
MolPattern token1_shape(const Rewrite& rw);
/// Token2 wiring over placeholders: the configured one, or the LHS types
/// with ports filled pairwise from (contact placeholder, extras).
MolPattern token2_shape(const Rewrite& rw);

class TokenLedger {
public:
    TokenLedger() = default;
    /// Token edges are named with a prefix no tag of `mol` starts with.
    explicit TokenLedger(const MolPattern& mol);

    void mint(const std::string& rewrite, std::size_t count);
    void mint_all(const Chemistry& chem, std::size_t count_per_rewrite);

    std::size_t token1_count(const std::string& rewrite) const;
    std::size_t token2_count(const std::string& rewrite) const;
    /// Arrows erased by COMB, kept as "Arrow e e" tokens.
    std::size_t absorbed(const std::string& arrow_type) const;
    const MolPattern* last_token2(const std::string& rewrite) const;

    /// Consumes one Token1 and returns it with concrete edge tags.
    /// Throws Error(InsufficientTokens).
    MolPattern take_token1(const Rewrite& rw);
    void emit_token2(const std::string& rewrite, MolPattern token);
    void absorb(const MolNode& arrow);

    /// Node types held by the ledger's tokens.
    std::map<std::string, std::size_t> node_counts(const Chemistry& chem) const;

private:
    std::string prefix_ = "h";
    std::uint64_t counter_ = 0;
    std::map<std::string, std::size_t> token1_;
    std::map<std::string, std::size_t> token2_;
    std::map<std::string, MolPattern> last_token2_;
    std::map<std::string, std::size_t> absorbed_;
};

struct HapaxResult {
    MolPattern mol;
    TokenLedger ledger;
};

/// Applies one match in token-conservative form.
HapaxResult hapax_apply(const MolPattern& mol, const Match& match, const Chemistry& chem, TokenLedger ledger);

/// Parallel token-conservative application; the ledger is updated in place.
MolPattern hapax_apply_many(const MolPattern& mol, const std::vector<Match>& matches, const Chemistry& chem,
                            TokenLedger& ledger);

/// COMB pass that moves every erased Arrow into the ledger.
MolPattern hapax_comb(const MolPattern& mol, const TypeRegistry& types, TokenLedger& ledger);

/// Per-type census of molecule plus ledger.
std::map<std::string, std::size_t> conserved_counts(const MolPattern& mol, const TokenLedger& ledger, const Chemistry& chem);

} // namespace chemlab
