#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "chemlab/error.hpp"
#include "chemlab/mol.hpp"
#include "chemlab/node_type.hpp"

namespace chemlab {

enum class RewriteKind { Beta, Dist, FanIn, Term, Comb, IcAnnihilate, IcCommute };

std::string_view to_string(RewriteKind kind);
RewriteKind rewrite_kind_from_string(std::string_view text);

/// A two-node connection-pattern rewrite.
///
/// The LHS is always two lines: the `left`-typed node then the `right`-typed
/// node, sharing one contact tag. Placeholders number the LHS ports 1, 2, ...
/// in reading order; the contact port of the right node reuses the number of
/// the left node's contact port. So `left = A, right = A, contact = 1 3`
/// gives the template "A 1 2 3 / A 3 4 5". The interface is every LHS
/// placeholder except the contact one.
struct Rewrite {
    std::string name;
    std::string left;
    std::string right;
    std::size_t right_contact_port = 0; // 0-based port on the right-typed node
    std::size_t left_contact_port = 0;  // 0-based port on the left-typed node
    std::string action;
    RewriteKind kind = RewriteKind::Beta;
    std::string weight_group;
    std::vector<std::string> blocks;
    MolPattern lhs;
    MolPattern rhs;
    // Token-conservative (hapax) form. When absent a generic wiring is used.
    std::optional<MolPattern> token1;
    std::optional<MolPattern> token2;

    std::vector<std::string> rhs_types() const;
    const Tag& contact_tag() const { return lhs.nodes[1].ports[right_contact_port]; }
    std::set<Tag> interface() const;
    long node_delta() const { return static_cast<long>(rhs.size()) - static_cast<long>(lhs.size()); }
};

/// Two-line LHS template for the given contact (0-based ports).
MolPattern make_lhs_template(const NodeType& left, std::size_t left_port, const NodeType& right, std::size_t right_port);

struct RewriteViolation {
    ErrorCode code;
    std::string message;
};

struct RewriteReport {
    std::vector<RewriteViolation> violations;
    std::set<Tag> interface;
    long node_delta = 0;

    bool ok() const { return violations.empty(); }
};

class Chemistry;

/// Checks a rewrite against a chemistry without throwing.
RewriteReport validate_rewrite(const Rewrite& rw, const Chemistry& chem);

class Chemistry {
public:
    Chemistry() = default;
    Chemistry(std::string name, TypeRegistry types, std::vector<Rewrite> rewrites);

    const std::string& name() const { return name_; }
    const TypeRegistry& types() const { return types_; }
    const std::vector<Rewrite>& rewrites() const { return rewrites_; }
    const Rewrite* find_rewrite(const std::string& name) const;
    std::optional<std::size_t> rewrite_index(const std::string& name) const;

    /// True if any non-support type is oriented.
    bool oriented() const;

    /// Rewrites whose right-typed node has this type.
    const std::vector<std::size_t>& rewrites_for_right(const std::string& type) const;

    /// Copy without the named rewrites (rule masking).
    Chemistry without(const std::set<std::string>& rewrite_names) const;

    /// The config text this chemistry was loaded from, if any.
    const std::string& source() const { return source_; }
    void set_source(std::string text) { source_ = std::move(text); }

private:
    void index();

    std::string name_;
    TypeRegistry types_;
    std::vector<Rewrite> rewrites_;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> by_right_;
    std::string source_;
};

/// Parses and validates a chemistry config. See docs/chemistry-format.md.
/// Throws Error with InterfaceMismatch, UnknownType, DuplicateRewriteName,
/// BadValence or ConfigSyntax.
Chemistry load_chemistry(std::string_view config_text);

/// "chemlambda-v2", "ic" or "chemlambda+ic". Throws Error(UnknownChemistry).
const Chemistry& builtin(std::string_view name);

std::vector<std::string> builtin_names();
std::string_view builtin_source(std::string_view name);

} // namespace chemlab
