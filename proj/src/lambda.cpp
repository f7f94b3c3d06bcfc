#include "chemlab/lambda.hpp"

#include <cctype>
#include <deque>
#include <optional>
#include <vector>

#include "chemlab/error.hpp"

namespace chemlab {

TermPtr Term::var(std::string name, Span span)
{
    auto t = std::make_shared<Term>();
    t->kind = Kind::Var;
    t->name = std::move(name);
    t->span = span;
    return t;
}

TermPtr Term::lam(std::string binder, TermPtr body, Span span)
{
    auto t = std::make_shared<Term>();
    t->kind = Kind::Lam;
    t->name = std::move(binder);
    t->left = std::move(body);
    t->span = span;
    return t;
}

TermPtr Term::app(TermPtr fun, TermPtr arg, Span span)
{
    auto t = std::make_shared<Term>();
    t->kind = Kind::App;
    t->left = std::move(fun);
    t->right = std::move(arg);
    t->span = span;
    return t;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    TermPtr parse()
    {
        skip_space();
        if (at_end())
            fail("empty term");
        auto t = application();
        skip_space();
        if (!at_end())
            fail(s_[pos_] == ')' ? "unbalanced ')'" : "unexpected character");
        return t;
    }

private:
    static bool name_char(char c)
    {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }

    bool at_end() const { return pos_ >= s_.size(); }

    void skip_space()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::SyntaxError, what + " at column " + std::to_string(pos_ + 1), 1, pos_ + 1);
    }

    bool lambda_sign()
    {
        if (!at_end() && s_[pos_] == '\\') {
            ++pos_;
            return true;
        }
        if (s_.substr(pos_).starts_with("\xCE\xBB")) {
            pos_ += 2;
            return true;
        }
        return false;
    }

    bool atom_start() const
    {
        if (at_end())
            return false;
        char c = s_[pos_];
        return c == '(' || c == '\\' || name_char(c) || s_.substr(pos_).starts_with("\xCE\xBB");
    }

    std::string name()
    {
        skip_space();
        std::size_t b = pos_;
        while (!at_end() && name_char(s_[pos_]))
            ++pos_;
        if (b == pos_)
            fail("expected a variable name");
        return std::string(s_.substr(b, pos_ - b));
    }

    TermPtr application()
    {
        const std::size_t b = pos_;
        TermPtr t = atom();
        for (skip_space(); atom_start(); skip_space()) {
            TermPtr arg = atom();
            t = Term::app(t, arg, {b, pos_});
        }
        return t;
    }

    TermPtr atom()
    {
        skip_space();
        const std::size_t b = pos_;
        if (at_end())
            fail("unexpected end of input");
        if (lambda_sign()) {
            std::string binder = name();
            skip_space();
            if (at_end() || s_[pos_] != '.')
                fail("expected '.'");
            ++pos_;
            skip_space();
            if (!atom_start())
                fail("expected a lambda body");
            TermPtr body = atom();
            return Term::lam(std::move(binder), body, {b, pos_});
        }
        if (s_[pos_] == '(') {
            ++pos_;
            skip_space();
            if (!atom_start())
                fail("expected a term after '('");
            TermPtr t = application();
            skip_space();
            if (at_end() || s_[pos_] != ')')
                fail("expected ')'");
            ++pos_;
            return t;
        }
        if (name_char(s_[pos_])) {
            std::string n = name();
            return Term::var(std::move(n), {b, pos_});
        }
        fail("unexpected character");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

// De Bruijn form: bound variables by index, free ones by name.
struct DbTerm {
    Term::Kind kind;
    std::optional<std::size_t> index; // Var: bound
    std::string free_name;            // Var: free
    std::unique_ptr<DbTerm> left, right;
};

std::unique_ptr<DbTerm> to_de_bruijn(const Term& t, std::vector<std::string>& scope)
{
    auto d = std::make_unique<DbTerm>();
    d->kind = t.kind;
    switch (t.kind) {
    case Term::Kind::Var:
        for (std::size_t i = scope.size(); i > 0; --i)
            if (scope[i - 1] == t.name) {
                d->index = scope.size() - i;
                break;
            }
        if (!d->index)
            d->free_name = t.name;
        break;
    case Term::Kind::Lam:
        scope.push_back(t.name);
        d->left = to_de_bruijn(*t.left, scope);
        scope.pop_back();
        break;
    case Term::Kind::App:
        d->left = to_de_bruijn(*t.left, scope);
        d->right = to_de_bruijn(*t.right, scope);
        break;
    }
    return d;
}

std::size_t count_uses(const DbTerm& t, std::size_t depth)
{
    switch (t.kind) {
    case Term::Kind::Var: return t.index && *t.index == depth ? 1 : 0;
    case Term::Kind::Lam: return count_uses(*t.left, depth + 1);
    case Term::Kind::App: return count_uses(*t.left, depth) + count_uses(*t.right, depth);
    }
    return 0;
}

void free_uses(const DbTerm& t, std::vector<std::pair<std::string, std::size_t>>& out)
{
    switch (t.kind) {
    case Term::Kind::Var:
        if (!t.index) {
            for (auto& [n, c] : out)
                if (n == t.free_name) {
                    ++c;
                    return;
                }
            out.emplace_back(t.free_name, 1);
        }
        break;
    case Term::Kind::Lam: free_uses(*t.left, out); break;
    case Term::Kind::App:
        free_uses(*t.left, out);
        free_uses(*t.right, out);
        break;
    }
}

class Compiler {
public:
    explicit Compiler(const LambdaOptions& options) : fanout_(options.fanout == Fanout::FO ? "FO" : "FOE") {}

    MolPattern run(const DbTerm& t)
    {
        std::vector<std::pair<std::string, std::size_t>> frees;
        free_uses(t, frees);
        for (const auto& [name, uses] : frees) {
            Tag v = fresh();
            mol_.nodes.push_back({"FRIN", {v}});
            free_[name] = uses_for(v, uses);
        }
        Tag root = compile(t);
        mol_.nodes.push_back({"FROUT", {root}});
        return std::move(mol_);
    }

private:
    Tag fresh() { return std::to_string(next_++); }

    // Tags standing for each use of a variable whose binder emits `v`.
    std::deque<Tag> uses_for(const Tag& v, std::size_t uses)
    {
        std::deque<Tag> out;
        if (uses == 0) {
            mol_.nodes.push_back({"T", {v}});
        } else if (uses == 1) {
            out.push_back(v);
        } else {
            Tag in = v;
            for (std::size_t k = 0; k + 1 < uses; ++k) {
                Tag left = fresh();
                Tag right = fresh();
                mol_.nodes.push_back({fanout_, {in, left, right}});
                out.push_back(left);
                in = right;
            }
            out.push_back(in);
        }
        return out;
    }

    Tag compile(const DbTerm& t)
    {
        switch (t.kind) {
        case Term::Kind::Var: {
            auto& q = t.index ? scope_[scope_.size() - 1 - *t.index] : free_[t.free_name];
            Tag tag = q.front();
            q.pop_front();
            return tag;
        }
        case Term::Kind::Lam: {
            const std::size_t at = mol_.nodes.size();
            mol_.nodes.push_back({"L", {}});
            Tag v = fresh();
            scope_.push_back(uses_for(v, count_uses(*t.left, 0)));
            Tag body = compile(*t.left);
            scope_.pop_back();
            Tag out = fresh();
            mol_.nodes[at].ports = {body, v, out};
            return out;
        }
        case Term::Kind::App: {
            const std::size_t at = mol_.nodes.size();
            mol_.nodes.push_back({"A", {}});
            Tag f = compile(*t.left);
            Tag a = compile(*t.right);
            Tag out = fresh();
            mol_.nodes[at].ports = {f, a, out};
            return out;
        }
        }
        return {};
    }

    std::string fanout_;
    MolPattern mol_;
    std::size_t next_ = 1;
    std::vector<std::deque<Tag>> scope_;
    std::map<std::string, std::deque<Tag>> free_;
};

void census(const DbTerm& t, LambdaCensus& c)
{
    switch (t.kind) {
    case Term::Kind::Var: break;
    case Term::Kind::Lam: {
        ++c.abstractions;
        std::size_t n = count_uses(*t.left, 0);
        if (n == 0)
            ++c.unused_binders;
        else
            c.fanouts += n - 1;
        census(*t.left, c);
        break;
    }
    case Term::Kind::App:
        ++c.applications;
        census(*t.left, c);
        census(*t.right, c);
        break;
    }
}

} // namespace

TermPtr parse_lambda(std::string_view text)
{
    return Parser(text).parse();
}

std::string to_string(const TermPtr& t)
{
    switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Lam: return "(\\" + t->name + "." + to_string(t->left) + ")";
    case Term::Kind::App: return "(" + to_string(t->left) + " " + to_string(t->right) + ")";
    }
    return {};
}

MolPattern term_to_mol(const TermPtr& term, const LambdaOptions& options)
{
    std::vector<std::string> scope;
    auto db = to_de_bruijn(*term, scope);
    return Compiler(options).run(*db);
}

LambdaCensus lambda_census(const TermPtr& term)
{
    std::vector<std::string> scope;
    auto db = to_de_bruijn(*term, scope);
    LambdaCensus c;
    census(*db, c);
    std::vector<std::pair<std::string, std::size_t>> frees;
    free_uses(*db, frees);
    c.free_variables = frees.size();
    for (const auto& [name, uses] : frees)
        c.fanouts += uses - 1;
    return c;
}

} // namespace chemlab
