#include "lambekdm/term.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "lambekdm/errors.hpp"

namespace lambekdm {

DirTerm DirTerm::var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = std::move(name);
    return DirTerm(std::move(n));
}

DirTerm DirTerm::lam_r(std::string param, std::optional<SynType> annotation, DirTerm body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::LamR;
    n->name = std::move(param);
    n->ann = std::move(annotation);
    n->a = std::move(body.node_);
    return DirTerm(std::move(n));
}

DirTerm DirTerm::lam_l(std::string param, std::optional<SynType> annotation, DirTerm body) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::LamL;
    n->name = std::move(param);
    n->ann = std::move(annotation);
    n->a = std::move(body.node_);
    return DirTerm(std::move(n));
}

DirTerm DirTerm::app_over(DirTerm fn, DirTerm arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::AppOver;
    n->a = std::move(fn.node_);
    n->b = std::move(arg.node_);
    return DirTerm(std::move(n));
}

DirTerm DirTerm::app_under(DirTerm arg, DirTerm fn) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::AppUnder;
    n->a = std::move(fn.node_);
    n->b = std::move(arg.node_);
    return DirTerm(std::move(n));
}

const std::string& DirTerm::var_name() const {
    if (node_->kind != Kind::Var) throw Error(Errc::ParseError, "var_name() on non-variable");
    return node_->name;
}

const std::string& DirTerm::param() const {
    if (!is_lambda()) throw Error(Errc::ParseError, "param() on non-lambda");
    return node_->name;
}

const std::optional<SynType>& DirTerm::annotation() const {
    if (!is_lambda()) throw Error(Errc::ParseError, "annotation() on non-lambda");
    return node_->ann;
}

DirTerm DirTerm::body() const {
    if (!is_lambda()) throw Error(Errc::ParseError, "body() on non-lambda");
    return DirTerm(node_->a);
}

DirTerm DirTerm::fn() const {
    if (!is_app()) throw Error(Errc::ParseError, "fn() on non-application");
    return DirTerm(node_->a);
}

DirTerm DirTerm::arg() const {
    if (!is_app()) throw Error(Errc::ParseError, "arg() on non-application");
    return DirTerm(node_->b);
}

bool DirTerm::contains_lambda() const {
    switch (kind()) {
    case Kind::Var: return false;
    case Kind::LamR:
    case Kind::LamL: return true;
    default: return fn().contains_lambda() || arg().contains_lambda();
    }
}

namespace {

void free_vars_rec(const DirTerm& t, std::vector<std::string>& bound,
                   std::vector<std::string>& out) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        if (std::find(bound.begin(), bound.end(), t.var_name()) == bound.end())
            out.push_back(t.var_name());
        break;
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL:
        bound.push_back(t.param());
        free_vars_rec(t.body(), bound, out);
        bound.pop_back();
        break;
    case DirTerm::Kind::AppOver:
        free_vars_rec(t.fn(), bound, out);
        free_vars_rec(t.arg(), bound, out);
        break;
    case DirTerm::Kind::AppUnder:
        free_vars_rec(t.arg(), bound, out);
        free_vars_rec(t.fn(), bound, out);
        break;
    }
}

using Env = std::vector<Binding>;

// Splits env so that the first part covers exactly the free variables of the
// left subterm, in order.  Linearity makes this split unique.
std::pair<Env, Env> split_env(const Env& env, const DirTerm& left_part) {
    std::vector<std::string> fv = free_vars(left_part);
    if (fv.size() > env.size())
        throw Error(Errc::LinearityViolation, "subterm uses more variables than available");
    Env first(env.begin(), env.begin() + static_cast<long>(fv.size()));
    Env rest(env.begin() + static_cast<long>(fv.size()), env.end());
    for (size_t i = 0; i < fv.size(); ++i)
        if (first[i].name != fv[i])
            throw Error(Errc::LinearityViolation,
                        "variables used out of context order near " + fv[i]);
    return {std::move(first), std::move(rest)};
}

SynType type_of_rec(const DirTerm& t, const Env& env) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        if (env.empty())
            throw Error(Errc::LinearityViolation, "variable " + t.var_name() + " not in context");
        if (env.size() > 1 || env[0].name != t.var_name())
            throw Error(Errc::LinearityViolation,
                        "context not fully consumed at variable " + t.var_name());
        return env[0].type;
    case DirTerm::Kind::AppOver: {
        auto [fn_env, arg_env] = split_env(env, t.fn());
        SynType ft = type_of_rec(t.fn(), fn_env);
        SynType at = type_of_rec(t.arg(), arg_env);
        if (ft.kind() != SynType::Kind::Over || ft.argument() != at)
            throw Error(Errc::IllTyped, "function type does not accept right argument in " +
                                            print_term(t));
        return ft.result();
    }
    case DirTerm::Kind::AppUnder: {
        auto [arg_env, fn_env] = split_env(env, t.arg());
        SynType at = type_of_rec(t.arg(), arg_env);
        SynType ft = type_of_rec(t.fn(), fn_env);
        if (ft.kind() != SynType::Kind::Under || ft.argument() != at)
            throw Error(Errc::IllTyped, "function type does not accept left argument in " +
                                            print_term(t));
        return ft.result();
    }
    case DirTerm::Kind::LamR: {
        if (!t.annotation())
            throw Error(Errc::IllTyped, "binder " + t.param() + " lacks a type annotation");
        Env inner = env;
        inner.push_back({t.param(), *t.annotation()});
        return SynType::over(type_of_rec(t.body(), inner), *t.annotation());
    }
    case DirTerm::Kind::LamL: {
        if (!t.annotation())
            throw Error(Errc::IllTyped, "binder " + t.param() + " lacks a type annotation");
        Env inner;
        inner.push_back({t.param(), *t.annotation()});
        inner.insert(inner.end(), env.begin(), env.end());
        return SynType::under(*t.annotation(), type_of_rec(t.body(), inner));
    }
    }
    throw Error(Errc::IllTyped, "unreachable term kind");
}

DirTerm rename_free(const DirTerm& t, const std::string& from, const std::string& to) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        return t.var_name() == from ? DirTerm::var(to) : t;
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL: {
        if (t.param() == from) return t;
        DirTerm nb = rename_free(t.body(), from, to);
        return t.kind() == DirTerm::Kind::LamR ? DirTerm::lam_r(t.param(), t.annotation(), nb)
                                               : DirTerm::lam_l(t.param(), t.annotation(), nb);
    }
    case DirTerm::Kind::AppOver:
        return DirTerm::app_over(rename_free(t.fn(), from, to), rename_free(t.arg(), from, to));
    case DirTerm::Kind::AppUnder:
        return DirTerm::app_under(rename_free(t.arg(), from, to), rename_free(t.fn(), from, to));
    }
    throw Error(Errc::IllTyped, "unreachable term kind");
}

// Capture-avoiding substitution t[x := u].
DirTerm subst(const DirTerm& t, const std::string& x, const DirTerm& u, int& fresh) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        return t.var_name() == x ? u : t;
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL: {
        if (t.param() == x) return t;
        std::vector<std::string> ufv = free_vars(u);
        std::string p = t.param();
        DirTerm body = t.body();
        if (std::find(ufv.begin(), ufv.end(), p) != ufv.end()) {
            std::string np = p + "#" + std::to_string(fresh++);
            body = rename_free(body, p, np);
            p = np;
        }
        DirTerm nb = subst(body, x, u, fresh);
        return t.kind() == DirTerm::Kind::LamR ? DirTerm::lam_r(p, t.annotation(), nb)
                                               : DirTerm::lam_l(p, t.annotation(), nb);
    }
    case DirTerm::Kind::AppOver:
        return DirTerm::app_over(subst(t.fn(), x, u, fresh), subst(t.arg(), x, u, fresh));
    case DirTerm::Kind::AppUnder:
        return DirTerm::app_under(subst(t.arg(), x, u, fresh), subst(t.fn(), x, u, fresh));
    }
    throw Error(Errc::IllTyped, "unreachable term kind");
}

// One leftmost-outermost step; nullopt when already normal.
std::optional<DirTerm> step(const DirTerm& t, int& fresh) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        return std::nullopt;
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL: {
        auto s = step(t.body(), fresh);
        if (!s) return std::nullopt;
        return t.kind() == DirTerm::Kind::LamR ? DirTerm::lam_r(t.param(), t.annotation(), *s)
                                               : DirTerm::lam_l(t.param(), t.annotation(), *s);
    }
    case DirTerm::Kind::AppOver: {
        if (t.fn().kind() == DirTerm::Kind::LamR)
            return subst(t.fn().body(), t.fn().param(), t.arg(), fresh);
        if (auto s = step(t.fn(), fresh)) return DirTerm::app_over(*s, t.arg());
        if (auto s = step(t.arg(), fresh)) return DirTerm::app_over(t.fn(), *s);
        return std::nullopt;
    }
    case DirTerm::Kind::AppUnder: {
        if (t.fn().kind() == DirTerm::Kind::LamL)
            return subst(t.fn().body(), t.fn().param(), t.arg(), fresh);
        if (auto s = step(t.arg(), fresh)) return DirTerm::app_under(*s, t.fn());
        if (auto s = step(t.fn(), fresh)) return DirTerm::app_under(t.arg(), *s);
        return std::nullopt;
    }
    }
    return std::nullopt;
}

void canonical_rec(const DirTerm& t, std::map<std::string, std::string>& bound, int& depth,
                   std::string& out) {
    switch (t.kind()) {
    case DirTerm::Kind::Var: {
        auto it = bound.find(t.var_name());
        out += it != bound.end() ? it->second : t.var_name();
        break;
    }
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL: {
        std::string slot = "b" + std::to_string(depth++);
        out += t.kind() == DirTerm::Kind::LamR ? "\\r " : "\\l ";
        out += slot;
        if (t.annotation()) {
            out += ':';
            out += print_syntype(*t.annotation());
        }
        out += ". ";
        auto saved = bound.count(t.param()) ? std::optional<std::string>(bound[t.param()])
                                            : std::nullopt;
        bound[t.param()] = slot;
        canonical_rec(t.body(), bound, depth, out);
        if (saved)
            bound[t.param()] = *saved;
        else
            bound.erase(t.param());
        break;
    }
    case DirTerm::Kind::AppOver:
        out += '(';
        canonical_rec(t.fn(), bound, depth, out);
        out += " < ";
        canonical_rec(t.arg(), bound, depth, out);
        out += ')';
        break;
    case DirTerm::Kind::AppUnder:
        out += '(';
        canonical_rec(t.arg(), bound, depth, out);
        out += " > ";
        canonical_rec(t.fn(), bound, depth, out);
        out += ')';
        break;
    }
}

void print_rec(const DirTerm& t, std::string& out) {
    switch (t.kind()) {
    case DirTerm::Kind::Var:
        out += t.var_name();
        break;
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL:
        out += t.kind() == DirTerm::Kind::LamR ? "\\r " : "\\l ";
        out += t.param();
        if (t.annotation()) {
            out += ':';
            out += print_syntype(*t.annotation());
        }
        out += ". ";
        print_rec(t.body(), out);
        break;
    case DirTerm::Kind::AppOver:
        out += '(';
        print_rec(t.fn(), out);
        out += " < ";
        print_rec(t.arg(), out);
        out += ')';
        break;
    case DirTerm::Kind::AppUnder:
        out += '(';
        print_rec(t.arg(), out);
        out += " > ";
        print_rec(t.fn(), out);
        out += ')';
        break;
    }
}

struct TermParser {
    const std::string& s;
    size_t pos = 0;

    explicit TermParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(Errc::ParseError,
                    msg + " at position " + std::to_string(pos) + " in term: " + s);
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size()) {
            unsigned char c = static_cast<unsigned char>(s[pos]);
            if (std::isalnum(c) || c == '_' || c == '\'' || c == '#')
                ++pos;
            else
                break;
        }
        if (start == pos) fail("expected identifier");
        return s.substr(start, pos - start);
    }

    DirTerm term() {
        skip_ws();
        if (pos < s.size() && s[pos] == '\\') {
            ++pos;
            if (pos >= s.size() || (s[pos] != 'r' && s[pos] != 'l'))
                fail("expected \\r or \\l");
            bool right = s[pos] == 'r';
            ++pos;
            std::string name = ident();
            skip_ws();
            std::optional<SynType> ann;
            if (pos < s.size() && s[pos] == ':') {
                ++pos;
                size_t dot = s.find('.', pos);
                if (dot == std::string::npos) fail("expected '.' after binder annotation");
                ann = parse_syntype(s.substr(pos, dot - pos));
                pos = dot;
            }
            skip_ws();
            if (pos >= s.size() || s[pos] != '.') fail("expected '.' after binder");
            ++pos;
            DirTerm body = term();
            return right ? DirTerm::lam_r(name, ann, body) : DirTerm::lam_l(name, ann, body);
        }
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            DirTerm left = term();
            skip_ws();
            if (pos >= s.size() || (s[pos] != '<' && s[pos] != '>'))
                fail("expected '<' or '>'");
            char op = s[pos++];
            DirTerm right = term();
            skip_ws();
            if (pos >= s.size() || s[pos] != ')') fail("expected ')'");
            ++pos;
            return op == '<' ? DirTerm::app_over(left, right) : DirTerm::app_under(left, right);
        }
        return DirTerm::var(ident());
    }
};

} // namespace

std::vector<std::string> free_vars(const DirTerm& t) {
    std::vector<std::string> bound, out;
    free_vars_rec(t, bound, out);
    return out;
}

SynType type_of(const DirTerm& t, const std::vector<Binding>& env) {
    std::set<std::string> names;
    for (const auto& b : env)
        if (!names.insert(b.name).second)
            throw Error(Errc::LinearityViolation, "duplicate context variable " + b.name);
    return type_of_rec(t, env);
}

DirTerm beta_reduce(const DirTerm& t) {
    int fresh = 0;
    DirTerm cur = t;
    while (auto s = step(cur, fresh)) cur = *s;
    return cur;
}

std::string canonical_term_key(const DirTerm& t) {
    std::map<std::string, std::string> bound;
    int depth = 0;
    std::string out;
    canonical_rec(t, bound, depth, out);
    return out;
}

bool alpha_equal(const DirTerm& a, const DirTerm& b) {
    return canonical_term_key(a) == canonical_term_key(b);
}

std::string print_term(const DirTerm& t) {
    std::string out;
    print_rec(t, out);
    return out;
}

DirTerm parse_term(const std::string& text) {
    TermParser p(text);
    DirTerm t = p.term();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error(Errc::ParseError, "trailing characters in term: " + text);
    return t;
}

} // namespace lambekdm
