#include "lambekdm/syntype.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lambekdm/errors.hpp"

namespace lambekdm {

SynType SynType::atom(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->atom = std::move(name);
    return SynType(std::move(n));
}

SynType SynType::over(SynType result, SynType argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Over;
    n->left = std::move(result.node_);
    n->right = std::move(argument.node_);
    return SynType(std::move(n));
}

SynType SynType::under(SynType argument, SynType result) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Under;
    n->left = std::move(argument.node_);
    n->right = std::move(result.node_);
    return SynType(std::move(n));
}

const std::string& SynType::name() const {
    if (node_->kind != Kind::Atom)
        throw Error(Errc::ParseError, "name() called on a non-atomic type");
    return node_->atom;
}

SynType SynType::result() const {
    switch (node_->kind) {
    case Kind::Over: return SynType(node_->left);
    case Kind::Under: return SynType(node_->right);
    default: throw Error(Errc::ParseError, "result() called on an atomic type");
    }
}

SynType SynType::argument() const {
    switch (node_->kind) {
    case Kind::Over: return SynType(node_->right);
    case Kind::Under: return SynType(node_->left);
    default: throw Error(Errc::ParseError, "argument() called on an atomic type");
    }
}

bool SynType::operator==(const SynType& other) const {
    if (node_ == other.node_) return true;
    if (node_->kind != other.node_->kind) return false;
    if (node_->kind == Kind::Atom) return node_->atom == other.node_->atom;
    return SynType(node_->left) == SynType(other.node_->left) &&
           SynType(node_->right) == SynType(other.node_->right);
}

bool SynType::operator<(const SynType& other) const {
    return print_syntype(*this) < print_syntype(other);
}

int SynType::complexity() const {
    if (node_->kind == Kind::Atom) return 0;
    return 1 + SynType(node_->left).complexity() + SynType(node_->right).complexity();
}

namespace {

void print_rec(const SynType& t, std::string& out, bool outermost) {
    if (t.is_atom()) {
        out += t.name();
        return;
    }
    if (!outermost) out += '(';
    if (t.kind() == SynType::Kind::Over) {
        print_rec(t.result(), out, false);
        out += '/';
        print_rec(t.argument(), out, false);
    } else {
        print_rec(t.argument(), out, false);
        out += '\\';
        print_rec(t.result(), out, false);
    }
    if (!outermost) out += ')';
}

struct TypeParser {
    const std::string& s;
    size_t pos = 0;

    explicit TypeParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool at_ident_char() const {
        if (pos >= s.size()) return false;
        unsigned char c = static_cast<unsigned char>(s[pos]);
        return std::isalnum(c) || c == '_' || c == '\'';
    }

    SynType parse_part() {
        skip_ws();
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            SynType inner = parse_type();
            skip_ws();
            if (pos >= s.size() || s[pos] != ')')
                throw Error(Errc::ParseError, "expected ')' in type: " + s);
            ++pos;
            return inner;
        }
        if (!at_ident_char())
            throw Error(Errc::ParseError, "expected atom or '(' at position " +
                                              std::to_string(pos) + " in type: " + s);
        size_t start = pos;
        while (at_ident_char()) ++pos;
        return SynType::atom(s.substr(start, pos - start));
    }

    SynType parse_type() {
        SynType left = parse_part();
        skip_ws();
        if (pos < s.size() && (s[pos] == '/' || s[pos] == '\\')) {
            char op = s[pos++];
            SynType right = parse_part();
            skip_ws();
            // Fully parenthesized syntax: a second slash at this level is ambiguous.
            if (pos < s.size() && (s[pos] == '/' || s[pos] == '\\'))
                throw Error(Errc::ParseError,
                            "unparenthesized slash chain in type: " + s);
            return op == '/' ? SynType::over(left, right) : SynType::under(left, right);
        }
        return left;
    }
};

void collect_subformulas(const SynType& t, std::set<SynType>& out) {
    out.insert(t);
    if (!t.is_atom()) {
        collect_subformulas(t.result(), out);
        collect_subformulas(t.argument(), out);
    }
}

} // namespace

std::string print_syntype(const SynType& t) {
    std::string out;
    print_rec(t, out, true);
    return out;
}

SynType parse_syntype(const std::string& text) {
    TypeParser p(text);
    SynType t = p.parse_type();
    p.skip_ws();
    if (p.pos != text.size())
        throw Error(Errc::ParseError, "trailing characters in type: " + text);
    return t;
}

std::vector<SynType> subformulas(const SynType& t) {
    std::set<SynType> acc;
    collect_subformulas(t, acc);
    return std::vector<SynType>(acc.begin(), acc.end());
}

} // namespace lambekdm
