#include "lambekdm/sequent.hpp"

#include <set>

#include "lambekdm/errors.hpp"

namespace lambekdm {

BracketPtr Bracket::leaf(TypedVar v) {
    auto b = std::make_shared<Bracket>();
    b->var = std::move(v);
    return b;
}

BracketPtr Bracket::node(BracketPtr l, BracketPtr r) {
    auto b = std::make_shared<Bracket>();
    b->left = std::move(l);
    b->right = std::move(r);
    return b;
}

Antecedent Antecedent::from_list(std::vector<TypedVar> vars) {
    Antecedent a;
    a.mode_ = Mode::L;
    a.list_ = std::move(vars);
    return a;
}

Antecedent Antecedent::from_tree(BracketPtr tree) {
    Antecedent a;
    a.mode_ = Mode::NL;
    a.tree_ = std::move(tree);
    return a;
}

namespace {

void tree_leaves(const BracketPtr& t, std::vector<TypedVar>& out) {
    if (!t) return;
    if (t->is_leaf()) {
        out.push_back(*t->var);
        return;
    }
    tree_leaves(t->left, out);
    tree_leaves(t->right, out);
}

bool tree_equal(const BracketPtr& a, const BracketPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->is_leaf() != b->is_leaf()) return false;
    if (a->is_leaf()) return *a->var == *b->var;
    return tree_equal(a->left, b->left) && tree_equal(a->right, b->right);
}

void tree_print(const BracketPtr& t, std::string& out, bool outermost) {
    if (t->is_leaf()) {
        out += t->var->name;
        out += ':';
        out += print_syntype(t->var->type);
        return;
    }
    if (!outermost) out += '(';
    tree_print(t->left, out, false);
    out += ", ";
    tree_print(t->right, out, false);
    if (!outermost) out += ')';
}

} // namespace

std::vector<TypedVar> Antecedent::leaves() const {
    if (mode_ == Mode::L) return list_;
    std::vector<TypedVar> out;
    tree_leaves(tree_, out);
    return out;
}

size_t Antecedent::size() const {
    if (mode_ == Mode::L) return list_.size();
    return leaves().size();
}

const std::vector<TypedVar>& Antecedent::list() const {
    if (mode_ != Mode::L) throw Error(Errc::InvalidDerivation, "list() on a bracketed antecedent");
    return list_;
}

const BracketPtr& Antecedent::tree() const {
    if (mode_ != Mode::NL) throw Error(Errc::InvalidDerivation, "tree() on a list antecedent");
    return tree_;
}

bool Antecedent::operator==(const Antecedent& o) const {
    if (mode_ != o.mode_) return false;
    if (mode_ == Mode::L) return list_ == o.list_;
    return tree_equal(tree_, o.tree_);
}

Antecedent Antecedent::combine(const Antecedent& l, const Antecedent& r) {
    if (l.mode() != r.mode())
        throw Error(Errc::InvalidDerivation, "mixed antecedent modes");
    if (l.mode() == Mode::L) {
        std::vector<TypedVar> vars = l.list_;
        vars.insert(vars.end(), r.list_.begin(), r.list_.end());
        return from_list(std::move(vars));
    }
    return from_tree(Bracket::node(l.tree_, r.tree_));
}

std::string Antecedent::print() const {
    std::string out;
    if (mode_ == Mode::L) {
        for (size_t i = 0; i < list_.size(); ++i) {
            if (i) out += ", ";
            out += list_[i].name;
            out += ':';
            out += print_syntype(list_[i].type);
        }
    } else if (tree_) {
        tree_print(tree_, out, true);
    }
    return out;
}

std::string Sequent::print() const {
    return antecedent.print() + " |- " + print_syntype(goal);
}

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::Ax: return "Ax";
    case Rule::IOver: return "I/";
    case Rule::IUnder: return "I\\";
    case Rule::EOver: return "E/";
    case Rule::EUnder: return "E\\";
    }
    return "?";
}

Derivation::Derivation(Rule r, Sequent c, std::vector<Derivation> ps)
    : rule_(r), conclusion_(std::move(c)),
      premises_(std::make_shared<const std::vector<Derivation>>(std::move(ps))) {}

Derivation Derivation::axiom(Sequent conclusion) {
    return Derivation(Rule::Ax, std::move(conclusion), {});
}

Derivation Derivation::intro(Rule r, Sequent conclusion, Derivation premise) {
    if (r != Rule::IOver && r != Rule::IUnder)
        throw Error(Errc::InvalidDerivation, "intro() needs an introduction rule");
    return Derivation(r, std::move(conclusion), {std::move(premise)});
}

Derivation Derivation::elim(Rule r, Sequent conclusion, Derivation left, Derivation right) {
    if (r != Rule::EOver && r != Rule::EUnder)
        throw Error(Errc::InvalidDerivation, "elim() needs an elimination rule");
    return Derivation(r, std::move(conclusion), {std::move(left), std::move(right)});
}

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& msg) {
    throw Error(Errc::InvalidDerivation, (path.empty() ? "root" : path) + ": " + msg);
}

// The variable an introduction added: rightmost leaf for I/, leftmost for I\.
TypedVar intro_var(const Antecedent& premise_ant, bool rightmost) {
    std::vector<TypedVar> ls = premise_ant.leaves();
    if (ls.empty()) throw Error(Errc::InvalidDerivation, "empty premise antecedent");
    return rightmost ? ls.back() : ls.front();
}

// Premise antecedent minus the introduced leaf, preserving structure.
Antecedent strip_intro(const Antecedent& premise_ant, bool rightmost) {
    if (premise_ant.mode() == Mode::L) {
        std::vector<TypedVar> vars = premise_ant.list();
        if (vars.size() < 2)
            throw Error(Errc::InvalidDerivation, "introduction premise has no remaining context");
        if (rightmost)
            vars.pop_back();
        else
            vars.erase(vars.begin());
        return Antecedent::from_list(std::move(vars));
    }
    const BracketPtr& t = premise_ant.tree();
    if (!t || t->is_leaf())
        throw Error(Errc::InvalidDerivation, "introduction premise is not a bracket pair");
    const BracketPtr& hyp = rightmost ? t->right : t->left;
    if (!hyp->is_leaf())
        throw Error(Errc::InvalidDerivation, "introduced hypothesis is not a single leaf");
    return Antecedent::from_tree(rightmost ? t->left : t->right);
}

void validate_rec(const Derivation& d, const std::string& path) {
    const Sequent& c = d.conclusion();

    std::set<std::string> names;
    for (const auto& v : c.antecedent.leaves())
        if (!names.insert(v.name).second)
            invalid(path, "duplicate variable " + v.name + " in antecedent");

    switch (d.rule()) {
    case Rule::Ax: {
        if (!d.premises().empty()) invalid(path, "axiom with premises");
        auto ls = c.antecedent.leaves();
        if (ls.size() != 1) invalid(path, "axiom antecedent is not a single variable");
        if (!(ls[0].type == c.goal)) invalid(path, "axiom type differs from goal");
        break;
    }
    case Rule::IOver:
    case Rule::IUnder: {
        if (d.premises().size() != 1) invalid(path, "introduction needs one premise");
        const Sequent& p = d.premises()[0].conclusion();
        bool rightmost = d.rule() == Rule::IOver;
        if (p.antecedent.mode() != c.antecedent.mode()) invalid(path, "mode changes at introduction");
        TypedVar hyp = intro_var(p.antecedent, rightmost);
        if (!hyp.hypothetical) invalid(path, "introduced variable not marked hypothetical");
        for (const auto& v : c.antecedent.leaves())
            if (v.name == hyp.name) invalid(path, "hypothesis name " + hyp.name + " not fresh");
        Antecedent stripped = strip_intro(p.antecedent, rightmost);
        if (!(stripped == c.antecedent))
            invalid(path, "introduction premise context does not extend the conclusion");
        SynType expect = rightmost ? SynType::over(p.goal, hyp.type)
                                   : SynType::under(hyp.type, p.goal);
        if (!(c.goal == expect)) invalid(path, "introduction goal mismatch");
        validate_rec(d.premises()[0], path + "/0");
        break;
    }
    case Rule::EOver:
    case Rule::EUnder: {
        if (d.premises().size() != 2) invalid(path, "elimination needs two premises");
        const Sequent& pl = d.premises()[0].conclusion();
        const Sequent& pr = d.premises()[1].conclusion();
        if (pl.antecedent.mode() != c.antecedent.mode() ||
            pr.antecedent.mode() != c.antecedent.mode())
            invalid(path, "mode changes at elimination");
        if (!(Antecedent::combine(pl.antecedent, pr.antecedent) == c.antecedent))
            invalid(path, "premise contexts do not combine to the conclusion context");
        if (d.rule() == Rule::EOver) {
            // left: B/A, right: A
            if (pl.goal.kind() != SynType::Kind::Over)
                invalid(path, "major premise is not a rightward function");
            if (!(pl.goal.argument() == pr.goal)) invalid(path, "argument type mismatch");
            if (!(pl.goal.result() == c.goal)) invalid(path, "result type mismatch");
        } else {
            // left: A, right: A\B
            if (pr.goal.kind() != SynType::Kind::Under)
                invalid(path, "major premise is not a leftward function");
            if (!(pr.goal.argument() == pl.goal)) invalid(path, "argument type mismatch");
            if (!(pr.goal.result() == c.goal)) invalid(path, "result type mismatch");
        }
        validate_rec(d.premises()[0], path + "/0");
        validate_rec(d.premises()[1], path + "/1");
        break;
    }
    }
}

} // namespace

void validate(const Derivation& d) { validate_rec(d, ""); }

DirTerm extract_term(const Derivation& d) {
    switch (d.rule()) {
    case Rule::Ax:
        return DirTerm::var(d.conclusion().antecedent.leaves()[0].name);
    case Rule::IOver: {
        TypedVar hyp = intro_var(d.premises()[0].conclusion().antecedent, true);
        return DirTerm::lam_r(hyp.name, hyp.type, extract_term(d.premises()[0]));
    }
    case Rule::IUnder: {
        TypedVar hyp = intro_var(d.premises()[0].conclusion().antecedent, false);
        return DirTerm::lam_l(hyp.name, hyp.type, extract_term(d.premises()[0]));
    }
    case Rule::EOver:
        return DirTerm::app_over(extract_term(d.premises()[0]), extract_term(d.premises()[1]));
    case Rule::EUnder:
        return DirTerm::app_under(extract_term(d.premises()[0]), extract_term(d.premises()[1]));
    }
    throw Error(Errc::InvalidDerivation, "unreachable rule");
}

} // namespace lambekdm
