#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lambekdm/syntype.hpp"
#include "lambekdm/term.hpp"

namespace lambekdm {

// L treats the antecedent as a flat list (associative); NL keeps the binary
// bracketing and only ever splits at the root of a bracket.
enum class Mode { NL, L };

struct TypedVar {
    std::string name;
    SynType type;
    bool hypothetical = false; // introduced by an I-rule rather than a word

    bool operator==(const TypedVar& o) const {
        return name == o.name && type == o.type && hypothetical == o.hypothetical;
    }
};

struct Bracket;
using BracketPtr = std::shared_ptr<const Bracket>;

// Binary bracketing over typed variables; a leaf holds one variable.
struct Bracket {
    std::optional<TypedVar> var;
    BracketPtr left, right;

    bool is_leaf() const { return var.has_value(); }

    static BracketPtr leaf(TypedVar v);
    static BracketPtr node(BracketPtr l, BracketPtr r);
};

class Antecedent {
public:
    static Antecedent from_list(std::vector<TypedVar> vars);  // L mode
    static Antecedent from_tree(BracketPtr tree);             // NL mode

    Mode mode() const { return mode_; }

    // Variables left to right, regardless of mode.
    std::vector<TypedVar> leaves() const;
    size_t size() const;

    const std::vector<TypedVar>& list() const; // L only
    const BracketPtr& tree() const;            // NL only

    bool operator==(const Antecedent& o) const;

    // Joins two antecedents as an elimination conclusion does: NL brackets
    // them, L concatenates.
    static Antecedent combine(const Antecedent& l, const Antecedent& r);

    // x:np, (y:n/n, z:n)   brackets shown in NL mode only
    std::string print() const;

private:
    Mode mode_;
    std::vector<TypedVar> list_;
    BracketPtr tree_;
};

struct Sequent {
    Antecedent antecedent;
    SynType goal;

    bool operator==(const Sequent& o) const {
        return antecedent == o.antecedent && goal == o.goal;
    }
    std::string print() const;
};

enum class Rule { Ax, IOver, IUnder, EOver, EUnder };

const char* rule_name(Rule r);

// A natural-deduction derivation tree.  Premise order follows the antecedent:
// EOver holds [function, argument], EUnder holds [argument, function].
class Derivation {
public:
    static Derivation axiom(Sequent conclusion);
    static Derivation intro(Rule r, Sequent conclusion, Derivation premise);
    static Derivation elim(Rule r, Sequent conclusion, Derivation left, Derivation right);

    Rule rule() const { return rule_; }
    const Sequent& conclusion() const { return conclusion_; }
    const std::vector<Derivation>& premises() const { return *premises_; }

private:
    Derivation(Rule r, Sequent c, std::vector<Derivation> ps);

    Rule rule_;
    Sequent conclusion_;
    std::shared_ptr<const std::vector<Derivation>> premises_;
};

// Checks every node against its rule shape: antecedent structure, goal types,
// variable freshness.  Throws InvalidDerivation naming the failing path.
void validate(const Derivation& d);

// Curry-Howard reading of the derivation.  Requires a validated tree.
DirTerm extract_term(const Derivation& d);

} // namespace lambekdm
