#pragma once

#include <memory>
#include <string>
#include <vector>

namespace lambekdm {

// Syntactic types of the directional calculus: atoms and the two slashed
// implications. B/A expects its argument A to the right, A\B to the left.
// Values are immutable and cheap to copy (shared structure underneath).
class SynType {
public:
    enum class Kind { Atom, Over, Under };

    static SynType atom(std::string name);
    static SynType over(SynType result, SynType argument);  // result / argument
    static SynType under(SynType argument, SynType result); // argument \ result

    Kind kind() const { return node_->kind; }
    bool is_atom() const { return node_->kind == Kind::Atom; }

    // Atom name; only valid on atoms.
    const std::string& name() const;

    // For Over: result() / argument().  For Under: argument() \ result().
    SynType result() const;
    SynType argument() const;

    bool operator==(const SynType& other) const;
    bool operator!=(const SynType& other) const { return !(*this == other); }

    // Total order, used to keep search candidate sets deterministic.
    bool operator<(const SynType& other) const;

    // Number of slashes in the type.
    int complexity() const;

private:
    struct Node {
        Kind kind;
        std::string atom;     // Kind::Atom
        std::shared_ptr<const Node> left, right; // Over: result/arg, Under: arg/result
    };

    explicit SynType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;

    friend std::string print_syntype(const SynType&);
};

// Fully parenthesized except at the outermost level: (n\n)/np, s/(np\s).
std::string print_syntype(const SynType& t);

// Inverse of print_syntype.  Rejects unparenthesized chains like a/b/c.
SynType parse_syntype(const std::string& text);

// All distinct subformulas of t, including t itself, sorted.
std::vector<SynType> subformulas(const SynType& t);

} // namespace lambekdm
