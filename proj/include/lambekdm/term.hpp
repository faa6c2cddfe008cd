#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lambekdm/syntype.hpp"

namespace lambekdm {

// Terms of the directional lambda calculus.  Two application directions
// (function before or after its argument) and two matching abstractions.
// Terms are immutable; "copies" share structure.
class DirTerm {
public:
    enum class Kind { Var, LamR, LamL, AppOver, AppUnder };

    static DirTerm var(std::string name);
    // \r x:A. body   binds a hypothesis appended to the right of the context
    static DirTerm lam_r(std::string param, std::optional<SynType> annotation, DirTerm body);
    // \l x:A. body   binds a hypothesis prepended to the left
    static DirTerm lam_l(std::string param, std::optional<SynType> annotation, DirTerm body);
    // (fn < arg)   function to the left of its argument
    static DirTerm app_over(DirTerm fn, DirTerm arg);
    // (arg > fn)   function to the right of its argument
    static DirTerm app_under(DirTerm arg, DirTerm fn);

    Kind kind() const { return node_->kind; }
    bool is_var() const { return node_->kind == Kind::Var; }
    bool is_lambda() const { return node_->kind == Kind::LamR || node_->kind == Kind::LamL; }
    bool is_app() const { return node_->kind == Kind::AppOver || node_->kind == Kind::AppUnder; }

    const std::string& var_name() const;       // Var
    const std::string& param() const;          // LamR/LamL
    const std::optional<SynType>& annotation() const; // LamR/LamL
    DirTerm body() const;                      // LamR/LamL
    DirTerm fn() const;                        // AppOver/AppUnder
    DirTerm arg() const;                       // AppOver/AppUnder

    bool contains_lambda() const;

private:
    struct Node {
        Kind kind;
        std::string name;             // Var name or lambda parameter
        std::optional<SynType> ann;   // lambda annotation
        std::shared_ptr<const Node> a, b; // lambda: a = body; app: a = fn, b = arg
    };

    explicit DirTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

struct Binding {
    std::string name;
    SynType type;
};

// Free variables in left-to-right surface order, duplicates preserved.
std::vector<std::string> free_vars(const DirTerm& t);

// The unique type of t in context env (variables in antecedent order, each
// consumed exactly once).  Lambda annotations are required here.
SynType type_of(const DirTerm& t, const std::vector<Binding>& env);

// Normal form under the two beta contractions.  Linear terms normalize in
// finitely many steps; reduction is leftmost-outermost.
DirTerm beta_reduce(const DirTerm& t);

bool alpha_equal(const DirTerm& a, const DirTerm& b);

// Printed with bound occurrences renamed by binder depth; equal strings
// exactly for alpha-equal terms.  Used for dedup and for stable ordering.
std::string canonical_term_key(const DirTerm& t);

// \r x:n. t    \l x:(n\n). t    (t < u)    (u > t)
std::string print_term(const DirTerm& t);

// Inverse of print_term; the ":type" annotation on binders is optional.
DirTerm parse_term(const std::string& text);

} // namespace lambekdm
