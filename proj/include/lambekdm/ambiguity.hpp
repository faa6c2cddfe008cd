#pragma once

#include <string>
#include <vector>

#include "lambekdm/density.hpp"
#include "lambekdm/interpret.hpp"
#include "lambekdm/prove.hpp"
#include "lambekdm/sequent.hpp"
#include "lambekdm/term.hpp"

namespace lambekdm {

// One way of putting a phrase together: a derivation, its extracted term, the
// subsystem ids separating the words' factors, and the evaluated result.
struct Reading {
    Derivation derivation;
    DirTerm term;
    SubsystemAssignment subsystems;
    DMTensor value;
};

// Fresh subsystem ids for every word factor of an eliminations-only
// derivation: the two factors each elimination contracts share one id, every
// factor left in the result gets its own.  Ids are handed out scanning the
// words' factors in surface order, so the numbering is deterministic.
// Derivations whose terms bind hypotheses are refused (InvalidDerivation):
// hypothetical factors belong to no word.
SubsystemAssignment assign_subsystems(const Derivation& d, const Lexicon& lex);

// One Reading per derivation of the phrase, in the parser's order.  Readings
// whose terms bind hypotheses evaluate untagged (empty assignment).
std::vector<Reading> enumerate_readings(const std::vector<std::string>& words, const Lexicon& lex,
                                        const SynType& goal, const ParseOptions& opts = {});

// One move of a permutation route.  The operator acts either on the words'
// factor tags or on the pending trace list, never both at once; an upper
// operator never moves traces, so upper trace moves are not generated.
struct RouteStep {
    PermutationOp op;
    bool on_traces = false;

    bool operator==(const RouteStep&) const = default;
};

struct RouteResult {
    std::vector<RouteStep> steps;
    DMTensor value;
};

// Finds a shortest sequence of permutation moves (breadth-first, at most
// max_ops) turning the source reading's contraction plan into the target
// derivation's, then computes the target value by applying those moves to the
// source's word interpretations and contracting the rerouted trace pairs.
// The target derivation is never evaluated directly.  Throws NoRouteFound
// when the bound is exhausted.
RouteResult permutation_route(const Reading& from, const Derivation& to, const Lexicon& lex,
                              const std::vector<std::string>& words, int max_ops = 4);

} // namespace lambekdm
