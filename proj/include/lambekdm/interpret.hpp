#pragma once

#include <map>
#include <string>
#include <vector>

#include "lambekdm/density.hpp"
#include "lambekdm/sequent.hpp"
#include "lambekdm/syntype.hpp"
#include "lambekdm/term.hpp"

namespace lambekdm {

// Space label an atom's interpretation lives in.  np and n share N, s maps
// to S, any other atom is its own name uppercased.
std::string space_label(const std::string& atom);

// Factor list of the density space interpreting a type.  An atom becomes one
// standard factor over its space label (subsystem 0); B/A appends the
// dualized block of A to the block of B, A\B prepends it.  Dualizing a block
// reverses factor order and flips every leg.  Dimensions are looked up by
// atom name first, then by space label.
std::vector<SpaceFactor> interpret_type(const SynType& t, const std::map<std::string, int>& dims);

// Flips a factor block to the dual arrangement: reversed order, every leg
// exchanged between standard and dual.
std::vector<SpaceFactor> dual_space(std::vector<SpaceFactor> factors);

struct LexiconEntry {
    SynType type;
    DMTensor value;
};

// Word meanings plus the space data needed to interpret types.  dims may be
// keyed by atom name or by space label; metrics are keyed by space label and
// default to the identity.  The metric plays no role in evaluation, which is
// pure contraction; it belongs to the lexicon because similarity scores and
// dualization need one per space.
struct Lexicon {
    std::map<std::string, LexiconEntry> entries;
    std::map<std::string, int> dims;
    std::map<std::string, Metric> metrics;

    // Dimension of the space interpreting an atom; atom key wins over label.
    int atom_dim(const std::string& atom) const;

    // Registered metric for a space label, identity at the label's dimension
    // otherwise.
    Metric space_metric(const std::string& label) const;
};

// Throws ShapeMismatch unless the entry's value inhabits the space its type
// denotes: same factor sequence up to subsystem ids.
void check_lexicon_entry(const std::string& word, const LexiconEntry& entry,
                         const std::map<std::string, int>& dims);

using Assignment = std::map<std::string, DMTensor>;

// One subsystem id per factor of a variable's value, applied when the
// variable is looked up.  Distinct readings of one phrase differ exactly in
// which ids coincide, so contractions only ever join factors whose ids were
// assigned equal.
using SubsystemAssignment = std::map<std::string, std::vector<int>>;

// Evaluates a directional term.  Variables resolve through g first and then
// through the lexicon.  An elimination contracts the argument's whole factor
// block pairwise against the function block facing it, outermost pair first.
// An abstraction sums the body over every basis element of the bound
// hypothesis space, juxtaposing each summand with the matching dual-space
// basis element on the side the binder faces.
DMTensor interpret_term(const DirTerm& t, const Assignment& g, const Lexicon& lex,
                        const SubsystemAssignment& subsystems = {});

// Validates d, extracts its term, binds the leaf variables to the words'
// lexicon values in phrase order, and evaluates.  Exactly interpret_term
// composed with extract_term.
DMTensor interpret_derivation(const Derivation& d, const Lexicon& lex,
                              const std::vector<std::string>& words,
                              const SubsystemAssignment& subsystems = {});

} // namespace lambekdm
