#pragma once

#include <map>
#include <string>
#include <vector>

#include "lambekdm/sequent.hpp"

namespace lambekdm {

struct ParseOptions {
    Mode mode = Mode::NL;
    // Maximum number of simultaneously open hypotheses on any branch.
    int intro_budget = 2;
};

// All derivations of words |- goal, where each word takes its type from the
// assignment map.  NL mode tries every bracketing of the phrase.  Search is
// goal-directed over beta-normal derivations (the function side of an
// elimination is always an eliminations-only spine ending in an axiom), which
// keeps the derivation set finite; the budget then bounds hypothetical
// reasoning.  Results are deduplicated by term and sorted by term.
std::vector<Derivation> parse(const std::map<std::string, SynType>& types,
                              const std::vector<std::string>& words, const SynType& goal,
                              const ParseOptions& opts = {});

// Variable names handed to words in phrase order.
std::vector<std::string> word_var_names(size_t count);

} // namespace lambekdm
