#pragma once

#include <string>

#include "lambekdm/prove.hpp"

namespace lambekdm {

// Outcome of one subcommand: the JSON for stdout, free-form diagnostics for
// stderr, and the process exit code.  Code 0 means success with at least one
// derivation where that applies, 2 means a well-formed query with no
// derivation, 1 means any error.
struct CmdResult {
    int exit_code = 0;
    std::string out;
    std::string diagnostic;
};

struct ParseCmdOptions {
    Mode mode = Mode::NL;
    int intro_budget = 2;
};

// Splits a phrase on runs of whitespace.
std::vector<std::string> split_words(const std::string& phrase);

// Derivations of the phrase toward the goal type:
// { "count", "derivations": [term strings] }.
CmdResult cmd_parse(const std::string& lexicon_path, const std::string& phrase,
                    const std::string& goal, const ParseCmdOptions& opts = {});

// Evaluated readings: { "count", "readings": [ { "index", "term",
// "subsystems", "value" } ] }.  reading selects one index or "all"; when
// dot_path is non-empty a graphviz rendering of the selected readings is
// written there.
CmdResult cmd_interpret(const std::string& lexicon_path, const std::string& phrase,
                        const std::string& goal, const std::string& reading = "all",
                        const std::string& dot_path = "", const ParseCmdOptions& opts = {});

// Metric cosine of two vector-lifted entries: { "a", "b", "metric",
// "similarity" }.  metric_atom picks the space; empty means the words' own
// atomic types, which must then agree.  Entries that were not written in
// vector form are refused.
CmdResult cmd_similarity(const std::string& lexicon_path, const std::string& word_a,
                         const std::string& word_b, const std::string& metric_atom = "");

// Fits a metric on the atom's space to cosine judgments over vector-lifted
// entries and writes it to out_path: { "atom", "dim", "iters", "objective",
// "out" }.  An empty judgment list yields the identity metric.
CmdResult cmd_fit_metric(const std::string& lexicon_path, const std::string& judgments_path,
                         const std::string& atom, double reg, const std::string& out_path);

// Permutation route between two readings of one phrase: { "from", "scopes",
// "sequence", "to", "value" }.  The sequence lists operator names, scopes
// says whether each acts on the words' factors or the trace list, and value
// is the target reading computed along the route.
CmdResult cmd_route(const std::string& lexicon_path, const std::string& phrase,
                    const std::string& goal, int from, int to,
                    const ParseCmdOptions& opts = {});

} // namespace lambekdm
