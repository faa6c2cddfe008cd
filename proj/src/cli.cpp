#include "lambekdm/cli.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

#include "lambekdm/ambiguity.hpp"
#include "lambekdm/errors.hpp"
#include "lambekdm/io.hpp"
#include "lambekdm/syntype.hpp"
#include "lambekdm/term.hpp"

namespace lambekdm {

namespace {

using nlohmann::json;

CmdResult failure(const std::string& msg) { return {1, "", msg}; }

std::string dump(const json& j) { return j.dump(2); }

// Runs a command body and folds any thrown Error into exit code 1.
template <typename Fn>
CmdResult guarded(Fn&& body) {
    try {
        return body();
    } catch (const Error& e) {
        return failure(e.what());
    } catch (const std::exception& e) {
        return failure(e.what());
    }
}

std::map<std::string, SynType> types_for(const Lexicon& lex,
                                         const std::vector<std::string>& words) {
    std::map<std::string, SynType> types;
    for (const std::string& w : words) {
        auto it = lex.entries.find(w);
        if (it == lex.entries.end())
            throw Error(Errc::UnknownWord, "no lexicon entry for " + w);
        types.emplace(w, it->second.type);
    }
    return types;
}

bool parse_index(const std::string& s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && out >= 0;
}

// Vector-lifted embedding of a word, or a failure explaining why it has
// none.
const Tensor& vector_entry(const LoadedLexicon& lex, const std::string& word) {
    if (!lex.lexicon.entries.count(word))
        throw Error(Errc::UnknownWord, "no lexicon entry for " + word);
    auto it = lex.vectors.find(word);
    if (it == lex.vectors.end())
        throw Error(Errc::ShapeMismatch,
                    "entry " + word + " was not written in vector form, so it has no embedding");
    return it->second;
}

// Space label of a vector-lifted entry's (atomic) type.
std::string entry_space(const LoadedLexicon& lex, const std::string& word) {
    return space_label(lex.lexicon.entries.at(word).type.name());
}

} // namespace

std::vector<std::string> split_words(const std::string& phrase) {
    std::istringstream in(phrase);
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(std::move(w));
    return words;
}

CmdResult cmd_parse(const std::string& lexicon_path, const std::string& phrase,
                    const std::string& goal, const ParseCmdOptions& opts) {
    return guarded([&]() -> CmdResult {
        LoadedLexicon lex = load_lexicon(lexicon_path);
        std::vector<std::string> words = split_words(phrase);
        if (words.empty()) return failure("empty phrase");
        SynType goal_type = parse_syntype(goal);
        ParseOptions po;
        po.mode = opts.mode;
        po.intro_budget = opts.intro_budget;
        std::vector<Derivation> ds = parse(types_for(lex.lexicon, words), words, goal_type, po);

        json j;
        j["count"] = ds.size();
        j["derivations"] = json::array();
        for (const Derivation& d : ds) j["derivations"].push_back(print_term(extract_term(d)));
        CmdResult r{ds.empty() ? 2 : 0, dump(j), ""};
        if (ds.empty()) r.diagnostic = "no derivation of " + phrase + " : " + goal;
        return r;
    });
}

CmdResult cmd_interpret(const std::string& lexicon_path, const std::string& phrase,
                        const std::string& goal, const std::string& reading,
                        const std::string& dot_path, const ParseCmdOptions& opts) {
    return guarded([&]() -> CmdResult {
        LoadedLexicon lex = load_lexicon(lexicon_path);
        std::vector<std::string> words = split_words(phrase);
        if (words.empty()) return failure("empty phrase");
        SynType goal_type = parse_syntype(goal);
        ParseOptions po;
        po.mode = opts.mode;
        po.intro_budget = opts.intro_budget;
        std::vector<Reading> readings = enumerate_readings(words, lex.lexicon, goal_type, po);

        std::vector<size_t> picked;
        if (reading == "all") {
            for (size_t i = 0; i < readings.size(); ++i) picked.push_back(i);
        } else {
            int idx = 0;
            if (!parse_index(reading, idx))
                return failure("reading must be \"all\" or a non-negative index, got " + reading);
            if (static_cast<size_t>(idx) >= readings.size())
                return failure("reading " + reading + " out of range, phrase has " +
                               std::to_string(readings.size()) + " readings");
            picked.push_back(static_cast<size_t>(idx));
        }

        json j;
        j["count"] = readings.size();
        j["readings"] = json::array();
        for (size_t i : picked) {
            const Reading& rd = readings[i];
            json jr;
            jr["index"] = i;
            jr["term"] = print_term(rd.term);
            jr["subsystems"] = json::object();
            for (const auto& [var, ids] : rd.subsystems) jr["subsystems"][var] = ids;
            jr["value"] = dm_to_json(rd.value);
            j["readings"].push_back(std::move(jr));
        }

        if (!dot_path.empty()) {
            std::vector<Reading> chosen;
            for (size_t i : picked) chosen.push_back(readings[i]);
            write_text_file(dot_path, contraction_dot(chosen, words, lex.lexicon));
        }

        CmdResult r{readings.empty() ? 2 : 0, dump(j), ""};
        if (readings.empty()) r.diagnostic = "no derivation of " + phrase + " : " + goal;
        return r;
    });
}

CmdResult cmd_similarity(const std::string& lexicon_path, const std::string& word_a,
                         const std::string& word_b, const std::string& metric_atom) {
    return guarded([&]() -> CmdResult {
        LoadedLexicon lex = load_lexicon(lexicon_path);
        const Tensor& va = vector_entry(lex, word_a);
        const Tensor& vb = vector_entry(lex, word_b);

        std::string label;
        if (metric_atom.empty()) {
            label = entry_space(lex, word_a);
            std::string other = entry_space(lex, word_b);
            if (label != other)
                return failure("entries live on different spaces " + label + " and " + other +
                               "; pick one with --metric");
        } else {
            (void)lex.lexicon.atom_dim(metric_atom);
            label = space_label(metric_atom);
        }

        double sim = cosine_similarity(lex.lexicon.space_metric(label), va, vb);
        json j;
        j["a"] = word_a;
        j["b"] = word_b;
        j["metric"] = label;
        j["similarity"] = sim;
        return CmdResult{0, dump(j), ""};
    });
}

CmdResult cmd_fit_metric(const std::string& lexicon_path, const std::string& judgments_path,
                         const std::string& atom, double reg, const std::string& out_path) {
    return guarded([&]() -> CmdResult {
        LoadedLexicon lex = load_lexicon(lexicon_path);
        std::vector<Judgment> judgments = load_judgments(judgments_path);
        int dim = lex.lexicon.atom_dim(atom);
        std::string label = space_label(atom);

        std::vector<SimilarityJudgment> samples;
        for (const Judgment& jd : judgments) {
            const Tensor& va = vector_entry(lex, jd.word_a);
            const Tensor& vb = vector_entry(lex, jd.word_b);
            for (const std::string& w : {jd.word_a, jd.word_b})
                if (entry_space(lex, w) != label)
                    return failure("judgment word " + w + " lives on space " +
                                   entry_space(lex, w) + ", not " + label);
            samples.push_back({va, vb, jd.similarity});
        }

        Metric fitted = Metric::identity(dim);
        double objective = 0.0;
        int iters = 0;
        if (!samples.empty()) {
            MetricFitOptions fo;
            fo.reg = reg;
            MetricFitResult res = metric_fit(samples, dim, fo);
            fitted = res.metric;
            objective = res.objective;
            iters = res.iters;
        }

        json j;
        j["atom"] = atom;
        j["dim"] = dim;
        j["iters"] = iters;
        j["objective"] = objective;
        if (!out_path.empty()) {
            write_text_file(out_path,
                            metric_file_to_json(MetricFile{atom, dim, fitted.components()}));
            j["out"] = out_path;
        }
        return CmdResult{0, dump(j), ""};
    });
}

CmdResult cmd_route(const std::string& lexicon_path, const std::string& phrase,
                    const std::string& goal, int from, int to, const ParseCmdOptions& opts) {
    return guarded([&]() -> CmdResult {
        LoadedLexicon lex = load_lexicon(lexicon_path);
        std::vector<std::string> words = split_words(phrase);
        if (words.empty()) return failure("empty phrase");
        SynType goal_type = parse_syntype(goal);
        ParseOptions po;
        po.mode = opts.mode;
        po.intro_budget = opts.intro_budget;
        std::vector<Reading> readings = enumerate_readings(words, lex.lexicon, goal_type, po);
        if (readings.empty())
            return CmdResult{2, "", "no derivation of " + phrase + " : " + goal};
        for (int idx : {from, to})
            if (idx < 0 || static_cast<size_t>(idx) >= readings.size())
                return failure("reading " + std::to_string(idx) + " out of range, phrase has " +
                               std::to_string(readings.size()) + " readings");

        RouteResult route = permutation_route(readings[static_cast<size_t>(from)],
                                              readings[static_cast<size_t>(to)].derivation,
                                              lex.lexicon, words);

        json j;
        j["from"] = from;
        j["scopes"] = json::array();
        j["sequence"] = json::array();
        for (const RouteStep& s : route.steps) {
            j["scopes"].push_back(s.on_traces ? "traces" : "words");
            j["sequence"].push_back(s.op.print());
        }
        j["to"] = to;
        j["value"] = dm_to_json(route.value);
        return CmdResult{0, dump(j), ""};
    });
}

} // namespace lambekdm
