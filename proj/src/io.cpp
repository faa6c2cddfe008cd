#include "lambekdm/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "lambekdm/errors.hpp"
#include "lambekdm/syntype.hpp"
#include "lambekdm/term.hpp"

namespace lambekdm {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::ParseError, msg); }

const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) bad(where + " is missing \"" + key + "\"");
    return *it;
}

std::string string_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_string()) bad(where + " field \"" + key + "\" must be a string");
    return v.get<std::string>();
}

double number_field(const json& j, const char* key, const std::string& where) {
    const json& v = field(j, key, where);
    if (!v.is_number()) bad(where + " field \"" + key + "\" must be a number");
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const json& x : v) {
        if (!x.is_number()) bad(where + " must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

json parse_json(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) bad(what + " is not valid JSON");
    return j;
}

// Space label an atom-or-label metric key refers to, given the declared
// atoms.  Atom names win; otherwise the key must already be some atom's
// label.
std::string resolve_space_key(const std::string& key, const std::map<std::string, int>& dims) {
    if (dims.count(key)) return space_label(key);
    for (const auto& [atom, dim] : dims) {
        (void)dim;
        if (space_label(atom) == key) return key;
    }
    throw Error(Errc::UnknownAtom, "metric key " + key + " names no declared atom or space");
}

int label_dim(const std::string& label, const std::map<std::string, int>& dims) {
    for (const auto& [atom, dim] : dims)
        if (space_label(atom) == label) return dim;
    throw Error(Errc::UnknownAtom, "no declared atom for space " + label);
}

DMTensor entry_value(const json& value, const std::string& word, const SynType& type,
                     const std::map<std::string, int>& dims,
                     std::map<std::string, Tensor>& vectors) {
    if (!value.is_object()) bad("entry " + word + " value must be an object");
    int forms = static_cast<int>(value.contains("vector")) +
                static_cast<int>(value.contains("components")) +
                static_cast<int>(value.contains("mixture"));
    if (forms != 1)
        bad("entry " + word + " value needs exactly one of vector, components, mixture");

    std::vector<SpaceFactor> factors = interpret_type(type, dims);

    if (value.contains("vector")) {
        std::vector<double> v = number_array(value.at("vector"), "entry " + word + " vector");
        if (factors.size() != 1 || factors[0].variance() != FactorVariance::Standard)
            throw Error(Errc::ShapeMismatch,
                        "entry " + word + " lifts a vector, so its type must be a bare atom");
        Tensor vec = Tensor::vector(v);
        DMTensor lifted = dm_from_vector(vec, factors[0]);
        vectors.emplace(word, std::move(vec));
        return lifted;
    }
    if (value.contains("components")) {
        return DMTensor(factors,
                        number_array(value.at("components"), "entry " + word + " components"));
    }
    const json& mix = value.at("mixture");
    if (!mix.is_array() || mix.empty())
        bad("entry " + word + " mixture must be a non-empty array");
    std::vector<double> weights;
    std::vector<DMTensor> parts;
    for (const json& part : mix) {
        if (!part.is_object()) bad("entry " + word + " mixture parts must be objects");
        weights.push_back(number_field(part, "weight", "entry " + word + " mixture part"));
        parts.emplace_back(factors, number_array(field(part, "components",
                                                       "entry " + word + " mixture part"),
                                                 "entry " + word + " mixture components"));
    }
    return dm_mix(weights, parts);
}

const char* leg_name(LegKind k) { return k == LegKind::Standard ? "standard" : "dual"; }

LegKind leg_of(const std::string& s, const std::string& where) {
    if (s == "standard") return LegKind::Standard;
    if (s == "dual") return LegKind::Dual;
    bad(where + " leg must be \"standard\" or \"dual\", got \"" + s + "\"");
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

} // namespace

LoadedLexicon lexicon_from_json(const std::string& text) {
    json j = parse_json(text, "lexicon");
    if (!j.is_object()) bad("lexicon must be a JSON object");

    LoadedLexicon out;

    const json& atoms = field(j, "atoms", "lexicon");
    if (!atoms.is_object()) bad("lexicon atoms must be an object");
    for (const auto& [name, dim] : atoms.items()) {
        if (name.empty()) bad("atom names must be non-empty");
        if (!dim.is_number_integer() || dim.get<int>() < 1)
            bad("atom " + name + " needs a positive integer dimension");
        out.lexicon.dims.emplace(name, dim.get<int>());
    }
    std::map<std::string, std::pair<std::string, int>> by_label;
    for (const auto& [atom, dim] : out.lexicon.dims) {
        auto [it, fresh] = by_label.emplace(space_label(atom), std::make_pair(atom, dim));
        if (!fresh && it->second.second != dim)
            bad("atoms " + it->second.first + " and " + atom + " share space " + it->first +
                " but declare dimensions " + std::to_string(it->second.second) + " and " +
                std::to_string(dim));
    }

    if (j.contains("metrics")) {
        const json& metrics = j.at("metrics");
        if (!metrics.is_object()) bad("lexicon metrics must be an object");
        for (const auto& [key, entries] : metrics.items()) {
            std::string label = resolve_space_key(key, out.lexicon.dims);
            if (out.lexicon.metrics.count(label))
                bad("two metrics declared for space " + label);
            out.lexicon.metrics.emplace(
                label, Metric(label_dim(label, out.lexicon.dims),
                              number_array(entries, "metric " + key)));
        }
    }

    if (j.contains("entries")) {
        const json& entries = j.at("entries");
        if (!entries.is_array()) bad("lexicon entries must be an array");
        for (const json& e : entries) {
            if (!e.is_object()) bad("lexicon entries must be objects");
            std::string word = string_field(e, "word", "entry");
            if (word.empty()) bad("entry words must be non-empty");
            if (std::any_of(word.begin(), word.end(),
                            [](unsigned char c) { return std::isspace(c); }))
                bad("entry word \"" + word + "\" contains whitespace");
            if (out.lexicon.entries.count(word)) bad("entry " + word + " declared twice");
            SynType type = parse_syntype(string_field(e, "type", "entry " + word));
            DMTensor value = entry_value(field(e, "value", "entry " + word), word, type,
                                         out.lexicon.dims, out.vectors);
            out.lexicon.entries.emplace(word, LexiconEntry{std::move(type), std::move(value)});
        }
    }

    return out;
}

LoadedLexicon load_lexicon(const std::string& path) {
    return lexicon_from_json(read_text_file(path));
}

std::string lexicon_to_json(const LoadedLexicon& lex) {
    json j;
    j["atoms"] = json::object();
    for (const auto& [atom, dim] : lex.lexicon.dims) j["atoms"][atom] = dim;
    if (!lex.lexicon.metrics.empty()) {
        j["metrics"] = json::object();
        for (const auto& [label, metric] : lex.lexicon.metrics)
            j["metrics"][label] = metric.components();
    }
    j["entries"] = json::array();
    for (const auto& [word, entry] : lex.lexicon.entries) {
        json e;
        e["word"] = word;
        e["type"] = print_syntype(entry.type);
        auto vit = lex.vectors.find(word);
        if (vit != lex.vectors.end())
            e["value"]["vector"] = vit->second.components();
        else
            e["value"]["components"] = entry.value.components();
        j["entries"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

void save_lexicon(const LoadedLexicon& lex, const std::string& path) {
    write_text_file(path, lexicon_to_json(lex));
}

std::vector<Judgment> judgments_from_json(const std::string& text) {
    json j = parse_json(text, "judgment file");
    if (!j.is_object()) bad("judgment file must be a JSON object");
    const json& rows = field(j, "judgments", "judgment file");
    if (!rows.is_array()) bad("judgments must be an array");
    std::vector<Judgment> out;
    for (const json& row : rows) {
        if (!row.is_object()) bad("judgments must be objects");
        Judgment jd;
        jd.word_a = string_field(row, "a", "judgment");
        jd.word_b = string_field(row, "b", "judgment");
        jd.similarity = number_field(row, "similarity", "judgment");
        if (jd.word_a.empty() || jd.word_b.empty()) bad("judgment words must be non-empty");
        if (jd.similarity < 0.0 || jd.similarity > 1.0)
            bad("judgment similarity " + std::to_string(jd.similarity) +
                " falls outside [0, 1]");
        out.push_back(std::move(jd));
    }
    return out;
}

std::vector<Judgment> load_judgments(const std::string& path) {
    return judgments_from_json(read_text_file(path));
}

std::string metric_file_to_json(const MetricFile& mf) {
    json j;
    j["atom"] = mf.atom;
    j["dim"] = mf.dim;
    j["d"] = mf.d;
    return j.dump(2) + "\n";
}

MetricFile metric_file_from_json(const std::string& text) {
    json j = parse_json(text, "metric file");
    if (!j.is_object()) bad("metric file must be a JSON object");
    MetricFile mf;
    mf.atom = string_field(j, "atom", "metric file");
    const json& dim = field(j, "dim", "metric file");
    if (!dim.is_number_integer() || dim.get<int>() < 1)
        bad("metric file dim must be a positive integer");
    mf.dim = dim.get<int>();
    mf.d = number_array(field(j, "d", "metric file"), "metric file d");
    if (mf.d.size() != static_cast<size_t>(mf.dim) * static_cast<size_t>(mf.dim))
        bad("metric file d needs " + std::to_string(mf.dim * mf.dim) + " entries, got " +
            std::to_string(mf.d.size()));
    return mf;
}

json dm_to_json(const DMTensor& t) {
    json j;
    j["factors"] = json::array();
    for (const SpaceFactor& f : t.factors()) {
        json jf;
        jf["label"] = f.label;
        jf["subsystem"] = f.subsystem;
        jf["dim"] = f.dim;
        jf["row"] = leg_name(f.row);
        jf["col"] = leg_name(f.col);
        j["factors"].push_back(std::move(jf));
    }
    j["components"] = t.components();
    return j;
}

DMTensor dm_from_json(const json& j) {
    if (!j.is_object()) bad("tensor must be a JSON object");
    const json& jfs = field(j, "factors", "tensor");
    if (!jfs.is_array()) bad("tensor factors must be an array");
    std::vector<SpaceFactor> factors;
    for (const json& jf : jfs) {
        if (!jf.is_object()) bad("tensor factors must be objects");
        SpaceFactor f;
        f.label = string_field(jf, "label", "factor");
        const json& sub = field(jf, "subsystem", "factor");
        if (!sub.is_number_integer()) bad("factor subsystem must be an integer");
        f.subsystem = sub.get<int>();
        const json& dim = field(jf, "dim", "factor");
        if (!dim.is_number_integer() || dim.get<int>() < 1)
            bad("factor dim must be a positive integer");
        f.dim = dim.get<int>();
        f.row = leg_of(string_field(jf, "row", "factor"), "factor row");
        f.col = leg_of(string_field(jf, "col", "factor"), "factor col");
        factors.push_back(std::move(f));
    }
    return DMTensor(std::move(factors),
                    number_array(field(j, "components", "tensor"), "tensor components"));
}

std::string contraction_dot(const std::vector<Reading>& readings,
                            const std::vector<std::string>& words, const Lexicon& lex) {
    static const char* styles[] = {"solid", "dashed", "dotted", "bold"};

    std::ostringstream out;
    out << "graph contractions {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=box];\n";
    for (size_t i = 0; i < words.size(); ++i)
        out << "  w" << i << " [label=\"" << dot_escape(words[i]) << "\"];\n";

    std::vector<std::string> names = word_var_names(words.size());
    for (size_t r = 0; r < readings.size(); ++r) {
        out << "  // reading " << r << ": " << print_term(readings[r].term) << "\n";
        // Two factors share a contraction exactly when they share a subsystem
        // id; ids are handed out from one counter, so the id alone keys the
        // link and the word's factor list supplies the space label.
        std::map<std::pair<int, std::string>, std::vector<size_t>> links;
        for (size_t w = 0; w < words.size(); ++w) {
            auto it = readings[r].subsystems.find(names[w]);
            if (it == readings[r].subsystems.end()) continue;
            auto entry = lex.entries.find(words[w]);
            if (entry == lex.entries.end())
                throw Error(Errc::UnknownWord, "no lexicon entry for " + words[w]);
            const std::vector<SpaceFactor>& factors = entry->second.value.factors();
            for (size_t k = 0; k < it->second.size() && k < factors.size(); ++k)
                links[{it->second[k], factors[k].label}].push_back(w);
        }
        for (const auto& [key, ws] : links) {
            if (ws.size() != 2) continue;
            out << "  w" << ws[0] << " -- w" << ws[1] << " [label=\"" << dot_escape(key.second)
                << ":" << key.first << "\", style=" << styles[r % 4] << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::ParseError, "cannot write " + path);
    out << text;
    if (!out) throw Error(Errc::ParseError, "write to " + path + " failed");
}

} // namespace lambekdm
