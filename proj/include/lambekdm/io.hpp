#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lambekdm/ambiguity.hpp"
#include "lambekdm/density.hpp"
#include "lambekdm/interpret.hpp"
#include "lambekdm/tensor.hpp"

namespace lambekdm {

// A lexicon read from disk, keeping the raw embedding vector of every entry
// that was written in vector form.  Similarity scoring is defined only for
// those entries; everything else (components, mixtures) lives in the lexicon
// as a density tensor with no underlying vector.
struct LoadedLexicon {
    Lexicon lexicon;
    std::map<std::string, Tensor> vectors;
};

struct Judgment {
    std::string word_a;
    std::string word_b;
    double similarity = 0.0;
};

// Lexicon file layout, one JSON object:
//   atoms    object, atom name -> dimension (required)
//   metrics  object, atom or space label -> flat row-major array (optional,
//            identity where absent)
//   entries  array of { word, type, value } where value carries exactly one
//            of
//              vector     flat array, entry type must be a bare atom
//              components flat array over the type's density space
//              mixture    array of { weight, components }, convexly combined
// Atoms sharing a space label must agree on the dimension; words must be
// unique.  Structural problems raise ParseError, shape problems ShapeMismatch
// and friends.
LoadedLexicon lexicon_from_json(const std::string& text);
LoadedLexicon load_lexicon(const std::string& path);

// Canonical serialization: object keys sorted, floats printed
// shortest-round-trip, entries ordered by word.  Vector entries keep their
// vector form; mixtures were already combined at load and come back as
// components.  Loading the output reproduces the same lexicon bit for bit.
std::string lexicon_to_json(const LoadedLexicon& lex);
void save_lexicon(const LoadedLexicon& lex, const std::string& path);

// Judgment file layout: { "judgments": [ { "a", "b", "similarity" } ] } with
// every similarity inside [0, 1].
std::vector<Judgment> judgments_from_json(const std::string& text);
std::vector<Judgment> load_judgments(const std::string& path);

// Metric file layout: { "atom", "dim", "d" } with d flat row-major.
struct MetricFile {
    std::string atom;
    int dim = 0;
    std::vector<double> d;
};

std::string metric_file_to_json(const MetricFile& mf);
MetricFile metric_file_from_json(const std::string& text);

// Density tensor as { "factors": [ { label, subsystem, dim, row, col } ],
// "components": [...] } with legs named "standard" / "dual".
nlohmann::json dm_to_json(const DMTensor& t);
DMTensor dm_from_json(const nlohmann::json& j);

// Undirected graphviz rendering of readings over one phrase: one box per
// word, one labeled edge per contraction (the label names the space and the
// shared subsystem id).  Edge styles tell readings apart: the first reading's
// links are drawn solid, the second dashed, then dotted and bold.
std::string contraction_dot(const std::vector<Reading>& readings,
                            const std::vector<std::string>& words, const Lexicon& lex);

// Whole-file helpers; reading a missing file raises ParseError.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace lambekdm
