#include "lambekdm/interpret.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>

#include "lambekdm/errors.hpp"
#include "lambekdm/prove.hpp"

namespace lambekdm {

namespace {

LegKind flip(LegKind k) {
    return k == LegKind::Standard ? LegKind::Dual : LegKind::Standard;
}

// Relabels a value's factors with the per-factor subsystem ids assigned to
// the variable, if any.
DMTensor with_subsystems(const std::string& name, DMTensor v, const SubsystemAssignment& subsystems) {
    auto it = subsystems.find(name);
    if (it == subsystems.end()) return v;
    if (it->second.size() != v.factors().size())
        throw Error(Errc::FactorMismatch,
                    "subsystem assignment for " + name + " lists " + std::to_string(it->second.size()) +
                        " ids for " + std::to_string(v.factors().size()) + " factors");
    std::vector<SpaceFactor> factors = v.factors();
    for (size_t i = 0; i < factors.size(); ++i) factors[i].subsystem = it->second[i];
    return DMTensor(std::move(factors), v.components());
}

// Contracts the argument's whole factor block against the function block
// facing it.  The blocks sit adjacent after juxtaposition and mirror each
// other, so the facing pair is always at the seam; each contraction moves the
// seam one factor inward.
DMTensor apply_blocks(const DMTensor& fn, const DMTensor& arg, bool fn_on_left) {
    size_t pairs = arg.factors().size();
    if (fn.factors().size() < pairs)
        throw Error(Errc::FactorMismatch,
                    "function value has " + std::to_string(fn.factors().size()) +
                        " factors but its argument needs " + std::to_string(pairs));
    DMTensor join = fn_on_left ? dm_tensor(fn, arg) : dm_tensor(arg, fn);
    size_t seam = fn_on_left ? fn.factors().size() : arg.factors().size();
    for (size_t i = 0; i < pairs; ++i) {
        join = contract_factor_pair(join, seam - 1, seam);
        seam -= 1;
    }
    return join;
}

DMTensor eval(const DirTerm& t, Assignment& env, const Lexicon& lex,
              const SubsystemAssignment& subsystems) {
    switch (t.kind()) {
    case DirTerm::Kind::Var: {
        const std::string& name = t.var_name();
        auto bound = env.find(name);
        if (bound != env.end()) return with_subsystems(name, bound->second, subsystems);
        auto word = lex.entries.find(name);
        if (word == lex.entries.end())
            throw Error(Errc::MissingInterpretation, "no value for " + name);
        return with_subsystems(name, word->second.value, subsystems);
    }
    case DirTerm::Kind::AppOver: {
        DMTensor f = eval(t.fn(), env, lex, subsystems);
        DMTensor a = eval(t.arg(), env, lex, subsystems);
        return apply_blocks(f, a, true);
    }
    case DirTerm::Kind::AppUnder: {
        DMTensor a = eval(t.arg(), env, lex, subsystems);
        DMTensor f = eval(t.fn(), env, lex, subsystems);
        return apply_blocks(f, a, false);
    }
    case DirTerm::Kind::LamR:
    case DirTerm::Kind::LamL: {
        if (!t.annotation())
            throw Error(Errc::IllTyped, "binder " + t.param() + " needs a type annotation");
        const bool bound_right = t.kind() == DirTerm::Kind::LamR;
        std::vector<SpaceFactor> block = interpret_type(*t.annotation(), lex.dims);
        std::vector<SpaceFactor> mate_block = dual_space(block);

        size_t total = 1;
        for (const auto& f : block) total *= static_cast<size_t>(f.dim) * f.dim;

        std::optional<DMTensor> shadowed;
        auto prev = env.find(t.param());
        if (prev != env.end()) {
            shadowed = prev->second;
            env.erase(prev);
        }

        std::vector<SpaceFactor> shape;
        std::vector<double> sum;
        std::vector<std::pair<int, int>> pairs(block.size());
        std::vector<std::pair<int, int>> mate_pairs(block.size());
        for (size_t o = 0; o < total; ++o) {
            size_t rem = o;
            for (size_t k = block.size(); k-- > 0;) {
                int n = block[k].dim;
                size_t p = rem % (static_cast<size_t>(n) * n);
                rem /= static_cast<size_t>(n) * n;
                pairs[k] = {static_cast<int>(p) / n, static_cast<int>(p) % n};
            }
            // The bound side carries the dual-space element pairing with this
            // basis element: reversed factor order, each index pair swapped.
            for (size_t k = 0; k < block.size(); ++k) {
                auto [r, c] = pairs[block.size() - 1 - k];
                mate_pairs[k] = {c, r};
            }
            DMTensor hyp(block);
            hyp.set(pairs, 1.0);
            env.emplace(t.param(), std::move(hyp));
            DMTensor body = eval(t.body(), env, lex, subsystems);
            env.erase(t.param());

            DMTensor mate(mate_block);
            mate.set(mate_pairs, 1.0);
            DMTensor summand = bound_right ? dm_tensor(body, mate) : dm_tensor(mate, body);
            if (sum.empty()) {
                shape = summand.factors();
                sum = summand.components();
            } else {
                if (shape != summand.factors())
                    throw Error(Errc::ShapeMismatch,
                                "abstraction body changes shape across basis elements");
                for (size_t i = 0; i < sum.size(); ++i) sum[i] += summand.components()[i];
            }
        }

        if (shadowed) env.emplace(t.param(), std::move(*shadowed));
        return DMTensor(std::move(shape), std::move(sum));
    }
    }
    throw Error(Errc::IllTyped, "unreachable term kind");
}

} // namespace

std::string space_label(const std::string& atom) {
    if (atom == "np" || atom == "n") return "N";
    if (atom == "s") return "S";
    std::string label = atom;
    std::transform(label.begin(), label.end(), label.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return label;
}

std::vector<SpaceFactor> dual_space(std::vector<SpaceFactor> factors) {
    std::reverse(factors.begin(), factors.end());
    for (auto& f : factors) {
        f.row = flip(f.row);
        f.col = flip(f.col);
    }
    return factors;
}

std::vector<SpaceFactor> interpret_type(const SynType& t, const std::map<std::string, int>& dims) {
    if (t.is_atom()) {
        std::string label = space_label(t.name());
        auto it = dims.find(t.name());
        if (it == dims.end()) it = dims.find(label);
        if (it == dims.end())
            throw Error(Errc::UnknownAtom, "no dimension for atom " + t.name());
        return {standard_factor(label, 0, it->second)};
    }
    std::vector<SpaceFactor> result = interpret_type(t.result(), dims);
    std::vector<SpaceFactor> argument = dual_space(interpret_type(t.argument(), dims));
    if (t.kind() == SynType::Kind::Over) {
        result.insert(result.end(), argument.begin(), argument.end());
        return result;
    }
    argument.insert(argument.end(), result.begin(), result.end());
    return argument;
}

int Lexicon::atom_dim(const std::string& atom) const {
    auto it = dims.find(atom);
    if (it == dims.end()) it = dims.find(space_label(atom));
    if (it == dims.end())
        throw Error(Errc::UnknownAtom, "no dimension for atom " + atom);
    return it->second;
}

Metric Lexicon::space_metric(const std::string& label) const {
    auto it = metrics.find(label);
    if (it != metrics.end()) return it->second;
    auto d = dims.find(label);
    if (d == dims.end())
        for (const auto& [key, dim] : dims)
            if (space_label(key) == label) return Metric::identity(dim);
    if (d == dims.end())
        throw Error(Errc::UnknownAtom, "no dimension for space " + label);
    return Metric::identity(d->second);
}

void check_lexicon_entry(const std::string& word, const LexiconEntry& entry,
                         const std::map<std::string, int>& dims) {
    std::vector<SpaceFactor> want = interpret_type(entry.type, dims);
    const std::vector<SpaceFactor>& have = entry.value.factors();
    bool ok = want.size() == have.size();
    for (size_t i = 0; ok && i < want.size(); ++i)
        ok = want[i].label == have[i].label && want[i].dim == have[i].dim &&
             want[i].row == have[i].row && want[i].col == have[i].col;
    if (!ok)
        throw Error(Errc::ShapeMismatch, "value for " + word + " does not inhabit " +
                                             print_syntype(entry.type));
}

DMTensor interpret_term(const DirTerm& t, const Assignment& g, const Lexicon& lex,
                        const SubsystemAssignment& subsystems) {
    Assignment env = g;
    return eval(t, env, lex, subsystems);
}

DMTensor interpret_derivation(const Derivation& d, const Lexicon& lex,
                              const std::vector<std::string>& words,
                              const SubsystemAssignment& subsystems) {
    validate(d);
    DirTerm t = extract_term(d);
    std::vector<std::string> names = word_var_names(words.size());
    Assignment g;
    for (size_t i = 0; i < words.size(); ++i) {
        auto it = lex.entries.find(words[i]);
        if (it == lex.entries.end())
            throw Error(Errc::MissingInterpretation, "no lexicon value for " + words[i]);
        check_lexicon_entry(words[i], it->second, lex.dims);
        g.emplace(names[i], it->second.value);
    }
    return interpret_term(t, g, lex, subsystems);
}

} // namespace lambekdm
