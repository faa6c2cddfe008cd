#include "lambekdm/ambiguity.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "lambekdm/errors.hpp"

namespace lambekdm {

namespace {

// Label and leg kind of every factor of every word, in surface order.
struct FactorShape {
    std::string label;
    bool dual = false;
};

using WordShapes = std::vector<std::vector<FactorShape>>;

// Walks an eliminations-only term collecting, for each elimination, which two
// word factors it contracts.  Factors are numbered globally in surface order;
// partner[g] records the factor g contracts with, or npos.
struct LinkWalker {
    const std::map<std::string, size_t>& word_of;
    const std::vector<size_t>& offsets;
    const std::vector<size_t>& counts;
    std::vector<size_t>& partner;

    static constexpr size_t npos = static_cast<size_t>(-1);

    std::vector<size_t> resolve(const DirTerm& t) {
        switch (t.kind()) {
        case DirTerm::Kind::Var: {
            auto it = word_of.find(t.var_name());
            if (it == word_of.end())
                throw Error(Errc::InvalidDerivation, "leaf variable " + t.var_name() +
                                                         " is not an antecedent word");
            std::vector<size_t> refs(counts[it->second]);
            for (size_t i = 0; i < refs.size(); ++i) refs[i] = offsets[it->second] + i;
            return refs;
        }
        case DirTerm::Kind::AppOver: {
            std::vector<size_t> f = resolve(t.fn());
            std::vector<size_t> a = resolve(t.arg());
            if (f.size() < a.size())
                throw Error(Errc::InvalidDerivation, "function block narrower than its argument");
            for (size_t i = 0; i < a.size(); ++i) link(f[f.size() - 1 - i], a[i]);
            f.resize(f.size() - a.size());
            return f;
        }
        case DirTerm::Kind::AppUnder: {
            std::vector<size_t> a = resolve(t.arg());
            std::vector<size_t> f = resolve(t.fn());
            if (f.size() < a.size())
                throw Error(Errc::InvalidDerivation, "function block narrower than its argument");
            for (size_t i = 0; i < a.size(); ++i) link(a[a.size() - 1 - i], f[i]);
            f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(a.size()));
            return f;
        }
        default:
            throw Error(Errc::InvalidDerivation,
                        "subsystem assignment covers eliminations-only derivations");
        }
    }

    void link(size_t g, size_t h) {
        partner[g] = h;
        partner[h] = g;
    }
};

// A contraction plan: the ids tagged onto every word factor plus the pending
// trace pairs.  Equal plans evaluate identically, so plan equality is the
// route search's goal test.
struct PlanState {
    std::vector<std::vector<int>> ids;
    std::vector<std::pair<std::string, int>> traces;

    bool operator==(const PlanState&) const = default;

    std::string key() const {
        std::string k;
        for (const auto& w : ids) {
            for (int id : w) k += std::to_string(id) + ",";
            k += ";";
        }
        k += "|";
        for (const auto& [label, id] : traces) k += label + std::to_string(id) + ",";
        return k;
    }
};

WordShapes shapes_for(const std::vector<std::string>& words, const Lexicon& lex) {
    WordShapes shapes;
    for (const std::string& w : words) {
        auto it = lex.entries.find(w);
        if (it == lex.entries.end()) throw Error(Errc::UnknownWord, "no type for " + w);
        std::vector<FactorShape> fs;
        for (const SpaceFactor& f : interpret_type(it->second.type, lex.dims))
            fs.push_back({f.label, f.variance() == FactorVariance::Dual});
        shapes.push_back(std::move(fs));
    }
    return shapes;
}

// Derives the trace pairs of an assignment: an id traced over is one carried
// by exactly one standard and one dual factor of its label.
PlanState plan_of(const SubsystemAssignment& subsystems, const std::vector<std::string>& names,
                  const WordShapes& shapes) {
    PlanState plan;
    std::map<std::pair<std::string, int>, std::pair<int, int>> occur;
    for (size_t w = 0; w < names.size(); ++w) {
        auto it = subsystems.find(names[w]);
        if (it == subsystems.end())
            throw Error(Errc::InvalidDerivation,
                        "reading carries no subsystem ids for " + names[w]);
        if (it->second.size() != shapes[w].size())
            throw Error(Errc::InvalidDerivation, "subsystem ids for " + names[w] +
                                                     " do not cover its factors");
        plan.ids.push_back(it->second);
        for (size_t f = 0; f < shapes[w].size(); ++f) {
            auto& c = occur[{shapes[w][f].label, it->second[f]}];
            (shapes[w][f].dual ? c.second : c.first) += 1;
        }
    }
    for (const auto& [key, c] : occur) {
        if (c.first > 1 || c.second > 1)
            throw Error(Errc::InvalidDerivation,
                        "subsystem id " + key.first + "." + std::to_string(key.second) +
                            " tagged onto two legs of the same kind");
        if (c.first == 1 && c.second == 1) plan.traces.push_back(key);
    }
    return plan;
}

PlanState apply_step(const PlanState& s, const WordShapes& shapes, const RouteStep& step) {
    PlanState out = s;
    auto swap_id = [&](int& id) {
        if (id == step.op.sub1)
            id = step.op.sub2;
        else if (id == step.op.sub2)
            id = step.op.sub1;
    };
    if (step.on_traces) {
        for (auto& [label, id] : out.traces)
            if (label == step.op.label) swap_id(id);
        std::sort(out.traces.begin(), out.traces.end());
        return out;
    }
    bool wants_dual = step.op.kind == PermKind::Lower;
    for (size_t w = 0; w < out.ids.size(); ++w)
        for (size_t f = 0; f < out.ids[w].size(); ++f)
            if (shapes[w][f].label == step.op.label && shapes[w][f].dual == wants_dual)
                swap_id(out.ids[w][f]);
    return out;
}

// Breadth-first search over permutation moves, shortest sequence first.  The
// move alphabet pairs every two ids seen in either plan, per label: upper
// moves on word standard legs, lower moves on word dual legs, lower moves on
// the trace list.  Upper moves never touch traces, so none are generated.
std::vector<RouteStep> find_route(const PlanState& start, const PlanState& goal,
                                  const WordShapes& shapes, int max_ops) {
    if (start == goal) return {};

    std::map<std::string, std::set<int>> ids_by_label;
    auto collect = [&](const PlanState& s) {
        for (size_t w = 0; w < s.ids.size(); ++w)
            for (size_t f = 0; f < s.ids[w].size(); ++f)
                ids_by_label[shapes[w][f].label].insert(s.ids[w][f]);
    };
    collect(start);
    collect(goal);

    std::vector<RouteStep> moves;
    for (const auto& [label, ids] : ids_by_label) {
        std::vector<int> v(ids.begin(), ids.end());
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t j = i + 1; j < v.size(); ++j) {
                moves.push_back({upper_perm(label, v[i], v[j]), false});
                moves.push_back({lower_perm(label, v[i], v[j]), false});
                moves.push_back({lower_perm(label, v[i], v[j]), true});
            }
    }
    // Kind-major order so the first route found relinks standard legs, then
    // dual legs, then retargets traces
    std::stable_sort(moves.begin(), moves.end(), [](const RouteStep& a, const RouteStep& b) {
        int ra = a.on_traces ? 2 : (a.op.kind == PermKind::Lower ? 1 : 0);
        int rb = b.on_traces ? 2 : (b.op.kind == PermKind::Lower ? 1 : 0);
        return ra < rb;
    });

    struct Node {
        PlanState state;
        std::vector<RouteStep> steps;
    };
    std::deque<Node> queue{{start, {}}};
    std::set<std::string> seen{start.key()};
    while (!queue.empty()) {
        Node node = std::move(queue.front());
        queue.pop_front();
        if (static_cast<int>(node.steps.size()) >= max_ops) continue;
        for (const RouteStep& mv : moves) {
            PlanState next = apply_step(node.state, shapes, mv);
            if (!seen.insert(next.key()).second) continue;
            std::vector<RouteStep> steps = node.steps;
            steps.push_back(mv);
            if (next == goal) return steps;
            queue.push_back({std::move(next), std::move(steps)});
        }
    }
    throw Error(Errc::NoRouteFound, "no permutation sequence of length at most " +
                                        std::to_string(max_ops) + " joins the two readings");
}

DMTensor tag_factors(const DMTensor& v, const std::vector<int>& ids) {
    std::vector<SpaceFactor> factors = v.factors();
    for (size_t i = 0; i < factors.size(); ++i) factors[i].subsystem = ids[i];
    return DMTensor(std::move(factors), v.components());
}

} // namespace

SubsystemAssignment assign_subsystems(const Derivation& d, const Lexicon& lex) {
    validate(d);
    DirTerm t = extract_term(d);
    if (t.contains_lambda())
        throw Error(Errc::InvalidDerivation,
                    "subsystem assignment covers eliminations-only derivations");

    std::vector<TypedVar> leaves = d.conclusion().antecedent.leaves();
    std::map<std::string, size_t> word_of;
    std::vector<size_t> counts, offsets;
    size_t total = 0;
    for (size_t i = 0; i < leaves.size(); ++i) {
        if (!word_of.emplace(leaves[i].name, i).second)
            throw Error(Errc::InvalidDerivation, "duplicate leaf variable " + leaves[i].name);
        counts.push_back(interpret_type(leaves[i].type, lex.dims).size());
        offsets.push_back(total);
        total += counts.back();
    }

    std::vector<size_t> partner(total, LinkWalker::npos);
    LinkWalker walker{word_of, offsets, counts, partner};
    walker.resolve(t);

    // hand out ids scanning factors in surface order; a factor shares its
    // contraction partner's id, everything else gets a fresh one
    std::vector<int> ids(total, 0);
    int fresh = 1;
    for (size_t g = 0; g < total; ++g) {
        if (ids[g] != 0) continue;
        ids[g] = fresh;
        if (partner[g] != LinkWalker::npos) ids[partner[g]] = fresh;
        ++fresh;
    }

    SubsystemAssignment out;
    for (size_t i = 0; i < leaves.size(); ++i) {
        std::vector<int> slice(ids.begin() + static_cast<std::ptrdiff_t>(offsets[i]),
                               ids.begin() + static_cast<std::ptrdiff_t>(offsets[i] + counts[i]));
        out.emplace(leaves[i].name, std::move(slice));
    }
    return out;
}

std::vector<Reading> enumerate_readings(const std::vector<std::string>& words, const Lexicon& lex,
                                        const SynType& goal, const ParseOptions& opts) {
    std::map<std::string, SynType> types;
    for (const std::string& w : words) {
        auto it = lex.entries.find(w);
        if (it == lex.entries.end()) throw Error(Errc::UnknownWord, "no type for " + w);
        types.emplace(w, it->second.type);
    }
    std::vector<Reading> readings;
    for (const Derivation& d : parse(types, words, goal, opts)) {
        DirTerm term = extract_term(d);
        SubsystemAssignment subsystems;
        if (!term.contains_lambda()) subsystems = assign_subsystems(d, lex);
        DMTensor value = interpret_derivation(d, lex, words, subsystems);
        readings.push_back(Reading{d, term, subsystems, std::move(value)});
    }
    return readings;
}

RouteResult permutation_route(const Reading& from, const Derivation& to, const Lexicon& lex,
                              const std::vector<std::string>& words, int max_ops) {
    if (words.empty()) throw Error(Errc::InvalidDerivation, "nothing to route");
    if (to.conclusion().antecedent.size() != words.size())
        throw Error(Errc::InvalidDerivation, "target derivation covers a different phrase");

    std::vector<std::string> names = word_var_names(words.size());
    WordShapes shapes = shapes_for(words, lex);
    PlanState start = plan_of(from.subsystems, names, shapes);
    PlanState goal = plan_of(assign_subsystems(to, lex), names, shapes);
    std::vector<RouteStep> steps = find_route(start, goal, shapes, max_ops);

    // carry the source's word interpretations through the moves
    std::vector<DMTensor> values;
    for (size_t w = 0; w < words.size(); ++w)
        values.push_back(tag_factors(lex.entries.at(words[w]).value, start.ids[w]));
    std::vector<std::pair<std::string, int>> traces = start.traces;
    for (const RouteStep& step : steps) {
        if (step.on_traces) {
            for (auto& [label, id] : traces)
                if (label == step.op.label) {
                    if (id == step.op.sub1)
                        id = step.op.sub2;
                    else if (id == step.op.sub2)
                        id = step.op.sub1;
                }
            std::sort(traces.begin(), traces.end());
        } else {
            for (DMTensor& v : values) v = apply_permutation(step.op, v);
        }
    }

    DMTensor joined = values[0];
    for (size_t w = 1; w < values.size(); ++w) joined = dm_tensor(joined, values[w]);
    for (const auto& [label, id] : traces) {
        size_t std_pos = joined.factors().size(), dual_pos = joined.factors().size();
        for (size_t i = 0; i < joined.factors().size(); ++i) {
            const SpaceFactor& f = joined.factors()[i];
            if (f.label != label || f.subsystem != id) continue;
            if (f.variance() == FactorVariance::Standard) std_pos = i;
            if (f.variance() == FactorVariance::Dual) dual_pos = i;
        }
        if (std_pos == joined.factors().size() || dual_pos == joined.factors().size())
            throw Error(Errc::FactorNotFound, "trace over " + label + "." + std::to_string(id) +
                                                  " has no matching leg pair");
        joined = contract_factor_pair(joined, std_pos, dual_pos);
    }
    return RouteResult{std::move(steps), std::move(joined)};
}

} // namespace lambekdm
