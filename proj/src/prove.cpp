#include "lambekdm/prove.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lambekdm/errors.hpp"

namespace lambekdm {

namespace {

struct Searcher {
    Mode mode;
    int budget;
    std::vector<SynType> candidates; // subformula closure of the endsequent
    std::map<std::string, std::vector<Derivation>> memo_derive, memo_spine;
    std::set<std::string> in_progress;
    int depth = 0;

    struct DepthGuard {
        Searcher& s;
        explicit DepthGuard(Searcher& sr) : s(sr) {
            if (++s.depth > 512)
                throw Error(Errc::InvalidDerivation, "proof search recursion limit exceeded");
        }
        ~DepthGuard() { --s.depth; }
    };

    static int hyp_count(const Antecedent& ant) {
        int n = 0;
        for (const auto& v : ant.leaves())
            if (v.hypothetical) ++n;
        return n;
    }

    // Hypothesis names are chosen from the antecedent alone so that equal
    // sequents extend identically (keeps the memo sound).
    static std::string fresh_hyp_name(const Antecedent& ant) {
        int mx = 0;
        for (const auto& v : ant.leaves())
            if (v.name.size() > 1 && v.name[0] == 'h') {
                int k = 0;
                bool numeric = true;
                for (size_t i = 1; i < v.name.size(); ++i) {
                    if (!std::isdigit(static_cast<unsigned char>(v.name[i]))) {
                        numeric = false;
                        break;
                    }
                    k = k * 10 + (v.name[i] - '0');
                }
                if (numeric) mx = std::max(mx, k);
            }
        return "h" + std::to_string(mx + 1);
    }

    static std::string key(const Sequent& s) {
        std::string k = s.print();
        for (const auto& v : s.antecedent.leaves())
            if (v.hypothetical) k += "!" + v.name;
        return k;
    }

    // All root splits of the antecedent: one for a bracket pair, every proper
    // cut for a list.
    std::vector<std::pair<Antecedent, Antecedent>> splits(const Antecedent& ant) const {
        std::vector<std::pair<Antecedent, Antecedent>> out;
        if (mode == Mode::NL) {
            const BracketPtr& t = ant.tree();
            if (t && !t->is_leaf())
                out.emplace_back(Antecedent::from_tree(t->left), Antecedent::from_tree(t->right));
        } else {
            const std::vector<TypedVar>& vars = ant.list();
            for (size_t k = 1; k < vars.size(); ++k) {
                std::vector<TypedVar> l(vars.begin(), vars.begin() + static_cast<long>(k));
                std::vector<TypedVar> r(vars.begin() + static_cast<long>(k), vars.end());
                out.emplace_back(Antecedent::from_list(std::move(l)),
                                 Antecedent::from_list(std::move(r)));
            }
        }
        return out;
    }

    Antecedent extend(const Antecedent& ant, const TypedVar& hyp, bool rightmost) const {
        if (mode == Mode::L) {
            std::vector<TypedVar> vars = ant.list();
            if (rightmost)
                vars.push_back(hyp);
            else
                vars.insert(vars.begin(), hyp);
            return Antecedent::from_list(std::move(vars));
        }
        BracketPtr leaf = Bracket::leaf(hyp);
        return Antecedent::from_tree(rightmost ? Bracket::node(ant.tree(), leaf)
                                               : Bracket::node(leaf, ant.tree()));
    }

    // Eliminations-only derivations whose head is an axiom leaf.
    std::vector<Derivation> spine(const Sequent& seq) {
        DepthGuard guard(*this);
        std::string k = key(seq);
        if (auto it = memo_spine.find(k); it != memo_spine.end()) return it->second;

        std::vector<Derivation> out;
        auto ls = seq.antecedent.leaves();
        if (ls.size() == 1 && ls[0].type == seq.goal)
            out.push_back(Derivation::axiom(seq));

        for (auto& [left, right] : splits(seq.antecedent)) {
            for (const SynType& a : candidates) {
                // function left: left |- goal/a, right |- a
                std::vector<Derivation> majors =
                    spine(Sequent{left, SynType::over(seq.goal, a)});
                if (!majors.empty())
                    for (const Derivation& minor : derive(Sequent{right, a}))
                        for (const Derivation& major : majors)
                            out.push_back(Derivation::elim(Rule::EOver, seq, major, minor));
                // function right: left |- a, right |- a\goal
                majors = spine(Sequent{right, SynType::under(a, seq.goal)});
                if (!majors.empty())
                    for (const Derivation& minor : derive(Sequent{left, a}))
                        for (const Derivation& major : majors)
                            out.push_back(Derivation::elim(Rule::EUnder, seq, minor, major));
            }
        }
        memo_spine[k] = out;
        return out;
    }

    std::vector<Derivation> derive(const Sequent& seq) {
        DepthGuard guard(*this);
        std::string k = key(seq);
        if (auto it = memo_derive.find(k); it != memo_derive.end()) return it->second;
        // Re-entering the same sequent on one branch would mean the measure
        // argument for termination is wrong; fail loudly rather than return
        // a partial answer.
        if (!in_progress.insert(k).second)
            throw Error(Errc::InvalidDerivation, "search revisited sequent " + seq.print());

        std::vector<Derivation> out = spine(seq);

        if (hyp_count(seq.antecedent) < budget && !seq.goal.is_atom()) {
            TypedVar hyp{fresh_hyp_name(seq.antecedent), seq.goal.argument(), true};
            if (seq.goal.kind() == SynType::Kind::Over) {
                Sequent premise{extend(seq.antecedent, hyp, true), seq.goal.result()};
                for (const Derivation& p : derive(premise))
                    out.push_back(Derivation::intro(Rule::IOver, seq, p));
            } else {
                Sequent premise{extend(seq.antecedent, hyp, false), seq.goal.result()};
                for (const Derivation& p : derive(premise))
                    out.push_back(Derivation::intro(Rule::IUnder, seq, p));
            }
        }

        in_progress.erase(k);
        memo_derive[k] = out;
        return out;
    }
};

void bracketings(const std::vector<TypedVar>& vars, size_t lo, size_t hi,
                 std::vector<BracketPtr>& out) {
    if (hi - lo == 1) {
        out.push_back(Bracket::leaf(vars[lo]));
        return;
    }
    for (size_t k = lo + 1; k < hi; ++k) {
        std::vector<BracketPtr> ls, rs;
        bracketings(vars, lo, k, ls);
        bracketings(vars, k, hi, rs);
        for (const auto& l : ls)
            for (const auto& r : rs) out.push_back(Bracket::node(l, r));
    }
}

} // namespace

std::vector<std::string> word_var_names(size_t count) {
    static const char* pool[] = {"x", "y", "w", "z", "p", "q", "r", "s"};
    std::vector<std::string> out;
    for (size_t i = 0; i < count; ++i)
        out.push_back(i < 8 ? pool[i] : "v" + std::to_string(i));
    return out;
}

std::vector<Derivation> parse(const std::map<std::string, SynType>& types,
                              const std::vector<std::string>& words, const SynType& goal,
                              const ParseOptions& opts) {
    if (words.empty()) throw Error(Errc::ParseError, "empty phrase");

    std::vector<std::string> names = word_var_names(words.size());
    std::vector<TypedVar> vars;
    for (size_t i = 0; i < words.size(); ++i) {
        auto it = types.find(words[i]);
        if (it == types.end()) throw Error(Errc::UnknownWord, words[i]);
        vars.push_back(TypedVar{names[i], it->second, false});
    }

    Searcher s;
    s.mode = opts.mode;
    s.budget = opts.intro_budget;
    std::set<SynType> cands;
    for (const auto& v : vars)
        for (const SynType& sub : subformulas(v.type)) cands.insert(sub);
    for (const SynType& sub : subformulas(goal)) cands.insert(sub);
    s.candidates.assign(cands.begin(), cands.end());

    std::vector<Derivation> found;
    if (opts.mode == Mode::L) {
        found = s.derive(Sequent{Antecedent::from_list(vars), goal});
    } else {
        std::vector<BracketPtr> trees;
        bracketings(vars, 0, vars.size(), trees);
        for (const auto& t : trees) {
            std::vector<Derivation> ds = s.derive(Sequent{Antecedent::from_tree(t), goal});
            found.insert(found.end(), ds.begin(), ds.end());
        }
    }

    // One derivation per term, ordered by the term's canonical print.
    std::map<std::string, Derivation> by_term;
    for (const Derivation& d : found)
        by_term.emplace(canonical_term_key(extract_term(d)), d);
    std::vector<Derivation> out;
    for (auto& [k, d] : by_term) out.push_back(std::move(d));
    return out;
}

} // namespace lambekdm
