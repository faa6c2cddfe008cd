#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lambekdm/ambiguity.hpp"
#include "lambekdm/density.hpp"
#include "lambekdm/errors.hpp"
#include "lambekdm/interpret.hpp"
#include "lambekdm/prove.hpp"
#include "lambekdm/syntype.hpp"
#include "lambekdm/tensor.hpp"
#include "lambekdm/term.hpp"

using namespace lambekdm;

namespace {

// ---- shared helpers ------------------------------------------------------

std::vector<double> random_array(std::mt19937& rng, size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> out(n);
    for (double& x : out) x = u(rng);
    return out;
}

Tensor random_vector(std::mt19937& rng, int dim) {
    return Tensor::vector(random_array(rng, static_cast<size_t>(dim)));
}

// a * a^T + I: symmetric and comfortably positive definite.
Metric random_spd_metric(std::mt19937& rng, int dim) {
    std::vector<double> a = random_array(rng, static_cast<size_t>(dim) * dim);
    std::vector<double> d(a.size(), 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double s = i == j ? 1.0 : 0.0;
            for (int k = 0; k < dim; ++k)
                s += a[static_cast<size_t>(i * dim + k)] * a[static_cast<size_t>(j * dim + k)];
            d[static_cast<size_t>(i * dim + j)] = s;
        }
    return Metric(dim, std::move(d));
}

double det_by_minors(int n, const std::vector<double>& a) {
    if (n == 1) return a[0];
    double s = 0.0;
    for (int c = 0; c < n; ++c) {
        std::vector<double> minor;
        minor.reserve(static_cast<size_t>((n - 1) * (n - 1)));
        for (int r = 1; r < n; ++r)
            for (int cc = 0; cc < n; ++cc)
                if (cc != c) minor.push_back(a[static_cast<size_t>(r * n + cc)]);
        s += (c % 2 == 0 ? 1.0 : -1.0) * a[static_cast<size_t>(c)] *
             det_by_minors(n - 1, minor);
    }
    return s;
}

DMTensor random_dm(std::mt19937& rng, std::vector<SpaceFactor> factors) {
    DMTensor shape(std::move(factors));
    return DMTensor(shape.factors(), random_array(rng, shape.size()));
}

bool close(const DMTensor& a, const DMTensor& b, double tol, std::ostream& why) {
    if (!a.same_factors(b)) {
        why << "factor lists differ";
        return false;
    }
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.components()[i] - b.components()[i]) > tol) {
            why << "component " << i << " differs by "
                << std::abs(a.components()[i] - b.components()[i]);
            return false;
        }
    return true;
}

// Two n modifiers around a noun, dim(N) = 2; the worked ambiguous phrase.
Lexicon modifier_lexicon(std::mt19937& rng) {
    SpaceFactor nf = standard_factor("N", 0, 2);
    SpaceFactor nd = dual_factor("N", 0, 2);
    Lexicon lex;
    lex.dims = {{"N", 2}};
    lex.entries.emplace("tall", LexiconEntry{parse_syntype("n/n"), random_dm(rng, {nf, nd})});
    lex.entries.emplace("person", LexiconEntry{parse_syntype("n"), random_dm(rng, {nf})});
    lex.entries.emplace("from_Spain",
                        LexiconEntry{parse_syntype("n\\n"), random_dm(rng, {nd, nf})});
    return lex;
}

// ---- criteria ------------------------------------------------------------

bool toy_metric_numbers(std::ostream& why) {
    Metric d(2, {2, 1, 1, 5});
    Tensor v = Tensor::vector({0, 1});
    Tensor w = Tensor::vector({1, 0});
    double expected = 1.0 / std::sqrt(10.0);

    if (inner_product(d, v, w) != 1.0) {
        why << "inner product is " << inner_product(d, v, w) << ", want exactly 1";
        return false;
    }
    if (std::abs(cosine_similarity(d, v, w) - expected) > 1e-12) {
        why << "cosine off by " << std::abs(cosine_similarity(d, v, w) - expected);
        return false;
    }

    Metric id = Metric::identity(2);
    Tensor vp = Tensor::vector({1, 1});
    Tensor wp = Tensor::vector({-1, 2});
    if (std::abs(cosine_similarity(id, vp, wp) - expected) > 1e-12) {
        why << "identity-metric cosine off by "
            << std::abs(cosine_similarity(id, vp, wp) - expected);
        return false;
    }
    return true;
}

bool basis_change_invariance(std::ostream& why) {
    std::mt19937 rng(9101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        int dim = 1 + static_cast<int>(rng() % 5);
        Metric m = random_spd_metric(rng, dim);
        Tensor v = random_vector(rng, dim);
        Tensor w = random_vector(rng, dim);

        // Near-singular frames turn the comparison into a conditioning
        // exercise, so redraw those.
        std::vector<double> lam;
        do {
            lam.assign(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
            for (double& x : lam) x = u(rng);
        } while (std::abs(det_by_minors(dim, lam)) < 0.3);
        BasisChange bc(dim, lam);

        double before = inner_product(m, v, w);
        double after =
            inner_product(transform_metric(bc, m), transform_vector(bc, v),
                          transform_vector(bc, w));
        if (std::abs(before - after) > 1e-9) {
            why << "trial " << trial << " drifts by " << std::abs(before - after);
            return false;
        }
    }
    return true;
}

bool four_word_bracketings(std::ostream& why) {
    std::map<std::string, SynType> types;
    types.emplace("tall", parse_syntype("n/n"));
    types.emplace("person", parse_syntype("n"));
    types.emplace("from", parse_syntype("(n\\n)/np"));
    types.emplace("Spain", parse_syntype("np"));
    std::vector<Derivation> ds =
        parse(types, {"tall", "person", "from", "Spain"}, SynType::atom("n"), {});

    if (ds.size() != 2) {
        why << "expected 2 derivations, got " << ds.size();
        return false;
    }
    std::vector<std::string> terms;
    for (const Derivation& d : ds) terms.push_back(print_term(extract_term(d)));
    if (terms[0] != "((x < y) > (w < z))" || terms[1] != "(x < (y > (w < z)))") {
        why << "terms are " << terms[0] << " and " << terms[1];
        return false;
    }
    return true;
}

bool reading_oracles(std::ostream& why) {
    std::mt19937 rng(9104);
    Lexicon lex = modifier_lexicon(rng);
    const DMTensor& T = lex.entries.at("tall").value;
    const DMTensor& P = lex.entries.at("person").value;
    const DMTensor& F = lex.entries.at("from_Spain").value;

    std::vector<Reading> readings =
        enumerate_readings({"tall", "person", "from_Spain"}, lex, SynType::atom("n"), {});
    if (readings.size() != 2) {
        why << "expected 2 readings, got " << readings.size();
        return false;
    }
    if (print_term(readings[0].term) != "((x < y) > w)" ||
        print_term(readings[1].term) != "(x < (y > w))") {
        why << "unexpected reading order";
        return false;
    }

    // Grouping the modifier first leaves the last word's free pair.
    DMTensor first(readings[0].value.factors());
    for (int m = 0; m < 2; ++m)
        for (int mp = 0; mp < 2; ++mp) {
            double s = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int ip = 0; ip < 2; ++ip)
                    for (int j = 0; j < 2; ++j)
                        for (int jp = 0; jp < 2; ++jp)
                            s += T.at({{i, ip}, {jp, j}}) * P.at({{j, jp}}) *
                                 F.at({{ip, i}, {m, mp}});
            first.set({{m, mp}}, s);
        }

    // Grouping the noun with the right modifier first leaves the first
    // word's free pair.
    DMTensor second(readings[1].value.factors());
    for (int i = 0; i < 2; ++i)
        for (int ip = 0; ip < 2; ++ip) {
            double s = 0.0;
            for (int j = 0; j < 2; ++j)
                for (int jp = 0; jp < 2; ++jp)
                    for (int l = 0; l < 2; ++l)
                        for (int lp = 0; lp < 2; ++lp)
                            s += T.at({{i, ip}, {jp, j}}) * P.at({{l, lp}}) *
                                 F.at({{lp, l}, {j, jp}});
            second.set({{i, ip}}, s);
        }

    if (!close(readings[0].value, first, 1e-12, why)) return false;
    if (!close(readings[1].value, second, 1e-12, why)) return false;

    int sub0 = readings[0].value.factors()[0].subsystem;
    int sub1 = readings[1].value.factors()[0].subsystem;
    if (sub0 == sub1) {
        why << "readings share result subsystem " << sub0;
        return false;
    }
    return true;
}

bool permutation_route_matches(std::ostream& why) {
    std::mt19937 rng(9105);
    Lexicon lex = modifier_lexicon(rng);
    std::vector<std::string> words = {"tall", "person", "from_Spain"};
    std::vector<Reading> readings =
        enumerate_readings(words, lex, SynType::atom("n"), {});
    if (readings.size() != 2) {
        why << "expected 2 readings, got " << readings.size();
        return false;
    }

    RouteResult route = permutation_route(readings[0], readings[1].derivation, lex, words);
    if (route.steps.size() > 4) {
        why << "route takes " << route.steps.size() << " operators";
        return false;
    }
    int upper = 0, lower = 0;
    for (const RouteStep& s : route.steps)
        (s.op.kind == PermKind::Upper ? upper : lower) += 1;
    if (upper != 1 || lower != 2) {
        why << "route uses " << upper << " upper and " << lower << " lower operators";
        return false;
    }
    return close(route.value, readings[1].value, 1e-12, why);
}

bool lifted_metric_equivalence(std::ostream& why) {
    std::mt19937 rng(9106);
    for (int trial = 0; trial < 100; ++trial) {
        BigMetric big(random_spd_metric(rng, 3));
        DMTensor t = random_dm(rng, {standard_factor("N", 1 + trial % 3, 3)});
        if (!close(big.apply_lifted(t), big.apply_base(t), 1e-12, why)) {
            why << " (trial " << trial << ")";
            return false;
        }
    }
    return true;
}

bool beta_soundness(std::ostream& why) {
    std::mt19937 rng(9107);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 2);
        SpaceFactor nf = standard_factor("N", 0, dim);
        SpaceFactor nd = dual_factor("N", 0, dim);
        Lexicon lex;
        lex.dims = {{"N", dim}};
        lex.entries.emplace("a", LexiconEntry{parse_syntype("n"), random_dm(rng, {nf})});
        lex.entries.emplace("f", LexiconEntry{parse_syntype("n/n"), random_dm(rng, {nf, nd})});
        lex.entries.emplace("g", LexiconEntry{parse_syntype("n\\n"), random_dm(rng, {nd, nf})});

        SynType n = SynType::atom("n");
        DirTerm a = DirTerm::var("a");
        DirTerm f = DirTerm::var("f");
        DirTerm g = DirTerm::var("g");
        DirTerm h = DirTerm::var("h");
        // Elimination trees, identity and modifier redexes in both binder
        // directions, and one beta-normal binder; all at six nodes or fewer.
        std::vector<DirTerm> shapes = {
            DirTerm::app_over(f, a),
            DirTerm::app_under(a, g),
            DirTerm::app_over(DirTerm::lam_r("h", n, h), a),
            DirTerm::app_under(a, DirTerm::lam_l("h", n, h)),
            DirTerm::app_over(DirTerm::lam_r("h", n, DirTerm::app_over(f, h)), a),
            DirTerm::app_under(a, DirTerm::lam_l("h", n, DirTerm::app_under(h, g))),
            DirTerm::app_over(f, DirTerm::app_over(DirTerm::lam_r("h", n, h), a)),
            DirTerm::app_under(DirTerm::app_under(a, DirTerm::lam_l("h", n, h)), g),
            DirTerm::lam_r("h", n, DirTerm::app_over(f, h)),
            DirTerm::app_over(DirTerm::lam_r("h", n, DirTerm::app_under(h, g)), a),
        };
        const DirTerm& t = shapes[rng() % shapes.size()];
        DMTensor direct = interpret_term(t, {}, lex);
        DMTensor reduced = interpret_term(beta_reduce(t), {}, lex);
        if (!close(direct, reduced, 1e-10, why)) {
            why << " (trial " << trial << ", term " << print_term(t) << ")";
            return false;
        }
    }
    return true;
}

bool dual_basis_identities(std::ostream& why) {
    std::mt19937 rng(9108);
    for (int trial = 0; trial < 100; ++trial) {
        int dim = 1 + static_cast<int>(rng() % 6);
        Metric m = random_spd_metric(rng, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int jp = 0; jp < dim; ++jp) s += m.d(i, jp) * m.dinv(jp, j);
                if (std::abs(s - (i == j ? 1.0 : 0.0)) > 1e-12) {
                    why << "trial " << trial << ": d * dinv misses delta at (" << i << ","
                        << j << ") by " << std::abs(s - (i == j ? 1.0 : 0.0));
                    return false;
                }
            }

        // Snakes: yank through the unit, and lower then raise; both must
        // return the vector unchanged.
        Tensor v = random_vector(rng, dim);
        Tensor yanked = contract(tensor_product(v, eta_r(m)), 0, 1);
        Tensor lowered_raised = raise_index(m, dual_vector(m, v), 0);
        for (int i = 0; i < dim; ++i) {
            if (std::abs(yanked.at({i}) - v.at({i})) > 1e-10) {
                why << "trial " << trial << ": unit yank bends at slot " << i;
                return false;
            }
            if (std::abs(lowered_raised.at({i}) - v.at({i})) > 1e-10) {
                why << "trial " << trial << ": lower then raise bends at slot " << i;
                return false;
            }
        }
    }
    return true;
}

bool metric_fit_recovery(std::ostream& why) {
    std::mt19937 rng(9109);
    Metric planted = random_spd_metric(rng, 4);
    std::vector<SimilarityJudgment> samples;
    for (int i = 0; i < 20; ++i) {
        Tensor v = random_vector(rng, 4);
        Tensor w = random_vector(rng, 4);
        samples.push_back({v, w, cosine_similarity(planted, v, w)});
    }
    MetricFitOptions opts;
    opts.reg = 0.0;
    MetricFitResult r = metric_fit(samples, 4, opts);
    if (r.objective > 1e-6) {
        why << "objective stalls at " << r.objective;
        return false;
    }
    return true;
}

struct Criterion {
    std::string name;
    double limit_ms; // zero means no budget
    std::function<bool(std::ostream&)> run;
};

} // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"toy metric inner product and cosine", 1.0, toy_metric_numbers},
        {"inner products survive 1000 random basis changes", 1000.0, basis_change_invariance},
        {"four-word phrase has exactly the two bracketings", 10.0, four_word_bracketings},
        {"readings match the nested-loop contraction oracles", 100.0, reading_oracles},
        {"permutation route reproduces the second reading", 100.0, permutation_route_matches},
        {"lifted metric application agrees with base conjugation", 0.0,
         lifted_metric_equivalence},
        {"beta reduction preserves interpretation", 0.0, beta_soundness},
        {"metric and inverse contract to the identity and snakes straighten", 0.0,
         dual_basis_identities},
        {"metric fitting recovers planted similarity targets", 5000.0, metric_fit_recovery},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        const Criterion& c = criteria[i];
        std::ostringstream why;
        bool ok = false;
        auto start = std::chrono::steady_clock::now();
        try {
            ok = c.run(why);
        } catch (const std::exception& e) {
            why << "threw: " << e.what();
        }
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
        if (ok && c.limit_ms > 0.0 && ms >= c.limit_ms) {
            ok = false;
            why << "took " << ms << " ms, budget " << c.limit_ms << " ms";
        }
        failures += ok ? 0 : 1;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << (i + 1) << ": " << c.name;
        if (ok)
            std::cout << " (" << ms << " ms)";
        else
            std::cout << " (" << why.str() << ")";
        std::cout << "\n";
    }

    if (failures == 0) {
        std::cout << "all " << criteria.size() << " criteria hold\n";
        return 0;
    }
    std::cout << failures << " of " << criteria.size() << " criteria fail\n";
    return 1;
}
