#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lambekdm/ambiguity.hpp"
#include "lambekdm/density.hpp"
#include "lambekdm/errors.hpp"
#include "lambekdm/interpret.hpp"
#include "lambekdm/prove.hpp"
#include "lambekdm/term.hpp"

using namespace lambekdm;

namespace {

DMTensor random_dm(std::mt19937& rng, std::vector<SpaceFactor> factors) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DMTensor shape(std::move(factors));
    std::vector<double> comps(shape.size());
    for (double& x : comps) x = u(rng);
    return DMTensor(shape.factors(), std::move(comps));
}

bool close(const DMTensor& a, const DMTensor& b, double tol) {
    if (!a.same_factors(b)) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.components()[i] - b.components()[i]) > tol) return false;
    return true;
}

Lexicon three_word_lexicon(std::mt19937& rng) {
    SpaceFactor nf = standard_factor("N", 0, 2);
    SpaceFactor nd = dual_factor("N", 0, 2);
    Lexicon lex;
    lex.dims = {{"N", 2}};
    lex.entries.emplace("tall", LexiconEntry{parse_syntype("n/n"), random_dm(rng, {nf, nd})});
    lex.entries.emplace("person", LexiconEntry{parse_syntype("n"), random_dm(rng, {nf})});
    lex.entries.emplace("from_Spain", LexiconEntry{parse_syntype("n\\n"), random_dm(rng, {nd, nf})});
    return lex;
}

Lexicon four_word_lexicon(std::mt19937& rng) {
    SpaceFactor nf = standard_factor("N", 0, 2);
    SpaceFactor nd = dual_factor("N", 0, 2);
    Lexicon lex;
    lex.dims = {{"N", 2}};
    lex.entries.emplace("tall", LexiconEntry{parse_syntype("n/n"), random_dm(rng, {nf, nd})});
    lex.entries.emplace("person", LexiconEntry{parse_syntype("n"), random_dm(rng, {nf})});
    lex.entries.emplace("from", LexiconEntry{parse_syntype("(n\\n)/np"), random_dm(rng, {nd, nf, nd})});
    lex.entries.emplace("Spain", LexiconEntry{parse_syntype("np"), random_dm(rng, {nf})});
    return lex;
}

} // namespace

TEST_SUITE("ambiguity") {

TEST_CASE("surface-order scanning reproduces the worked subsystem tables") {
    std::mt19937 rng(7301);
    Lexicon lex = three_word_lexicon(rng);
    std::vector<std::string> words{"tall", "person", "from_Spain"};

    auto readings = enumerate_readings(words, lex, parse_syntype("n"));
    REQUIRE(readings.size() == 2);
    CHECK(print_term(readings[0].term) == "((x < y) > w)");
    CHECK(print_term(readings[1].term) == "(x < (y > w))");

    SubsystemAssignment first{{"x", {1, 2}}, {"y", {2}}, {"w", {1, 3}}};
    SubsystemAssignment second{{"x", {1, 2}}, {"y", {3}}, {"w", {3, 2}}};
    CHECK(readings[0].subsystems == first);
    CHECK(readings[1].subsystems == second);

    // the two results live on different subsystems of the same space
    CHECK(readings[0].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 3, 2)});
    CHECK(readings[1].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});

    // values equal the derivations interpreted under the same assignment
    CHECK(readings[0].value.components() ==
          interpret_derivation(readings[0].derivation, lex, words, first).components());
    CHECK(readings[1].value.components() ==
          interpret_derivation(readings[1].derivation, lex, words, second).components());
}

TEST_CASE("the four-word phrase gets a fourth linked subsystem") {
    std::mt19937 rng(7302);
    Lexicon lex = four_word_lexicon(rng);
    std::vector<std::string> words{"tall", "person", "from", "Spain"};

    auto readings = enumerate_readings(words, lex, parse_syntype("n"));
    REQUIRE(readings.size() == 2);
    CHECK(print_term(readings[0].term) == "((x < y) > (w < z))");
    CHECK(print_term(readings[1].term) == "(x < (y > (w < z)))");

    SubsystemAssignment first{{"x", {1, 2}}, {"y", {2}}, {"w", {1, 3, 4}}, {"z", {4}}};
    SubsystemAssignment second{{"x", {1, 2}}, {"y", {3}}, {"w", {3, 2, 4}}, {"z", {4}}};
    CHECK(readings[0].subsystems == first);
    CHECK(readings[1].subsystems == second);
    CHECK(readings[0].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 3, 2)});
    CHECK(readings[1].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});
}

TEST_CASE("unambiguous inputs give one reading") {
    std::mt19937 rng(7303);
    Lexicon lex = three_word_lexicon(rng);

    auto single = enumerate_readings({"person"}, lex, parse_syntype("n"));
    REQUIRE(single.size() == 1);
    CHECK(print_term(single[0].term) == "x");
    CHECK(single[0].subsystems == SubsystemAssignment{{"x", {1}}});
    CHECK(single[0].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});
    CHECK(single[0].value.components() == lex.entries.at("person").value.components());

    auto pair = enumerate_readings({"tall", "person"}, lex, parse_syntype("n"));
    REQUIRE(pair.size() == 1);
    CHECK(pair[0].subsystems == SubsystemAssignment{{"x", {1, 2}}, {"y", {2}}});
    CHECK(pair[0].value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});

    // a sentence over two spaces: subject links the verb's first leg
    SpaceFactor sf = standard_factor("S", 0, 3);
    Lexicon sent;
    sent.dims = {{"N", 2}, {"S", 3}};
    sent.entries.emplace("alice",
                         LexiconEntry{parse_syntype("np"), random_dm(rng, {standard_factor("N", 0, 2)})});
    sent.entries.emplace("runs", LexiconEntry{parse_syntype("np\\s"),
                                              random_dm(rng, {dual_factor("N", 0, 2), sf})});
    auto sentence = enumerate_readings({"alice", "runs"}, sent, parse_syntype("s"));
    REQUIRE(sentence.size() == 1);
    CHECK(sentence[0].subsystems == SubsystemAssignment{{"x", {1}}, {"y", {1, 2}}});
    CHECK(sentence[0].value.factors() == std::vector<SpaceFactor>{standard_factor("S", 2, 3)});

    try {
        enumerate_readings({"tall", "ghost"}, lex, parse_syntype("n"));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::UnknownWord);
    }
}

TEST_CASE("hypothetical derivations evaluate untagged and refuse assignment") {
    std::mt19937 rng(7304);
    Lexicon lex;
    lex.dims = {{"N", 2}, {"S", 3}};
    lex.entries.emplace("alice",
                        LexiconEntry{parse_syntype("np"), random_dm(rng, {standard_factor("N", 0, 2)})});

    SynType raised = parse_syntype("s/(np\\s)");
    auto readings = enumerate_readings({"alice"}, lex, raised);
    REQUIRE(readings.size() == 1);
    CHECK(readings[0].term.contains_lambda());
    CHECK(readings[0].subsystems.empty());
    CHECK(readings[0].value.factors() == interpret_type(raised, lex.dims));

    try {
        assign_subsystems(readings[0].derivation, lex);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDerivation);
    }

    // an untagged reading cannot be routed either
    try {
        permutation_route(readings[0], readings[0].derivation, lex, {"alice"});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDerivation);
    }
}

TEST_CASE("the worked route relinks standard legs then reroutes dual legs and traces") {
    std::mt19937 rng(7305);
    Lexicon lex = three_word_lexicon(rng);
    std::vector<std::string> words{"tall", "person", "from_Spain"};
    auto readings = enumerate_readings(words, lex, parse_syntype("n"));
    REQUIRE(readings.size() == 2);

    RouteResult route = permutation_route(readings[0], readings[1].derivation, lex, words);
    REQUIRE(route.steps.size() == 3);
    CHECK(route.steps[0] == RouteStep{upper_perm("N", 2, 3), false});
    CHECK(route.steps[1] == RouteStep{lower_perm("N", 1, 3), false});
    CHECK(route.steps[2] == RouteStep{lower_perm("N", 1, 3), true});
    CHECK(route.steps[0].op.print() == "P^23");
    CHECK(route.steps[1].op.print() == "P_13");
    CHECK(route.steps[2].op.print() == "P_13");

    // the routed value is the other reading, on its own subsystem
    CHECK(close(route.value, readings[1].value, 1e-12));
    CHECK(route.value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});
    CHECK(route.value.factors() != readings[0].value.factors());

    // the same moves read back from the other side restore the first plan
    RouteResult back = permutation_route(readings[1], readings[0].derivation, lex, words);
    CHECK(back.steps == route.steps);
    CHECK(close(back.value, readings[0].value, 1e-12));

    // routing a reading to itself needs no moves
    RouteResult stay = permutation_route(readings[0], readings[0].derivation, lex, words);
    CHECK(stay.steps.empty());
    CHECK(close(stay.value, readings[0].value, 1e-12));
}

TEST_CASE("the four-word route has the same shape") {
    std::mt19937 rng(7306);
    Lexicon lex = four_word_lexicon(rng);
    std::vector<std::string> words{"tall", "person", "from", "Spain"};
    auto readings = enumerate_readings(words, lex, parse_syntype("n"));
    REQUIRE(readings.size() == 2);

    RouteResult route = permutation_route(readings[0], readings[1].derivation, lex, words);
    REQUIRE(route.steps.size() == 3);
    CHECK(route.steps[0] == RouteStep{upper_perm("N", 2, 3), false});
    CHECK(route.steps[1] == RouteStep{lower_perm("N", 1, 3), false});
    CHECK(route.steps[2] == RouteStep{lower_perm("N", 1, 3), true});
    CHECK(close(route.value, readings[1].value, 1e-12));
    CHECK(route.value.factors() == std::vector<SpaceFactor>{standard_factor("N", 1, 2)});
}

TEST_CASE("routes agree with direct interpretation across random lexicons") {
    for (int trial = 0; trial < 10; ++trial) {
        std::mt19937 rng(7310 + trial);
        Lexicon lex = three_word_lexicon(rng);
        std::vector<std::string> words{"tall", "person", "from_Spain"};
        auto readings = enumerate_readings(words, lex, parse_syntype("n"));
        REQUIRE(readings.size() == 2);
        for (size_t i = 0; i < 2; ++i) {
            RouteResult route =
                permutation_route(readings[i], readings[1 - i].derivation, lex, words);
            CHECK(close(route.value, readings[1 - i].value, 1e-12));
            CHECK(route.value.factors() != readings[i].value.factors());
        }
    }
}

TEST_CASE("a five-word modifier stack still routes in three moves") {
    std::mt19937 rng(7320);
    SpaceFactor nf = standard_factor("N", 0, 2);
    SpaceFactor nd = dual_factor("N", 0, 2);
    Lexicon lex;
    lex.dims = {{"N", 2}};
    lex.entries.emplace("very",
                        LexiconEntry{parse_syntype("(n/n)/(n/n)"), random_dm(rng, {nf, nd, nf, nd})});
    lex.entries.emplace("tall", LexiconEntry{parse_syntype("n/n"), random_dm(rng, {nf, nd})});
    lex.entries.emplace("person", LexiconEntry{parse_syntype("n"), random_dm(rng, {nf})});
    lex.entries.emplace("from_Spain", LexiconEntry{parse_syntype("n\\n"), random_dm(rng, {nd, nf})});

    std::vector<std::string> words{"very", "tall", "person", "from_Spain"};

    // the default hypothesis budget admits eta-expanded variants of the two
    // groupings; those carry binders, so they evaluate untagged
    auto all = enumerate_readings(words, lex, parse_syntype("n"));
    CHECK(all.size() == 4);
    for (const Reading& r : all)
        if (r.term.contains_lambda()) {
            CHECK(r.subsystems.empty());
            CHECK(r.value.factors() == std::vector<SpaceFactor>{standard_factor("N", 0, 2)});
        }

    ParseOptions eliminations_only;
    eliminations_only.intro_budget = 0;
    auto readings = enumerate_readings(words, lex, parse_syntype("n"), eliminations_only);
    REQUIRE(readings.size() == 2);

    RouteResult route = permutation_route(readings[0], readings[1].derivation, lex, words);
    CHECK(route.steps.size() == 3);
    int uppers = 0, lowers = 0;
    for (const RouteStep& s : route.steps)
        (s.op.kind == PermKind::Upper ? uppers : lowers) += 1;
    CHECK(uppers == 1);
    CHECK(lowers == 2);
    CHECK(close(route.value, readings[1].value, 1e-12));

    RouteResult back = permutation_route(readings[1], readings[0].derivation, lex, words);
    CHECK(back.steps == route.steps);
    CHECK(close(back.value, readings[0].value, 1e-12));
}

TEST_CASE("route search respects its bound and validates its inputs") {
    std::mt19937 rng(7330);
    Lexicon lex = three_word_lexicon(rng);
    std::vector<std::string> words{"tall", "person", "from_Spain"};
    auto readings = enumerate_readings(words, lex, parse_syntype("n"));
    REQUIRE(readings.size() == 2);

    try {
        permutation_route(readings[0], readings[1].derivation, lex, words, 2);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoRouteFound);
    }
    CHECK(permutation_route(readings[0], readings[1].derivation, lex, words, 3).steps.size() == 3);

    // ill-formed subsystem data is rejected before any search
    Reading broken = readings[0];
    broken.subsystems = SubsystemAssignment{{"x", {1, 2}}, {"y", {1}}, {"w", {1, 3}}};
    try {
        permutation_route(broken, readings[1].derivation, lex, words);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDerivation);
    }
    Reading narrow = readings[0];
    narrow.subsystems = SubsystemAssignment{{"x", {1}}, {"y", {2}}, {"w", {1, 3}}};
    try {
        permutation_route(narrow, readings[1].derivation, lex, words);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDerivation);
    }

    // a target over a different phrase is refused up front
    auto pair = enumerate_readings({"tall", "person"}, lex, parse_syntype("n"));
    REQUIRE(pair.size() == 1);
    try {
        permutation_route(readings[0], pair[0].derivation, lex, words);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidDerivation);
    }
}

}
