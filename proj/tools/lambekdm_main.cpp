#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lambekdm/cli.hpp"

namespace {

using namespace lambekdm;

int finish(const CmdResult& r) {
    if (!r.out.empty()) std::cout << r.out << "\n";
    if (!r.diagnostic.empty()) std::cerr << r.diagnostic << "\n";
    return r.exit_code;
}

void add_parse_flags(CLI::App* cmd, std::string& mode, int& budget) {
    cmd->add_option("--mode", mode, "Calculus flavor: nl respects bracketing, l is associative")
        ->check(CLI::IsMember({"nl", "l"}))
        ->capture_default_str();
    cmd->add_option("--intro-budget", budget,
                    "How many hypotheses introduction rules may bind (0 for eliminations only)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
}

ParseCmdOptions make_opts(const std::string& mode, int budget) {
    ParseCmdOptions o;
    o.mode = mode == "l" ? Mode::L : Mode::NL;
    o.intro_budget = budget;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lambek-calculus parsing with density-matrix semantics"};
    app.require_subcommand(1);

    std::string lexicon, phrase, goal;
    std::string mode = "nl";
    int budget = 2;

    auto* parse_cmd = app.add_subcommand("parse", "Enumerate derivations of a phrase");
    parse_cmd->add_option("lexicon", lexicon, "Lexicon JSON file")->required();
    parse_cmd->add_option("phrase", phrase, "Space-separated words, quoted")->required();
    parse_cmd->add_option("goal", goal, "Goal type, e.g. n or np\\s")->required();
    add_parse_flags(parse_cmd, mode, budget);

    std::string reading = "all", dot_path;
    auto* interpret_cmd = app.add_subcommand("interpret", "Evaluate the readings of a phrase");
    interpret_cmd->add_option("lexicon", lexicon, "Lexicon JSON file")->required();
    interpret_cmd->add_option("phrase", phrase, "Space-separated words, quoted")->required();
    interpret_cmd->add_option("goal", goal, "Goal type")->required();
    interpret_cmd->add_option("--reading", reading, "Reading index, or all")
        ->capture_default_str();
    interpret_cmd->add_option("--emit-dot", dot_path,
                              "Write a graphviz view of the selected readings here");
    add_parse_flags(interpret_cmd, mode, budget);

    std::string word_a, word_b, metric_atom;
    auto* sim_cmd = app.add_subcommand("similarity", "Metric cosine of two vector entries");
    sim_cmd->add_option("lexicon", lexicon, "Lexicon JSON file")->required();
    sim_cmd->add_option("word-a", word_a, "First word")->required();
    sim_cmd->add_option("word-b", word_b, "Second word")->required();
    sim_cmd->add_option("--metric", metric_atom, "Atom naming the space whose metric to use");

    std::string judgments, atom, out_path;
    double reg = 1e-3;
    auto* fit_cmd = app.add_subcommand("fit-metric", "Fit a space's metric to judgments");
    fit_cmd->add_option("lexicon", lexicon, "Lexicon JSON file")->required();
    fit_cmd->add_option("judgments", judgments, "Judgment JSON file")->required();
    fit_cmd->add_option("--atom", atom, "Atom naming the space to fit")->required();
    fit_cmd->add_option("--reg", reg, "Pull toward the identity metric")
        ->capture_default_str();
    fit_cmd->add_option("--out", out_path, "Where to write the fitted metric")->required();

    int from = 0, to = 0;
    auto* route_cmd = app.add_subcommand("route", "Permutation route between two readings");
    route_cmd->add_option("lexicon", lexicon, "Lexicon JSON file")->required();
    route_cmd->add_option("phrase", phrase, "Space-separated words, quoted")->required();
    route_cmd->add_option("goal", goal, "Goal type")->required();
    route_cmd->add_option("--from", from, "Source reading index")->required();
    route_cmd->add_option("--to", to, "Target reading index")->required();
    add_parse_flags(route_cmd, mode, budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (parse_cmd->parsed())
        return finish(cmd_parse(lexicon, phrase, goal, make_opts(mode, budget)));
    if (interpret_cmd->parsed())
        return finish(cmd_interpret(lexicon, phrase, goal, reading, dot_path,
                                    make_opts(mode, budget)));
    if (sim_cmd->parsed()) return finish(cmd_similarity(lexicon, word_a, word_b, metric_atom));
    if (fit_cmd->parsed()) return finish(cmd_fit_metric(lexicon, judgments, atom, reg, out_path));
    if (route_cmd->parsed())
        return finish(cmd_route(lexicon, phrase, goal, from, to, make_opts(mode, budget)));
    return 1;
}
