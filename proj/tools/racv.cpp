// racv — reachability probabilities for rectangular automata with random
// clocks. Subcommands: validate, prob, tree, oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "racv/model.hpp"
#include "racv/oracle.hpp"
#include "racv/pipeline.hpp"
#include "racv/reach.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;

struct QueryFlags {
    std::string model_path;
    std::vector<std::string> goals;
    double tmax = 0.0;
    std::size_t jmax = 0;
    std::string mode = "min";
    std::size_t samples = 100000;
    std::uint64_t seed = 12345;
    std::string format = "json";
    std::size_t node_cap = 200000;
};

void add_query_flags(CLI::App* cmd, QueryFlags& q, bool with_sampling) {
    cmd->add_option("--model", q.model_path, "model file")->required();
    cmd->add_option("--goal", q.goals, "goal location (repeatable)")->required();
    cmd->add_option("--tmax", q.tmax, "time bound")->required();
    cmd->add_option("--jmax", q.jmax, "jump bound")->required();
    cmd->add_option("--mode", q.mode, "min | max | both")
        ->check(CLI::IsMember({"min", "max", "both"}));
    if (with_sampling) {
        cmd->add_option("--samples", q.samples, "Monte Carlo sample count");
        cmd->add_option("--seed", q.seed, "sampling seed");
    }
    cmd->add_option("--node-cap", q.node_cap, "abort when a tree exceeds this size");
}

racv::QuerySpec make_query(const racv::RacModel& model, const QueryFlags& q) {
    racv::QuerySpec spec;
    for (const auto& g : q.goals) {
        const auto idx = model.location_index(g);
        if (!idx) throw racv::ParseError("unknown goal location '" + g + "'");
        spec.goal_locations.push_back(*idx);
    }
    spec.time_bound = q.tmax;
    spec.jump_bound = q.jmax;
    spec.mode = q.mode == "min"   ? racv::QueryMode::Min
                : q.mode == "max" ? racv::QueryMode::Max
                                  : racv::QueryMode::Both;
    spec.samples = q.samples;
    spec.seed = q.seed;
    spec.node_cap = q.node_cap;
    if (spec.goal_locations.empty() || spec.time_bound <= 0)
        throw racv::ParseError("query needs a goal set and a positive time bound");
    return spec;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"reachability probabilities for rectangular automata with random clocks"};
    app.require_subcommand(1);

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "check model well-formedness");
    std::string validate_path;
    validate_cmd->add_option("--model", validate_path, "model file")->required();

    // prob
    auto* prob_cmd = app.add_subcommand("prob", "compute reachability probabilities");
    QueryFlags prob_flags;
    add_query_flags(prob_cmd, prob_flags, true);
    prob_cmd->add_option("--format", prob_flags.format, "json | text")
        ->check(CLI::IsMember({"json", "text"}));

    // tree
    auto* tree_cmd = app.add_subcommand("tree", "export a pipeline tree stage as DOT");
    QueryFlags tree_flags;
    add_query_flags(tree_cmd, tree_flags, false);
    std::string stage = "raw";
    tree_cmd->add_option("--stage", stage, "raw | initial | full")
        ->check(CLI::IsMember({"raw", "initial", "full"}));

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "discretized reference estimate");
    QueryFlags oracle_flags;
    add_query_flags(oracle_cmd, oracle_flags, false);
    racv::DiscretizationSpec disc;
    oracle_cmd->add_option("--time-grid", disc.time_steps_per_unit, "time steps per unit");
    oracle_cmd->add_option("--rate-samples", disc.rate_samples_per_dim,
                           "interior rate samples per dimension");
    oracle_cmd->add_option("--prophecy-grid", disc.prophecy_grid_per_dim,
                           "prophecy grid cells per dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate_cmd) {
            const racv::RacModel model = racv::load_model(validate_path);
            const racv::ValidationReport report = racv::validate(model);
            for (const auto& f : report.findings)
                std::cout << "finding [" << f.code << "] " << f.message << "\n";
            for (const auto& n : report.notes) std::cout << "note: " << n << "\n";
            std::cout << (report.clean() ? "valid" : "invalid") << "\n";
            return report.clean() ? kExitOk : kExitVerification;
        }
        if (*prob_cmd) {
            const racv::RacModel model = racv::load_model(prob_flags.model_path);
            const racv::QuerySpec query = make_query(model, prob_flags);
            const racv::QueryOutcome outcome = racv::run_query(model, query);
            if (prob_flags.format == "json")
                std::cout << racv::result_document(model, prob_flags.model_path, query,
                                                   prob_flags.goals, outcome)
                          << "\n";
            else
                std::cout << racv::result_text(model, query, prob_flags.goals, outcome);
            return kExitOk;
        }
        if (*tree_cmd) {
            const racv::RacModel model = racv::load_model(tree_flags.model_path);
            const racv::QuerySpec query = make_query(model, tree_flags);
            const racv::TreeStage st = stage == "raw"       ? racv::TreeStage::Raw
                                       : stage == "initial" ? racv::TreeStage::Initial
                                                            : racv::TreeStage::Full;
            std::cout << racv::tree_dot(model, query, st);
            return kExitOk;
        }
        if (*oracle_cmd) {
            const racv::RacModel model = racv::load_model(oracle_flags.model_path);
            const racv::QuerySpec query = make_query(model, oracle_flags);
            if (oracle_flags.mode == "both")
                throw racv::ParseError("oracle takes --mode min or --mode max");
            const auto est = racv::oracle_probability(
                model, query,
                oracle_flags.mode == "min" ? racv::QueryMode::Min : racv::QueryMode::Max,
                disc);
            std::cout << "{\"value\": " << est.value << ", \"grid_error\": "
                      << est.grid_error << ", \"cells\": " << est.cells << "}\n";
            return kExitOk;
        }
    } catch (const racv::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
