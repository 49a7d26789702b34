#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fscdistill/fscdistill.h"

namespace {

const char* statusName(fsc_status status) {
    switch (status) {
        case FSC_OK: return "ok";
        case FSC_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case FSC_ERR_IO: return "io";
        case FSC_ERR_PARSE: return "parse";
        case FSC_ERR_VALIDATION: return "validation";
        case FSC_ERR_INTERNAL: return "internal";
    }
    return "internal";
}

int fail(fsc_status status) {
    std::string message = fsc_last_error();
    // keep the message JSON-safe
    std::string escaped;
    for (char c : message) {
        if (c == '"' || c == '\\') escaped += '\\';
        if (c == '\n') {
            escaped += "\\n";
            continue;
        }
        escaped += c;
    }
    std::cout << "{\"error\":\"" << statusName(status) << "\",\"message\":\"" << escaped
              << "\"}\n";
    return static_cast<int>(status);
}

bool writeFile(const std::string& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << content;
    return static_cast<bool>(out);
}

bool verbose() {
    const char* level = std::getenv("FSC_DISTILL_LOG");
    return level && (std::string(level) == "debug" || std::string(level) == "info");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn small finite-state controllers for POMDP strategies"};
    app.require_subcommand(1);

    std::string modelPath, objective = "maxprob:goal", mode = "belief", heuristic = "portfolio";
    std::string tablePath, fscOut, dotOut, reportOut;
    int maxBeliefs = 10000, maxDepth = 100, cutoffStrategy = 0;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;

    CLI::App* run = app.add_subcommand("run", "Run the learning pipeline on a model");
    run->add_option("--model", modelPath, "POMDP model (JSON)")->required();
    run->add_option("--objective", objective, "Objective, e.g. maxprob:g or minreward:goal");
    run->add_option("--mode", mode, "Strategy source: table or belief");
    run->add_option("--table", tablePath, "Strategy table CSV (table mode)");
    run->add_option("--heuristic", heuristic, "Completion: base, h1, h2 or portfolio");
    run->add_option("--max-beliefs", maxBeliefs, "Belief exploration budget");
    run->add_option("--max-depth", maxDepth, "Belief exploration depth limit");
    run->add_option("--cutoff-strategy", cutoffStrategy, "Cut-off strategy id (0 = uniform)");
    run->add_option("--tolerance", tolerance, "Numeric tolerance");
    run->add_option("--seed", seed, "Seed for simulation utilities");
    run->add_option("--fsc-out", fscOut, "Write the controller as JSON");
    run->add_option("--dot-out", dotOut, "Write the controller as GraphViz DOT");
    run->add_option("--report-out", reportOut, "Write the value report as JSON");

    CLI11_PARSE(app, argc, argv);

    fsc_model* model = nullptr;
    fsc_status status = fsc_model_load_file(modelPath.c_str(), &model);
    if (status != FSC_OK) return fail(status);

    fsc_run_options options;
    fsc_run_options_init(&options);
    options.objective = objective.c_str();
    options.mode = mode.c_str();
    options.heuristic = heuristic.c_str();
    options.table_path = tablePath.empty() ? nullptr : tablePath.c_str();
    options.max_beliefs = maxBeliefs;
    options.max_depth = maxDepth;
    options.cutoff_strategy = cutoffStrategy;
    options.tolerance = tolerance;
    options.seed = seed;

    fsc_result* result = nullptr;
    status = fsc_run(model, &options, &result);
    if (status != FSC_OK) {
        fsc_model_free(model);
        return fail(status);
    }

    if (verbose())
        std::cerr << "[fscdistill] heuristic=" << fsc_result_heuristic(result)
                  << " nodes=" << fsc_result_nodes(result)
                  << " mc_states=" << fsc_result_mc_states(result) << "\n";

    std::cout << "heuristic         value    nodes  mc_states       time\n";
    std::cout << fsc_result_report_line(result) << "\n";

    bool ioOk = true;
    if (!fscOut.empty()) ioOk &= writeFile(fscOut, fsc_result_controller_json(result));
    if (!dotOut.empty()) ioOk &= writeFile(dotOut, fsc_result_controller_dot(result));
    if (!reportOut.empty()) ioOk &= writeFile(reportOut, fsc_result_report_json(result));

    fsc_result_free(result);
    fsc_model_free(model);

    if (!ioOk) {
        std::cout << "{\"error\":\"io\",\"message\":\"cannot write output file\"}\n";
        return static_cast<int>(FSC_ERR_IO);
    }
    return 0;
}
