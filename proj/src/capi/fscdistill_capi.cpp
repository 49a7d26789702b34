#include "fscdistill/fscdistill.h"

#include <exception>
#include <string>

#include "../core/pipeline.hpp"
#include "../core/pomdp.hpp"

struct fsc_model {
    fscd::Pomdp pomdp;
};

struct fsc_result {
    fscd::RunArtifacts artifacts;
};

namespace {

thread_local std::string g_lastError;

fsc_status capture(const std::exception_ptr& eptr) {
    try {
        std::rethrow_exception(eptr);
    } catch (const fscd::IoError& e) {
        g_lastError = e.what();
        return FSC_ERR_IO;
    } catch (const fscd::ParseError& e) {
        g_lastError = e.what();
        return FSC_ERR_PARSE;
    } catch (const fscd::ValidationError& e) {
        g_lastError = e.what();
        return FSC_ERR_VALIDATION;
    } catch (const std::exception& e) {
        g_lastError = e.what();
        return FSC_ERR_INTERNAL;
    } catch (...) {
        g_lastError = "unknown error";
        return FSC_ERR_INTERNAL;
    }
}

}  // namespace

extern "C" {

void fsc_run_options_init(fsc_run_options* options) {
    if (!options) return;
    options->objective = "maxprob:goal";
    options->mode = "belief";
    options->heuristic = "portfolio";
    options->table_path = nullptr;
    options->max_beliefs = 10000;
    options->max_depth = 100;
    options->cutoff_strategy = 0;
    options->tolerance = 1e-8;
    options->seed = 0;
}

fsc_status fsc_model_load_file(const char* path, fsc_model** out) {
    if (!path || !out) {
        g_lastError = "null argument";
        return FSC_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    try {
        *out = new fsc_model{fscd::parseModelFile(path)};
        g_lastError.clear();
        return FSC_OK;
    } catch (...) {
        return capture(std::current_exception());
    }
}

fsc_status fsc_model_load_string(const char* json, fsc_model** out) {
    if (!json || !out) {
        g_lastError = "null argument";
        return FSC_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    try {
        *out = new fsc_model{fscd::parseModel(json)};
        g_lastError.clear();
        return FSC_OK;
    } catch (...) {
        return capture(std::current_exception());
    }
}

void fsc_model_free(fsc_model* model) { delete model; }

fsc_status fsc_run(const fsc_model* model, const fsc_run_options* options, fsc_result** out) {
    if (!model || !options || !out) {
        g_lastError = "null argument";
        return FSC_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    try {
        fscd::RunConfig config;
        if (options->objective) config.objectiveSpec = options->objective;
        config.mode = fscd::parseRunMode(options->mode ? options->mode : "belief");
        config.heuristic =
            fscd::parseHeuristic(options->heuristic ? options->heuristic : "portfolio");
        if (options->table_path) config.tablePath = options->table_path;
        config.maxBeliefs = options->max_beliefs;
        config.maxDepth = options->max_depth;
        config.cutoffStrategyId = options->cutoff_strategy;
        config.tolerance = options->tolerance;
        config.seed = options->seed;
        *out = new fsc_result{fscd::runPipeline(model->pomdp, config)};
        g_lastError.clear();
        return FSC_OK;
    } catch (...) {
        return capture(std::current_exception());
    }
}

void fsc_result_free(fsc_result* result) { delete result; }

const char* fsc_result_controller_json(const fsc_result* result) {
    return result ? result->artifacts.fscJson.c_str() : "";
}

const char* fsc_result_controller_dot(const fsc_result* result) {
    return result ? result->artifacts.dotText.c_str() : "";
}

const char* fsc_result_report_json(const fsc_result* result) {
    return result ? result->artifacts.reportJson.c_str() : "";
}

const char* fsc_result_report_line(const fsc_result* result) {
    return result ? result->artifacts.reportLine.c_str() : "";
}

const char* fsc_result_heuristic(const fsc_result* result) {
    return result ? result->artifacts.chosenHeuristic.c_str() : "";
}

double fsc_result_value(const fsc_result* result) {
    return result ? result->artifacts.report.value : 0.0;
}

int fsc_result_nodes(const fsc_result* result) {
    return result ? result->artifacts.report.fscNodes : 0;
}

int fsc_result_mc_states(const fsc_result* result) {
    return result ? result->artifacts.report.mcStates : 0;
}

const char* fsc_last_error(void) { return g_lastError.c_str(); }

const char* fsc_version(void) { return "0.1.0"; }

}  // extern "C"
