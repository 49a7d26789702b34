#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "fscdistill/fscdistill.h"

namespace {

std::string modelsDir() { return MODELS_DIR; }

fsc_model* loadRunningExample() {
    fsc_model* model = nullptr;
    REQUIRE(fsc_model_load_file((modelsDir() + "/running-example.json").c_str(), &model) ==
            FSC_OK);
    REQUIRE(model != nullptr);
    return model;
}

}  // namespace

TEST_CASE("library version is set") {
    REQUIRE(fsc_version() != nullptr);
    CHECK(std::string(fsc_version()) == "0.1.0");
}

TEST_CASE("option defaults") {
    fsc_run_options options;
    fsc_run_options_init(&options);
    CHECK(std::string(options.mode) == "belief");
    CHECK(std::string(options.heuristic) == "portfolio");
    CHECK(options.table_path == nullptr);
    CHECK(options.max_beliefs == 10000);
    CHECK(options.max_depth == 100);
    CHECK(options.cutoff_strategy == 0);
    CHECK(options.tolerance == 1e-8);
}

TEST_CASE("loading errors are reported with a message") {
    fsc_model* model = nullptr;
    SUBCASE("missing file") {
        CHECK(fsc_model_load_file("/nonexistent/model.json", &model) == FSC_ERR_IO);
        CHECK(model == nullptr);
        CHECK(std::strlen(fsc_last_error()) > 0);
    }
    SUBCASE("malformed JSON") {
        CHECK(fsc_model_load_string("{ not json", &model) == FSC_ERR_PARSE);
        CHECK(model == nullptr);
    }
    SUBCASE("structurally invalid model") {
        CHECK(fsc_model_load_string("{}", &model) != FSC_OK);
        CHECK(model == nullptr);
    }
    SUBCASE("null arguments") {
        CHECK(fsc_model_load_file(nullptr, &model) == FSC_ERR_INVALID_ARGUMENT);
        CHECK(fsc_model_load_file("x", nullptr) == FSC_ERR_INVALID_ARGUMENT);
    }
}

TEST_CASE("a belief-mode run reports the certain-goal controller") {
    fsc_model* model = loadRunningExample();
    fsc_run_options options;
    fsc_run_options_init(&options);
    options.objective = "maxprob:g";

    fsc_result* result = nullptr;
    REQUIRE(fsc_run(model, &options, &result) == FSC_OK);
    REQUIRE(result != nullptr);

    CHECK(fsc_result_value(result) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fsc_result_nodes(result) == 1);
    CHECK(fsc_result_mc_states(result) == 5);
    CHECK(fsc_result_heuristic(result) != nullptr);

    const char* json = fsc_result_controller_json(result);
    REQUIRE(json != nullptr);
    CHECK(std::string(json).find("\"transitions\"") != std::string::npos);
    const char* dot = fsc_result_controller_dot(result);
    REQUIRE(dot != nullptr);
    CHECK(std::string(dot).find("digraph fsc") != std::string::npos);
    const char* report = fsc_result_report_json(result);
    REQUIRE(report != nullptr);
    CHECK(std::string(report).find("\"objective\": \"maxprob:g\"") != std::string::npos);
    CHECK(fsc_result_report_line(result) != nullptr);

    fsc_result_free(result);
    fsc_model_free(model);
}

TEST_CASE("a table-mode run consumes a strategy table CSV") {
    fsc_model* model = loadRunningExample();
    fsc_run_options options;
    fsc_run_options_init(&options);
    options.objective = "maxprob:g";
    options.mode = "table";
    std::string table = modelsDir() + "/table1.csv";
    options.table_path = table.c_str();

    fsc_result* result = nullptr;
    REQUIRE(fsc_run(model, &options, &result) == FSC_OK);
    CHECK(fsc_result_value(result) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fsc_result_nodes(result) >= 1);
    fsc_result_free(result);

    SUBCASE("table mode without a table is a validation error") {
        options.table_path = nullptr;
        fsc_result* none = nullptr;
        CHECK(fsc_run(model, &options, &none) == FSC_ERR_VALIDATION);
        CHECK(none == nullptr);
        CHECK(std::strlen(fsc_last_error()) > 0);
    }
    fsc_model_free(model);
}

TEST_CASE("run rejects bad arguments without crashing") {
    fsc_model* model = loadRunningExample();
    fsc_run_options options;
    fsc_run_options_init(&options);
    fsc_result* result = nullptr;

    SUBCASE("null handles") {
        CHECK(fsc_run(nullptr, &options, &result) == FSC_ERR_INVALID_ARGUMENT);
        CHECK(fsc_run(model, nullptr, &result) == FSC_ERR_INVALID_ARGUMENT);
        CHECK(fsc_run(model, &options, nullptr) == FSC_ERR_INVALID_ARGUMENT);
    }
    SUBCASE("unknown objective label") {
        options.objective = "maxprob:nosuch";
        CHECK(fsc_run(model, &options, &result) == FSC_ERR_VALIDATION);
    }
    SUBCASE("unknown mode") {
        options.mode = "psychic";
        CHECK(fsc_run(model, &options, &result) != FSC_OK);
    }
    SUBCASE("accessors tolerate null") {
        CHECK(std::string(fsc_result_controller_json(nullptr)).empty());
        CHECK(std::string(fsc_result_heuristic(nullptr)).empty());
        CHECK(fsc_result_value(nullptr) == 0.0);
        CHECK(fsc_result_nodes(nullptr) == 0);
        fsc_result_free(nullptr);
        fsc_model_free(nullptr);
    }
    fsc_model_free(model);
}
