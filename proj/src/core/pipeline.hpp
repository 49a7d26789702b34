#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evaluator.hpp"
#include "fsc.hpp"
#include "pomdp.hpp"

namespace fscd {

enum class RunMode { Table, Belief };
enum class HeuristicMode { Base, H1, H2, Portfolio };

std::string runModeName(RunMode mode);
std::string heuristicName(HeuristicMode heuristic);
RunMode parseRunMode(const std::string& name);
HeuristicMode parseHeuristic(const std::string& name);

struct RunConfig {
    std::string modelPath;
    std::string objectiveSpec = "maxprob:goal";
    RunMode mode = RunMode::Belief;
    HeuristicMode heuristic = HeuristicMode::Portfolio;
    std::string tablePath;          // required in table mode
    int maxBeliefs = 10000;
    int maxDepth = 100;
    int cutoffStrategyId = 0;       // 0 = uniform default
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
};

struct HeuristicResult {
    std::string name;
    Fsc fsc;  // applicable, ready for evaluation
    ValueReport report;
};

struct RunArtifacts {
    Fsc learnedFsc;    // minimized learner output, may contain chi / don't-care
    Fsc finalFsc;      // chosen heuristic's applicable FSC
    std::string chosenHeuristic;
    ValueReport report;
    std::vector<HeuristicResult> candidates;  // all evaluated heuristics

    double beliefValue = 0.0;  // belief mode only
    int beliefMcStates = 0;    // beliefs reachable under the belief strategy
    int exploredBeliefs = 0;
    int cutoffBeliefs = 0;

    std::string fscJson;
    std::string dotText;
    std::string reportJson;
    std::string reportLine;
};

RunArtifacts runPipeline(const Pomdp& pomdp, const RunConfig& config);

}  // namespace fscd
