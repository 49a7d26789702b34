#include "pipeline.hpp"

#include <cmath>
#include <memory>

#include "belief.hpp"
#include "learner.hpp"
#include "teacher.hpp"

namespace fscd {

std::string runModeName(RunMode mode) { return mode == RunMode::Table ? "table" : "belief"; }

std::string heuristicName(HeuristicMode heuristic) {
    switch (heuristic) {
        case HeuristicMode::Base: return "base";
        case HeuristicMode::H1: return "h1";
        case HeuristicMode::H2: return "h2";
        case HeuristicMode::Portfolio: return "portfolio";
    }
    return "?";
}

RunMode parseRunMode(const std::string& name) {
    if (name == "table") return RunMode::Table;
    if (name == "belief") return RunMode::Belief;
    throw ValidationError("unknown mode: " + name);
}

HeuristicMode parseHeuristic(const std::string& name) {
    if (name == "base") return HeuristicMode::Base;
    if (name == "h1") return HeuristicMode::H1;
    if (name == "h2") return HeuristicMode::H2;
    if (name == "portfolio") return HeuristicMode::Portfolio;
    throw ValidationError("unknown heuristic: " + name);
}

namespace {

bool containsChi(const Fsc& fsc) {
    for (const auto& row : fsc.gamma)
        for (const auto& sym : row)
            if (sym.isChi()) return true;
    return false;
}

HeuristicResult evaluateHeuristic(const std::string& name, const Fsc& learned,
                                  const Pomdp& pomdp, const Objective& objective,
                                  const std::vector<CutoffStrategy>& cutoffs) {
    Fsc completed;
    if (name == "base") {
        completed = applyBase(learned, cutoffs, pomdp);
    } else if (name == "h1") {
        completed = applyH1(learned);
        if (containsChi(completed))  // observations with no concrete output keep chi
            completed = applyBase(completed, cutoffs, pomdp);
    } else {
        completed = applyH2(learned);
    }
    completed = resolveDontCare(completed, pomdp);
    InducedMc mc = induceMc(pomdp, completed);
    HeuristicResult result;
    result.name = name;
    result.report = value(mc, pomdp, objective, completed.numNodes());
    result.fsc = std::move(completed);
    return result;
}

}  // namespace

RunArtifacts runPipeline(const Pomdp& pomdp, const RunConfig& config) {
    if (config.tolerance <= 0) throw ValidationError("tolerance must be positive");
    Objective objective = parseObjective(pomdp, config.objectiveSpec);
    std::vector<CutoffStrategy> cutoffs = cutoffStrategies(pomdp);
    if (config.cutoffStrategyId < 0 ||
        config.cutoffStrategyId >= static_cast<int>(cutoffs.size()))
        throw ValidationError("missing cut-off strategy " +
                              std::to_string(config.cutoffStrategyId));

    RunArtifacts artifacts;

    // assemble the teacher
    std::unique_ptr<Teacher> teacher;
    StrategyTable table;
    BeliefMdp bmdp;
    BeliefStrategy beliefStrategy;
    if (config.mode == RunMode::Table) {
        if (config.tablePath.empty())
            throw ValidationError("table mode requires a strategy-table path");
        table = parseStrategyTableFile(config.tablePath, pomdp);
        teacher = std::make_unique<TableTeacher>(pomdp, table, ChiPolicy::Require);
    } else {
        bmdp = explore(pomdp, config.maxBeliefs, config.maxDepth, config.cutoffStrategyId);
        beliefStrategy = solve(bmdp, pomdp, objective, cutoffs, config.tolerance);
        artifacts.beliefValue = beliefStrategy.value;
        artifacts.exploredBeliefs = bmdp.numNodes();
        artifacts.cutoffBeliefs = bmdp.numCutoffs();
        auto reachable = strategyReachable(bmdp, pomdp, beliefStrategy);
        for (char r : reachable) artifacts.beliefMcStates += r != 0;
        teacher = std::make_unique<BeliefTeacher>(pomdp, bmdp, beliefStrategy);
    }

    artifacts.learnedFsc = minimize(learn(*teacher));

    std::vector<std::string> toRun;
    if (config.heuristic == HeuristicMode::Portfolio)
        toRun = {"base", "h1", "h2"};
    else
        toRun = {heuristicName(config.heuristic)};

    const bool maximize = isMaximizing(objective.kind);
    int best = -1;
    for (const auto& name : toRun) {
        artifacts.candidates.push_back(
            evaluateHeuristic(name, artifacts.learnedFsc, pomdp, objective, cutoffs));
        const HeuristicResult& cand = artifacts.candidates.back();
        if (best < 0) {
            best = static_cast<int>(artifacts.candidates.size()) - 1;
            continue;
        }
        const HeuristicResult& incumbent = artifacts.candidates[best];
        double dv = cand.report.value - incumbent.report.value;
        bool better;
        if (std::isinf(cand.report.value) && std::isinf(incumbent.report.value))
            better = false;
        else if (std::abs(dv) > 1e-9)
            better = maximize ? dv > 0 : dv < 0;
        else
            better = cand.report.fscNodes < incumbent.report.fscNodes;
        if (better) best = static_cast<int>(artifacts.candidates.size()) - 1;
    }

    const HeuristicResult& chosen = artifacts.candidates[best];
    artifacts.finalFsc = chosen.fsc;
    artifacts.chosenHeuristic = chosen.name;
    artifacts.report = chosen.report;
    artifacts.fscJson = fscToJson(artifacts.finalFsc, pomdp);
    artifacts.dotText = exportDot(artifacts.finalFsc, pomdp);
    artifacts.reportJson = reportToJson(artifacts.report, artifacts.chosenHeuristic);
    artifacts.reportLine = reportTableLine(artifacts.report, artifacts.chosenHeuristic);
    return artifacts;
}

}  // namespace fscd
