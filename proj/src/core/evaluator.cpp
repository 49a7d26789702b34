#include "evaluator.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <random>

#include "json.hpp"

namespace fscd {

InducedMc induceMc(const Pomdp& pomdp, const Fsc& fsc) {
    InducedMc mc;
    std::map<std::pair<int, int>, int> index;
    std::deque<int> queue;

    auto lookup = [&](int s, int n) {
        auto [it, inserted] = index.try_emplace({s, n}, static_cast<int>(mc.states.size()));
        if (inserted) {
            mc.states.emplace_back(s, n);
            queue.push_back(it->second);
        }
        return it->second;
    };

    lookup(pomdp.initialState(), fsc.initial);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        auto [s, n] = mc.states[id];
        int z = pomdp.observationOf(s);
        const OutputSymbol& out = fsc.gamma[n][z];
        if (!out.isAction())
            throw ValidationError("FSC not applicable at node n" + std::to_string(n) +
                                  ", observation " + pomdp.observationName(z));
        int next = fsc.delta[n][z];
        std::map<int, double> successors;
        double reward = 0.0;
        for (const auto& [a, p] : out.dist.support()) {
            if (!pomdp.isEnabled(s, a))
                throw ValidationError("FSC plays disabled action " + pomdp.actionName(a) +
                                      " in state " + pomdp.stateName(s));
            reward += p * pomdp.reward(s, a);
            for (const auto& [succ, q] : pomdp.transition(s, a).support())
                successors[succ] += p * q;
        }
        while (static_cast<int>(mc.transitions.size()) <= id) {
            mc.transitions.emplace_back();
            mc.rewards.push_back(0.0);
            mc.target.push_back(0);
        }
        mc.rewards[id] = reward;
        mc.target[id] = pomdp.isTarget(s);
        for (const auto& [succ, p] : successors)
            mc.transitions[id].emplace_back(lookup(succ, next), p);
    }
    // lookup may have appended states after the final pop
    mc.transitions.resize(mc.states.size());
    mc.rewards.resize(mc.states.size(), 0.0);
    mc.target.resize(mc.states.size(), 0);
    for (size_t i = 0; i < mc.states.size(); ++i)
        mc.target[i] = pomdp.isTarget(mc.states[i].first);
    mc.initial = 0;
    return mc;
}

namespace {

std::vector<char> canReachTarget(const InducedMc& mc) {
    std::vector<std::vector<int>> preds(mc.numStates());
    for (int s = 0; s < mc.numStates(); ++s)
        for (const auto& [succ, p] : mc.transitions[s]) {
            (void)p;
            preds[succ].push_back(s);
        }
    std::vector<char> can(mc.numStates(), 0);
    std::deque<int> queue;
    for (int s = 0; s < mc.numStates(); ++s)
        if (mc.target[s]) { can[s] = 1; queue.push_back(s); }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : preds[s])
            if (!can[p]) { can[p] = 1; queue.push_back(p); }
    }
    return can;
}

std::vector<char> canReachSet(const InducedMc& mc, const std::vector<char>& seed) {
    std::vector<std::vector<int>> preds(mc.numStates());
    for (int s = 0; s < mc.numStates(); ++s)
        for (const auto& [succ, p] : mc.transitions[s]) {
            (void)p;
            preds[succ].push_back(s);
        }
    std::vector<char> can = seed;
    std::deque<int> queue;
    for (int s = 0; s < mc.numStates(); ++s)
        if (can[s]) queue.push_back(s);
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : preds[s])
            if (!can[p]) { can[p] = 1; queue.push_back(p); }
    }
    return can;
}

// Solves x = A x + b restricted to the unknown index set, dense Gaussian
// elimination with partial pivoting.
std::vector<double> solveLinear(const InducedMc& mc, const std::vector<int>& unknowns,
                                const std::vector<double>& rhs,
                                const std::vector<double>& boundary) {
    const int m = static_cast<int>(unknowns.size());
    std::vector<int> position(mc.numStates(), -1);
    for (int i = 0; i < m; ++i) position[unknowns[i]] = i;

    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (int i = 0; i < m; ++i) {
        int s = unknowns[i];
        a[i][i] = 1.0;
        a[i][m] = rhs[s];
        for (const auto& [succ, p] : mc.transitions[s]) {
            if (position[succ] >= 0)
                a[i][position[succ]] -= p;
            else
                a[i][m] += p * boundary[succ];
        }
    }
    for (int col = 0; col < m; ++col) {
        int pivot = col;
        for (int row = col + 1; row < m; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        std::swap(a[col], a[pivot]);
        if (std::abs(a[col][col]) < 1e-14)
            throw std::runtime_error("singular linear system in Markov chain solve");
        for (int row = 0; row < m; ++row) {
            if (row == col) continue;
            double factor = a[row][col] / a[col][col];
            if (factor == 0.0) continue;
            for (int k = col; k <= m; ++k) a[row][k] -= factor * a[col][k];
        }
    }
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = a[i][m] / a[i][i];
    return x;
}

std::vector<double> iterateLinear(const InducedMc& mc, const std::vector<int>& unknowns,
                                  const std::vector<double>& rhs, std::vector<double>& valueInOut,
                                  double tolerance) {
    for (int iter = 0; iter < 1000000; ++iter) {
        double maxDiff = 0.0;
        for (int s : unknowns) {
            double v = rhs[s];
            for (const auto& [succ, p] : mc.transitions[s]) v += p * valueInOut[succ];
            maxDiff = std::max(maxDiff, std::abs(v - valueInOut[s]));
            valueInOut[s] = v;
        }
        if (maxDiff < tolerance) break;
    }
    std::vector<double> x;
    x.reserve(unknowns.size());
    for (int s : unknowns) x.push_back(valueInOut[s]);
    return x;
}

}  // namespace

std::vector<double> mcStateValues(const InducedMc& mc, ObjectiveKind kind, McSolveMethod method,
                                  double tolerance) {
    const int n = mc.numStates();
    auto reach = canReachTarget(mc);
    std::vector<double> value(n, 0.0);

    std::vector<int> unknowns;
    std::vector<double> rhs(n, 0.0);
    if (!isRewardObjective(kind)) {
        for (int s = 0; s < n; ++s) {
            if (mc.target[s]) value[s] = 1.0;
            else if (reach[s]) unknowns.push_back(s);
        }
        // target successors enter through the boundary vector
        if (unknowns.empty()) return value;
        std::vector<double> boundary = value;
        std::vector<double> x;
        if (method == McSolveMethod::ValueIteration ||
            (method == McSolveMethod::Auto && n > 2000)) {
            // boundary values live in the iterate vector, so rhs stays zero
            std::vector<double> it = value;
            std::vector<double> zero(n, 0.0);
            x = iterateLinear(mc, unknowns, zero, it, tolerance);
        } else {
            x = solveLinear(mc, unknowns, rhs, boundary);
        }
        for (size_t i = 0; i < unknowns.size(); ++i) value[unknowns[i]] = x[i];
        return value;
    }

    // Expected total reward until a target. Infinite wherever a state with no
    // path to the target is reachable.
    std::vector<char> bad(n, 0);
    for (int s = 0; s < n; ++s) bad[s] = !reach[s];
    auto doomed = canReachSet(mc, bad);
    for (int s = 0; s < n; ++s) {
        if (mc.target[s]) value[s] = 0.0;
        else if (doomed[s]) value[s] = kInf;
        else unknowns.push_back(s);
    }
    if (unknowns.empty()) return value;
    for (int s : unknowns) rhs[s] = mc.rewards[s];
    std::vector<double> boundary(n, 0.0);
    std::vector<double> x;
    if (method == McSolveMethod::ValueIteration || (method == McSolveMethod::Auto && n > 2000)) {
        std::vector<double> it(n, 0.0);
        x = iterateLinear(mc, unknowns, rhs, it, tolerance);
    } else {
        x = solveLinear(mc, unknowns, rhs, boundary);
    }
    for (size_t i = 0; i < unknowns.size(); ++i) value[unknowns[i]] = x[i];
    return value;
}

ValueReport value(const InducedMc& mc, const Pomdp& pomdp, const Objective& objective,
                  int fscNodes, McSolveMethod method) {
    (void)pomdp;
    auto start = std::chrono::steady_clock::now();
    auto values = mcStateValues(mc, objective.kind, method);
    ValueReport report;
    report.objective = objective;
    report.value = values[mc.initial];
    report.mcStates = mc.numStates();
    report.fscNodes = fscNodes;
    report.wallTime = std::chrono::steady_clock::now() - start;
    return report;
}

std::vector<double> policyValues(const Pomdp& pomdp, const CutoffStrategy& policy,
                                 const Objective& objective) {
    InducedMc mc;
    mc.initial = pomdp.initialState();
    for (int s = 0; s < pomdp.numStates(); ++s) {
        mc.states.emplace_back(s, 0);
        const Distribution& choice = policy.policyByObservation.at(pomdp.observationOf(s));
        std::map<int, double> successors;
        double reward = 0.0;
        for (const auto& [a, p] : choice.support()) {
            reward += p * pomdp.reward(s, a);
            for (const auto& [succ, q] : pomdp.transition(s, a).support())
                successors[succ] += p * q;
        }
        mc.transitions.emplace_back(successors.begin(), successors.end());
        mc.rewards.push_back(reward);
        mc.target.push_back(objective.targetStates.count(s) > 0);
    }
    return mcStateValues(mc, objective.kind);
}

SimulationEstimate simulate(const InducedMc& mc, std::uint64_t seed, std::uint64_t episodes,
                            int horizon) {
    if (episodes < 1) throw ValidationError("simulate requires at least one episode");
    double hitSum = 0.0, hitSqSum = 0.0, rewardSum = 0.0, rewardSqSum = 0.0;
    for (std::uint64_t ep = 0; ep < episodes; ++ep) {
        std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * (ep + 1)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        int state = mc.initial;
        double reward = 0.0;
        bool hit = mc.target[state];
        for (int step = 0; step < horizon && !hit; ++step) {
            reward += mc.rewards[state];
            double roll = unit(rng);
            double acc = 0.0;
            int next = state;
            for (const auto& [succ, p] : mc.transitions[state]) {
                acc += p;
                next = succ;
                if (roll < acc) break;
            }
            state = next;
            hit = mc.target[state];
        }
        double h = hit ? 1.0 : 0.0;
        hitSum += h;
        hitSqSum += h * h;
        rewardSum += reward;
        rewardSqSum += reward * reward;
    }
    auto finish = [&](double sum, double sqSum, double& mean, double& stderr_) {
        double n = static_cast<double>(episodes);
        mean = sum / n;
        double variance = n > 1 ? std::max(0.0, (sqSum - n * mean * mean) / (n - 1)) : 0.0;
        stderr_ = std::sqrt(variance / n);
    };
    SimulationEstimate est;
    est.episodes = episodes;
    finish(hitSum, hitSqSum, est.targetFrequency, est.targetStdError);
    finish(rewardSum, rewardSqSum, est.meanReward, est.rewardStdError);
    return est;
}

std::string reportToJson(const ValueReport& report, const std::string& heuristic) {
    nlohmann::json doc;
    doc["objective"] = objectiveKindName(report.objective.kind) + ":" + report.objective.label;
    if (std::isinf(report.value))
        doc["value"] = "inf";
    else
        doc["value"] = report.value;
    doc["fsc_nodes"] = report.fscNodes;
    doc["mc_states"] = report.mcStates;
    doc["heuristic"] = heuristic;
    return doc.dump(2);
}

std::string reportTableLine(const ValueReport& report, const std::string& heuristic) {
    char value[32];
    if (std::isinf(report.value))
        std::snprintf(value, sizeof(value), "inf");
    else
        std::snprintf(value, sizeof(value), "%.6g", report.value);
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %12s %8d %10d %10.3fs", heuristic.c_str(), value,
                  report.fscNodes, report.mcStates, report.wallTime.count());
    return line;
}

}  // namespace fscd
