#include "belief.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "evaluator.hpp"
#include "mdp_solve.hpp"

namespace fscd {

int BeliefMdp::numCutoffs() const {
    int count = 0;
    for (char c : cutoff) count += c != 0;
    return count;
}

std::optional<Belief> beliefUpdate(const Pomdp& pomdp, const Belief& b, int action,
                                   int observation) {
    const auto& enabled = pomdp.enabledActionsOfObservation(b.observation);
    if (std::find(enabled.begin(), enabled.end(), action) == enabled.end())
        throw ValidationError("action " + pomdp.actionName(action) +
                              " disabled for observation " +
                              pomdp.observationName(b.observation));
    std::map<int, double> mass;
    for (const auto& [s, p] : b.distribution.support())
        for (const auto& [succ, q] : pomdp.transition(s, action).support())
            if (pomdp.observationOf(succ) == observation) mass[succ] += p * q;
    double total = 0.0;
    for (const auto& [s, m] : mass) total += m;
    if (total <= 0.0) return std::nullopt;
    std::vector<std::pair<int, double>> support;
    for (const auto& [s, m] : mass) support.emplace_back(s, m / total);
    return Belief{Distribution(std::move(support)), observation};
}

namespace {

using BeliefKey = std::pair<int, std::vector<std::pair<int, std::int64_t>>>;

BeliefKey keyOf(const Belief& b) { return {b.observation, b.distribution.quantizedKey()}; }

}  // namespace

BeliefMdp explore(const Pomdp& pomdp, int maxBeliefs, int maxDepth, int cutoffStrategyId) {
    if (maxBeliefs < 1) throw ValidationError("maxBeliefs must be at least 1");
    BeliefMdp bmdp;
    std::map<BeliefKey, int> index;

    Belief initial{Distribution::dirac(pomdp.initialState()),
                   pomdp.observationOf(pomdp.initialState())};
    bmdp.nodes.push_back(initial);
    bmdp.edges.emplace_back();
    bmdp.cutoff.push_back(0);
    bmdp.cutoffStrategy.push_back(-1);
    bmdp.depth.push_back(0);
    index[keyOf(initial)] = 0;

    std::deque<int> queue{0};
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        const Belief node = bmdp.nodes[id];

        auto markCutoff = [&] {
            bmdp.cutoff[id] = 1;
            bmdp.cutoffStrategy[id] = cutoffStrategyId;
            bmdp.edges[id].clear();
        };
        if (bmdp.depth[id] >= maxDepth) {
            markCutoff();
            continue;
        }

        const auto& enabled = pomdp.enabledActionsOfObservation(node.observation);
        std::vector<std::vector<BeliefMdp::Edge>> actionEdges;
        std::vector<Belief> fresh;
        std::vector<BeliefKey> freshKeys;
        for (int action : enabled) {
            // split the pushforward by successor observation
            std::map<int, double> mass;
            for (const auto& [s, p] : node.distribution.support())
                for (const auto& [succ, q] : pomdp.transition(s, action).support())
                    mass[succ] += p * q;
            std::map<int, double> obsProb;
            for (const auto& [s, m] : mass) obsProb[pomdp.observationOf(s)] += m;

            std::vector<BeliefMdp::Edge> edges;
            for (const auto& [z, pz] : obsProb) {
                std::vector<std::pair<int, double>> support;
                for (const auto& [s, m] : mass)
                    if (pomdp.observationOf(s) == z) support.emplace_back(s, m / pz);
                Belief succ{Distribution(std::move(support)), z};
                BeliefKey key = keyOf(succ);
                int succId;
                auto it = index.find(key);
                if (it != index.end()) {
                    succId = it->second;
                } else {
                    // tentative id; materialized only if the budget allows
                    bool pending = false;
                    for (size_t i = 0; i < freshKeys.size(); ++i)
                        if (freshKeys[i] == key) {
                            succId = bmdp.numNodes() + static_cast<int>(i);
                            pending = true;
                            break;
                        }
                    if (!pending) {
                        succId = bmdp.numNodes() + static_cast<int>(fresh.size());
                        fresh.push_back(succ);
                        freshKeys.push_back(std::move(key));
                    }
                }
                edges.push_back({z, pz, succId});
            }
            actionEdges.push_back(std::move(edges));
        }

        if (bmdp.numNodes() + static_cast<int>(fresh.size()) > maxBeliefs) {
            markCutoff();
            continue;
        }
        for (size_t i = 0; i < fresh.size(); ++i) {
            int newId = bmdp.numNodes();
            index[freshKeys[i]] = newId;
            bmdp.nodes.push_back(fresh[i]);
            bmdp.edges.emplace_back();
            bmdp.cutoff.push_back(0);
            bmdp.cutoffStrategy.push_back(-1);
            bmdp.depth.push_back(bmdp.depth[id] + 1);
            queue.push_back(newId);
        }
        bmdp.edges[id] = std::move(actionEdges);
    }
    return bmdp;
}

BeliefStrategy solve(const BeliefMdp& bmdp, const Pomdp& pomdp, const Objective& objective,
                     const std::vector<CutoffStrategy>& cutoffs, double tolerance) {
    const bool reward = isRewardObjective(objective.kind);

    auto isTargetBelief = [&](const Belief& b) {
        for (const auto& [s, p] : b.distribution.support()) {
            (void)p;
            if (!objective.targetStates.count(s)) return false;
        }
        return true;
    };

    // values of each referenced cut-off strategy, per POMDP state
    std::map<int, std::vector<double>> cutoffStateValues;
    for (int id = 0; id < bmdp.numNodes(); ++id) {
        if (!bmdp.cutoff[id]) continue;
        int strat = bmdp.cutoffStrategy[id];
        if (strat < 0 || strat >= static_cast<int>(cutoffs.size()))
            throw ValidationError("missing cut-off strategy " + std::to_string(strat));
        if (!cutoffStateValues.count(strat))
            cutoffStateValues[strat] = policyValues(pomdp, cutoffs[strat], objective);
    }

    ExplicitMdp mdp;
    mdp.initial = bmdp.initial;
    mdp.choices.resize(bmdp.numNodes());
    mdp.terminalValue.assign(bmdp.numNodes(), std::nan(""));
    for (int id = 0; id < bmdp.numNodes(); ++id) {
        const Belief& b = bmdp.nodes[id];
        if (isTargetBelief(b)) {
            mdp.terminalValue[id] = reward ? 0.0 : 1.0;
            continue;
        }
        if (bmdp.cutoff[id]) {
            const auto& stateValues = cutoffStateValues.at(bmdp.cutoffStrategy[id]);
            double v = 0.0;
            for (const auto& [s, p] : b.distribution.support()) {
                if (std::isinf(stateValues[s])) { v = kInf; break; }
                v += p * stateValues[s];
            }
            mdp.terminalValue[id] = v;
            continue;
        }
        const auto& enabled = pomdp.enabledActionsOfObservation(b.observation);
        for (size_t k = 0; k < enabled.size(); ++k) {
            ExplicitMdp::Choice choice;
            choice.label = enabled[k];
            if (reward)
                for (const auto& [s, p] : b.distribution.support())
                    choice.reward += p * pomdp.reward(s, enabled[k]);
            for (const auto& edge : bmdp.edges[id][k])
                choice.successors.emplace_back(edge.successor, edge.probability);
            mdp.choices[id].push_back(std::move(choice));
        }
    }

    MdpSolution solution = solveMdp(mdp, objective.kind, tolerance);

    BeliefStrategy strategy;
    strategy.values = solution.value;
    strategy.value = solution.value[bmdp.initial];
    strategy.choice.assign(bmdp.numNodes(), -1);
    strategy.chi.assign(bmdp.numNodes(), -1);
    strategy.target.assign(bmdp.numNodes(), 0);
    for (int id = 0; id < bmdp.numNodes(); ++id) {
        strategy.target[id] = isTargetBelief(bmdp.nodes[id]) ? 1 : 0;
        if (bmdp.cutoff[id]) {
            strategy.chi[id] = bmdp.cutoffStrategy[id];
            continue;
        }
        const auto& enabled = pomdp.enabledActionsOfObservation(bmdp.nodes[id].observation);
        if (solution.choice[id] >= 0)
            strategy.choice[id] = mdp.choices[id][solution.choice[id]].label;
        else
            strategy.choice[id] = enabled.front();  // target belief, choice irrelevant
    }
    return strategy;
}

namespace {

// slot of the chosen action in the node's edge list, aligned with the
// observation's enabled-action list (see explore)
int chosenSlot(const BeliefMdp& bmdp, const Pomdp& pomdp, const BeliefStrategy& strategy,
               int id) {
    const auto& enabled = pomdp.enabledActionsOfObservation(bmdp.nodes[id].observation);
    for (size_t k = 0; k < enabled.size(); ++k)
        if (enabled[k] == strategy.choice[id]) return static_cast<int>(k);
    return -1;
}

}  // namespace

std::vector<char> strategyReachable(const BeliefMdp& bmdp, const Pomdp& pomdp,
                                    const BeliefStrategy& strategy) {
    std::vector<char> reachable(bmdp.numNodes(), 0);
    std::deque<int> queue{bmdp.initial};
    reachable[bmdp.initial] = 1;
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        if (bmdp.cutoff[id] || bmdp.edges[id].empty()) continue;
        int slot = chosenSlot(bmdp, pomdp, strategy, id);
        if (slot < 0) continue;
        for (const auto& edge : bmdp.edges[id][slot])
            if (!reachable[edge.successor]) {
                reachable[edge.successor] = 1;
                queue.push_back(edge.successor);
            }
    }
    return reachable;
}

ObservationSequence representativeSequence(const BeliefMdp& bmdp, const Pomdp& pomdp,
                                           const BeliefStrategy& strategy, int beliefId) {
    if (beliefId < 0 || beliefId >= bmdp.numNodes())
        throw ValidationError("unreachable belief id " + std::to_string(beliefId));

    // BFS from the initial belief; edges are expanded in ascending observation
    // order, so the first path found has the lexicographically least
    // observation sequence among shortest ones.
    auto search = [&](bool restricted) -> std::optional<ObservationSequence> {
        std::vector<int> parent(bmdp.numNodes(), -2);  // -2 unvisited, -1 root
        std::vector<int> viaObs(bmdp.numNodes(), -1);
        parent[bmdp.initial] = -1;
        std::deque<int> queue{bmdp.initial};
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            if (id == beliefId) {
                ObservationSequence seq;
                for (int cur = id; cur != bmdp.initial; cur = parent[cur])
                    seq.push_back(viaObs[cur]);
                seq.push_back(bmdp.nodes[bmdp.initial].observation);
                std::reverse(seq.begin(), seq.end());
                return seq;
            }
            if (bmdp.cutoff[id] || bmdp.edges[id].empty()) continue;
            // gather candidate edges, ordered by observation
            std::vector<std::pair<int, int>> candidates;  // (obs, successor)
            if (restricted) {
                int slot = chosenSlot(bmdp, pomdp, strategy, id);
                if (slot < 0) continue;
                for (const auto& edge : bmdp.edges[id][slot])
                    candidates.emplace_back(edge.observation, edge.successor);
            } else {
                for (const auto& edges : bmdp.edges[id])
                    for (const auto& edge : edges)
                        candidates.emplace_back(edge.observation, edge.successor);
                std::sort(candidates.begin(), candidates.end());
            }
            for (const auto& [z, succ] : candidates)
                if (parent[succ] == -2) {
                    parent[succ] = id;
                    viaObs[succ] = z;
                    queue.push_back(succ);
                }
        }
        return std::nullopt;
    };

    if (auto seq = search(true)) return *seq;
    if (auto seq = search(false)) return *seq;
    throw ValidationError("unreachable belief id " + std::to_string(beliefId));
}

}  // namespace fscd
