#pragma once

// Shared helpers for the test suite: deterministic random model / strategy
// generators and independent brute-force oracles the implementation under
// test must agree with.

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "core/fsc.hpp"
#include "core/pomdp.hpp"
#include "core/teacher.hpp"

namespace fscd::testing {

inline std::string modelsDir() { return MODELS_DIR; }

inline Pomdp runningExample() { return parseModelFile(modelsDir() + "/running-example.json"); }

// Random POMDP with observation-consistent action enablings. Every state gets
// at least one enabled action; transition targets are arbitrary states.
inline Pomdp randomPomdp(std::mt19937& rng, int maxStates = 8, int maxObs = 3,
                         int maxActions = 3) {
    std::uniform_int_distribution<int> stateCount(2, maxStates);
    std::uniform_int_distribution<int> obsCount(1, maxObs);
    std::uniform_int_distribution<int> actCount(1, maxActions);
    int numStates = stateCount(rng);
    int numObs = std::min(obsCount(rng), numStates);
    int numActions = actCount(rng);

    std::vector<std::string> stateNames, actionNames, obsNames;
    for (int s = 0; s < numStates; ++s) stateNames.push_back("s" + std::to_string(s));
    for (int a = 0; a < numActions; ++a) actionNames.push_back("a" + std::to_string(a));
    for (int z = 0; z < numObs; ++z) obsNames.push_back("z" + std::to_string(z));

    std::vector<int> obsOfState(numStates);
    for (int z = 0; z < numObs; ++z) obsOfState[z] = z;  // every observation occurs
    std::uniform_int_distribution<int> anyObs(0, numObs - 1);
    for (int s = numObs; s < numStates; ++s) obsOfState[s] = anyObs(rng);

    // enabled actions per observation (consistency requirement)
    std::vector<std::vector<int>> enabled(numObs);
    std::bernoulli_distribution coin(0.7);
    for (int z = 0; z < numObs; ++z) {
        for (int a = 0; a < numActions; ++a)
            if (coin(rng)) enabled[z].push_back(a);
        if (enabled[z].empty()) enabled[z].push_back(0);
    }

    std::map<Pomdp::TransitionKey, Distribution> transitions;
    std::uniform_int_distribution<int> anyState(0, numStates - 1);
    std::uniform_int_distribution<int> supportSize(1, 3);
    for (int s = 0; s < numStates; ++s)
        for (int a : enabled[obsOfState[s]]) {
            std::set<int> targets;
            int k = std::min(supportSize(rng), numStates);
            while (static_cast<int>(targets.size()) < k) targets.insert(anyState(rng));
            std::vector<std::pair<int, double>> support;
            double total = 0.0;
            std::vector<double> weights;
            for (size_t i = 0; i < targets.size(); ++i) {
                double w = std::uniform_real_distribution<double>(0.1, 1.0)(rng);
                weights.push_back(w);
                total += w;
            }
            size_t i = 0;
            for (int t : targets) support.emplace_back(t, weights[i++] / total);
            // repair rounding so the distribution sums to 1 exactly
            double sum = 0.0;
            for (auto& [t, p] : support) sum += p;
            support.back().second += 1.0 - sum;
            transitions.emplace(Pomdp::TransitionKey{s, a}, Distribution(std::move(support)));
        }

    std::set<int> targetStates{numStates - 1};
    return Pomdp(std::move(stateNames), std::move(actionNames), std::move(obsNames),
                 std::move(obsOfState), std::move(transitions), 0, std::move(targetStates), {},
                 false, {});
}

// All observation sequences realizable in the POMDP, up to maxDepth symbols.
inline std::vector<ObservationSequence> realizableSequences(const Pomdp& pomdp, int maxDepth) {
    std::vector<ObservationSequence> out;
    struct Item {
        ObservationSequence seq;
        std::set<int> states;
    };
    std::vector<Item> frontier{
        {{pomdp.observationOf(pomdp.initialState())}, {pomdp.initialState()}}};
    while (!frontier.empty()) {
        std::vector<Item> next;
        for (auto& item : frontier) {
            out.push_back(item.seq);
            if (static_cast<int>(item.seq.size()) >= maxDepth) continue;
            for (int z = 0; z < pomdp.numObservations(); ++z) {
                std::set<int> succs;
                for (int s : item.states)
                    for (int a : pomdp.enabledActions(s))
                        for (const auto& [t, p] : pomdp.transition(s, a).support()) {
                            (void)p;
                            if (pomdp.observationOf(t) == z) succs.insert(t);
                        }
                if (succs.empty()) continue;
                ObservationSequence seq = item.seq;
                seq.push_back(z);
                next.push_back({std::move(seq), std::move(succs)});
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// Complete random strategy table: a Dirac output for every realizable
// sequence up to the depth.
inline StrategyTable randomCompleteTable(std::mt19937& rng, const Pomdp& pomdp, int depth) {
    StrategyTable table;
    for (const auto& seq : realizableSequences(pomdp, depth)) {
        const auto& enabled = pomdp.enabledActionsOfObservation(seq.back());
        std::uniform_int_distribution<size_t> pick(0, enabled.size() - 1);
        table.rows.emplace_back(seq, OutputSymbol::diracAction(enabled[pick(rng)]));
    }
    return table;
}

// Number of states of the canonical Mealy machine of the table's output
// query, by brute-force residual comparison. The OQ is don't-care beyond the
// table depth, so residuals are decided by suffixes up to that depth.
inline int canonicalMachineSize(const StrategyTable& table, int numObs, int maxDepth) {
    // enumerate all access strings up to maxDepth (plus one for the sink)
    std::vector<ObservationSequence> prefixes{{}};
    for (size_t i = 0; i < prefixes.size(); ++i) {
        if (static_cast<int>(prefixes[i].size()) >= maxDepth) continue;
        for (int z = 0; z < numObs; ++z) {
            ObservationSequence seq = prefixes[i];
            seq.push_back(z);
            prefixes.push_back(std::move(seq));
        }
    }
    std::vector<ObservationSequence> suffixes;
    for (size_t i = 1; i < prefixes.size(); ++i) suffixes.push_back(prefixes[i]);

    // intern each row's output so signatures compare as ints; 0 = don't-care
    std::map<ObservationSequence, int> outputId;
    std::vector<const OutputSymbol*> symbols;
    for (const auto& [seq, out] : table.rows) {
        int id = -1;
        for (size_t k = 0; k < symbols.size(); ++k)
            if (symbols[k]->equals(out)) {
                id = static_cast<int>(k) + 1;
                break;
            }
        if (id < 0) {
            symbols.push_back(&out);
            id = static_cast<int>(symbols.size());
        }
        outputId[seq] = id;
    }
    auto lookup = [&](const ObservationSequence& seq) {
        auto it = outputId.find(seq);
        return it == outputId.end() ? 0 : it->second;
    };

    // Residuals of strings longer than maxDepth are the all-dagger sink,
    // which the length-maxDepth prefixes already exhibit, so scanning the
    // prefixes covers every residual of the canonical machine.
    std::set<std::vector<int>> signatures;
    for (const auto& p : prefixes) {
        std::vector<int> sig;
        sig.reserve(suffixes.size());
        for (const auto& t : suffixes) {
            ObservationSequence seq = p;
            seq.insert(seq.end(), t.begin(), t.end());
            sig.push_back(lookup(seq));
        }
        signatures.insert(std::move(sig));
    }
    return static_cast<int>(signatures.size());
}

// Replay a sequence through an FSC step by step, independently of Fsc::run.
inline OutputSymbol replay(const Fsc& fsc, const ObservationSequence& seq) {
    int node = fsc.initial;
    for (size_t i = 0; i + 1 < seq.size(); ++i) node = fsc.delta[node][seq[i]];
    return fsc.gamma[node][seq.back()];
}

// All sequences over the FSC's observation alphabet up to depth (non-empty).
inline std::vector<ObservationSequence> allSequences(int numObs, int depth) {
    std::vector<ObservationSequence> out;
    std::vector<ObservationSequence> frontier{{}};
    for (int d = 0; d < depth; ++d) {
        std::vector<ObservationSequence> next;
        for (const auto& seq : frontier)
            for (int z = 0; z < numObs; ++z) {
                ObservationSequence s = seq;
                s.push_back(z);
                out.push_back(s);
                next.push_back(std::move(s));
            }
        frontier = std::move(next);
    }
    return out;
}

// Random FSC whose outputs mix actions, don't-know and don't-care symbols.
inline Fsc randomFsc(std::mt19937& rng, int numNodes, int numObs, int numActions) {
    Fsc fsc;
    fsc.numObservations = numObs;
    fsc.initial = 0;
    fsc.gamma.resize(numNodes);
    fsc.delta.resize(numNodes);
    std::uniform_int_distribution<int> anyNode(0, numNodes - 1);
    std::uniform_int_distribution<int> anyAction(0, numActions - 1);
    std::uniform_int_distribution<int> kind(0, 5);
    for (int n = 0; n < numNodes; ++n) {
        fsc.gamma[n].resize(numObs);
        fsc.delta[n].resize(numObs);
        for (int z = 0; z < numObs; ++z) {
            int k = kind(rng);
            if (k <= 2)
                fsc.gamma[n][z] = OutputSymbol::diracAction(anyAction(rng));
            else if (k == 3)
                fsc.gamma[n][z] = OutputSymbol::dontKnow(0);
            else
                fsc.gamma[n][z] = OutputSymbol::dontCare();
            fsc.delta[n][z] = anyNode(rng);
        }
    }
    return fsc;
}

}  // namespace fscd::testing
