#pragma once

#include <optional>
#include <vector>

#include "pomdp.hpp"

namespace fscd {

/// A belief: distribution over POMDP states, all sharing one observation.
/// The initial belief carries the initial state's observation.
struct Belief {
    Distribution distribution;
    int observation = -1;
};

/// Finite fragment of the belief MDP. Explored beliefs carry edges for every
/// enabled action of their observation; cut-off beliefs carry none.
struct BeliefMdp {
    struct Edge {
        int observation;
        double probability;
        int successor;
    };

    std::vector<Belief> nodes;
    // edges[node][k] lists the outcomes of the k-th enabled action of the
    // node's observation, ordered by observation index.
    std::vector<std::vector<std::vector<Edge>>> edges;
    std::vector<char> cutoff;
    std::vector<int> cutoffStrategy;  // strategy id for cut-offs, -1 otherwise
    std::vector<int> depth;
    int initial = 0;

    int numNodes() const { return static_cast<int>(nodes.size()); }
    int numCutoffs() const;
};

/// Bayes successor of belief b under action a and observation z; nullopt when
/// z has probability 0.
std::optional<Belief> beliefUpdate(const Pomdp& pomdp, const Belief& b, int action,
                                   int observation);

/// BFS exploration of the reachable belief space. A belief is cut off when
/// expanding it would exceed maxBeliefs nodes or its depth reaches maxDepth.
BeliefMdp explore(const Pomdp& pomdp, int maxBeliefs, int maxDepth, int cutoffStrategyId = 0);

struct BeliefStrategy {
    std::vector<int> choice;    // action id per explored belief; -1 for cut-offs
    std::vector<int> chi;       // cut-off strategy id per cut-off belief; -1 otherwise
    std::vector<char> target;   // belief's support lies inside the target set
    std::vector<double> values;
    double value = 0.0;         // at the initial belief
};

/// Solve the explored fragment for the objective. Cut-off beliefs take the
/// value of running their cut-off strategy from the belief on the POMDP.
BeliefStrategy solve(const BeliefMdp& bmdp, const Pomdp& pomdp, const Objective& objective,
                     const std::vector<CutoffStrategy>& cutoffs, double tolerance = 1e-8);

/// Observation sequence of a shortest path from the initial belief to b,
/// following the strategy's choices where the belief is reachable under them,
/// otherwise any enabled action; ties resolved lexicographically.
ObservationSequence representativeSequence(const BeliefMdp& bmdp, const Pomdp& pomdp,
                                           const BeliefStrategy& strategy, int beliefId);

/// True when the belief is reachable from the initial belief following only
/// the strategy's choices.
std::vector<char> strategyReachable(const BeliefMdp& bmdp, const Pomdp& pomdp,
                                    const BeliefStrategy& strategy);

}  // namespace fscd
