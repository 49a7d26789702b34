#pragma once

#include <limits>
#include <vector>

#include "pomdp.hpp"

namespace fscd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Explicit finite MDP with optional per-state terminal values. Terminal
/// states contribute their fixed value and are never left.
struct ExplicitMdp {
    struct Choice {
        int label = 0;  // caller-defined action label
        double reward = 0.0;
        std::vector<std::pair<int, double>> successors;
    };
    std::vector<std::vector<Choice>> choices;  // per state; empty for terminals
    std::vector<double> terminalValue;         // NaN for non-terminal states
    int initial = 0;

    int numStates() const { return static_cast<int>(choices.size()); }
    bool isTerminal(int s) const { return !std::isnan(terminalValue[s]); }
};

struct MdpSolution {
    std::vector<double> value;   // may contain +inf for reward objectives
    std::vector<int> choice;     // index into choices[s]; -1 for terminals
};

/// Optimal values and a value-attaining deterministic strategy.
///
/// Probability objectives expect terminal values in [0,1] (targets = 1).
/// Reward objectives accumulate choice rewards until a terminal is reached;
/// +inf is returned where the objective diverges (min: no strategy reaches a
/// terminal almost surely; max: some strategy avoids the terminals with
/// positive probability).
///
/// Ties between value-optimal actions are broken toward actions that lie on a
/// shortest path to a terminal within the optimal-action subgraph, then by
/// lowest choice index. Plain argmax over converged values may select actions
/// that cycle forever and never realize the value.
MdpSolution solveMdp(const ExplicitMdp& mdp, ObjectiveKind kind, double tolerance = 1e-8,
                     int maxIterations = 1000000);

}  // namespace fscd
