#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "fsc.hpp"
#include "mdp_solve.hpp"
#include "pomdp.hpp"

namespace fscd {

/// The Markov chain an applicable FSC induces on a POMDP: reachable product
/// states (POMDP state, FSC node) in BFS order.
struct InducedMc {
    std::vector<std::pair<int, int>> states;  // (pomdp state, fsc node)
    std::vector<std::vector<std::pair<int, double>>> transitions;
    std::vector<double> rewards;  // expected one-step reward per product state
    std::vector<char> target;
    int initial = 0;

    int numStates() const { return static_cast<int>(states.size()); }
};

struct ValueReport {
    Objective objective;
    double value = 0.0;  // may be +inf
    int mcStates = 0;
    int fscNodes = 0;
    std::chrono::duration<double> wallTime{0};
};

enum class McSolveMethod { Auto, GaussianElimination, ValueIteration };

InducedMc induceMc(const Pomdp& pomdp, const Fsc& fsc);

/// Per-state objective values of a Markov chain. Probability objectives give
/// the probability of reaching a target; reward objectives the expected total
/// reward until a target, +inf where the target is not reached almost surely.
std::vector<double> mcStateValues(const InducedMc& mc, ObjectiveKind kind,
                                  McSolveMethod method = McSolveMethod::Auto,
                                  double tolerance = 1e-8);

ValueReport value(const InducedMc& mc, const Pomdp& pomdp, const Objective& objective,
                  int fscNodes, McSolveMethod method = McSolveMethod::Auto);

/// Objective values of the Markov chain a memoryless observation policy
/// induces on the POMDP, for every POMDP state.
std::vector<double> policyValues(const Pomdp& pomdp, const CutoffStrategy& policy,
                                 const Objective& objective);

struct SimulationEstimate {
    double targetFrequency = 0.0;
    double targetStdError = 0.0;
    double meanReward = 0.0;
    double rewardStdError = 0.0;
    std::uint64_t episodes = 0;
};

SimulationEstimate simulate(const InducedMc& mc, std::uint64_t seed, std::uint64_t episodes,
                            int horizon);

std::string reportToJson(const ValueReport& report, const std::string& heuristic);
std::string reportTableLine(const ValueReport& report, const std::string& heuristic);

}  // namespace fscd
