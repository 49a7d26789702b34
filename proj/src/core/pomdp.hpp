#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "distribution.hpp"

namespace fscd {

using ObservationSequence = std::vector<int>;

enum class ObjectiveKind { MaxProb, MinProb, MaxReward, MinReward };

inline bool isRewardObjective(ObjectiveKind k) {
    return k == ObjectiveKind::MaxReward || k == ObjectiveKind::MinReward;
}
inline bool isMaximizing(ObjectiveKind k) {
    return k == ObjectiveKind::MaxProb || k == ObjectiveKind::MaxReward;
}

struct Objective {
    ObjectiveKind kind = ObjectiveKind::MaxProb;
    std::set<int> targetStates;  // expanded to state ids at construction
    std::string label;           // as written in config, e.g. "g"
};

/// A memoryless strategy on the POMDP, given per observation. Used both for
/// belief cut-offs and for evaluating standalone observation policies.
struct CutoffStrategy {
    int id = 0;
    std::vector<Distribution> policyByObservation;  // indexed by observation id, over action ids
};

/// Finite-state POMDP. Immutable after construction; indices are dense and
/// stable so the rest of the toolkit works on ints and resolves names only at
/// the I/O boundary.
class Pomdp {
public:
    struct TransitionKey {
        int state;
        int action;
        bool operator<(const TransitionKey& o) const {
            return state != o.state ? state < o.state : action < o.action;
        }
    };

    Pomdp(std::vector<std::string> stateNames,
          std::vector<std::string> actionNames,
          std::vector<std::string> observationNames,
          std::vector<int> obsOfState,
          std::map<TransitionKey, Distribution> transitions,
          int initialState,
          std::set<int> targetStates,
          std::map<TransitionKey, double> rewards,
          bool hasRewardBlock,
          std::vector<CutoffStrategy> extraCutoffs);

    int numStates() const { return static_cast<int>(stateNames_.size()); }
    int numActions() const { return static_cast<int>(actionNames_.size()); }
    int numObservations() const { return static_cast<int>(observationNames_.size()); }

    const std::string& stateName(int s) const { return stateNames_.at(s); }
    const std::string& actionName(int a) const { return actionNames_.at(a); }
    const std::string& observationName(int z) const { return observationNames_.at(z); }

    int stateIndex(const std::string& name) const;
    int actionIndex(const std::string& name) const;
    int observationIndex(const std::string& name) const;  // -1 if unknown

    int observationOf(int state) const { return obsOfState_.at(state); }
    int initialState() const { return initialState_; }
    const std::set<int>& targetStates() const { return targetStates_; }
    bool isTarget(int state) const { return targetStates_.count(state) > 0; }

    /// Enabled actions of a state, in global action-index order.
    const std::vector<int>& enabledActions(int state) const { return enabledByState_.at(state); }
    /// Enabled actions shared by all states with this observation.
    const std::vector<int>& enabledActionsOfObservation(int z) const {
        return enabledByObservation_.at(z);
    }
    bool isEnabled(int state, int action) const;

    const Distribution& transition(int state, int action) const;

    /// Reward of a state-action pair. Defaults to 1 per action when the model
    /// carries no reward block (step counting).
    double reward(int state, int action) const;
    bool hasRewardBlock() const { return hasRewardBlock_; }

    /// Additional memoryless strategies bundled with the model, usable as
    /// belief cut-off strategies (id 0 is always the uniform default).
    const std::vector<CutoffStrategy>& extraCutoffStrategies() const { return extraCutoffs_; }

    /// Resolve a target label (state id or observation name) to a state set.
    std::set<int> expandTargetLabel(const std::string& label) const;

    Objective makeObjective(ObjectiveKind kind, const std::string& label) const;

    ObservationSequence observationOfPath(const std::vector<int>& states,
                                          const std::vector<int>& actions) const;

private:
    void validate() const;

    std::vector<std::string> stateNames_;
    std::vector<std::string> actionNames_;
    std::vector<std::string> observationNames_;
    std::vector<int> obsOfState_;
    std::map<TransitionKey, Distribution> transitions_;
    int initialState_;
    std::set<int> targetStates_;
    std::map<TransitionKey, double> rewards_;
    bool hasRewardBlock_;
    std::vector<CutoffStrategy> extraCutoffs_;

    std::vector<std::vector<int>> enabledByState_;
    std::vector<std::vector<int>> enabledByObservation_;
    std::map<std::string, int> stateIndex_;
    std::map<std::string, int> actionIndex_;
    std::map<std::string, int> observationIndex_;
};

Pomdp parseModel(const std::string& jsonText);
Pomdp parseModelFile(const std::string& path);
std::string serializeModel(const Pomdp& pomdp);

/// Uniform-over-enabled-actions strategy, the default cut-off (id 0).
CutoffStrategy uniformCutoffStrategy(const Pomdp& pomdp);

///// The cut-off strategy list for a model: uniform default followed by any
/// strategies bundled in the model file.
std::vector<CutoffStrategy> cutoffStrategies(const Pomdp& pomdp);

std::string objectiveKindName(ObjectiveKind kind);
Objective parseObjective(const Pomdp& pomdp, const std::string& spec);

}  // namespace fscd
