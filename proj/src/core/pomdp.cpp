#include "pomdp.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fscd {

using nlohmann::json;

Pomdp::Pomdp(std::vector<std::string> stateNames,
             std::vector<std::string> actionNames,
             std::vector<std::string> observationNames,
             std::vector<int> obsOfState,
             std::map<TransitionKey, Distribution> transitions,
             int initialState,
             std::set<int> targetStates,
             std::map<TransitionKey, double> rewards,
             bool hasRewardBlock,
             std::vector<CutoffStrategy> extraCutoffs)
    : stateNames_(std::move(stateNames)),
      actionNames_(std::move(actionNames)),
      observationNames_(std::move(observationNames)),
      obsOfState_(std::move(obsOfState)),
      transitions_(std::move(transitions)),
      initialState_(initialState),
      targetStates_(std::move(targetStates)),
      rewards_(std::move(rewards)),
      hasRewardBlock_(hasRewardBlock),
      extraCutoffs_(std::move(extraCutoffs)) {
    for (int i = 0; i < numStates(); ++i) stateIndex_[stateNames_[i]] = i;
    for (int i = 0; i < numActions(); ++i) actionIndex_[actionNames_[i]] = i;
    for (int i = 0; i < numObservations(); ++i) observationIndex_[observationNames_[i]] = i;

    enabledByState_.resize(numStates());
    for (const auto& [key, dist] : transitions_) {
        (void)dist;
        enabledByState_[key.state].push_back(key.action);
    }
    enabledByObservation_.assign(numObservations(), {});
    for (int s = 0; s < numStates(); ++s) {
        int z = obsOfState_[s];
        if (enabledByObservation_[z].empty()) enabledByObservation_[z] = enabledByState_[s];
    }
    validate();
}

void Pomdp::validate() const {
    if (stateNames_.empty()) throw ValidationError("model has no states");
    if (initialState_ < 0 || initialState_ >= numStates())
        throw ValidationError("dangling id: initial state");
    for (int s = 0; s < numStates(); ++s) {
        if (obsOfState_[s] < 0 || obsOfState_[s] >= numObservations())
            throw ValidationError("dangling id: observation of state " + stateNames_[s]);
        if (enabledByState_[s].empty())
            throw ValidationError("state " + stateNames_[s] + " has no enabled action");
    }
    for (const auto& [key, dist] : transitions_) {
        for (const auto& [succ, p] : dist.support()) {
            (void)p;
            if (succ < 0 || succ >= numStates())
                throw ValidationError("dangling id: successor state in transition from " +
                                      stateNames_[key.state]);
        }
    }
    // States sharing an observation must share their enabled action set.
    for (int s = 0; s < numStates(); ++s) {
        if (enabledByState_[s] != enabledByObservation_[obsOfState_[s]])
            throw ValidationError("observation action-consistency violated: states with observation " +
                                  observationNames_[obsOfState_[s]] +
                                  " have different enabled actions");
    }
    for (const auto& [key, value] : rewards_) {
        if (value < 0.0) throw ValidationError("negative reward");
        if (!isEnabled(key.state, key.action))
            throw ValidationError("reward on disabled state-action pair");
    }
    for (int t : targetStates_)
        if (t < 0 || t >= numStates()) throw ValidationError("dangling id: target state");
    if (targetStates_.empty()) throw ValidationError("target set is empty");
    for (const auto& cs : extraCutoffs_) {
        if (static_cast<int>(cs.policyByObservation.size()) != numObservations())
            throw ValidationError("cutoff strategy does not cover all observations");
        for (int z = 0; z < numObservations(); ++z)
            for (const auto& [a, p] : cs.policyByObservation[z].support()) {
                (void)p;
                const auto& enabled = enabledByObservation_[z];
                if (std::find(enabled.begin(), enabled.end(), a) == enabled.end())
                    throw ValidationError("cutoff strategy uses disabled action for observation " +
                                          observationNames_[z]);
            }
    }
}

int Pomdp::stateIndex(const std::string& name) const {
    auto it = stateIndex_.find(name);
    if (it == stateIndex_.end()) throw ValidationError("dangling id: unknown state " + name);
    return it->second;
}

int Pomdp::actionIndex(const std::string& name) const {
    auto it = actionIndex_.find(name);
    if (it == actionIndex_.end()) throw ValidationError("dangling id: unknown action " + name);
    return it->second;
}

int Pomdp::observationIndex(const std::string& name) const {
    auto it = observationIndex_.find(name);
    return it == observationIndex_.end() ? -1 : it->second;
}

bool Pomdp::isEnabled(int state, int action) const {
    return transitions_.count({state, action}) > 0;
}

const Distribution& Pomdp::transition(int state, int action) const {
    auto it = transitions_.find({state, action});
    if (it == transitions_.end())
        throw ValidationError("no transition for state " + stateNames_.at(state) + ", action " +
                              actionNames_.at(action));
    return it->second;
}

double Pomdp::reward(int state, int action) const {
    if (!hasRewardBlock_) return 1.0;
    auto it = rewards_.find({state, action});
    return it == rewards_.end() ? 0.0 : it->second;
}

std::set<int> Pomdp::expandTargetLabel(const std::string& label) const {
    std::set<int> result;
    int z = observationIndex(label);
    if (z >= 0) {
        for (int s = 0; s < numStates(); ++s)
            if (obsOfState_[s] == z) result.insert(s);
        return result;
    }
    auto it = stateIndex_.find(label);
    if (it != stateIndex_.end()) {
        result.insert(it->second);
        return result;
    }
    throw ValidationError("dangling id: target label " + label +
                          " is neither a state nor an observation");
}

Objective Pomdp::makeObjective(ObjectiveKind kind, const std::string& label) const {
    Objective obj;
    obj.kind = kind;
    obj.label = label;
    obj.targetStates = expandTargetLabel(label);
    return obj;
}

ObservationSequence Pomdp::observationOfPath(const std::vector<int>& states,
                                             const std::vector<int>& actions) const {
    if (states.empty()) throw ValidationError("empty path");
    if (actions.size() + 1 != states.size())
        throw ValidationError("invalid path: expected one action between consecutive states");
    for (size_t i = 0; i < actions.size(); ++i) {
        if (!isEnabled(states[i], actions[i]))
            throw ValidationError("invalid path: action " + actionNames_.at(actions[i]) +
                                  " disabled in state " + stateNames_.at(states[i]));
        if (transition(states[i], actions[i]).probabilityOf(states[i + 1]) <= 0.0)
            throw ValidationError("invalid path: successor " + stateNames_.at(states[i + 1]) +
                                  " has probability 0");
    }
    ObservationSequence seq;
    seq.reserve(states.size());
    for (int s : states) seq.push_back(observationOf(s));
    return seq;
}

namespace {

Distribution parseActionDistribution(const Pomdp* /*unused*/, const json& entries,
                                     const std::map<std::string, int>& actionIdx) {
    std::vector<std::pair<int, double>> support;
    for (const auto& [name, prob] : entries.items()) {
        auto it = actionIdx.find(name);
        if (it == actionIdx.end()) throw ValidationError("dangling id: unknown action " + name);
        support.emplace_back(it->second, prob.get<double>());
    }
    return Distribution(std::move(support));
}

}  // namespace

Pomdp parseModel(const std::string& jsonText) {
    json doc;
    try {
        doc = json::parse(jsonText);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
    try {
        std::vector<std::string> stateNames;
        std::vector<std::string> obsNames;
        std::map<std::string, int> obsIdx;
        std::vector<int> obsOfState;
        for (const auto& st : doc.at("states")) {
            stateNames.push_back(st.at("id").get<std::string>());
            std::string obs = st.at("observation").get<std::string>();
            auto [it, inserted] = obsIdx.try_emplace(obs, static_cast<int>(obsNames.size()));
            if (inserted) obsNames.push_back(obs);
            obsOfState.push_back(it->second);
        }
        std::map<std::string, int> stateIdx;
        for (size_t i = 0; i < stateNames.size(); ++i) {
            if (stateIdx.count(stateNames[i]))
                throw ValidationError("duplicate state id " + stateNames[i]);
            stateIdx[stateNames[i]] = static_cast<int>(i);
        }

        std::vector<std::string> actionNames;
        std::map<std::string, int> actionIdx;
        for (const auto& a : doc.at("actions")) {
            std::string name = a.get<std::string>();
            if (actionIdx.count(name)) throw ValidationError("duplicate action " + name);
            actionIdx[name] = static_cast<int>(actionNames.size());
            actionNames.push_back(name);
        }

        std::map<Pomdp::TransitionKey, Distribution> transitions;
        for (const auto& tr : doc.at("transitions")) {
            std::string from = tr.at("from").get<std::string>();
            std::string action = tr.at("action").get<std::string>();
            auto sIt = stateIdx.find(from);
            if (sIt == stateIdx.end()) throw ValidationError("dangling id: unknown state " + from);
            auto aIt = actionIdx.find(action);
            if (aIt == actionIdx.end())
                throw ValidationError("dangling id: unknown action " + action);
            std::vector<std::pair<int, double>> support;
            for (const auto& succ : tr.at("to")) {
                std::string target = succ.at("state").get<std::string>();
                auto tIt = stateIdx.find(target);
                if (tIt == stateIdx.end())
                    throw ValidationError("dangling id: unknown state " + target);
                support.emplace_back(tIt->second, succ.at("prob").get<double>());
            }
            Pomdp::TransitionKey key{sIt->second, aIt->second};
            if (transitions.count(key))
                throw ValidationError("duplicate transition for " + from + ", " + action);
            try {
                transitions.emplace(key, Distribution(std::move(support)));
            } catch (const ValidationError& e) {
                throw ValidationError(std::string(e.what()) + " (transition from " + from +
                                      " on " + action + ")");
            }
        }

        std::string initial = doc.at("initial").get<std::string>();
        auto initIt = stateIdx.find(initial);
        if (initIt == stateIdx.end())
            throw ValidationError("dangling id: unknown initial state " + initial);

        std::map<Pomdp::TransitionKey, double> rewards;
        bool hasRewards = doc.contains("rewards");
        if (hasRewards) {
            for (const auto& r : doc.at("rewards")) {
                std::string state = r.at("state").get<std::string>();
                std::string action = r.at("action").get<std::string>();
                auto sIt = stateIdx.find(state);
                if (sIt == stateIdx.end())
                    throw ValidationError("dangling id: unknown state " + state);
                auto aIt = actionIdx.find(action);
                if (aIt == actionIdx.end())
                    throw ValidationError("dangling id: unknown action " + action);
                rewards[{sIt->second, aIt->second}] = r.at("value").get<double>();
            }
        }

        std::vector<CutoffStrategy> extraCutoffs;
        if (doc.contains("cutoff_strategies")) {
            int nextId = 1;  // id 0 is the uniform default
            for (const auto& cs : doc.at("cutoff_strategies")) {
                CutoffStrategy strat;
                strat.id = nextId++;
                strat.policyByObservation.resize(obsNames.size());
                std::vector<bool> covered(obsNames.size(), false);
                for (const auto& entry : cs.at("policy")) {
                    std::string obs = entry.at("observation").get<std::string>();
                    auto oIt = obsIdx.find(obs);
                    if (oIt == obsIdx.end())
                        throw ValidationError("dangling id: unknown observation " + obs);
                    strat.policyByObservation[oIt->second] =
                        parseActionDistribution(nullptr, entry.at("actions"), actionIdx);
                    covered[oIt->second] = true;
                }
                for (size_t z = 0; z < obsNames.size(); ++z)
                    if (!covered[z])
                        throw ValidationError("cutoff strategy missing observation " + obsNames[z]);
                extraCutoffs.push_back(std::move(strat));
            }
        }

        // Targets resolve against a throwaway index because Pomdp construction
        // needs the expanded set.
        std::set<int> targets;
        for (const auto& t : doc.at("targets")) {
            std::string label = t.get<std::string>();
            auto oIt = obsIdx.find(label);
            if (oIt != obsIdx.end()) {
                for (size_t s = 0; s < stateNames.size(); ++s)
                    if (obsOfState[s] == oIt->second) targets.insert(static_cast<int>(s));
            } else {
                auto sIt = stateIdx.find(label);
                if (sIt == stateIdx.end())
                    throw ValidationError("dangling id: target label " + label);
                targets.insert(sIt->second);
            }
        }

        return Pomdp(std::move(stateNames), std::move(actionNames), std::move(obsNames),
                     std::move(obsOfState), std::move(transitions), initIt->second,
                     std::move(targets), std::move(rewards), hasRewards, std::move(extraCutoffs));
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
}

Pomdp parseModelFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parseModel(buffer.str());
}

std::string serializeModel(const Pomdp& pomdp) {
    json doc;
    doc["states"] = json::array();
    for (int s = 0; s < pomdp.numStates(); ++s)
        doc["states"].push_back({{"id", pomdp.stateName(s)},
                                 {"observation", pomdp.observationName(pomdp.observationOf(s))}});
    doc["actions"] = json::array();
    for (int a = 0; a < pomdp.numActions(); ++a) doc["actions"].push_back(pomdp.actionName(a));
    doc["transitions"] = json::array();
    for (int s = 0; s < pomdp.numStates(); ++s)
        for (int a : pomdp.enabledActions(s)) {
            json to = json::array();
            for (const auto& [succ, p] : pomdp.transition(s, a).support())
                to.push_back({{"state", pomdp.stateName(succ)}, {"prob", p}});
            doc["transitions"].push_back(
                {{"from", pomdp.stateName(s)}, {"action", pomdp.actionName(a)}, {"to", to}});
        }
    doc["initial"] = pomdp.stateName(pomdp.initialState());
    doc["targets"] = json::array();
    for (int t : pomdp.targetStates()) doc["targets"].push_back(pomdp.stateName(t));
    if (pomdp.hasRewardBlock()) {
        doc["rewards"] = json::array();
        for (int s = 0; s < pomdp.numStates(); ++s)
            for (int a : pomdp.enabledActions(s))
                if (pomdp.reward(s, a) != 0.0)
                    doc["rewards"].push_back({{"state", pomdp.stateName(s)},
                                              {"action", pomdp.actionName(a)},
                                              {"value", pomdp.reward(s, a)}});
    }
    return doc.dump(2);
}

CutoffStrategy uniformCutoffStrategy(const Pomdp& pomdp) {
    CutoffStrategy strat;
    strat.id = 0;
    strat.policyByObservation.reserve(pomdp.numObservations());
    for (int z = 0; z < pomdp.numObservations(); ++z) {
        const auto& enabled = pomdp.enabledActionsOfObservation(z);
        std::vector<std::pair<int, double>> support;
        for (int a : enabled) support.emplace_back(a, 1.0 / enabled.size());
        strat.policyByObservation.emplace_back(std::move(support));
    }
    return strat;
}

std::vector<CutoffStrategy> cutoffStrategies(const Pomdp& pomdp) {
    std::vector<CutoffStrategy> all;
    all.push_back(uniformCutoffStrategy(pomdp));
    for (const auto& cs : pomdp.extraCutoffStrategies()) all.push_back(cs);
    return all;
}

std::string objectiveKindName(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::MaxProb: return "maxprob";
        case ObjectiveKind::MinProb: return "minprob";
        case ObjectiveKind::MaxReward: return "maxreward";
        case ObjectiveKind::MinReward: return "minreward";
    }
    return "?";
}

Objective parseObjective(const Pomdp& pomdp, const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw ParseError("objective must have the form <kind>:<label>, got " + spec);
    std::string kindName = spec.substr(0, colon);
    std::string label = spec.substr(colon + 1);
    ObjectiveKind kind;
    if (kindName == "maxprob") kind = ObjectiveKind::MaxProb;
    else if (kindName == "minprob") kind = ObjectiveKind::MinProb;
    else if (kindName == "maxreward") kind = ObjectiveKind::MaxReward;
    else if (kindName == "minreward") kind = ObjectiveKind::MinReward;
    else throw ParseError("unknown objective kind " + kindName);
    return pomdp.makeObjective(kind, label);
}

}  // namespace fscd
