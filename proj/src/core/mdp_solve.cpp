#include "mdp_solve.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fscd {

namespace {

// States from which some strategy stays among non-terminal states forever,
// surely. Greatest fixpoint of "has a choice whose support stays in the set".
std::vector<char> sureAvoidSet(const ExplicitMdp& mdp) {
    std::vector<char> in(mdp.numStates(), 0);
    for (int s = 0; s < mdp.numStates(); ++s) in[s] = !mdp.isTerminal(s);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s = 0; s < mdp.numStates(); ++s) {
            if (!in[s]) continue;
            bool keep = false;
            for (const auto& c : mdp.choices[s]) {
                bool inside = true;
                for (const auto& [succ, p] : c.successors) {
                    (void)p;
                    if (!in[succ]) { inside = false; break; }
                }
                if (inside) { keep = true; break; }
            }
            if (!keep) { in[s] = 0; changed = true; }
        }
    }
    return in;
}

// Forward reachability from s0 over all choices.
std::vector<char> reachableFrom(const ExplicitMdp& mdp, const std::vector<char>& seed) {
    // returns states that can reach the seed set via some path
    std::vector<std::vector<int>> preds(mdp.numStates());
    for (int s = 0; s < mdp.numStates(); ++s)
        for (const auto& c : mdp.choices[s])
            for (const auto& [succ, p] : c.successors) {
                (void)p;
                preds[succ].push_back(s);
            }
    std::vector<char> can(mdp.numStates(), 0);
    std::deque<int> queue;
    for (int s = 0; s < mdp.numStates(); ++s)
        if (seed[s]) { can[s] = 1; queue.push_back(s); }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : preds[s])
            if (!can[p]) { can[p] = 1; queue.push_back(p); }
    }
    return can;
}

// Prob1E: states with a strategy reaching a terminal almost surely.
std::vector<char> almostSureReachSet(const ExplicitMdp& mdp) {
    int n = mdp.numStates();
    std::vector<char> region(n, 1);
    while (true) {
        // states that can reach a terminal while staying inside the region
        std::vector<char> reach(n, 0);
        for (int s = 0; s < n; ++s) reach[s] = mdp.isTerminal(s) && region[s];
        bool grew = true;
        while (grew) {
            grew = false;
            for (int s = 0; s < n; ++s) {
                if (reach[s] || !region[s] || mdp.isTerminal(s)) continue;
                for (const auto& c : mdp.choices[s]) {
                    bool inside = true, touches = false;
                    for (const auto& [succ, p] : c.successors) {
                        (void)p;
                        if (!region[succ]) inside = false;
                        if (reach[succ]) touches = true;
                    }
                    if (inside && touches) { reach[s] = 1; grew = true; break; }
                }
            }
        }
        if (reach == region) return region;
        region = reach;
    }
}

}  // namespace

MdpSolution solveMdp(const ExplicitMdp& mdp, ObjectiveKind kind, double tolerance,
                     int maxIterations) {
    const int n = mdp.numStates();
    const bool reward = isRewardObjective(kind);
    const bool maximize = isMaximizing(kind);

    std::vector<double> value(n, 0.0);
    std::vector<char> infinite(n, 0);
    // choiceAllowed restricts min-reward iteration to the almost-sure region.
    std::vector<std::vector<char>> allowed(n);
    for (int s = 0; s < n; ++s) allowed[s].assign(mdp.choices[s].size(), 1);

    for (int s = 0; s < n; ++s)
        if (mdp.isTerminal(s)) value[s] = mdp.terminalValue[s];

    if (reward) {
        for (int s = 0; s < n; ++s)
            if (mdp.isTerminal(s) && std::isinf(mdp.terminalValue[s])) infinite[s] = 1;
        if (kind == ObjectiveKind::MinReward) {
            // Terminals with infinite value do not count as safe havens.
            ExplicitMdp masked = mdp;
            for (int s = 0; s < n; ++s)
                if (infinite[s]) {
                    masked.terminalValue[s] = std::nan("");
                    masked.choices[s].clear();
                }
            auto region = almostSureReachSet(masked);
            for (int s = 0; s < n; ++s) {
                if (mdp.isTerminal(s)) continue;
                if (!region[s]) { infinite[s] = 1; continue; }
                for (size_t c = 0; c < mdp.choices[s].size(); ++c)
                    for (const auto& [succ, p] : mdp.choices[s][c].successors) {
                        (void)p;
                        if (!region[succ]) { allowed[s][c] = 0; break; }
                    }
            }
        } else {
            auto avoid = sureAvoidSet(mdp);
            auto canAvoid = reachableFrom(mdp, avoid);
            std::vector<char> infTerminals(n, 0);
            for (int s = 0; s < n; ++s) infTerminals[s] = infinite[s];
            auto canHitInf = reachableFrom(mdp, infTerminals);
            for (int s = 0; s < n; ++s)
                if (!mdp.isTerminal(s) && (canAvoid[s] || canHitInf[s])) infinite[s] = 1;
        }
        for (int s = 0; s < n; ++s)
            if (infinite[s]) value[s] = kInf;
    }

    auto qValue = [&](int s, const ExplicitMdp::Choice& c) {
        double q = reward ? c.reward : 0.0;
        for (const auto& [succ, p] : c.successors) q += p * value[succ];
        return q;
    };

    // Gauss-Seidel sweeps, absolute-difference stop. Converge well below the
    // requested tolerance: strategy extraction below compares Q-values against
    // the state value at `tolerance` resolution, and the residual iteration
    // error must not blur that comparison (a self-loop's Q equals the state
    // value exactly, so it would otherwise beat the truly optimal action).
    const double stop = tolerance * 1e-4;
    for (int iter = 0; iter < maxIterations; ++iter) {
        double maxDiff = 0.0;
        for (int s = 0; s < n; ++s) {
            if (mdp.isTerminal(s) || infinite[s]) continue;
            double best = maximize ? -kInf : kInf;
            for (size_t c = 0; c < mdp.choices[s].size(); ++c) {
                if (!allowed[s][c]) continue;
                double q = qValue(s, mdp.choices[s][c]);
                best = maximize ? std::max(best, q) : std::min(best, q);
            }
            if (std::isinf(best) && maximize) best = value[s];  // no choice at all
            maxDiff = std::max(maxDiff, std::abs(best - value[s]));
            value[s] = best;
        }
        if (maxDiff < stop) break;
    }

    // Strategy extraction. Among value-optimal choices, prefer choices on a
    // shortest path to a terminal inside the optimal-action subgraph; argmax
    // alone may pick a choice that cycles forever without realizing the value.
    const double tieTol = tolerance;
    std::vector<std::vector<char>> optimal(n);
    for (int s = 0; s < n; ++s) {
        optimal[s].assign(mdp.choices[s].size(), 0);
        if (mdp.isTerminal(s) || infinite[s]) continue;
        for (size_t c = 0; c < mdp.choices[s].size(); ++c) {
            if (!allowed[s][c]) continue;
            if (std::abs(qValue(s, mdp.choices[s][c]) - value[s]) <= tieTol) optimal[s][c] = 1;
        }
    }

    const int kUnreached = n + 1;
    std::vector<int> dist(n, kUnreached);
    std::deque<int> queue;
    for (int s = 0; s < n; ++s)
        if (mdp.isTerminal(s)) { dist[s] = 0; queue.push_back(s); }
    std::vector<std::vector<int>> preds(n);
    for (int s = 0; s < n; ++s)
        for (size_t c = 0; c < mdp.choices[s].size(); ++c) {
            if (!optimal[s][c]) continue;
            for (const auto& [succ, p] : mdp.choices[s][c].successors) {
                (void)p;
                preds[succ].push_back(s);
            }
        }
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop_front();
        for (int p : preds[s])
            if (dist[p] == kUnreached) { dist[p] = dist[s] + 1; queue.push_back(p); }
    }

    MdpSolution solution;
    solution.value = std::move(value);
    solution.choice.assign(n, -1);
    for (int s = 0; s < n; ++s) {
        if (mdp.isTerminal(s)) continue;
        int bestChoice = -1;
        int bestSuccDist = kUnreached + 1;
        for (size_t c = 0; c < mdp.choices[s].size(); ++c) {
            bool eligible = infinite[s] ? allowed[s][c] != 0 : optimal[s][c] != 0;
            if (!eligible) continue;
            int succDist = kUnreached;
            for (const auto& [succ, p] : mdp.choices[s][c].successors) {
                (void)p;
                succDist = std::min(succDist, dist[succ]);
            }
            if (bestChoice < 0 || succDist < bestSuccDist) {
                bestChoice = static_cast<int>(c);
                bestSuccDist = succDist;
            }
        }
        if (bestChoice < 0 && !mdp.choices[s].empty()) bestChoice = 0;
        solution.choice[s] = bestChoice;
    }
    return solution;
}

}  // namespace fscd
