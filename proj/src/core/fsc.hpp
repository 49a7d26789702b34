#pragma once

#include <string>
#include <vector>

#include "pomdp.hpp"

namespace fscd {

/// Output of an FSC transition: an action distribution, a "don't-know"
/// chi symbol deferring to cut-off strategy i, or the "don't-care" symbol.
struct OutputSymbol {
    enum class Kind { Action, Chi, DontCare };

    Kind kind = Kind::DontCare;
    Distribution dist;  // only for Kind::Action
    int chi = -1;       // only for Kind::Chi

    static OutputSymbol action(Distribution d) {
        OutputSymbol s;
        s.kind = Kind::Action;
        s.dist = std::move(d);
        return s;
    }
    static OutputSymbol diracAction(int actionId) { return action(Distribution::dirac(actionId)); }
    static OutputSymbol dontKnow(int strategyId) {
        OutputSymbol s;
        s.kind = Kind::Chi;
        s.chi = strategyId;
        return s;
    }
    static OutputSymbol dontCare() { return OutputSymbol{}; }

    bool isAction() const { return kind == Kind::Action; }
    bool isChi() const { return kind == Kind::Chi; }
    bool isDontCare() const { return kind == Kind::DontCare; }

    bool equals(const OutputSymbol& other, double tol = kProbTolerance) const {
        if (kind != other.kind) return false;
        switch (kind) {
            case Kind::Action: return dist.equals(other.dist, tol);
            case Kind::Chi: return chi == other.chi;
            case Kind::DontCare: return true;
        }
        return false;
    }
};

/// Finite-state controller: a Mealy machine from observations to output
/// symbols. gamma and delta are total on nodes x observations.
struct Fsc {
    int numObservations = 0;
    int initial = 0;
    std::vector<std::vector<OutputSymbol>> gamma;  // [node][observation]
    std::vector<std::vector<int>> delta;           // [node][observation]

    int numNodes() const { return static_cast<int>(gamma.size()); }

    /// Walks delta on all but the last symbol, returns gamma at the last step.
    OutputSymbol run(const ObservationSequence& seq) const;

    /// True when every output is an action distribution.
    bool isApplicable() const;
};

/// Heuristic 1: replace each chi output on observation o by the empirical
/// action distribution #(o,a)/#(o) over the FSC's concrete outputs on o.
/// Chi is kept where #(o) = 0. Nodes and transitions are unchanged.
Fsc applyH1(const Fsc& fsc);

/// Base mode: compose the FSC with its cut-off strategies. Each strategy i
/// referenced by some chi_i gains one absorbing node playing the strategy's
/// policy; chi_i transitions emit the policy's distribution and enter it.
Fsc applyBase(const Fsc& fsc, const std::vector<CutoffStrategy>& cutoffs,
              const Pomdp& pomdp);

/// Replace each don't-care output by the lexicographically first enabled
/// action of the observation, making the FSC executable everywhere.
Fsc resolveDontCare(const Fsc& fsc, const Pomdp& pomdp);

std::string renderOutput(const OutputSymbol& symbol, const Pomdp& pomdp);
OutputSymbol parseOutput(const std::string& text, const Pomdp& pomdp);
std::string exportDot(const Fsc& fsc, const Pomdp& pomdp);
std::string fscToJson(const Fsc& fsc, const Pomdp& pomdp);
Fsc fscFromJson(const std::string& text, const Pomdp& pomdp);

}  // namespace fscd
