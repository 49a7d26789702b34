#pragma once

#include <optional>
#include <vector>

#include "belief.hpp"
#include "fsc.hpp"
#include "pomdp.hpp"

namespace fscd {

/// Explicit map from observation sequences to outputs. Sequences absent from
/// the table answer "don't care".
struct StrategyTable {
    std::vector<std::pair<ObservationSequence, OutputSymbol>> rows;

    const OutputSymbol* find(const ObservationSequence& seq) const;
};

StrategyTable parseStrategyTable(const std::string& csvText, const Pomdp& pomdp);
StrategyTable parseStrategyTableFile(const std::string& path, const Pomdp& pomdp);
std::string serializeStrategyTable(const StrategyTable& table, const Pomdp& pomdp);

/// Whether equivalence queries require the hypothesis to reproduce
/// "don't know" rows (base mode) or skip them (heuristic modes).
enum class ChiPolicy { Require, Skip };

/// Output and equivalence queries against a fixed strategy source. Pure:
/// identical queries always return identical results.
class Teacher {
public:
    virtual ~Teacher() = default;
    virtual int numObservations() const = 0;
    virtual OutputSymbol outputQuery(const ObservationSequence& seq) const = 0;
    /// Counterexample sequence on which the hypothesis disagrees, or nullopt.
    virtual std::optional<ObservationSequence> equivalenceQuery(const Fsc& fsc) const = 0;
};

class TableTeacher final : public Teacher {
public:
    TableTeacher(const Pomdp& pomdp, StrategyTable table, ChiPolicy chiPolicy = ChiPolicy::Require);

    int numObservations() const override;
    OutputSymbol outputQuery(const ObservationSequence& seq) const override;
    std::optional<ObservationSequence> equivalenceQuery(const Fsc& fsc) const override;

    bool isRealizable(const ObservationSequence& seq) const;

private:
    const Pomdp& pomdp_;
    StrategyTable table_;
    ChiPolicy chiPolicy_;
    std::vector<int> rowOrder_;  // table rows sorted shortest-then-lexicographic
};

class BeliefTeacher final : public Teacher {
public:
    BeliefTeacher(const Pomdp& pomdp, const BeliefMdp& bmdp, const BeliefStrategy& strategy);

    int numObservations() const override;
    OutputSymbol outputQuery(const ObservationSequence& seq) const override;
    std::optional<ObservationSequence> equivalenceQuery(const Fsc& fsc) const override;

private:
    const Pomdp& pomdp_;
    const BeliefMdp& bmdp_;
    const BeliefStrategy& strategy_;
    std::vector<ObservationSequence> representatives_;  // by belief index
};

/// Materialize the belief teacher's answers on every realizable sequence up to
/// the given depth as an explicit strategy table (don't-care rows omitted).
StrategyTable materializeTable(const Teacher& teacher, const Pomdp& pomdp, int maxDepth);

}  // namespace fscd
