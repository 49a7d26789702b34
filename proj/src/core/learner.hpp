#pragma once

#include <map>
#include <optional>
#include <vector>

#include "fsc.hpp"
#include "teacher.hpp"

namespace fscd {

/// L*-style observation table over output symbols. Upper rows are
/// prefix-closed, columns suffix-closed and non-empty; entries come from
/// output queries and are cached, so refills after growth are incremental.
class LearningTable {
public:
    explicit LearningTable(const Teacher& teacher);

    const std::vector<ObservationSequence>& upperRows() const { return upperRows_; }
    const std::vector<ObservationSequence>& columns() const { return columns_; }

    OutputSymbol entry(const ObservationSequence& row, const ObservationSequence& column) const;

    /// Lower row without an equivalent upper row, or nullopt when closed.
    std::optional<ObservationSequence> closednessWitness() const;

    struct ConsistencyWitness {
        ObservationSequence r1, r2;
        int observation;
        ObservationSequence column;  // first column distinguishing r1·z from r2·z
    };
    std::optional<ConsistencyWitness> consistencyWitness() const;

    bool isClosed() const { return !closednessWitness().has_value(); }
    bool isConsistent() const { return !consistencyWitness().has_value(); }

    /// Promote witness lower rows / add distinguishing columns to fixpoint.
    void makeClosedAndConsistent();

    /// FSC over the equivalence classes of the upper rows. Requires the table
    /// to be closed and consistent.
    Fsc extractFsc() const;

    /// Absorb a counterexample: add all its non-empty suffixes as columns.
    void processCounterexample(const ObservationSequence& c);

    void addUpperRow(const ObservationSequence& row);  // also adds missing prefixes
    void addColumn(const ObservationSequence& column);  // also adds missing suffixes

private:
    bool rowsEquivalent(const ObservationSequence& a, const ObservationSequence& b) const;
    bool hasUpperRow(const ObservationSequence& row) const;
    bool hasColumn(const ObservationSequence& column) const;

    const Teacher& teacher_;
    std::vector<ObservationSequence> upperRows_;  // insertion order, prefix-closed
    std::vector<ObservationSequence> columns_;    // insertion order, suffix-closed
    mutable std::map<ObservationSequence, OutputSymbol> cache_;
};

/// The learning loop: init, repair, extract, equivalence query, absorb, until
/// the teacher accepts. Throws when roundCap rounds pass without acceptance.
Fsc learn(const Teacher& teacher, int roundCap = 100000);

/// Greedy merging of don't-care-compatible nodes: two nodes merge when a
/// simultaneous walk from them never reaches two differing concrete outputs.
/// Output on every sequence with a concrete pre-merge output is preserved.
Fsc minimize(const Fsc& fsc);

/// Exhaustive-search minimization over node partitions; exponential, intended
/// as a small-instance oracle for the greedy pass.
Fsc minimizeExact(const Fsc& fsc);

/// Heuristic 2: turn every don't-know output into don't-care, then minimize.
Fsc applyH2(const Fsc& fsc);

}  // namespace fscd
