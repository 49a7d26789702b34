#include "learner.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace fscd {

LearningTable::LearningTable(const Teacher& teacher) : teacher_(teacher) {
    upperRows_.push_back({});
    for (int z = 0; z < teacher.numObservations(); ++z) columns_.push_back({z});
}

OutputSymbol LearningTable::entry(const ObservationSequence& row,
                                  const ObservationSequence& column) const {
    ObservationSequence seq = row;
    seq.insert(seq.end(), column.begin(), column.end());
    auto it = cache_.find(seq);
    if (it != cache_.end()) return it->second;
    OutputSymbol out = teacher_.outputQuery(seq);
    cache_.emplace(std::move(seq), out);
    return out;
}

bool LearningTable::rowsEquivalent(const ObservationSequence& a,
                                   const ObservationSequence& b) const {
    for (const auto& c : columns_)
        if (!entry(a, c).equals(entry(b, c))) return false;
    return true;
}

bool LearningTable::hasUpperRow(const ObservationSequence& row) const {
    return std::find(upperRows_.begin(), upperRows_.end(), row) != upperRows_.end();
}

bool LearningTable::hasColumn(const ObservationSequence& column) const {
    return std::find(columns_.begin(), columns_.end(), column) != columns_.end();
}

std::optional<ObservationSequence> LearningTable::closednessWitness() const {
    for (const auto& r : upperRows_)
        for (int z = 0; z < teacher_.numObservations(); ++z) {
            ObservationSequence lower = r;
            lower.push_back(z);
            if (hasUpperRow(lower)) continue;
            bool matched = false;
            for (const auto& u : upperRows_)
                if (rowsEquivalent(lower, u)) {
                    matched = true;
                    break;
                }
            if (!matched) return lower;
        }
    return std::nullopt;
}

std::optional<LearningTable::ConsistencyWitness> LearningTable::consistencyWitness() const {
    for (size_t i = 0; i < upperRows_.size(); ++i)
        for (size_t j = i + 1; j < upperRows_.size(); ++j) {
            if (!rowsEquivalent(upperRows_[i], upperRows_[j])) continue;
            for (int z = 0; z < teacher_.numObservations(); ++z) {
                ObservationSequence a = upperRows_[i];
                a.push_back(z);
                ObservationSequence b = upperRows_[j];
                b.push_back(z);
                for (const auto& c : columns_)
                    if (!entry(a, c).equals(entry(b, c)))
                        return ConsistencyWitness{upperRows_[i], upperRows_[j], z, c};
            }
        }
    return std::nullopt;
}

void LearningTable::addUpperRow(const ObservationSequence& row) {
    for (size_t len = 0; len <= row.size(); ++len) {
        ObservationSequence prefix(row.begin(), row.begin() + len);
        if (!hasUpperRow(prefix)) upperRows_.push_back(std::move(prefix));
    }
}

void LearningTable::addColumn(const ObservationSequence& column) {
    for (size_t len = 1; len <= column.size(); ++len) {
        ObservationSequence suffix(column.end() - len, column.end());
        if (!hasColumn(suffix)) columns_.push_back(std::move(suffix));
    }
}

void LearningTable::makeClosedAndConsistent() {
    while (true) {
        if (auto lower = closednessWitness()) {
            addUpperRow(*lower);
            continue;
        }
        if (auto w = consistencyWitness()) {
            ObservationSequence column{w->observation};
            column.insert(column.end(), w->column.begin(), w->column.end());
            addColumn(column);
            continue;
        }
        break;
    }
}

Fsc LearningTable::extractFsc() const {
    if (closednessWitness() || consistencyWitness())
        throw ValidationError("cannot extract a controller from a table that is not closed and consistent");

    // class representatives in discovery order; epsilon is always class 0
    std::vector<const ObservationSequence*> reps;
    auto classOf = [&](const ObservationSequence& row) {
        for (size_t k = 0; k < reps.size(); ++k)
            if (rowsEquivalent(row, *reps[k])) return static_cast<int>(k);
        return -1;
    };
    for (const auto& r : upperRows_)
        if (classOf(r) < 0) reps.push_back(&r);

    Fsc fsc;
    fsc.numObservations = teacher_.numObservations();
    fsc.initial = 0;
    fsc.gamma.resize(reps.size());
    fsc.delta.resize(reps.size());
    for (size_t n = 0; n < reps.size(); ++n) {
        fsc.gamma[n].resize(fsc.numObservations);
        fsc.delta[n].resize(fsc.numObservations);
        for (int z = 0; z < fsc.numObservations; ++z) {
            fsc.gamma[n][z] = entry(*reps[n], {z});
            ObservationSequence succ = *reps[n];
            succ.push_back(z);
            int target = classOf(succ);
            if (target < 0)
                throw ValidationError("cannot extract a controller from a table that is not closed and consistent");
            fsc.delta[n][z] = target;
        }
    }
    return fsc;
}

void LearningTable::processCounterexample(const ObservationSequence& c) {
    if (c.empty()) throw ValidationError("empty counterexample");
    addColumn(c);
}

Fsc learn(const Teacher& teacher, int roundCap) {
    LearningTable table(teacher);
    for (int round = 0; round < roundCap; ++round) {
        table.makeClosedAndConsistent();
        Fsc fsc = table.extractFsc();
        auto counterexample = teacher.equivalenceQuery(fsc);
        if (!counterexample) return fsc;
        table.processCounterexample(*counterexample);
    }
    throw ValidationError("learning did not converge within " + std::to_string(roundCap) +
                          " rounds");
}

namespace {

// drop nodes unreachable from the initial one, renumbering in BFS order
Fsc restrictReachable(const Fsc& fsc) {
    std::vector<int> order;
    std::vector<int> newId(fsc.numNodes(), -1);
    std::deque<int> queue{fsc.initial};
    newId[fsc.initial] = 0;
    order.push_back(fsc.initial);
    while (!queue.empty()) {
        int n = queue.front();
        queue.pop_front();
        for (int z = 0; z < fsc.numObservations; ++z) {
            int m = fsc.delta[n][z];
            if (newId[m] < 0) {
                newId[m] = static_cast<int>(order.size());
                order.push_back(m);
                queue.push_back(m);
            }
        }
    }
    Fsc out;
    out.numObservations = fsc.numObservations;
    out.initial = 0;
    out.gamma.resize(order.size());
    out.delta.resize(order.size());
    for (size_t k = 0; k < order.size(); ++k) {
        out.gamma[k] = fsc.gamma[order[k]];
        out.delta[k].resize(fsc.numObservations);
        for (int z = 0; z < fsc.numObservations; ++z)
            out.delta[k][z] = newId[fsc.delta[order[k]][z]];
    }
    return out;
}

struct MergeState {
    std::vector<int> parent;
    std::vector<std::vector<OutputSymbol>> gamma;  // per root
    std::vector<std::vector<int>> delta;           // per root, targets are node ids

    int find(int n) {
        while (parent[n] != n) {
            parent[n] = parent[parent[n]];
            n = parent[n];
        }
        return n;
    }
};

// simultaneous-walk merge: union the pair and everything it forces; fails when
// some forced class would carry two differing concrete outputs
std::optional<MergeState> tryMerge(const Fsc& fsc, int n1, int n2) {
    MergeState st;
    st.parent.resize(fsc.numNodes());
    std::iota(st.parent.begin(), st.parent.end(), 0);
    st.gamma = fsc.gamma;
    st.delta = fsc.delta;

    std::deque<std::pair<int, int>> worklist{{n1, n2}};
    while (!worklist.empty()) {
        auto [a, b] = worklist.front();
        worklist.pop_front();
        int ra = st.find(a), rb = st.find(b);
        if (ra == rb) continue;
        if (rb < ra) std::swap(ra, rb);
        st.parent[rb] = ra;
        for (int z = 0; z < fsc.numObservations; ++z) {
            OutputSymbol& oa = st.gamma[ra][z];
            const OutputSymbol& ob = st.gamma[rb][z];
            if (!oa.isDontCare() && !ob.isDontCare()) {
                if (!oa.equals(ob)) return std::nullopt;
            } else if (oa.isDontCare()) {
                oa = ob;  // concrete (or †) output wins over †
            }
            worklist.emplace_back(st.delta[ra][z], st.delta[rb][z]);
        }
    }
    return st;
}

Fsc quotient(const Fsc& fsc, MergeState& st) {
    std::vector<int> classId(fsc.numNodes(), -1);
    std::vector<int> roots;
    for (int n = 0; n < fsc.numNodes(); ++n) {
        int r = st.find(n);
        if (classId[r] < 0) {
            classId[r] = static_cast<int>(roots.size());
            roots.push_back(r);
        }
        classId[n] = classId[r];
    }
    Fsc out;
    out.numObservations = fsc.numObservations;
    out.initial = classId[fsc.initial];
    out.gamma.resize(roots.size());
    out.delta.resize(roots.size());
    for (size_t k = 0; k < roots.size(); ++k) {
        out.gamma[k] = st.gamma[roots[k]];
        out.delta[k].resize(fsc.numObservations);
        for (int z = 0; z < fsc.numObservations; ++z)
            out.delta[k][z] = classId[st.find(st.delta[roots[k]][z])];
    }
    return restrictReachable(out);
}

}  // namespace

Fsc minimize(const Fsc& fsc) {
    Fsc current = restrictReachable(fsc);
    bool merged = true;
    while (merged && current.numNodes() > 1) {
        merged = false;
        for (int i = 0; i < current.numNodes() && !merged; ++i)
            for (int j = i + 1; j < current.numNodes() && !merged; ++j)
                if (auto st = tryMerge(current, i, j)) {
                    current = quotient(current, *st);
                    merged = true;
                }
    }
    return current;
}

Fsc minimizeExact(const Fsc& fsc) {
    Fsc base = restrictReachable(fsc);
    int n = base.numNodes();
    if (n > 12) throw ValidationError("exact minimization limited to 12 nodes");
    if (n <= 1) return base;

    // enumerate set partitions as restricted growth strings
    std::vector<int> block(n, 0);
    std::vector<int> best;
    int bestBlocks = n + 1;

    auto valid = [&](const std::vector<int>& blk, int numBlocks) {
        for (int b = 0; b < numBlocks; ++b) {
            for (int z = 0; z < base.numObservations; ++z) {
                const OutputSymbol* concrete = nullptr;
                int succBlock = -1;
                for (int v = 0; v < n; ++v) {
                    if (blk[v] != b) continue;
                    if (!base.gamma[v][z].isDontCare()) {
                        if (concrete && !concrete->equals(base.gamma[v][z])) return false;
                        concrete = &base.gamma[v][z];
                    }
                    int sb = blk[base.delta[v][z]];
                    if (succBlock >= 0 && succBlock != sb) return false;
                    succBlock = sb;
                }
            }
        }
        return true;
    };

    auto enumerate = [&](auto&& self, int pos, int used) -> void {
        if (used >= bestBlocks) return;  // can't beat the best found so far
        if (pos == n) {
            if (valid(block, used)) {
                bestBlocks = used;
                best = block;
            }
            return;
        }
        for (int b = 0; b <= used && b < bestBlocks; ++b) {
            block[pos] = b;
            self(self, pos + 1, std::max(used, b + 1));
        }
    };
    enumerate(enumerate, 1, 1);  // node 0 is pinned to block 0

    if (best.empty()) return base;  // identity partition always valid, but be safe
    MergeState st;
    st.parent.resize(n);
    std::iota(st.parent.begin(), st.parent.end(), 0);
    st.gamma = base.gamma;
    st.delta = base.delta;
    // union blocks; outputs unify without conflict because the partition is valid
    std::vector<int> firstOfBlock(bestBlocks, -1);
    for (int v = 0; v < n; ++v) {
        int b = best[v];
        if (firstOfBlock[b] < 0) {
            firstOfBlock[b] = v;
            continue;
        }
        int ra = st.find(firstOfBlock[b]), rb = st.find(v);
        if (ra == rb) continue;
        if (rb < ra) std::swap(ra, rb);
        st.parent[rb] = ra;
        for (int z = 0; z < base.numObservations; ++z)
            if (st.gamma[ra][z].isDontCare()) st.gamma[ra][z] = st.gamma[rb][z];
    }
    return quotient(base, st);
}

Fsc applyH2(const Fsc& fsc) {
    Fsc out = fsc;
    for (auto& row : out.gamma)
        for (auto& sym : row)
            if (sym.isChi()) sym = OutputSymbol::dontCare();
    return minimize(out);
}

}  // namespace fscd
