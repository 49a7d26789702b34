#include "teacher.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace fscd {

const OutputSymbol* StrategyTable::find(const ObservationSequence& seq) const {
    for (const auto& [row, out] : rows)
        if (row == seq) return &out;
    return nullptr;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

StrategyTable parseStrategyTable(const std::string& csvText, const Pomdp& pomdp) {
    StrategyTable table;
    std::istringstream in(csvText);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (lineNo == 1 && t == "sequence,output") continue;
        size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw ParseError("strategy table line " + std::to_string(lineNo) +
                             ": expected `sequence,output`");
        std::string seqText = trim(t.substr(0, comma));
        std::string outText = trim(t.substr(comma + 1));

        ObservationSequence seq;
        std::istringstream tokens(seqText);
        std::string tok;
        while (tokens >> tok) {
            int z = pomdp.observationIndex(tok);
            if (z < 0)
                throw ParseError("strategy table line " + std::to_string(lineNo) +
                                 ": unknown observation " + tok);
            seq.push_back(z);
        }
        if (seq.empty())
            throw ParseError("strategy table line " + std::to_string(lineNo) +
                             ": empty observation sequence");

        OutputSymbol out = parseOutput(outText, pomdp);
        if (out.isDontCare())
            throw ValidationError("strategy table line " + std::to_string(lineNo) +
                                  ": don't-care output not allowed in a table row");
        if (out.isAction()) {
            const auto& enabled = pomdp.enabledActionsOfObservation(seq.back());
            for (const auto& [a, p] : out.dist.support()) {
                (void)p;
                if (std::find(enabled.begin(), enabled.end(), a) == enabled.end())
                    throw ValidationError("strategy table line " + std::to_string(lineNo) +
                                          ": action " + pomdp.actionName(a) +
                                          " disabled for observation " +
                                          pomdp.observationName(seq.back()));
            }
        }

        if (const OutputSymbol* existing = table.find(seq)) {
            if (!existing->equals(out))
                throw ValidationError("strategy table consistency: sequence `" + seqText +
                                      "` has two distinct outputs");
            continue;  // exact duplicate
        }
        table.rows.emplace_back(std::move(seq), std::move(out));
    }
    return table;
}

StrategyTable parseStrategyTableFile(const std::string& path, const Pomdp& pomdp) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open strategy table file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parseStrategyTable(buffer.str(), pomdp);
}

std::string serializeStrategyTable(const StrategyTable& table, const Pomdp& pomdp) {
    std::ostringstream out;
    out << "sequence,output\n";
    for (const auto& [seq, sym] : table.rows) {
        for (size_t i = 0; i < seq.size(); ++i)
            out << (i ? " " : "") << pomdp.observationName(seq[i]);
        out << ',' << renderOutput(sym, pomdp) << '\n';
    }
    return out.str();
}

// --- TableTeacher -----------------------------------------------------------

TableTeacher::TableTeacher(const Pomdp& pomdp, StrategyTable table, ChiPolicy chiPolicy)
    : pomdp_(pomdp), table_(std::move(table)), chiPolicy_(chiPolicy) {
    rowOrder_.resize(table_.rows.size());
    std::iota(rowOrder_.begin(), rowOrder_.end(), 0);
    std::sort(rowOrder_.begin(), rowOrder_.end(), [this](int a, int b) {
        const auto& ra = table_.rows[a].first;
        const auto& rb = table_.rows[b].first;
        if (ra.size() != rb.size()) return ra.size() < rb.size();
        return ra < rb;
    });
}

int TableTeacher::numObservations() const { return pomdp_.numObservations(); }

OutputSymbol TableTeacher::outputQuery(const ObservationSequence& seq) const {
    if (const OutputSymbol* out = table_.find(seq)) return *out;
    return OutputSymbol::dontCare();
}

bool TableTeacher::isRealizable(const ObservationSequence& seq) const {
    if (seq.empty()) return false;
    if (pomdp_.observationOf(pomdp_.initialState()) != seq.front()) return false;
    std::set<int> current{pomdp_.initialState()};
    for (size_t t = 1; t < seq.size(); ++t) {
        std::set<int> next;
        for (int s : current)
            for (int a : pomdp_.enabledActions(s))
                for (const auto& [succ, p] : pomdp_.transition(s, a).support()) {
                    (void)p;
                    if (pomdp_.observationOf(succ) == seq[t]) next.insert(succ);
                }
        if (next.empty()) return false;
        current = std::move(next);
    }
    return true;
}

std::optional<ObservationSequence> TableTeacher::equivalenceQuery(const Fsc& fsc) const {
    for (int idx : rowOrder_) {
        const auto& [seq, expected] = table_.rows[idx];
        if (expected.isChi() && chiPolicy_ == ChiPolicy::Skip) continue;
        if (!isRealizable(seq)) continue;
        if (!fsc.run(seq).equals(expected)) return seq;
    }
    return std::nullopt;
}

// --- BeliefTeacher ----------------------------------------------------------

BeliefTeacher::BeliefTeacher(const Pomdp& pomdp, const BeliefMdp& bmdp,
                             const BeliefStrategy& strategy)
    : pomdp_(pomdp), bmdp_(bmdp), strategy_(strategy) {
    representatives_.reserve(bmdp.numNodes());
    for (int id = 0; id < bmdp.numNodes(); ++id)
        representatives_.push_back(representativeSequence(bmdp, pomdp, strategy, id));
}

int BeliefTeacher::numObservations() const { return pomdp_.numObservations(); }

OutputSymbol BeliefTeacher::outputQuery(const ObservationSequence& seq) const {
    if (seq.empty() || seq.front() != bmdp_.nodes[bmdp_.initial].observation)
        return OutputSymbol::dontCare();
    int node = bmdp_.initial;
    auto isTarget = [this](int id) {
        return !strategy_.target.empty() && strategy_.target[id] != 0;
    };
    for (size_t t = 1; t < seq.size(); ++t) {
        // once the objective is decided the strategy is unconstrained
        if (isTarget(node)) return OutputSymbol::dontCare();
        if (bmdp_.cutoff[node] || bmdp_.edges[node].empty()) return OutputSymbol::dontCare();
        const auto& enabled = pomdp_.enabledActionsOfObservation(bmdp_.nodes[node].observation);
        int slot = -1;
        for (size_t k = 0; k < enabled.size(); ++k)
            if (enabled[k] == strategy_.choice[node]) slot = static_cast<int>(k);
        if (slot < 0) return OutputSymbol::dontCare();
        int next = -1;
        for (const auto& edge : bmdp_.edges[node][slot])
            if (edge.observation == seq[t]) next = edge.successor;
        if (next < 0) return OutputSymbol::dontCare();
        node = next;
    }
    if (isTarget(node)) return OutputSymbol::dontCare();
    if (bmdp_.cutoff[node]) return OutputSymbol::dontKnow(strategy_.chi[node]);
    return OutputSymbol::diracAction(strategy_.choice[node]);
}

std::optional<ObservationSequence> BeliefTeacher::equivalenceQuery(const Fsc& fsc) const {
    for (const ObservationSequence& seq : representatives_) {
        OutputSymbol expected = outputQuery(seq);
        // don't-care answers (beliefs unreachable under the strategy, whose
        // representative had to take a fallback path) constrain nothing
        if (expected.isDontCare()) continue;
        if (!fsc.run(seq).equals(expected)) return seq;
    }
    return std::nullopt;
}

// --- materialization --------------------------------------------------------

StrategyTable materializeTable(const Teacher& teacher, const Pomdp& pomdp, int maxDepth) {
    StrategyTable table;
    // enumerate realizable observation sequences breadth-first via subset
    // construction on the POMDP states
    struct Item {
        ObservationSequence seq;
        std::set<int> states;
    };
    std::deque<Item> queue;
    queue.push_back({{pomdp.observationOf(pomdp.initialState())}, {pomdp.initialState()}});
    while (!queue.empty()) {
        Item item = std::move(queue.front());
        queue.pop_front();
        OutputSymbol out = teacher.outputQuery(item.seq);
        if (!out.isDontCare()) table.rows.emplace_back(item.seq, out);
        if (static_cast<int>(item.seq.size()) >= maxDepth) continue;
        for (int z = 0; z < pomdp.numObservations(); ++z) {
            std::set<int> next;
            for (int s : item.states)
                for (int a : pomdp.enabledActions(s))
                    for (const auto& [succ, p] : pomdp.transition(s, a).support()) {
                        (void)p;
                        if (pomdp.observationOf(succ) == z) next.insert(succ);
                    }
            if (next.empty()) continue;
            ObservationSequence seq = item.seq;
            seq.push_back(z);
            queue.push_back({std::move(seq), std::move(next)});
        }
    }
    return table;
}

}  // namespace fscd
