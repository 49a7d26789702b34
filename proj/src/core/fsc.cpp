#include "fsc.hpp"

#include <cstdio>
#include <map>

#include "json.hpp"

namespace fscd {

using nlohmann::json;

OutputSymbol Fsc::run(const ObservationSequence& seq) const {
    if (seq.empty()) throw ValidationError("cannot run FSC on the empty sequence");
    int node = initial;
    for (size_t i = 0; i + 1 < seq.size(); ++i) node = delta[node][seq[i]];
    return gamma[node][seq.back()];
}

bool Fsc::isApplicable() const {
    for (const auto& row : gamma)
        for (const auto& out : row)
            if (!out.isAction()) return false;
    return true;
}

Fsc applyH1(const Fsc& fsc) {
    const int numObs = fsc.numObservations;
    // #(o) counts transitions with a concrete output on o; #(o,a) sums the
    // probability mass of a across them (plain counting for Dirac outputs).
    std::vector<double> total(numObs, 0.0);
    std::vector<std::map<int, double>> mass(numObs);
    for (int n = 0; n < fsc.numNodes(); ++n)
        for (int z = 0; z < numObs; ++z) {
            const auto& out = fsc.gamma[n][z];
            if (!out.isAction()) continue;
            total[z] += 1.0;
            for (const auto& [a, p] : out.dist.support()) mass[z][a] += p;
        }

    Fsc result = fsc;
    for (int n = 0; n < result.numNodes(); ++n)
        for (int z = 0; z < numObs; ++z) {
            if (!result.gamma[n][z].isChi()) continue;
            if (total[z] == 0.0) continue;  // keep chi
            std::vector<std::pair<int, double>> support;
            for (const auto& [a, m] : mass[z]) support.emplace_back(a, m / total[z]);
            result.gamma[n][z] = OutputSymbol::action(Distribution(std::move(support)));
        }
    return result;
}

Fsc applyBase(const Fsc& fsc, const std::vector<CutoffStrategy>& cutoffs, const Pomdp& pomdp) {
    std::vector<int> referenced;
    for (const auto& row : fsc.gamma)
        for (const auto& out : row)
            if (out.isChi() &&
                std::find(referenced.begin(), referenced.end(), out.chi) == referenced.end())
                referenced.push_back(out.chi);
    std::sort(referenced.begin(), referenced.end());

    Fsc result = fsc;
    std::map<int, int> absorbingNode;
    for (int id : referenced) {
        if (id < 0 || id >= static_cast<int>(cutoffs.size()))
            throw ValidationError("missing cut-off strategy " + std::to_string(id));
        int node = result.numNodes();
        absorbingNode[id] = node;
        std::vector<OutputSymbol> outputs;
        std::vector<int> targets(fsc.numObservations, node);
        for (int z = 0; z < fsc.numObservations; ++z)
            outputs.push_back(OutputSymbol::action(cutoffs[id].policyByObservation[z]));
        result.gamma.push_back(std::move(outputs));
        result.delta.push_back(std::move(targets));
    }
    (void)pomdp;
    for (int n = 0; n < fsc.numNodes(); ++n)
        for (int z = 0; z < fsc.numObservations; ++z) {
            const auto& out = fsc.gamma[n][z];
            if (!out.isChi()) continue;
            result.gamma[n][z] = OutputSymbol::action(cutoffs[out.chi].policyByObservation[z]);
            result.delta[n][z] = absorbingNode.at(out.chi);
        }
    return result;
}

Fsc resolveDontCare(const Fsc& fsc, const Pomdp& pomdp) {
    Fsc result = fsc;
    for (auto& row : result.gamma)
        for (int z = 0; z < fsc.numObservations; ++z) {
            if (!row[z].isDontCare()) continue;
            const auto& enabled = pomdp.enabledActionsOfObservation(z);
            int best = enabled.front();
            for (int a : enabled)
                if (pomdp.actionName(a) < pomdp.actionName(best)) best = a;
            row[z] = OutputSymbol::diracAction(best);
        }
    return result;
}

namespace {

std::string formatProb(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", p);
    return buf;
}

}  // namespace

std::string renderOutput(const OutputSymbol& symbol, const Pomdp& pomdp) {
    switch (symbol.kind) {
        case OutputSymbol::Kind::DontCare: return "-";
        case OutputSymbol::Kind::Chi: return "chi:" + std::to_string(symbol.chi);
        case OutputSymbol::Kind::Action: {
            if (symbol.dist.isDirac()) return pomdp.actionName(symbol.dist.support().front().first);
            std::string out;
            for (const auto& [a, p] : symbol.dist.support()) {
                if (!out.empty()) out += ";";
                out += pomdp.actionName(a) + ":" + formatProb(p);
            }
            return out;
        }
    }
    return "-";
}

OutputSymbol parseOutput(const std::string& text, const Pomdp& pomdp) {
    if (text == "-") return OutputSymbol::dontCare();
    if (text.rfind("chi:", 0) == 0) return OutputSymbol::dontKnow(std::stoi(text.substr(4)));
    if (text.find(':') == std::string::npos) return OutputSymbol::diracAction(pomdp.actionIndex(text));
    std::vector<std::pair<int, double>> support;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t semi = text.find(';', pos);
        if (semi == std::string::npos) semi = text.size();
        std::string part = text.substr(pos, semi - pos);
        size_t colon = part.find(':');
        if (colon == std::string::npos) throw ParseError("malformed output entry: " + part);
        support.emplace_back(pomdp.actionIndex(part.substr(0, colon)),
                             std::stod(part.substr(colon + 1)));
        pos = semi + 1;
    }
    return OutputSymbol::action(Distribution(std::move(support)));
}

std::string exportDot(const Fsc& fsc, const Pomdp& pomdp) {
    std::string out = "digraph fsc {\n  rankdir=LR;\n  __start [shape=point];\n";
    for (int n = 0; n < fsc.numNodes(); ++n)
        out += "  n" + std::to_string(n) + " [shape=circle];\n";
    out += "  __start -> n" + std::to_string(fsc.initial) + ";\n";
    for (int n = 0; n < fsc.numNodes(); ++n)
        for (int z = 0; z < fsc.numObservations; ++z) {
            std::string label =
                pomdp.observationName(z) + " / " + renderOutput(fsc.gamma[n][z], pomdp);
            std::string chiLabel = label;
            // chi_i rendering in DOT uses an underscore
            size_t at = chiLabel.find("chi:");
            if (at != std::string::npos) chiLabel.replace(at, 4, "chi_");
            out += "  n" + std::to_string(n) + " -> n" + std::to_string(fsc.delta[n][z]) +
                   " [label=\"" + chiLabel + "\"];\n";
        }
    out += "}\n";
    return out;
}

std::string fscToJson(const Fsc& fsc, const Pomdp& pomdp) {
    json doc;
    doc["nodes"] = json::array();
    for (int n = 0; n < fsc.numNodes(); ++n) doc["nodes"].push_back("n" + std::to_string(n));
    doc["initial"] = "n" + std::to_string(fsc.initial);
    doc["transitions"] = json::array();
    for (int n = 0; n < fsc.numNodes(); ++n)
        for (int z = 0; z < fsc.numObservations; ++z)
            doc["transitions"].push_back({{"node", "n" + std::to_string(n)},
                                          {"observation", pomdp.observationName(z)},
                                          {"output", renderOutput(fsc.gamma[n][z], pomdp)},
                                          {"next", "n" + std::to_string(fsc.delta[n][z])}});
    return doc.dump(2);
}

Fsc fscFromJson(const std::string& text, const Pomdp& pomdp) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed FSC file: ") + e.what());
    }
    std::map<std::string, int> nodeIndex;
    for (const auto& n : doc.at("nodes")) {
        std::string name = n.get<std::string>();
        nodeIndex.emplace(name, static_cast<int>(nodeIndex.size()));
    }
    Fsc fsc;
    fsc.numObservations = pomdp.numObservations();
    fsc.gamma.assign(nodeIndex.size(),
                     std::vector<OutputSymbol>(pomdp.numObservations(), OutputSymbol::dontCare()));
    fsc.delta.assign(nodeIndex.size(), std::vector<int>(pomdp.numObservations(), 0));
    fsc.initial = nodeIndex.at(doc.at("initial").get<std::string>());
    for (const auto& tr : doc.at("transitions")) {
        int node = nodeIndex.at(tr.at("node").get<std::string>());
        int z = pomdp.observationIndex(tr.at("observation").get<std::string>());
        if (z < 0) throw ValidationError("dangling id: unknown observation in FSC file");
        fsc.gamma[node][z] = parseOutput(tr.at("output").get<std::string>(), pomdp);
        fsc.delta[node][z] = nodeIndex.at(tr.at("next").get<std::string>());
    }
    return fsc;
}

}  // namespace fscd
