#pragma once

#include "tadet/automaton.hpp"
#include "tadet/equivalence.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tadet {

// JSON model documents, tagged "format": "ta/1". Guards are a list of atoms
// read as a conjunction; outputs may also nest {"all": [...]} and
// {"any": [...]} nodes and use a "right" clock for differences.
// Errors are ParseError messages that start with the JSON path of the fault.
TimedAutomaton parse_model(const std::string& text);
std::string serialize_model(const TimedAutomaton& a);

// Single-template UPPAAL XML. Silent transitions synchronise on a channel
// named tau; a location is accepting when its comments label contains
// "accepting". Anything outside that subset raises UnsupportedError.
TimedAutomaton import_uppaal_xml(const std::string& text);

// Graphviz digraph, nodes and edges in index order.
std::string export_dot(const TimedAutomaton& a);

// One satisfiability script per transition guard, separated by (reset).
std::string export_smtlib(const TimedAutomaton& a);

struct StageReport {
    std::string name;
    std::size_t locations = 0;
    std::size_t transitions = 0;
    double millis = 0.0;
};

struct PipelineReport {
    std::string variant;
    int depth = 0;
    std::vector<StageReport> stages;
    // Set when the equivalence check ran.
    std::optional<Verdict> equivalence;
};

std::string to_json(const PipelineReport& r);
std::string to_json(const Counterexample& c);

}  // namespace tadet
