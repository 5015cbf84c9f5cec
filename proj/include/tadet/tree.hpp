#pragma once

#include "tadet/automaton.hpp"

#include <string>
#include <vector>

namespace tadet {

enum class NodeRole { plain, merged_accepting, merged_nonaccepting };

struct NodeInfo {
    std::vector<LocationId> origins;  // locations of the source automaton this node stands for
    int level = 0;                    // observable transitions on the path from the root
    int silent_index = -1;            // index in the silent chain after `level`, -1 if entered observably
    NodeRole role = NodeRole::plain;
};

// Rooted tree (or, after determinization with sharing, a rooted DAG) of
// bounded observable depth, with per-node bookkeeping.
struct UnfoldedTree {
    TimedAutomaton automaton;
    std::vector<NodeInfo> nodes;  // parallel to automaton.locations
    bool renamed = false;

    LocationId root() const { return automaton.initial; }
    std::size_t size() const { return automaton.locations.size(); }
    int depth() const { return automaton.depth; }
};

// Wraps a tree- or DAG-shaped automaton, recomputing levels from its structure.
UnfoldedTree from_automaton(const TimedAutomaton& a);

// Every location of a tree or DAG, and every path from the root, in a fixed order.
std::vector<LocationId> preorder(const TimedAutomaton& a);

}  // namespace tadet
