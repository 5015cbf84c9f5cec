#include "tadet/tree.hpp"

#include "tadet/errors.hpp"

#include <deque>

namespace tadet {

std::vector<LocationId> preorder(const TimedAutomaton& a)
{
    auto out = a.outgoing();
    std::vector<LocationId> order;
    std::vector<bool> seen(a.locations.size(), false);
    std::vector<LocationId> stack{a.initial};
    while (!stack.empty()) {
        LocationId n = stack.back();
        stack.pop_back();
        if (seen[n]) continue;
        seen[n] = true;
        order.push_back(n);
        for (auto it = out[n].rbegin(); it != out[n].rend(); ++it) stack.push_back(a.transitions[*it].target);
    }
    return order;
}

UnfoldedTree from_automaton(const TimedAutomaton& a)
{
    validate(a);
    if (a.shape == Shape::general) throw StructuralError("automaton is not tree-shaped");
    UnfoldedTree t;
    t.automaton = a;
    t.nodes.resize(a.locations.size());
    auto out = a.outgoing();
    // Kahn order doubles as a cycle check for DAG-shaped inputs.
    std::vector<int> indegree(a.locations.size(), 0);
    for (const auto& tr : a.transitions) indegree[tr.target]++;
    std::deque<LocationId> ready{a.initial};
    std::vector<bool> reached(a.locations.size(), false);
    reached[a.initial] = true;
    std::size_t visited = 0;
    int depth = 0;
    for (LocationId n = 0; n < a.locations.size(); ++n) t.nodes[n].origins = {n};
    while (!ready.empty()) {
        LocationId n = ready.front();
        ready.pop_front();
        ++visited;
        for (auto e : out[n]) {
            const auto& tr = a.transitions[e];
            auto& child = t.nodes[tr.target];
            if (!reached[tr.target]) {
                reached[tr.target] = true;
                child.level = t.nodes[n].level + (tr.action.is_silent() ? 0 : 1);
                child.silent_index = tr.action.is_silent() ? t.nodes[n].silent_index + 1 : -1;
                depth = std::max(depth, child.level);
            }
            if (--indegree[tr.target] == 0) ready.push_back(tr.target);
        }
    }
    if (visited != a.locations.size()) throw StructuralError("tree-shaped automaton has unreachable or cyclic parts");
    t.automaton.depth = std::max(depth, a.depth);
    for (const auto& c : a.clocks)
        if (c.name().size() > 1 && c.name()[0] == 'x') t.renamed = true;
    return t;
}

}  // namespace tadet
