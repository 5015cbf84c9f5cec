#include "tadet/automaton.hpp"

#include "tadet/errors.hpp"

#include <set>

namespace tadet {

LocationId TimedAutomaton::add_location(std::string name, bool accepting)
{
    locations.push_back({std::move(name), accepting, Guard::top()});
    return locations.size() - 1;
}

TransitionId TimedAutomaton::add_transition(LocationId source, LocationId target, Action action, Guard guard,
                                            std::vector<ClockId> resets)
{
    transitions.push_back({source, target, std::move(action), std::move(guard), std::move(resets)});
    return transitions.size() - 1;
}

std::optional<LocationId> TimedAutomaton::find_location(const std::string& name) const
{
    for (LocationId i = 0; i < locations.size(); ++i)
        if (locations[i].name == name) return i;
    return std::nullopt;
}

bool TimedAutomaton::has_clock(const ClockId& c) const
{
    for (const auto& d : clocks)
        if (d == c) return true;
    return false;
}

std::vector<std::vector<TransitionId>> TimedAutomaton::outgoing() const
{
    std::vector<std::vector<TransitionId>> out(locations.size());
    for (TransitionId t = 0; t < transitions.size(); ++t) out[transitions[t].source].push_back(t);
    return out;
}

void validate(const TimedAutomaton& a)
{
    if (a.locations.empty()) throw StructuralError("automaton has no locations");
    if (a.initial >= a.locations.size()) throw StructuralError("initial location out of range");
    std::set<std::string> names;
    for (const auto& l : a.locations)
        if (!names.insert(l.name).second) throw StructuralError("duplicate location name '" + l.name + "'");
    std::set<ClockId> clocks;
    for (const auto& c : a.clocks)
        if (!clocks.insert(c).second) throw StructuralError("duplicate clock '" + c.name() + "'");
    auto check_clocks = [&](const Guard& g, const std::string& where) {
        for (const auto& c : clocks_of(g))
            if (!clocks.count(c)) throw StructuralError("undeclared clock '" + c.name() + "' in " + where);
    };
    for (const auto& l : a.locations) check_clocks(l.invariant, "invariant of '" + l.name + "'");
    std::vector<int> observable_in(a.locations.size(), 0), silent_in(a.locations.size(), 0);
    for (TransitionId i = 0; i < a.transitions.size(); ++i) {
        const auto& t = a.transitions[i];
        std::string where = "transition " + std::to_string(i);
        if (t.source >= a.locations.size() || t.target >= a.locations.size())
            throw StructuralError(where + " has an endpoint out of range");
        check_clocks(t.guard, where);
        for (const auto& r : t.resets)
            if (!clocks.count(r)) throw StructuralError("undeclared clock '" + r.name() + "' reset by " + where);
        (t.action.is_silent() ? silent_in : observable_in)[t.target]++;
    }
    for (LocationId l = 0; l < a.locations.size(); ++l)
        if (a.locations[l].accepting && silent_in[l] > 0 && observable_in[l] == 0 && l != a.initial)
            throw StructuralError("location '" + a.locations[l].name + "' is only entered silently but accepting");
    if (a.shape != Shape::general) {
        std::vector<int> in(a.locations.size(), 0);
        for (const auto& t : a.transitions) in[t.target]++;
        if (in[a.initial] != 0) throw StructuralError("root of a tree-shaped automaton has incoming transitions");
        if (a.shape == Shape::tree)
            for (LocationId l = 0; l < a.locations.size(); ++l)
                if (l != a.initial && in[l] != 1)
                    throw StructuralError("tree location '" + a.locations[l].name + "' has " +
                                          std::to_string(in[l]) + " incoming transitions");
    }
}

bool has_trivial_invariants(const TimedAutomaton& a)
{
    for (const auto& l : a.locations)
        if (!l.invariant.is_top()) return false;
    return true;
}

std::string to_string(const TimedTrace& t)
{
    std::string out;
    for (const auto& e : t) out += "(" + to_string(e.time) + ", " + e.label + ")";
    return out.empty() ? "()" : out;
}

}  // namespace tadet
