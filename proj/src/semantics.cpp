#include "tadet/semantics.hpp"

#include "tadet/errors.hpp"

#include <algorithm>
#include <map>

namespace tadet {

namespace {

void check_path(const TimedAutomaton& a, const Run& r)
{
    LocationId at = a.initial;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].transition >= a.transitions.size())
            throw StructuralError("run step " + std::to_string(i) + " names an unknown transition");
        if (r[i].delay < 0) throw StructuralError("run step " + std::to_string(i) + " has a negative delay");
        const auto& t = a.transitions[r[i].transition];
        if (t.source != at)
            throw StructuralError("run step " + std::to_string(i) + " does not start at the current location");
        at = t.target;
    }
}

}  // namespace

bool check_run(const TimedAutomaton& a, const Run& r)
{
    check_path(a, r);
    std::map<ClockId, Rational> v;
    for (const auto& c : a.clocks) v[c] = 0;
    auto value = [&](const ClockId& c) { return v.at(c); };
    LocationId at = a.initial;
    if (!evaluate(a.locations[at].invariant, value)) return false;
    for (const auto& step : r) {
        for (auto& [c, x] : v) x += step.delay;
        // invariants are upper-bound conjunctions, so the end of the delay is the binding point
        if (!evaluate(a.locations[at].invariant, value)) return false;
        const auto& t = a.transitions[step.transition];
        if (!evaluate(t.guard, value)) return false;
        for (const auto& c : t.resets) v[c] = 0;
        at = t.target;
        if (!evaluate(a.locations[at].invariant, value)) return false;
    }
    return true;
}

LocationId final_location(const TimedAutomaton& a, const Run& r)
{
    check_path(a, r);
    return r.empty() ? a.initial : a.transitions[r.back().transition].target;
}

bool is_accepting_run(const TimedAutomaton& a, const Run& r)
{
    if (!r.empty() && a.transitions[r.back().transition].action.is_silent()) return false;
    return a.locations[final_location(a, r)].accepting && check_run(a, r);
}

TimedTrace trace_of(const TimedAutomaton& a, const Run& r)
{
    check_path(a, r);
    TimedTrace out;
    Rational now = 0;
    for (const auto& step : r) {
        now += step.delay;
        const auto& t = a.transitions[step.transition];
        if (!t.action.is_silent()) out.push_back({now, t.action.label()});
    }
    return out;
}

bool check_strong_responsiveness(const TimedAutomaton& a)
{
    // Kahn's algorithm on the silent subgraph
    std::vector<std::vector<LocationId>> succ(a.locations.size());
    std::vector<int> indegree(a.locations.size(), 0);
    for (const auto& t : a.transitions) {
        if (!t.action.is_silent()) continue;
        succ[t.source].push_back(t.target);
        indegree[t.target]++;
    }
    std::vector<LocationId> ready;
    for (LocationId l = 0; l < a.locations.size(); ++l)
        if (indegree[l] == 0) ready.push_back(l);
    std::size_t seen = 0;
    while (!ready.empty()) {
        LocationId l = ready.back();
        ready.pop_back();
        ++seen;
        for (LocationId m : succ[l])
            if (--indegree[m] == 0) ready.push_back(m);
    }
    return seen == a.locations.size();
}

DegreeStats observable_out_degree_stats(const TimedAutomaton& a)
{
    DegreeStats s;
    s.locations = a.locations.size();
    s.transitions = a.transitions.size();
    std::vector<std::size_t> degree(a.locations.size(), 0);
    std::size_t observable = 0;
    for (const auto& t : a.transitions) {
        if (t.action.is_silent()) {
            ++s.silent;
        } else {
            ++degree[t.source];
            ++observable;
        }
    }
    if (!degree.empty()) s.max_out_degree = *std::max_element(degree.begin(), degree.end());
    if (s.locations) s.avg_out_degree = static_cast<double>(observable) / static_cast<double>(s.locations);
    return s;
}

}  // namespace tadet
