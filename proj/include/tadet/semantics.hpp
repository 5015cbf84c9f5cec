#pragma once

#include "tadet/automaton.hpp"

#include <cstddef>

namespace tadet {

// Replays r from the initial location. Returns false when some guard or
// invariant fails; throws StructuralError when r is not a path of a.
bool check_run(const TimedAutomaton& a, const Run& r);
// Location reached by the path of r (structure only, no timing check).
LocationId final_location(const TimedAutomaton& a, const Run& r);
bool is_accepting_run(const TimedAutomaton& a, const Run& r);
// Observable timed trace of r; absolute times accumulate the delays.
TimedTrace trace_of(const TimedAutomaton& a, const Run& r);

bool check_strong_responsiveness(const TimedAutomaton& a);

struct DegreeStats {
    std::size_t locations = 0;
    std::size_t transitions = 0;
    std::size_t silent = 0;
    std::size_t max_out_degree = 0;
    double avg_out_degree = 0.0;
};
DegreeStats observable_out_degree_stats(const TimedAutomaton& a);

}  // namespace tadet
