#pragma once

#include "tadet/dbm.hpp"
#include "tadet/semantics.hpp"
#include "tadet/solver.hpp"
#include "tadet/tree.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tadet {

using Word = std::vector<std::string>;

// Absolute firing time of the i-th observable step, and of the j-th silent
// step after it. t0 is the origin and never appears as a variable.
ClockId timestamp(int i);
ClockId silent_timestamp(int i, int j);

// Per word of an accepting path, the disjunction over such paths of their
// timing constraints. Every clock reset at step s is replaced by t_now - t_s,
// and consecutive timestamps are ordered. Silent timestamps stay free.
std::map<Word, Guard> path_constraints(const UnfoldedTree& t);

// Same content as zones over (0, t1, ..., tn): index i is the i-th observable
// timestamp. Silent timestamps are projected out.
using Language = std::map<Word, std::vector<IntegerSystem>>;
Language path_zones(const UnfoldedTree& t, const SolverLimits& limits = {});

enum class Direction { left_only, right_only };

struct Counterexample {
    Word word;
    std::vector<Rational> timestamps;
    Direction direction = Direction::left_only;

    TimedTrace trace() const;
};

struct Verdict {
    bool equal = true;
    std::optional<Counterexample> counterexample;
};

// Compares the timed languages of two trees restricted to words of length at most k.
Verdict language_equal(const UnfoldedTree& a, const UnfoldedTree& b, int k, const SolverLimits& limits = {});

// An accepting run of t whose observable trace is `trace`, with silent steps
// placed by the difference system of the path.
std::optional<Run> find_run(const UnfoldedTree& t, const TimedTrace& trace, const SolverLimits& limits = {});

struct GridOptions {
    // Observable timestamps are multiples of 1/denominator; silent ones use a
    // finer grid. 0 picks the observable depth plus one.
    int denominator = 0;
    // Every step lies within max_constant + 1 of the previous observable
    // event (or the origin); -1 reads the constant off the guards.
    std::int64_t max_constant = -1;
    std::size_t max_states = 20'000'000;
};

// Largest absolute constant in the guards of t.
std::int64_t max_constant(const TimedAutomaton& t);

// Grid for the trees derived from `model`: one more step per time unit than
// the model has clocks, delays up to its largest constant plus one.
GridOptions grid_for(const TimedAutomaton& model);

// Grid shared by two trees, so their samples can be compared as sets.
GridOptions common_grid(const UnfoldedTree& a, const UnfoldedTree& b);

// Every accepted timed trace whose steps lie on the grid. Exhaustive
// simulation, independent of the difference-system machinery.
std::set<TimedTrace> sample_traces(const UnfoldedTree& t, const GridOptions& opts = {});

}  // namespace tadet
