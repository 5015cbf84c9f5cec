#pragma once

#include "tadet/solver.hpp"
#include "tadet/tree.hpp"

#include <cstddef>

namespace tadet {

struct DeterminizeOptions {
    // Drop transitions whose guard is unsatisfiable, together with what lies below them.
    bool prune_unsatisfiable = true;
    SolverLimits limits;
};

struct DeterminizeStats {
    std::size_t merged_groups = 0;      // same-action sibling groups of size two or more
    std::size_t pruned_transitions = 0;
    std::size_t shared_nodes = 0;       // merged nodes reached again and reused
};

// Moves every unary atom x ~ n to the difference x - reset ~ n. Diagonal
// atoms are unchanged. After `reset` is set to zero, the result holds exactly
// when the original guard held at that moment.
Guard rebase(const Guard& g, const ClockId& reset);

// Merges same-action siblings into one transition per accepting status. The
// guard of each merged branch is rebased and conjoined onto its children.
// Merged nodes with the same members and status are shared, so the result
// may be a DAG.
UnfoldedTree determinize_guard_oriented(const UnfoldedTree& t, const DeterminizeOptions& opts = {},
                                        DeterminizeStats* stats = nullptr);

// Subset construction: one transition per satisfiable combination of
// enabled and disabled same-action siblings.
UnfoldedTree determinize_standard(const UnfoldedTree& t, const DeterminizeOptions& opts = {},
                                  DeterminizeStats* stats = nullptr);

// Unfolding, clock renaming, silent removal and guard-oriented
// determinization in one walk. Nodes of the silent-free tree are generated on
// demand and identified by their origin location, level, clock renaming and
// pending guard rewrites, so equal subtrees are built once.
UnfoldedTree pipeline_on_the_fly(const TimedAutomaton& a, int k, const DeterminizeOptions& opts = {},
                                 DeterminizeStats* stats = nullptr);

// True when, at every location, the guards of same-action transitions are
// pairwise exclusive.
bool check_deterministic(const UnfoldedTree& t, const SolverLimits& limits = {});

}  // namespace tadet
