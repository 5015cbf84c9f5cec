#pragma once

#include "tadet/tree.hpp"

namespace tadet {

// Tree of all paths of `a` with at most k observable transitions. Silent
// transitions are expanded only below level k; silently entered copies of
// accepting locations are not accepting.
UnfoldedTree unfold(const TimedAutomaton& a, int k, bool prune_nonaccepting_leaves = false);

// One fresh clock per transition: x<i> for the i-th observable step of a
// path, x<i>_<j> for the j-th silent step after it. Guards refer to the clock
// of the most recent reset of each original clock, x0 if it was never reset.
UnfoldedTree rename_clocks(const UnfoldedTree& t);

}  // namespace tadet
