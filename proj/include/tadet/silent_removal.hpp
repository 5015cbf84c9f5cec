#pragma once

#include "tadet/tree.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tadet {

// A first silent transition q_s -> q_{s,0} of a renamed tree and its surroundings.
struct SilentContext {
    TransitionId silent = 0;                  // tau_{s,0}
    LocationId q_s = 0;
    LocationId q_s0 = 0;
    std::optional<TransitionId> predecessor;  // tau_s, absent when q_s is the root
    std::optional<LocationId> q_prev;         // q_{s-1}
    ClockId x_s;                              // reset by tau_s, x0 at the root
    ClockId x_s0;                             // reset by tau_{s,0}
    Guard silent_guard;                       // g_{s,0}
};

std::optional<TransitionId> first_silent(const UnfoldedTree& t);
SilentContext make_context(const UnfoldedTree& t, TransitionId silent);

// g_{s,0} && 0 <= x_s
Guard set_lower_bound(const SilentContext& ctx);
// Pairs every lower bound of the lowered silent guard with every upper bound
// on another clock; x_s is zero on the bypass, so its pairs become unary.
Guard enabling_guard(const SilentContext& ctx);
// 0 <= x_{s,0}
Guard taken_guard(const SilentContext& ctx);

// Adds the bypass q_{s-1} -> q_{s,0} next to tau_s and moves q_{s,0} under it
// (tau_{s,0} is detached). No-op at the root.
UnfoldedTree build_bypass(const SilentContext& ctx, const UnfoldedTree& t);
// Conjoins the taken guard onto the edges leaving q_{s,0}, rewrites every
// guard below q_{s,0} that mentions x_{s,0}, and, at the root, lifts the
// children of q_{s,0} onto the root.
UnfoldedTree update_future_guards(const SilentContext& ctx, const UnfoldedTree& t);

// Repeats bypass + update on the first silent transition until none is left.
// Silent transitions whose lowered guard is unsatisfiable are deleted together
// with the subtree they lead to.
UnfoldedTree remove_all_silent(const UnfoldedTree& t);

// Building blocks of the future-guard rewrite.
struct BoundSide {
    ClockId clock;
    std::int64_t value = 0;
    bool strict = false;
};

struct SilentBounds {
    std::vector<BoundSide> lowers;  // value < clock  (or <=)
    std::vector<BoundSide> uppers;  // clock < value  (or <=)
    std::optional<BoundSide> exact;
};

// Unary bounds of a conjunctive guard, equalities split into two weak sides.
SilentBounds bounds_of(const Guard& lowered);

// Bounds on x_{s,0} imposed by one earlier transition of the same path.
struct FutureStep {
    ClockId reset;
    std::vector<BoundSide> lowers;
    std::vector<BoundSide> uppers;
};

struct FutureRewrite {
    ClockId x_s0;
    SilentBounds silent;

    // Rewrites one future guard. `history` lists the earlier transitions
    // below q_{s,0} on the same path that constrained x_{s,0}. When the guard
    // itself constrains x_{s,0}, its step is returned for later transitions.
    Guard apply(const Guard& g, bool leaves_target, const ClockId& reset, std::span<const FutureStep> history,
                std::optional<FutureStep>& step) const;
};

}  // namespace tadet
