#pragma once

#include "tadet/determinize.hpp"
#include "tadet/equivalence.hpp"
#include "tadet/io.hpp"
#include "tadet/tree.hpp"

#include <optional>
#include <string>

namespace tadet {

enum class Variant { standard, guard_oriented, on_the_fly };

std::string to_string(Variant v);
// Accepts "std", "new" and "otf".
Variant parse_variant(const std::string& text);

struct PipelineOptions {
    int depth = 1;
    Variant variant = Variant::guard_oriented;
    bool prune_leaves = false;
    bool check_equivalence = false;
    DeterminizeOptions determinize;
};

struct PipelineResult {
    // Renamed unfolding; empty for the on-the-fly variant unless the
    // equivalence check needed it.
    std::optional<UnfoldedTree> unfolded;
    std::optional<UnfoldedTree> silent_free;
    UnfoldedTree output;
    PipelineReport report;
};

// unfold, rename, remove silent steps, determinize; or the fused on-the-fly
// walk. With check_equivalence the output is compared with the unfolding.
PipelineResult run_pipeline(const TimedAutomaton& a, const PipelineOptions& opts);

}  // namespace tadet
