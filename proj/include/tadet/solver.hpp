#pragma once

#include "tadet/dbm.hpp"
#include "tadet/guard.hpp"
#include "tadet/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace tadet {

struct SolverLimits {
    // Maximal number of disjunct branches explored by one query.
    std::size_t max_branches = 1'000'000;
};

Guard complement(const AtomicConstraint& a);
Guard complement(const Guard& g);
inline Guard operator!(const Guard& g) { return complement(g); }

// Clocks not listed in nonneg may take negative values.
bool is_satisfiable(const Guard& g, const std::set<ClockId>& nonneg, const SolverLimits& limits = {});
// All clocks of g are non-negative.
bool is_satisfiable(const Guard& g, const SolverLimits& limits = {});
bool implies(const Guard& g1, const Guard& g2, const SolverLimits& limits = {});
bool equivalent(const Guard& g1, const Guard& g2, const SolverLimits& limits = {});

// Satisfiability of a && !b without expanding the complement of b.
bool difference_satisfiable(const Guard& a, const Guard& b, const SolverLimits& limits = {});

using Valuation = std::map<ClockId, Rational>;
// A satisfying assignment over non-negative clocks, if any.
std::optional<Valuation> find_model(const Guard& g, const SolverLimits& limits = {});

std::string to_smtlib(const Guard& g, const std::set<ClockId>& clocks);

// Low-level interface shared with the equivalence oracle. An atom is placed
// on the difference system as x_u - x_v ~ bound where (u, v) = place(atom).
using AtomPlacement = std::function<std::pair<Eigen::Index, Eigen::Index>(const AtomicConstraint&)>;

class BranchBudget {
public:
    explicit BranchBudget(std::size_t limit) : remaining_(limit) {}
    void spend();

private:
    std::size_t remaining_;
};

bool constrain(IntegerSystem& d, Eigen::Index u, Eigen::Index v, Relation rel, std::int64_t bound);

// Every closed, non-empty refinement of base by one disjunct of g.
std::vector<IntegerSystem> conjoin(const IntegerSystem& base, const Guard& g, const AtomPlacement& place,
                                   BranchBudget& budget);
bool satisfiable_in(const IntegerSystem& base, const Guard& g, const AtomPlacement& place, BranchBudget& budget);

}  // namespace tadet
