#pragma once

#include "tadet/clock.hpp"
#include "tadet/rational.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace tadet {

enum class Relation { lt, le, eq, ge, gt };

std::string to_string(Relation r);
Relation parse_relation(const std::string& text);
// Relation obtained by moving the bound across: x - y ~ n  <=>  y - x ~' -n.
Relation mirror(Relation r);

// left ~ bound, or left - right ~ bound when right is present.
struct AtomicConstraint {
    ClockId left;
    std::optional<ClockId> right;
    Relation rel = Relation::le;
    std::int64_t bound = 0;

    bool is_diagonal() const noexcept { return right.has_value(); }

    friend bool operator==(const AtomicConstraint&, const AtomicConstraint&) = default;
};

AtomicConstraint atom(const ClockId& x, Relation r, std::int64_t n);
AtomicConstraint atom(const ClockId& x, const ClockId& y, Relation r, std::int64_t n);

bool holds(Relation r, const Rational& lhs, const Rational& rhs);

// Negation-free formula over atomic constraints.
class Guard {
public:
    enum class Kind { top, bottom, atom, all, any };

    Guard() = default;  // True
    Guard(AtomicConstraint a);  // NOLINT(google-explicit-constructor)

    static Guard top() { return Guard(); }
    static Guard bottom();
    // Flattening constructors: nested same-kind nodes are inlined, units are dropped.
    static Guard all(std::vector<Guard> children);
    static Guard any(std::vector<Guard> children);

    Kind kind() const noexcept { return kind_; }
    bool is_top() const noexcept { return kind_ == Kind::top; }
    bool is_bottom() const noexcept { return kind_ == Kind::bottom; }
    const AtomicConstraint& atom() const { return atoms_.front(); }
    std::span<const Guard> children() const noexcept { return children_; }

    // True when the guard is a conjunction of atoms (including True and a single atom).
    bool is_conjunctive() const;
    // Atoms of a conjunctive guard, in order.
    std::vector<AtomicConstraint> conjuncts() const;

    friend bool operator==(const Guard&, const Guard&) = default;

private:
    Kind kind_ = Kind::top;
    std::vector<AtomicConstraint> atoms_;
    std::vector<Guard> children_;
};

Guard operator&&(const Guard& a, const Guard& b);
Guard operator||(const Guard& a, const Guard& b);

std::set<ClockId> clocks_of(const Guard& g);
std::size_t atom_count(const Guard& g);

// Evaluates the guard under a clock valuation.
bool evaluate(const Guard& g, const std::function<Rational(const ClockId&)>& value);

Guard map_atoms(const Guard& g, const std::function<Guard(const AtomicConstraint&)>& f);
Guard substitute(const Guard& g, const std::function<ClockId(const ClockId&)>& rename);

// Per conjunction, keeps the tightest lower and upper bound of every clock
// (or clock difference) and collapses coinciding weak bounds into equalities.
Guard simplify(const Guard& g);

enum class Notation { ascii, unicode };
std::string to_string(const AtomicConstraint& a, Notation n = Notation::ascii);
std::string to_string(const Guard& g, Notation n = Notation::ascii);

}  // namespace tadet
