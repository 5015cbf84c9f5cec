#include "tadet/guard.hpp"

#include "tadet/errors.hpp"

#include <algorithm>
#include <map>

namespace tadet {

std::string to_string(Relation r)
{
    switch (r) {
    case Relation::lt: return "<";
    case Relation::le: return "<=";
    case Relation::eq: return "=";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    }
    return "?";
}

Relation parse_relation(const std::string& text)
{
    if (text == "<") return Relation::lt;
    if (text == "<=") return Relation::le;
    if (text == "=" || text == "==") return Relation::eq;
    if (text == ">=") return Relation::ge;
    if (text == ">") return Relation::gt;
    throw ParseError("unknown relation '" + text + "'");
}

Relation mirror(Relation r)
{
    switch (r) {
    case Relation::lt: return Relation::gt;
    case Relation::le: return Relation::ge;
    case Relation::eq: return Relation::eq;
    case Relation::ge: return Relation::le;
    case Relation::gt: return Relation::lt;
    }
    return r;
}

AtomicConstraint atom(const ClockId& x, Relation r, std::int64_t n) { return {x, std::nullopt, r, n}; }

AtomicConstraint atom(const ClockId& x, const ClockId& y, Relation r, std::int64_t n)
{
    if (x == y) throw StructuralError("diagonal constraint over a single clock " + x.name());
    return {x, y, r, n};
}

bool holds(Relation r, const Rational& lhs, const Rational& rhs)
{
    switch (r) {
    case Relation::lt: return lhs < rhs;
    case Relation::le: return lhs <= rhs;
    case Relation::eq: return lhs == rhs;
    case Relation::ge: return lhs >= rhs;
    case Relation::gt: return lhs > rhs;
    }
    return false;
}

Guard::Guard(AtomicConstraint a) : kind_(Kind::atom), atoms_{std::move(a)} {}

Guard Guard::bottom()
{
    Guard g;
    g.kind_ = Kind::bottom;
    return g;
}

Guard Guard::all(std::vector<Guard> children)
{
    Guard g;
    g.kind_ = Kind::all;
    for (auto& c : children) {
        switch (c.kind_) {
        case Kind::top: break;
        case Kind::bottom: return bottom();
        case Kind::all:
            for (auto& cc : c.children_) g.children_.push_back(std::move(cc));
            break;
        default: g.children_.push_back(std::move(c));
        }
    }
    if (g.children_.empty()) return top();
    if (g.children_.size() == 1) return std::move(g.children_.front());
    return g;
}

Guard Guard::any(std::vector<Guard> children)
{
    Guard g;
    g.kind_ = Kind::any;
    for (auto& c : children) {
        switch (c.kind_) {
        case Kind::bottom: break;
        case Kind::top: return top();
        case Kind::any:
            for (auto& cc : c.children_) g.children_.push_back(std::move(cc));
            break;
        default: g.children_.push_back(std::move(c));
        }
    }
    if (g.children_.empty()) return bottom();
    if (g.children_.size() == 1) return std::move(g.children_.front());
    return g;
}

bool Guard::is_conjunctive() const
{
    switch (kind_) {
    case Kind::top:
    case Kind::atom: return true;
    case Kind::all:
        return std::all_of(children_.begin(), children_.end(),
                            [](const Guard& c) { return c.kind_ == Kind::atom; });
    default: return false;
    }
}

std::vector<AtomicConstraint> Guard::conjuncts() const
{
    if (!is_conjunctive()) throw StructuralError("guard is not a conjunction of atoms: " + to_string(*this));
    if (kind_ == Kind::atom) return atoms_;
    std::vector<AtomicConstraint> out;
    for (const auto& c : children_) out.push_back(c.atom());
    return out;
}

Guard operator&&(const Guard& a, const Guard& b) { return Guard::all({a, b}); }
Guard operator||(const Guard& a, const Guard& b) { return Guard::any({a, b}); }

namespace {

void collect_clocks(const Guard& g, std::set<ClockId>& out)
{
    if (g.kind() == Guard::Kind::atom) {
        out.insert(g.atom().left);
        if (g.atom().right) out.insert(*g.atom().right);
    }
    for (const auto& c : g.children()) collect_clocks(c, out);
}

}  // namespace

std::set<ClockId> clocks_of(const Guard& g)
{
    std::set<ClockId> out;
    collect_clocks(g, out);
    return out;
}

std::size_t atom_count(const Guard& g)
{
    if (g.kind() == Guard::Kind::atom) return 1;
    std::size_t n = 0;
    for (const auto& c : g.children()) n += atom_count(c);
    return n;
}

bool evaluate(const Guard& g, const std::function<Rational(const ClockId&)>& value)
{
    switch (g.kind()) {
    case Guard::Kind::top: return true;
    case Guard::Kind::bottom: return false;
    case Guard::Kind::atom: {
        const auto& a = g.atom();
        Rational lhs = value(a.left);
        if (a.right) lhs -= value(*a.right);
        return holds(a.rel, lhs, Rational(a.bound));
    }
    case Guard::Kind::all:
        for (const auto& c : g.children())
            if (!evaluate(c, value)) return false;
        return true;
    case Guard::Kind::any:
        for (const auto& c : g.children())
            if (evaluate(c, value)) return true;
        return false;
    }
    return false;
}

Guard map_atoms(const Guard& g, const std::function<Guard(const AtomicConstraint&)>& f)
{
    switch (g.kind()) {
    case Guard::Kind::atom: return f(g.atom());
    case Guard::Kind::all:
    case Guard::Kind::any: {
        std::vector<Guard> children;
        children.reserve(g.children().size());
        for (const auto& c : g.children()) children.push_back(map_atoms(c, f));
        return g.kind() == Guard::Kind::all ? Guard::all(std::move(children))
                                            : Guard::any(std::move(children));
    }
    default: return g;
    }
}

Guard substitute(const Guard& g, const std::function<ClockId(const ClockId&)>& rename)
{
    return map_atoms(g, [&](const AtomicConstraint& a) -> Guard {
        ClockId l = rename(a.left);
        if (!a.right) return AtomicConstraint{l, std::nullopt, a.rel, a.bound};
        ClockId r = rename(*a.right);
        if (l == r) {
            // x - x ~ n collapses to a constant comparison
            return holds(a.rel, Rational(0), Rational(a.bound)) ? Guard::top() : Guard::bottom();
        }
        return AtomicConstraint{l, r, a.rel, a.bound};
    });
}

namespace {

// One side of an interval: expr > value (strict) or expr >= value, resp. < / <=.
struct Side {
    std::int64_t value;
    bool strict;
};

struct Interval {
    ClockId left;
    std::optional<ClockId> right;
    std::optional<Side> lower;
    std::optional<Side> upper;
};

void tighten_lower(std::optional<Side>& s, Side b)
{
    if (!s || b.value > s->value || (b.value == s->value && b.strict)) s = b;
}

void tighten_upper(std::optional<Side>& s, Side b)
{
    if (!s || b.value < s->value || (b.value == s->value && b.strict)) s = b;
}

Guard simplify_conjunction(std::vector<Guard> children)
{
    std::vector<Interval> intervals;
    std::vector<Guard> rest;
    for (auto& c : children) {
        if (c.kind() != Guard::Kind::atom) {
            rest.push_back(std::move(c));
            continue;
        }
        AtomicConstraint a = c.atom();
        auto it = std::find_if(intervals.begin(), intervals.end(), [&](const Interval& iv) {
            return (iv.left == a.left && iv.right == a.right) ||
                   (a.right && iv.right && iv.left == *a.right && *iv.right == a.left);
        });
        if (it == intervals.end()) {
            intervals.push_back({a.left, a.right, std::nullopt, std::nullopt});
            it = std::prev(intervals.end());
        } else if (it->left != a.left) {
            a = {it->left, it->right, mirror(a.rel), -a.bound};
        }
        switch (a.rel) {
        case Relation::lt: tighten_upper(it->upper, {a.bound, true}); break;
        case Relation::le: tighten_upper(it->upper, {a.bound, false}); break;
        case Relation::eq:
            tighten_upper(it->upper, {a.bound, false});
            tighten_lower(it->lower, {a.bound, false});
            break;
        case Relation::ge: tighten_lower(it->lower, {a.bound, false}); break;
        case Relation::gt: tighten_lower(it->lower, {a.bound, true}); break;
        }
    }
    std::vector<Guard> out;
    for (const auto& iv : intervals) {
        if (iv.lower && iv.upper) {
            if (iv.lower->value > iv.upper->value) return Guard::bottom();
            if (iv.lower->value == iv.upper->value) {
                if (iv.lower->strict || iv.upper->strict) return Guard::bottom();
                out.emplace_back(AtomicConstraint{iv.left, iv.right, Relation::eq, iv.lower->value});
                continue;
            }
        }
        if (iv.lower)
            out.emplace_back(AtomicConstraint{iv.left, iv.right, iv.lower->strict ? Relation::gt : Relation::ge,
                                              iv.lower->value});
        if (iv.upper)
            out.emplace_back(AtomicConstraint{iv.left, iv.right, iv.upper->strict ? Relation::lt : Relation::le,
                                              iv.upper->value});
    }
    for (auto& r : rest) out.push_back(std::move(r));
    return Guard::all(std::move(out));
}

}  // namespace

Guard simplify(const Guard& g)
{
    switch (g.kind()) {
    case Guard::Kind::all: {
        std::vector<Guard> children;
        for (const auto& c : g.children()) children.push_back(simplify(c));
        // re-flatten: a simplified child may itself be a conjunction
        Guard flat = Guard::all(std::move(children));
        if (flat.kind() != Guard::Kind::all) return flat;
        return simplify_conjunction({flat.children().begin(), flat.children().end()});
    }
    case Guard::Kind::any: {
        std::vector<Guard> children;
        for (const auto& c : g.children()) children.push_back(simplify(c));
        return Guard::any(std::move(children));
    }
    case Guard::Kind::atom: return simplify_conjunction({g});
    default: return g;
    }
}

std::string to_string(const AtomicConstraint& a, Notation n)
{
    std::string rel;
    if (n == Notation::unicode) {
        switch (a.rel) {
        case Relation::le: rel = "≤"; break;
        case Relation::ge: rel = "≥"; break;
        default: rel = to_string(a.rel);
        }
    } else {
        rel = to_string(a.rel);
    }
    std::string lhs = a.left.name();
    if (a.right) lhs += (n == Notation::unicode ? " − " : " - ") + a.right->name();
    return lhs + " " + rel + " " + std::to_string(a.bound);
}

std::string to_string(const Guard& g, Notation n)
{
    switch (g.kind()) {
    case Guard::Kind::top: return "true";
    case Guard::Kind::bottom: return "false";
    case Guard::Kind::atom: return to_string(g.atom(), n);
    case Guard::Kind::all:
    case Guard::Kind::any: {
        bool conj = g.kind() == Guard::Kind::all;
        std::string sep = conj ? (n == Notation::unicode ? " ∧ " : " && ")
                               : (n == Notation::unicode ? " ∨ " : " || ");
        std::string out;
        for (std::size_t i = 0; i < g.children().size(); ++i) {
            const auto& c = g.children()[i];
            if (i) out += sep;
            bool wrap = c.kind() == Guard::Kind::all || c.kind() == Guard::Kind::any;
            out += wrap ? "(" + to_string(c, n) + ")" : to_string(c, n);
        }
        return out;
    }
    }
    return "?";
}

}  // namespace tadet
