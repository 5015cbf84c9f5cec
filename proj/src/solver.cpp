#include "tadet/solver.hpp"

#include "tadet/errors.hpp"

#include <cctype>
#include <sstream>

namespace tadet {

Guard complement(const AtomicConstraint& a)
{
    auto with = [&](Relation r) { return Guard(AtomicConstraint{a.left, a.right, r, a.bound}); };
    switch (a.rel) {
    case Relation::lt: return with(Relation::ge);
    case Relation::le: return with(Relation::gt);
    case Relation::ge: return with(Relation::lt);
    case Relation::gt: return with(Relation::le);
    case Relation::eq: return Guard::any({with(Relation::lt), with(Relation::gt)});
    }
    return Guard::bottom();
}

Guard complement(const Guard& g)
{
    switch (g.kind()) {
    case Guard::Kind::top: return Guard::bottom();
    case Guard::Kind::bottom: return Guard::top();
    case Guard::Kind::atom: return complement(g.atom());
    case Guard::Kind::all:
    case Guard::Kind::any: {
        std::vector<Guard> children;
        for (const auto& c : g.children()) children.push_back(complement(c));
        return g.kind() == Guard::Kind::all ? Guard::any(std::move(children)) : Guard::all(std::move(children));
    }
    }
    return Guard::top();
}

void BranchBudget::spend()
{
    if (remaining_ == 0) throw ResourceError("disjunctive expansion exceeds the configured branch limit");
    --remaining_;
}

bool constrain(IntegerSystem& d, Eigen::Index u, Eigen::Index v, Relation rel, std::int64_t n)
{
    using B = IntegerSystem::BoundType;
    switch (rel) {
    case Relation::lt: return d.constrain(u, v, B::lt(n));
    case Relation::le: return d.constrain(u, v, B::le(n));
    case Relation::eq: return d.constrain(u, v, B::le(n)) && d.constrain(v, u, B::le(-n));
    case Relation::ge: return d.constrain(v, u, B::le(-n));
    case Relation::gt: return d.constrain(v, u, B::lt(-n));
    }
    return false;
}

namespace {

enum class Status { refuted, entailed, open };

Status bound_status(const IntegerSystem& d, Eigen::Index u, Eigen::Index v, const IntegerSystem::BoundType& b)
{
    if (b + d(v, u) < IntegerSystem::BoundType::le(0)) return Status::refuted;
    if (d(u, v) <= b) return Status::entailed;
    return Status::open;
}

// What the current system already says about g, without branching.
Status status(const IntegerSystem& d, const Guard& g, const AtomPlacement& place)
{
    using B = IntegerSystem::BoundType;
    switch (g.kind()) {
    case Guard::Kind::top: return Status::entailed;
    case Guard::Kind::bottom: return Status::refuted;
    case Guard::Kind::atom: {
        const auto& a = g.atom();
        auto [u, v] = place(a);
        switch (a.rel) {
        case Relation::lt: return bound_status(d, u, v, B::lt(a.bound));
        case Relation::le: return bound_status(d, u, v, B::le(a.bound));
        case Relation::ge: return bound_status(d, v, u, B::le(-a.bound));
        case Relation::gt: return bound_status(d, v, u, B::lt(-a.bound));
        case Relation::eq: {
            auto up = bound_status(d, u, v, B::le(a.bound));
            auto down = bound_status(d, v, u, B::le(-a.bound));
            if (up == Status::refuted || down == Status::refuted) return Status::refuted;
            return up == Status::entailed && down == Status::entailed ? Status::entailed : Status::open;
        }
        }
        return Status::open;
    }
    case Guard::Kind::all: {
        bool all_entailed = true;
        for (const auto& c : g.children()) {
            auto s = status(d, c, place);
            if (s == Status::refuted) return Status::refuted;
            all_entailed = all_entailed && s == Status::entailed;
        }
        return all_entailed ? Status::entailed : Status::open;
    }
    case Guard::Kind::any: {
        bool all_refuted = true;
        for (const auto& c : g.children()) {
            auto s = status(d, c, place);
            if (s == Status::entailed) return Status::entailed;
            all_refuted = all_refuted && s == Status::refuted;
        }
        return all_refuted ? Status::refuted : Status::open;
    }
    }
    return Status::open;
}

// Depth-first walk over the disjunctive structure. Conjunctive items are
// applied first; then disjunctions already decided by the system are dropped,
// those with a single open alternative are applied, and the search branches
// on the disjunction with the fewest open alternatives. The visitor returns
// true to stop the search.
template <typename Visit>
bool explore(IntegerSystem d, std::vector<const Guard*> pending, std::vector<const Guard*> branches,
             const AtomPlacement& place, BranchBudget& budget, Visit& visit)
{
    for (;;) {
        while (!pending.empty()) {
            const Guard* g = pending.back();
            pending.pop_back();
            switch (g->kind()) {
            case Guard::Kind::top: break;
            case Guard::Kind::bottom: return false;
            case Guard::Kind::atom: {
                auto [u, v] = place(g->atom());
                if (!constrain(d, u, v, g->atom().rel, g->atom().bound)) return false;
                break;
            }
            case Guard::Kind::all:
                for (auto it = g->children().rbegin(); it != g->children().rend(); ++it) pending.push_back(&*it);
                break;
            case Guard::Kind::any: branches.push_back(g); break;
            }
        }
        std::vector<const Guard*> undecided;
        for (const Guard* b : branches) {
            const Guard* only = nullptr;
            std::size_t open = 0;
            bool entailed = false;
            for (const auto& c : b->children()) {
                auto s = status(d, c, place);
                if (s == Status::entailed) {
                    entailed = true;
                    break;
                }
                if (s == Status::open) {
                    ++open;
                    only = &c;
                }
            }
            if (entailed) continue;
            if (open == 0) return false;
            if (open == 1) pending.push_back(only);
            else undecided.push_back(b);
        }
        branches = std::move(undecided);
        if (pending.empty()) break;
    }
    if (branches.empty()) return visit(d);
    auto open_count = [&](const Guard* b) {
        return std::count_if(b->children().begin(), b->children().end(),
                             [&](const Guard& c) { return status(d, c, place) != Status::refuted; });
    };
    auto pick = std::min_element(branches.begin(), branches.end(),
                                 [&](const Guard* x, const Guard* y) { return open_count(x) < open_count(y); });
    const Guard* g = *pick;
    branches.erase(pick);
    for (const auto& c : g->children()) {
        if (status(d, c, place) == Status::refuted) continue;
        budget.spend();
        if (explore(d, {&c}, branches, place, budget, visit)) return true;
    }
    return false;
}

struct ClockIndex {
    std::map<ClockId, Eigen::Index> index;

    explicit ClockIndex(const std::set<ClockId>& clocks)
    {
        Eigen::Index i = 1;
        for (const auto& c : clocks) index[c] = i++;
    }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(index.size()) + 1; }
    std::pair<Eigen::Index, Eigen::Index> operator()(const AtomicConstraint& a) const
    {
        return {index.at(a.left), a.right ? index.at(*a.right) : 0};
    }
};

IntegerSystem initial_system(const ClockIndex& idx, const std::set<ClockId>& nonneg)
{
    IntegerSystem d(idx.dimension());
    for (const auto& [c, i] : idx.index)
        if (nonneg.count(c)) d.constrain(0, i, IntegerSystem::BoundType::le(0));
    return d;
}

}  // namespace

std::vector<IntegerSystem> conjoin(const IntegerSystem& base, const Guard& g, const AtomPlacement& place,
                                   BranchBudget& budget)
{
    std::vector<IntegerSystem> out;
    if (base.empty()) return out;
    auto collect = [&](const IntegerSystem& d) {
        out.push_back(d);
        return false;
    };
    explore(base, {&g}, {}, place, budget, collect);
    return out;
}

bool satisfiable_in(const IntegerSystem& base, const Guard& g, const AtomPlacement& place, BranchBudget& budget)
{
    if (base.empty()) return false;
    auto stop = [](const IntegerSystem&) { return true; };
    return explore(base, {&g}, {}, place, budget, stop);
}

bool is_satisfiable(const Guard& g, const std::set<ClockId>& nonneg, const SolverLimits& limits)
{
    if (g.is_top()) return true;
    if (g.is_bottom()) return false;
    ClockIndex idx(clocks_of(g));
    BranchBudget budget(limits.max_branches);
    return satisfiable_in(initial_system(idx, nonneg), g, std::cref(idx), budget);
}

bool is_satisfiable(const Guard& g, const SolverLimits& limits)
{
    return is_satisfiable(g, clocks_of(g), limits);
}

bool difference_satisfiable(const Guard& a, const Guard& b, const SolverLimits& limits)
{
    auto clocks = clocks_of(a);
    clocks.merge(clocks_of(b));
    ClockIndex idx(clocks);
    BranchBudget budget(limits.max_branches);
    const auto base = initial_system(idx, clocks);
    auto rest = conjoin(base, a, std::cref(idx), budget);
    for (const auto& w : conjoin(base, b, std::cref(idx), budget)) {
        std::vector<IntegerSystem> next;
        for (const auto& z : rest)
            for (auto& piece : subtract(z, w)) {
                budget.spend();
                next.push_back(std::move(piece));
            }
        rest = std::move(next);
        if (rest.empty()) return false;
    }
    return !rest.empty();
}

bool implies(const Guard& g1, const Guard& g2, const SolverLimits& limits)
{
    return !is_satisfiable(g1 && complement(g2), limits);
}

bool equivalent(const Guard& g1, const Guard& g2, const SolverLimits& limits)
{
    return implies(g1, g2, limits) && implies(g2, g1, limits);
}

std::optional<Valuation> find_model(const Guard& g, const SolverLimits& limits)
{
    auto clocks = clocks_of(g);
    ClockIndex idx(clocks);
    BranchBudget budget(limits.max_branches);
    std::optional<IntegerSystem> found;
    auto stop = [&](const IntegerSystem& d) {
        found = d;
        return true;
    };
    if (g.is_bottom()) return std::nullopt;
    explore(initial_system(idx, clocks), {&g}, {}, std::cref(idx), budget, stop);
    if (!found) return std::nullopt;
    auto point = pick_point(found->cast<Rational>());
    Valuation v;
    for (const auto& [c, i] : idx.index) v[c] = point[static_cast<std::size_t>(i)];
    return v;
}

namespace {

std::string smt_symbol(const ClockId& c)
{
    std::string s = "c_" + c.name();
    for (char ch : c.name())
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return "|" + s + "|";
    return s;
}

std::string smt_int(std::int64_t n) { return n < 0 ? "(- " + std::to_string(-n) + ")" : std::to_string(n); }

void emit(std::ostream& os, const Guard& g)
{
    switch (g.kind()) {
    case Guard::Kind::top: os << "true"; return;
    case Guard::Kind::bottom: os << "false"; return;
    case Guard::Kind::atom: {
        const auto& a = g.atom();
        std::string lhs = a.right ? "(- " + smt_symbol(a.left) + " " + smt_symbol(*a.right) + ")" : smt_symbol(a.left);
        std::string rel = a.rel == Relation::eq ? "=" : to_string(a.rel);
        os << "(" << rel << " " << lhs << " " << smt_int(a.bound) << ")";
        return;
    }
    case Guard::Kind::all:
    case Guard::Kind::any:
        os << (g.kind() == Guard::Kind::all ? "(and" : "(or");
        for (const auto& c : g.children()) {
            os << " ";
            emit(os, c);
        }
        os << ")";
        return;
    }
}

}  // namespace

std::string to_smtlib(const Guard& g, const std::set<ClockId>& clocks)
{
    std::set<ClockId> all = clocks;
    for (const auto& c : clocks_of(g)) all.insert(c);
    std::ostringstream os;
    os << "(set-logic QF_LRA)\n";
    for (const auto& c : all) os << "(declare-const " << smt_symbol(c) << " Real)\n";
    for (const auto& c : all) os << "(assert (>= " << smt_symbol(c) << " 0))\n";
    os << "(assert ";
    emit(os, g);
    os << ")\n(check-sat)\n";
    return os.str();
}

}  // namespace tadet
