#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace tadet {

// Upper bound on a difference x_i - x_j: (value, strict) or +infinity.
template <typename Scalar>
struct Bound {
    Scalar value{};
    bool strict = true;
    bool infinite = true;

    static Bound unbounded() { return {}; }
    static Bound le(Scalar v) { return {v, false, false}; }
    static Bound lt(Scalar v) { return {v, true, false}; }

    friend Bound operator+(const Bound& a, const Bound& b)
    {
        if (a.infinite || b.infinite) return unbounded();
        return {a.value + b.value, a.strict || b.strict, false};
    }
    friend bool operator<(const Bound& a, const Bound& b)
    {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value || (a.value == b.value && a.strict && !b.strict);
    }
    friend bool operator<=(const Bound& a, const Bound& b) { return !(b < a); }
    friend bool operator==(const Bound& a, const Bound& b)
    {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value && a.strict == b.strict;
    }
};

}  // namespace tadet

namespace Eigen {
template <typename Scalar>
struct NumTraits<tadet::Bound<Scalar>> : GenericNumTraits<tadet::Bound<Scalar>> {};
}  // namespace Eigen

namespace tadet {

// Difference-bound matrix over variables 0..n-1; variable 0 is the constant zero.
// Entry (i, j) bounds x_i - x_j. Mutators keep the matrix closed.
template <typename Scalar>
class DifferenceSystem {
public:
    using Index = Eigen::Index;
    using BoundType = Bound<Scalar>;
    using Matrix = Eigen::Matrix<BoundType, Eigen::Dynamic, Eigen::Dynamic>;

    explicit DifferenceSystem(Index dimension) : m_(dimension, dimension)
    {
        m_.setConstant(BoundType::unbounded());
        for (Index i = 0; i < dimension; ++i) m_(i, i) = BoundType::le(Scalar(0));
    }

    Index dimension() const { return m_.rows(); }
    const BoundType& operator()(Index i, Index j) const { return m_(i, j); }
    const Matrix& matrix() const { return m_; }
    bool empty() const { return empty_; }

    // Adds x_i - x_j <= b (or < b), restoring closure in O(n^2).
    bool constrain(Index i, Index j, const BoundType& b)
    {
        if (empty_) return false;
        if (!(b < m_(i, j))) return true;
        if (b + m_(j, i) < BoundType::le(Scalar(0))) {
            empty_ = true;
            return false;
        }
        m_(i, j) = b;
        const Index n = dimension();
        for (Index k = 0; k < n; ++k) {
            const BoundType ki = m_(k, i);
            if (ki.infinite) continue;
            const BoundType kij = ki + b;
            for (Index l = 0; l < n; ++l) {
                const BoundType via = kij + m_(j, l);
                if (via < m_(k, l)) m_(k, l) = via;
            }
        }
        return true;
    }

    // Sets an entry without restoring closure; follow with close().
    void set(Index i, Index j, const BoundType& b) { m_(i, j) = b; }

    // Floyd-Warshall closure with negative-cycle detection.
    bool close()
    {
        const Index n = dimension();
        for (Index k = 0; k < n; ++k)
            for (Index i = 0; i < n; ++i) {
                const BoundType ik = m_(i, k);
                if (ik.infinite) continue;
                for (Index j = 0; j < n; ++j) {
                    const BoundType via = ik + m_(k, j);
                    if (via < m_(i, j)) m_(i, j) = via;
                }
            }
        for (Index i = 0; i < n; ++i)
            if (m_(i, i) < BoundType::le(Scalar(0))) empty_ = true;
        return !empty_;
    }

    bool is_closed() const
    {
        const Index n = dimension();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                for (Index k = 0; k < n; ++k)
                    if (m_(i, k) + m_(k, j) < m_(i, j)) return false;
        return true;
    }

    // Restriction to the listed variables (keep[0] should be 0). On a closed
    // system this is exact existential elimination of the dropped variables.
    DifferenceSystem project(const std::vector<Index>& keep) const
    {
        DifferenceSystem out(static_cast<Index>(keep.size()));
        out.empty_ = empty_;
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b)
                out.m_(static_cast<Index>(a), static_cast<Index>(b)) = m_(keep[a], keep[b]);
        return out;
    }

    // Inclusion of closed systems: *this contains other.
    bool contains(const DifferenceSystem& other) const
    {
        if (other.empty_) return true;
        if (empty_) return false;
        const Index n = dimension();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (m_(i, j) < other.m_(i, j)) return false;
        return true;
    }

    template <typename Target>
    DifferenceSystem<Target> cast() const
    {
        DifferenceSystem<Target> out(dimension());
        for (Index i = 0; i < dimension(); ++i)
            for (Index j = 0; j < dimension(); ++j) {
                const BoundType& b = m_(i, j);
                out.set(i, j, b.infinite ? Bound<Target>::unbounded()
                                         : Bound<Target>{Target(b.value), b.strict, false});
            }
        if (empty_) out.mark_empty();
        return out;
    }

    void mark_empty() { empty_ = true; }

    friend bool operator==(const DifferenceSystem& a, const DifferenceSystem& b)
    {
        return a.empty_ == b.empty_ && a.m_ == b.m_;
    }

private:
    Matrix m_;
    bool empty_ = false;
};

using IntegerSystem = DifferenceSystem<std::int64_t>;

// Closed, pairwise disjoint systems whose union is z minus w. Each piece
// negates one constraint of w that z does not already imply.
template <typename Scalar>
std::vector<DifferenceSystem<Scalar>> subtract(const DifferenceSystem<Scalar>& z, const DifferenceSystem<Scalar>& w)
{
    using B = Bound<Scalar>;
    std::vector<DifferenceSystem<Scalar>> pieces;
    if (z.empty()) return pieces;
    if (w.empty()) return {z};
    DifferenceSystem<Scalar> rest = z;
    const auto n = z.dimension();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const B& b = w(i, j);
            if (i == j || b.infinite || !(b < rest(i, j))) continue;
            // not (x_i - x_j ~ c)  is  x_j - x_i ~' -c with flipped strictness
            DifferenceSystem<Scalar> piece = rest;
            if (piece.constrain(j, i, B{-b.value, !b.strict, false})) pieces.push_back(std::move(piece));
            if (!rest.constrain(i, j, b)) return pieces;
        }
    return pieces;
}

// Picks one point of a closed, non-empty system over an ordered field, fixing
// variables one at a time (midpoint of the feasible interval, or lower+1 when
// unbounded above). Entry 0 of the result is the zero variable.
template <typename Field>
std::vector<Field> pick_point(DifferenceSystem<Field> d)
{
    using B = Bound<Field>;
    const auto n = d.dimension();
    std::vector<Field> point(static_cast<std::size_t>(n), Field(0));
    for (Eigen::Index i = 1; i < n; ++i) {
        const B& up = d(i, 0);
        const B& down = d(0, i);  // 0 - x_i <= c  means  x_i >= -c
        Field lo = down.infinite ? Field(0) : -down.value;
        Field v;
        if (up.infinite) {
            v = down.infinite ? Field(0) : (down.strict ? lo + 1 : lo);
        } else if (!down.infinite && lo == up.value) {
            v = lo;
        } else if (down.infinite) {
            v = up.strict ? up.value - 1 : up.value;
        } else {
            v = (lo + up.value) / 2;
        }
        point[static_cast<std::size_t>(i)] = v;
        d.constrain(i, 0, B::le(v));
        d.constrain(0, i, B::le(-v));
    }
    return point;
}

}  // namespace tadet
