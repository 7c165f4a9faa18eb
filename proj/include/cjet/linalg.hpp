#ifndef CJET_LINALG_HPP
#define CJET_LINALG_HPP

#include "rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace cjet {

using RatVec = std::vector<Rat>;

inline RatVec &operator+=(RatVec &a, const RatVec &b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += b[i];
    return a;
}

inline RatVec operator*(const Rat &c, RatVec v) {
    for (auto &x : v)
        x *= c;
    return v;
}

inline bool is_zero(const RatVec &v) {
    for (auto &x : v)
        if (!x.is_zero())
            return false;
    return true;
}

/// Sparse exact matrix; zero entries are never stored.
class RatMatrix {
  public:
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    const Rat &at(std::size_t r, std::size_t c) const {
        static const Rat zero;
        check(r, c);
        auto it = entries_.find({r, c});
        return it == entries_.end() ? zero : it->second;
    }

    void set(std::size_t r, std::size_t c, const Rat &v) {
        check(r, c);
        if (v.is_zero())
            entries_.erase({r, c});
        else
            entries_[{r, c}] = v;
    }

    void add(std::size_t r, std::size_t c, const Rat &v) { set(r, c, at(r, c) + v); }

    const std::map<std::pair<std::size_t, std::size_t>, Rat> &entries() const { return entries_; }

    RatVec apply(const RatVec &x) const {
        RatVec y(rows_, Rat(0));
        for (auto &[rc, v] : entries_)
            y[rc.first] += v * x[rc.second];
        return y;
    }

    RatMatrix transposed() const {
        RatMatrix t(cols_, rows_);
        for (auto &[rc, v] : entries_)
            t.set(rc.second, rc.first, v);
        return t;
    }

    RatMatrix mul(const RatMatrix &o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("RatMatrix: shape mismatch");
        RatMatrix p(rows_, o.cols_);
        for (auto &[rc, v] : entries_)
            for (std::size_t j = 0; j < o.cols_; ++j) {
                const Rat &w = o.at(rc.second, j);
                if (!w.is_zero())
                    p.add(rc.first, j, v * w);
            }
        return p;
    }

    friend bool operator==(const RatMatrix &a, const RatMatrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

  private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_)
            throw std::out_of_range("RatMatrix: index out of bounds");
    }
    std::size_t rows_, cols_;
    std::map<std::pair<std::size_t, std::size_t>, Rat> entries_;
};

namespace detail {

/// Dense working form used by the elimination routines.
struct Rref {
    std::vector<RatVec> rows;     // reduced rows, one per pivot
    std::vector<std::size_t> pivots; // pivot column per row
};

inline Rref row_reduce(const RatMatrix &a) {
    std::vector<RatVec> m(a.rows(), RatVec(a.cols(), Rat(0)));
    for (auto &[rc, v] : a.entries())
        m[rc.first][rc.second] = v;
    Rref out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < m.size(); ++col) {
        std::size_t piv = row;
        while (piv < m.size() && m[piv][col].is_zero())
            ++piv;
        if (piv == m.size())
            continue;
        std::swap(m[row], m[piv]);
        Rat lead = m[row][col];
        for (auto &x : m[row])
            x /= lead;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || m[r][col].is_zero())
                continue;
            Rat f = m[r][col];
            for (std::size_t c = col; c < a.cols(); ++c)
                m[r][c] -= f * m[row][c];
        }
        out.pivots.push_back(col);
        ++row;
    }
    m.resize(row);
    out.rows = std::move(m);
    return out;
}

} // namespace detail

inline std::size_t rank(const RatMatrix &a) { return detail::row_reduce(a).pivots.size(); }

/// Exact solution of A·x = b, or nullopt when the system is inconsistent.
/// Underdetermined systems follow the reduced-echelon convention: free
/// variables are set to zero.
inline std::optional<RatVec> solve_linear(const RatMatrix &a, const RatVec &b) {
    if (a.rows() != b.size())
        throw std::invalid_argument("solve_linear: rhs length mismatch");
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (auto &[rc, v] : a.entries())
        aug.set(rc.first, rc.second, v);
    for (std::size_t r = 0; r < b.size(); ++r)
        aug.set(r, a.cols(), b[r]);
    auto rr = detail::row_reduce(aug);
    RatVec x(a.cols(), Rat(0));
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
        if (rr.pivots[i] == a.cols())
            return std::nullopt; // pivot in the rhs column: 0 = 1
        x[rr.pivots[i]] = rr.rows[i][a.cols()];
    }
    return x;
}

/// Basis of the null space of A; empty when A is injective.
inline std::vector<RatVec> kernel_basis(const RatMatrix &a) {
    auto rr = detail::row_reduce(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : rr.pivots)
        is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free])
            continue;
        RatVec v(a.cols(), Rat(0));
        v[free] = Rat(1);
        for (std::size_t i = 0; i < rr.pivots.size(); ++i)
            v[rr.pivots[i]] = -rr.rows[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Left inverse L with L·A = Id, for A of full column rank.
inline std::optional<RatMatrix> left_inverse(const RatMatrix &a) {
    RatMatrix at = a.transposed();
    RatMatrix gram = at.mul(a); // invertible iff full column rank
    if (rank(gram) != a.cols())
        return std::nullopt;
    RatMatrix li(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.rows(); ++j) {
        RatVec col(a.cols(), Rat(0));
        for (std::size_t i = 0; i < a.cols(); ++i)
            col[i] = at.at(i, j);
        auto x = solve_linear(gram, col);
        if (!x)
            return std::nullopt;
        for (std::size_t i = 0; i < a.cols(); ++i)
            li.set(i, j, (*x)[i]);
    }
    return li;
}

} // namespace cjet

#endif
