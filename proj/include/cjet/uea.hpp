#ifndef CJET_UEA_HPP
#define CJET_UEA_HPP

#include "strat_alg.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace cjet {

/// Exponent vector of a PBW monomial b1^{I_1} ... bn^{I_n}.
using MultiIdx = std::vector<std::uint32_t>;
/// Sequence of generator indices, read left to right as operator composition
/// (the rightmost factor acts first on functions).
using Word = std::vector<std::size_t>;

inline int multi_weight(const StratAlg &alg, const MultiIdx &idx) {
    int w = 0;
    for (std::size_t i = 0; i < idx.size(); ++i)
        w += alg.weight(i) * (int)idx[i];
    return w;
}

inline int word_weight(const StratAlg &alg, const Word &w) {
    int s = 0;
    for (auto i : w)
        s += alg.weight(i);
    return s;
}

/// All multi-indices of weight exactly m, in ascending lexicographic order.
inline std::vector<MultiIdx> weighted_multi_indices(const StratAlg &alg, int m) {
    std::vector<MultiIdx> out;
    MultiIdx cur(alg.dim(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rest) {
        if (pos == alg.dim()) {
            if (rest == 0)
                out.push_back(cur);
            return;
        }
        int w = alg.weight(pos);
        for (int e = 0; e * w <= rest; ++e) {
            cur[pos] = (std::uint32_t)e;
            rec(pos + 1, rest - e * w);
        }
        cur[pos] = 0;
    };
    if (m >= 0)
        rec(0, m);
    std::sort(out.begin(), out.end());
    return out;
}

/// All words of length k over the first-layer basis, in base-r numeric order.
inline std::vector<Word> v1_words(const StratAlg &alg, int k) {
    std::size_t r = alg.dim_v1();
    std::vector<Word> out;
    Word cur(k, 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = 0; i < r; ++i) {
            cur[pos] = i;
            rec(pos + 1);
        }
    };
    rec(0);
    return out;
}

/// Graded element of the universal enveloping algebra in PBW normal form,
/// truncated by weight. Coefficients are Rat or MPoly.
template <class K> struct UeaElemK {
    StratAlg::Ptr alg;
    int bound = 0;
    std::map<MultiIdx, K> terms;

    void add_term(const MultiIdx &idx, const K &c) {
        if (c.is_zero())
            return;
        auto it = terms.find(idx);
        if (it == terms.end()) {
            terms.emplace(idx, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }

    friend bool operator==(const UeaElemK &a, const UeaElemK &b) {
        return a.alg->same_as(*b.alg) && a.bound == b.bound && a.terms == b.terms;
    }
};

using UeaElem = UeaElemK<Rat>;

namespace detail {

/// Rewrites an agenda of generator words into PBW normal form, accumulating
/// into `out`. Adjacent out-of-order factors b_j b_i (j > i) are replaced by
/// b_i b_j minus the bracket correction, always at the leftmost position;
/// monomials heavier than `bound` are dropped.
template <class K>
void pbw_reduce(const StratAlg &alg, std::map<Word, K> agenda, int bound,
                std::map<MultiIdx, K> &out) {
    auto emit = [&](const MultiIdx &idx, const K &c) {
        if (c.is_zero())
            return;
        auto it = out.find(idx);
        if (it == out.end()) {
            out.emplace(idx, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                out.erase(it);
        }
    };
    auto push = [&](const Word &w, const K &c) {
        if (c.is_zero())
            return;
        auto it = agenda.find(w);
        if (it == agenda.end()) {
            agenda.emplace(w, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                agenda.erase(it);
        }
    };
    while (!agenda.empty()) {
        auto node = agenda.extract(agenda.begin());
        const Word &w = node.key();
        K c = std::move(node.mapped());
        if (word_weight(alg, w) > bound)
            continue;
        std::size_t t = 0;
        bool sorted = true;
        for (; t + 1 < w.size(); ++t)
            if (w[t] > w[t + 1]) {
                sorted = false;
                break;
            }
        if (sorted) {
            MultiIdx idx(alg.dim(), 0);
            for (auto i : w)
                ++idx[i];
            emit(idx, c);
            continue;
        }
        Word swapped = w;
        std::swap(swapped[t], swapped[t + 1]);
        push(swapped, c);
        // b_j b_i = b_i b_j - sum_k c_{ij}^k b_k  with i = w[t+1] < j = w[t]
        for (auto &bt : alg.basis_bracket(w[t + 1], w[t])) {
            Word contracted;
            contracted.reserve(w.size() - 1);
            contracted.insert(contracted.end(), w.begin(), w.begin() + t);
            contracted.push_back(bt.k);
            contracted.insert(contracted.end(), w.begin() + t + 2, w.end());
            K corr = c * (-bt.c);
            push(contracted, corr);
        }
    }
}

inline Word multi_to_word(const MultiIdx &idx) {
    Word w;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::uint32_t e = 0; e < idx[i]; ++e)
            w.push_back(i);
    return w;
}

} // namespace detail

/// PBW normal form of a product of generators, truncated by weight.
template <class K = Rat>
UeaElemK<K> pbw_normalize(const StratAlg::Ptr &alg, const Word &word, int bound,
                          const K &unit = Rat(1)) {
    UeaElemK<K> out{alg, bound, {}};
    std::map<Word, K> agenda;
    agenda.emplace(word, unit);
    detail::pbw_reduce(*alg, std::move(agenda), bound, out.terms);
    return out;
}

/// tau sends the tensor word v_1 (x) ... (x) v_m to the operator product
/// v~_m ... v~_1, i.e. the reversed word in composition order.
inline UeaElem tau(const StratAlg::Ptr &alg, const Word &xi, int m) {
    if ((int)xi.size() != m)
        throw std::invalid_argument("tau: word length must equal the degree");
    for (auto i : xi)
        if (alg->weight(i) != 1)
            throw std::invalid_argument("tau: word letters must lie in the first layer");
    Word rev(xi.rbegin(), xi.rend());
    return pbw_normalize<Rat>(alg, rev, m);
}

/// Full coefficient table of tau on the word basis: rows are words of length
/// m in base-r order, columns the multi-indices of weight m in lex order.
struct TauTable {
    int m = 0;
    std::vector<Word> words;
    std::vector<MultiIdx> indices;
    RatMatrix mat{0, 0};
};

inline std::shared_ptr<const TauTable> tau_coefficients(const StratAlg::Ptr &alg, int m) {
    return alg->cached<TauTable>("tau:" + std::to_string(m), [&]() {
        auto t = std::make_shared<TauTable>();
        t->m = m;
        t->words = v1_words(*alg, m);
        t->indices = weighted_multi_indices(*alg, m);
        std::map<MultiIdx, std::size_t> col;
        for (std::size_t c = 0; c < t->indices.size(); ++c)
            col[t->indices[c]] = c;
        t->mat = RatMatrix(t->words.size(), t->indices.size());
        for (std::size_t r = 0; r < t->words.size(); ++r) {
            UeaElem u = tau(alg, t->words[r], m);
            for (auto &[idx, c] : u.terms)
                t->mat.set(r, col.at(idx), c);
        }
        return t;
    });
}

template <class K>
UeaElemK<K> uea_one(const StratAlg::Ptr &alg, int bound, const K &unit) {
    UeaElemK<K> e{alg, bound, {}};
    e.add_term(MultiIdx(alg->dim(), 0), unit);
    return e;
}

template <class K>
UeaElemK<K> uea_multiply(const UeaElemK<K> &a, const UeaElemK<K> &b) {
    if (!a.alg->same_as(*b.alg) || a.bound != b.bound)
        throw std::invalid_argument("uea_multiply: algebra or weight bound mismatch");
    UeaElemK<K> out{a.alg, a.bound, {}};
    std::map<Word, K> agenda;
    for (auto &[ia, ca] : a.terms) {
        if (multi_weight(*a.alg, ia) > a.bound)
            continue;
        Word wa = detail::multi_to_word(ia);
        for (auto &[ib, cb] : b.terms) {
            Word w = wa;
            Word wb = detail::multi_to_word(ib);
            w.insert(w.end(), wb.begin(), wb.end());
            K c = ca * cb;
            if (c.is_zero())
                continue;
            auto it = agenda.find(w);
            if (it == agenda.end())
                agenda.emplace(std::move(w), std::move(c));
            else
                it->second += c;
        }
    }
    detail::pbw_reduce(*a.alg, std::move(agenda), a.bound, out.terms);
    return out;
}

/// Truncated exponential series of an element without constant term.
template <class K> UeaElemK<K> uea_exp(const UeaElemK<K> &x, const K &unit) {
    if (x.terms.count(MultiIdx(x.alg->dim(), 0)))
        throw std::invalid_argument("uea_exp: argument has a constant term");
    UeaElemK<K> sum = uea_one<K>(x.alg, x.bound, unit);
    UeaElemK<K> pw = sum;
    for (int k = 1; k <= x.bound && !pw.is_zero(); ++k) {
        pw = uea_multiply(pw, x);
        Rat inv_k = Rat(1, k);
        UeaElemK<K> scaled{x.alg, x.bound, {}};
        for (auto &[i, c] : pw.terms)
            scaled.add_term(i, c * inv_k);
        pw = scaled;
        for (auto &[i, c] : pw.terms)
            sum.add_term(i, c);
    }
    return sum;
}

/// Truncated logarithm of a group-like element (constant term 1).
template <class K> UeaElemK<K> uea_log(const UeaElemK<K> &u) {
    MultiIdx one(u.alg->dim(), 0);
    auto it = u.terms.find(one);
    if (it == u.terms.end() || !it->second.is_one())
        throw std::invalid_argument("uea_log: constant term must be 1");
    UeaElemK<K> w = u;
    w.terms.erase(one);
    UeaElemK<K> sum{u.alg, u.bound, {}};
    UeaElemK<K> pw = w;
    for (int k = 1; k <= u.bound && !pw.is_zero(); ++k) {
        Rat coef = Rat((k % 2) ? 1 : -1, k);
        for (auto &[i, c] : pw.terms)
            sum.add_term(i, c * coef);
        if (k < u.bound)
            pw = uea_multiply(pw, w);
    }
    return sum;
}

/// Degree-one (single-letter) coefficients; `pure` reports whether no other
/// monomials are present.
template <class K>
std::pair<std::vector<K>, bool> uea_degree_one(const UeaElemK<K> &u, const K &zero) {
    std::vector<K> coords(u.alg->dim(), zero);
    bool pure = true;
    for (auto &[idx, c] : u.terms) {
        std::uint32_t total = 0;
        std::size_t letter = 0;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            total += idx[i];
            if (idx[i])
                letter = i;
        }
        if (total == 1)
            coords[letter] += c;
        else
            pure = false;
    }
    return {coords, pure};
}

template <class K>
UeaElemK<K> uea_from_coords(const StratAlg::Ptr &alg, const std::vector<K> &coords, int bound) {
    UeaElemK<K> x{alg, bound, {}};
    for (std::size_t i = 0; i < coords.size(); ++i) {
        MultiIdx idx(alg->dim(), 0);
        idx[i] = 1;
        x.add_term(idx, coords[i]);
    }
    return x;
}

/// log(exp x · exp y) computed directly in the enveloping algebra.
inline AlgElem bch_via_uea(const AlgElem &x, const AlgElem &y) {
    x.require_same(y);
    int bound = x.alg->step();
    auto ex = uea_exp(uea_from_coords<Rat>(x.alg, x.coords, bound), Rat(1));
    auto ey = uea_exp(uea_from_coords<Rat>(y.alg, y.coords, bound), Rat(1));
    auto lg = uea_log(uea_multiply(ex, ey));
    auto [coords, pure] = uea_degree_one(lg, Rat(0));
    if (!pure)
        throw std::logic_error("bch: log(exp x exp y) is not a Lie element");
    return AlgElem(x.alg, coords);
}

/// Symbolic group law and the translation Jacobians derived from it.
/// polys[i] is the i-th coordinate of x·y in 2n variables (x block first).
struct BchTable {
    StratAlg::Ptr alg;
    std::vector<MPoly> polys;
    std::vector<std::vector<MPoly>> left_jac;     // d(x·y)_i / dy_k at y = 0, in x
    std::vector<std::vector<MPoly>> left_jac_inv; // exact polynomial inverse
    std::vector<std::vector<MPoly>> right_jac;    // d(x·y)_i / dx_k at x = 0, in y

    std::size_t dim() const { return alg->dim(); }
};

namespace detail {

/// Keep only monomials supported on [offset, offset+n) and drop the other
/// (necessarily unused) variables.
inline MPoly restrict_block(const MPoly &p, std::size_t offset, std::size_t n) {
    MPoly out(n);
    for (auto &[e, c] : p.terms()) {
        Expo f(n, 0);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0)
                continue;
            if (i < offset || i >= offset + n)
                throw std::logic_error("restrict_block: unexpected variable in polynomial");
            f[i - offset] = e[i];
        }
        out.add_term(f, c);
    }
    return out;
}

inline std::vector<std::vector<MPoly>> poly_mat_mul(const std::vector<std::vector<MPoly>> &a,
                                                    const std::vector<std::vector<MPoly>> &b,
                                                    std::size_t nvars) {
    std::size_t n = a.size(), m = b[0].size(), k = b.size();
    std::vector<std::vector<MPoly>> out(n, std::vector<MPoly>(m, MPoly(nvars)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < k; ++t)
                if (!a[i][t].is_zero() && !b[t][j].is_zero())
                    out[i][j] += a[i][t] * b[t][j];
    return out;
}

} // namespace detail

inline std::shared_ptr<const BchTable> bch_table(const StratAlg::Ptr &alg) {
    return alg->cached<BchTable>("bch_table", [&]() {
        std::size_t n = alg->dim();
        std::size_t nv = 2 * n;
        int bound = alg->step();
        MPoly unit = MPoly::constant(nv, Rat(1));
        std::vector<MPoly> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(MPoly::variable(nv, i));
            ys.push_back(MPoly::variable(nv, n + i));
        }
        auto ex = uea_exp(uea_from_coords<MPoly>(alg, xs, bound), unit);
        auto ey = uea_exp(uea_from_coords<MPoly>(alg, ys, bound), unit);
        auto lg = uea_log(uea_multiply(ex, ey));
        auto [polys, pure] = uea_degree_one(lg, MPoly(nv));
        if (!pure)
            throw std::logic_error("bch_table: group law is not a Lie element");

        auto table = std::make_shared<BchTable>();
        table->alg = alg;
        table->polys = polys;

        table->left_jac.assign(n, std::vector<MPoly>(n, MPoly(n)));
        table->right_jac.assign(n, std::vector<MPoly>(n, MPoly(n)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                MPoly dl = polys[i].derivative(n + k);
                for (std::size_t j = 0; j < n; ++j)
                    dl = dl.substitute(n + j, Rat(0));
                table->left_jac[i][k] = detail::restrict_block(dl, 0, n);
                MPoly dr = polys[i].derivative(k);
                for (std::size_t j = 0; j < n; ++j)
                    dr = dr.substitute(j, Rat(0));
                table->right_jac[i][k] = detail::restrict_block(dr, n, n);
            }

        // left_jac = Id + N with N nilpotent (entries raise the weight), so
        // the inverse is the finite alternating Neumann series.
        std::vector<std::vector<MPoly>> nil(n, std::vector<MPoly>(n, MPoly(n)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                nil[i][k] = table->left_jac[i][k];
                if (i == k)
                    nil[i][k] -= MPoly::constant(n, Rat(1));
            }
        std::vector<std::vector<MPoly>> inv(n, std::vector<MPoly>(n, MPoly(n)));
        std::vector<std::vector<MPoly>> pw(n, std::vector<MPoly>(n, MPoly(n)));
        for (std::size_t i = 0; i < n; ++i) {
            inv[i][i] = MPoly::constant(n, Rat(1));
            pw[i][i] = MPoly::constant(n, Rat(1));
        }
        for (int k = 1; k <= alg->step(); ++k) {
            pw = detail::poly_mat_mul(pw, nil, n);
            Rat sgn((k % 2) ? -1 : 1);
            bool all_zero = true;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (!pw[i][j].is_zero()) {
                        all_zero = false;
                        inv[i][j] += pw[i][j] * sgn;
                    }
            if (all_zero)
                break;
        }
        table->left_jac_inv = inv;
        return table;
    });
}

/// Group product in exponential coordinates through the cached symbolic law.
inline AlgElem bch(const AlgElem &x, const AlgElem &y) {
    x.require_same(y);
    auto table = bch_table(x.alg);
    RatVec xy(x.coords);
    xy.insert(xy.end(), y.coords.begin(), y.coords.end());
    RatVec out(x.alg->dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = table->polys[i].eval(xy);
    return AlgElem(x.alg, out);
}

inline AlgElem group_inverse(const AlgElem &x) { return -x; }

/// Group law with x fixed: polynomials q·y in the y coordinates.
inline std::vector<MPoly> left_translation_polys(const StratAlg::Ptr &alg, const RatVec &q) {
    auto table = bch_table(alg);
    std::size_t n = alg->dim();
    std::vector<MPoly> out;
    for (std::size_t i = 0; i < n; ++i) {
        MPoly p = table->polys[i];
        for (std::size_t j = 0; j < n; ++j)
            p = p.substitute(j, q[j]);
        out.push_back(detail::restrict_block(p, n, n));
    }
    return out;
}

/// Group law with y fixed: polynomials x·q in the x coordinates.
inline std::vector<MPoly> right_translation_polys(const StratAlg::Ptr &alg, const RatVec &q) {
    auto table = bch_table(alg);
    std::size_t n = alg->dim();
    std::vector<MPoly> out;
    for (std::size_t i = 0; i < n; ++i) {
        MPoly p = table->polys[i];
        for (std::size_t j = 0; j < n; ++j)
            p = p.substitute(n + j, q[j]);
        out.push_back(detail::restrict_block(p, 0, n));
    }
    return out;
}

/// Top-layer defect of the group law: eta_c(x, y) in 2n variables, one
/// polynomial per top-layer basis vector, with
/// (x·y)_top = x_top + y_top + eta(x, y).
inline std::vector<MPoly> eta_polys(const StratAlg::Ptr &alg) {
    auto table = bch_table(alg);
    std::size_t n = alg->dim();
    std::vector<MPoly> out;
    for (auto i : alg->layer(alg->step())) {
        MPoly p = table->polys[i];
        p -= MPoly::variable(2 * n, i);
        p -= MPoly::variable(2 * n, n + i);
        out.push_back(p);
    }
    return out;
}

} // namespace cjet

#endif
