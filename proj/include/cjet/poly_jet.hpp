#ifndef CJET_POLY_JET_HPP
#define CJET_POLY_JET_HPP

#include "hd_space.hpp"

namespace cjet {

/// W-valued polynomial in exponential coordinates, one scalar component per
/// W coordinate.
struct WPoly {
    StratAlg::Ptr alg;
    int wdim = 1;
    std::vector<MPoly> comps;

    static WPoly zero(StratAlg::Ptr alg, int wdim) {
        WPoly p{alg, wdim, {}};
        p.comps.assign(wdim, MPoly(p.alg->dim()));
        return p;
    }
    static WPoly scalar(StratAlg::Ptr alg, MPoly c) {
        if (c.nvars() != alg->dim())
            throw std::invalid_argument("WPoly: wrong variable count");
        WPoly p{std::move(alg), 1, {}};
        p.comps.push_back(std::move(c));
        return p;
    }

    bool is_zero() const {
        for (auto &c : comps)
            if (!c.is_zero())
                return false;
        return true;
    }

    RatVec eval(const RatVec &x) const {
        RatVec out;
        for (auto &c : comps)
            out.push_back(c.eval(x));
        return out;
    }

    /// Largest weighted degree among the monomials.
    int weighted_degree() const {
        int d = 0;
        for (auto &c : comps)
            for (auto &[e, v] : c.terms()) {
                int w = 0;
                for (std::size_t i = 0; i < e.size(); ++i)
                    w += alg->weight(i) * (int)e[i];
                d = std::max(d, w);
            }
        return d;
    }

    WPoly &operator+=(const WPoly &o) {
        require_compatible(o);
        for (int c = 0; c < wdim; ++c)
            comps[c] += o.comps[c];
        return *this;
    }
    friend WPoly operator+(WPoly a, const WPoly &b) { return a += b; }
    friend WPoly operator-(WPoly a, const WPoly &b) {
        a.require_compatible(b);
        for (int c = 0; c < a.wdim; ++c)
            a.comps[c] -= b.comps[c];
        return a;
    }
    friend WPoly operator*(const Rat &c, WPoly a) {
        for (auto &p : a.comps)
            p *= c;
        return a;
    }
    friend bool operator==(const WPoly &a, const WPoly &b) {
        return a.alg->same_as(*b.alg) && a.wdim == b.wdim && a.comps == b.comps;
    }

    void require_compatible(const WPoly &o) const {
        if (!alg->same_as(*o.alg) || wdim != o.wdim)
            throw std::invalid_argument("WPoly: incompatible operands");
    }
};

namespace detail {

/// Coefficient functions of the invariant vector field of v: the field is
/// sum_i a_i(x) d/dx_i with a = jac * v.
inline std::vector<MPoly> field_coeffs(const std::vector<std::vector<MPoly>> &jac, const RatVec &v) {
    std::size_t n = jac.size();
    std::vector<MPoly> a(n, MPoly(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (!v[k].is_zero() && !jac[i][k].is_zero())
                a[i] += jac[i][k] * v[k];
    return a;
}

inline MPoly derive_by_coeffs(const MPoly &f, const std::vector<MPoly> &a) {
    MPoly out(f.nvars());
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero())
            out += a[i] * f.derivative(i);
    return out;
}

} // namespace detail

/// Left-invariant derivative v~f, exact on polynomials.
inline WPoly left_inv_derive(const AlgElem &v, const WPoly &f) {
    if (!v.alg->same_as(*f.alg))
        throw std::invalid_argument("left_inv_derive: algebra mismatch");
    auto table = bch_table(f.alg);
    auto a = detail::field_coeffs(table->left_jac, v.coords);
    WPoly out = WPoly::zero(f.alg, f.wdim);
    for (int c = 0; c < f.wdim; ++c)
        out.comps[c] = detail::derive_by_coeffs(f.comps[c], a);
    return out;
}

/// Right-invariant derivative v'f.
inline WPoly right_inv_derive(const AlgElem &v, const WPoly &f) {
    if (!v.alg->same_as(*f.alg))
        throw std::invalid_argument("right_inv_derive: algebra mismatch");
    auto table = bch_table(f.alg);
    auto a = detail::field_coeffs(table->right_jac, v.coords);
    WPoly out = WPoly::zero(f.alg, f.wdim);
    for (int c = 0; c < f.wdim; ++c)
        out.comps[c] = detail::derive_by_coeffs(f.comps[c], a);
    return out;
}

/// All iterated left-invariant derivatives of f along first-layer words, as
/// polynomials: level k maps each word of length k to the polynomial
/// v~_{i_k} ... v~_{i_1} f.
inline std::vector<std::map<Word, WPoly>> derivative_tables(const WPoly &f, int m) {
    auto table = bch_table(f.alg);
    std::size_t r = f.alg->dim_v1();
    std::vector<std::vector<MPoly>> fields;
    for (std::size_t j = 0; j < r; ++j) {
        RatVec v(f.alg->dim(), Rat(0));
        v[j] = Rat(1);
        fields.push_back(detail::field_coeffs(table->left_jac, v));
    }
    std::vector<std::map<Word, WPoly>> levels(m + 1);
    levels[0][{}] = f;
    for (int k = 1; k <= m; ++k)
        for (auto &[w, g] : levels[k - 1])
            for (std::size_t j = 0; j < r; ++j) {
                Word ext = w;
                ext.push_back(j);
                WPoly d = WPoly::zero(f.alg, f.wdim);
                for (int c = 0; c < f.wdim; ++c)
                    d.comps[c] = detail::derive_by_coeffs(g.comps[c], fields[j]);
                levels[k][ext] = std::move(d);
            }
    return levels;
}

/// Horizontal derivative stack of f at p up to degree m; each degree is
/// checked to lie in the horizontal space.
inline HdStack horizontal_stack(const WPoly &f, const AlgElem &p, int m) {
    if (!p.alg->same_as(*f.alg))
        throw std::invalid_argument("horizontal_stack: algebra mismatch");
    auto levels = derivative_tables(f, m);
    HdStack s = HdStack::zero(f.alg, f.wdim, m);
    for (int k = 0; k <= m; ++k)
        for (auto &[w, g] : levels[k])
            s.parts[k].add_term(w, g.eval(p.coords));
    for (int k = 0; k <= m; ++k)
        if (!hd_membership(s.parts[k]).member)
            throw std::logic_error("horizontal_stack: a derivative escaped the horizontal space");
    return s;
}

/// Apply a pure-weight enveloping-algebra element as a differential operator
/// and evaluate: <D|f>_p = Df(p). The PBW monomial acts with its rightmost
/// factor first.
inline RatVec pairing(const UeaElem &d, const WPoly &f, const AlgElem &p) {
    if (!d.alg->same_as(*f.alg))
        throw std::invalid_argument("pairing: algebra mismatch");
    RatVec out(f.wdim, Rat(0));
    for (auto &[idx, c] : d.terms) {
        WPoly g = f;
        for (std::size_t i = idx.size(); i-- > 0;)
            for (std::uint32_t e = 0; e < idx[i]; ++e)
                g = left_inv_derive(AlgElem::basis(f.alg, i), g);
        out += c * g.eval(p.coords);
    }
    return out;
}

/// Monomials x^I as scalar polynomials.
inline MPoly coord_monomial(const StratAlg::Ptr &alg, const MultiIdx &idx) {
    MPoly t(alg->dim());
    t.add_term(Expo(idx.begin(), idx.end()), Rat(1));
    return t;
}

struct DualPolyBasis {
    int m = 0;
    AlgElem center;
    std::vector<MultiIdx> indices;
    std::vector<MPoly> polys; // scalar basis dual to the PBW monomials at the center
};

/// Basis of the weight-m homogeneous polynomials at p dual to the PBW
/// operator monomials of weight m.
inline std::shared_ptr<const DualPolyBasis> dual_poly_basis(const AlgElem &p, int m) {
    const auto &alg = p.alg;
    std::string key = "dual_poly:" + std::to_string(m) + ":";
    for (auto &c : p.coords)
        key += c.str() + ",";
    return alg->cached<DualPolyBasis>(key, [&]() {
        auto out = std::make_shared<DualPolyBasis>();
        out->m = m;
        out->center = p;
        out->indices = weighted_multi_indices(*alg, m);
        std::size_t d = out->indices.size();
        // spanning set: monomials translated to be homogeneous at p
        auto shift = left_translation_polys(alg, (-p).coords); // coordinates of p^{-1} q
        std::vector<MPoly> span;
        for (auto &idx : out->indices)
            span.push_back(coord_monomial(alg, idx).compose(shift));
        // pairing of operators against the spanning set
        RatMatrix pair(d, d);
        std::vector<UeaElem> ops;
        for (auto &idx : out->indices) {
            UeaElem op{alg, m, {}};
            op.add_term(idx, Rat(1));
            ops.push_back(op);
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                pair.set(i, j, pairing(ops[i], WPoly::scalar(alg, span[j]), p)[0]);
        // dual basis coefficients: pair * C = Id
        for (std::size_t col = 0; col < d; ++col) {
            RatVec e(d, Rat(0));
            e[col] = Rat(1);
            auto sol = solve_linear(pair, e);
            if (!sol)
                throw std::logic_error("dual_poly_basis: pairing matrix is singular");
            MPoly q(alg->dim());
            for (std::size_t j = 0; j < d; ++j)
                if (!(*sol)[j].is_zero())
                    q += span[j] * (*sol)[j];
            out->polys.push_back(std::move(q));
        }
        return out;
    });
}

/// Homogeneous components of the weighted Taylor expansion of f at p up to
/// order m.
inline std::vector<WPoly> taylor(const WPoly &f, const AlgElem &p, int m) {
    std::vector<WPoly> out;
    for (int k = 0; k <= m; ++k) {
        auto dual = dual_poly_basis(p, k);
        WPoly comp = WPoly::zero(f.alg, f.wdim);
        for (std::size_t i = 0; i < dual->indices.size(); ++i) {
            UeaElem op{f.alg, k, {}};
            op.add_term(dual->indices[i], Rat(1));
            RatVec coeff = pairing(op, f, p);
            for (int c = 0; c < f.wdim; ++c)
                if (!coeff[c].is_zero())
                    comp.comps[c] += dual->polys[i] * coeff[c];
        }
        out.push_back(std::move(comp));
    }
    return out;
}

/// Polynomial map q -> coordinates of the dilation by `lam` centered at p,
/// with `lam` a formal variable appended after the coordinates.
inline std::vector<MPoly> centered_dilation_polys(const StratAlg::Ptr &alg, const AlgElem &p) {
    std::size_t n = alg->dim();
    auto to_p = left_translation_polys(alg, (-p).coords);  // p^{-1} q
    auto from_p = left_translation_polys(alg, p.coords);   // p q
    std::vector<MPoly> scaled;                             // delta_lam (p^{-1} q), in n+1 vars
    for (std::size_t i = 0; i < n; ++i) {
        MPoly lam_pow = MPoly::variable(n + 1, n).pow((std::uint32_t)alg->weight(i));
        scaled.push_back(to_p[i].embed(n + 1, 0) * lam_pow);
    }
    std::vector<MPoly> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(from_p[i].compose(scaled));
    return out;
}

/// Checks delta_{p,lam}^* f = lam^m f as a polynomial identity in a formal
/// variable lam.
inline bool is_homogeneous(const WPoly &f, const AlgElem &p, int m) {
    std::size_t n = f.alg->dim();
    auto dil = centered_dilation_polys(f.alg, p);
    MPoly lam_m = MPoly::variable(n + 1, n).pow((std::uint32_t)m);
    for (auto &c : f.comps)
        if (c.compose(dil) != c.embed(n + 1, 0) * lam_m)
            return false;
    return true;
}

/// sigma_p sends a polynomial homogeneous of weight m at p to its m-th
/// horizontal derivative stack at p.
inline HdElem sigma_p(const WPoly &f, const AlgElem &p, int m) {
    return horizontal_stack(f, p, m).parts[m];
}

/// Inverse of sigma_p through the dual bases; requires a horizontal element.
inline WPoly sigma_p_inverse(const HdElem &a, const AlgElem &p) {
    auto mem = hd_membership(a);
    if (!mem.member)
        throw std::invalid_argument("sigma_p_inverse: element is not horizontal");
    auto dual = dual_poly_basis(p, a.degree);
    std::map<MultiIdx, std::size_t> pos;
    for (std::size_t i = 0; i < dual->indices.size(); ++i)
        pos[dual->indices[i]] = i;
    WPoly f = WPoly::zero(a.alg, a.wdim);
    for (auto &[idx, coeff] : mem.expansion)
        for (int c = 0; c < a.wdim; ++c)
            if (!coeff[c].is_zero())
                f.comps[c] += dual->polys[pos.at(idx)] * coeff[c];
    return f;
}

/// Change of basis between the two natural bases of HD^m: column J gives the
/// expansion of sigma_e(x^J) in the tau-dual basis {A_I}.
inline RatMatrix sigma_monomial_matrix(const StratAlg::Ptr &alg, int m) {
    auto idxs = weighted_multi_indices(*alg, m);
    auto basis = hd_basis(alg, m);
    RatMatrix out(basis->indices.size(), idxs.size());
    AlgElem e = AlgElem::zero(alg);
    for (std::size_t j = 0; j < idxs.size(); ++j) {
        HdElem a = sigma_p(WPoly::scalar(alg, coord_monomial(alg, idxs[j])), e, m);
        auto mem = hd_membership(a);
        if (!mem.member)
            throw std::logic_error("sigma_monomial_matrix: monomial image not horizontal");
        for (auto &[idx, c] : mem.expansion) {
            for (std::size_t i = 0; i < basis->indices.size(); ++i)
                if (basis->indices[i] == idx)
                    out.set(i, j, c[0]);
        }
    }
    return out;
}

} // namespace cjet

#endif
