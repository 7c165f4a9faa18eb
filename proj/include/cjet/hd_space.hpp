#ifndef CJET_HD_SPACE_HPP
#define CJET_HD_SPACE_HPP

#include "uea.hpp"

namespace cjet {

/// W-valued k-multilinear map on the first layer, stored densely in the
/// word basis: coeffs[word] is the W-vector A(b_{word_1}, ..., b_{word_k}).
struct HdElem {
    StratAlg::Ptr alg;
    int wdim = 1;
    int degree = 0;
    std::map<Word, RatVec> coeffs;

    static HdElem zero(StratAlg::Ptr alg, int wdim, int degree) {
        return HdElem{std::move(alg), wdim, degree, {}};
    }

    bool is_zero() const { return coeffs.empty(); }

    void add_term(const Word &w, const RatVec &v) {
        if ((int)w.size() != degree)
            throw std::invalid_argument("HdElem: word length differs from degree");
        auto it = coeffs.find(w);
        if (it == coeffs.end()) {
            if (!cjet::is_zero(v))
                coeffs.emplace(w, v);
            return;
        }
        it->second += v;
        if (cjet::is_zero(it->second))
            coeffs.erase(it);
    }

    RatVec value(const Word &w) const {
        auto it = coeffs.find(w);
        return it == coeffs.end() ? RatVec(wdim, Rat(0)) : it->second;
    }

    HdElem &operator+=(const HdElem &o) {
        require_compatible(o);
        for (auto &[w, v] : o.coeffs)
            add_term(w, v);
        return *this;
    }
    friend HdElem operator+(HdElem a, const HdElem &b) { return a += b; }
    friend HdElem operator*(const Rat &c, HdElem a) {
        if (c.is_zero())
            a.coeffs.clear();
        else
            for (auto &[w, v] : a.coeffs)
                v = c * v;
        return a;
    }
    HdElem operator-() const { return Rat(-1) * *this; }
    friend HdElem operator-(HdElem a, const HdElem &b) { return a += Rat(-1) * b; }
    friend bool operator==(const HdElem &a, const HdElem &b) {
        return a.alg->same_as(*b.alg) && a.wdim == b.wdim && a.degree == b.degree &&
               a.coeffs == b.coeffs;
    }

    void require_compatible(const HdElem &o) const {
        if (!alg->same_as(*o.alg) || wdim != o.wdim || degree != o.degree)
            throw std::invalid_argument("HdElem: incompatible operands");
    }
};

/// Direct sum of degrees 0..top.
struct HdStack {
    StratAlg::Ptr alg;
    int wdim = 1;
    int top = 0;
    std::vector<HdElem> parts; // index = degree

    static HdStack zero(StratAlg::Ptr alg, int wdim, int top) {
        HdStack s{alg, wdim, top, {}};
        for (int k = 0; k <= top; ++k)
            s.parts.push_back(HdElem::zero(alg, wdim, k));
        return s;
    }

    bool is_zero() const {
        for (auto &p : parts)
            if (!p.is_zero())
                return false;
        return true;
    }

    HdStack &operator+=(const HdStack &o) {
        require_compatible(o);
        for (int k = 0; k <= top; ++k)
            parts[k] += o.parts[k];
        return *this;
    }
    friend HdStack operator+(HdStack a, const HdStack &b) { return a += b; }
    friend HdStack operator*(const Rat &c, HdStack a) {
        for (auto &p : a.parts)
            p = c * p;
        return a;
    }
    friend HdStack operator-(HdStack a, const HdStack &b) { return a += Rat(-1) * b; }
    friend bool operator==(const HdStack &a, const HdStack &b) {
        return a.top == b.top && a.parts == b.parts;
    }

    void require_compatible(const HdStack &o) const {
        if (!alg->same_as(*o.alg) || wdim != o.wdim || top != o.top)
            throw std::invalid_argument("HdStack: incompatible operands");
    }
};

/// Basis data of HD^m(g;R) dual to the PBW monomials of weight m, plus the
/// exact linear algebra needed for membership tests.
struct HdBasis {
    int m = 0;
    std::vector<Word> words;         // word basis of the tensor power
    std::vector<MultiIdx> indices;   // weight-m multi-indices, lex order
    std::vector<HdElem> elements;    // scalar A_I, same order as `indices`
    RatMatrix mat{0, 0};             // words x indices; column I is A_I
    RatMatrix extract{0, 0};         // left inverse of mat
    std::vector<RatVec> tau_kernel;  // kernel of mat^T: relations among tau images
    std::map<Word, std::size_t> word_pos;
};

inline std::shared_ptr<const HdBasis> hd_basis(const StratAlg::Ptr &alg, int m) {
    return alg->cached<HdBasis>("hd_basis:" + std::to_string(m), [&]() {
        auto b = std::make_shared<HdBasis>();
        b->m = m;
        if (m == 0) {
            b->words = {Word{}};
            b->indices = {MultiIdx(alg->dim(), 0)};
            HdElem unit = HdElem::zero(alg, 1, 0);
            unit.add_term({}, {Rat(1)});
            b->elements = {unit};
            b->mat = RatMatrix(1, 1);
            b->mat.set(0, 0, Rat(1));
            b->extract = b->mat;
            b->word_pos[{}] = 0;
            return b;
        }
        auto tt = tau_coefficients(alg, m);
        b->words = tt->words;
        b->indices = tt->indices;
        b->mat = tt->mat;
        for (std::size_t i = 0; i < b->words.size(); ++i)
            b->word_pos[b->words[i]] = i;
        for (std::size_t c = 0; c < b->indices.size(); ++c) {
            HdElem a = HdElem::zero(alg, 1, m);
            for (std::size_t r = 0; r < b->words.size(); ++r) {
                Rat v = b->mat.at(r, c);
                if (!v.is_zero())
                    a.add_term(b->words[r], {v});
            }
            b->elements.push_back(std::move(a));
        }
        auto li = left_inverse(b->mat);
        if (!li)
            throw std::logic_error("hd_basis: tau table lost column rank");
        b->extract = *li;
        b->tau_kernel = kernel_basis(b->mat.transposed());
        return b;
    });
}

/// {A_I (x) c} over a coordinatized W.
inline std::vector<HdElem> hd_basis_elems(const StratAlg::Ptr &alg, int m, int wdim) {
    auto b = hd_basis(alg, m);
    std::vector<HdElem> out;
    for (auto &a : b->elements)
        for (int c = 0; c < wdim; ++c) {
            HdElem e = HdElem::zero(alg, wdim, m);
            for (auto &[w, v] : a.coeffs) {
                RatVec val(wdim, Rat(0));
                val[c] = v[0];
                e.add_term(w, val);
            }
            out.push_back(std::move(e));
        }
    return out;
}

inline std::size_t hd_dim(const StratAlg::Ptr &alg, int m) {
    return hd_basis(alg, m)->indices.size();
}

struct HdMembership {
    bool member = false;
    std::map<MultiIdx, RatVec> expansion; // coefficient of A_I per W component
    std::map<Word, Rat> witness;          // kernel combination of words
    RatVec witness_value;                 // A paired with the witness; nonzero
};

/// Expands a raw multilinear map in the {A_I} basis, or produces a witness in
/// the kernel of tau on which the map does not vanish.
inline HdMembership hd_membership(const HdElem &a) {
    auto b = hd_basis(a.alg, a.degree);
    HdMembership out;
    // pair with every kernel relation
    for (auto &ker : b->tau_kernel) {
        RatVec pairing(a.wdim, Rat(0));
        for (std::size_t r = 0; r < b->words.size(); ++r)
            if (!ker[r].is_zero())
                pairing += ker[r] * a.value(b->words[r]);
        if (!cjet::is_zero(pairing)) {
            out.member = false;
            for (std::size_t r = 0; r < b->words.size(); ++r)
                if (!ker[r].is_zero())
                    out.witness[b->words[r]] = ker[r];
            out.witness_value = pairing;
            return out;
        }
    }
    out.member = true;
    for (int c = 0; c < a.wdim; ++c) {
        RatVec comp(b->words.size(), Rat(0));
        for (auto &[w, v] : a.coeffs)
            comp[b->word_pos.at(w)] = v[c];
        RatVec coef = b->extract.apply(comp);
        for (std::size_t i = 0; i < coef.size(); ++i) {
            if (coef[i].is_zero())
                continue;
            auto it = out.expansion.find(b->indices[i]);
            if (it == out.expansion.end())
                it = out.expansion.emplace(b->indices[i], RatVec(a.wdim, Rat(0))).first;
            it->second[c] = coef[i];
        }
    }
    return out;
}

/// Right contraction by a first-layer vector (coordinates over the V1 basis):
/// (v -| A)(v_1,...,v_{k-1}) = A(v_1,...,v_{k-1},v).
inline HdElem contract_v1(const RatVec &v1coords, const HdElem &a) {
    if (v1coords.size() != a.alg->dim_v1())
        throw std::invalid_argument("contract_v1: vector must have first-layer coordinates");
    if (a.degree == 0)
        return HdElem::zero(a.alg, a.wdim, 0);
    HdElem out = HdElem::zero(a.alg, a.wdim, a.degree - 1);
    for (auto &[w, v] : a.coeffs) {
        const Rat &c = v1coords[w.back()];
        if (c.is_zero())
            continue;
        Word pre(w.begin(), w.end() - 1);
        out.add_term(pre, c * v);
    }
    return out;
}

inline HdElem contract_v1(const AlgElem &v, const HdElem &a) {
    for (std::size_t i = 0; i < v.coords.size(); ++i)
        if (!v.coords[i].is_zero() && v.alg->weight(i) != 1)
            throw std::invalid_argument("contract_v1: vector is not in the first layer");
    RatVec c(v.alg->dim_v1());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = v.coords[i];
    return contract_v1(c, a);
}

/// Stack version: (v -| A)^k = v -| A^{k+1} for k < top and 0 at the top.
inline HdStack contract_stack_v1(const RatVec &v1coords, const HdStack &a) {
    HdStack out = HdStack::zero(a.alg, a.wdim, a.top);
    for (int k = 0; k < a.top; ++k)
        out.parts[k] = contract_v1(v1coords, a.parts[k + 1]);
    return out;
}

namespace detail {

using DecompOverride = std::map<std::size_t, std::vector<DecompTerm>>;

inline HdStack contract_basis(std::size_t u, const HdStack &a, const DecompOverride *ovr) {
    const auto &alg = *a.alg;
    if (alg.weight(u) == 1) {
        RatVec v(alg.dim_v1(), Rat(0));
        v[u] = Rat(1);
        return contract_stack_v1(v, a);
    }
    const std::vector<DecompTerm> *terms = nullptr;
    if (ovr) {
        auto it = ovr->find(u);
        if (it != ovr->end())
            terms = &it->second;
    }
    if (!terms)
        terms = &alg.bracket_decomp(u);
    HdStack out = HdStack::zero(a.alg, a.wdim, a.top);
    for (auto &t : *terms) {
        // [v, w] -| A = w -| (v -| A) - v -| (w -| A), v in the first layer
        HdStack va = contract_basis(t.i, a, ovr);
        HdStack wa = contract_basis(t.j, a, ovr);
        out += t.c * (contract_basis(t.j, va, ovr) - contract_basis(t.i, wa, ovr));
    }
    return out;
}

} // namespace detail

/// Unique extension of right contraction to all of g (a Lie algebra
/// anti-morphism acting on stacks).
inline HdStack contract_full(const AlgElem &x, const HdStack &a,
                             const detail::DecompOverride *decomp_override = nullptr) {
    if (!x.alg->same_as(*a.alg))
        throw std::invalid_argument("contract_full: algebra mismatch");
    HdStack out = HdStack::zero(a.alg, a.wdim, a.top);
    for (std::size_t u = 0; u < x.coords.size(); ++u)
        if (!x.coords[u].is_zero())
            out += x.coords[u] * detail::contract_basis(u, a, decomp_override);
    return out;
}

/// e^{x -|} A; the series terminates because contraction lowers degree.
inline HdStack contract_exp(const AlgElem &x, const HdStack &a) {
    HdStack sum = a, pw = a;
    Rat fact(1);
    for (int k = 1; k <= a.top + 1; ++k) {
        pw = contract_full(x, pw);
        if (pw.is_zero())
            break;
        fact *= Rat(k);
        sum += fact.inv() * pw;
    }
    return sum;
}

} // namespace cjet

#endif
