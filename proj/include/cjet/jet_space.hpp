#ifndef CJET_JET_SPACE_HPP
#define CJET_JET_SPACE_HPP

#include "poly_jet.hpp"

namespace cjet {

/// A point (a, A) of the order-m jet space over G with values in W, in the
/// product chart: group coordinates plus a horizontal-derivative stack.
/// The same data carries left-trivialized tangent vectors and elements of
/// the jet Lie algebra.
struct JetPoint {
    AlgElem base;
    HdStack stack;

    bool is_zero() const { return base.is_zero() && stack.is_zero(); }

    friend bool operator==(const JetPoint &a, const JetPoint &b) {
        return a.base == b.base && a.stack == b.stack;
    }
};

/// Provenance of a jet-algebra basis vector.
struct JetBasisTag {
    bool is_base = true;
    std::size_t base_index = 0; // when is_base
    int hd_degree = 0;          // when !is_base
    std::size_t hd_pos = 0;     // position in the scalar hd basis
    int wcomp = 0;              // W component
};

struct JetAlgebra {
    StratAlg::Ptr derived;
    std::vector<JetBasisTag> tags;
    std::vector<std::size_t> base_to_jet;
    std::vector<std::vector<std::size_t>> hd_to_jet; // [k][pos*wdim + c]
};

/// Descriptor of J^m(G;W): coordinate layout, cached contraction matrices,
/// and conversions between stacks and stack coordinates (coefficients in the
/// tau-dual bases).
class JetSpace {
  public:
    JetSpace(StratAlg::Ptr alg, int wdim, int m) : alg_(std::move(alg)), wdim_(wdim), m_(m) {
        if (wdim < 1 || m < 0)
            throw std::invalid_argument("JetSpace: need wdim >= 1 and m >= 0");
        offsets_.resize(m + 2);
        offsets_[0] = alg_->dim();
        for (int k = 0; k <= m; ++k) {
            dims_.push_back(hd_dim(alg_, k));
            offsets_[k + 1] = offsets_[k] + dims_[k] * wdim_;
        }
    }

    const StratAlg::Ptr &alg() const { return alg_; }
    int wdim() const { return wdim_; }
    int order() const { return m_; }
    int jet_step() const { return std::max(alg_->step(), m_ + 1); }

    std::size_t nvars() const { return offsets_.back(); }
    std::size_t stack_offset(int k) const { return offsets_.at(k); }
    std::size_t hd_dim_scalar(int k) const { return dims_.at(k); }
    std::size_t var_of(int k, std::size_t pos, int c) const {
        return offsets_.at(k) + pos * wdim_ + c;
    }

    bool compatible(const JetPoint &p) const {
        return p.base.alg->same_as(*alg_) && p.stack.wdim == wdim_ && p.stack.top == m_;
    }
    void require(const JetPoint &p) const {
        if (!compatible(p))
            throw std::invalid_argument("JetSpace: point belongs to a different jet space");
    }

    JetPoint zero() const { return JetPoint{AlgElem::zero(alg_), HdStack::zero(alg_, wdim_, m_)}; }

    /// Scalar contraction matrix of basis vector u from degree k down to
    /// k - w(u), acting on tau-dual coefficients.
    std::shared_ptr<const RatMatrix> ctr(std::size_t u, int k) const {
        std::string key = "jet_ctr:" + std::to_string(u) + ":" + std::to_string(k);
        return alg_->cached<RatMatrix>(key, [&]() {
            int drop = alg_->weight(u);
            int kk = k - drop;
            auto bk = hd_basis(alg_, k);
            std::size_t rows = kk >= 0 ? hd_dim(alg_, kk) : 0;
            auto out = std::make_shared<RatMatrix>(rows, bk->indices.size());
            if (kk < 0)
                return std::const_pointer_cast<const RatMatrix>(
                    std::shared_ptr<RatMatrix>(std::move(out)));
            auto bkk = hd_basis(alg_, kk);
            for (std::size_t col = 0; col < bk->elements.size(); ++col) {
                HdStack s = HdStack::zero(alg_, 1, k);
                s.parts[k] = bk->elements[col];
                HdStack c = contract_full(AlgElem::basis(alg_, u), s);
                auto mem = hd_membership(c.parts[kk]);
                if (!mem.member)
                    throw std::logic_error("jet contraction left the horizontal space");
                for (auto &[idx, v] : mem.expansion)
                    for (std::size_t row = 0; row < bkk->indices.size(); ++row)
                        if (bkk->indices[row] == idx)
                            out->set(row, col, v[0]);
            }
            return std::const_pointer_cast<const RatMatrix>(
                std::shared_ptr<RatMatrix>(std::move(out)));
        });
    }

    /// Coefficients of a stack in the {A_I (x) w_c} bases; requires every
    /// degree to be horizontal.
    RatVec stack_coords(const HdStack &s) const {
        if (!s.alg->same_as(*alg_) || s.wdim != wdim_ || s.top != m_)
            throw std::invalid_argument("stack_coords: wrong stack shape");
        RatVec out(nvars() - alg_->dim(), Rat(0));
        for (int k = 0; k <= m_; ++k) {
            auto mem = hd_membership(s.parts[k]);
            if (!mem.member)
                throw std::invalid_argument("stack_coords: stack is not horizontal");
            auto bk = hd_basis(alg_, k);
            for (auto &[idx, v] : mem.expansion)
                for (std::size_t pos = 0; pos < bk->indices.size(); ++pos)
                    if (bk->indices[pos] == idx)
                        for (int c = 0; c < wdim_; ++c)
                            out[var_of(k, pos, c) - alg_->dim()] = v[c];
        }
        return out;
    }

    HdStack stack_from_coords(const RatVec &coords) const {
        if (coords.size() != nvars() - alg_->dim())
            throw std::invalid_argument("stack_from_coords: wrong length");
        HdStack s = HdStack::zero(alg_, wdim_, m_);
        for (int k = 0; k <= m_; ++k) {
            auto bk = hd_basis(alg_, k);
            for (std::size_t pos = 0; pos < bk->elements.size(); ++pos)
                for (int c = 0; c < wdim_; ++c) {
                    const Rat &v = coords[var_of(k, pos, c) - alg_->dim()];
                    if (v.is_zero())
                        continue;
                    for (auto &[w, val] : bk->elements[pos].coeffs) {
                        RatVec wv(wdim_, Rat(0));
                        wv[c] = v * val[0];
                        s.parts[k].add_term(w, wv);
                    }
                }
        }
        return s;
    }

    RatVec point_coords(const JetPoint &p) const {
        require(p);
        RatVec out = p.base.coords;
        RatVec sc = stack_coords(p.stack);
        out.insert(out.end(), sc.begin(), sc.end());
        return out;
    }

    JetPoint point_from_coords(const RatVec &coords) const {
        if (coords.size() != nvars())
            throw std::invalid_argument("point_from_coords: wrong length");
        RatVec base(coords.begin(), coords.begin() + alg_->dim());
        RatVec rest(coords.begin() + alg_->dim(), coords.end());
        return JetPoint{AlgElem(alg_, base), stack_from_coords(rest)};
    }

    const JetAlgebra &jet_algebra() const;

  private:
    StratAlg::Ptr alg_;
    int wdim_, m_;
    std::vector<std::size_t> dims_;
    std::vector<std::size_t> offsets_;
    mutable std::shared_ptr<const JetAlgebra> jalg_;
};

/// Group law (a,A)(b,B) = (ab, B + e^{(log b) -|} A).
inline JetPoint jet_multiply(const JetSpace &js, const JetPoint &p, const JetPoint &q) {
    js.require(p);
    js.require(q);
    return JetPoint{bch(p.base, q.base), q.stack + contract_exp(q.base, p.stack)};
}

inline JetPoint jet_inverse(const JetSpace &js, const JetPoint &p) {
    js.require(p);
    AlgElem binv = -p.base;
    return JetPoint{binv, Rat(-1) * contract_exp(binv, p.stack)};
}

/// Exponential of the jet algebra in the product chart:
/// exp(x, X) = (exp x, sum_k (x -|)^k X / (k+1)!).
inline JetPoint jet_exp(const JetSpace &js, const JetPoint &v) {
    js.require(v);
    HdStack sum = v.stack, pw = v.stack;
    Rat fact(1);
    for (int k = 1; k <= v.stack.top + 1; ++k) {
        pw = contract_full(v.base, pw);
        if (pw.is_zero())
            break;
        fact *= Rat(k + 1);
        sum += fact.inv() * pw;
    }
    return JetPoint{v.base, sum};
}

/// Inverse of jet_exp; the correction operator is unipotent, so the inverse
/// series terminates.
inline JetPoint jet_log(const JetSpace &js, const JetPoint &p) {
    js.require(p);
    auto apply_n = [&](const HdStack &s) {
        // N X = sum_{k>=1} (x -|)^k X / (k+1)!
        HdStack out = HdStack::zero(p.base.alg, s.wdim, s.top);
        HdStack pw = s;
        Rat fact(1);
        for (int k = 1; k <= s.top + 1; ++k) {
            pw = contract_full(p.base, pw);
            if (pw.is_zero())
                break;
            fact *= Rat(k + 1);
            out += fact.inv() * pw;
        }
        return out;
    };
    HdStack x = p.stack, term = p.stack;
    for (int j = 1; j <= p.stack.top + 1; ++j) {
        term = apply_n(term);
        if (term.is_zero())
            break;
        x += Rat((j % 2) ? -1 : 1) * term;
    }
    return JetPoint{p.base, x};
}

/// Jet group dilation in the product chart: layer k of the algebra scales by
/// lambda^k, so the degree-k stack component scales by lambda^{m+1-k}.
inline JetPoint jet_dilate(const JetSpace &js, const JetPoint &p, const Rat &lambda) {
    js.require(p);
    JetPoint out{dilate(p.base, lambda), p.stack};
    for (int k = 0; k <= p.stack.top; ++k)
        out.stack.parts[k] = lambda.pow(js.order() + 1 - k) * out.stack.parts[k];
    return out;
}

/// Values of the contact coframe on a left-trivialized tangent (x, X) at
/// (a, A): omega^l = X^l - (x -| A)^l for l < m, theta^j = Pi_j x for
/// 2 <= j <= step. The contraction is the full extension to g; on tangents
/// annihilated by the theta family it reduces to the first-layer contraction
/// x_1 -| A^{l+1}, and it is the version that is left invariant.
struct CoFrameValue {
    std::vector<HdElem> omega;
    std::vector<AlgElem> theta;
};

inline CoFrameValue coframe(const JetSpace &js, const JetPoint &at, const JetPoint &tangent) {
    js.require(at);
    js.require(tangent);
    CoFrameValue out;
    HdStack xa = contract_full(tangent.base, at.stack);
    for (int l = 0; l < js.order(); ++l)
        out.omega.push_back(tangent.stack.parts[l] - xa.parts[l]);
    for (int j = 2; j <= js.alg()->step(); ++j)
        out.theta.push_back(layer_project(tangent.base, j));
    return out;
}

/// Horizontal frame at a point, in left-trivialized form: the fields
/// (v_j, v_j -| A) over the first-layer basis and the constant fields
/// (0, B) over the top-degree basis.
inline std::vector<JetPoint> horizontal_frame(const JetSpace &js, const JetPoint &at) {
    js.require(at);
    std::vector<JetPoint> out;
    std::size_t r = js.alg()->dim_v1();
    for (std::size_t j = 0; j < r; ++j) {
        RatVec v(r, Rat(0));
        v[j] = Rat(1);
        out.push_back(JetPoint{AlgElem::basis(js.alg(), j), contract_stack_v1(v, at.stack)});
    }
    for (auto &b : hd_basis_elems(js.alg(), js.order(), js.wdim())) {
        HdStack s = HdStack::zero(js.alg(), js.wdim(), js.order());
        s.parts[js.order()] = b;
        out.push_back(JetPoint{AlgElem::zero(js.alg()), std::move(s)});
    }
    return out;
}

/// The m-jet of a polynomial function at a point.
inline JetPoint jet_of(const JetSpace &js, const WPoly &f, const AlgElem &p) {
    if (f.wdim != js.wdim())
        throw std::invalid_argument("jet_of: value dimension mismatch");
    return JetPoint{p, horizontal_stack(f, p, js.order())};
}

/// Polynomial section of the jet bundle: per degree, a word-indexed table of
/// polynomial entries.
struct PolySection {
    StratAlg::Ptr alg;
    int wdim = 1;
    int top = 0;
    std::vector<std::map<Word, WPoly>> parts;

    const WPoly *entry(int k, const Word &w) const {
        auto it = parts[k].find(w);
        return it == parts[k].end() ? nullptr : &it->second;
    }
};

inline PolySection jet_section_of(const WPoly &f, int m) {
    PolySection s{f.alg, f.wdim, m, derivative_tables(f, m)};
    return s;
}

struct SectionVerdict {
    bool is_jet = false;
    WPoly generator;     // f with the section equal to its jet, when is_jet
    int witness_level = -1;
    std::size_t witness_dir = 0;
    WPoly witness; // nonzero contact-form value when !is_jet
};

/// A section is the jet of a function iff its differential maps the
/// horizontal bundle of G into the contact structure; concretely, every
/// level must consist of the first-layer derivatives of the previous one.
inline SectionVerdict is_jet_section(const JetSpace &js, const PolySection &gamma) {
    if (!gamma.alg->same_as(*js.alg()) || gamma.wdim != js.wdim() || gamma.top != js.order())
        throw std::invalid_argument("is_jet_section: wrong section shape");
    SectionVerdict out;
    WPoly zero = WPoly::zero(js.alg(), js.wdim());
    auto get = [&](int k, const Word &w) {
        const WPoly *p = gamma.entry(k, w);
        return p ? *p : zero;
    };
    std::size_t r = js.alg()->dim_v1();
    for (int l = 0; l + 1 <= js.order(); ++l)
        for (auto &w : v1_words(*js.alg(), l))
            for (std::size_t j = 0; j < r; ++j) {
                Word ext = w;
                ext.push_back(j);
                WPoly want = left_inv_derive(AlgElem::basis(js.alg(), j), get(l, w));
                WPoly have = get(l + 1, ext);
                if (!(want - have).is_zero()) {
                    out.is_jet = false;
                    out.witness_level = l;
                    out.witness_dir = j;
                    out.witness = want - have;
                    return out;
                }
            }
    out.is_jet = true;
    out.generator = get(0, {});
    // cross-check: the section is reproduced by the jet of its generator
    PolySection again = jet_section_of(out.generator, js.order());
    for (int k = 0; k <= js.order(); ++k)
        for (auto &w : v1_words(*js.alg(), k))
            if (!(get(k, w) - again.parts[k].at(w)).is_zero())
                throw std::logic_error("is_jet_section: reconstruction failed");
    return out;
}

inline const JetAlgebra &JetSpace::jet_algebra() const {
    if (jalg_)
        return *jalg_;
    std::string key = "jet_alg:" + std::to_string(wdim_) + ":" + std::to_string(m_);
    jalg_ = alg_->cached<JetAlgebra>(key, [&]() {
        auto ja = std::make_shared<JetAlgebra>();
        int step = jet_step();
        ja->base_to_jet.assign(alg_->dim(), 0);
        ja->hd_to_jet.assign(m_ + 1, {});
        std::vector<int> weights;
        std::vector<std::string> labels;
        for (int l = 1; l <= step; ++l) {
            if (l <= alg_->step())
                for (auto i : alg_->layer(l)) {
                    ja->base_to_jet[i] = ja->tags.size();
                    ja->tags.push_back(JetBasisTag{true, i, 0, 0, 0});
                    weights.push_back(l);
                    labels.push_back(alg_->labels()[i]);
                }
            int k = m_ + 1 - l;
            if (k >= 0 && k <= m_) {
                auto bk = hd_basis(alg_, k);
                ja->hd_to_jet[k].assign(bk->indices.size() * wdim_, 0);
                for (std::size_t pos = 0; pos < bk->indices.size(); ++pos)
                    for (int c = 0; c < wdim_; ++c) {
                        ja->hd_to_jet[k][pos * wdim_ + c] = ja->tags.size();
                        ja->tags.push_back(JetBasisTag{false, 0, k, pos, c});
                        weights.push_back(l);
                        std::string lab = "A[(";
                        const MultiIdx &idx = bk->indices[pos];
                        for (std::size_t t = 0; t < idx.size(); ++t)
                            lab += (t ? "," : "") + std::to_string(idx[t]);
                        lab += ")]w" + std::to_string(c + 1);
                        labels.push_back(lab);
                    }
            }
        }
        std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
        auto add_entry = [&](std::size_t p, std::size_t q, std::size_t k, const Rat &c) {
            if (c.is_zero())
                return;
            if (p < q)
                st[{p, q}].push_back({k, c});
            else
                st[{q, p}].push_back({k, -c});
        };
        std::size_t njet = ja->tags.size();
        for (std::size_t p = 0; p < njet; ++p)
            for (std::size_t q = p + 1; q < njet; ++q) {
                const auto &tp = ja->tags[p];
                const auto &tq = ja->tags[q];
                if (tp.is_base && tq.is_base) {
                    for (auto &bt : alg_->basis_bracket(tp.base_index, tq.base_index))
                        add_entry(p, q, ja->base_to_jet[bt.k], bt.c);
                } else if (tp.is_base != tq.is_base) {
                    const auto &tb = tp.is_base ? tp : tq;
                    const auto &th = tp.is_base ? tq : tp;
                    // [(v,0),(0,B)] = (0, -v -| B)
                    Rat sign = tp.is_base ? Rat(-1) : Rat(1);
                    int kk = th.hd_degree - alg_->weight(tb.base_index);
                    if (kk < 0)
                        continue;
                    auto mat = ctr(tb.base_index, th.hd_degree);
                    for (std::size_t row = 0; row < mat->rows(); ++row) {
                        Rat v = mat->at(row, th.hd_pos);
                        if (!v.is_zero())
                            add_entry(p, q, ja->hd_to_jet[kk][row * wdim_ + th.wcomp], sign * v);
                    }
                }
            }
        ja->derived = StratAlg::make("j^" + std::to_string(m_) + "(" + alg_->name() + ";R^" +
                                         std::to_string(wdim_) + ")",
                                     weights, st, labels);
        return ja;
    });
    return *jalg_;
}

/// Jet algebra element (x, X) into its coordinate vector in the derived
/// adapted basis.
inline RatVec jet_algebra_coords(const JetSpace &js, const JetPoint &v) {
    js.require(v);
    const JetAlgebra &ja = js.jet_algebra();
    RatVec out(ja.tags.size(), Rat(0));
    for (std::size_t i = 0; i < js.alg()->dim(); ++i)
        out[ja.base_to_jet[i]] = v.base.coords[i];
    RatVec sc = js.stack_coords(v.stack);
    for (int k = 0; k <= js.order(); ++k)
        for (std::size_t pos = 0; pos < js.hd_dim_scalar(k); ++pos)
            for (int c = 0; c < js.wdim(); ++c)
                out[ja.hd_to_jet[k][pos * js.wdim() + c]] =
                    sc[js.var_of(k, pos, c) - js.alg()->dim()];
    return out;
}

inline JetPoint jet_from_algebra_coords(const JetSpace &js, const RatVec &coords) {
    const JetAlgebra &ja = js.jet_algebra();
    if (coords.size() != ja.tags.size())
        throw std::invalid_argument("jet_from_algebra_coords: wrong length");
    JetPoint out = js.zero();
    RatVec sc(js.nvars() - js.alg()->dim(), Rat(0));
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const auto &t = ja.tags[i];
        if (t.is_base)
            out.base.coords[t.base_index] = coords[i];
        else
            sc[js.var_of(t.hd_degree, t.hd_pos, t.wcomp) - js.alg()->dim()] = coords[i];
    }
    out.stack = js.stack_from_coords(sc);
    return out;
}

/// Jet algebra bracket of left-trivialized elements, computed through the
/// semidirect structure: [(x,X),(y,Y)] = ([x,y], y -| X - x -| Y).
inline JetPoint jet_bracket(const JetSpace &js, const JetPoint &a, const JetPoint &b) {
    js.require(a);
    js.require(b);
    return JetPoint{bracket(a.base, b.base),
                    contract_full(b.base, a.stack) - contract_full(a.base, b.stack)};
}

} // namespace cjet

#endif
