#ifndef CJET_CONTACT_HPP
#define CJET_CONTACT_HPP

#include "catalog.hpp"
#include "jet_space.hpp"

namespace cjet {

/// Raised when a computation hits a genuine mathematical obstruction (a
/// point outside the prolongation domain, a non-factorable map, ...).
struct ObstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a certificate that a theorem guarantees fails to verify;
/// indicates a bug upstream, never a user error.
struct CertificateError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Per-degree stack coordinates with polynomial entries, laid out like the
/// rational stack coordinates: [k][pos*wdim + c].
using SymStack = std::vector<std::vector<MPoly>>;

namespace detail {

inline std::vector<MPoly> mat_apply(const RatMatrix &m, const std::vector<MPoly> &v,
                                    std::size_t nvars) {
    std::vector<MPoly> out(m.rows(), MPoly(nvars));
    for (auto &[rc, c] : m.entries())
        out[rc.first] += v[rc.second] * c;
    return out;
}

} // namespace detail

/// Symbolic stack of the coordinate variables themselves.
inline SymStack sym_stack_vars(const JetSpace &js) {
    SymStack s(js.order() + 1);
    for (int k = 0; k <= js.order(); ++k) {
        s[k].reserve(js.hd_dim_scalar(k) * js.wdim());
        for (std::size_t pos = 0; pos < js.hd_dim_scalar(k); ++pos)
            for (int c = 0; c < js.wdim(); ++c)
                s[k].push_back(MPoly::variable(js.nvars(), js.var_of(k, pos, c)));
    }
    return s;
}

inline SymStack sym_stack_zero(const JetSpace &js, std::size_t nvars) {
    SymStack s(js.order() + 1);
    for (int k = 0; k <= js.order(); ++k)
        s[k].assign(js.hd_dim_scalar(k) * js.wdim(), MPoly(nvars));
    return s;
}

inline SymStack sym_stack_constant(const JetSpace &js, const HdStack &a, std::size_t nvars) {
    RatVec coords = js.stack_coords(a);
    SymStack s = sym_stack_zero(js, nvars);
    for (int k = 0; k <= js.order(); ++k)
        for (std::size_t i = 0; i < s[k].size(); ++i)
            s[k][i] = MPoly::constant(nvars, coords[js.var_of(k, i / js.wdim(), i % js.wdim()) -
                                                    js.alg()->dim()]);
    return s;
}

inline SymStack sym_stack_add(const SymStack &a, const SymStack &b) {
    SymStack out = a;
    for (std::size_t k = 0; k < out.size(); ++k)
        for (std::size_t i = 0; i < out[k].size(); ++i)
            out[k][i] += b[k][i];
    return out;
}

inline bool sym_stack_zero_p(const SymStack &s) {
    for (auto &lvl : s)
        for (auto &p : lvl)
            if (!p.is_zero())
                return false;
    return true;
}

/// Contraction of a symbolic stack by an algebra element with polynomial
/// coordinates: bilinear combination through the cached contraction matrices.
inline SymStack sym_contract(const JetSpace &js, const std::vector<MPoly> &xcoords,
                             const SymStack &a, std::size_t nvars) {
    SymStack out = sym_stack_zero(js, nvars);
    int w = js.wdim();
    for (std::size_t u = 0; u < js.alg()->dim(); ++u) {
        if (xcoords[u].is_zero())
            continue;
        int drop = js.alg()->weight(u);
        for (int k = drop; k <= js.order(); ++k) {
            auto mat = js.ctr(u, k);
            for (auto &[rc, v] : mat->entries())
                for (int c = 0; c < w; ++c)
                    out[k - drop][rc.first * w + c] += xcoords[u] * a[k][rc.second * w + c] * v;
        }
    }
    return out;
}

/// e^{x -|} on a symbolic stack.
inline SymStack sym_contract_exp(const JetSpace &js, const std::vector<MPoly> &xcoords,
                                 const SymStack &a, std::size_t nvars) {
    SymStack sum = a, pw = a;
    Rat fact(1);
    for (int k = 1; k <= js.order() + 1; ++k) {
        pw = sym_contract(js, xcoords, pw, nvars);
        if (sym_stack_zero_p(pw))
            break;
        fact *= Rat(k);
        Rat inv = fact.inv();
        for (std::size_t l = 0; l < sum.size(); ++l)
            for (std::size_t i = 0; i < sum[l].size(); ++i)
                sum[l][i] += pw[l][i] * inv;
    }
    return sum;
}

/// The fiber correction of the jet exponential: psi(x) X = sum (x -|)^k X/(k+1)!.
inline SymStack sym_psi(const JetSpace &js, const std::vector<MPoly> &xcoords, const SymStack &a,
                        std::size_t nvars) {
    SymStack sum = a, pw = a;
    Rat fact(1);
    for (int k = 1; k <= js.order() + 1; ++k) {
        pw = sym_contract(js, xcoords, pw, nvars);
        if (sym_stack_zero_p(pw))
            break;
        fact *= Rat(k + 1);
        Rat inv = fact.inv();
        for (std::size_t l = 0; l < sum.size(); ++l)
            for (std::size_t i = 0; i < sum[l].size(); ++i)
                sum[l][i] += pw[l][i] * inv;
    }
    return sum;
}

inline SymStack sym_psi_inv(const JetSpace &js, const std::vector<MPoly> &xcoords,
                            const SymStack &a, std::size_t nvars) {
    auto apply_n = [&](const SymStack &s) {
        SymStack out = sym_stack_zero(js, nvars);
        SymStack pw = s;
        Rat fact(1);
        for (int k = 1; k <= js.order() + 1; ++k) {
            pw = sym_contract(js, xcoords, pw, nvars);
            if (sym_stack_zero_p(pw))
                break;
            fact *= Rat(k + 1);
            Rat inv = fact.inv();
            for (std::size_t l = 0; l < out.size(); ++l)
                for (std::size_t i = 0; i < out[l].size(); ++i)
                    out[l][i] += pw[l][i] * inv;
        }
        return out;
    };
    SymStack x = a, term = a;
    for (int j = 1; j <= js.order() + 1; ++j) {
        term = apply_n(term);
        if (sym_stack_zero_p(term))
            break;
        Rat sgn((j % 2) ? -1 : 1);
        for (std::size_t l = 0; l < x.size(); ++l)
            for (std::size_t i = 0; i < x[l].size(); ++i)
                x[l][i] += term[l][i] * sgn;
    }
    return x;
}

/// Polynomial self-map of a jet space in the product chart. The base block
/// holds the group-coordinate components, stack[k] the coefficients of the
/// degree-k component in the tau-dual bases.
struct PolyMap {
    JetSpace space; // source and target
    std::vector<MPoly> base;
    SymStack stack;
    bool contact_certified = false;

    std::vector<MPoly> all_components() const {
        std::vector<MPoly> out = base;
        for (auto &lvl : stack)
            out.insert(out.end(), lvl.begin(), lvl.end());
        return out;
    }

    friend bool operator==(const PolyMap &a, const PolyMap &b) {
        return a.base == b.base && a.stack == b.stack;
    }
};

inline PolyMap identity_map(const JetSpace &js) {
    PolyMap f{js, {}, {}, true};
    for (std::size_t i = 0; i < js.alg()->dim(); ++i)
        f.base.push_back(MPoly::variable(js.nvars(), i));
    f.stack = sym_stack_vars(js);
    return f;
}

inline JetPoint apply(const PolyMap &f, const JetPoint &p) {
    f.space.require(p);
    RatVec in = f.space.point_coords(p);
    RatVec out;
    for (auto &c : f.base)
        out.push_back(c.eval(in));
    for (auto &lvl : f.stack)
        for (auto &c : lvl)
            out.push_back(c.eval(in));
    return f.space.point_from_coords(out);
}

inline PolyMap compose(const PolyMap &f, const PolyMap &g) {
    // f after g
    std::vector<MPoly> images = g.all_components();
    PolyMap out{f.space, {}, sym_stack_zero(f.space, g.space.nvars()), false};
    for (auto &c : f.base)
        out.base.push_back(c.compose(images));
    for (std::size_t k = 0; k < f.stack.size(); ++k)
        for (std::size_t i = 0; i < f.stack[k].size(); ++i)
            out.stack[k][i] = f.stack[k][i].compose(images);
    return out;
}

/// Left translation by a fixed point as a polynomial map.
inline PolyMap left_translation_map(const JetSpace &js, const JetPoint &q) {
    js.require(q);
    PolyMap f{js, {}, {}, false};
    std::size_t nv = js.nvars();
    auto base = left_translation_polys(js.alg(), q.base.coords);
    for (auto &p : base)
        f.base.push_back(p.embed(nv, 0));
    std::vector<MPoly> xc;
    for (std::size_t i = 0; i < js.alg()->dim(); ++i)
        xc.push_back(MPoly::variable(nv, i));
    SymStack corr = sym_contract_exp(js, xc, sym_stack_constant(js, q.stack, nv), nv);
    f.stack = sym_stack_add(sym_stack_vars(js), corr);
    return f;
}

/// Dilation family with a fixed fiber weight d: the base dilates by lambda,
/// the degree-k block scales by lambda^{d-k}. These are the jets of
/// f -> lambda^d f o delta_{1/lambda}; the family is stable under
/// prolongation (the same d one order up), while the group dilation of each
/// space is the member d = order + 1.
inline PolyMap weighted_dilation_map(const JetSpace &js, const Rat &lambda, int d) {
    if (lambda.sign() <= 0)
        throw std::invalid_argument("weighted_dilation_map: lambda must be positive");
    PolyMap f{js, {}, sym_stack_zero(js, js.nvars()), false};
    for (std::size_t i = 0; i < js.alg()->dim(); ++i)
        f.base.push_back(MPoly::variable(js.nvars(), i) * lambda.pow(js.alg()->weight(i)));
    for (int k = 0; k <= js.order(); ++k) {
        Rat scale = lambda.pow(d - k);
        for (std::size_t i = 0; i < js.hd_dim_scalar(k) * js.wdim(); ++i)
            f.stack[k][i] =
                MPoly::variable(js.nvars(), js.var_of(k, i / js.wdim(), i % js.wdim())) * scale;
    }
    return f;
}

/// The group dilation of the jet space in the product chart: layer k of the
/// algebra scales by lambda^k.
inline PolyMap dilation_map(const JetSpace &js, const Rat &lambda) {
    return weighted_dilation_map(js, lambda, js.order() + 1);
}

/// A tangent of the jet space with polynomial coefficients, carried as a raw
/// coordinate velocity (base block + stack blocks).
struct SymTangent {
    std::vector<MPoly> base; // n entries
    SymStack stack;
};

/// Raw coordinate velocity of the horizontal frame field X_j at the symbolic
/// point: base part L_jac(x) v_j, stack part v_j -| A with A the coordinate
/// variables.
inline SymTangent frame_field_velocity(const JetSpace &js, std::size_t j) {
    std::size_t nv = js.nvars();
    auto table = bch_table(js.alg());
    SymTangent t;
    t.base.assign(js.alg()->dim(), MPoly(nv));
    for (std::size_t i = 0; i < js.alg()->dim(); ++i)
        t.base[i] = table->left_jac[i][j].embed(nv, 0);
    std::vector<MPoly> vj(js.alg()->dim(), MPoly(nv));
    vj[j] = MPoly::constant(nv, Rat(1));
    t.stack = sym_contract(js, vj, sym_stack_vars(js), nv);
    return t;
}

/// Velocity of the constant fiber field in the direction of stack variable
/// (m, pos, c).
inline SymTangent fiber_field_velocity(const JetSpace &js, std::size_t pos, int c) {
    SymTangent t;
    t.base.assign(js.alg()->dim(), MPoly(js.nvars()));
    t.stack = sym_stack_zero(js, js.nvars());
    t.stack[js.order()][pos * js.wdim() + c] = MPoly::constant(js.nvars(), Rat(1));
    return t;
}

/// Push a symbolic velocity through the polynomial Jacobian of a map.
inline SymTangent push_forward(const PolyMap &f, const SymTangent &v) {
    const JetSpace &js = f.space;
    std::size_t nv = js.nvars();
    std::vector<MPoly> vel = v.base;
    for (auto &lvl : v.stack)
        vel.insert(vel.end(), lvl.begin(), lvl.end());
    auto d_apply = [&](const MPoly &comp) {
        MPoly out(nv);
        for (std::size_t var = 0; var < nv; ++var)
            if (!vel[var].is_zero()) {
                MPoly d = comp.derivative(var);
                if (!d.is_zero())
                    out += d * vel[var];
            }
        return out;
    };
    SymTangent out;
    for (auto &c : f.base)
        out.base.push_back(d_apply(c));
    out.stack = sym_stack_zero(js, nv);
    for (std::size_t k = 0; k < f.stack.size(); ++k)
        for (std::size_t i = 0; i < f.stack[k].size(); ++i)
            out.stack[k][i] = d_apply(f.stack[k][i]);
    return out;
}

/// Left-trivialize the base part of a velocity at the (symbolic) target
/// point: x = L_jac^{-1}(at) * base velocity.
inline std::vector<MPoly> left_trivialize_base(const JetSpace &js,
                                               const std::vector<MPoly> &at_base,
                                               const std::vector<MPoly> &vel,
                                               std::size_t nvars) {
    auto table = bch_table(js.alg());
    std::size_t n = js.alg()->dim();
    std::vector<MPoly> out(n, MPoly(nvars));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const MPoly &entry = table->left_jac_inv[i][k];
            if (entry.is_zero() || vel[k].is_zero())
                continue;
            out[i] += entry.compose(at_base) * vel[k];
        }
    return out;
}

struct ContactCheck {
    bool certified = false;
    std::string form;            // "omega" or "theta"
    int level = -1;              // l for omega, layer for theta
    std::size_t frame_index = 0; // which frame field produced the witness
    MPoly witness;
};

/// Symbolic verification of the contact conditions: the coframe of the
/// target annihilates the push-forward of every horizontal frame field.
inline ContactCheck is_contact(const PolyMap &f) {
    const JetSpace &js = f.space;
    std::size_t nv = js.nvars();
    std::vector<SymTangent> frame;
    for (std::size_t j = 0; j < js.alg()->dim_v1(); ++j)
        frame.push_back(frame_field_velocity(js, j));
    for (std::size_t pos = 0; pos < js.hd_dim_scalar(js.order()); ++pos)
        for (int c = 0; c < js.wdim(); ++c)
            frame.push_back(fiber_field_velocity(js, pos, c));

    ContactCheck out;
    for (std::size_t fi = 0; fi < frame.size(); ++fi) {
        SymTangent img = push_forward(f, frame[fi]);
        std::vector<MPoly> xtriv = left_trivialize_base(js, f.base, img.base, nv);
        // theta conditions first: layers >= 2 of the trivialized base part
        for (int layer = 2; layer <= js.alg()->step(); ++layer)
            for (auto i : js.alg()->layer(layer))
                if (!xtriv[i].is_zero()) {
                    out.form = "theta";
                    out.level = layer;
                    out.frame_index = fi;
                    out.witness = xtriv[i];
                    return out;
                }
        // omega conditions: img.stack^l minus (xtriv -| F.stack)^l
        SymStack contracted = sym_contract(js, xtriv, f.stack, nv);
        for (int l = 0; l + 1 <= js.order(); ++l)
            for (std::size_t i = 0; i < img.stack[l].size(); ++i) {
                MPoly w = img.stack[l][i] - contracted[l][i];
                if (!w.is_zero()) {
                    out.form = "omega";
                    out.level = l;
                    out.frame_index = fi;
                    out.witness = w;
                    return out;
                }
            }
    }
    out.certified = true;
    return out;
}

inline PolyMap certified(PolyMap f) {
    auto check = is_contact(f);
    if (!check.certified)
        throw CertificateError("map failed its contact certificate on " + check.form);
    f.contact_certified = true;
    return f;
}

/// Transported frame directions of the prolongation machinery at a point of
/// the order-(m+1) space.
struct FrameTransport {
    std::vector<RatVec> n_raw;  // dF_G of the projected frame, raw coordinates
    std::vector<RatVec> n_triv; // left-trivialized; lie in the first layer
    bool independent = false;
};

namespace detail {

inline RatVec eval_all(const std::vector<MPoly> &polys, const RatVec &at) {
    RatVec out;
    for (auto &p : polys)
        out.push_back(p.eval(at));
    return out;
}

} // namespace detail

/// dF_G(pi_m(p_hat)) d(pi_m) X_hat_j for the horizontal base frame of the
/// order-(m+1) space, together with the pointwise independence report.
inline FrameTransport frame_transport(const PolyMap &f, const JetSpace &above, const JetPoint &p_hat) {
    const JetSpace &js = f.space;
    if (!(above.order() == js.order() + 1))
        throw std::invalid_argument("frame_transport: the point must live one order above the map");
    above.require(p_hat);
    JetPoint p{p_hat.base, HdStack::zero(js.alg(), js.wdim(), js.order())};
    for (int k = 0; k <= js.order(); ++k)
        p.stack.parts[k] = p_hat.stack.parts[k];
    RatVec at = js.point_coords(p);

    auto table = bch_table(js.alg());
    std::size_t n = js.alg()->dim();
    std::size_t r = js.alg()->dim_v1();

    FrameTransport out;
    RatMatrix v1mat(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        // raw velocity of d(pi_m) X_hat_j at p: base L_jac(a) v_j, stack v_j -| A_hat
        RatVec vel(js.nvars(), Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            vel[i] = table->left_jac[i][j].eval(p.base.coords);
        RatVec v1(r, Rat(0));
        v1[j] = Rat(1);
        HdStack contracted_full = contract_stack_v1(v1, p_hat.stack); // degrees 0..m filled
        HdStack down = HdStack::zero(js.alg(), js.wdim(), js.order());
        for (int k = 0; k <= js.order(); ++k)
            down.parts[k] = contracted_full.parts[k];
        RatVec sc = js.stack_coords(down);
        for (std::size_t i = 0; i < sc.size(); ++i)
            vel[n + i] = sc[i];
        // push through dF_G
        RatVec ntilde(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t var = 0; var < js.nvars(); ++var) {
                if (vel[var].is_zero())
                    continue;
                MPoly d = f.base[i].derivative(var);
                if (!d.is_zero())
                    ntilde[i] += d.eval(at) * vel[var];
            }
        }
        // left-trivialize at F_G(p)
        RatVec fg = detail::eval_all(f.base, at);
        RatVec ntriv(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                if (!ntilde[k].is_zero())
                    ntriv[i] += table->left_jac_inv[i][k].eval(fg) * ntilde[k];
        for (std::size_t i = r; i < n; ++i)
            if (!ntriv[i].is_zero())
                throw CertificateError("frame_transport: transported frame left the first layer");
        for (std::size_t i = 0; i < r; ++i)
            v1mat.set(i, j, ntriv[i]);
        out.n_raw.push_back(std::move(ntilde));
        out.n_triv.push_back(std::move(ntriv));
    }
    out.independent = rank(v1mat) == r;
    return out;
}

/// Pointwise prolongation: the unique order-(m+1) contact lift of f,
/// evaluated at a point where the transported frame is independent.
inline JetPoint prolong_point(const PolyMap &f, const JetSpace &above, const JetPoint &p_hat) {
    const JetSpace &js = f.space;
    FrameTransport ft = frame_transport(f, above, p_hat);
    if (!ft.independent)
        throw ObstructionError("prolong_point: transported frame is dependent (outside the domain)");
    std::size_t n = js.alg()->dim();
    std::size_t r = js.alg()->dim_v1();
    int m = js.order();
    int w = js.wdim();

    JetPoint p{p_hat.base, HdStack::zero(js.alg(), w, m)};
    for (int k = 0; k <= m; ++k)
        p.stack.parts[k] = p_hat.stack.parts[k];
    RatVec at = js.point_coords(p);

    // C_j = dF^m [ d(pi_m) X_hat_j ]
    auto table = bch_table(js.alg());
    std::vector<HdElem> cvals;
    for (std::size_t j = 0; j < r; ++j) {
        RatVec vel(js.nvars(), Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            vel[i] = table->left_jac[i][j].eval(p.base.coords);
        RatVec v1(r, Rat(0));
        v1[j] = Rat(1);
        HdStack cf = contract_stack_v1(v1, p_hat.stack);
        HdStack down = HdStack::zero(js.alg(), w, m);
        for (int k = 0; k <= m; ++k)
            down.parts[k] = cf.parts[k];
        RatVec sc = js.stack_coords(down);
        for (std::size_t i = 0; i < sc.size(); ++i)
            vel[n + i] = sc[i];
        RatVec ccoords(js.hd_dim_scalar(m) * w, Rat(0));
        for (std::size_t i = 0; i < ccoords.size(); ++i)
            for (std::size_t var = 0; var < js.nvars(); ++var) {
                if (vel[var].is_zero())
                    continue;
                MPoly d = f.stack[m][i].derivative(var);
                if (!d.is_zero())
                    ccoords[i] += d.eval(at) * vel[var];
            }
        // assemble the HD^m element from its coefficients
        auto bm = hd_basis(js.alg(), m);
        HdElem c = HdElem::zero(js.alg(), w, m);
        for (std::size_t pos = 0; pos < bm->elements.size(); ++pos)
            for (int cc = 0; cc < w; ++cc) {
                Rat coef = ccoords[pos * w + cc];
                if (coef.is_zero())
                    continue;
                for (auto &[word, val] : bm->elements[pos].coeffs) {
                    RatVec wv(w, Rat(0));
                    wv[cc] = coef * val[0];
                    c.add_term(word, wv);
                }
            }
        cvals.push_back(std::move(c));
    }

    // solve N_j -| T = C_j: T = sum_j C_j (x) N_j^*
    RatMatrix nmat(r, r); // columns are the N_j in first-layer coordinates
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i)
            nmat.set(i, j, ft.n_triv[j][i]);
    // dual functionals: N_j^*(v_i) = (N^{-1})_{j,i}
    std::vector<RatVec> ndual(r, RatVec(r, Rat(0)));
    for (std::size_t i = 0; i < r; ++i) {
        RatVec e(r, Rat(0));
        e[i] = Rat(1);
        auto col = solve_linear(nmat, e); // coefficients of e_i over the N_j
        if (!col)
            throw ObstructionError("prolong_point: frame matrix is singular");
        for (std::size_t j = 0; j < r; ++j)
            ndual[j][i] = (*col)[j];
    }
    HdElem top = HdElem::zero(js.alg(), w, m + 1);
    for (std::size_t j = 0; j < r; ++j)
        for (auto &[word, val] : cvals[j].coeffs)
            for (std::size_t last = 0; last < r; ++last) {
                if (ndual[j][last].is_zero())
                    continue;
                Word ext = word;
                ext.push_back(last);
                top.add_term(ext, ndual[j][last] * val);
            }
    if (!hd_membership(top).member)
        throw CertificateError("prolong_point: the solved top component is not horizontal");

    JetPoint q = apply(f, p);
    JetPoint out{q.base, HdStack::zero(js.alg(), w, m + 1)};
    for (int k = 0; k <= m; ++k)
        out.stack.parts[k] = q.stack.parts[k];
    out.stack.parts[m + 1] = std::move(top);
    return out;
}

/// Stack coordinate polynomials of the jet section of f: the source
/// variables of a PolyMap restricted to the image of J^m f.
inline std::vector<MPoly> section_coordinate_polys(const JetSpace &js, const WPoly &f) {
    auto levels = derivative_tables(f, js.order());
    std::size_t n = js.alg()->dim();
    std::vector<MPoly> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(MPoly::variable(n, i));
    for (int k = 0; k <= js.order(); ++k) {
        auto bk = hd_basis(js.alg(), k);
        // per W component: word-coefficient polynomials -> basis coefficients
        std::vector<std::vector<MPoly>> coords(bk->indices.size(),
                                               std::vector<MPoly>(js.wdim(), MPoly(n)));
        for (int c = 0; c < js.wdim(); ++c) {
            std::vector<MPoly> wordvec(bk->words.size(), MPoly(n));
            for (std::size_t wpos = 0; wpos < bk->words.size(); ++wpos)
                wordvec[wpos] = levels[k].at(bk->words[wpos]).comps[c];
            auto basisvec = detail::mat_apply(bk->extract, wordvec, n);
            for (std::size_t pos = 0; pos < bk->indices.size(); ++pos)
                coords[pos][c] = basisvec[pos];
        }
        for (std::size_t pos = 0; pos < bk->indices.size(); ++pos)
            for (int c = 0; c < js.wdim(); ++c)
                out.push_back(coords[pos][c]);
    }
    return out;
}

struct JetConsistency {
    bool consistent = false;
    JetPoint prolonged;  // prolong_point value at J^{m+1} f(a)
    HdElem composite_top; // top jet datum read off F o J^m f
    WPoly h;             // polynomial with the prescribed jet at the image point
};

/// Executable form of the prolongation mechanism: the top component of the
/// pointwise prolongation at J^{m+1}f(a) must agree with the (m+1)-jet datum
/// of the composed map F o J^m f, read off by differentiating the composite.
inline JetConsistency prolong_jet_consistency(const PolyMap &f, const WPoly &fn, const AlgElem &a) {
    const JetSpace &js = f.space;
    int m = js.order();
    int w = js.wdim();
    std::size_t n = js.alg()->dim();
    std::size_t r = js.alg()->dim_v1();
    JetSpace above(js.alg(), w, m + 1);

    JetConsistency out;
    JetPoint p_hat = jet_of(above, fn, a);
    out.prolonged = prolong_point(f, above, p_hat);

    // composite route: substitute the section into the map
    auto sec = section_coordinate_polys(js, fn);
    auto table = bch_table(js.alg());
    std::vector<MPoly> comp_base, comp_top;
    for (auto &c : f.base)
        comp_base.push_back(c.compose(sec));
    for (auto &c : f.stack[m])
        comp_top.push_back(c.compose(sec));

    // N'_j from the composite base map, C'_j from the composite top block
    RatMatrix nmat(r, r);
    std::vector<std::vector<Rat>> cprime(r);
    RatVec b = detail::eval_all(comp_base, a.coords);
    for (std::size_t j = 0; j < r; ++j) {
        RatVec vraw(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            vraw[i] = table->left_jac[i][j].eval(a.coords);
        auto directional = [&](const std::vector<MPoly> &polys) {
            RatVec outv(polys.size(), Rat(0));
            for (std::size_t i = 0; i < polys.size(); ++i)
                for (std::size_t var = 0; var < n; ++var) {
                    if (vraw[var].is_zero())
                        continue;
                    MPoly d = polys[i].derivative(var);
                    if (!d.is_zero())
                        outv[i] += d.eval(a.coords) * vraw[var];
                }
            return outv;
        };
        RatVec ntilde = directional(comp_base);
        RatVec ntriv(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k2 = 0; k2 < n; ++k2)
                if (!ntilde[k2].is_zero())
                    ntriv[i] += table->left_jac_inv[i][k2].eval(b) * ntilde[k2];
        for (std::size_t i = r; i < n; ++i)
            if (!ntriv[i].is_zero())
                throw CertificateError("prolong_jet_consistency: composite frame left the first layer");
        for (std::size_t i = 0; i < r; ++i)
            nmat.set(i, j, ntriv[i]);
        RatVec cp = directional(comp_top);
        cprime[j] = cp;
    }
    if (rank(nmat) != r)
        throw ObstructionError("prolong_jet_consistency: point is outside the domain");

    std::vector<RatVec> ndual(r, RatVec(r, Rat(0)));
    for (std::size_t i = 0; i < r; ++i) {
        RatVec e(r, Rat(0));
        e[i] = Rat(1);
        auto col = solve_linear(nmat, e);
        for (std::size_t j = 0; j < r; ++j)
            ndual[j][i] = (*col)[j];
    }
    auto bm = hd_basis(js.alg(), m);
    HdElem top = HdElem::zero(js.alg(), w, m + 1);
    for (std::size_t j = 0; j < r; ++j) {
        HdElem c = HdElem::zero(js.alg(), w, m);
        for (std::size_t pos = 0; pos < bm->elements.size(); ++pos)
            for (int cc = 0; cc < w; ++cc) {
                Rat coef = cprime[j][pos * w + cc];
                if (coef.is_zero())
                    continue;
                for (auto &[word, val] : bm->elements[pos].coeffs) {
                    RatVec wv(w, Rat(0));
                    wv[cc] = coef * val[0];
                    c.add_term(word, wv);
                }
            }
        for (auto &[word, val] : c.coeffs)
            for (std::size_t last = 0; last < r; ++last) {
                if (ndual[j][last].is_zero())
                    continue;
                Word ext = word;
                ext.push_back(last);
                top.add_term(ext, ndual[j][last] * val);
            }
    }
    out.composite_top = top;
    out.consistent = (top == out.prolonged.stack.parts[m + 1]);

    // build h from the finite jet data at the image point and verify its jet
    JetPoint target = out.prolonged;
    AlgElem bpt(js.alg(), b);
    WPoly h = WPoly::zero(js.alg(), w);
    for (int k = 0; k <= m + 1; ++k) {
        auto mem = hd_membership(target.stack.parts[k]);
        if (!mem.member)
            throw CertificateError("prolong_jet_consistency: jet data is not horizontal");
        auto dual = dual_poly_basis(bpt, k);
        for (auto &[idx, coeff] : mem.expansion) {
            std::size_t pos = 0;
            for (; pos < dual->indices.size(); ++pos)
                if (dual->indices[pos] == idx)
                    break;
            for (int cc = 0; cc < w; ++cc)
                if (!coeff[cc].is_zero())
                    h.comps[cc] += dual->polys[pos] * coeff[cc];
        }
    }
    out.h = h;
    if (!(jet_of(above, h, bpt).stack == target.stack))
        out.consistent = false;
    return out;
}

struct DeprolongResult {
    bool ok = false;
    std::optional<PolyMap> factored;
    std::string obstruction_component;
    MPoly obstruction;
    bool base_case = false;        // true when factoring J^1 -> J^0
    bool hypotheses_hold = false;  // the dim W / nondegeneracy conditions, base case only
};

namespace detail {

/// Condition (B): every nonzero first-layer vector has a nonvanishing
/// bracket with some first-layer vector.
inline bool v1_nondegenerate(const StratAlg::Ptr &alg) {
    std::size_t r = alg->dim_v1();
    if (alg->step() < 2)
        return false;
    std::size_t rows = alg->layer(2).size() * r;
    RatMatrix m(rows, r);
    for (std::size_t v = 0; v < r; ++v)
        for (std::size_t u = 0; u < r; ++u) {
            auto terms = alg->basis_bracket(u, v);
            for (auto &t : terms) {
                // locate t.k within layer 2
                const auto &l2 = alg->layer(2);
                for (std::size_t pos = 0; pos < l2.size(); ++pos)
                    if (l2[pos] == t.k)
                        m.add(u * l2.size() + pos, v, t.c);
            }
        }
    return kernel_basis(m).empty();
}

} // namespace detail

inline DeprolongResult deprolong(const PolyMap &f_hat) {
    const JetSpace &above = f_hat.space;
    if (above.order() < 1)
        throw std::invalid_argument("deprolong: the map must live on a jet space of order >= 1");
    int m = above.order() - 1;
    JetSpace below(above.alg(), above.wdim(), m);

    DeprolongResult out;
    out.base_case = (m == 0);
    if (out.base_case)
        out.hypotheses_hold = above.wdim() > 1 || detail::v1_nondegenerate(above.alg());

    // the projected components must not depend on the top-degree block
    std::size_t lo = above.stack_offset(above.order());
    std::size_t hi = above.nvars();
    auto check_block = [&](const MPoly &p, const std::string &name) {
        for (std::size_t var = lo; var < hi; ++var) {
            MPoly d = p.derivative(var);
            if (!d.is_zero()) {
                out.ok = false;
                out.obstruction_component = name;
                out.obstruction = d;
                return false;
            }
        }
        return true;
    };
    for (std::size_t i = 0; i < f_hat.base.size(); ++i)
        if (!check_block(f_hat.base[i], "base[" + std::to_string(i) + "]"))
            return out;
    for (int k = 0; k <= m; ++k)
        for (std::size_t i = 0; i < f_hat.stack[k].size(); ++i)
            if (!check_block(f_hat.stack[k][i],
                             "stack[" + std::to_string(k) + "][" + std::to_string(i) + "]"))
                return out;

    PolyMap g{below, {}, sym_stack_zero(below, below.nvars()), false};
    auto shrink = [&](MPoly p) {
        for (std::size_t var = lo; var < hi; ++var)
            p = p.substitute(var, Rat(0));
        return detail::restrict_block(p, 0, below.nvars());
    };
    for (auto &c : f_hat.base)
        g.base.push_back(shrink(c));
    for (int k = 0; k <= m; ++k)
        for (std::size_t i = 0; i < f_hat.stack[k].size(); ++i)
            g.stack[k][i] = shrink(f_hat.stack[k][i]);
    auto check = is_contact(g);
    if (!check.certified)
        throw CertificateError("deprolong: factored map failed the contact conditions");
    g.contact_certified = true;
    out.ok = true;
    out.factored = std::move(g);
    return out;
}

/// A candidate prolongation is certified by the uniqueness theorem: it must
/// project onto the lower-order map and be contact.
struct ProlongationCertificate {
    bool projection_ok = false;
    ContactCheck contact;
    bool ok() const { return projection_ok && contact.certified; }
};

inline ProlongationCertificate verify_prolongation(const PolyMap &f, const PolyMap &f_hat) {
    const JetSpace &below = f.space;
    const JetSpace &above = f_hat.space;
    if (above.order() != below.order() + 1)
        throw std::invalid_argument("verify_prolongation: order mismatch");
    ProlongationCertificate out;
    out.projection_ok = true;
    // the source variables of the lower space form a prefix of the upper ones
    std::size_t nv = above.nvars();
    for (std::size_t i = 0; i < f.base.size() && out.projection_ok; ++i)
        if (!(f_hat.base[i] == f.base[i].embed(nv, 0)))
            out.projection_ok = false;
    for (int k = 0; k <= below.order() && out.projection_ok; ++k)
        for (std::size_t i = 0; i < f.stack[k].size(); ++i)
            if (!(f_hat.stack[k][i] == f.stack[k][i].embed(nv, 0))) {
                out.projection_ok = false;
                break;
            }
    out.contact = is_contact(f_hat);
    return out;
}

/// The structured prolongation of a left translation: translate by the same
/// point with the new top component set to zero.
inline PolyMap prolong_translation(const JetSpace &above, const JetPoint &q) {
    HdStack lifted = HdStack::zero(above.alg(), above.wdim(), above.order());
    for (int k = 0; k <= above.order() - 1; ++k)
        lifted.parts[k] = q.stack.parts[k];
    return left_translation_map(above, JetPoint{q.base, lifted});
}

// ---------------------------------------------------------------------------
// Horizontal vector fields with polynomial coefficients

/// Horizontal field X = v^X + A^X in the left-trivialized frame, with
/// polynomial coefficient functions over the product chart.
struct HorizField {
    JetSpace space;
    std::vector<MPoly> v; // components over the first-layer basis
    std::vector<MPoly> a; // components over the top-degree basis, [pos*wdim+c]
};

/// Velocities of the left-invariant frame of the full jet algebra, cached
/// for coefficient-function differentiation.
class JetFieldFrame {
  public:
    explicit JetFieldFrame(const JetSpace &js) : js_(js) {
        const JetAlgebra &ja = js.jet_algebra();
        std::size_t nv = js.nvars();
        auto table = bch_table(js.alg());
        SymStack avars = sym_stack_vars(js);
        for (auto &tag : ja.tags) {
            std::vector<MPoly> vel(nv, MPoly(nv));
            if (tag.is_base) {
                for (std::size_t i = 0; i < js.alg()->dim(); ++i)
                    vel[i] = table->left_jac[i][tag.base_index].embed(nv, 0);
                std::vector<MPoly> xu(js.alg()->dim(), MPoly(nv));
                xu[tag.base_index] = MPoly::constant(nv, Rat(1));
                SymStack s = sym_contract(js, xu, avars, nv);
                for (int k = 0; k <= js.order(); ++k)
                    for (std::size_t i = 0; i < s[k].size(); ++i)
                        vel[js.var_of(k, i / js.wdim(), i % js.wdim())] = s[k][i];
            } else {
                vel[js.var_of(tag.hd_degree, tag.hd_pos, tag.wcomp)] =
                    MPoly::constant(nv, Rat(1));
            }
            velocities_.push_back(std::move(vel));
        }
    }

    const JetSpace &space() const { return js_; }
    std::size_t size() const { return velocities_.size(); }

    /// Left-invariant derivative of a coordinate function along direction u.
    MPoly lie(std::size_t u, const MPoly &f) const {
        MPoly out(js_.nvars());
        const auto &vel = velocities_[u];
        for (std::size_t var = 0; var < vel.size(); ++var) {
            if (vel[var].is_zero())
                continue;
            MPoly d = f.derivative(var);
            if (!d.is_zero())
                out += vel[var] * d;
        }
        return out;
    }

  private:
    JetSpace js_;
    std::vector<std::vector<MPoly>> velocities_;
};

/// Coefficients of a vector field over the left-trivialized jet-algebra
/// frame.
using JetField = std::vector<MPoly>;

inline JetField jet_field_zero(const JetFieldFrame &fr) {
    return JetField(fr.size(), MPoly(fr.space().nvars()));
}

inline JetField horiz_to_jet_field(const JetFieldFrame &fr, const HorizField &x) {
    const JetSpace &js = fr.space();
    const JetAlgebra &ja = js.jet_algebra();
    JetField out = jet_field_zero(fr);
    std::size_t r = js.alg()->dim_v1();
    for (std::size_t j = 0; j < r; ++j)
        out[ja.base_to_jet[js.alg()->layer(1)[j]]] = x.v[j];
    for (std::size_t pos = 0; pos < js.hd_dim_scalar(js.order()); ++pos)
        for (int c = 0; c < js.wdim(); ++c)
            out[ja.hd_to_jet[js.order()][pos * js.wdim() + c]] = x.a[pos * js.wdim() + c];
    return out;
}

/// Vector-field bracket in the left-trivialized frame, expanded through
/// [fX, gY] = f (X~g) Y - g (Y~f) X + fg [X,Y] on the frame directions.
inline JetField field_bracket(const JetFieldFrame &fr, const JetField &f, const JetField &g) {
    const JetAlgebra &ja = fr.space().jet_algebra();
    JetField out = jet_field_zero(fr);
    for (std::size_t al = 0; al < f.size(); ++al) {
        if (f[al].is_zero())
            continue;
        for (std::size_t ga = 0; ga < g.size(); ++ga) {
            if (g[ga].is_zero())
                continue;
            MPoly d = fr.lie(al, g[ga]);
            if (!d.is_zero())
                out[ga] += f[al] * d;
        }
    }
    for (std::size_t be = 0; be < g.size(); ++be) {
        if (g[be].is_zero())
            continue;
        for (std::size_t ga = 0; ga < f.size(); ++ga) {
            if (f[ga].is_zero())
                continue;
            MPoly d = fr.lie(be, f[ga]);
            if (!d.is_zero())
                out[ga] -= g[be] * d;
        }
    }
    for (std::size_t al = 0; al < f.size(); ++al) {
        if (f[al].is_zero())
            continue;
        for (std::size_t be = 0; be < g.size(); ++be) {
            if (g[be].is_zero())
                continue;
            for (auto &bt : ja.derived->basis_bracket(al, be))
                out[bt.k] += f[al] * g[be] * bt.c;
        }
    }
    return out;
}

struct CharacteristicResult {
    bool v_vanishes = false;       // the first-layer part is identically zero
    bool characteristic = false;   // brute-force verdict over the generating family
    bool agree = false;
    std::size_t witness_direction = 0; // frame direction of the witness Y
    Expo witness_monomial;             // monomial multiplying it
    MPoly witness_value;               // a nonzero layer-3 component
};

/// Classifies a horizontal field: the analytic criterion (vanishing
/// first-layer part) against the brute-force bracket condition
/// Pi_3([X,[X,Y]]) = 0 over the generating family of monomial multiples of
/// frame fields.
inline CharacteristicResult characteristic_test(const HorizField &x, int monomial_degree = 2) {
    const JetSpace &js = x.space;
    if (js.order() < 2)
        throw std::invalid_argument("characteristic_test: requires order >= 2");
    JetFieldFrame fr(js);
    const JetAlgebra &ja = js.jet_algebra();
    CharacteristicResult out;
    out.v_vanishes = true;
    for (auto &p : x.v)
        if (!p.is_zero())
            out.v_vanishes = false;

    JetField xf = horiz_to_jet_field(fr, x);
    std::vector<std::size_t> layer1, layer3;
    for (std::size_t i = 0; i < ja.tags.size(); ++i) {
        if (ja.derived->weight(i) == 1)
            layer1.push_back(i);
        if (ja.derived->weight(i) == 3)
            layer3.push_back(i);
    }

    // all monomials of total degree <= monomial_degree over the chart
    std::vector<Expo> monos;
    Expo cur(js.nvars(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int rest) {
        if (pos == js.nvars()) {
            monos.push_back(cur);
            return;
        }
        for (int e = 0; e <= rest; ++e) {
            cur[pos] = (std::uint32_t)e;
            rec(pos + 1, rest - e);
        }
        cur[pos] = 0;
    };
    rec(0, monomial_degree);

    out.characteristic = true;
    for (auto dir : layer1) {
        for (auto &mu : monos) {
            JetField y = jet_field_zero(fr);
            MPoly mono(js.nvars());
            mono.add_term(mu, Rat(1));
            y[dir] = mono;
            JetField inner = field_bracket(fr, xf, y);
            JetField outer = field_bracket(fr, xf, inner);
            for (auto g3 : layer3)
                if (!outer[g3].is_zero()) {
                    out.characteristic = false;
                    out.witness_direction = dir;
                    out.witness_monomial = mu;
                    out.witness_value = outer[g3];
                    out.agree = (out.v_vanishes == out.characteristic);
                    return out;
                }
        }
    }
    out.agree = (out.v_vanishes == out.characteristic);
    return out;
}

// ---------------------------------------------------------------------------
// Abelian rigidity in the first layer of the order-1 jet algebra

struct RigidityResult {
    bool preconditions = false; // dim W > 1, spanning set inside the first layer
    bool abelian = false;
    bool dimension_ok = false;
    bool verdict = false; // the subalgebra equals the fiber part HD^1
    std::string detail;
};

/// For dim W > 1: an abelian subalgebra of the first layer of the order-1
/// jet algebra of dimension dim V1 * dim W must be the fiber HD^1. The check
/// reports whether a given spanning set witnesses this.
inline RigidityResult abelian_rigidity_check(const JetSpace &js, const std::vector<JetPoint> &span) {
    if (js.order() != 1)
        throw std::invalid_argument("abelian_rigidity_check: the ambient space must have order 1");
    RigidityResult out;
    if (js.wdim() < 2) {
        out.detail = "precondition failed: dim W must exceed 1";
        return out;
    }
    // spanning set must lie in the first layer: V1 base part, degree-1 stack
    for (auto &v : span) {
        js.require(v);
        for (std::size_t i = 0; i < js.alg()->dim(); ++i)
            if (!v.base.coords[i].is_zero() && js.alg()->weight(i) != 1) {
                out.detail = "precondition failed: element leaves the first layer";
                return out;
            }
        if (!v.stack.parts[0].is_zero()) {
            out.detail = "precondition failed: element has a degree-0 component";
            return out;
        }
    }
    out.preconditions = true;

    out.abelian = true;
    for (std::size_t i = 0; i < span.size() && out.abelian; ++i)
        for (std::size_t j = i + 1; j < span.size(); ++j)
            if (!jet_bracket(js, span[i], span[j]).is_zero()) {
                out.abelian = false;
                out.detail = "spanning set is not abelian";
            }

    std::size_t want = js.alg()->dim_v1() * (std::size_t)js.wdim();
    RatMatrix coords(span.size(), js.nvars());
    for (std::size_t i = 0; i < span.size(); ++i) {
        RatVec c = js.point_coords(span[i]);
        for (std::size_t j = 0; j < c.size(); ++j)
            coords.set(i, j, c[j]);
    }
    out.dimension_ok = rank(coords) == want;
    if (!out.abelian || !out.dimension_ok) {
        if (out.detail.empty())
            out.detail = "dimension differs from dim V1 * dim W";
        return out;
    }
    out.verdict = true;
    for (auto &v : span)
        if (!v.base.is_zero()) {
            out.verdict = false;
            out.detail = "nonzero projection to the base layer";
        }
    return out;
}

// ---------------------------------------------------------------------------
// Sharpness of the base-case de-prolongation

struct CounterexampleResult {
    StratAlg::Ptr algebra;      // g' x R
    JetSpace space;             // J^1(g' x R; R)
    PolyMap automorphism;
    bool algebra_automorphism = false; // bracket preservation of the linear map
    bool involution_signs = false;     // applying the swap twice negates the pair
    ContactCheck contact;
    DeprolongResult deprolongation;    // expected to carry an obstruction
};

/// Builds the contact automorphism of J^1((g' x R); R) that swaps the extra
/// horizontal direction with its dual fiber direction; it preserves the
/// contact structure but does not factor through the order-0 jet space.
inline CounterexampleResult counterexample_automorphism(const StratAlg::Ptr &g_prime) {
    auto g = detail::make_product_with_line(g_prime);
    JetSpace js(g, 1, 1);
    const JetAlgebra &ja = js.jet_algebra();

    std::size_t vhat = g_prime->dim_v1(); // index of the appended generator
    // locate the dual direction in the degree-1 basis
    auto b1 = hd_basis(g, 1);
    std::size_t dual_pos = b1->indices.size();
    for (std::size_t pos = 0; pos < b1->indices.size(); ++pos)
        if (b1->indices[pos][vhat] == 1)
            dual_pos = pos;
    if (dual_pos == b1->indices.size())
        throw CertificateError("counterexample: missing dual direction");

    std::size_t jv = ja.base_to_jet[vhat];
    std::size_t jd = ja.hd_to_jet[1][dual_pos];

    // linear map on jet-algebra coordinates: v -> v*, v* -> -v, rest fixed
    std::size_t njet = ja.tags.size();
    auto phi = [&](const RatVec &c) {
        RatVec out = c;
        out[jd] = c[jv];
        out[jv] = -c[jd];
        return out;
    };

    CounterexampleResult out{g, js, identity_map(js), false, false, {}, {}};

    // bracket preservation on all basis pairs
    out.algebra_automorphism = true;
    for (std::size_t p = 0; p < njet && out.algebra_automorphism; ++p)
        for (std::size_t q = 0; q < njet; ++q) {
            RatVec ep(njet, Rat(0)), eq(njet, Rat(0));
            ep[p] = Rat(1);
            eq[q] = Rat(1);
            AlgElem lhs = bracket(AlgElem(ja.derived, phi(ep)), AlgElem(ja.derived, phi(eq)));
            AlgElem rhs0 = bracket(AlgElem::basis(ja.derived, p), AlgElem::basis(ja.derived, q));
            if (lhs.coords != phi(rhs0.coords)) {
                out.algebra_automorphism = false;
                break;
            }
        }

    // applying the swap twice fixes everything else and negates the pair
    {
        bool ok = true;
        for (std::size_t i = 0; i < njet; ++i) {
            RatVec e(njet, Rat(0));
            e[i] = Rat(1);
            RatVec twice = phi(phi(e));
            for (std::size_t j = 0; j < njet; ++j) {
                Rat expect = (i == j) ? ((i == jv || i == jd) ? Rat(-1) : Rat(1)) : Rat(0);
                if (twice[j] != expect)
                    ok = false;
            }
        }
        out.involution_signs = ok;
    }

    // the group automorphism exp o phi o log in the product chart
    std::size_t nv = js.nvars();
    std::vector<MPoly> xs;
    for (std::size_t i = 0; i < g->dim(); ++i)
        xs.push_back(MPoly::variable(nv, i));
    SymStack avars = sym_stack_vars(js);
    SymStack logstack = sym_psi_inv(js, xs, avars, nv);
    // apply the swap on (x, X) coordinates
    std::vector<MPoly> xs2 = xs;
    SymStack logstack2 = logstack;
    xs2[vhat] = Rat(-1) * logstack[1][dual_pos];
    logstack2[1][dual_pos] = xs[vhat];
    PolyMap f{js, xs2, sym_psi(js, xs2, logstack2, nv), false};
    out.contact = is_contact(f);
    f.contact_certified = out.contact.certified;
    out.automorphism = f;
    out.deprolongation = deprolong(f);
    return out;
}

} // namespace cjet

#endif
