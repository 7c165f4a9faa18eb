#ifndef CJET_EMBED_HPP
#define CJET_EMBED_HPP

#include "contact.hpp"

namespace cjet {

/// Kill the top layer: brackets into it are truncated away. The adapted
/// ordering keeps the remaining indices stable.
inline StratAlg::Ptr quotient_algebra(const StratAlg::Ptr &g) {
    if (g->step() < 2)
        throw std::invalid_argument("quotient_algebra: nothing to quotient in step 1");
    std::size_t keep = g->dim() - g->layer(g->step()).size();
    std::vector<int> weights(g->weights().begin(), g->weights().begin() + keep);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    for (auto &[ij, terms] : g->structure()) {
        if (ij.first >= keep || ij.second >= keep)
            continue;
        std::vector<BracketTerm> kept;
        for (auto &t : terms)
            if (t.k < keep)
                kept.push_back(t);
        if (!kept.empty())
            st[ij] = std::move(kept);
    }
    std::vector<std::string> labels(g->labels().begin(), g->labels().begin() + keep);
    std::vector<std::string> coords(g->coords().begin(), g->coords().begin() + keep);
    return StratAlg::make(g->name() + "/top", weights, st, labels, coords);
}

/// Top-layer defect of the group law evaluated on points.
inline AlgElem eta(const AlgElem &x, const AlgElem &y) {
    x.require_same(y);
    AlgElem out = layer_project(bch(x, y), x.alg->step());
    out = out - layer_project(x, x.alg->step()) - layer_project(y, x.alg->step());
    return out;
}

/// The strata-preserving embedding of a step-(s+1) group into the order-s
/// polynomial jet space over its quotient, generated by the group-law
/// defect. Every certificate is re-verified on construction.
struct EmbeddingResult {
    StratAlg::Ptr algebra;        // the full group, step s+1
    StratAlg::Ptr quotient;       // step s
    std::vector<std::size_t> top; // indices of the killed layer
    int wdim = 0;                 // dim of the top layer = value dimension
    int order = 0;                // jet order s
    std::vector<WPoly> poly_part; // W-valued polynomial on the quotient, per basis vector
    bool cert_homogeneity = false;
    bool cert_morphism = false;
    bool cert_injective = false;
    bool cert_strata = false;

    bool all_certified() const {
        return cert_homogeneity && cert_morphism && cert_injective && cert_strata;
    }
};

inline EmbeddingResult embed(const StratAlg::Ptr &g) {
    EmbeddingResult out;
    out.algebra = g;
    out.quotient = quotient_algebra(g);
    out.top = g->layer(g->step());
    out.wdim = (int)out.top.size();
    out.order = g->step() - 1;
    std::size_t n = g->dim();
    std::size_t keep = out.quotient->dim();

    auto etas = eta_polys(g); // one per top basis vector, in 2n variables
    auto to_quotient = [&](MPoly p) {
        // p lives in the y block and only uses the primed coordinates
        p = detail::restrict_block(p, n, n);
        for (auto t : out.top)
            if (p.degree_in(t) != 0)
                throw CertificateError("embed: defect depends on a top-layer coordinate");
        return detail::restrict_block(p, 0, keep);
    };

    for (std::size_t u = 0; u < n; ++u) {
        WPoly comp = WPoly::zero(out.quotient, out.wdim);
        for (int c = 0; c < out.wdim; ++c) {
            MPoly d = etas[c].derivative(u);
            for (std::size_t i = 0; i < n; ++i)
                d = d.substitute(i, Rat(0));
            comp.comps[c] = to_quotient(d);
        }
        if (g->weight(u) == g->step()) {
            if (!comp.is_zero())
                throw CertificateError("embed: the defect differentiates along the top layer");
            // the top layer maps identically onto the constants
            for (int c = 0; c < out.wdim; ++c)
                if (out.top[c] == u)
                    comp.comps[c] = MPoly::constant(keep, Rat(1));
        }
        out.poly_part.push_back(std::move(comp));
    }

    // (a) homogeneity: the polynomial part of layer k lands in the
    // weight-(s+1-k) homogeneous polynomials at the identity
    out.cert_homogeneity = true;
    AlgElem e = AlgElem::zero(out.quotient);
    for (std::size_t u = 0; u < n; ++u)
        if (!is_homogeneous(out.poly_part[u], e, g->step() - g->weight(u)))
            out.cert_homogeneity = false;

    // (b) morphism identities through the right-invariant contraction
    out.cert_morphism = true;
    auto primed = [&](std::size_t u) -> std::optional<AlgElem> {
        if (g->weight(u) == g->step())
            return std::nullopt;
        return AlgElem::basis(out.quotient, u);
    };
    for (std::size_t u = 0; u < n && out.cert_morphism; ++u)
        for (std::size_t w = u + 1; w < n; ++w) {
            WPoly lhs = WPoly::zero(out.quotient, out.wdim);
            if (auto wp = primed(w))
                lhs += right_inv_derive(*wp, out.poly_part[u]);
            if (auto up = primed(u))
                lhs = lhs - right_inv_derive(*up, out.poly_part[w]);
            WPoly rhs = WPoly::zero(out.quotient, out.wdim);
            for (auto &t : g->basis_bracket(u, w))
                rhs += t.c * out.poly_part[t.k];
            if (!(lhs - rhs).is_zero()) {
                out.cert_morphism = false;
                break;
            }
            // base parts: the quotient bracket matches the projection
            if (primed(u) && primed(w)) {
                AlgElem qb = bracket(*primed(u), *primed(w));
                RatVec expect(keep, Rat(0));
                for (auto &t : g->basis_bracket(u, w))
                    if (t.k < keep)
                        expect[t.k] = t.c;
                if (qb.coords != expect)
                    out.cert_morphism = false;
            }
        }

    // (c) injectivity: stack the quotient part and all polynomial
    // coefficients into one matrix and check full rank
    std::map<std::pair<Expo, int>, std::size_t> rows;
    for (auto &p : out.poly_part)
        for (int c = 0; c < out.wdim; ++c)
            for (auto &[expo, v] : p.comps[c].terms())
                rows.emplace(std::make_pair(expo, c), keep + rows.size());
    RatMatrix inj(keep + rows.size(), n);
    for (std::size_t u = 0; u < n; ++u) {
        if (g->weight(u) < g->step())
            inj.set(u, u, Rat(1));
        for (int c = 0; c < out.wdim; ++c)
            for (auto &[expo, v] : out.poly_part[u].comps[c].terms())
                inj.set(rows.at({expo, c}), u, v);
    }
    out.cert_injective = rank(inj) == n;

    // (d) strata preservation: the primed part lies in the right layer by
    // construction; the polynomial part must carry the complementary weight,
    // which is the homogeneity certificate again, plus exactness for the top
    out.cert_strata = out.cert_homogeneity;
    for (auto t : out.top) {
        const WPoly &p = out.poly_part[t];
        for (int c = 0; c < out.wdim; ++c) {
            MPoly expect =
                (out.top[c] == t) ? MPoly::constant(keep, Rat(1)) : MPoly(keep);
            if (!(p.comps[c] == expect))
                out.cert_strata = false;
        }
    }
    if (!out.all_certified())
        throw CertificateError("embed: an embedding certificate failed");
    return out;
}

/// The multilinear form of the embedding: sigma at the identity applied to
/// each polynomial component, with the morphism identities re-verified in
/// the contraction bracket of the jet algebra.
struct MultilinearEmbedding {
    std::vector<HdElem> parts; // per basis vector of g, degree s+1-k
    bool morphism_ok = false;
};

inline MultilinearEmbedding embed_multilinear(const EmbeddingResult &res) {
    MultilinearEmbedding out;
    AlgElem e = AlgElem::zero(res.quotient);
    int s1 = res.algebra->step();
    for (std::size_t u = 0; u < res.algebra->dim(); ++u) {
        int deg = s1 - res.algebra->weight(u);
        out.parts.push_back(sigma_p(res.poly_part[u], e, deg));
    }
    auto as_stack = [&](std::size_t u) {
        HdStack s = HdStack::zero(res.quotient, res.wdim, res.order);
        int deg = s1 - res.algebra->weight(u);
        if (deg <= res.order)
            s.parts[deg] = out.parts[u];
        return s;
    };
    out.morphism_ok = true;
    for (std::size_t u = 0; u < res.algebra->dim() && out.morphism_ok; ++u)
        for (std::size_t w = u + 1; w < res.algebra->dim(); ++w) {
            HdStack lhs = HdStack::zero(res.quotient, res.wdim, res.order);
            if (res.algebra->weight(w) < s1)
                lhs += contract_full(AlgElem::basis(res.quotient, w), as_stack(u));
            if (res.algebra->weight(u) < s1)
                lhs = lhs - contract_full(AlgElem::basis(res.quotient, u), as_stack(w));
            HdStack rhs = HdStack::zero(res.quotient, res.wdim, res.order);
            for (auto &t : res.algebra->basis_bracket(u, w))
                rhs += t.c * as_stack(t.k);
            if (!(lhs == rhs))
                out.morphism_ok = false;
        }
    return out;
}

} // namespace cjet

#endif
