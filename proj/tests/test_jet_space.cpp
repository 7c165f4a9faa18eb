#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cjet/catalog.hpp"
#include "cjet/jet_space.hpp"

#include <random>

using namespace cjet;

namespace {

JetPoint random_jet_point(const JetSpace &js, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long long> num(-4, 4);
    RatVec coords(js.nvars());
    for (auto &v : coords)
        v = Rat(num(rng), 2);
    return js.point_from_coords(coords);
}

MPoly mono(const StratAlg::Ptr &alg, std::initializer_list<std::uint32_t> e, Rat c) {
    MPoly p(alg->dim());
    p.add_term(Expo(e), c);
    return p;
}

WPoly random_wpoly(const StratAlg::Ptr &alg, int wdim, int max_wdeg, std::mt19937_64 &rng) {
    WPoly f = WPoly::zero(alg, wdim);
    std::uniform_int_distribution<long long> num(-4, 4);
    for (int k = 0; k <= max_wdeg; ++k)
        for (auto &idx : weighted_multi_indices(*alg, k))
            for (int c = 0; c < wdim; ++c)
                if (rng() % 2)
                    f.comps[c].add_term(Expo(idx.begin(), idx.end()), Rat(num(rng)));
    return f;
}

/// Left-invariant vector field of the jet algebra element (x, X), evaluated
/// at `at` in left-trivialized form: (x, x -| A + X).
JetPoint left_invariant_at(const JetSpace &js, const JetPoint &at, const JetPoint &v) {
    return JetPoint{v.base, contract_full(v.base, at.stack) + v.stack};
}

} // namespace

TEST_CASE("jet algebra layer dimensions and validity") {
    {
        JetSpace js(catalog("heisenberg(1)"), 1, 1);
        const auto &ja = js.jet_algebra();
        CHECK(ja.derived->dim() == 6);
        CHECK(ja.derived->step() == 2);
        CHECK(ja.derived->layer(1).size() == 4); // V1 + HD^1
        CHECK(ja.derived->layer(2).size() == 2); // V2 + HD^0
        CHECK(ja.derived->validate().ok());
    }
    {
        // classical jets over the plane: step m+1
        JetSpace js(catalog("abelian(2)"), 1, 1);
        const auto &ja = js.jet_algebra();
        CHECK(ja.derived->dim() == 5);
        CHECK(ja.derived->step() == 2);
        CHECK(ja.derived->layer(1).size() == 4);
        CHECK(ja.derived->layer(2).size() == 1);
        CHECK(ja.derived->validate().ok());
    }
    {
        JetSpace js(catalog("abelian(2)"), 2, 2);
        const auto &ja = js.jet_algebra();
        // layers: (2 + 3*2, 0 + 2*2, 0 + 1*2), step 3
        CHECK(ja.derived->step() == 3);
        CHECK(ja.derived->layer(1).size() == 8);
        CHECK(ja.derived->layer(2).size() == 4);
        CHECK(ja.derived->layer(3).size() == 2);
        CHECK(ja.derived->validate().ok());
    }
    {
        JetSpace js(catalog("heisenberg(1)"), 1, 2);
        const auto &ja = js.jet_algebra();
        // layers V_k + HD^{3-k}: (2+4, 1+2, 0+1), step 3
        CHECK(ja.derived->dim() == 10);
        CHECK(ja.derived->step() == 3);
        CHECK(ja.derived->layer(1).size() == 6);
        CHECK(ja.derived->layer(2).size() == 3);
        CHECK(ja.derived->layer(3).size() == 1);
        CHECK(ja.derived->validate().ok());
    }
    {
        JetSpace js(catalog("heisenberg(1)"), 2, 2);
        const auto &ja = js.jet_algebra();
        CHECK(ja.derived->dim() == 3 + 2 * (1 + 2 + 4));
        CHECK(ja.derived->layer(1).size() == 2 + 8);
        CHECK(ja.derived->layer(2).size() == 1 + 4);
        CHECK(ja.derived->layer(3).size() == 2);
        CHECK(ja.derived->validate().ok());
    }
}

TEST_CASE("derived brackets restrict to the base and vanish on the fiber") {
    JetSpace js(catalog("heisenberg(1)"), 1, 1);
    const auto &ja = js.jet_algebra();
    auto d = ja.derived;
    // base part reproduces g
    auto h = js.alg();
    for (std::size_t i = 0; i < h->dim(); ++i)
        for (std::size_t j = 0; j < h->dim(); ++j) {
            AlgElem lhs = bracket(AlgElem::basis(d, ja.base_to_jet[i]),
                                  AlgElem::basis(d, ja.base_to_jet[j]));
            AlgElem want = bracket(AlgElem::basis(h, i), AlgElem::basis(h, j));
            RatVec mapped(d->dim(), Rat(0));
            for (std::size_t k = 0; k < h->dim(); ++k)
                mapped[ja.base_to_jet[k]] = want.coords[k];
            CHECK(lhs == AlgElem(d, mapped));
        }
    // horizontal-derivative directions commute with each other
    for (int k1 = 0; k1 <= 1; ++k1)
        for (int k2 = 0; k2 <= 1; ++k2)
            for (auto i : ja.hd_to_jet[k1])
                for (auto j : ja.hd_to_jet[k2])
                    CHECK(bracket(AlgElem::basis(d, i), AlgElem::basis(d, j)).is_zero());
}

TEST_CASE("semidirect bracket agrees with the derived structure constants") {
    for (auto wdim : {1, 2}) {
        JetSpace js(catalog("heisenberg(1)"), wdim, 1);
        const auto &ja = js.jet_algebra();
        std::size_t n = ja.tags.size();
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                RatVec cp(n, Rat(0)), cq(n, Rat(0));
                cp[p] = Rat(1);
                cq[q] = Rat(1);
                JetPoint a = jet_from_algebra_coords(js, cp);
                JetPoint b = jet_from_algebra_coords(js, cq);
                RatVec lhs = jet_algebra_coords(js, jet_bracket(js, a, b));
                AlgElem rhs = bracket(AlgElem::basis(ja.derived, p), AlgElem::basis(ja.derived, q));
                CHECK(lhs == rhs.coords);
            }
    }
}

TEST_CASE("jet group law") {
    JetSpace js(catalog("heisenberg(1)"), 1, 2);
    std::mt19937_64 rng(139);
    JetPoint e = js.zero();
    for (int t = 0; t < 8; ++t) {
        JetPoint p = random_jet_point(js, rng);
        JetPoint q = random_jet_point(js, rng);
        JetPoint r = random_jet_point(js, rng);
        CHECK(jet_multiply(js, e, p) == p);
        CHECK(jet_multiply(js, p, e) == p);
        CHECK(jet_multiply(js, p, jet_inverse(js, p)) == e);
        CHECK(jet_multiply(js, jet_inverse(js, p), p) == e);
        CHECK(jet_multiply(js, jet_multiply(js, p, q), r) ==
              jet_multiply(js, p, jet_multiply(js, q, r)));
        // base-only points multiply through the base group law
        JetPoint pb{p.base, HdStack::zero(js.alg(), 1, 2)};
        JetPoint qb{q.base, HdStack::zero(js.alg(), 1, 2)};
        JetPoint prod = jet_multiply(js, pb, qb);
        CHECK(prod.base == bch(p.base, q.base));
        CHECK(prod.stack.is_zero());
    }
}

TEST_CASE("jet exponential") {
    JetSpace js(catalog("heisenberg(1)"), 1, 2);
    std::mt19937_64 rng(149);
    for (int t = 0; t < 8; ++t) {
        JetPoint v = random_jet_point(js, rng);
        // vanishing stack: exponential is the base exponential
        JetPoint vb{v.base, HdStack::zero(js.alg(), 1, 2)};
        JetPoint eb = jet_exp(js, vb);
        CHECK(eb.base == v.base);
        CHECK(eb.stack.is_zero());
        // vanishing base: the fiber is additive
        JetPoint vf{AlgElem::zero(js.alg()), v.stack};
        CHECK(jet_exp(js, vf) == vf);
        // one-parameter subgroup at t = 2
        JetPoint twice{Rat(2) * v.base, Rat(2) * v.stack};
        JetPoint g = jet_exp(js, v);
        CHECK(jet_exp(js, twice) == jet_multiply(js, g, g));
        // exp and log invert each other, in both orders
        CHECK(jet_log(js, g) == v);
        JetPoint w = random_jet_point(js, rng);
        CHECK(jet_exp(js, jet_log(js, w)) == w);
    }
}

TEST_CASE("coframe values") {
    JetSpace js(catalog("heisenberg(1)"), 1, 2);
    std::mt19937_64 rng(151);
    for (int t = 0; t < 8; ++t) {
        JetPoint at = random_jet_point(js, rng);
        JetPoint v = random_jet_point(js, rng); // read as algebra element (x, X)
        // on left-invariant fields, omega returns the constant stack part
        CoFrameValue cf = coframe(js, at, left_invariant_at(js, at, v));
        for (int l = 0; l < js.order(); ++l)
            CHECK(cf.omega[l] == v.stack.parts[l]);
        // theta only sees the base component
        CHECK(cf.theta.size() == 1);
        CHECK(cf.theta[0] == layer_project(v.base, 2));
        // left-invariance: the values do not depend on the point
        JetPoint at2 = random_jet_point(js, rng);
        CoFrameValue cf2 = coframe(js, at2, left_invariant_at(js, at2, v));
        for (int l = 0; l < js.order(); ++l)
            CHECK(cf2.omega[l] == cf.omega[l]);
        CHECK(cf2.theta[0] == cf.theta[0]);
    }
}

TEST_CASE("horizontal frame annihilates the coframe and spans the first layer") {
    for (auto wdim : {1, 2}) {
        JetSpace js(catalog("heisenberg(1)"), wdim, 2);
        std::mt19937_64 rng(157);
        JetPoint at = random_jet_point(js, rng);
        auto frame = horizontal_frame(js, at);
        CHECK(frame.size() == js.alg()->dim_v1() + js.hd_dim_scalar(2) * wdim);
        for (auto &f : frame) {
            CoFrameValue cf = coframe(js, at, f);
            for (auto &o : cf.omega)
                CHECK(o.is_zero());
            for (auto &th : cf.theta)
                CHECK(th.is_zero());
        }
        // at the identity the frame is exactly the first layer of the algebra
        auto frame_e = horizontal_frame(js, js.zero());
        const auto &ja = js.jet_algebra();
        std::vector<std::size_t> layer1 = ja.derived->layer(1);
        REQUIRE(frame_e.size() == layer1.size());
        for (std::size_t i = 0; i < frame_e.size(); ++i) {
            RatVec coords = jet_algebra_coords(js, frame_e[i]);
            std::size_t nonzero = 0, where = 0;
            for (std::size_t j = 0; j < coords.size(); ++j)
                if (!coords[j].is_zero()) {
                    ++nonzero;
                    where = j;
                }
            CHECK(nonzero == 1);
            CHECK(ja.derived->weight(where) == 1);
        }
        // frame brackets generate the second layer
        std::vector<RatVec> images;
        for (std::size_t i = 0; i < frame_e.size(); ++i)
            for (std::size_t j = i + 1; j < frame_e.size(); ++j)
                images.push_back(jet_algebra_coords(js, jet_bracket(js, frame_e[i], frame_e[j])));
        auto layer2 = ja.derived->layer(2);
        RatMatrix span(layer2.size(), images.size());
        for (std::size_t c = 0; c < images.size(); ++c)
            for (std::size_t r = 0; r < layer2.size(); ++r)
                span.set(r, c, images[c][layer2[r]]);
        CHECK(rank(span) == layer2.size());
    }
}

TEST_CASE("classical contact relations for jets over the plane") {
    JetSpace js(catalog("abelian(2)"), 1, 1);
    auto frame = horizontal_frame(js, js.zero());
    REQUIRE(frame.size() == 4); // two base fields, two fiber fields
    auto basis1 = hd_basis(js.alg(), 1);
    // [X_i, Y_j] = (0, -B_j(v_i)): the base-fiber pairs reproduce the
    // canonical contact relations, all other frame brackets vanish
    int nontrivial = 0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            JetPoint br = jet_bracket(js, frame[i], frame[2 + j]);
            CHECK(br.base.is_zero());
            CHECK(br.stack.parts[1].is_zero());
            Rat expect = -basis1->elements[j].value({i})[0];
            CHECK(br.stack.parts[0].value({}) == RatVec{expect});
            if (!expect.is_zero())
                ++nontrivial;
        }
    CHECK(nontrivial == 2);
    CHECK(jet_bracket(js, frame[0], frame[1]).is_zero());
    CHECK(jet_bracket(js, frame[2], frame[3]).is_zero());
}

TEST_CASE("jets of polynomial functions") {
    auto h = catalog("heisenberg(1)");
    JetSpace js(h, 1, 2);
    AlgElem e = AlgElem::zero(h);

    CHECK(jet_of(js, WPoly::zero(h, 1), e) == js.zero());

    WPoly f = WPoly::scalar(h, mono(h, {0, 0, 1}, Rat(1)) + mono(h, {1, 1, 0}, Rat(-1, 2)));
    JetPoint jp = jet_of(js, f, e);
    CHECK(jp.stack.parts[0].is_zero());
    CHECK(jp.stack.parts[1].is_zero());
    CHECK(jp.stack.parts[2] == hd_basis(h, 2)->elements[0]);

    // order zero: the jet is the point together with the value
    JetSpace js0(h, 1, 0);
    std::mt19937_64 rng(163);
    for (int t = 0; t < 5; ++t) {
        WPoly g = random_wpoly(h, 1, 2, rng);
        AlgElem p = AlgElem(h, {Rat(1, 2), Rat(-1), Rat(3)});
        JetPoint j0 = jet_of(js0, g, p);
        CHECK(j0.base == p);
        CHECK(j0.stack.parts[0].value({}) == g.eval(p.coords));
    }
}

TEST_CASE("sections that are jets are recognized and reconstructed") {
    for (auto spec : {std::pair<const char *, int>{"heisenberg(1)", 1},
                      std::pair<const char *, int>{"heisenberg(1)", 2},
                      std::pair<const char *, int>{"abelian(2)", 1}}) {
        auto alg = catalog(spec.first);
        JetSpace js(alg, 2, spec.second);
        std::mt19937_64 rng(167);
        for (int t = 0; t < 6; ++t) {
            WPoly f = random_wpoly(alg, 2, spec.second + 2, rng);
            PolySection gamma = jet_section_of(f, spec.second);
            auto verdict = is_jet_section(js, gamma);
            REQUIRE(verdict.is_jet);
            CHECK(verdict.generator == f);

            if (spec.second >= 1) {
                // perturbing the first level by a constant breaks the contact
                // conditions at level zero
                PolySection bad = gamma;
                Word w0{0};
                WPoly bump = WPoly::zero(alg, 2);
                bump.comps[0] += MPoly::constant(alg->dim(), Rat(1));
                bad.parts[1][w0] += bump;
                auto v2 = is_jet_section(js, bad);
                CHECK(!v2.is_jet);
                CHECK(v2.witness_level == 0);
            }
        }
    }
}

TEST_CASE("order-zero sections are always jets") {
    auto h = catalog("heisenberg(1)");
    JetSpace js(h, 1, 0);
    std::mt19937_64 rng(173);
    WPoly any = random_wpoly(h, 1, 3, rng);
    PolySection gamma{h, 1, 0, {{{Word{}, any}}}};
    auto verdict = is_jet_section(js, gamma);
    CHECK(verdict.is_jet);
    CHECK(verdict.generator == any);
}

TEST_CASE("jet dilation is a group automorphism") {
    JetSpace js(catalog("heisenberg(1)"), 1, 1);
    std::mt19937_64 rng(179);
    Rat lam(3, 2);
    for (int t = 0; t < 6; ++t) {
        JetPoint p = random_jet_point(js, rng);
        JetPoint q = random_jet_point(js, rng);
        CHECK(jet_dilate(js, jet_multiply(js, p, q), lam) ==
              jet_multiply(js, jet_dilate(js, p, lam), jet_dilate(js, q, lam)));
    }
    // dilation scales the first layer of the algebra linearly in lambda
    JetPoint v = random_jet_point(js, rng);
    JetPoint dv = jet_dilate(js, v, lam);
    CHECK(dv.stack.parts[1] == lam * v.stack.parts[1]);
    CHECK(dv.stack.parts[0] == lam.pow(2) * v.stack.parts[0]);
}

TEST_CASE("point and coordinate conversions round-trip") {
    JetSpace js(catalog("heisenberg(1)"), 2, 2);
    std::mt19937_64 rng(181);
    for (int t = 0; t < 6; ++t) {
        JetPoint p = random_jet_point(js, rng);
        CHECK(js.point_from_coords(js.point_coords(p)) == p);
    }
    // a stack outside the horizontal space is rejected
    HdStack bad = HdStack::zero(js.alg(), 2, 2);
    bad.parts[2].add_term({0, 0}, {Rat(0), Rat(0)});
    bad.parts[2].add_term({0, 1}, {Rat(1), Rat(0)}); // X* (x) Y* alone is fine in degree 2...
    CHECK_NOTHROW(js.stack_coords(bad));
    JetSpace js3(js.alg(), 1, 3);
    HdStack bad3 = HdStack::zero(js.alg(), 1, 3);
    bad3.parts[3].add_term({0, 0, 1}, {Rat(1)}); // ...but not in degree 3
    CHECK_THROWS_AS(js3.stack_coords(bad3), std::invalid_argument);
}
