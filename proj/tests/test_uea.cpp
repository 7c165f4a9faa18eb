#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cjet/catalog.hpp"
#include "cjet/uea.hpp"

#include <random>

using namespace cjet;

namespace {

AlgElem random_elem(const StratAlg::Ptr &alg, std::mt19937_64 &rng) {
    std::uniform_int_distribution<long long> num(-5, 5);
    std::uniform_int_distribution<long long> den(1, 3);
    RatVec c(alg->dim());
    for (auto &v : c)
        v = Rat(num(rng), den(rng));
    return AlgElem(alg, c);
}

UeaElem monomial(const StratAlg::Ptr &alg, int bound, const MultiIdx &idx, const Rat &c) {
    UeaElem e{alg, bound, {}};
    e.add_term(idx, c);
    return e;
}

/// Test-only normalizer that resolves a RANDOM out-of-order adjacent pair at
/// each step; used to check confluence of the rewriting.
UeaElem pbw_normalize_random_order(const StratAlg::Ptr &alg, const Word &word, int bound,
                                   std::mt19937_64 &rng) {
    std::map<Word, Rat> agenda{{word, Rat(1)}};
    UeaElem out{alg, bound, {}};
    while (!agenda.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, agenda.size() - 1);
        auto it = agenda.begin();
        std::advance(it, pick(rng));
        Word w = it->first;
        Rat c = it->second;
        agenda.erase(it);
        if (word_weight(*alg, w) > bound)
            continue;
        std::vector<std::size_t> bad;
        for (std::size_t t = 0; t + 1 < w.size(); ++t)
            if (w[t] > w[t + 1])
                bad.push_back(t);
        if (bad.empty()) {
            MultiIdx idx(alg->dim(), 0);
            for (auto i : w)
                ++idx[i];
            out.add_term(idx, c);
            continue;
        }
        std::uniform_int_distribution<std::size_t> which(0, bad.size() - 1);
        std::size_t t = bad[which(rng)];
        Word swapped = w;
        std::swap(swapped[t], swapped[t + 1]);
        agenda[swapped] += c;
        if (agenda[swapped].is_zero())
            agenda.erase(swapped);
        for (auto &bt : alg->basis_bracket(w[t + 1], w[t])) {
            Word contracted(w.begin(), w.begin() + t);
            contracted.push_back(bt.k);
            contracted.insert(contracted.end(), w.begin() + t + 2, w.end());
            agenda[contracted] += -(c * bt.c);
            if (agenda[contracted].is_zero())
                agenda.erase(contracted);
        }
    }
    return out;
}

} // namespace

TEST_CASE("pbw normal form on heisenberg") {
    auto h = catalog("heisenberg(1)");
    // operator Y~ X~ = X~ Y~ - Z~
    UeaElem yx = pbw_normalize<Rat>(h, {1, 0}, 2);
    UeaElem expect = monomial(h, 2, {1, 1, 0}, Rat(1));
    expect.add_term({0, 0, 1}, Rat(-1));
    CHECK(yx == expect);

    // already sorted word stays a single monomial
    CHECK(pbw_normalize<Rat>(h, {0, 1}, 2) == monomial(h, 2, {1, 1, 0}, Rat(1)));
    CHECK(pbw_normalize<Rat>(h, {0, 0, 1}, 3) == monomial(h, 3, {2, 1, 0}, Rat(1)));

    // operator Y~ Y~ X~ = X~ Y~^2 - 2 Y~ Z~
    UeaElem yyx = pbw_normalize<Rat>(h, {1, 1, 0}, 3);
    UeaElem expect2 = monomial(h, 3, {1, 2, 0}, Rat(1));
    expect2.add_term({0, 1, 1}, Rat(-2));
    CHECK(yyx == expect2);
}

TEST_CASE("pbw weight exactness and truncation") {
    auto h = catalog("heisenberg(1)");
    std::mt19937_64 rng(41);
    for (int t = 0; t < 30; ++t) {
        int len = 1 + (int)(rng() % 4);
        Word w;
        for (int i = 0; i < len; ++i)
            w.push_back(rng() % 2); // first-layer letters only
        UeaElem u = pbw_normalize<Rat>(h, w, len);
        for (auto &[idx, c] : u.terms)
            CHECK(multi_weight(*h, idx) == len);
        // a tighter bound only removes the heavier monomials
        UeaElem cut = pbw_normalize<Rat>(h, w, len - 1);
        for (auto &[idx, c] : cut.terms)
            CHECK(multi_weight(*h, idx) <= len - 1);
    }
}

TEST_CASE("pbw confluence under randomized rewriting order") {
    std::mt19937_64 rng(43);
    for (auto name : {"heisenberg(1)", "engel", "cartan_n23"}) {
        auto alg = catalog(name);
        std::size_t r = alg->dim_v1();
        for (int t = 0; t < 25; ++t) {
            int len = 2 + (int)(rng() % 3);
            Word w;
            for (int i = 0; i < len; ++i)
                w.push_back(rng() % r);
            UeaElem canonical = pbw_normalize<Rat>(alg, w, len);
            for (int rep = 0; rep < 3; ++rep)
                CHECK(pbw_normalize_random_order(alg, w, len, rng) == canonical);
        }
    }
}

TEST_CASE("tau on heisenberg matches the operator tables") {
    auto h = catalog("heisenberg(1)");
    // degree 2
    UeaElem xy = tau(h, {0, 1}, 2); // X (x) Y  ->  Y~ X~ = X~ Y~ - Z~
    UeaElem e1 = monomial(h, 2, {1, 1, 0}, Rat(1));
    e1.add_term({0, 0, 1}, Rat(-1));
    CHECK(xy == e1);
    CHECK(tau(h, {1, 0}, 2) == monomial(h, 2, {1, 1, 0}, Rat(1))); // Y (x) X -> X~ Y~
    CHECK(tau(h, {0, 0}, 2) == monomial(h, 2, {2, 0, 0}, Rat(1)));
    CHECK(tau(h, {1, 1}, 2) == monomial(h, 2, {0, 2, 0}, Rat(1)));

    // degree 3, all eight words
    auto mono3 = [&](MultiIdx i, Rat c) { return monomial(h, 3, i, c); };
    auto plus = [](UeaElem a, const UeaElem &b) {
        for (auto &[i, c] : b.terms)
            a.add_term(i, c);
        return a;
    };
    CHECK(tau(h, {0, 0, 0}, 3) == mono3({3, 0, 0}, Rat(1)));
    CHECK(tau(h, {0, 0, 1}, 3) == plus(mono3({2, 1, 0}, Rat(1)), mono3({1, 0, 1}, Rat(-2))));
    CHECK(tau(h, {0, 1, 0}, 3) == plus(mono3({2, 1, 0}, Rat(1)), mono3({1, 0, 1}, Rat(-1))));
    CHECK(tau(h, {0, 1, 1}, 3) == plus(mono3({1, 2, 0}, Rat(1)), mono3({0, 1, 1}, Rat(-2))));
    CHECK(tau(h, {1, 0, 0}, 3) == mono3({2, 1, 0}, Rat(1)));
    CHECK(tau(h, {1, 0, 1}, 3) == plus(mono3({1, 2, 0}, Rat(1)), mono3({0, 1, 1}, Rat(-1))));
    CHECK(tau(h, {1, 1, 0}, 3) == mono3({1, 2, 0}, Rat(1)));
    CHECK(tau(h, {1, 1, 1}, 3) == mono3({0, 3, 0}, Rat(1)));

    CHECK_THROWS_AS(tau(h, {0, 2}, 2), std::invalid_argument); // Z is not first-layer
    CHECK_THROWS_AS(tau(h, {0, 1}, 3), std::invalid_argument);
}

TEST_CASE("tau coefficient table") {
    auto h = catalog("heisenberg(1)");
    auto t2 = tau_coefficients(h, 2);
    CHECK(t2->words.size() == 4);
    CHECK(t2->indices.size() == 4);

    auto t3 = tau_coefficients(h, 3);
    CHECK(t3->words.size() == 8);
    CHECK(t3->indices.size() == 6);
    // row for X (x) X (x) Y: +1 at (2,1,0) and -2 at (1,0,1)
    std::size_t row = 0;
    for (std::size_t i = 0; i < t3->words.size(); ++i)
        if (t3->words[i] == Word{0, 0, 1})
            row = i;
    std::size_t col210 = 0, col101 = 0;
    for (std::size_t c = 0; c < t3->indices.size(); ++c) {
        if (t3->indices[c] == MultiIdx{2, 1, 0})
            col210 = c;
        if (t3->indices[c] == MultiIdx{1, 0, 1})
            col101 = c;
    }
    CHECK(t3->mat.at(row, col210) == Rat(1));
    CHECK(t3->mat.at(row, col101) == Rat(-2));

    // abelian case: tau_I(word) = 1 iff the sorted word content equals I
    auto ab = catalog("abelian(3)");
    auto ta = tau_coefficients(ab, 2);
    for (std::size_t r = 0; r < ta->words.size(); ++r) {
        MultiIdx content(3, 0);
        for (auto l : ta->words[r])
            ++content[l];
        for (std::size_t c = 0; c < ta->indices.size(); ++c)
            CHECK(ta->mat.at(r, c) == (ta->indices[c] == content ? Rat(1) : Rat(0)));
    }
}

TEST_CASE("tau is surjective: rank equals the count of weighted indices") {
    for (auto name : {"heisenberg(1)", "engel", "cartan_n23"}) {
        auto alg = catalog(name);
        for (int m = 1; m <= 3; ++m) {
            auto t = tau_coefficients(alg, m);
            CHECK(rank(t->mat) == t->indices.size());
        }
    }
    auto h = catalog("heisenberg(1)");
    CHECK(tau_coefficients(h, 1)->indices.size() == 2);
    CHECK(tau_coefficients(h, 2)->indices.size() == 4);
    CHECK(tau_coefficients(h, 3)->indices.size() == 6);
}

TEST_CASE("uea multiplication") {
    auto h = catalog("heisenberg(1)");
    UeaElem one = uea_one<Rat>(h, 2, Rat(1));
    UeaElem by = monomial(h, 2, {0, 1, 0}, Rat(1));
    UeaElem bx = monomial(h, 2, {1, 0, 0}, Rat(1));
    CHECK(uea_multiply(one, by) == by);
    CHECK(uea_multiply(by, one) == by);

    UeaElem yx = uea_multiply(by, bx);
    UeaElem expect = monomial(h, 2, {1, 1, 0}, Rat(1));
    expect.add_term({0, 0, 1}, Rat(-1));
    CHECK(yx == expect);

    std::mt19937_64 rng(47);
    for (int t = 0; t < 10; ++t) {
        auto rnd = [&]() {
            UeaElem u{h, 3, {}};
            auto idxs = weighted_multi_indices(*h, 1 + (int)(rng() % 3));
            for (auto &i : idxs)
                if (rng() % 2)
                    u.add_term(i, Rat((long long)(rng() % 7) - 3));
            return u;
        };
        UeaElem a = rnd(), b = rnd(), c = rnd();
        CHECK(uea_multiply(uea_multiply(a, b), c) == uea_multiply(a, uea_multiply(b, c)));
    }
}

TEST_CASE("uea exp and log") {
    auto h = catalog("heisenberg(1)");
    CHECK(uea_exp(uea_from_coords<Rat>(h, RatVec(3, Rat(0)), 2), Rat(1)) == uea_one<Rat>(h, 2, Rat(1)));

    // log(exp X exp Y) = X + Y + Z/2 in degree-one monomials
    auto ex = uea_exp(uea_from_coords<Rat>(h, {Rat(1), Rat(0), Rat(0)}, 2), Rat(1));
    auto ey = uea_exp(uea_from_coords<Rat>(h, {Rat(0), Rat(1), Rat(0)}, 2), Rat(1));
    auto lg = uea_log(uea_multiply(ex, ey));
    auto [coords, pure] = uea_degree_one(lg, Rat(0));
    CHECK(pure);
    CHECK(coords == RatVec{Rat(1), Rat(1), Rat(1, 2)});

    std::mt19937_64 rng(53);
    for (int t = 0; t < 10; ++t) {
        AlgElem x = random_elem(h, rng);
        auto e = uea_exp(uea_from_coords<Rat>(h, x.coords, 2), Rat(1));
        auto l = uea_log(e);
        auto [c2, p2] = uea_degree_one(l, Rat(0));
        CHECK(p2);
        CHECK(c2 == x.coords);
    }

    UeaElem not_grouplike = monomial(h, 2, {1, 0, 0}, Rat(1));
    CHECK_THROWS_AS(uea_log(not_grouplike), std::invalid_argument);
    UeaElem with_const = uea_one<Rat>(h, 2, Rat(1));
    CHECK_THROWS_AS(uea_exp(with_const, Rat(1)), std::invalid_argument);
}

TEST_CASE("bch golden values") {
    auto h = catalog("heisenberg(1)");
    AlgElem x = AlgElem::basis(h, 0), y = AlgElem::basis(h, 1);
    CHECK(bch(x, y) == AlgElem(h, {Rat(1), Rat(1), Rat(1, 2)}));
    std::mt19937_64 rng(59);
    AlgElem r = random_elem(h, rng);
    CHECK(bch(r, AlgElem::zero(h)) == r);
    CHECK(bch(r, -r).is_zero());
    CHECK(bch_via_uea(x, y) == bch(x, y));
}

TEST_CASE("bch closed forms hold symbolically in steps 2 and 3") {
    for (auto name : {"heisenberg(1)", "heisenberg(2)", "engel", "cartan_n23"}) {
        auto alg = catalog(name);
        std::size_t n = alg->dim();
        auto table = bch_table(alg);
        MPoly zero(2 * n);
        std::vector<MPoly> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(MPoly::variable(2 * n, i));
            ys.push_back(MPoly::variable(2 * n, n + i));
        }
        auto br = [&](const std::vector<MPoly> &a, const std::vector<MPoly> &b) {
            return alg->bracket_coords<MPoly>(a, b, zero);
        };
        // closed form v + w + [v,w]/2 + ([v,[v,w]] + [w,[w,v]])/12 (+0 beyond step 3)
        auto vw = br(xs, ys);
        auto vvw = br(xs, vw);
        auto wwv = br(ys, br(ys, xs));
        for (std::size_t i = 0; i < n; ++i) {
            MPoly expect = xs[i] + ys[i] + vw[i] * Rat(1, 2);
            if (alg->step() >= 3)
                expect += (vvw[i] + wwv[i]) * Rat(1, 12);
            CHECK(table->polys[i] == expect);
        }
    }
}

TEST_CASE("bch associativity on random triples") {
    std::mt19937_64 rng(61);
    for (auto name : {"abelian(2)", "heisenberg(1)", "engel", "cartan_n23"}) {
        auto alg = catalog(name);
        for (int t = 0; t < 12; ++t) {
            AlgElem x = random_elem(alg, rng), y = random_elem(alg, rng), z = random_elem(alg, rng);
            CHECK(bch(bch(x, y), z) == bch(x, bch(y, z)));
        }
    }
}

TEST_CASE("symbolic group law table") {
    auto h = catalog("heisenberg(1)");
    auto table = bch_table(h);
    // z-component: z_x + z_y + (x_x y_y - y_x x_y)/2
    MPoly expect(6);
    expect.add_term({0, 0, 1, 0, 0, 0}, Rat(1));
    expect.add_term({0, 0, 0, 0, 0, 1}, Rat(1));
    expect.add_term({1, 0, 0, 0, 1, 0}, Rat(1, 2));
    expect.add_term({0, 1, 0, 1, 0, 0}, Rat(-1, 2));
    CHECK(table->polys[2] == expect);
    // degree-one outputs are coordinate sums
    for (std::size_t i = 0; i < 3; ++i) {
        Expo ex(6, 0), ey(6, 0);
        ex[i] = 1;
        ey[3 + i] = 1;
        CHECK(table->polys[i].coeff(ex) == Rat(1));
        CHECK(table->polys[i].coeff(ey) == Rat(1));
    }

    auto ab = catalog("abelian(3)");
    auto ta = bch_table(ab);
    for (std::size_t i = 0; i < 3; ++i) {
        MPoly sum(6);
        sum.add_term([&] { Expo e(6, 0); e[i] = 1; return e; }(), Rat(1));
        sum.add_term([&] { Expo e(6, 0); e[3 + i] = 1; return e; }(), Rat(1));
        CHECK(ta->polys[i] == sum);
    }

    // table reproduces the pointwise enveloping-algebra product
    std::mt19937_64 rng(67);
    for (auto name : {"heisenberg(1)", "cartan_n23"}) {
        auto alg = catalog(name);
        for (int t = 0; t < 20; ++t) {
            AlgElem x = random_elem(alg, rng), y = random_elem(alg, rng);
            CHECK(bch(x, y) == bch_via_uea(x, y));
        }
    }
}

TEST_CASE("translation jacobians") {
    auto h = catalog("heisenberg(1)");
    auto table = bch_table(h);
    // left-invariant field of X: d/dx - (y/2) d/dz, so column 0 of left_jac
    CHECK(table->left_jac[0][0] == MPoly::constant(3, Rat(1)));
    CHECK(table->left_jac[2][0] == Rat(-1, 2) * MPoly::variable(3, 1));
    CHECK(table->left_jac[2][1] == Rat(1, 2) * MPoly::variable(3, 0));
    // right-invariant field of X flips the correction sign
    CHECK(table->right_jac[2][0] == Rat(1, 2) * MPoly::variable(3, 1));

    for (auto name : {"heisenberg(1)", "engel", "cartan_n23"}) {
        auto alg = catalog(name);
        auto t = bch_table(alg);
        std::size_t n = alg->dim();
        auto prod = detail::poly_mat_mul(t->left_jac, t->left_jac_inv, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                CHECK(prod[i][j] == (i == j ? MPoly::constant(n, Rat(1)) : MPoly(n)));
    }
}

TEST_CASE("eta golden forms") {
    auto h = catalog("heisenberg(1)");
    auto etas = eta_polys(h);
    REQUIRE(etas.size() == 1);
    MPoly expect(6);
    expect.add_term({1, 0, 0, 0, 1, 0}, Rat(1, 2));
    expect.add_term({0, 1, 0, 1, 0, 0}, Rat(-1, 2));
    CHECK(etas[0] == expect); // eta(v, w) = [v1, w1]/2 in the center coordinate

    for (auto name : {"engel", "cartan_n23"}) {
        auto alg = catalog(name);
        std::size_t n = alg->dim();
        MPoly zero(2 * n);
        std::vector<MPoly> xs, ys;
        for (std::size_t i = 0; i < n; ++i) {
            xs.push_back(MPoly::variable(2 * n, i));
            ys.push_back(MPoly::variable(2 * n, n + i));
        }
        auto br = [&](const std::vector<MPoly> &a, const std::vector<MPoly> &b) {
            return alg->bracket_coords<MPoly>(a, b, zero);
        };
        auto l1 = [&](const std::vector<MPoly> &v) {
            std::vector<MPoly> out(n, zero);
            for (auto i : alg->layer(1))
                out[i] = v[i];
            return out;
        };
        auto l2 = [&](const std::vector<MPoly> &v) {
            std::vector<MPoly> out(n, zero);
            for (auto i : alg->layer(2))
                out[i] = v[i];
            return out;
        };
        // eta = ([v1,w2] + [v2,w1])/2 + ([v1,[v1,w1]] + [w1,[w1,v1]])/12
        auto t1 = br(l1(xs), l2(ys));
        auto t2 = br(l2(xs), l1(ys));
        auto t3 = br(l1(xs), br(l1(xs), l1(ys)));
        auto t4 = br(l1(ys), br(l1(ys), l1(xs)));
        auto etas3 = eta_polys(alg);
        auto top = alg->layer(alg->step());
        for (std::size_t j = 0; j < top.size(); ++j) {
            MPoly expect3 = (t1[top[j]] + t2[top[j]]) * Rat(1, 2) + (t3[top[j]] + t4[top[j]]) * Rat(1, 12);
            CHECK(etas3[j] == expect3);
        }
    }
}
