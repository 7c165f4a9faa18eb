#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cjet/linalg.hpp"
#include "cjet/mpoly.hpp"

#include <random>

using namespace cjet;

namespace {

Rat random_rat(std::mt19937_64 &rng) {
    std::uniform_int_distribution<long long> num(-9, 9);
    std::uniform_int_distribution<long long> den(1, 4);
    return Rat(num(rng), den(rng));
}

} // namespace

TEST_CASE("rational arithmetic basics") {
    CHECK(Rat(1, 2) + Rat(1, 3) == Rat(5, 6));
    CHECK(Rat(-1, 12).str() == "-1/12");
    CHECK(Rat(2, 4).str() == "1/2");
    CHECK(Rat(-3, -6) == Rat(1, 2));
    CHECK(Rat(7).str() == "7");
    CHECK(Rat::parse("-1/12") == Rat(-1, 12));
    CHECK(Rat::parse("5") == Rat(5));
    CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
    CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rat(1) / Rat(0), std::invalid_argument);
    CHECK(Rat(0).str() == "0");
}

TEST_CASE("rational field axioms on random triples") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 200; ++t) {
        Rat a = random_rat(rng), b = random_rat(rng), c = random_rat(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Rat(0));
        if (!a.is_zero())
            CHECK(a * a.inv() == Rat(1));
    }
}

TEST_CASE("solve_linear examples") {
    RatMatrix a(2, 2);
    a.set(0, 0, Rat(1));
    a.set(1, 1, Rat(2));
    auto x = solve_linear(a, {Rat(1), Rat(1)});
    REQUIRE(x);
    CHECK(*x == RatVec{Rat(1), Rat(1, 2)});

    RatMatrix b(1, 2);
    b.set(0, 0, Rat(1));
    b.set(0, 1, Rat(1));
    auto y = solve_linear(b, {Rat(2)});
    REQUIRE(y);
    CHECK(*y == RatVec{Rat(2), Rat(0)}); // free variable pinned to zero

    RatMatrix c(2, 1);
    c.set(0, 0, Rat(1));
    c.set(1, 0, Rat(1));
    CHECK(!solve_linear(c, {Rat(0), Rat(1)}));
}

TEST_CASE("solve_linear reproduces the rhs exactly") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int t = 0; t < 50; ++t) {
        std::size_t rows = dim(rng), cols = dim(rng);
        RatMatrix a(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (rng() % 2)
                    a.set(r, c, random_rat(rng));
        RatVec b(rows);
        for (auto &v : b)
            v = random_rat(rng);
        auto x = solve_linear(a, b);
        if (x)
            CHECK(a.apply(*x) == b);
    }
}

TEST_CASE("kernel_basis examples and properties") {
    RatMatrix id3(3, 3);
    for (int i = 0; i < 3; ++i)
        id3.set(i, i, Rat(1));
    CHECK(kernel_basis(id3).empty());

    RatMatrix z(1, 2);
    CHECK(kernel_basis(z).size() == 2);

    RatMatrix a(1, 2);
    a.set(0, 0, Rat(1));
    a.set(0, 1, Rat(1));
    auto kb = kernel_basis(a);
    REQUIRE(kb.size() == 1);
    CHECK(kb[0][0] * Rat(-1) == kb[0][1]); // spans [1,-1] up to scale

    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> dim(1, 5);
    for (int t = 0; t < 40; ++t) {
        std::size_t rows = dim(rng), cols = dim(rng);
        RatMatrix m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                if (rng() % 2)
                    m.set(r, c, random_rat(rng));
        auto basis = kernel_basis(m);
        for (auto &v : basis)
            CHECK(is_zero(m.apply(v)));
        // linear independence via rank of the stacked basis
        RatMatrix stacked(basis.size(), cols);
        for (std::size_t r = 0; r < basis.size(); ++r)
            for (std::size_t c = 0; c < cols; ++c)
                stacked.set(r, c, basis[r][c]);
        CHECK(rank(stacked) == basis.size());
        CHECK(rank(m) + basis.size() == cols);
    }
}

TEST_CASE("left_inverse") {
    RatMatrix a(3, 2);
    a.set(0, 0, Rat(1));
    a.set(1, 1, Rat(2));
    a.set(2, 0, Rat(3));
    a.set(2, 1, Rat(1));
    auto li = left_inverse(a);
    REQUIRE(li);
    RatMatrix prod = li->mul(a);
    RatMatrix id2(2, 2);
    id2.set(0, 0, Rat(1));
    id2.set(1, 1, Rat(1));
    CHECK(prod == id2);

    RatMatrix rank1(2, 2);
    rank1.set(0, 0, Rat(1));
    rank1.set(0, 1, Rat(1));
    CHECK(!left_inverse(rank1));
}

TEST_CASE("mpoly compose examples") {
    // p = x^2, x -> x + y
    MPoly p = MPoly::variable(1, 0).pow(2);
    MPoly img = MPoly::variable(2, 0) + MPoly::variable(2, 1);
    MPoly q = p.compose({img});
    MPoly expect = MPoly::variable(2, 0).pow(2) + Rat(2) * (MPoly::variable(2, 0) * MPoly::variable(2, 1)) +
                   MPoly::variable(2, 1).pow(2);
    CHECK(q == expect);

    // constants are untouched
    MPoly c = MPoly::constant(1, Rat(5, 3));
    CHECK(c.compose({img}) == MPoly::constant(2, Rat(5, 3)));

    // p = x*y with x -> t, y -> t
    MPoly xy = MPoly::variable(2, 0) * MPoly::variable(2, 1);
    MPoly t = MPoly::variable(1, 0);
    CHECK(xy.compose({t, t}) == t.pow(2));
}

TEST_CASE("mpoly_compose rejects a missing substitution") {
    MPoly xy = MPoly::variable(2, 0) * MPoly::variable(2, 1);
    std::map<std::string, MPoly> subst;
    subst["x"] = MPoly::variable(1, 0);
    CHECK_THROWS_AS(mpoly_compose(xy, {"x", "y"}, subst, {"t"}), std::invalid_argument);
    subst["y"] = MPoly::variable(1, 0);
    CHECK(mpoly_compose(xy, {"x", "y"}, subst, {"t"}) == MPoly::variable(1, 0).pow(2));
}

TEST_CASE("mpoly derivative, eval, coefficient extraction") {
    // f = 3 x^2 y + y/2
    MPoly f(2);
    f.add_term({2, 1}, Rat(3));
    f.add_term({0, 1}, Rat(1, 2));
    CHECK(f.derivative(0) == Rat(6) * (MPoly::variable(2, 0) * MPoly::variable(2, 1)));
    CHECK(f.eval({Rat(1, 2), Rat(4)}) == Rat(5));
    CHECK(f.coeff_of(1, 1) == Rat(3) * MPoly::variable(2, 0).pow(2) + MPoly::constant(2, Rat(1, 2)));
    CHECK(f.substitute(1, Rat(2)) == Rat(6) * MPoly::variable(2, 0).pow(2) + MPoly::constant(2, Rat(1)));
    CHECK(f.total_degree() == 3);
    CHECK(f.degree_in(1) == 1);
}
