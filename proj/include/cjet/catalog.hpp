#ifndef CJET_CATALOG_HPP
#define CJET_CATALOG_HPP

#include "strat_alg.hpp"

namespace cjet {

namespace detail {

inline StratAlg::Ptr make_abelian(int n) {
    if (n < 1)
        throw std::invalid_argument("catalog: abelian(n) needs n >= 1");
    std::vector<int> w(n, 1);
    std::vector<std::string> labels, coords;
    for (int i = 1; i <= n; ++i) {
        labels.push_back("E" + std::to_string(i));
        coords.push_back("x" + std::to_string(i));
    }
    return StratAlg::make("abelian(" + std::to_string(n) + ")", w, {}, labels, coords);
}

inline StratAlg::Ptr make_heisenberg(int k) {
    if (k < 1)
        throw std::invalid_argument("catalog: heisenberg(k) needs k >= 1");
    std::vector<int> w(2 * k, 1);
    w.push_back(2);
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    for (int i = 0; i < k; ++i)
        st[{(std::size_t)i, (std::size_t)(k + i)}] = {{(std::size_t)(2 * k), Rat(1)}};
    std::vector<std::string> labels, coords;
    if (k == 1) {
        labels = {"X", "Y", "Z"};
        coords = {"x", "y", "z"};
    } else {
        for (int i = 1; i <= k; ++i) {
            labels.push_back("X" + std::to_string(i));
            coords.push_back("x" + std::to_string(i));
        }
        for (int i = 1; i <= k; ++i) {
            labels.push_back("Y" + std::to_string(i));
            coords.push_back("y" + std::to_string(i));
        }
        labels.push_back("Z");
        coords.push_back("z");
    }
    return StratAlg::make("heisenberg(" + std::to_string(k) + ")", w, st, labels, coords);
}

inline StratAlg::Ptr make_engel() {
    // [X1,X2] = X3, [X1,X3] = X4
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    st[{0, 1}] = {{2, Rat(1)}};
    st[{0, 2}] = {{3, Rat(1)}};
    return StratAlg::make("engel", {1, 1, 2, 3}, st, {"X1", "X2", "X3", "X4"},
                          {"x1", "x2", "x3", "x4"});
}

inline StratAlg::Ptr make_cartan_n23() {
    // free-nilpotent of rank 2 and step 3:
    // [X1,X2] = X3, [X1,X3] = X4, [X2,X3] = X5
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    st[{0, 1}] = {{2, Rat(1)}};
    st[{0, 2}] = {{3, Rat(1)}};
    st[{1, 2}] = {{4, Rat(1)}};
    return StratAlg::make("cartan_n23", {1, 1, 2, 3, 3}, st, {"X1", "X2", "X3", "X4", "X5"},
                          {"x1", "x2", "x3", "x4", "x5"});
}

/// Direct product g' x R: one extra first-layer generator commuting with
/// everything. Basis order stays adapted: V1 of g', the new generator, then
/// the higher layers of g'.
inline StratAlg::Ptr make_product_with_line(const StratAlg::Ptr &inner) {
    std::size_t n = inner->dim();
    std::size_t r = inner->dim_v1();
    // old index -> new index: V1 keeps its place, higher layers shift by one
    auto remap = [&](std::size_t i) { return i < r ? i : i + 1; };
    std::vector<int> w;
    std::vector<std::string> labels, coords;
    for (std::size_t i = 0; i < r; ++i) {
        w.push_back(1);
        labels.push_back(inner->labels()[i]);
        coords.push_back(inner->coords()[i]);
    }
    w.push_back(1);
    labels.push_back("T");
    coords.push_back("t");
    for (std::size_t i = r; i < n; ++i) {
        w.push_back(inner->weight(i));
        labels.push_back(inner->labels()[i]);
        coords.push_back(inner->coords()[i]);
    }
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    for (auto &[ij, terms] : inner->structure()) {
        std::vector<BracketTerm> mapped;
        for (auto &t : terms)
            mapped.push_back({remap(t.k), t.c});
        st[{remap(ij.first), remap(ij.second)}] = mapped;
    }
    return StratAlg::make("jet_counterexample(" + inner->name() + ")", w, st, labels, coords);
}

} // namespace detail

/// Built-in algebras: abelian(n), heisenberg(k), engel, cartan_n23,
/// jet_counterexample(<name>). "heisenberg" is short for heisenberg(1).
inline StratAlg::Ptr catalog(const std::string &name) {
    auto arg_of = [&](const std::string &prefix) -> std::optional<std::string> {
        if (name.size() > prefix.size() + 1 && name.compare(0, prefix.size(), prefix) == 0 &&
            name[prefix.size()] == '(' && name.back() == ')')
            return name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
        return std::nullopt;
    };
    if (name == "engel")
        return detail::make_engel();
    if (name == "cartan_n23")
        return detail::make_cartan_n23();
    if (name == "heisenberg")
        return detail::make_heisenberg(1);
    if (auto a = arg_of("abelian"))
        return detail::make_abelian(std::stoi(*a));
    if (auto a = arg_of("heisenberg"))
        return detail::make_heisenberg(std::stoi(*a));
    if (auto a = arg_of("jet_counterexample"))
        return detail::make_product_with_line(catalog(*a));
    throw std::invalid_argument("catalog: unknown algebra name '" + name + "'");
}

} // namespace cjet

#endif
