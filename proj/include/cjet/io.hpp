#ifndef CJET_IO_HPP
#define CJET_IO_HPP

#include "embed.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cjet::io {

using json = nlohmann::ordered_json;

inline json rat_json(const Rat &r) { return r.str(); }
inline Rat rat_from(const json &j) { return Rat::parse(j.get<std::string>()); }

inline json ratvec_json(const RatVec &v) {
    json out = json::array();
    for (auto &r : v)
        out.push_back(rat_json(r));
    return out;
}

inline RatVec ratvec_from(const json &j) {
    RatVec out;
    for (auto &e : j)
        out.push_back(rat_from(e));
    return out;
}

// ---------------------------------------------------------------------------
// Algebra definition files: 1-based indices, rationals as strings.

inline json algebra_json(const StratAlg::Ptr &alg) {
    json out;
    out["name"] = alg->name();
    out["weights"] = alg->weights();
    json brackets = json::object();
    for (auto &[ij, terms] : alg->structure()) {
        std::string key = std::to_string(ij.first + 1) + "," + std::to_string(ij.second + 1);
        json list = json::array();
        for (auto &t : terms)
            list.push_back(json{{"k", t.k + 1}, {"c", rat_json(t.c)}});
        brackets[key] = list;
    }
    out["brackets"] = brackets;
    out["labels"] = alg->labels();
    out["coords"] = alg->coords();
    return out;
}

inline StratAlg::Ptr algebra_from_json(const json &j) {
    std::vector<int> weights = j.at("weights").get<std::vector<int>>();
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> st;
    if (j.contains("brackets"))
        for (auto &[key, list] : j.at("brackets").items()) {
            auto comma = key.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("algebra json: bracket keys look like \"i,j\"");
            std::size_t i = std::stoul(key.substr(0, comma));
            std::size_t jj = std::stoul(key.substr(comma + 1));
            if (i < 1 || jj < 1)
                throw std::invalid_argument("algebra json: indices are 1-based");
            std::vector<BracketTerm> terms;
            for (auto &t : list)
                terms.push_back({t.at("k").get<std::size_t>() - 1, rat_from(t.at("c"))});
            st[{i - 1, jj - 1}] = std::move(terms);
        }
    std::vector<std::string> labels, coords;
    if (j.contains("labels"))
        labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("coords"))
        coords = j.at("coords").get<std::vector<std::string>>();
    return StratAlg::make(j.value("name", "custom"), weights, st, labels, coords);
}

/// Resolve an algebra argument: a catalog name, or a path to a JSON file
/// (prefixed with '@' or ending in .json).
inline StratAlg::Ptr load_algebra(const std::string &arg) {
    std::string path;
    if (!arg.empty() && arg[0] == '@')
        path = arg.substr(1);
    else if (arg.size() > 5 && arg.substr(arg.size() - 5) == ".json")
        path = arg;
    if (path.empty())
        return catalog(arg);
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open algebra file " + path);
    json j;
    in >> j;
    return algebra_from_json(j);
}

// ---------------------------------------------------------------------------
// Words and multi-indices

inline std::string word_key(const StratAlg::Ptr &alg, const Word &w) {
    bool single = true;
    for (std::size_t i = 0; i < alg->dim_v1(); ++i)
        if (alg->labels()[i].size() != 1)
            single = false;
    std::string out;
    for (std::size_t t = 0; t < w.size(); ++t) {
        if (!single && t)
            out += ".";
        out += alg->labels()[w[t]];
    }
    return out;
}

inline Word word_from_key(const StratAlg::Ptr &alg, const std::string &key) {
    std::map<std::string, std::size_t> lookup;
    bool single = true;
    for (std::size_t i = 0; i < alg->dim_v1(); ++i) {
        lookup[alg->labels()[i]] = i;
        if (alg->labels()[i].size() != 1)
            single = false;
    }
    Word w;
    if (key.empty())
        return w;
    if (single) {
        for (char c : key) {
            auto it = lookup.find(std::string(1, c));
            if (it == lookup.end())
                throw std::invalid_argument("unknown first-layer label in word: " + key);
            w.push_back(it->second);
        }
    } else {
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, '.')) {
            auto it = lookup.find(part);
            if (it == lookup.end())
                throw std::invalid_argument("unknown first-layer label in word: " + key);
            w.push_back(it->second);
        }
    }
    return w;
}

inline json multi_idx_json(const MultiIdx &i) {
    json out = json::array();
    for (auto e : i)
        out.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// Points of jet spaces: {base:[rat], stack:{"k":{word:[rat]}}}

inline json point_json(const JetSpace &js, const JetPoint &p) {
    js.require(p);
    json out;
    out["base"] = ratvec_json(p.base.coords);
    json stack = json::object();
    for (int k = 0; k <= js.order(); ++k) {
        json level = json::object();
        for (auto &w : v1_words(*js.alg(), k)) {
            RatVec v = p.stack.parts[k].value(w);
            if (!is_zero(v))
                level[word_key(js.alg(), w)] = ratvec_json(v);
        }
        if (!level.empty())
            stack[std::to_string(k)] = level;
    }
    out["stack"] = stack;
    return out;
}

inline JetPoint point_from_json(const JetSpace &js, const json &j) {
    JetPoint p = js.zero();
    RatVec base = ratvec_from(j.at("base"));
    if (base.size() != js.alg()->dim())
        throw std::invalid_argument("point json: wrong base dimension");
    p.base = AlgElem(js.alg(), base);
    if (j.contains("stack"))
        for (auto &[key, level] : j.at("stack").items()) {
            int k = std::stoi(key);
            if (k < 0 || k > js.order())
                throw std::invalid_argument("point json: stack degree out of range");
            for (auto &[wk, val] : level.items()) {
                Word w = word_from_key(js.alg(), wk);
                if ((int)w.size() != k)
                    throw std::invalid_argument("point json: word length differs from degree");
                RatVec v = ratvec_from(val);
                if ((int)v.size() != js.wdim())
                    throw std::invalid_argument("point json: wrong value dimension");
                p.stack.parts[k].add_term(w, v);
            }
        }
    // reject stacks outside the horizontal spaces
    for (int k = 0; k <= js.order(); ++k)
        if (!hd_membership(p.stack.parts[k]).member)
            throw ObstructionError("point json: degree " + std::to_string(k) +
                                   " component is not horizontal");
    return p;
}

// ---------------------------------------------------------------------------
// Scalar polynomials: {"e1,e2,...": "num/den"}

inline json poly_json(const MPoly &p) {
    json out = json::object();
    for (auto &[e, c] : p.terms()) {
        std::string key;
        for (std::size_t i = 0; i < e.size(); ++i)
            key += (i ? "," : "") + std::to_string(e[i]);
        out[key] = rat_json(c);
    }
    return out;
}

inline MPoly poly_from_json(const json &j, std::size_t nvars) {
    MPoly p(nvars);
    for (auto &[key, val] : j.items()) {
        Expo e;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ','))
            e.push_back((std::uint32_t)std::stoul(part));
        if (e.size() != nvars)
            throw std::invalid_argument("poly json: exponent length differs from variable count");
        p.add_term(e, rat_from(val));
    }
    return p;
}

/// W-valued polynomials: {"e1,...": [rat per W component]}
inline json wpoly_json(const WPoly &p) {
    json out = json::object();
    std::map<Expo, RatVec> rows;
    for (int c = 0; c < p.wdim; ++c)
        for (auto &[e, v] : p.comps[c].terms()) {
            auto it = rows.find(e);
            if (it == rows.end())
                it = rows.emplace(e, RatVec(p.wdim, Rat(0))).first;
            it->second[c] = v;
        }
    for (auto &[e, vec] : rows) {
        std::string key;
        for (std::size_t i = 0; i < e.size(); ++i)
            key += (i ? "," : "") + std::to_string(e[i]);
        out[key] = ratvec_json(vec);
    }
    return out;
}

inline WPoly wpoly_from_json(const StratAlg::Ptr &alg, int wdim, const json &j) {
    WPoly p = WPoly::zero(alg, wdim);
    for (auto &[key, val] : j.items()) {
        Expo e;
        std::stringstream ss(key);
        std::string part;
        while (std::getline(ss, part, ','))
            e.push_back((std::uint32_t)std::stoul(part));
        if (e.size() != alg->dim())
            throw std::invalid_argument("wpoly json: exponent length differs from coordinates");
        RatVec v = ratvec_from(val);
        if ((int)v.size() != wdim)
            throw std::invalid_argument("wpoly json: wrong value dimension");
        for (int c = 0; c < wdim; ++c)
            p.comps[c].add_term(e, v[c]);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Polynomial maps: self-contained with their jet-space context

inline json map_json(const PolyMap &f) {
    json out;
    out["algebra"] = algebra_json(f.space.alg());
    out["wdim"] = f.space.wdim();
    out["m"] = f.space.order();
    json base = json::array();
    for (auto &c : f.base)
        base.push_back(poly_json(c));
    out["F_G"] = base;
    for (int k = 0; k <= f.space.order(); ++k) {
        json lvl = json::array();
        for (auto &c : f.stack[k])
            lvl.push_back(poly_json(c));
        out["F^" + std::to_string(k)] = lvl;
    }
    out["contact_certified"] = f.contact_certified;
    return out;
}

inline PolyMap map_from_json(const json &j) {
    StratAlg::Ptr alg = j.at("algebra").is_string()
                            ? catalog(j.at("algebra").get<std::string>())
                            : algebra_from_json(j.at("algebra"));
    JetSpace js(alg, j.at("wdim").get<int>(), j.at("m").get<int>());
    PolyMap f{js, {}, sym_stack_zero(js, js.nvars()), false};
    for (auto &c : j.at("F_G"))
        f.base.push_back(poly_from_json(c, js.nvars()));
    if (f.base.size() != alg->dim())
        throw std::invalid_argument("map json: wrong base component count");
    for (int k = 0; k <= js.order(); ++k) {
        const json &lvl = j.at("F^" + std::to_string(k));
        if (lvl.size() != js.hd_dim_scalar(k) * js.wdim())
            throw std::invalid_argument("map json: wrong component count in degree " +
                                        std::to_string(k));
        for (std::size_t i = 0; i < lvl.size(); ++i)
            f.stack[k][i] = poly_from_json(lvl[i], js.nvars());
    }
    return f;
}

// ---------------------------------------------------------------------------
// Derived tables

inline json tau_table_json(const StratAlg::Ptr &alg, int m) {
    auto t = tau_coefficients(alg, m);
    json out;
    out["m"] = m;
    json words = json::array();
    for (auto &w : t->words) {
        json one = json::array();
        for (auto i : w)
            one.push_back(i + 1); // 1-based indices
        words.push_back(one);
    }
    out["words"] = words;
    json idx = json::array();
    for (auto &i : t->indices)
        idx.push_back(multi_idx_json(i));
    out["indices"] = idx;
    json mat = json::array();
    for (std::size_t r = 0; r < t->words.size(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < t->indices.size(); ++c)
            row.push_back(rat_json(t->mat.at(r, c)));
        mat.push_back(row);
    }
    out["matrix"] = mat;
    return out;
}

inline json hd_basis_json(const StratAlg::Ptr &alg, int m) {
    auto b = hd_basis(alg, m);
    json out = json::array();
    for (std::size_t i = 0; i < b->indices.size(); ++i) {
        json entry;
        entry["index"] = multi_idx_json(b->indices[i]);
        json coeffs = json::object();
        for (auto &[w, v] : b->elements[i].coeffs)
            coeffs[word_key(alg, w)] = rat_json(v[0]);
        entry["coeffs"] = coeffs;
        out.push_back(entry);
    }
    return out;
}

inline json dual_poly_basis_json(const AlgElem &p, int m) {
    auto d = dual_poly_basis(p, m);
    json out = json::array();
    for (std::size_t i = 0; i < d->indices.size(); ++i) {
        json entry;
        entry["index"] = multi_idx_json(d->indices[i]);
        entry["poly"] = poly_json(d->polys[i]);
        entry["text"] = d->polys[i].str(p.alg->coords());
        out.push_back(entry);
    }
    return out;
}

inline json jet_algebra_json(const JetSpace &js) {
    const JetAlgebra &ja = js.jet_algebra();
    json out;
    out["base"] = js.alg()->name();
    out["wdim"] = js.wdim();
    out["m"] = js.order();
    out["dim"] = ja.derived->dim();
    out["step"] = ja.derived->step();
    json layers = json::array();
    for (int k = 1; k <= ja.derived->step(); ++k)
        layers.push_back(ja.derived->layer(k).size());
    out["layer_dims"] = layers;
    json basis = json::array();
    for (std::size_t i = 0; i < ja.tags.size(); ++i) {
        json b;
        b["label"] = ja.derived->labels()[i];
        b["weight"] = ja.derived->weight(i);
        b["kind"] = ja.tags[i].is_base ? "base" : "hd";
        basis.push_back(b);
    }
    out["basis"] = basis;
    json brackets = json::object();
    for (auto &[ij, terms] : ja.derived->structure()) {
        std::string key = ja.derived->labels()[ij.first] + "," + ja.derived->labels()[ij.second];
        json list = json::array();
        for (auto &t : terms)
            list.push_back(json{{"k", ja.derived->labels()[t.k]}, {"c", rat_json(t.c)}});
        brackets[key] = list;
    }
    out["brackets"] = brackets;
    return out;
}

inline json embed_json(const EmbeddingResult &res) {
    json out;
    out["algebra"] = res.algebra->name();
    out["quotient"] = algebra_json(res.quotient);
    out["wdim"] = res.wdim;
    out["order"] = res.order;
    json phi = json::array();
    auto multi = embed_multilinear(res);
    for (std::size_t u = 0; u < res.algebra->dim(); ++u) {
        json e;
        e["of"] = res.algebra->labels()[u];
        e["layer"] = res.algebra->weight(u);
        e["poly"] = wpoly_json(res.poly_part[u]);
        json tensor = json::object();
        for (auto &[w, v] : multi.parts[u].coeffs)
            tensor[word_key(res.quotient, w)] = ratvec_json(v);
        e["tensor"] = tensor;
        phi.push_back(e);
    }
    out["phi"] = phi;
    out["certificates"] = json{{"homogeneity", res.cert_homogeneity},
                               {"morphism", res.cert_morphism},
                               {"injectivity", res.cert_injective},
                               {"strata", res.cert_strata},
                               {"multilinear_morphism", multi.morphism_ok}};
    return out;
}

// ---------------------------------------------------------------------------
// The worked-example report for the first Heisenberg group

inline std::string operator_monomial(const StratAlg::Ptr &alg, const MultiIdx &idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (!idx[i])
            continue;
        if (!out.empty())
            out += " ";
        out += alg->labels()[i] + "~";
        if (idx[i] > 1)
            out += "^" + std::to_string(idx[i]);
    }
    return out.empty() ? "1" : out;
}

inline std::string heisenberg_report() {
    auto h = catalog("heisenberg(1)");
    std::ostringstream out;
    out << "first heisenberg group: basis X Y Z, weights 1 1 2, [X,Y] = Z\n";

    auto table = bch_table(h);
    out << "\nleft-invariant fields (coefficients of d/dx d/dy d/dz):\n";
    for (std::size_t j = 0; j < 3; ++j) {
        out << "  " << h->labels()[j] << "~ :";
        for (std::size_t i = 0; i < 3; ++i)
            out << " [" << table->left_jac[i][j].str(h->coords()) << "]";
        out << "\n";
    }

    for (int m = 1; m <= 3; ++m) {
        auto tt = tau_coefficients(h, m);
        out << "\ntau on degree-" << m << " words:\n";
        for (std::size_t r = 0; r < tt->words.size(); ++r) {
            out << "  tau(" << word_key(h, tt->words[r]) << ") =";
            bool first = true;
            for (std::size_t c = 0; c < tt->indices.size(); ++c) {
                Rat v = tt->mat.at(r, c);
                if (v.is_zero())
                    continue;
                std::string coef = v.is_one() ? "" : (v == Rat(-1) ? "-" : v.str() + " ");
                out << (first ? " " : " + ") << coef << operator_monomial(h, tt->indices[c]);
                first = false;
            }
            out << "\n";
        }

        auto basis = hd_basis(h, m);
        out << "\nhd basis, degree " << m << ":\n";
        for (std::size_t i = 0; i < basis->indices.size(); ++i) {
            out << "  A[(";
            for (std::size_t t = 0; t < 3; ++t)
                out << (t ? "," : "") << basis->indices[i][t];
            out << ")] =";
            bool first = true;
            for (auto &[w, v] : basis->elements[i].coeffs) {
                std::string star;
                for (std::size_t t = 0; t < w.size(); ++t)
                    star += (t ? "(x)" : "") + h->labels()[w[t]] + "*";
                out << (first ? " " : " + ") << v[0].str() << " " << star;
                first = false;
            }
            out << "\n";
        }

        AlgElem e = AlgElem::zero(h);
        auto dual = dual_poly_basis(e, m);
        out << "\ndual polynomial basis, degree " << m << ":\n";
        for (std::size_t i = 0; i < dual->indices.size(); ++i) {
            out << "  P[(";
            for (std::size_t t = 0; t < 3; ++t)
                out << (t ? "," : "") << dual->indices[i][t];
            out << ")] = " << dual->polys[i].str(h->coords()) << "\n";
        }

        if (m >= 2) {
            out << "\npairing table, degree " << m
                << " (rows x^I, columns operator monomials, entry D x^I(e)):\n";
            auto idxs = weighted_multi_indices(*h, m);
            out << "  " << std::string(12, ' ');
            for (auto &i : idxs)
                out << " | " << operator_monomial(h, i);
            out << "\n";
            for (auto &row : idxs) {
                std::string mono = coord_monomial(h, row).str(h->coords());
                out << "  " << mono << std::string(mono.size() < 12 ? 12 - mono.size() : 1, ' ');
                for (auto &col : idxs) {
                    UeaElem op{h, m, {}};
                    op.add_term(col, Rat(1));
                    RatVec val = pairing(op, WPoly::scalar(h, coord_monomial(h, row)), e);
                    out << " | " << val[0].str();
                }
                out << "\n";
            }
        }
    }
    return out.str();
}

} // namespace cjet::io

#endif
