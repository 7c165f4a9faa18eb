#ifndef CJET_MPOLY_HPP
#define CJET_MPOLY_HPP

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cjet {

using Expo = std::vector<std::uint32_t>;

/// Sparse multivariate polynomial with exact rational coefficients.
/// Variables are positional; zero coefficients are never stored.
class MPoly {
  public:
    MPoly() : nvars_(0) {}
    explicit MPoly(std::size_t nvars) : nvars_(nvars) {}

    static MPoly constant(std::size_t nvars, const Rat &c) {
        MPoly p(nvars);
        p.add_term(Expo(nvars, 0), c);
        return p;
    }

    static MPoly variable(std::size_t nvars, std::size_t i, const Rat &coeff = Rat(1)) {
        MPoly p(nvars);
        Expo e(nvars, 0);
        e.at(i) = 1;
        p.add_term(e, coeff);
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->second.is_one() &&
               terms_.begin()->first == Expo(nvars_, 0);
    }
    const std::map<Expo, Rat> &terms() const { return terms_; }

    void add_term(const Expo &e, const Rat &c) {
        if (e.size() != nvars_)
            throw std::invalid_argument("MPoly: exponent length mismatch");
        if (c.is_zero())
            return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    Rat coeff(const Expo &e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rat(0) : it->second;
    }

    Rat constant_term() const { return coeff(Expo(nvars_, 0)); }

    MPoly &operator+=(const MPoly &o) {
        same_vars(o);
        for (auto &[e, c] : o.terms_)
            add_term(e, c);
        return *this;
    }
    MPoly &operator-=(const MPoly &o) {
        same_vars(o);
        for (auto &[e, c] : o.terms_)
            add_term(e, -c);
        return *this;
    }
    MPoly &operator*=(const Rat &c) {
        if (c.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto &[e, v] : terms_)
            v *= c;
        return *this;
    }

    friend MPoly operator+(MPoly a, const MPoly &b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly &b) { return a -= b; }
    friend MPoly operator*(MPoly a, const Rat &c) { return a *= c; }
    friend MPoly operator*(const Rat &c, MPoly a) { return a *= c; }
    MPoly operator-() const { return *this * Rat(-1); }

    friend MPoly operator*(const MPoly &a, const MPoly &b) {
        a.same_vars(b);
        MPoly p(a.nvars_);
        for (auto &[ea, ca] : a.terms_)
            for (auto &[eb, cb] : b.terms_) {
                Expo e(ea);
                for (std::size_t i = 0; i < e.size(); ++i)
                    e[i] += eb[i];
                p.add_term(e, ca * cb);
            }
        return p;
    }

    friend bool operator==(const MPoly &a, const MPoly &b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    MPoly pow(std::uint32_t e) const {
        MPoly r = constant(nvars_, Rat(1));
        MPoly b = *this;
        while (e) {
            if (e & 1)
                r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// Exact composition: variable i is replaced by images[i]. All images
    /// share one target variable space.
    MPoly compose(const std::vector<MPoly> &images) const {
        if (images.size() != nvars_)
            throw std::invalid_argument("MPoly::compose: one image per variable required");
        std::size_t tv = nvars_ ? images[0].nvars() : 0;
        for (auto &im : images)
            if (im.nvars() != tv)
                throw std::invalid_argument("MPoly::compose: images over differing variables");
        MPoly out(tv);
        // memoized powers of each image
        std::vector<std::vector<MPoly>> pows(nvars_);
        for (auto &[e, c] : terms_) {
            MPoly m = MPoly::constant(tv, c);
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (e[i] == 0)
                    continue;
                auto &pl = pows[i];
                if (pl.empty())
                    pl.push_back(MPoly::constant(tv, Rat(1)));
                while (pl.size() <= e[i])
                    pl.push_back(pl.back() * images[i]);
                m = m * pl[e[i]];
            }
            out += m;
        }
        return out;
    }

    MPoly derivative(std::size_t var) const {
        MPoly d(nvars_);
        for (auto &[e, c] : terms_) {
            if (e[var] == 0)
                continue;
            Expo f(e);
            --f[var];
            d.add_term(f, c * Rat((long long)e[var]));
        }
        return d;
    }

    Rat eval(const RatVec &x) const {
        if (x.size() != nvars_)
            throw std::invalid_argument("MPoly::eval: wrong point dimension");
        Rat r(0);
        for (auto &[e, c] : terms_) {
            Rat t = c;
            for (std::size_t i = 0; i < nvars_; ++i)
                if (e[i])
                    t *= x[i].pow(e[i]);
            r += t;
        }
        return r;
    }

    /// Substitute a single variable by a rational constant, keeping the
    /// variable space unchanged.
    MPoly substitute(std::size_t var, const Rat &value) const {
        MPoly out(nvars_);
        for (auto &[e, c] : terms_) {
            Expo f(e);
            f[var] = 0;
            out.add_term(f, c * value.pow(e[var]));
        }
        return out;
    }

    /// Extend the variable space to `total` variables, placing the existing
    /// ones starting at `offset`.
    MPoly embed(std::size_t total, std::size_t offset) const {
        MPoly out(total);
        for (auto &[e, c] : terms_) {
            Expo f(total, 0);
            for (std::size_t i = 0; i < nvars_; ++i)
                f[offset + i] = e[i];
            out.add_term(f, c);
        }
        return out;
    }

    /// Coefficient of var^k as a polynomial with the same variable space
    /// (var removed from every monomial).
    MPoly coeff_of(std::size_t var, std::uint32_t k) const {
        MPoly out(nvars_);
        for (auto &[e, c] : terms_) {
            if (e[var] != k)
                continue;
            Expo f(e);
            f[var] = 0;
            out.add_term(f, c);
        }
        return out;
    }

    std::uint32_t degree_in(std::size_t var) const {
        std::uint32_t d = 0;
        for (auto &[e, c] : terms_)
            d = std::max(d, e[var]);
        return d;
    }

    std::uint32_t total_degree() const {
        std::uint32_t d = 0;
        for (auto &[e, c] : terms_) {
            std::uint32_t t = 0;
            for (auto x : e)
                t += x;
            d = std::max(d, t);
        }
        return d;
    }

    std::string str(const std::vector<std::string> &names = {}) const {
        if (terms_.empty())
            return "0";
        std::string s;
        for (auto &[e, c] : terms_) {
            std::string mono;
            for (std::size_t i = 0; i < nvars_; ++i) {
                if (!e[i])
                    continue;
                if (!mono.empty())
                    mono += "*";
                mono += i < names.size() ? names[i] : "x" + std::to_string(i + 1);
                if (e[i] > 1)
                    mono += "^" + std::to_string(e[i]);
            }
            std::string coef = c.str();
            if (!s.empty())
                s += c.sign() < 0 ? " - " : " + ";
            else if (c.sign() < 0)
                s += "-";
            std::string ac = (c.sign() < 0 ? (-c).str() : coef);
            if (mono.empty())
                s += ac;
            else if (ac == "1")
                s += mono;
            else
                s += ac + " " + mono;
        }
        return s;
    }

  private:
    void same_vars(const MPoly &o) const {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("MPoly: variable spaces differ");
    }
    std::size_t nvars_;
    std::map<Expo, Rat> terms_;
};

/// Named-substitution composition; every variable of p must have an image.
inline MPoly mpoly_compose(const MPoly &p, const std::vector<std::string> &vars,
                           const std::map<std::string, MPoly> &subst,
                           const std::vector<std::string> &target_vars) {
    if (vars.size() != p.nvars())
        throw std::invalid_argument("mpoly_compose: variable name list mismatch");
    std::size_t tv = target_vars.size();
    std::vector<MPoly> images;
    for (auto &name : vars) {
        auto it = subst.find(name);
        if (it == subst.end())
            throw std::invalid_argument("mpoly_compose: missing substitution for " + name);
        if (it->second.nvars() != tv)
            throw std::invalid_argument("mpoly_compose: image of " + name +
                                        " is over the wrong variables");
        images.push_back(it->second);
    }
    return p.compose(images);
}

} // namespace cjet

#endif
