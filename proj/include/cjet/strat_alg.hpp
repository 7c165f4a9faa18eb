#ifndef CJET_STRAT_ALG_HPP
#define CJET_STRAT_ALG_HPP

#include "linalg.hpp"
#include "mpoly.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

namespace cjet {

struct BracketTerm {
    std::size_t k;
    Rat c;
};

/// One way of writing a basis vector of a layer >= 2 as a combination of
/// brackets [b_i, b_j] with b_i in the first layer.
struct DecompTerm {
    Rat c;
    std::size_t i; // first-layer index
    std::size_t j; // lower-layer index
};

struct ValidationReport {
    bool jacobi = true;
    bool grading = true;
    bool bracket_generating = true;
    bool decomp_consistent = true;
    std::vector<std::string> failures;

    bool ok() const { return jacobi && grading && bracket_generating && decomp_consistent; }
};

/// A stratified (Carnot) Lie algebra presented by an adapted basis, weights
/// and structure constants. Immutable after construction; expensive derived
/// data is memoized internally, so instances are shared via shared_ptr.
class StratAlg : public std::enable_shared_from_this<StratAlg> {
  public:
    using Ptr = std::shared_ptr<const StratAlg>;

    static Ptr make(std::string name, std::vector<int> weights,
                    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> structure,
                    std::vector<std::string> labels = {}, std::vector<std::string> coords = {}) {
        auto a = Ptr(new StratAlg(std::move(name), std::move(weights), std::move(structure),
                                  std::move(labels), std::move(coords)));
        return a;
    }

    const std::string &name() const { return name_; }
    std::size_t dim() const { return weights_.size(); }
    int step() const { return step_; }
    int weight(std::size_t i) const { return weights_[i]; }
    const std::vector<int> &weights() const { return weights_; }
    const std::vector<std::string> &labels() const { return labels_; }
    const std::vector<std::string> &coords() const { return coords_; }

    /// Basis indices of layer k (1-based layer).
    const std::vector<std::size_t> &layer(int k) const { return layers_.at(k - 1); }
    std::size_t dim_v1() const { return layers_[0].size(); }

    const std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> &structure() const {
        return structure_;
    }

    /// [b_i, b_j] as a sparse list of (index, coefficient).
    std::vector<BracketTerm> basis_bracket(std::size_t i, std::size_t j) const {
        if (i == j)
            return {};
        bool flip = i > j;
        auto it = structure_.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
        if (it == structure_.end())
            return {};
        auto terms = it->second;
        if (flip)
            for (auto &t : terms)
                t.c = -t.c;
        return terms;
    }

    /// Bracket of coefficient vectors over any commutative coefficient ring
    /// that supports += and multiplication by Rat (Rat or MPoly).
    template <class K>
    std::vector<K> bracket_coords(const std::vector<K> &x, const std::vector<K> &y, const K &zero) const {
        std::vector<K> out(dim(), zero);
        for (auto &[ij, terms] : structure_) {
            auto [i, j] = ij;
            K m = x[i] * y[j] - x[j] * y[i];
            for (auto &t : terms)
                out[t.k] += m * t.c;
        }
        return out;
    }

    const std::vector<DecompTerm> &bracket_decomp(std::size_t u) const {
        if (weights_[u] < 2)
            throw std::invalid_argument("bracket_decomp: index lies in the first layer");
        if (decomp_[u].empty() && !decomp_ok_)
            throw std::invalid_argument("bracket_decomp: algebra is not bracket-generating");
        return decomp_[u];
    }

    ValidationReport validate() const;

    /// Canonical content string; used for structural equality and caching.
    const std::string &signature() const { return signature_; }

    bool same_as(const StratAlg &o) const { return this == &o || signature_ == o.signature_; }

    /// Memoized derived data, keyed by a caller-chosen string.
    template <class T>
    std::shared_ptr<const T> cached(const std::string &key,
                                    const std::function<std::shared_ptr<const T>()> &build) const {
        {
            std::lock_guard<std::mutex> lk(cache_mu_);
            auto it = cache_.find(key);
            if (it != cache_.end())
                return std::static_pointer_cast<const T>(it->second);
        }
        std::shared_ptr<const T> v = build(); // built outside the lock; duplicates are harmless
        std::lock_guard<std::mutex> lk(cache_mu_);
        auto [it, inserted] = cache_.emplace(key, v);
        return std::static_pointer_cast<const T>(it->second);
    }

  private:
    StratAlg(std::string name, std::vector<int> weights,
             std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> structure,
             std::vector<std::string> labels, std::vector<std::string> coords)
        : name_(std::move(name)), weights_(std::move(weights)), structure_(std::move(structure)),
          labels_(std::move(labels)), coords_(std::move(coords)) {
        if (weights_.empty())
            throw std::invalid_argument("StratAlg: empty basis");
        for (std::size_t i = 0; i + 1 < weights_.size(); ++i)
            if (weights_[i] > weights_[i + 1])
                throw std::invalid_argument("StratAlg: weights must be non-decreasing (adapted basis)");
        if (weights_.front() != 1)
            throw std::invalid_argument("StratAlg: first layer is empty");
        step_ = weights_.back();
        layers_.resize(step_);
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            if (weights_[i] < 1)
                throw std::invalid_argument("StratAlg: weights must be positive");
            layers_[weights_[i] - 1].push_back(i);
        }
        for (auto &[ij, terms] : structure_) {
            if (ij.first >= ij.second || ij.second >= dim())
                throw std::invalid_argument("StratAlg: structure keys must satisfy i < j < dim");
            for (auto &t : terms)
                if (t.k >= dim() || t.c.is_zero())
                    throw std::invalid_argument("StratAlg: bad structure entry");
        }
        if (labels_.empty())
            for (std::size_t i = 0; i < dim(); ++i)
                labels_.push_back("b" + std::to_string(i + 1));
        if (coords_.empty())
            for (std::size_t i = 0; i < dim(); ++i)
                coords_.push_back("x" + std::to_string(i + 1));
        std::ostringstream sig;
        sig << name_ << ";w=";
        for (auto w : weights_)
            sig << w << ",";
        sig << ";s=";
        for (auto &[ij, terms] : structure_) {
            sig << ij.first << "." << ij.second << ":";
            for (auto &t : terms)
                sig << t.k << "=" << t.c.str() << ",";
            sig << ";";
        }
        signature_ = sig.str();
        compute_decomp();
    }

    void compute_decomp();

    std::string name_;
    std::vector<int> weights_;
    int step_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<BracketTerm>> structure_;
    std::vector<std::string> labels_, coords_;
    std::vector<std::vector<std::size_t>> layers_;
    std::vector<std::vector<DecompTerm>> decomp_;
    bool decomp_ok_ = false;
    std::string signature_;

    mutable std::mutex cache_mu_;
    mutable std::map<std::string, std::shared_ptr<const void>> cache_;
};

/// Element of a stratified algebra in exponential coordinates.
struct AlgElem {
    StratAlg::Ptr alg;
    RatVec coords;

    AlgElem() = default;
    AlgElem(StratAlg::Ptr a, RatVec c) : alg(std::move(a)), coords(std::move(c)) {
        if (coords.size() != alg->dim())
            throw std::invalid_argument("AlgElem: wrong coordinate count");
    }
    static AlgElem zero(StratAlg::Ptr a) {
        std::size_t n = a->dim();
        return AlgElem(std::move(a), RatVec(n, Rat(0)));
    }
    static AlgElem basis(StratAlg::Ptr a, std::size_t i) {
        AlgElem e = zero(std::move(a));
        e.coords.at(i) = Rat(1);
        return e;
    }
    bool is_zero() const { return cjet::is_zero(coords); }

    friend AlgElem operator+(AlgElem a, const AlgElem &b) {
        a.require_same(b);
        a.coords += b.coords;
        return a;
    }
    friend AlgElem operator-(AlgElem a, const AlgElem &b) {
        a.require_same(b);
        for (std::size_t i = 0; i < a.coords.size(); ++i)
            a.coords[i] -= b.coords[i];
        return a;
    }
    friend AlgElem operator*(const Rat &c, AlgElem a) {
        for (auto &x : a.coords)
            x *= c;
        return a;
    }
    AlgElem operator-() const { return Rat(-1) * *this; }
    friend bool operator==(const AlgElem &a, const AlgElem &b) {
        return a.alg->same_as(*b.alg) && a.coords == b.coords;
    }

    void require_same(const AlgElem &b) const {
        if (!alg->same_as(*b.alg))
            throw std::invalid_argument("AlgElem: algebra mismatch");
    }
};

inline AlgElem bracket(const AlgElem &x, const AlgElem &y) {
    x.require_same(y);
    return AlgElem(x.alg, x.alg->bracket_coords<Rat>(x.coords, y.coords, Rat(0)));
}

/// Projection to layer k.
inline AlgElem layer_project(const AlgElem &x, int k) {
    AlgElem out = AlgElem::zero(x.alg);
    if (k >= 1 && k <= x.alg->step())
        for (auto i : x.alg->layer(k))
            out.coords[i] = x.coords[i];
    return out;
}

/// Anisotropic dilation: coordinate i scales by lambda^{w_i}. Defined for
/// lambda > 0 only.
inline AlgElem dilate(const AlgElem &x, const Rat &lambda) {
    if (lambda.sign() <= 0)
        throw std::invalid_argument("dilate: lambda must be positive");
    AlgElem out = x;
    for (std::size_t i = 0; i < out.coords.size(); ++i)
        out.coords[i] *= lambda.pow(x.alg->weight(i));
    return out;
}

/// Ad_{exp p}(x) = e^{ad_p}(x); the series is finite by nilpotency.
inline AlgElem adjoint(const AlgElem &p, const AlgElem &x) {
    p.require_same(x);
    AlgElem sum = x, term = x;
    Rat fact(1);
    for (int k = 1; k <= p.alg->step(); ++k) {
        term = bracket(p, term);
        fact *= Rat(k);
        if (term.is_zero())
            break;
        sum = sum + (fact.inv() * term);
    }
    return sum;
}

inline ValidationReport StratAlg::validate() const {
    ValidationReport rep;
    auto self = shared_from_this();
    // grading: a bracket of layers a and b can only hit layer a+b
    for (auto &[ij, terms] : structure_) {
        int w = weights_[ij.first] + weights_[ij.second];
        for (auto &t : terms)
            if (weights_[t.k] != w) {
                rep.grading = false;
                rep.failures.push_back("grading: [" + labels_[ij.first] + "," + labels_[ij.second] +
                                       "] has a component in layer " + std::to_string(weights_[t.k]) +
                                       " instead of " + std::to_string(w));
            }
    }
    // Jacobi on all basis triples
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            for (std::size_t k = j + 1; k < dim(); ++k) {
                AlgElem bi = AlgElem::basis(self, i), bj = AlgElem::basis(self, j),
                        bk = AlgElem::basis(self, k);
                AlgElem s = bracket(bi, bracket(bj, bk)) + bracket(bj, bracket(bk, bi)) +
                            bracket(bk, bracket(bi, bj));
                if (!s.is_zero()) {
                    rep.jacobi = false;
                    rep.failures.push_back("jacobi fails on (" + labels_[i] + "," + labels_[j] + "," +
                                           labels_[k] + ")");
                }
            }
    // bracket generation: Span{[b_i, b_j] : w_i = 1, w_j = k} = V_{k+1}
    if (!decomp_ok_) {
        rep.bracket_generating = false;
        rep.failures.push_back("bracket-generation: some layer is not spanned by [V1, previous layer]");
    }
    for (auto &l : layers_)
        if (l.empty()) {
            rep.bracket_generating = false;
            rep.failures.push_back("bracket-generation: a layer below the step is empty");
        }
    // decomposition reproduces each higher basis vector
    for (std::size_t u = 0; u < dim(); ++u) {
        if (weights_[u] < 2 || decomp_[u].empty())
            continue;
        RatVec acc(dim(), Rat(0));
        for (auto &t : decomp_[u])
            for (auto &bt : basis_bracket(t.i, t.j))
                acc[bt.k] += t.c * bt.c;
        RatVec expect(dim(), Rat(0));
        expect[u] = Rat(1);
        if (acc != expect) {
            rep.decomp_consistent = false;
            rep.failures.push_back("bracket decomposition does not reproduce " + labels_[u]);
        }
    }
    return rep;
}

inline void StratAlg::compute_decomp() {
    decomp_.assign(dim(), {});
    decomp_ok_ = true;
    for (int k = 2; k <= step_; ++k) {
        const auto &tgt = layers_[k - 1];
        const auto &v1 = layers_[0];
        const auto &prev = layers_[k - 2];
        // columns: pairs (i in V1, j in layer k-1); rows: coordinates of layer k
        std::vector<std::pair<std::size_t, std::size_t>> cols;
        for (auto i : v1)
            for (auto j : prev)
                if (i != j)
                    cols.emplace_back(i, j);
        RatMatrix a(tgt.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (auto &bt : basis_bracket(cols[c].first, cols[c].second))
                for (std::size_t r = 0; r < tgt.size(); ++r)
                    if (tgt[r] == bt.k)
                        a.add(r, c, bt.c);
        for (std::size_t r = 0; r < tgt.size(); ++r) {
            RatVec e(tgt.size(), Rat(0));
            e[r] = Rat(1);
            auto sol = solve_linear(a, e);
            if (!sol) {
                decomp_ok_ = false;
                continue;
            }
            std::vector<DecompTerm> terms;
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (!(*sol)[c].is_zero())
                    terms.push_back({(*sol)[c], cols[c].first, cols[c].second});
            decomp_[tgt[r]] = std::move(terms);
        }
    }
}

} // namespace cjet

#endif
