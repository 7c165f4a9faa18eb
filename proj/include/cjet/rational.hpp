#ifndef CJET_RATIONAL_HPP
#define CJET_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cjet {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always reduced, denominator > 0, zero is 0/1.
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long long n) : v_(n) {}
    Rat(long long n, long long d) : Rat(BigInt(n), BigInt(d)) {}
    Rat(const BigInt &n, const BigInt &d) : v_(n) {
        if (d == 0)
            throw std::invalid_argument("Rat: zero denominator");
        v_ /= Q(d); // exact division normalizes sign and gcd
    }

    static Rat parse(const std::string &s) {
        auto slash = s.find('/');
        if (slash == std::string::npos)
            return Rat(BigInt(s), BigInt(1));
        return Rat(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }

    BigInt num() const { return numerator(v_); }
    BigInt den() const { return denominator(v_); }

    bool is_zero() const { return v_.is_zero(); }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return den() == 1; }
    int sign() const { return v_.sign(); }

    Rat operator-() const { return Rat(-v_); }
    Rat &operator+=(const Rat &o) { v_ += o.v_; return *this; }
    Rat &operator-=(const Rat &o) { v_ -= o.v_; return *this; }
    Rat &operator*=(const Rat &o) { v_ *= o.v_; return *this; }
    Rat &operator/=(const Rat &o) {
        if (o.is_zero())
            throw std::invalid_argument("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat &b) { return a += b; }
    friend Rat operator-(Rat a, const Rat &b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat &b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat &b) { return a /= b; }
    friend bool operator==(const Rat &a, const Rat &b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat &a, const Rat &b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat &a, const Rat &b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rat &a, const Rat &b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rat &a, const Rat &b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rat &a, const Rat &b) { return a.v_ >= b.v_; }

    Rat inv() const {
        if (is_zero())
            throw std::invalid_argument("Rat: inverse of zero");
        return Rat(den(), num());
    }

    /// Integer power; e < 0 requires a nonzero base.
    Rat pow(long long e) const {
        if (e < 0)
            return inv().pow(-e);
        Rat r(1), b(*this);
        while (e) {
            if (e & 1)
                r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    /// "num/den", or just "num" when the denominator is 1.
    std::string str() const {
        std::string s = num().str();
        if (den() != 1)
            s += "/" + den().str();
        return s;
    }

  private:
    using Q = boost::multiprecision::cpp_rational;
    explicit Rat(Q v) : v_(std::move(v)) {}
    Q v_;
};

inline std::ostream &operator<<(std::ostream &os, const Rat &r) { return os << r.str(); }

} // namespace cjet

#endif
