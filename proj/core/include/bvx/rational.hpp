#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <vector>

namespace bvx {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always kept in lowest terms with positive denominator.
///
/// This is the number type of every geometric computation in the library:
/// map application, box arithmetic, metrics, measures. Nothing downstream
/// ever rounds, so equality assertions in tests are meaningful.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt num, BigInt den);

    /// Parse "p/q" or "p". Throws Error(MalformedInput) on garbage.
    static Rational parse(const std::string& text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);  // throws on division by zero

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    static Rational pow(const Rational& base, unsigned exponent);
    /// 2^-n and friends; exponent may be negative.
    static Rational int_pow(long long base, long long exponent);

    Rational abs() const { return num_ >= 0 ? *this : -*this; }

    /// Lowest-terms string: "p" when the denominator is 1, else "p/q".
    std::string str() const;
    double to_double() const;

private:
    void normalize();
    BigInt num_, den_;
};

Rational min(const Rational& a, const Rational& b);
Rational max(const Rational& a, const Rational& b);

}  // namespace bvx
