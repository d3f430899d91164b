#include "bvx/rational.hpp"

#include "bvx/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace bvx {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NotStationary: return "NotStationary";
        case Errc::NotPrimitive: return "NotPrimitive";
        case Errc::NotProperlyOrdered: return "NotProperlyOrdered";
        case Errc::LevelOutOfRange: return "LevelOutOfRange";
        case Errc::BadCuts: return "BadCuts";
        case Errc::DepthExhausted: return "DepthExhausted";
        case Errc::UndecidableNonInjective: return "UndecidableNonInjective";
        case Errc::UnknownPreset: return "UnknownPreset";
        case Errc::IdentityHasNoUniqueFixedPoint: return "IdentityHasNoUniqueFixedPoint";
        case Errc::CannotTelescope: return "CannotTelescope";
        case Errc::NoAvoidingPath: return "NoAvoidingPath";
        case Errc::IdSubgraphNotSinglePath: return "IdSubgraphNotSinglePath";
        case Errc::DimensionUnsupported: return "DimensionUnsupported";
        case Errc::MalformedInput: return "MalformedInput";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "UnknownError";
}

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw Error(Errc::InvalidArgument, "rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::parse(const std::string& text) {
    auto bad = [&] { return Error(Errc::MalformedInput, "not a rational: '" + text + "'"); };
    if (text.empty()) throw bad();
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        std::string p = text.substr(0, slash);
        std::string q = text.substr(slash + 1);
        if (p.empty() || q.empty()) throw bad();
        return Rational(BigInt(p), BigInt(q));
    } catch (const std::exception&) {
        throw bad();
    }
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    num_ = num_ * o.den_ - o.num_ * den_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    num_ *= o.num_;
    den_ *= o.den_;
    normalize();
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw Error(Errc::InvalidArgument, "rational division by zero");
    num_ *= o.den_;
    den_ *= o.num_;
    normalize();
    return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::pow(const Rational& base, unsigned exponent) {
    Rational acc(1);
    Rational b = base;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

Rational Rational::int_pow(long long base, long long exponent) {
    if (base == 0) throw Error(Errc::InvalidArgument, "0 base in int_pow");
    Rational b = exponent >= 0 ? Rational(base) : Rational(BigInt(1), BigInt(base));
    unsigned long long e = exponent >= 0 ? static_cast<unsigned long long>(exponent)
                                         : static_cast<unsigned long long>(-exponent);
    return pow(b, static_cast<unsigned>(e));
}

std::string Rational::str() const {
    std::string s = num_.str();
    if (den_ != 1) {
        s += "/";
        s += den_.str();
    }
    return s;
}

double Rational::to_double() const {
    using boost::multiprecision::cpp_rational;
    return static_cast<double>(cpp_rational(num_, den_));
}

Rational min(const Rational& a, const Rational& b) { return a <= b ? a : b; }
Rational max(const Rational& a, const Rational& b) { return a >= b ? a : b; }

}  // namespace bvx
