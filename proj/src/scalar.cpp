#include "scalar.h"

namespace ainf {

/******** Field ********/

std::string Field::name() const
{
    if (is_rational())
        return "Q";
    return "F" + std::to_string(p);
}

static bool is_prime_u64(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Field Field::prime(std::uint64_t p)
{
    if (!is_prime_u64(p))
        throw input_error("field modulus " + std::to_string(p) + " is not prime");
    return Field{p};
}

Field Field::parse(const std::string& s)
{
    if (s == "Q" || s == "q")
        return rationals();
    if (s.size() >= 2 && (s[0] == 'F' || s[0] == 'f')) {
        std::uint64_t p = 0;
        for (std::size_t i = 1; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9')
                throw input_error("cannot parse field \"" + s + "\"");
            p = p * 10 + static_cast<std::uint64_t>(s[i] - '0');
        }
        return prime(p);
    }
    throw input_error("cannot parse field \"" + s + "\" (expected \"Q\" or \"F<p>\")");
}

/******** Scalar ********/

Scalar::Scalar(const Field& f, long v) : field_(f), q_(0), r_(0)
{
    if (f.is_rational()) {
        q_ = v;
    } else {
        long m = static_cast<long>(f.p);
        long rv = v % m;
        if (rv < 0)
            rv += m;
        r_ = static_cast<std::uint64_t>(rv);
    }
}

void Scalar::check_same(const Scalar& o) const
{
    if (field_ != o.field_)
        throw internal_error("scalar arithmetic across different fields (" + field_.name() +
                             " vs " + o.field_.name() + ")");
}

bool Scalar::is_zero() const
{
    return field_.is_rational() ? q_ == 0 : r_ == 0;
}

bool Scalar::is_one() const
{
    return field_.is_rational() ? q_ == 1 : r_ == 1;
}

Scalar Scalar::operator+(const Scalar& o) const
{
    check_same(o);
    Scalar out(field_, 0);
    if (field_.is_rational())
        out.q_ = q_ + o.q_;
    else
        out.r_ = (r_ + o.r_) % field_.p;
    return out;
}

Scalar Scalar::operator-(const Scalar& o) const
{
    check_same(o);
    Scalar out(field_, 0);
    if (field_.is_rational())
        out.q_ = q_ - o.q_;
    else
        out.r_ = (r_ + field_.p - o.r_) % field_.p;
    return out;
}

Scalar Scalar::operator*(const Scalar& o) const
{
    check_same(o);
    Scalar out(field_, 0);
    if (field_.is_rational()) {
        out.q_ = q_ * o.q_;
        out.q_.canonicalize();
    } else {
        /* p < 2^32 is enforced nowhere, so multiply via __uint128_t. */
        unsigned __int128 prod = static_cast<unsigned __int128>(r_) * o.r_;
        out.r_ = static_cast<std::uint64_t>(prod % field_.p);
    }
    return out;
}

Scalar Scalar::operator-() const
{
    Scalar out(field_, 0);
    if (field_.is_rational())
        out.q_ = -q_;
    else
        out.r_ = r_ == 0 ? 0 : field_.p - r_;
    return out;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw internal_error("inverse of zero scalar");
    Scalar out(field_, 0);
    if (field_.is_rational()) {
        out.q_ = 1 / q_;
    } else {
        /* Extended Euclid on (r, p). */
        std::int64_t a = static_cast<std::int64_t>(r_), m = static_cast<std::int64_t>(field_.p);
        std::int64_t x0 = 1, x1 = 0, b = m;
        while (b != 0) {
            std::int64_t t = a / b;
            a -= t * b;
            std::swap(a, b);
            x0 -= t * x1;
            std::swap(x0, x1);
        }
        x0 %= m;
        if (x0 < 0)
            x0 += m;
        out.r_ = static_cast<std::uint64_t>(x0);
    }
    return out;
}

bool Scalar::operator==(const Scalar& o) const
{
    check_same(o);
    return field_.is_rational() ? q_ == o.q_ : r_ == o.r_;
}

bool Scalar::operator<(const Scalar& o) const
{
    check_same(o);
    return field_.is_rational() ? q_ < o.q_ : r_ < o.r_;
}

std::string Scalar::str() const
{
    if (field_.is_rational())
        return q_.get_str();
    return std::to_string(r_);
}

Scalar Scalar::parse(const Field& f, const std::string& text)
{
    if (text.empty())
        throw input_error("empty coefficient literal");
    std::string num = text, den;
    if (auto slash = text.find('/'); slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    auto parse_int = [&](const std::string& s) -> mpz_class {
        std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
        if (i == s.size())
            throw input_error("cannot parse coefficient \"" + text + "\"");
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9')
                throw input_error("cannot parse coefficient \"" + text + "\"");
        return mpz_class(s);
    };
    mpz_class n = parse_int(num);
    mpz_class d = den.empty() ? mpz_class(1) : parse_int(den);
    if (d == 0)
        throw input_error("zero denominator in coefficient \"" + text + "\"");

    Scalar out(f, 0);
    if (f.is_rational()) {
        out.q_ = mpq_class(n, d);
        out.q_.canonicalize();
        return out;
    }
    mpz_class p(std::to_string(f.p));
    mpz_class nr = n % p;
    if (nr < 0)
        nr += p;
    mpz_class dr = d % p;
    if (dr < 0)
        dr += p;
    Scalar nn(f, 0), dd(f, 0);
    nn.r_ = nr.get_ui();
    dd.r_ = dr.get_ui();
    if (dd.is_zero())
        throw input_error("coefficient \"" + text + "\" has denominator divisible by " +
                          std::to_string(f.p));
    return nn * dd.inverse();
}

}  // namespace ainf
