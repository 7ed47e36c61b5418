#pragma once

/* Exact field scalars: arbitrary-precision rationals or a prime field F_p.
 * Every scalar carries its field tag; mixing fields is a hard error.
 * No floating point anywhere.
 */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ainf {

/* Error for malformed user input (documents, presentations, CLI args). */
struct input_error : std::runtime_error {
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

/* Error for internal invariant violations (always a bug, never user data). */
struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

/* Field descriptor. p == 0 means the rationals, otherwise the prime field F_p. */
struct Field {
    std::uint64_t p = 0;

    bool is_rational() const { return p == 0; }
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }

    std::string name() const;

    static Field rationals() { return Field{0}; }
    static Field prime(std::uint64_t p);  /* throws input_error unless p is prime */

    /* Parse "Q" or "F<p>" (e.g. "F5"); throws input_error. */
    static Field parse(const std::string& s);
};

/* A scalar in Q or F_p.  Rationals are kept canonical (lowest terms, positive
 * denominator) by mpq_class; F_p residues are kept in [0, p).
 */
class Scalar {
  public:
    Scalar() : field_{0}, q_(0), r_(0) {}

    static Scalar zero(const Field& f) { return Scalar(f, 0); }
    static Scalar one(const Field& f) { return Scalar(f, 1); }
    static Scalar from_int(const Field& f, long v) { return Scalar(f, v); }

    const Field& field() const { return field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inverse() const;  /* throws internal_error on zero */
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    /* Total order for deterministic containers; compares within one field. */
    bool operator<(const Scalar& o) const;

    /* Canonical text form: "3/7", "-2", or the residue "4" for F_p. */
    std::string str() const;

    /* Parse an integer or fraction literal in the given field.  Fractions are
     * allowed over F_p when the denominator is invertible. */
    static Scalar parse(const Field& f, const std::string& text);

  private:
    Scalar(const Field& f, long v);

    void check_same(const Scalar& o) const;

    Field field_;
    mpq_class q_;       /* used when field_.is_rational() */
    std::uint64_t r_;   /* used otherwise, in [0, p) */
};

}  // namespace ainf
