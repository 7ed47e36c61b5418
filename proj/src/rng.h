#pragma once

#include <cstdint>

#include "scalar.h"

namespace ainf {

/* Deterministic pseudo-random stream (splitmix64).  Hand-rolled so that the
 * same seed yields the same bytes on every platform and standard library. */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /* Uniform in [0, n), n > 0, via rejection to avoid modulo bias. */
    std::uint64_t below(std::uint64_t n)
    {
        if (n == 0)
            throw internal_error("Rng::below(0)");
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    /* Uniform integer in [lo, hi] inclusive. */
    std::int64_t range(std::int64_t lo, std::int64_t hi)
    {
        if (hi < lo)
            throw internal_error("Rng::range: empty interval");
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return (next() & 1) != 0; }

    /* Uniform field element.  Over the rationals this draws a small integer
     * in [-4, 4]; over F_p it draws a residue. */
    Scalar scalar(const Field& f)
    {
        if (f.is_rational())
            return Scalar::from_int(f, range(-4, 4));
        return Scalar::from_int(f, static_cast<long>(below(f.p)));
    }

    /* Nonzero field element. */
    Scalar nonzero_scalar(const Field& f)
    {
        for (;;) {
            Scalar s = scalar(f);
            if (!s.is_zero())
                return s;
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace ainf
