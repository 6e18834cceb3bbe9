#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "pred/ratio.hpp"

namespace pred {

// Nonnegative number with a finite radix-2 representation:
// mantissa * 2^(-exponent), exponent >= 0. Canonical form keeps the
// mantissa odd (or zero) whenever the exponent permits.
class Dyadic {
public:
    Dyadic() : mantissa_(0), exponent_(0) {}
    Dyadic(mpz_class mantissa, unsigned long exponent);

    // Exact conversion; throws PreconditionError if the value is not dyadic.
    static Dyadic from_ratio(const Ratio& r);

    static Dyadic pow2(long e);  // 2^e, e <= 0 gives 1*2^-|e|

    Ratio to_ratio() const;

    bool is_zero() const { return mantissa_ == 0; }
    const mpz_class& mantissa() const { return mantissa_; }
    unsigned long exponent() const { return exponent_; }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;  // guarded like Ratio
    Dyadic operator*(const Dyadic& o) const;

    auto operator<=>(const Dyadic& o) const { return to_ratio() <=> o.to_ratio(); }
    bool operator==(const Dyadic& o) const {
        return mantissa_ == o.mantissa_ && exponent_ == o.exponent_;
    }

    // Exponents i with a set binary digit, i.e. the value equals
    // sum of 2^(-i) over the returned list (ascending i; i = 0 is the
    // integer bit). Requires value <= 1 so that all digits are
    // nonnegative powers.
    std::vector<unsigned long> set_digits() const;

    // "m*2^-e"
    std::string str() const;

private:
    void canonicalize();
    mpz_class mantissa_;
    unsigned long exponent_;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }

}  // namespace pred
