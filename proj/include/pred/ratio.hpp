#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace pred {

// Exact nonnegative rational, kept in lowest terms. Every probability
// in the library is a Ratio; logarithms appear only at display time.
//
// Subtraction is guarded: a negative result throws. The quantities this
// library manipulates (masses, surpluses, bound numerators) are
// nonnegative whenever their preconditions hold, so a negative
// intermediate is always a caller bug and fails loudly.
class Ratio {
public:
    Ratio() : v_(0) {}
    Ratio(long n);                       // NOLINT: implicit for literals
    Ratio(long num, long den);
    explicit Ratio(const mpq_class& v);

    static Ratio from_string(const std::string& text);  // "num/den" or "num"

    // 2^e for signed e.
    static Ratio pow2(long e);

    Ratio operator+(const Ratio& o) const { return Ratio(mpq_class(v_ + o.v_)); }
    Ratio operator*(const Ratio& o) const { return Ratio(mpq_class(v_ * o.v_)); }
    Ratio operator-(const Ratio& o) const;  // throws if o > *this
    Ratio operator/(const Ratio& o) const;  // throws if o == 0

    Ratio& operator+=(const Ratio& o) { v_ += o.v_; return *this; }
    Ratio& operator*=(const Ratio& o) { v_ *= o.v_; return *this; }
    Ratio& operator-=(const Ratio& o) { *this = *this - o; return *this; }

    std::strong_ordering operator<=>(const Ratio& o) const {
        int c = cmp(v_, o.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }
    bool operator==(const Ratio& o) const { return v_ == o.v_; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    // num/den with den a power of two?
    bool is_dyadic() const;

    const mpq_class& value() const { return v_; }
    const mpz_class& numerator() const { return v_.get_num(); }
    const mpz_class& denominator() const { return v_.get_den(); }

    // Always "num/den", e.g. "0/1", "3/4".
    std::string str() const;

    // log2 of the value as a double; requires nonzero. Accurate to well
    // below 1e-9 even for values whose magnitude overflows double.
    double log2_approx() const;

    // Quotient with 0/0 read as 0; x/0 with x > 0 throws.
    static Ratio quotient_or_zero(const Ratio& num, const Ratio& den);

    static Ratio min(const Ratio& a, const Ratio& b) { return a <= b ? a : b; }
    static Ratio max(const Ratio& a, const Ratio& b) { return a >= b ? a : b; }

private:
    void check_nonnegative() const;
    mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

}  // namespace pred
