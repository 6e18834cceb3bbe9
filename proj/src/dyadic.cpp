#include "pred/dyadic.hpp"

#include "pred/errors.hpp"

namespace pred {

Dyadic::Dyadic(mpz_class mantissa, unsigned long exponent)
    : mantissa_(std::move(mantissa)), exponent_(exponent) {
    if (mantissa_ < 0) throw PreconditionError("Dyadic mantissa must be nonnegative");
    canonicalize();
}

void Dyadic::canonicalize() {
    if (mantissa_ == 0) {
        exponent_ = 0;
        return;
    }
    while (exponent_ > 0 && mpz_even_p(mantissa_.get_mpz_t())) {
        mantissa_ >>= 1;
        --exponent_;
    }
}

Dyadic Dyadic::from_ratio(const Ratio& r) {
    if (!r.is_dyadic())
        throw PreconditionError("value " + r.str() + " is not dyadic");
    const mpz_class& den = r.denominator();
    auto e = mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
    return Dyadic(r.numerator(), static_cast<unsigned long>(e));
}

Dyadic Dyadic::pow2(long e) {
    if (e >= 0) {
        mpz_class m;
        mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(e));
        return Dyadic(m, 0);
    }
    return Dyadic(1, static_cast<unsigned long>(-e));
}

Ratio Dyadic::to_ratio() const {
    mpq_class v(mantissa_);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, exponent_);
    v /= den;
    return Ratio(v);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    unsigned long e = std::max(exponent_, o.exponent_);
    mpz_class a = mantissa_ << (e - exponent_);
    mpz_class b = o.mantissa_ << (e - o.exponent_);
    return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
    unsigned long e = std::max(exponent_, o.exponent_);
    mpz_class a = mantissa_ << (e - exponent_);
    mpz_class b = o.mantissa_ << (e - o.exponent_);
    if (b > a)
        throw PreconditionError("Dyadic subtraction underflow: " + str() + " - " + o.str());
    return Dyadic(a - b, e);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
    return Dyadic(mantissa_ * o.mantissa_, exponent_ + o.exponent_);
}

std::vector<unsigned long> Dyadic::set_digits() const {
    if (to_ratio() > Ratio(1))
        throw PreconditionError("set_digits requires value <= 1, got " + str());
    std::vector<unsigned long> out;
    for (std::size_t j = mpz_sizeinbase(mantissa_.get_mpz_t(), 2); j-- > 0;) {
        if (mpz_tstbit(mantissa_.get_mpz_t(), static_cast<mp_bitcnt_t>(j)))
            out.push_back(exponent_ - static_cast<unsigned long>(j));
    }
    return out;
}

std::string Dyadic::str() const {
    return mantissa_.get_str() + "*2^-" + std::to_string(exponent_);
}

}  // namespace pred
