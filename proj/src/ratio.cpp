#include "pred/ratio.hpp"

#include <cmath>

#include "pred/errors.hpp"

namespace pred {

Ratio::Ratio(long n) : v_(n) { check_nonnegative(); }

Ratio::Ratio(long num, long den) : v_(num, den) {
    v_.canonicalize();
    check_nonnegative();
}

Ratio::Ratio(const mpq_class& v) : v_(v) {
    v_.canonicalize();
    check_nonnegative();
}

Ratio Ratio::from_string(const std::string& text) {
    try {
        mpq_class v(text);
        if (v.get_den() == 0) throw ParseError("zero denominator in \"" + text + "\"");
        v.canonicalize();
        if (v < 0) throw ParseError("negative rational \"" + text + "\"");
        return Ratio(v);
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid rational \"" + text + "\"");
    }
}

Ratio Ratio::pow2(long e) {
    mpq_class v;
    if (e >= 0) {
        mpz_class n;
        mpz_ui_pow_ui(n.get_mpz_t(), 2, static_cast<unsigned long>(e));
        v = n;
    } else {
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        v = mpq_class(1, 1);
        v /= d;
    }
    return Ratio(v);
}

Ratio Ratio::operator-(const Ratio& o) const {
    if (o.v_ > v_)
        throw PreconditionError("Ratio subtraction underflow: " + str() + " - " + o.str());
    return Ratio(mpq_class(v_ - o.v_));
}

Ratio Ratio::operator/(const Ratio& o) const {
    if (o.v_ == 0) throw PreconditionError("Ratio division by zero");
    return Ratio(mpq_class(v_ / o.v_));
}

bool Ratio::is_dyadic() const {
    // lowest terms, so the denominator must itself be a power of two
    mpz_class den = v_.get_den();
    return mpz_scan1(den.get_mpz_t(), 0) == mpz_sizeinbase(den.get_mpz_t(), 2) - 1;
}

std::string Ratio::str() const {
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

double Ratio::log2_approx() const {
    if (v_ == 0) throw PreconditionError("log2 of zero");
    long nexp = 0, dexp = 0;
    double nm = mpz_get_d_2exp(&nexp, v_.get_num().get_mpz_t());
    double dm = mpz_get_d_2exp(&dexp, v_.get_den().get_mpz_t());
    return (static_cast<double>(nexp) - static_cast<double>(dexp)) +
           (std::log2(nm) - std::log2(dm));
}

Ratio Ratio::quotient_or_zero(const Ratio& num, const Ratio& den) {
    if (den.is_zero()) {
        if (num.is_zero()) return Ratio();
        throw PreconditionError("quotient " + num.str() + "/0 is undefined (only 0/0 is 0)");
    }
    return num / den;
}

void Ratio::check_nonnegative() const {
    if (v_ < 0) throw PreconditionError("Ratio must be nonnegative, got " + v_.get_str());
}

}  // namespace pred
