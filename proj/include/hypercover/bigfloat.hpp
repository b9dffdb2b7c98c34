#pragma once

#include <gmp.h>
#include <mpfr.h>

#include <stdexcept>
#include <utility>

namespace hypercover {

// Minimal RAII wrapper around an mpfr_t at a fixed precision. Only the
// handful of operations needed for the alternating binomial sums are
// exposed; everything rounds to nearest.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_zero(v_, 1);
    }
    BigFloat(double x, mpfr_prec_t bits) {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    BigFloat& operator+=(const BigFloat& o) {
        mpfr_add(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator-=(const BigFloat& o) {
        mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator*=(const BigFloat& o) {
        mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator+=(double x) {
        mpfr_add_d(v_, v_, x, MPFR_RNDN);
        return *this;
    }
    BigFloat& div_ui(unsigned long x) {
        mpfr_div_ui(v_, v_, x, MPFR_RNDN);
        return *this;
    }
    BigFloat& negate() {
        mpfr_neg(v_, v_, MPFR_RNDN);
        return *this;
    }

    static BigFloat div(const BigFloat& a, const BigFloat& b) {
        BigFloat r(mpfr_get_prec(a.v_));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }

    // exact scaling by 2^e
    BigFloat& scale_2exp(long e) {
        mpfr_mul_2si(v_, v_, e, MPFR_RNDN);
        return *this;
    }

    // this^e for integer e >= 0
    BigFloat pow_ui(unsigned long e) const {
        BigFloat r(mpfr_get_prec(v_));
        mpfr_pow_ui(r.v_, v_, e, MPFR_RNDN);
        return r;
    }

    // exact binomial coefficient C(n, k), then rounded into the target precision
    static BigFloat binomial(unsigned long n, unsigned long k, mpfr_prec_t bits) {
        mpz_t z;
        mpz_init(z);
        mpz_bin_uiui(z, n, k);
        BigFloat r(bits);
        mpfr_set_z(r.v_, z, MPFR_RNDN);
        mpz_clear(z);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool finite() const { return mpfr_number_p(v_) != 0; }

private:
    mpfr_t v_;
};

}  // namespace hypercover
