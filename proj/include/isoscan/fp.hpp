#pragma once

#include <isoscan/arith.hpp>

namespace isoscan {

/* Residue class a mod m. Arithmetic between residues requires equal moduli;
 * mixing moduli is a programming error and throws. */
class Fp {
  public:
    Fp() : v_(0), m_(2) {}
    Fp(i64 value, u64 modulus) : m_(modulus) {
        require_modulus(modulus);
        v_ = mod_reduce(value, modulus);
    }

    u64 value() const { return v_; }
    u64 modulus() const { return m_; }
    bool is_zero() const { return v_ == 0; }

    friend Fp operator+(Fp a, Fp b) { a.match(b); return Fp::raw(add_mod(a.v_, b.v_, a.m_), a.m_); }
    friend Fp operator-(Fp a, Fp b) { a.match(b); return Fp::raw(sub_mod(a.v_, b.v_, a.m_), a.m_); }
    friend Fp operator*(Fp a, Fp b) { a.match(b); return Fp::raw(mul_mod(a.v_, b.v_, a.m_), a.m_); }
    // Division requires the divisor to be a unit (always true for nonzero
    // values over prime moduli, the only place the group law uses it).
    friend Fp operator/(Fp a, Fp b) {
        a.match(b);
        auto i = b.inverse();
        if (!i) throw std::domain_error("division by a non-invertible residue");
        return a * *i;
    }
    Fp operator-() const { return Fp::raw(v_ == 0 ? 0 : m_ - v_, m_); }

    Fp& operator+=(Fp b) { return *this = *this + b; }
    Fp& operator-=(Fp b) { return *this = *this - b; }
    Fp& operator*=(Fp b) { return *this = *this * b; }

    // Fails (empty) when gcd(value, modulus) > 1; never fails for prime moduli
    // and nonzero values.
    std::optional<Fp> inverse() const {
        auto i = inv_mod(static_cast<i64>(v_), m_);
        if (!i) return std::nullopt;
        return Fp::raw(*i, m_);
    }

    Fp pow(u64 e) const { return Fp::raw(pow_mod(static_cast<i64>(v_), e, m_), m_); }

    friend bool operator==(Fp a, Fp b) { return a.m_ == b.m_ && a.v_ == b.v_; }
    friend bool operator!=(Fp a, Fp b) { return !(a == b); }

  private:
    static Fp raw(u64 v, u64 m) {
        Fp f;
        f.v_ = v;
        f.m_ = m;
        return f;
    }
    void match(const Fp& b) const {
        if (m_ != b.m_) throw std::invalid_argument("residue modulus mismatch");
    }

    u64 v_;
    u64 m_;
};

} // namespace isoscan
