#pragma once

#include <string>
#include <vector>

#include "ulrich/upoly.hpp"

namespace ulrich {

// Q(zeta_D) realised as Q[x] / Phi_D(x). Instances are interned and
// immutable; obtain them through CyclotomicField::of.
class CyclotomicField {
  public:
    static const CyclotomicField& of(unsigned order);

    unsigned order() const { return order_; }
    std::size_t degree() const { return degree_; }
    const UPoly& modulus() const { return modulus_; }
    // Reduced coefficient vector of zeta^k, k taken mod order.
    const std::vector<Rational>& zeta_power(long k) const;
    // Reduce an arbitrary coefficient vector modulo Phi_D.
    std::vector<Rational> reduce(std::vector<Rational> v) const;

    CyclotomicField(const CyclotomicField&) = delete;
    CyclotomicField& operator=(const CyclotomicField&) = delete;

  private:
    explicit CyclotomicField(unsigned order);
    unsigned order_;
    std::size_t degree_;
    UPoly modulus_;
    std::vector<std::vector<Rational>> powers_;
};

unsigned lcm_order(unsigned a, unsigned b);

class FieldElement {
  public:
    FieldElement();
    FieldElement(const CyclotomicField& field, const Rational& value);
    FieldElement(const CyclotomicField& field, std::vector<Rational> coeffs);
    static FieldElement zeta(const CyclotomicField& field, long power = 1);

    const CyclotomicField& field() const { return *field_; }
    unsigned order() const { return field_->order(); }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_rational() const;
    // Throws InputError unless is_rational().
    Rational rational() const;

    FieldElement inverse() const;
    FieldElement pow(long e) const;
    // Image under Q(zeta_D) -> Q(zeta_D'), D | D'.
    FieldElement embed(const CyclotomicField& target) const;

    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }
    friend bool operator==(const FieldElement& a, const FieldElement& b);
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    // Text form over the symbol `zeta`, e.g. "2*zeta^2 - 1/3".
    std::string str() const;

  private:
    void align(const FieldElement& o);
    const CyclotomicField* field_;
    std::vector<Rational> c_;
};

}  // namespace ulrich
