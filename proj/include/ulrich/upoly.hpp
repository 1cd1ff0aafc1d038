#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace ulrich {

using Rational = mpq_class;
using Integer = mpz_class;

// Dense univariate polynomial over Q, coefficients stored low degree first.
// The zero polynomial has no coefficients and degree -1.
class UPoly {
  public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs);
    static UPoly constant(const Rational& c);
    static UPoly monomial(const Rational& c, int degree);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const;
    const Rational& leading() const { return c_.back(); }

    Rational eval(const Rational& x) const;
    UPoly derivative() const;
    UPoly monic() const;

    UPoly operator-() const;
    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const Rational& c, const UPoly& a);
    friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

    // Euclidean division; throws std::domain_error on division by zero.
    static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
    friend UPoly operator/(const UPoly& a, const UPoly& b);
    friend UPoly operator%(const UPoly& a, const UPoly& b);

    std::string str(const std::string& var = "x") const;

  private:
    void trim();
    std::vector<Rational> c_;
};

// Monic gcd (zero if both inputs are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
// Returns g = gcd(a, b) monic with s*a + t*b = g.
UPoly xgcd(const UPoly& a, const UPoly& b, UPoly& s, UPoly& t);
bool is_squarefree(const UPoly& p);
// Polynomial through (xs[i], ys[i]); xs must be distinct.
UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);
// The n-th cyclotomic polynomial (monic, integer coefficients).
UPoly cyclotomic_polynomial(unsigned n);

}  // namespace ulrich
