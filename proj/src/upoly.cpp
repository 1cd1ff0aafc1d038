#include "ulrich/upoly.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ulrich {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::constant(const Rational& c) { return UPoly(std::vector<Rational>{c}); }

UPoly UPoly::monomial(const Rational& c, int degree) {
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
    v.back() = c;
    return UPoly(std::move(v));
}

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
    return c_[static_cast<std::size_t>(i)];
}

Rational UPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
    if (is_zero()) return {};
    Rational inv = 1 / leading();
    return inv * *this;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return UPoly(std::move(v));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(v));
}

UPoly operator*(const Rational& c, const UPoly& a) {
    if (c == 0) return {};
    std::vector<Rational> v = a.c_;
    for (auto& x : v) x *= c;
    return UPoly(std::move(v));
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> rem = a.c_;
    const int db = b.degree();
    const int da = a.degree();
    if (da < db) {
        q = {};
        r = a;
        return;
    }
    std::vector<Rational> quo(static_cast<std::size_t>(da - db) + 1);
    const Rational inv = 1 / b.leading();
    for (int i = da; i >= db; --i) {
        Rational c = rem[static_cast<std::size_t>(i)] * inv;
        if (c == 0) continue;
        quo[static_cast<std::size_t>(i - db)] = c;
        for (int j = 0; j <= db; ++j)
            rem[static_cast<std::size_t>(i - db + j)] -= c * b.c_[static_cast<std::size_t>(j)];
    }
    q = UPoly(std::move(quo));
    r = UPoly(std::move(rem));
}

UPoly operator/(const UPoly& a, const UPoly& b) {
    UPoly q, r;
    UPoly::divmod(a, b, q, r);
    return q;
}

UPoly operator%(const UPoly& a, const UPoly& b) {
    UPoly q, r;
    UPoly::divmod(a, b, q, r);
    return r;
}

std::string UPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Rational& c = c_[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        Rational a = abs(c);
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        first = false;
        if (i == 0 || a != 1) {
            os << a.get_str();
            if (i > 0) os << "*";
        }
        if (i > 0) os << var;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = x % y;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

UPoly xgcd(const UPoly& a, const UPoly& b, UPoly& s, UPoly& t) {
    UPoly r0 = a, r1 = b;
    UPoly s0 = UPoly::constant(1), s1;
    UPoly t0, t1 = UPoly::constant(1);
    while (!r1.is_zero()) {
        UPoly q, r;
        UPoly::divmod(r0, r1, q, r);
        r0 = std::move(r1);
        r1 = std::move(r);
        UPoly s2 = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        UPoly t2 = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        s = {};
        t = {};
        return {};
    }
    Rational inv = 1 / r0.leading();
    s = inv * s0;
    t = inv * t0;
    return inv * r0;
}

bool is_squarefree(const UPoly& p) {
    if (p.degree() <= 0) return true;
    return gcd(p, p.derivative()).degree() == 0;
}

UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
    // Newton divided differences.
    const std::size_t n = xs.size();
    std::vector<Rational> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    UPoly result;
    for (std::size_t k = n; k-- > 0;) {
        result = result * UPoly(std::vector<Rational>{-xs[k], 1}) + UPoly::constant(dd[k]);
    }
    return result;
}

UPoly cyclotomic_polynomial(unsigned n) {
    static std::mutex mu;
    static std::map<unsigned, UPoly> cache;
    if (n == 0) throw std::invalid_argument("cyclotomic order must be positive");
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    UPoly p = UPoly::monomial(1, static_cast<int>(n)) - UPoly::constant(1);
    for (unsigned d = 1; d < n; ++d)
        if (n % d == 0) p = p / cyclotomic_polynomial(d);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(n, p);
    return p;
}

}  // namespace ulrich
