#include "ulrich/field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

#include "ulrich/errors.hpp"

namespace ulrich {

const CyclotomicField& CyclotomicField::of(unsigned order) {
    static std::mutex mu;
    static std::map<unsigned, std::unique_ptr<CyclotomicField>> registry;
    if (order == 0) throw InputError("cyclotomic order must be positive");
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = registry[order];
    if (!slot) slot.reset(new CyclotomicField(order));
    return *slot;
}

CyclotomicField::CyclotomicField(unsigned order) : order_(order), modulus_(cyclotomic_polynomial(order)) {
    degree_ = static_cast<std::size_t>(modulus_.degree());
    powers_.reserve(order);
    std::vector<Rational> cur(degree_);
    cur[0] = 1;
    for (unsigned k = 0; k < order; ++k) {
        powers_.push_back(cur);
        // multiply by x and reduce
        std::vector<Rational> next(degree_ + 1);
        for (std::size_t i = 0; i < degree_; ++i) next[i + 1] = cur[i];
        cur = reduce(std::move(next));
    }
}

const std::vector<Rational>& CyclotomicField::zeta_power(long k) const {
    long m = k % static_cast<long>(order_);
    if (m < 0) m += order_;
    return powers_[static_cast<std::size_t>(m)];
}

std::vector<Rational> CyclotomicField::reduce(std::vector<Rational> v) const {
    const auto& phi = modulus_.coeffs();
    for (std::size_t i = v.size(); i-- > degree_;) {
        if (v[i] == 0) continue;
        Rational c = v[i];
        for (std::size_t j = 0; j < degree_; ++j) v[i - degree_ + j] -= c * phi[j];
        v[i] = 0;
    }
    v.resize(degree_);
    return v;
}

unsigned lcm_order(unsigned a, unsigned b) { return std::lcm(a, b); }

FieldElement::FieldElement() : field_(&CyclotomicField::of(1)), c_(1) {}

FieldElement::FieldElement(const CyclotomicField& field, const Rational& value) : field_(&field), c_(field.degree()) {
    c_[0] = value;
}

FieldElement::FieldElement(const CyclotomicField& field, std::vector<Rational> coeffs)
    : field_(&field), c_(field.reduce(std::move(coeffs))) {}

FieldElement FieldElement::zeta(const CyclotomicField& field, long power) {
    FieldElement e;
    e.field_ = &field;
    e.c_ = field.zeta_power(power);
    return e;
}

bool FieldElement::is_zero() const {
    for (const auto& c : c_)
        if (c != 0) return false;
    return true;
}

bool FieldElement::is_one() const { return is_rational() && c_[0] == 1; }

bool FieldElement::is_rational() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

Rational FieldElement::rational() const {
    if (!is_rational()) throw InputError("field element " + str() + " is not rational");
    return c_[0];
}

void FieldElement::align(const FieldElement& o) {
    if (field_ == o.field_) return;
    if (o.is_rational()) return;
    if (is_rational()) {
        Rational v = c_[0];
        field_ = o.field_;
        c_.assign(field_->degree(), Rational(0));
        c_[0] = v;
        return;
    }
    throw InputError("arithmetic between Q(zeta_" + std::to_string(order()) + ") and Q(zeta_" +
                     std::to_string(o.order()) + ")");
}

FieldElement FieldElement::operator-() const {
    FieldElement r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    align(o);
    if (o.field_ == field_) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    } else {
        c_[0] += o.c_[0];
    }
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    align(o);
    if (o.field_ == field_) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    } else {
        c_[0] -= o.c_[0];
    }
    return *this;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    align(o);
    if (o.field_ != field_ || o.c_.size() == 1) {
        const Rational s = o.c_[0];
        for (auto& c : c_) c *= s;
        return *this;
    }
    if (is_rational()) {
        const Rational s = c_[0];
        c_ = o.c_;
        for (auto& c : c_) c *= s;
        return *this;
    }
    const std::size_t n = c_.size();
    std::vector<Rational> prod(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j)
            if (o.c_[j] != 0) prod[i + j] += c_[i] * o.c_[j];
    }
    c_ = field_->reduce(std::move(prod));
    return *this;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
    if (a.field_ == b.field_) return a.c_ == b.c_;
    if (a.is_rational() && b.is_rational()) return a.c_[0] == b.c_[0];
    return false;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw MathFailure("division by zero in Q(zeta_" + std::to_string(order()) + ")");
    if (is_rational()) return FieldElement(*field_, Rational(1 / c_[0]));
    UPoly s, t;
    UPoly g = xgcd(UPoly(c_), field_->modulus(), s, t);
    (void)g;  // Phi_D is irreducible, so g == 1
    std::vector<Rational> v = s.coeffs();
    v.resize(std::max(v.size(), field_->degree()));
    return FieldElement(*field_, std::move(v));
}

FieldElement FieldElement::pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    FieldElement result(*field_, Rational(1));
    FieldElement base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

FieldElement FieldElement::embed(const CyclotomicField& target) const {
    if (&target == field_) return *this;
    if (target.order() % order() != 0)
        throw InputError("cannot embed Q(zeta_" + std::to_string(order()) + ") into Q(zeta_" +
                         std::to_string(target.order()) + ")");
    const long step = static_cast<long>(target.order() / order());
    std::vector<Rational> v(target.degree());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        const auto& p = target.zeta_power(static_cast<long>(i) * step);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] += c_[i] * p[j];
    }
    FieldElement r;
    r.field_ = &target;
    r.c_ = std::move(v);
    return r;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const Rational& c = c_[i];
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
        if (i > 0) os << "zeta";
        if (i > 1) os << "^" << i;
    }
    if (first) return "0";
    return os.str();
}

}  // namespace ulrich
