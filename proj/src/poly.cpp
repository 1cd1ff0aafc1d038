#include "ulrich/poly.hpp"

#include <set>
#include <sstream>

#include "ulrich/errors.hpp"

namespace ulrich {

VarSpec VarSpec::uniform(std::vector<std::string> names) {
    VarSpec v;
    v.weights.assign(names.size(), 1);
    v.names = std::move(names);
    return v;
}

std::optional<std::size_t> VarSpec::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    return std::nullopt;
}

void VarSpec::validate() const {
    if (names.size() != weights.size()) throw InputError("variable names and weights differ in length");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty()) throw InputError("empty variable name");
        if (names[i] == "zeta") throw InputError("`zeta` is reserved and cannot name a variable");
        if (!seen.insert(names[i]).second) throw InputError("duplicate variable name '" + names[i] + "'");
        if (weights[i] < 1) throw InputError("weight of '" + names[i] + "' must be at least 1");
    }
}

Ring::Ring(VarSpec vars, unsigned field_order) {
    vars.validate();
    data_ = std::make_shared<const Data>(Data{std::move(vars), &CyclotomicField::of(field_order)});
}

Ring Ring::make(std::vector<std::string> names, unsigned field_order) {
    return Ring(VarSpec::uniform(std::move(names)), field_order);
}

Ring Ring::with_field_order(unsigned order) const {
    if (order == field_order()) return *this;
    return Ring(vars(), order);
}

Ring Ring::with_variable(const std::string& name, int weight, bool front) const {
    if (vars().index_of(name)) return *this;
    VarSpec v = vars();
    v.names.insert(front ? v.names.begin() : v.names.end(), name);
    v.weights.insert(front ? v.weights.begin() : v.weights.end(), weight);
    return Ring(std::move(v), field_order());
}

bool operator==(const Ring& a, const Ring& b) {
    if (a.data_ == b.data_) return true;
    return a.data_->field == b.data_->field && a.data_->vars == b.data_->vars;
}

int weighted_degree_of(const Monomial& m, const std::vector<int>& weights) {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * weights[i];
    return d;
}

namespace {

void enumerate_monomials(std::size_t i, int left, Monomial& cur, std::vector<Monomial>& out) {
    if (i + 1 == cur.size()) {
        cur[i] = left;
        out.push_back(cur);
        return;
    }
    for (int e = left; e >= 0; --e) {
        cur[i] = e;
        enumerate_monomials(i + 1, left - e, cur, out);
    }
}

}  // namespace

std::vector<Monomial> monomials_of_degree(std::size_t nvars, int deg) {
    std::vector<Monomial> out;
    if (deg < 0 || nvars == 0) return out;
    Monomial cur(nvars, 0);
    enumerate_monomials(0, deg, cur, out);
    return out;
}

bool GrlexGreater::operator()(const Monomial& a, const Monomial& b) const {
    const int da = weighted_degree_of(a, weights);
    const int db = weighted_degree_of(b, weights);
    if (da != db) return da > db;
    return a > b;
}

MultiPoly::MultiPoly(Ring ring) : ring_(std::move(ring)), terms_(GrlexGreater{ring_.vars().weights}) {}

MultiPoly MultiPoly::constant(const Ring& ring, const FieldElement& c) {
    return monomial(ring, Monomial(ring.nvars(), 0), c);
}

MultiPoly MultiPoly::constant(const Ring& ring, const Rational& c) {
    return constant(ring, FieldElement(ring.field(), c));
}

MultiPoly MultiPoly::variable(const Ring& ring, std::size_t index) {
    if (index >= ring.nvars()) throw InputError("variable index out of range");
    Monomial m(ring.nvars(), 0);
    m[index] = 1;
    return monomial(ring, m, FieldElement(ring.field(), Rational(1)));
}

MultiPoly MultiPoly::variable(const Ring& ring, const std::string& name) {
    auto idx = ring.vars().index_of(name);
    if (!idx) throw InputError("undeclared variable '" + name + "'");
    return variable(ring, *idx);
}

MultiPoly MultiPoly::monomial(const Ring& ring, const Monomial& exps, const FieldElement& c) {
    if (exps.size() != ring.nvars()) throw InputError("exponent vector has wrong length");
    MultiPoly p(ring);
    p.add_term(exps, c);
    return p;
}

MultiPoly MultiPoly::zeta(const Ring& ring, long power) {
    if (ring.field_order() == 1) throw InputError("`zeta` requires a cyclotomic field (D > 1)");
    return constant(ring, FieldElement::zeta(ring.field(), power));
}

namespace {

FieldElement to_field(const FieldElement& c, const CyclotomicField& f) {
    if (&c.field() == &f) return c;
    if (c.is_rational()) return FieldElement(f, c.coeffs()[0]);
    return c.embed(f);
}

}  // namespace

void MultiPoly::add_term(const Monomial& m, const FieldElement& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, to_field(c, ring_.field()));
        return;
    }
    it->second += to_field(c, ring_.field());
    if (it->second.is_zero()) terms_.erase(it);
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    for (int e : terms_.begin()->first)
        if (e != 0) return false;
    return true;
}

FieldElement MultiPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    if (it == terms_.end()) return FieldElement(ring_.field(), Rational(0));
    return it->second;
}

bool MultiPoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    const auto& w = ring_.vars().weights;
    const int d = weighted_degree_of(terms_.begin()->first, w);
    for (const auto& [m, c] : terms_)
        if (weighted_degree_of(m, w) != d) return false;
    return true;
}

int MultiPoly::weighted_degree() const {
    if (terms_.empty()) throw InputError("weighted degree of the zero polynomial is undefined");
    if (!is_homogeneous()) throw InputError("weighted degree of a non-homogeneous polynomial is undefined");
    return weighted_degree_of(terms_.begin()->first, ring_.vars().weights);
}

int MultiPoly::total_degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) {
        int s = 0;
        for (int e : m) s += e;
        d = std::max(d, s);
    }
    return d;
}

int MultiPoly::degree_in(std::size_t var) const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
    return d;
}

bool MultiPoly::involves(std::size_t var) const {
    for (const auto& [m, c] : terms_)
        if (m[var] != 0) return true;
    return false;
}

MultiPoly MultiPoly::partial_derivative(std::size_t var) const {
    if (var >= ring_.nvars()) throw InputError("variable index out of range");
    MultiPoly r(ring_);
    for (const auto& [m, c] : terms_) {
        if (m[var] == 0) continue;
        Monomial n = m;
        n[var] -= 1;
        r.add_term(n, c * FieldElement(ring_.field(), Rational(m[var])));
    }
    return r;
}

MultiPoly MultiPoly::partial_derivative(const std::string& var) const {
    auto idx = ring_.vars().index_of(var);
    if (!idx) throw InputError("undeclared variable '" + var + "'");
    return partial_derivative(*idx);
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images, const Ring& target) const {
    if (images.size() != ring_.nvars()) throw InputError("substitution needs one image per variable");
    for (const auto& im : images)
        if (im.ring() != target) throw InputError("substitution images live in different rings");
    std::vector<std::vector<MultiPoly>> powers(images.size());
    auto power_of = [&](std::size_t i, int e) -> const MultiPoly& {
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(MultiPoly::constant(target, Rational(1)));
        while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * images[i]);
        return cache[static_cast<std::size_t>(e)];
    };
    MultiPoly result(target);
    for (const auto& [m, c] : terms_) {
        MultiPoly term = MultiPoly::constant(target, to_field(c, target.field()));
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) term *= power_of(i, m[i]);
        result += term;
    }
    return result;
}

MultiPoly MultiPoly::substitute(const std::map<std::string, MultiPoly>& assignment) const {
    std::vector<MultiPoly> images;
    images.reserve(ring_.nvars());
    for (std::size_t i = 0; i < ring_.nvars(); ++i) {
        auto it = assignment.find(ring_.vars().names[i]);
        if (it != assignment.end()) {
            if (it->second.ring() != ring_) throw InputError("substitution image lives in a different ring");
            images.push_back(it->second);
        } else {
            images.push_back(variable(ring_, i));
        }
    }
    for (const auto& [name, im] : assignment)
        if (!ring_.vars().index_of(name)) throw InputError("undeclared variable '" + name + "'");
    return substitute(images, ring_);
}

MultiPoly MultiPoly::to_ring(const Ring& target) const {
    if (target == ring_) return *this;
    std::vector<std::optional<std::size_t>> map(ring_.nvars());
    for (std::size_t i = 0; i < ring_.nvars(); ++i) map[i] = target.vars().index_of(ring_.vars().names[i]);
    MultiPoly r(target);
    for (const auto& [m, c] : terms_) {
        Monomial n(target.nvars(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!map[i]) throw InputError("variable '" + ring_.vars().names[i] + "' missing from target ring");
            n[*map[i]] = m[i];
        }
        if (target.field_order() % ring_.field_order() != 0 && !c.is_rational())
            throw InputError("target field does not contain the coefficients");
        r.add_term(n, to_field(c, target.field()));
    }
    return r;
}

FieldElement MultiPoly::evaluate(const std::vector<FieldElement>& point) const {
    if (point.size() != ring_.nvars()) throw InputError("evaluation point has wrong dimension");
    FieldElement acc(ring_.field(), Rational(0));
    for (const auto& [m, c] : terms_) {
        FieldElement t = c;
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) t *= point[i].pow(m[i]);
        acc += t;
    }
    return acc;
}

FieldElement MultiPoly::evaluate(const std::vector<Rational>& point) const {
    if (point.size() != ring_.nvars()) throw InputError("evaluation point has wrong dimension");
    std::vector<Rational> acc(ring_.field().degree());
    for (const auto& [m, c] : terms_) {
        Rational v = 1;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (int e = 0; e < m[i]; ++e) v *= point[i];
        if (v == 0) continue;
        for (std::size_t j = 0; j < acc.size(); ++j) acc[j] += c.coeffs()[j] * v;
    }
    return FieldElement(ring_.field(), std::move(acc));
}

void MultiPoly::check_ring(const MultiPoly& o) const {
    if (ring_ != o.ring_) throw InputError("polynomials live in different rings (mismatched VarSpec or field)");
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
    check_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
    check_ring(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check_ring(b);
    MultiPoly r(a.ring_);
    if (a.is_zero() || b.is_zero()) return r;
    Monomial m(a.ring_.nvars());
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) { return *this = *this * o; }

MultiPoly& MultiPoly::operator*=(const FieldElement& c) {
    const FieldElement k = to_field(c, ring_.field());
    if (k.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= k;
    return *this;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly result = constant(ring_, Rational(1));
    MultiPoly base = *this;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base *= base;
    }
    return result;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.ring_ != b.ring_) return false;
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib)
        if (ia->first != ib->first || ia->second != ib->second) return false;
    return true;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string mono;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += ring_.vars().names[i];
            if (m[i] > 1) mono += "^" + std::to_string(m[i]);
        }
        bool negative = false;
        std::string body;
        if (c.is_rational()) {
            Rational v = c.coeffs()[0];
            negative = v < 0;
            Rational a = abs(v);
            if (mono.empty())
                body = a.get_str();
            else if (a == 1)
                body = mono;
            else
                body = a.get_str() + "*" + mono;
        } else {
            body = "(" + c.str() + ")";
            if (!mono.empty()) body += "*" + mono;
        }
        if (first)
            os << (negative ? "-" : "") << body;
        else
            os << (negative ? " - " : " + ") << body;
        first = false;
    }
    return os.str();
}

}  // namespace ulrich
