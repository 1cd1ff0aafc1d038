#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ulrich/field.hpp"

namespace ulrich {

struct VarSpec {
    std::vector<std::string> names;
    std::vector<int> weights;

    // All weights 1.
    static VarSpec uniform(std::vector<std::string> names);
    std::size_t size() const { return names.size(); }
    std::optional<std::size_t> index_of(const std::string& name) const;
    // Throws InputError on duplicate names or weights < 1.
    void validate() const;
    friend bool operator==(const VarSpec&, const VarSpec&) = default;
};

// Polynomial ring K[vars] with K = Q(zeta_D). Cheap to copy.
class Ring {
  public:
    Ring(VarSpec vars, unsigned field_order = 1);
    static Ring make(std::vector<std::string> names, unsigned field_order = 1);

    const VarSpec& vars() const { return data_->vars; }
    std::size_t nvars() const { return data_->vars.size(); }
    const CyclotomicField& field() const { return *data_->field; }
    unsigned field_order() const { return data_->field->order(); }

    Ring with_field_order(unsigned order) const;
    Ring with_variable(const std::string& name, int weight = 1, bool front = false) const;

    friend bool operator==(const Ring& a, const Ring& b);
    friend bool operator!=(const Ring& a, const Ring& b) { return !(a == b); }

  private:
    struct Data {
        VarSpec vars;
        const CyclotomicField* field;
    };
    std::shared_ptr<const Data> data_;
};

using Monomial = std::vector<int>;

// Graded-lex order (weighted degree first, then lex in declared variable
// order); "less" puts larger monomials first so maps iterate leading term first.
struct GrlexGreater {
    std::vector<int> weights;
    bool operator()(const Monomial& a, const Monomial& b) const;
};

class MultiPoly {
  public:
    using TermMap = std::map<Monomial, FieldElement, GrlexGreater>;

    explicit MultiPoly(Ring ring);
    static MultiPoly constant(const Ring& ring, const FieldElement& c);
    static MultiPoly constant(const Ring& ring, const Rational& c);
    static MultiPoly variable(const Ring& ring, std::size_t index);
    static MultiPoly variable(const Ring& ring, const std::string& name);
    static MultiPoly monomial(const Ring& ring, const Monomial& exps, const FieldElement& c);
    static MultiPoly zeta(const Ring& ring, long power = 1);

    const Ring& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Coefficient of a monomial (zero if absent).
    FieldElement coeff(const Monomial& m) const;

    bool is_homogeneous() const;
    // Throws InputError on zero or non-homogeneous input.
    int weighted_degree() const;
    // Unweighted total degree of the largest term; -1 for zero.
    int total_degree() const;
    int degree_in(std::size_t var) const;
    bool involves(std::size_t var) const;

    MultiPoly partial_derivative(std::size_t var) const;
    MultiPoly partial_derivative(const std::string& var) const;
    // Ring homomorphism sending variable i to images[i] (all in `target`).
    MultiPoly substitute(const std::vector<MultiPoly>& images, const Ring& target) const;
    // Substitute the named variables, leaving the rest in place.
    MultiPoly substitute(const std::map<std::string, MultiPoly>& assignment) const;
    // Move into a ring whose variables include ours (by name) and whose field
    // contains ours.
    MultiPoly to_ring(const Ring& target) const;
    FieldElement evaluate(const std::vector<FieldElement>& point) const;
    FieldElement evaluate(const std::vector<Rational>& point) const;

    MultiPoly operator-() const;
    MultiPoly& operator+=(const MultiPoly& o);
    MultiPoly& operator-=(const MultiPoly& o);
    MultiPoly& operator*=(const MultiPoly& o);
    MultiPoly& operator*=(const FieldElement& c);
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(MultiPoly a, const FieldElement& c) { return a *= c; }
    friend MultiPoly operator*(const FieldElement& c, MultiPoly a) { return a *= c; }
    MultiPoly pow(unsigned e) const;
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    // Canonical text form; parse_poly(str(), ring()) == *this.
    std::string str() const;

  private:
    void check_ring(const MultiPoly& o) const;
    void add_term(const Monomial& m, const FieldElement& c);
    Ring ring_;
    TermMap terms_;
};

int weighted_degree_of(const Monomial& m, const std::vector<int>& weights);

// Exponent vectors of total degree `deg` in `nvars` variables, largest first
// in graded-lex order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, int deg);

}  // namespace ulrich
