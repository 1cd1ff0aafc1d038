#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ulrich/matfac.hpp"

namespace ulrich {

// Degree-k monomials in n+1 variables, graded-lex order.
std::vector<Monomial> monomial_basis(int n, int k);

struct VeroneseChart {
    int n = 0, k = 0;
    std::vector<Monomial> basis;
    std::size_t N = 0;  // N + 1 = basis.size()
    Ring base;          // x-variables
    Ring zring;         // one variable per basis monomial

    // k = 1 keeps the base variable names; otherwise z1 .. z{N+1}.
    static VeroneseChart make(const Ring& base, int k);
    std::size_t index_of(const Monomial& m) const;
    // The map z_alpha -> x^alpha.
    std::vector<MultiPoly> substitution() const;
};

struct MonomialSplit {
    Monomial monomial;
    std::vector<std::size_t> parts;  // basis indices, d of them
};

struct RewriteCertificate {
    MultiPoly g;
    MultiPoly gprime;
    unsigned d;
    std::vector<MonomialSplit> splitting;
};

RewriteCertificate veronese_rewrite(const MultiPoly& g, const VeroneseChart& chart, unsigned d);
bool verify_rewrite(const RewriteCertificate& cert, const VeroneseChart& chart);

// One product per term of gprime; the coefficient sits on the first form.
std::vector<Summand> sum_of_products_presentation(const MultiPoly& gprime, unsigned d);

struct CoverBuild {
    VeroneseChart chart;
    RewriteCertificate certificate;
    std::vector<Summand> products;  // after square pairing when d = 2
    MatrixRoot root;                // root of g'
    MatrixFactorization mf;         // of t^d - g'
    std::size_t s;                  // number of summands of g'
    std::size_t bound_size;  // d^s, with t^d read as one extra summand
    std::size_t achieved_size;
    std::vector<std::string> stages;
};

// Rewrite, present as a sum of products, take a matrix root and split off
// t^d. Throws MathFailure when the root would exceed `max_size`.
CoverBuild build_cover_mf(int n, int k, unsigned d, const MultiPoly& g, std::size_t max_size = 128);

nlohmann::json cover_report_json(const CoverBuild& b);

}  // namespace ulrich
