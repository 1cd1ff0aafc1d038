#include "ulrich/polyio.hpp"

#include <algorithm>
#include <cctype>
#include <climits>

#include "ulrich/errors.hpp"

namespace ulrich {

namespace {

class Parser {
  public:
    Parser(std::string_view text, const Ring& ring) : s_(text), ring_(ring) {}

    MultiPoly run() {
        skip();
        if (pos_ >= s_.size()) fail("empty expression");
        MultiPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
        return p;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError("parse error at position " + std::to_string(pos_) + ": " + msg);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    MultiPoly expr() {
        bool negate = false;
        if (accept('-'))
            negate = true;
        else
            accept('+');
        MultiPoly acc = term();
        if (negate) acc = -acc;
        while (true) {
            if (accept('+'))
                acc += term();
            else if (accept('-'))
                acc -= term();
            else
                break;
        }
        return acc;
    }

    MultiPoly term() {
        MultiPoly acc = factor();
        while (true) {
            if (accept('*')) {
                acc *= factor();
            } else if (accept('/')) {
                std::size_t at = pos_;
                MultiPoly d = factor();
                if (!d.is_constant() || d.is_zero()) {
                    pos_ = at;
                    fail("division is only allowed by a nonzero constant");
                }
                acc *= d.terms().begin()->second.inverse();
            } else {
                break;
            }
        }
        return acc;
    }

    MultiPoly factor() {
        MultiPoly base = primary();
        if (accept('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("exponent must be a non-negative integer");
            std::string digits(s_.substr(start, pos_ - start));
            if (digits.size() > 6) fail("exponent too large");
            base = base.pow(static_cast<unsigned>(std::stoul(digits)));
        }
        return base;
    }

    MultiPoly primary() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            Integer v(std::string(s_.substr(start, pos_ - start)));
            return MultiPoly::constant(ring_, Rational(v));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
                ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            if (auto idx = ring_.vars().index_of(name)) return MultiPoly::variable(ring_, *idx);
            if (name == "zeta") {
                if (ring_.field_order() == 1) {
                    pos_ = start;
                    fail("`zeta` used over the rationals (D = 1)");
                }
                return MultiPoly::zeta(ring_, 1);
            }
            pos_ = start;
            fail("undeclared variable '" + name + "'");
        }
        fail("unexpected character '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    const Ring& ring_;
    std::size_t pos_ = 0;
};

}  // namespace

MultiPoly parse_poly(std::string_view text, const Ring& ring) { return Parser(text, ring).run(); }

std::vector<std::string> scan_variables(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isalpha(c) || c == '_') {
            std::size_t start = i;
            while (i < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' || text[i] == '\''))
                ++i;
            std::string name(text.substr(start, i - start));
            if (name != "zeta" && std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
        } else if (std::isdigit(c)) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        } else {
            ++i;
        }
    }
    return out;
}

nlohmann::json rational_to_json(const Rational& q) {
    auto part = [](const Integer& z) -> nlohmann::json {
        if (z.fits_slong_p() && sizeof(long) >= 8) return static_cast<long long>(z.get_si());
        return z.get_str();
    };
    return nlohmann::json::array({part(q.get_num()), part(q.get_den())});
}

Rational rational_from_json(const nlohmann::json& j) {
    auto part = [](const nlohmann::json& v) -> Integer {
        if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
        if (v.is_string()) {
            try {
                return Integer(v.get<std::string>());
            } catch (const std::exception&) {
                throw InputError("malformed integer string in coefficient");
            }
        }
        throw InputError("coefficient parts must be integers or integer strings");
    };
    if (!j.is_array() || j.size() != 2) throw InputError("rational must be a [num, den] pair");
    Integer den = part(j[1]);
    if (den == 0) throw InputError("zero denominator");
    Rational q(part(j[0]), den);
    q.canonicalize();
    return q;
}

nlohmann::json poly_to_json(const MultiPoly& p) {
    nlohmann::json j;
    j["vars"] = p.ring().vars().names;
    j["weights"] = p.ring().vars().weights;
    j["D"] = p.ring().field_order();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : p.terms()) {
        nlohmann::json coeff = nlohmann::json::array();
        for (const auto& q : c.coeffs()) coeff.push_back(rational_to_json(q));
        terms.push_back({{"exp", m}, {"coeff", coeff}});
    }
    j["terms"] = terms;
    return j;
}

MultiPoly poly_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("polynomial JSON must be an object");
    for (const char* key : {"vars", "weights", "D", "terms"})
        if (!j.contains(key)) throw InputError(std::string("polynomial JSON lacks \"") + key + "\"");
    try {
        VarSpec vs;
        vs.names = j.at("vars").get<std::vector<std::string>>();
        vs.weights = j.at("weights").get<std::vector<int>>();
        int D = j.at("D").get<int>();
        if (D < 1) throw InputError("D must be positive");
        Ring ring(vs, static_cast<unsigned>(D));
        MultiPoly p(ring);
        const auto& terms = j.at("terms");
        if (!terms.is_array()) throw InputError("\"terms\" must be an array");
        for (const auto& t : terms) {
            auto exps = t.at("exp").get<std::vector<int>>();
            if (exps.size() != ring.nvars()) throw InputError("exponent vector has wrong length");
            for (int e : exps)
                if (e < 0) throw InputError("negative exponent");
            const auto& cj = t.at("coeff");
            if (!cj.is_array() || cj.size() != ring.field().degree())
                throw InputError("coefficient vector length must equal the field degree");
            std::vector<Rational> cs;
            for (const auto& q : cj) cs.push_back(rational_from_json(q));
            p += MultiPoly::monomial(ring, exps, FieldElement(ring.field(), cs));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed polynomial JSON: ") + e.what());
    }
}

}  // namespace ulrich
