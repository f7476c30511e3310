#include "projq/poly.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "projq/errors.hpp"

namespace projq {

namespace {

std::vector<int> promoted_key(const std::vector<int>& key, int old_dof, int new_dof) {
    std::vector<int> out(static_cast<std::size_t>(2 * new_dof), 0);
    for (int j = 0; j < old_dof; ++j) {
        out[static_cast<std::size_t>(j)] = key[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(new_dof + j)] = key[static_cast<std::size_t>(old_dof + j)];
    }
    return out;
}

int common_dof(const phase_polynomial& a, const phase_polynomial& b) {
    return a.dof > b.dof ? a.dof : b.dof;
}

} // namespace

phase_polynomial phase_polynomial::zero(int dof) {
    if (dof < 0) throw input_error("phase_polynomial: dof must be nonnegative");
    phase_polynomial out;
    out.dof = dof;
    return out;
}

phase_polynomial phase_polynomial::constant(int dof, double value) {
    phase_polynomial out = zero(dof);
    out.add_term(std::vector<int>(static_cast<std::size_t>(2 * dof), 0), value);
    return out;
}

phase_polynomial phase_polynomial::momentum(int dof, int index) {
    if (index < 1 || index > dof)
        throw input_error("phase_polynomial: momentum index out of range");
    phase_polynomial out = zero(dof);
    std::vector<int> key(static_cast<std::size_t>(2 * dof), 0);
    key[static_cast<std::size_t>(index - 1)] = 1;
    out.add_term(key, 1.0);
    return out;
}

phase_polynomial phase_polynomial::coordinate(int dof, int index) {
    if (index < 1 || index > dof)
        throw input_error("phase_polynomial: coordinate index out of range");
    phase_polynomial out = zero(dof);
    std::vector<int> key(static_cast<std::size_t>(2 * dof), 0);
    key[static_cast<std::size_t>(dof + index - 1)] = 1;
    out.add_term(key, 1.0);
    return out;
}

phase_polynomial phase_polynomial::promoted(int new_dof) const {
    if (new_dof < dof) throw input_error("phase_polynomial: cannot demote dof");
    if (new_dof == dof) return *this;
    phase_polynomial out = zero(new_dof);
    for (const auto& [key, coeff] : terms)
        out.terms.emplace(promoted_key(key, dof, new_dof), coeff);
    return out;
}

void phase_polynomial::add_term(const std::vector<int>& exponents, double coeff) {
    if (exponents.size() != static_cast<std::size_t>(2 * dof))
        throw input_error("phase_polynomial: exponent key has wrong length");
    auto it = terms.find(exponents);
    if (it == terms.end()) {
        if (coeff != 0.0) terms.emplace(exponents, coeff);
        return;
    }
    it->second += coeff;
    if (it->second == 0.0) terms.erase(it);
}

double phase_polynomial::eval(const phase_point& x) const {
    if (x.p.size() < dof || x.q.size() < dof)
        throw input_error("phase_polynomial: point has too few degrees of freedom");
    double total = 0.0;
    for (const auto& [key, coeff] : terms) {
        double m = coeff;
        for (int j = 0; j < dof; ++j) {
            for (int e = 0; e < key[static_cast<std::size_t>(j)]; ++e) m *= x.p(j);
            for (int e = 0; e < key[static_cast<std::size_t>(dof + j)]; ++e) m *= x.q(j);
        }
        total += m;
    }
    return total;
}

int phase_polynomial::degree() const {
    int deg = 0;
    for (const auto& [key, coeff] : terms) {
        int d = 0;
        for (int e : key) d += e;
        if (d > deg) deg = d;
    }
    return deg;
}

std::string phase_polynomial::str() const {
    if (terms.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, coeff] : terms) {
        const double mag = std::abs(coeff);
        if (first) {
            if (coeff < 0.0) out << "-";
            first = false;
        } else {
            out << (coeff < 0.0 ? " - " : " + ");
        }
        std::string factors;
        for (int j = 0; j < 2 * dof; ++j) {
            const int e = key[static_cast<std::size_t>(j)];
            if (e == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += (j < dof) ? "p" : "q";
            factors += std::to_string(j < dof ? j + 1 : j - dof + 1);
            if (e > 1) factors += "^" + std::to_string(e);
        }
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.12g", mag);
        if (factors.empty())
            out << buf;
        else if (mag == 1.0)
            out << factors;
        else
            out << buf << "*" << factors;
    }
    return out.str();
}

phase_polynomial operator+(const phase_polynomial& a, const phase_polynomial& b) {
    const int dof = common_dof(a, b);
    phase_polynomial out = a.promoted(dof);
    const phase_polynomial bb = b.promoted(dof);
    for (const auto& [key, coeff] : bb.terms) out.add_term(key, coeff);
    return out;
}

phase_polynomial operator-(const phase_polynomial& a, const phase_polynomial& b) {
    return a + (-1.0 * b);
}

phase_polynomial operator*(const phase_polynomial& a, const phase_polynomial& b) {
    const int dof = common_dof(a, b);
    const phase_polynomial aa = a.promoted(dof);
    const phase_polynomial bb = b.promoted(dof);
    phase_polynomial out = phase_polynomial::zero(dof);
    std::vector<int> key(static_cast<std::size_t>(2 * dof));
    for (const auto& [ka, ca] : aa.terms)
        for (const auto& [kb, cb] : bb.terms) {
            for (std::size_t i = 0; i < key.size(); ++i) key[i] = ka[i] + kb[i];
            out.add_term(key, ca * cb);
        }
    return out;
}

phase_polynomial operator*(double s, const phase_polynomial& a) {
    phase_polynomial out = phase_polynomial::zero(a.dof);
    if (s == 0.0) return out;
    for (const auto& [key, coeff] : a.terms) out.terms.emplace(key, s * coeff);
    return out;
}

namespace {

phase_polynomial partial(const phase_polynomial& a, int slot) {
    phase_polynomial out = phase_polynomial::zero(a.dof);
    std::vector<int> key;
    for (const auto& [k, coeff] : a.terms) {
        const int e = k[static_cast<std::size_t>(slot)];
        if (e == 0) continue;
        key = k;
        key[static_cast<std::size_t>(slot)] = e - 1;
        out.add_term(key, coeff * e);
    }
    return out;
}

} // namespace

phase_polynomial d_dp(const phase_polynomial& a, int index) {
    if (index < 1 || index > a.dof) throw input_error("d_dp: index out of range");
    return partial(a, index - 1);
}

phase_polynomial d_dq(const phase_polynomial& a, int index) {
    if (index < 1 || index > a.dof) throw input_error("d_dq: index out of range");
    return partial(a, a.dof + index - 1);
}

phase_polynomial poisson_bracket(const phase_polynomial& f, const phase_polynomial& g) {
    const int dof = common_dof(f, g);
    const phase_polynomial ff = f.promoted(dof);
    const phase_polynomial gg = g.promoted(dof);
    phase_polynomial out = phase_polynomial::zero(dof);
    for (int j = 1; j <= dof; ++j)
        out = out + d_dq(ff, j) * d_dp(gg, j) - d_dp(ff, j) * d_dq(gg, j);
    return out;
}

double max_coeff_diff(const phase_polynomial& a, const phase_polynomial& b) {
    const phase_polynomial diff = a - b;
    double m = 0.0;
    for (const auto& [key, coeff] : diff.terms) m = std::max(m, std::abs(coeff));
    return m;
}

double max_coeff(const phase_polynomial& a) {
    double m = 0.0;
    for (const auto& [key, coeff] : a.terms) m = std::max(m, std::abs(coeff));
    return m;
}

namespace {

struct scanner {
    std::string text;
    std::size_t pos = 0;

    explicit scanner(const std::string& raw) {
        // Normalize the Unicode minus sign (U+2212) to '-'.
        for (std::size_t i = 0; i < raw.size();) {
            if (i + 2 < raw.size() && static_cast<unsigned char>(raw[i]) == 0xE2 &&
                static_cast<unsigned char>(raw[i + 1]) == 0x88 &&
                static_cast<unsigned char>(raw[i + 2]) == 0x92) {
                text += '-';
                i += 3;
            } else {
                text += raw[i++];
            }
        }
    }

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool done() {
        skip_space();
        return pos >= text.size();
    }
    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    double number() {
        skip_space();
        const char* start = text.c_str() + pos;
        char* end = nullptr;
        const double value = std::strtod(start, &end);
        if (end == start)
            throw parse_error("polynomial: expected a number at '" +
                              text.substr(pos, 12) + "'");
        pos += static_cast<std::size_t>(end - start);
        return value;
    }

    int unsigned_int() {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start)
            throw parse_error("polynomial: expected an integer at '" +
                              text.substr(start, 12) + "'");
        return std::atoi(text.substr(start, pos - start).c_str());
    }
};

struct raw_term {
    double coeff = 1.0;
    std::map<std::pair<char, int>, int> powers; // (variable, 1-based index) -> exponent
};

} // namespace

phase_polynomial parse_polynomial(const std::string& text) {
    scanner in(text);
    std::vector<raw_term> parsed;
    int max_index = 0;

    bool expect_term = true;
    double pending_sign = 1.0;
    while (!in.done()) {
        if (!expect_term) {
            if (in.accept('+')) {
                pending_sign = 1.0;
            } else if (in.accept('-')) {
                pending_sign = -1.0;
            } else {
                throw parse_error("polynomial: expected '+' or '-' at '" +
                                  in.text.substr(in.pos, 12) + "'");
            }
            expect_term = true;
            continue;
        }
        if (in.accept('-')) pending_sign = -pending_sign;
        else if (in.accept('+')) { /* explicit leading plus */ }

        raw_term term;
        term.coeff = pending_sign;
        pending_sign = 1.0;
        bool more_factors = true;
        while (more_factors) {
            const char c = in.peek();
            if (c == 'p' || c == 'q') {
                ++in.pos;
                const int index = in.unsigned_int();
                if (index < 1) throw parse_error("polynomial: variable index must be >= 1");
                int exponent = 1;
                if (in.accept('^')) exponent = in.unsigned_int();
                if (exponent < 0) throw parse_error("polynomial: exponent must be >= 0");
                term.powers[{c, index}] += exponent;
                if (index > max_index) max_index = index;
            } else {
                term.coeff *= in.number();
            }
            more_factors = in.accept('*');
        }
        parsed.push_back(std::move(term));
        expect_term = false;
    }
    if (parsed.empty()) throw parse_error("polynomial: empty input");
    if (expect_term) throw parse_error("polynomial: dangling operator");

    const int dof = max_index > 0 ? max_index : 1;
    phase_polynomial out = phase_polynomial::zero(dof);
    std::vector<int> key(static_cast<std::size_t>(2 * dof));
    for (const raw_term& term : parsed) {
        std::fill(key.begin(), key.end(), 0);
        for (const auto& [var, exponent] : term.powers) {
            const int slot = (var.first == 'p') ? var.second - 1 : dof + var.second - 1;
            key[static_cast<std::size_t>(slot)] += exponent;
        }
        out.add_term(key, term.coeff);
    }
    return out;
}

} // namespace projq
