#pragma once

#include <map>
#include <string>
#include <vector>

#include "projq/linalg.hpp"

namespace projq {

// A point of T*R^J, split into coordinates and momenta.
struct phase_point {
    rvector q;
    rvector p;
};

// Real polynomial on phase space. Keys are exponent multi-indices of length
// 2*dof, momenta first: (e_{p1},...,e_{pJ}, e_{q1},...,e_{qJ}). No
// zero-coefficient terms are stored.
struct phase_polynomial {
    int dof = 0;
    std::map<std::vector<int>, double> terms;

    static phase_polynomial zero(int dof);
    static phase_polynomial constant(int dof, double value);
    static phase_polynomial momentum(int dof, int index); // p_index, 1-based
    static phase_polynomial coordinate(int dof, int index); // q_index, 1-based

    // Same polynomial viewed with more degrees of freedom.
    phase_polynomial promoted(int new_dof) const;

    // Adds coeff * monomial(exponents), merging and pruning zeros.
    void add_term(const std::vector<int>& exponents, double coeff);

    double eval(const phase_point& x) const;
    int degree() const;
    bool is_zero() const { return terms.empty(); }
    std::string str() const;
};

phase_polynomial operator+(const phase_polynomial& a, const phase_polynomial& b);
phase_polynomial operator-(const phase_polynomial& a, const phase_polynomial& b);
phase_polynomial operator*(const phase_polynomial& a, const phase_polynomial& b);
phase_polynomial operator*(double s, const phase_polynomial& a);

// Partial derivatives; index is 1-based like the variable names.
phase_polynomial d_dp(const phase_polynomial& a, int index);
phase_polynomial d_dq(const phase_polynomial& a, int index);

// {f,g} = sum_j df/dq^j dg/dp_j - df/dp_j dg/dq^j, so {q,p} = +1 and
// qdot = {q,H} reproduces Hamilton's equations.
phase_polynomial poisson_bracket(const phase_polynomial& f, const phase_polynomial& g);

// Largest absolute coefficient difference over the union of monomials; the
// exact-equality measure used by structure-constant fits.
double max_coeff_diff(const phase_polynomial& a, const phase_polynomial& b);

// Largest absolute coefficient.
double max_coeff(const phase_polynomial& a);

// Parses sums of '*'-separated terms like "0.5*p1^2 + 0.5*q1^2 - 1.0*q1^4".
// Variables are p<k>/q<k> with k >= 1; exponents are nonnegative integers;
// the Unicode minus sign is accepted alongside '-'. The dof is inferred from
// the highest index (at least 1).
phase_polynomial parse_polynomial(const std::string& text);

} // namespace projq
