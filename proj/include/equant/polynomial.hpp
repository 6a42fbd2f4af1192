#pragma once

// Operator polynomials in non-commuting symbols. A word such as "PQQ" is
// the ordered product P*Q*Q (rightmost factor acts first).

#include "equant/hilbert.hpp"

#include <map>
#include <string>
#include <vector>

namespace equant {

struct Term {
    Complex coeff;
    std::string word;
};

class OperatorPolynomial {
public:
    OperatorPolynomial() = default;
    OperatorPolynomial(std::initializer_list<Term> terms) : terms_(terms) {}

    OperatorPolynomial& add(Complex coeff, std::string word);
    OperatorPolynomial& operator+=(const OperatorPolynomial& other);

    const std::vector<Term>& terms() const { return terms_; }
    int degree() const;

    // Substitutes a matrix for every symbol and sums the ordered products.
    OperatorMatrix evaluate(const std::map<char, OperatorMatrix>& symbols, std::string label = {}) const;

private:
    std::vector<Term> terms_;
};

// Fully symmetrized (Weyl) ordering of coeff * p^p_power * q^q_power: the
// average over all distinct words with that many P and Q letters.
OperatorPolynomial weyl_ordered(double coeff, int p_power, int q_power, char p_symbol = 'P', char q_symbol = 'Q');

}  // namespace equant
