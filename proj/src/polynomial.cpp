#include "equant/polynomial.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <stdexcept>

namespace equant {

OperatorPolynomial& OperatorPolynomial::add(Complex coeff, std::string word) {
    terms_.push_back({coeff, std::move(word)});
    return *this;
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

int OperatorPolynomial::degree() const {
    std::size_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.word.size());
    return static_cast<int>(d);
}

OperatorMatrix OperatorPolynomial::evaluate(const std::map<char, OperatorMatrix>& symbols, std::string label) const {
    if (symbols.empty()) throw std::invalid_argument("OperatorPolynomial::evaluate: no symbols bound");
    // Every operator built here is banded, so products go through sparse storage.
    using Sparse = Eigen::SparseMatrix<Complex>;
    const Representation& rep = symbols.begin()->second.rep;
    const Index n = rep.size();
    std::map<char, Sparse> sparse;
    for (const auto& [c, op] : symbols) {
        if (!(op.rep == rep)) throw std::invalid_argument("OperatorPolynomial::evaluate: mixed representations");
        sparse.emplace(c, op.entries.sparseView(Complex(0.0), 0.0));
    }
    Sparse sum(n, n);
    for (const auto& term : terms_) {
        Sparse product(n, n);
        product.setIdentity();
        for (char c : term.word) {
            const auto it = sparse.find(c);
            if (it == sparse.end()) throw std::invalid_argument(std::string("unbound operator symbol '") + c + "'");
            product = (product * it->second).pruned();
        }
        sum += term.coeff * product;
    }
    return {rep, Matrix(sum), std::move(label)};
}

OperatorPolynomial weyl_ordered(double coeff, int p_power, int q_power, char p_symbol, char q_symbol) {
    if (p_power < 0 || q_power < 0) throw std::invalid_argument("weyl_ordered: negative power");
    std::string word = std::string(static_cast<std::size_t>(p_power), p_symbol) +
                       std::string(static_cast<std::size_t>(q_power), q_symbol);
    std::sort(word.begin(), word.end());
    std::vector<std::string> words;
    do {
        words.push_back(word);
    } while (std::next_permutation(word.begin(), word.end()));
    OperatorPolynomial poly;
    const double share = coeff / static_cast<double>(words.size());
    for (auto& w : words) poly.add(share, std::move(w));
    return poly;
}

}  // namespace equant
