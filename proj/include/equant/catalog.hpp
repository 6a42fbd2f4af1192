#pragma once

// Named Hamiltonians shared by the CLI and the tests: the Weyl-ordered
// operator polynomial, the classical function it quantizes and the exact
// vacuum-fiducial correction <0|H(P+p, Q+q)|0> - H(p, q).

#include "equant/classical.hpp"
#include "equant/polynomial.hpp"

#include <string>
#include <vector>

namespace equant {

struct CatalogHamiltonian {
    std::string name;
    std::string description;
    OperatorPolynomial polynomial;
    ClassicalHamiltonian classical;
    std::function<double(double p, double q, double hbar)> correction;
};

// oscillator, q, p, free, quartic
const std::vector<CatalogHamiltonian>& hamiltonian_catalog();
std::vector<std::string> catalog_names();

// Throws std::invalid_argument listing the catalog when `name` is unknown.
const CatalogHamiltonian& find_hamiltonian(const std::string& name);

}  // namespace equant
