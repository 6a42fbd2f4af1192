#include "equant/catalog.hpp"

#include <stdexcept>

namespace equant {

namespace {

std::vector<CatalogHamiltonian> build_catalog() {
    std::vector<CatalogHamiltonian> out;

    OperatorPolynomial osc = weyl_ordered(0.5, 2, 0);
    osc += weyl_ordered(0.5, 0, 2);
    out.push_back({"oscillator", "(P^2 + Q^2)/2", osc, oscillator_hamiltonian(),
                   [](double, double, double hbar) { return 0.5 * hbar; }});

    out.push_back({"q", "Q", weyl_ordered(1.0, 0, 1),
                   {[](double, double q) { return q; }, [](double, double) { return 0.0; },
                    [](double, double) { return 1.0; }, true},
                   [](double, double, double) { return 0.0; }});

    out.push_back({"p", "P", weyl_ordered(1.0, 1, 0), translation_hamiltonian(),
                   [](double, double, double) { return 0.0; }});

    out.push_back({"free", "P^2/2", weyl_ordered(0.5, 2, 0),
                   {[](double p, double) { return 0.5 * p * p; }, [](double p, double) { return p; },
                    [](double, double) { return 0.0; }, true},
                   [](double, double, double hbar) { return 0.25 * hbar; }});

    out.push_back({"quartic", "Q^4", weyl_ordered(1.0, 0, 4),
                   {[](double, double q) { return q * q * q * q; }, [](double, double) { return 0.0; },
                    [](double, double q) { return 4.0 * q * q * q; }, true},
                   [](double, double q, double hbar) { return 3.0 * hbar * q * q + 0.75 * hbar * hbar; }});
    return out;
}

}  // namespace

const std::vector<CatalogHamiltonian>& hamiltonian_catalog() {
    static const std::vector<CatalogHamiltonian> catalog = build_catalog();
    return catalog;
}

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& h : hamiltonian_catalog()) names.push_back(h.name);
    return names;
}

const CatalogHamiltonian& find_hamiltonian(const std::string& name) {
    for (const auto& h : hamiltonian_catalog())
        if (h.name == name) return h;
    std::string list;
    for (const auto& n : catalog_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown Hamiltonian '" + name + "'; available: " + list);
}

}  // namespace equant
