// Gabidulin vs twisted Gabidulin at q=3, m=4: weight distributions and automorphisms.
#include <iostream>

#include "rmlkit/rmlkit.hpp"

using namespace rmlkit;

int main() {
    auto t = FieldTower::for_q(3, 4);
    const PolyCode G = gabidulin(t, 2, 1);
    std::cout << "Gabidulin [4,2] over F_81, basis:\n";
    for (const auto& f : G.generators()) std::cout << "  " << QPolynomial(t, f.coeffs()).to_string() << "\n";
    const RankMetricCode GV = G.to_vector_code();
    std::cout << "d = " << GV.min_distance() << ", MRD: " << (is_mrd(GV) ? "yes" : "no") << "\n"
              << GV.weight_distribution_csv();

    Code delta = 1;
    while (t->rel_norm(delta) == 1) ++delta;
    const PolyCode T = twisted_gabidulin(t, 2, 1, delta, TwistVariant::cz_form);
    const RankMetricCode TV = T.to_vector_code();
    std::cout << "\ntwisted, delta = " << delta << ":\n";
    for (const auto& f : T.generators()) std::cout << "  " << QPolynomial(t, f.coeffs()).to_string() << "\n";
    std::cout << "d = " << TV.min_distance() << ", idealizer dimension " << idealizer_dimension(TV)
              << " (Gabidulin: " << idealizer_dimension(GV) << ")\n"
              << "monomial automorphisms: " << linear_automorphism_count(T, AutMode::monomial) << "\n";

    try {
        twisted_gabidulin(t, 2, 1, 1, TwistVariant::cz_form);
    } catch (const InvalidDelta& e) {
        std::cout << "delta = 1 refused: " << e.what() << "\n";
    }
}
