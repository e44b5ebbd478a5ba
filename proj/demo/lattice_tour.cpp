// Whitney numbers of L_i(n, m; q) for a few small parameter sets, with the recursion cross-check.
#include <iostream>

#include "rmlkit/rmlkit.hpp"

using namespace rmlkit;

int main() {
    for (const LatticeParams p : {LatticeParams{1, 3, 2, 2}, LatticeParams{1, 4, 3, 2}, LatticeParams{2, 4, 3, 2}}) {
        RankMetricLattice L = build_lattice(p);
        const WhitneyVector w = mobius_and_whitney(L);
        std::cout << p.label() << ": " << L.element_count() << " elements\n"
                  << "  first kind  " << w.to_json()["first_kind"].dump() << "\n"
                  << "  second kind " << w.to_json()["second_kind"].dump() << "\n";
        VerifyOptions vo;
        vo.closed_formula = false;
        for (unsigned j = 1; j <= p.n; ++j) {
            const VerificationRecord rec = verify_whitney(L, j, vo);
            if (rec.recursion) std::cout << "  j=" << j << " recursion " << *rec.recursion << " brute force " << rec.brute_force << "\n";
        }
    }
}
