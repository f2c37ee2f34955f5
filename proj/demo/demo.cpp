// Walkthrough of the library: approximate GF(1) by a safety automaton that
// is precise on short lassos, then check the result.

#include <iostream>

#include "lasso/lasso.hpp"

int main() {
    using namespace lasso;

    const ParityAutomaton gf = families::gf_one();
    const MembershipOracle phi(gf.alphabet(), [gf](const Lasso& w) { return accepts_lasso(gf, w); });

    for (std::size_t n = 1; n <= 4; ++n) {
        const ParityAutomaton safe = buechi_to_safety(gf, n);
        const PrecisionReport r = check_lasso_precise(safe, phi, n, n + 3);
        std::cout << "n=" << n << "  states=" << safe.size() << "  " << automaton_type(safe)
                  << "  precise=" << (r.passed() ? "yes" : "no") << "\n";
    }

    // The stronger the bound, the more lassos the approximation keeps.
    const ParityAutomaton safe2 = buechi_to_safety(gf, 2);
    for (const auto& [stem, loop] : {std::pair{"", "1"}, {"0", "1"}, {"", "01"}, {"", "001"}}) {
        const Lasso w = parse_lasso(gf.alphabet(), stem, loop);
        std::cout << format_lasso(gf.alphabet(), w) << ": GF(1)=" << accepts_lasso(gf, w)
                  << " approximation=" << accepts_lasso(safe2, w) << "\n";
    }

    std::cout << "\n" << hoa::write(safe2, "gf1-safety-2");
}
