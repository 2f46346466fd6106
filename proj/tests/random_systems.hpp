#pragma once

// Random solved-form systems: each equation is "leader = polynomial in slots
// ranked below the leader", leaders distinct.

#include "prolong/system.hpp"

#include <random>

namespace prolong::testing {

inline SystemSpec random_solved_system(std::mt19937& rng, unsigned max_m = 3, unsigned max_n = 2, unsigned max_height = 3) {
    unsigned m = 1 + rng() % max_m, n = 1 + rng() % max_n;
    Space sp(m, n);
    std::vector<std::string> names{"x", "y"};
    names.resize(n);
    std::uint64_t total = sp.slots_upto(max_height);
    unsigned neq = 1 + rng() % (n + 1);
    std::vector<Poly> polys;
    std::set<Var> leaders;
    for (unsigned e = 0; e < neq; ++e) {
        Var lead = 1 + rng() % (total - 1);
        if (!leaders.insert(lead).second) continue;
        Poly rhs(0u);
        unsigned terms = 1 + rng() % 2;
        for (unsigned k = 0; k < terms; ++k) {
            Monomial mono;
            if (rng() % 4) mono = Monomial::var(rng() % lead, 1);
            if (rng() % 4 == 0) mono = mono * Monomial::var(rng() % lead, 1);
            rhs.add_term(mono, Scalar(1 + static_cast<long>(rng() % 3), 0));
        }
        polys.push_back(Poly::var(lead, 0) - rhs);
    }
    return make_system(m, names, 0, polys);
}

}  // namespace prolong::testing
