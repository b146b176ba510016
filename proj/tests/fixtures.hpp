// Shared test potentials.

#ifndef METASTABLE_TESTS_FIXTURES_HPP
#define METASTABLE_TESTS_FIXTURES_HPP

#include <vector>

#include "metastable/potential.hpp"

namespace fixtures {

/// Degree-6 polynomial with three wells near F = {0, 0.30, 0.55} and
/// barriers near {1.05, 1.00}: generic, well separated time scales.
inline std::vector<metastable::Monomial> triple_well_terms() {
    return {
        {0.3549350639582569, {0}},  {-0.7309200744233348, {1}}, {2.2740761414936266, {2}},
        {1.4457166322909847, {3}},  {-2.5582439319985344, {4}}, {-0.5086478139350266, {5}},
        {0.7139181118825518, {6}},
    };
}

inline metastable::Potential triple_well() {
    return metastable::make_polynomial_potential(1, triple_well_terms(),
                                                 metastable::Box{{-2.1}, {2.2}});
}

/// Shallow tilted double well used for the Monte Carlo experiments:
/// barrier ~0.32 from the shallow side keeps transitions cheap to sample.
inline metastable::Potential mc_tilted_well() {
    return metastable::make_tilted_double_well({{"a", 0.5}, {"b", 0.2}});
}

} // namespace fixtures

#endif
