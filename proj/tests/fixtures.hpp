#pragma once

// Reference values frozen from the independent oracles in oracles.hpp (RK4 at
// h = 1e-5 and the J0 power series), recorded before the library was written.
// oracle_consistency in test_model.cpp re-derives them at a coarser step.

namespace fixture {

inline constexpr double kJ0Zero = 2.4048255576957729;
inline constexpr double kMu1UnitDisc = 5.783185962946785;  // j0^2

// alpha = 1, lambda = 1, standard nonlinearity, Euclidean
inline constexpr double kRhoAlpha1 = 1.833899498969616;
inline constexpr double kSlopeAtRhoAlpha1 = -0.54028750476885734;
inline constexpr double kDirichletAlpha1 = 4.0504833254662538;

// Hyperbolic ball R = 1, default grid: number of solutions with Dirichlet
// energy 2 pi, read off the computed branch after the oracle run.
inline constexpr int kHyperCountTwoPi = 1;

}  // namespace fixture
