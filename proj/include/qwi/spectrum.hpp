#pragma once

#include <optional>
#include <vector>

#include "qwi/impedance.hpp"
#include "qwi/potential.hpp"

namespace qwi {

// D(E) = Z(x_0 - 0) + z_left, with Z folded leftward from the decaying seed
// +z_right. Zeros of D are bound-state energies.
struct DispersionSample {
    double energy = 0.0;
    complex mismatch{};
    int node_count = 0; // zeros of the right-decaying solution on [x_0, +inf)
    bool pole = false;  // psi(x_0) = 0, mismatch is infinite
};

struct BoundState {
    double energy = 0.0;
    double kappa_left = 0.0;
    double kappa_right = 0.0;
    int label = 0; // 0 = ground state
};

// Throws domain_error unless E lies below both asymptotes.
DispersionSample dispersion(const PotentialSpec& spec, double energy);

// Number of bound states strictly below E (oscillation count of the
// right-decaying solution over the whole line).
int count_states_below(const PotentialSpec& spec, double energy);

// Conservative lower bound on the spectrum.
double default_energy_floor(const PotentialSpec& spec);

inline constexpr int default_grid_points = 512;

/// Bound states below min(U_left, U_right), sorted by energy.
///
/// Im D(E) is scanned on a grid uniform in kappa between the floor and the
/// threshold; roots show up as +/- sign changes (poles flip the other way) and
/// are bisected to |dE| <= tol (default 1e-12 * max(1, |E|) at each root).
/// The oscillation count cross-checks the number
/// of roots. States within 1e-14 of the threshold are dropped.
std::vector<BoundState> find_bound_states(const PotentialSpec& spec, std::optional<double> energy_floor = {},
                                          int grid_points = default_grid_points,
                                          std::optional<double> tolerance = {});

// -m alpha^2 / (2 hbar^2) for the well -alpha delta(x), alpha > 0.
double closed_form_single_well(double alpha, const PhysicalConstants& constants);

// Bound state of -alpha delta(x) + beta delta'(x):
// E = -hbar^2 at^2 / (8 m (1 + bt^2)^2), at = 2 m alpha / hbar^2, bt = m beta / hbar^2.
// Empty when alpha <= 0.
std::optional<double> closed_form_delta_delta_prime_bound(double alpha, double beta,
                                                          const PhysicalConstants& constants);

struct DoubleWellLevels {
    double symmetric = 0.0;
    std::optional<double> antisymmetric; // absent when 2 a m alpha / hbar^2 <= 1
};

// Wells -alpha (delta(x - a) + delta(x + a)): bisection on
// hbar^2 kappa / (m alpha) = 1 +- exp(-2 kappa a).
DoubleWellLevels closed_form_double_well(double alpha, double a, const PhysicalConstants& constants,
                                         double tolerance = 1e-13);

} // namespace qwi
