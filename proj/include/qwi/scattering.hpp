#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qwi/impedance.hpp"
#include "qwi/potential.hpp"

namespace qwi {

enum class IncidentSide { left, right };

/// Amplitudes for a unit plane wave. For left incidence the wavefunction is
/// exp(i k_L x) + r exp(-i k_L x) on the far left and t exp(i k_R x) on the
/// far right (global coordinates); right incidence is the mirror image. When
/// the far side is evanescent k_out = i kappa_out and T = 0.
struct ScatteringResult {
    complex r{};
    complex t{};
    double R = 0.0;
    double T = 0.0;
    double unitarity_defect = 0.0; // R + T - 1
    IncidentSide incident_side = IncidentSide::left;
};

// Z at the first boundary met by the incident wave (left limit of x_0 for
// left incidence, right limit of x_{N-1} for right incidence).
// Throws domain_error when the incident side has no propagating channel.
ImpedanceState input_impedance(const PotentialSpec& spec, double energy, IncidentSide side);

// r = (z - Z) / (z + Z). Throws domain_error for Z = -z or a non-positive z.
complex reflection_from_impedance(complex input, complex incident_impedance);

ScatteringResult solve(const PotentialSpec& spec, double energy, IncidentSide side = IncidentSide::left);

// log of the factor that rescales a scattering profile's amplitudes to a
// unit incident wave (the profile is seeded with amplitude 1 on the far side).
complex log_incident_scale(const ImpedanceProfile& profile);

// Exact amplitudes for strength * delta(x) at the origin, E > 0.
ScatteringResult closed_form_single_delta(double strength, double energy, const PhysicalConstants& constants);

// Exact amplitudes for strength * delta(x) + beta * delta'(x) at the origin, E > 0.
ScatteringResult closed_form_delta_delta_prime(double strength, double beta, double energy,
                                               const PhysicalConstants& constants);

struct SweepRow {
    double energy = 0.0;
    ScatteringResult result;
};

// Uniform grid from e_min to e_max inclusive (a single row at e_min when
// steps == 1). Rows are independent; `threads` workers (0 = auto) never change the output.
std::vector<SweepRow> sweep(const PotentialSpec& spec, double e_min, double e_max, std::size_t steps,
                            IncidentSide side = IncidentSide::left, unsigned threads = 1);

// Interior local maxima of T along a sweep.
std::vector<std::size_t> transmission_peaks(std::span<const SweepRow> rows);

// ||(r, t)_a - (r, t)_b|| / ||(r, t)_b||.
double relative_deviation(const ScatteringResult& a, const ScatteringResult& b);

} // namespace qwi
