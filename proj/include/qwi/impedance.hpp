#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qwi/potential.hpp"

namespace qwi {

using complex = std::complex<double>;

enum class Side { left_limit, right_limit };
enum class Direction { leftward, rightward };

// Quantum wave impedance Z = (hbar / (i m)) psi'/psi at a point. A zero of
// psi (Z = infinity) is carried by the node flag, never by an infinite value.
struct ImpedanceState {
    complex value{};
    double position = 0.0;
    Side side = Side::left_limit;
    bool node = false;
};

// Constant-potential region at a given energy.
//   z     = sqrt(2 (E - U) / m), Im z >= 0
//   gamma = i m z / hbar  (i k when propagating, -kappa when evanescent)
struct RegionWave {
    complex characteristic_impedance{};
    complex propagation_constant{};
    double kappa = 0.0;       // sqrt(2 m (U - E)) / hbar when E < U, else 0
    double wave_number = 0.0; // sqrt(2 m (E - U)) / hbar when E > U, else 0
    double mass_over_hbar = 1.0;

    bool propagating() const noexcept { return wave_number > 0.0; }
    bool evanescent() const noexcept { return kappa > 0.0; }
    bool degenerate() const noexcept { return !propagating() && !evanescent(); }
};

RegionWave characteristic(double energy, double height, const PhysicalConstants& constants);

// One propagation step together with the growth of the wave amplitude.
// The amplitude is psi, or psi' when the corresponding state is a node.
struct PropagationStep {
    ImpedanceState state;
    complex log_ratio{}; // log(amplitude_far / amplitude_near)
};

// |gamma dx| below which sinh(w)/w is replaced by its Taylor series.
inline constexpr double taylor_threshold = 1e-6;

PropagationStep propagate(const ImpedanceState& near, const RegionWave& region, double dx, Direction direction);

// Z at the left edge of a region of width dx, given Z at its right edge.
ImpedanceState propagate_left(const ImpedanceState& at_right, const RegionWave& region, double dx);
// Z at the right edge of a region of width dx, given Z at its left edge.
ImpedanceState propagate_right(const ImpedanceState& at_left, const RegionWave& region, double dx);

// Right limit of Z across strength * delta(x - a): Z(a+0) = Z(a-0) - 2 i strength / hbar.
complex jump_delta(complex left_limit, double strength, const PhysicalConstants& constants);

// Right limit of Z across delta_strength * delta + beta * delta' with
// b = m beta / hbar^2:
//   Z(a+0) = ((1 - b)^2 Z(a-0) - 2 i delta_strength / hbar) / (1 + b)^2
// Throws domain_error when |1 -+ b| < 1e-12.
complex jump_delta_prime(complex left_limit, double delta_strength, double beta, const PhysicalConstants& constants);

// Reduced delta-prime strength m beta / hbar^2.
double reduced_beta(double beta, const PhysicalConstants& constants) noexcept;

// psi(a+0) / psi(a-0) = (1 + b) / (1 - b).
double psi_jump_ratio(double beta, const PhysicalConstants& constants);

// Crossing a point interaction in either direction; the reversed direction
// applies the forward rule with negated strengths.
PropagationStep cross_point(const ImpedanceState& near, const PointInteraction& point,
                            const PhysicalConstants& constants, Direction direction);

/// Impedance profile of a whole potential at one energy, obtained by folding
/// propagation and jump rules from a matched (outgoing or decaying) seed.
///
/// A leftward fold is seeded with Z = +z at the right tail; a rightward fold
/// with Z = -z at the left tail. The log-amplitudes are relative to the seed
/// boundary, where the amplitude is 1.
struct ImpedanceProfile {
    PhysicalConstants constants;
    double energy = 0.0;
    Direction sweep = Direction::leftward;
    std::vector<double> boundaries;
    std::vector<RegionWave> waves; // one per region, boundaries.size() + 1
    std::vector<ImpedanceState> left_limits;
    std::vector<ImpedanceState> right_limits;
    std::vector<complex> log_amplitude_left;
    std::vector<complex> log_amplitude_right;

    // Value on the far tail where the seed was placed.
    complex seed() const noexcept;
    // Z(x) with the requested one-sided limit at boundaries; evaluated by
    // propagating from the nearest boundary on the seed side.
    ImpedanceState at(double x, Side side = Side::right_limit) const;
};

ImpedanceProfile fold_impedance(const PotentialSpec& spec, double energy, Direction sweep);

} // namespace qwi
