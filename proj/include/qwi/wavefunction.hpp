#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "qwi/impedance.hpp"
#include "qwi/potential.hpp"
#include "qwi/spectrum.hpp"

namespace qwi {

struct WavefunctionSamples {
    std::vector<double> xs;
    std::vector<complex> psi;
    double norm = 0.0; // integral of |psi|^2 over [xs.front(), xs.back()]
    std::vector<std::pair<double, complex>> discontinuities; // (x, psi(x+0) / psi(x-0)) at point interactions
    bool normalizable = false;                               // both tails decay
};

/// psi(x) rebuilt from an impedance profile through (hbar / (i m)) psi'/psi = Z.
///
/// Inside each region psi is the closed-form log-cosh antiderivative of
/// Z = z th(gamma x + phi), evaluated from the boundary on the seed side of the
/// fold; point interactions contribute their psi jump factor.
///
/// Bound states (both tails evanescent) are phased so that psi is real and
/// positive on the left tail, and the left tail is the decaying exponential.
/// Scattering states are scaled to a unit incident wave.
class Wavefunction {
public:
    explicit Wavefunction(ImpedanceProfile profile);

    // Boundary coordinates take the requested one-sided limit.
    complex operator()(double x, Side side = Side::right_limit) const;

    const ImpedanceProfile& profile() const noexcept { return profile_; }
    bool normalizable() const noexcept { return bound_; }

private:
    complex log_psi(double x, Side side) const;

    ImpedanceProfile profile_;
    bool bound_ = false;
    complex log_offset_{};
};

std::vector<double> uniform_grid(double x_min, double x_max, std::size_t samples);

// Samples psi on a strictly increasing grid that spans every boundary of the
// profile; throws domain_error otherwise.
WavefunctionSamples reconstruct(const ImpedanceProfile& profile, std::span<const double> grid);

// Scales to unit norm. Throws domain_error for scattering states or a zero/non-finite norm.
WavefunctionSamples normalize(WavefunctionSamples samples);

// Normalized bound-state wavefunction on the grid.
WavefunctionSamples bound_state_wavefunction(const PotentialSpec& spec, const BoundState& state,
                                             std::span<const double> grid);

} // namespace qwi
