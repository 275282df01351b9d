#pragma once

#include <complex>
#include <vector>

#include "qwi/potential.hpp"
#include "qwi/scattering.hpp"
#include "qwi/spectrum.hpp"

// Transfer-matrix reference solver acting on (psi, psi'). It shares no
// propagation code with the impedance engine and exists to cross-check it.
namespace qwi::oracle {

using complex = std::complex<double>;

struct TransferMatrix {
    complex m11{1.0}, m12{}, m21{}, m22{1.0};

    complex determinant() const { return m11 * m22 - m12 * m21; }

    friend TransferMatrix operator*(const TransferMatrix& a, const TransferMatrix& b) {
        return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22, a.m21 * b.m11 + a.m22 * b.m21,
                a.m21 * b.m12 + a.m22 * b.m22};
    }
};

// Free propagation of (psi, psi') over dx >= 0 in a constant potential U.
TransferMatrix region_matrix(double energy, double height, const PhysicalConstants& constants, double dx);

// Matching across s delta + beta delta': (psi, psi')(a+0) = P (psi, psi')(a-0) with
//   P = [[p, 0], [2 m s / (hbar^2 (1 - b^2)), 1 / p]], p = (1 + b) / (1 - b), b = m beta / hbar^2.
TransferMatrix point_matrix(const PointInteraction& point, const PhysicalConstants& constants);

// From the left limit at the first boundary to the right limit at the last one.
TransferMatrix total_matrix(const PotentialSpec& spec, double energy);

ScatteringResult oracle_scatter(const PotentialSpec& spec, double energy, IncidentSide side = IncidentSide::left);

// Shooting on the decaying-tail mismatch, grid uniform in kappa plus bisection.
std::vector<BoundState> oracle_bound_states(const PotentialSpec& spec, double energy_floor, double tolerance,
                                            int grid_points = 2048);

} // namespace qwi::oracle
