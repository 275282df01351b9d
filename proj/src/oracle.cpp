#include "qwi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qwi::oracle {

namespace {

// i k for E > U (k > 0), -kappa for E < U, 0 at E = U.
complex exponent_rate(double energy, double height, const PhysicalConstants& c) {
    const double k2 = 2.0 * c.mass * (energy - height) / (c.hbar * c.hbar);
    if (k2 > 0.0)
        return {0.0, std::sqrt(k2)};
    return {-std::sqrt(-k2), 0.0};
}

// Carries a real (psi, psi') across the whole potential below threshold,
// starting from (1, kappa_left) at the first boundary. The vector is rescaled
// by positive factors as it goes, so only its direction is meaningful; wide
// evanescent regions use cosh/sinh with the common exp(kappa dx) removed.
// Zeros of the shot solution inside (0, dx] of one region, given its start values.
int region_zeros(double k2, double dx, double psi0, double dpsi0, double psi1) {
    if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double theta = std::atan2(psi0, dpsi0 / k);
        return static_cast<int>(std::floor((theta + k * dx) / std::numbers::pi) -
                                std::floor(theta / std::numbers::pi));
    }
    // At most one zero without oscillation.
    return (psi1 == 0.0 || (psi0 != 0.0 && std::signbit(psi0) != std::signbit(psi1))) ? 1 : 0;
}

// Real (psi, psi') carried from the first to the last boundary, rescaled as it goes.
// When zeros is given it accumulates the sign changes of psi on the way.
void shoot(const PotentialSpec& spec, double energy, double& psi, double& dpsi, int* zeros = nullptr) {
    const auto& c = spec.constants();
    const std::size_t n = spec.boundary_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const auto& region = spec.regions()[i];
            const double dx = region.right - region.left;
            const double k2 = 2.0 * c.mass * (energy - region.height) / (c.hbar * c.hbar);
            const double psi0 = psi;
            const double dpsi0 = dpsi;
            if (k2 < 0.0 && std::sqrt(-k2) * dx > 20.0) {
                const double kappa = std::sqrt(-k2);
                const double decay = std::exp(-2.0 * kappa * dx);
                const double ch = 0.5 * (1.0 + decay);
                const double sh = 0.5 * (1.0 - decay);
                const double p = ch * psi + sh / kappa * dpsi;
                dpsi = kappa * sh * psi + ch * dpsi;
                psi = p;
            } else {
                const auto m = region_matrix(energy, region.height, c, dx);
                const double p = m.m11.real() * psi + m.m12.real() * dpsi;
                dpsi = m.m21.real() * psi + m.m22.real() * dpsi;
                psi = p;
            }
            if (zeros)
                *zeros += region_zeros(k2, dx, psi0, dpsi0, psi);
        }
        const auto m = point_matrix(spec.interaction(i), c);
        const double p = m.m11.real() * psi + m.m12.real() * dpsi;
        dpsi = m.m21.real() * psi + m.m22.real() * dpsi;
        if (zeros && psi != 0.0 && std::signbit(p) != std::signbit(psi))
            ++*zeros;
        psi = p;
        const double scale = std::max(std::abs(psi), std::abs(dpsi));
        if (scale > 0.0) {
            psi /= scale;
            dpsi /= scale;
        }
    }
}

} // namespace

TransferMatrix region_matrix(double energy, double height, const PhysicalConstants& c, double dx) {
    const double k2 = 2.0 * c.mass * (energy - height) / (c.hbar * c.hbar);
    if (dx == 0.0)
        return {};
    if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double cs = std::cos(k * dx);
        const double sn = std::sin(k * dx);
        return {cs, sn / k, -k * sn, cs};
    }
    if (k2 < 0.0) {
        const double kappa = std::sqrt(-k2);
        const double ch = std::cosh(kappa * dx);
        const double sh = std::sinh(kappa * dx);
        return {ch, sh / kappa, kappa * sh, ch};
    }
    return {1.0, dx, 0.0, 1.0};
}

TransferMatrix point_matrix(const PointInteraction& point, const PhysicalConstants& c) {
    const double h2 = c.hbar * c.hbar;
    const double b = c.mass * point.delta_prime_strength / h2;
    if (std::abs(1.0 - b) < 1e-12 || std::abs(1.0 + b) < 1e-12)
        throw domain_error("resonant delta-prime strength (m beta / hbar^2 = +-1)");
    const double p = (1.0 + b) / (1.0 - b);
    const double coupling = 2.0 * c.mass * point.delta_strength / (h2 * (1.0 - b * b));
    return {p, 0.0, coupling, 1.0 / p};
}

TransferMatrix total_matrix(const PotentialSpec& spec, double energy) {
    const auto& c = spec.constants();
    TransferMatrix m;
    const std::size_t n = spec.boundary_count();
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) {
            const auto& region = spec.regions()[i];
            m = region_matrix(energy, region.height, c, region.right - region.left) * m;
        }
        m = point_matrix(spec.interaction(i), c) * m;
    }
    return m;
}

ScatteringResult oracle_scatter(const PotentialSpec& spec, double energy, IncidentSide side) {
    const auto& c = spec.constants();
    const double u_left = spec.left_asymptote();
    const double u_right = spec.right_asymptote();
    const bool left = side == IncidentSide::left;
    if (!std::isfinite(energy) || !(energy > (left ? u_left : u_right)))
        throw domain_error("no propagating channel on the incident side");

    const std::size_t n = spec.boundary_count();
    const double x0 = n ? spec.boundary(0) : 0.0;
    const double xn = n ? spec.boundary(n - 1) : 0.0;
    const complex gl = exponent_rate(energy, u_left, c);
    const complex gr = exponent_rate(energy, u_right, c);

    // Start from the transmitted wave alone (t = 1) and carry it to the
    // incident side; there it splits into incident and reflected parts.
    // Working against the direction of transmission keeps the dominant
    // solution in hand instead of cancelling growing columns.
    complex psi, dpsi;
    const auto step = [&](const TransferMatrix& m, bool inverse) {
        const complex p = inverse ? m.m22 * psi - m.m12 * dpsi : m.m11 * psi + m.m12 * dpsi;
        dpsi = inverse ? -m.m21 * psi + m.m11 * dpsi : m.m21 * psi + m.m22 * dpsi;
        psi = p;
    };
    complex incident, reflected;
    if (left) {
        psi = std::exp(gr * xn);
        dpsi = gr * psi;
        for (std::size_t i = n; i-- > 0;) {
            step(point_matrix(spec.interaction(i), c), true);
            if (i > 0) {
                const auto& region = spec.regions()[i];
                step(region_matrix(energy, region.height, c, region.right - region.left), true);
            }
        }
        // psi = A exp(gl x) + B exp(-gl x) at x0
        incident = (gl * psi + dpsi) / (2.0 * gl * std::exp(gl * x0));
        reflected = (gl * psi - dpsi) / (2.0 * gl * std::exp(-gl * x0));
    } else {
        psi = std::exp(-gl * x0);
        dpsi = -gl * psi;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) {
                const auto& region = spec.regions()[i];
                step(region_matrix(energy, region.height, c, region.right - region.left), false);
            }
            step(point_matrix(spec.interaction(i), c), false);
        }
        // psi = A exp(-gr x) + B exp(gr x) at xn
        incident = (gr * psi - dpsi) / (2.0 * gr * std::exp(-gr * xn));
        reflected = (gr * psi + dpsi) / (2.0 * gr * std::exp(gr * xn));
    }

    ScatteringResult res;
    res.incident_side = side;
    res.r = reflected / incident;
    res.t = 1.0 / incident;
    const double k_in = (left ? gl : gr).imag();
    const complex g_out = left ? gr : gl;
    res.R = std::norm(res.r);
    res.T = g_out.imag() > 0.0 ? g_out.imag() / k_in * std::norm(res.t) : 0.0;
    res.unitarity_defect = res.R + res.T - 1.0;
    return res;
}

std::vector<BoundState> oracle_bound_states(const PotentialSpec& spec, double energy_floor, double tolerance,
                                            int grid_points) {
    const auto& c = spec.constants();
    const double u_left = spec.left_asymptote();
    const double u_right = spec.right_asymptote();
    const double top = std::min(u_left, u_right);
    if (!(energy_floor < top))
        return {};

    // Left-decaying solution shot across the potential; zero when it also decays on the right.
    auto mismatch = [&](double e) {
        const double kl = std::sqrt(2.0 * c.mass * (u_left - e)) / c.hbar;
        const double kr = std::sqrt(2.0 * c.mass * (u_right - e)) / c.hbar;
        double psi = 1.0;
        double dpsi = kl;
        shoot(spec, e, psi, dpsi);
        return dpsi + kr * psi;
    };

    const double kappa_max = std::sqrt(2.0 * c.mass * (top - energy_floor)) / c.hbar;
    std::vector<double> grid;
    for (int j = 0; j < grid_points; ++j) {
        const double kappa = kappa_max * static_cast<double>(grid_points - j) / grid_points;
        grid.push_back(top - c.hbar * c.hbar * kappa * kappa / (2.0 * c.mass));
    }
    grid.front() = energy_floor;
    // Close the scan just under the threshold so shallow states are bracketed.
    grid.push_back(top - std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(top)));

    // Oscillation count: levels strictly below e equal the zeros of the left-decaying solution.
    auto count_below = [&](double e) {
        const double kl = std::sqrt(2.0 * c.mass * (u_left - e)) / c.hbar;
        const double kr = std::sqrt(2.0 * c.mass * (u_right - e)) / c.hbar;
        double psi = 1.0;
        double dpsi = kl;
        int zeros = 0;
        shoot(spec, e, psi, dpsi, &zeros);
        const double a = psi + dpsi / kr;
        const double b = psi - dpsi / kr;
        if (a != 0.0 && b / a < -1.0)
            ++zeros;
        return zeros;
    };
    auto make_state = [&](double e, int label) {
        BoundState s;
        s.energy = e;
        s.kappa_left = std::sqrt(2.0 * c.mass * (u_left - e)) / c.hbar;
        s.kappa_right = std::sqrt(2.0 * c.mass * (u_right - e)) / c.hbar;
        s.label = label;
        return s;
    };

    std::vector<BoundState> out;
    double e_prev = grid.front();
    double f_prev = mismatch(e_prev);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double e = grid[j];
        const double f = mismatch(e);
        if (f == 0.0 || (f_prev != 0.0 && std::signbit(f) != std::signbit(f_prev))) {
            double lo = e_prev;
            double hi = e;
            const bool lo_negative = std::signbit(f_prev);
            while (hi - lo > tolerance) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                (std::signbit(mismatch(mid)) == lo_negative ? lo : hi) = mid;
            }
            const double root = f == 0.0 ? e : 0.5 * (lo + hi);
            if (top - root >= 1e-14)
                out.push_back(make_state(root, static_cast<int>(out.size())));
        }
        e_prev = e;
        f_prev = f;
    }

    // Close pairs can share one grid cell; if the count disagrees, locate every level by the count.
    const int first = count_below(energy_floor);
    const int total = count_below(grid.back()) - first;
    if (total < 0 || static_cast<int>(out.size()) == total)
        return out;
    out.clear();
    for (int n = first; n < first + total; ++n) {
        double lo = energy_floor;
        double hi = grid.back();
        while (hi - lo > tolerance) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (count_below(mid) > n ? hi : lo) = mid;
        }
        const double root = 0.5 * (lo + hi);
        if (top - root >= 1e-14)
            out.push_back(make_state(root, static_cast<int>(out.size())));
    }
    return out;
}

} // namespace qwi::oracle
