#include "qwi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qwi {

namespace {

// Zeros of the real solution inside a region, walking leftward a distance dx
// from a right edge with state `right` (zeros at the far edge included, at the near edge excluded).
int zeros_leftward(const ImpedanceState& right, const RegionWave& w, double dx) {
    if (right.node)
        return w.propagating() ? static_cast<int>(std::floor(w.wave_number * dx / std::numbers::pi)) : 0;
    // psi'/psi = (i m / hbar) Z
    const double log_derivative = -w.mass_over_hbar * right.value.imag();
    if (w.propagating()) {
        const double k = w.wave_number;
        const double theta = std::atan2(k, log_derivative);
        return k * dx >= theta ? static_cast<int>(std::floor((k * dx - theta) / std::numbers::pi)) + 1 : 0;
    }
    if (w.evanescent())
        return log_derivative > w.kappa && std::atanh(w.kappa / log_derivative) <= w.kappa * dx ? 1 : 0;
    return log_derivative > 0.0 && 1.0 <= log_derivative * dx ? 1 : 0;
}

void require_below_threshold(const PotentialSpec& spec, double energy) {
    const double top = std::min(spec.left_asymptote(), spec.right_asymptote());
    if (!std::isfinite(energy) || !(energy < top))
        throw domain_error("bound-state energy must lie below both asymptotes (E = " + std::to_string(energy) +
                           ", threshold " + std::to_string(top) + ")");
}

} // namespace

DispersionSample dispersion(const PotentialSpec& spec, double energy) {
    require_below_threshold(spec, energy);
    const ImpedanceProfile p = fold_impedance(spec, energy, Direction::leftward);
    DispersionSample s;
    s.energy = energy;
    const complex z_left = p.waves.front().characteristic_impedance;
    const std::size_t n = p.boundaries.size();
    if (n == 0) {
        s.mismatch = p.seed() + z_left;
        return s;
    }

    for (std::size_t i = n; i-- > 0;) {
        const auto& right = p.right_limits[i];
        const double b = reduced_beta(spec.interaction(i).delta_prime_strength, spec.constants());
        if (!right.node && (1.0 + b) / (1.0 - b) < 0.0)
            ++s.node_count;
        if (i > 0)
            s.node_count += zeros_leftward(p.left_limits[i], p.waves[i], p.boundaries[i] - p.boundaries[i - 1]);
    }

    const auto& in = p.left_limits.front();
    if (in.node) {
        s.pole = true;
        s.mismatch = {0.0, std::numeric_limits<double>::infinity()};
    } else {
        s.mismatch = in.value + z_left;
    }
    return s;
}

int count_states_below(const PotentialSpec& spec, double energy) {
    const DispersionSample s = dispersion(spec, energy);
    // Im D < 0 <=> psi'/psi at x_0 exceeds kappa_left: one more zero in the left tail.
    return s.node_count + (!s.pole && s.mismatch.imag() < 0.0 ? 1 : 0);
}

double default_energy_floor(const PotentialSpec& spec) {
    const auto& c = spec.constants();
    double min_height = infinity;
    for (const auto& r : spec.regions())
        min_height = std::min(min_height, r.height);
    double strength = 0.0;
    for (const auto& p : spec.points()) {
        const double b = std::abs(reduced_beta(p.delta_prime_strength, c));
        const double dressing = b < 1.0 ? 1.0 / ((1.0 - b) * (1.0 - b)) : 1.0;
        strength += std::abs(p.delta_strength) * std::max(1.0, dressing);
    }
    return min_height - 2.0 * c.mass * strength * strength / (c.hbar * c.hbar);
}

std::vector<BoundState> find_bound_states(const PotentialSpec& spec, std::optional<double> energy_floor,
                                          int grid_points, std::optional<double> tolerance) {
    const auto& c = spec.constants();
    const double top = std::min(spec.left_asymptote(), spec.right_asymptote());
    double floor = energy_floor.value_or(default_energy_floor(spec));
    if (!(floor < top))
        return {};
    grid_points = std::max(grid_points, 16);

    // Push the floor down until nothing lies beneath it.
    for (int i = 0; i < 64 && count_states_below(spec, floor) > 0; ++i)
        floor = top - 2.0 * (top - floor);
    // The default tolerance scales with each root rather than with the floor,
    // which can sit far below the spectrum when δ′ dressing is strong.
    const auto tol_at = [&](double e) {
        return tolerance.value_or(1e-12 * std::max(1.0, std::abs(e)));
    };
    const double threshold_gap = std::max(1e-14, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(top));

    const double kappa_max = std::sqrt(2.0 * c.mass * (top - floor)) / c.hbar;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(grid_points) + 1);
    for (int j = 0; j < grid_points; ++j) {
        const double kappa = kappa_max * static_cast<double>(grid_points - j) / grid_points;
        grid.push_back(j == 0 ? floor : top - c.hbar * c.hbar * kappa * kappa / (2.0 * c.mass));
    }
    grid.push_back(top - threshold_gap);

    std::vector<double> energies;
    DispersionSample prev = dispersion(spec, grid.front());
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const DispersionSample cur = dispersion(spec, grid[j]);
        if (!prev.pole && !cur.pole && prev.mismatch.imag() > 0.0 && cur.mismatch.imag() <= 0.0) {
            double lo = prev.energy;
            double hi = cur.energy;
            while (hi - lo > tol_at(hi)) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                const DispersionSample m = dispersion(spec, mid);
                if (!m.pole && m.mismatch.imag() > 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            energies.push_back(0.5 * (lo + hi));
        }
        prev = cur;
    }

    // Cross-check against the oscillation count; bisect on the count itself
    // if the grid scan missed or merged roots.
    const int expected = count_states_below(spec, grid.back());
    if (static_cast<int>(energies.size()) != expected) {
        energies.clear();
        for (int level = 0; level < expected; ++level) {
            double lo = floor;
            double hi = grid.back();
            while (hi - lo > tol_at(hi)) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                (count_states_below(spec, mid) > level ? hi : lo) = mid;
            }
            energies.push_back(0.5 * (lo + hi));
        }
    }

    std::vector<BoundState> states;
    for (const double e : energies) {
        if (top - e < 1e-14)
            continue;
        BoundState s;
        s.energy = e;
        s.kappa_left = std::sqrt(2.0 * c.mass * (spec.left_asymptote() - e)) / c.hbar;
        s.kappa_right = std::sqrt(2.0 * c.mass * (spec.right_asymptote() - e)) / c.hbar;
        s.label = static_cast<int>(states.size());
        states.push_back(s);
    }
    return states;
}

double closed_form_single_well(double alpha, const PhysicalConstants& constants) {
    return -constants.mass * alpha * alpha / (2.0 * constants.hbar * constants.hbar);
}

std::optional<double> closed_form_delta_delta_prime_bound(double alpha, double beta,
                                                          const PhysicalConstants& constants) {
    if (!(alpha > 0.0))
        return std::nullopt;
    const double h2 = constants.hbar * constants.hbar;
    const double at = 2.0 * constants.mass * alpha / h2;
    const double bt = constants.mass * beta / h2;
    return -h2 * at * at / (8.0 * constants.mass * (1.0 + bt * bt) * (1.0 + bt * bt));
}

namespace {

template <class F>
double bisect_kappa(F&& f, double lo, double hi, double tolerance, const PhysicalConstants& c) {
    auto energy = [&](double kappa) { return -c.hbar * c.hbar * kappa * kappa / (2.0 * c.mass); };
    for (int it = 0; it < 400 && energy(lo) - energy(hi) > tolerance; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return energy(0.5 * (lo + hi));
}

} // namespace

DoubleWellLevels closed_form_double_well(double alpha, double a, const PhysicalConstants& constants,
                                         double tolerance) {
    if (!(alpha > 0.0) || !(a > 0.0))
        throw domain_error("double well needs alpha > 0 and a > 0");
    const double unit = constants.mass * alpha / (constants.hbar * constants.hbar);
    auto sym = [&](double kappa) { return kappa / unit - 1.0 - std::exp(-2.0 * kappa * a); };
    auto anti = [&](double kappa) { return kappa / unit - 1.0 + std::exp(-2.0 * kappa * a); };

    DoubleWellLevels out;
    out.symmetric = bisect_kappa(sym, 0.0, 2.0 * unit, tolerance, constants);
    if (2.0 * a * unit > 1.0) {
        // anti is convex with anti(0) = 0: negative on (0, root), positive beyond.
        double lo = unit;
        for (int i = 0; i < 2000 && !(anti(lo) < 0.0); ++i)
            lo *= 0.5;
        if (anti(lo) < 0.0)
            out.antisymmetric = bisect_kappa(anti, lo, unit, tolerance, constants);
    }
    return out;
}

} // namespace qwi
