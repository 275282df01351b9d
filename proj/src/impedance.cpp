#include "qwi/impedance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qwi {

RegionWave characteristic(double energy, double height, const PhysicalConstants& constants) {
    RegionWave w;
    w.mass_over_hbar = constants.mass / constants.hbar;
    const double excess = energy - height;
    if (excess > 0.0) {
        const double z = std::sqrt(2.0 * excess / constants.mass);
        w.characteristic_impedance = {z, 0.0};
        w.wave_number = w.mass_over_hbar * z;
        w.propagation_constant = {0.0, w.wave_number};
    } else if (excess < 0.0) {
        const double z = std::sqrt(-2.0 * excess / constants.mass);
        w.characteristic_impedance = {0.0, z};
        w.kappa = w.mass_over_hbar * z;
        w.propagation_constant = {-w.kappa, 0.0};
    }
    return w;
}

namespace {

// cosh(w) and (i m dx / hbar) sinh(w)/w for w = gamma dx, optionally divided
// by cosh(w) (log_scale = log cosh(w)) so long evanescent regions cannot overflow.
struct Kernel {
    complex c;
    complex q;
    double log_scale = 0.0;
};

Kernel make_kernel(const RegionWave& region, double dx) {
    const complex w = region.propagation_constant * dx;
    const complex i_m_dx{0.0, region.mass_over_hbar * dx};
    if (std::abs(w) < taylor_threshold) {
        const complex w2 = w * w;
        return {1.0 + w2 / 2.0, i_m_dx * (1.0 + w2 / 6.0)};
    }
    if (region.evanescent()) {
        const double a = std::abs(w.real());
        if (a > 20.0) {
            const double log_cosh = a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
            return {1.0, i_m_dx * (std::tanh(w.real()) / w.real()), log_cosh};
        }
        return {std::cosh(w.real()), i_m_dx * (std::sinh(w.real()) / w.real())};
    }
    if (region.propagating())
        return {std::cos(w.imag()), i_m_dx * (std::sin(w.imag()) / w.imag())};
    return {std::cosh(w), i_m_dx * (std::sinh(w) / w)};
}

constexpr double node_threshold = 1e-300;

} // namespace

PropagationStep propagate(const ImpedanceState& near, const RegionWave& region, double dx, Direction direction) {
    if (dx == 0.0)
        return {near, {}};

    const double sigma = direction == Direction::rightward ? 1.0 : -1.0;
    const Kernel k = make_kernel(region, dx);
    const complex z = region.characteristic_impedance;

    PropagationStep out;
    out.state.position = near.position + sigma * dx;
    out.state.side = direction == Direction::rightward ? Side::left_limit : Side::right_limit;

    if (near.node) {
        // psi = 0 at the near edge: the reciprocal impedance Y = 1/Z starts at 0.
        if (std::abs(k.q) < node_threshold) {
            out.state.node = true;
            out.log_ratio = std::log(k.c) + k.log_scale;
            return out;
        }
        out.state.value = sigma * k.c / k.q;
        out.log_ratio = std::log(sigma * k.q / complex{0.0, region.mass_over_hbar}) + k.log_scale;
        return out;
    }

    const complex Z = near.value;
    const complex den = k.c + sigma * Z * k.q;
    if (std::abs(den) < node_threshold) {
        out.state.node = true;
        out.log_ratio = std::log(complex{0.0, region.mass_over_hbar} * (Z * k.c + sigma * z * z * k.q)) + k.log_scale;
        return out;
    }
    // Written relative to the nearer fixed point +z or -z so that a matched
    // load is reproduced exactly.
    if (std::abs(Z - z) <= std::abs(Z + z))
        out.state.value = z + (Z - z) * (k.c - sigma * z * k.q) / den;
    else
        out.state.value = -z + (Z + z) * (k.c + sigma * z * k.q) / den;
    out.log_ratio = std::log(den) + k.log_scale;
    return out;
}

ImpedanceState propagate_left(const ImpedanceState& at_right, const RegionWave& region, double dx) {
    return propagate(at_right, region, dx, Direction::leftward).state;
}

ImpedanceState propagate_right(const ImpedanceState& at_left, const RegionWave& region, double dx) {
    return propagate(at_left, region, dx, Direction::rightward).state;
}

complex jump_delta(complex left_limit, double strength, const PhysicalConstants& constants) {
    return left_limit - complex{0.0, 2.0 * strength / constants.hbar};
}

double reduced_beta(double beta, const PhysicalConstants& constants) noexcept {
    return constants.mass * beta / (constants.hbar * constants.hbar);
}

namespace {

void check_resonant(double b) {
    if (std::abs(1.0 - b) < 1e-12 || std::abs(1.0 + b) < 1e-12)
        throw domain_error("resonant delta-prime strength (m beta / hbar^2 = +-1)");
}

} // namespace

complex jump_delta_prime(complex left_limit, double delta_strength, double beta, const PhysicalConstants& constants) {
    const double b = reduced_beta(beta, constants);
    check_resonant(b);
    const double minus = (1.0 - b) * (1.0 - b);
    const double plus = (1.0 + b) * (1.0 + b);
    return (minus * left_limit - complex{0.0, 2.0 * delta_strength / constants.hbar}) / plus;
}

double psi_jump_ratio(double beta, const PhysicalConstants& constants) {
    const double b = reduced_beta(beta, constants);
    check_resonant(b);
    return (1.0 + b) / (1.0 - b);
}

PropagationStep cross_point(const ImpedanceState& near, const PointInteraction& point,
                            const PhysicalConstants& constants, Direction direction) {
    const bool forward = direction == Direction::rightward;
    const double strength = forward ? point.delta_strength : -point.delta_strength;
    const double beta = forward ? point.delta_prime_strength : -point.delta_prime_strength;

    PropagationStep out;
    out.state.position = near.position;
    out.state.side = forward ? Side::right_limit : Side::left_limit;
    const double ratio = psi_jump_ratio(beta, constants);
    if (near.node) {
        // psi stays zero; psi' scales by the inverse ratio.
        out.state.node = true;
        out.log_ratio = std::log(complex{1.0 / ratio});
        return out;
    }
    out.state.value = jump_delta_prime(near.value, strength, beta, constants);
    out.log_ratio = point.delta_prime_strength == 0.0 ? complex{} : std::log(complex{ratio});
    return out;
}

complex ImpedanceProfile::seed() const noexcept {
    return sweep == Direction::leftward ? waves.back().characteristic_impedance
                                        : -waves.front().characteristic_impedance;
}

ImpedanceProfile fold_impedance(const PotentialSpec& spec, double energy, Direction sweep) {
    ImpedanceProfile p;
    p.constants = spec.constants();
    p.energy = energy;
    p.sweep = sweep;
    const std::size_t n = spec.boundary_count();
    p.boundaries.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        p.boundaries.push_back(spec.boundary(i));
    for (const auto& r : spec.regions())
        p.waves.push_back(characteristic(energy, r.height, p.constants));
    p.left_limits.resize(n);
    p.right_limits.resize(n);
    p.log_amplitude_left.resize(n);
    p.log_amplitude_right.resize(n);
    if (n == 0)
        return p;

    if (sweep == Direction::leftward) {
        ImpedanceState state{p.seed(), p.boundaries.back(), Side::right_limit, false};
        complex log_amp{};
        for (std::size_t i = n; i-- > 0;) {
            p.right_limits[i] = state;
            p.log_amplitude_right[i] = log_amp;
            auto jump = cross_point(state, spec.interaction(i), p.constants, Direction::leftward);
            state = jump.state;
            log_amp += jump.log_ratio;
            p.left_limits[i] = state;
            p.log_amplitude_left[i] = log_amp;
            if (i > 0) {
                auto step = propagate(state, p.waves[i], p.boundaries[i] - p.boundaries[i - 1], Direction::leftward);
                state = step.state;
                log_amp += step.log_ratio;
            }
        }
    } else {
        ImpedanceState state{p.seed(), p.boundaries.front(), Side::left_limit, false};
        complex log_amp{};
        for (std::size_t i = 0; i < n; ++i) {
            p.left_limits[i] = state;
            p.log_amplitude_left[i] = log_amp;
            auto jump = cross_point(state, spec.interaction(i), p.constants, Direction::rightward);
            state = jump.state;
            log_amp += jump.log_ratio;
            p.right_limits[i] = state;
            p.log_amplitude_right[i] = log_amp;
            if (i + 1 < n) {
                auto step =
                    propagate(state, p.waves[i + 1], p.boundaries[i + 1] - p.boundaries[i], Direction::rightward);
                state = step.state;
                log_amp += step.log_ratio;
            }
        }
    }
    return p;
}

ImpedanceState ImpedanceProfile::at(double x, Side side) const {
    const std::size_t n = boundaries.size();
    if (n == 0)
        return {seed(), x, side, false};
    auto it = std::lower_bound(boundaries.begin(), boundaries.end(), x);
    const auto r = static_cast<std::size_t>(it - boundaries.begin());
    if (it != boundaries.end() && *it == x)
        return side == Side::left_limit ? left_limits[r] : right_limits[r];
    // x lies in region r, i.e. between boundaries r-1 and r.
    if (sweep == Direction::leftward) {
        if (r == n)
            return {seed(), x, side, false};
        return propagate_left(left_limits[r], waves[r], boundaries[r] - x);
    }
    if (r == 0)
        return {seed(), x, side, false};
    return propagate_right(right_limits[r - 1], waves[r], x - boundaries[r - 1]);
}

} // namespace qwi
