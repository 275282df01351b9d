#include "qwi/wavefunction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "qwi/scattering.hpp"

namespace qwi {

Wavefunction::Wavefunction(ImpedanceProfile profile) : profile_(std::move(profile)) {
    bound_ = profile_.waves.front().evanescent() && profile_.waves.back().evanescent();
    if (profile_.boundaries.empty())
        return;
    if (bound_) {
        if (profile_.left_limits.front().node)
            throw domain_error("wavefunction vanishes at the leftmost boundary");
        // Real and positive on the left tail.
        log_offset_ = -profile_.log_amplitude_left.front();
    } else {
        log_offset_ = log_incident_scale(profile_);
    }
}

complex Wavefunction::log_psi(double x, Side side) const {
    const auto& p = profile_;
    const std::size_t n = p.boundaries.size();
    constexpr double minus_inf = -std::numeric_limits<double>::infinity();

    if (n == 0) {
        const complex g = p.waves.front().propagation_constant;
        return p.sweep == Direction::leftward ? g * x : -g * x;
    }

    auto it = std::lower_bound(p.boundaries.begin(), p.boundaries.end(), x);
    const auto r = static_cast<std::size_t>(it - p.boundaries.begin());
    if (it != p.boundaries.end() && *it == x) {
        const auto& st = side == Side::left_limit ? p.left_limits[r] : p.right_limits[r];
        if (st.node)
            return minus_inf;
        return side == Side::left_limit ? p.log_amplitude_left[r] : p.log_amplitude_right[r];
    }

    if (p.sweep == Direction::leftward) {
        if (r == n)
            return p.log_amplitude_right.back() + p.waves.back().propagation_constant * (x - p.boundaries.back());
        if (r == 0 && bound_)
            return p.log_amplitude_left.front() + p.waves.front().propagation_constant * (p.boundaries.front() - x);
        const auto step = propagate(p.left_limits[r], p.waves[r], p.boundaries[r] - x, Direction::leftward);
        return step.state.node ? minus_inf : p.log_amplitude_left[r] + step.log_ratio;
    }
    if (r == 0)
        return p.log_amplitude_left.front() + p.waves.front().propagation_constant * (p.boundaries.front() - x);
    const auto step = propagate(p.right_limits[r - 1], p.waves[r], x - p.boundaries[r - 1], Direction::rightward);
    return step.state.node ? minus_inf : p.log_amplitude_right[r - 1] + step.log_ratio;
}

complex Wavefunction::operator()(double x, Side side) const {
    const complex l = log_psi(x, side);
    if (l.real() == -std::numeric_limits<double>::infinity())
        return {};
    const complex v = std::exp(l + log_offset_);
    // Bound states are real up to rounding.
    return bound_ ? complex{v.real(), 0.0} : v;
}

std::vector<double> uniform_grid(double x_min, double x_max, std::size_t samples) {
    if (samples < 2 || !(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw domain_error("grid needs x_min < x_max and at least two samples");
    std::vector<double> xs(samples);
    const double h = (x_max - x_min) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i)
        xs[i] = x_min + h * static_cast<double>(i);
    xs.back() = x_max;
    return xs;
}

namespace {

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 4> gl_nodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                         0.9602898564975363};
constexpr std::array<double, 4> gl_weights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                           0.1012285362903763};

double integrate_density(const Wavefunction& psi, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl_nodes.size(); ++i) {
        sum += gl_weights[i] * (std::norm(psi(mid - half * gl_nodes[i])) + std::norm(psi(mid + half * gl_nodes[i])));
    }
    return sum * half;
}

} // namespace

WavefunctionSamples reconstruct(const ImpedanceProfile& profile, std::span<const double> grid) {
    if (grid.size() < 2)
        throw domain_error("wavefunction grid needs at least two points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw domain_error("wavefunction grid must be strictly increasing");
    const auto& bs = profile.boundaries;
    if (!bs.empty() && (grid.front() > bs.front() || grid.back() < bs.back()))
        throw domain_error("wavefunction grid does not cover every boundary");

    const Wavefunction psi(profile);
    WavefunctionSamples out;
    out.normalizable = psi.normalizable();
    out.xs.assign(grid.begin(), grid.end());
    out.psi.reserve(grid.size());
    for (const double x : grid)
        out.psi.push_back(psi(x));

    // Quadrature nodes never land on a boundary, so limits do not matter here.
    auto b = bs.begin();
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double a = grid[i];
        const double end = grid[i + 1];
        while (b != bs.end() && *b <= a)
            ++b;
        for (auto k = b; k != bs.end() && *k < end; ++k) {
            out.norm += integrate_density(psi, a, *k);
            a = *k;
        }
        out.norm += integrate_density(psi, a, end);
    }

    // Only boundaries carrying an interaction are reported.
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const auto& l = profile.left_limits[i];
        const auto& r = profile.right_limits[i];
        const complex jump = profile.log_amplitude_right[i] - profile.log_amplitude_left[i];
        if (jump == complex{} && !l.node && l.value == r.value)
            continue;
        out.discontinuities.emplace_back(bs[i], l.node || r.node ? complex{std::exp(-jump)} : std::exp(jump));
    }
    return out;
}

WavefunctionSamples normalize(WavefunctionSamples samples) {
    if (!samples.normalizable)
        throw domain_error("scattering state is not normalizable; use the |psi|^2 density instead");
    if (!(samples.norm > 0.0) || !std::isfinite(samples.norm))
        throw domain_error("wavefunction norm is zero or not finite");
    const double scale = 1.0 / std::sqrt(samples.norm);
    for (auto& v : samples.psi)
        v *= scale;
    samples.norm = 1.0;
    return samples;
}

WavefunctionSamples bound_state_wavefunction(const PotentialSpec& spec, const BoundState& state,
                                             std::span<const double> grid) {
    return normalize(reconstruct(fold_impedance(spec, state.energy, Direction::leftward), grid));
}

} // namespace qwi
