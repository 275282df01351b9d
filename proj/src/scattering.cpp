#include "qwi/scattering.hpp"

#include <cmath>
#include <string>

#include "qwi/parallel.hpp"

namespace qwi {

namespace {

void require_channel(const PotentialSpec& spec, double energy, IncidentSide side) {
    if (!std::isfinite(energy))
        throw domain_error("energy must be finite");
    const double floor = side == IncidentSide::left ? spec.left_asymptote() : spec.right_asymptote();
    if (!(energy > floor))
        throw domain_error("no propagating channel on the incident side (E = " + std::to_string(energy) +
                           " <= " + std::to_string(floor) + ")");
}

Direction sweep_for(IncidentSide side) {
    return side == IncidentSide::left ? Direction::leftward : Direction::rightward;
}

// Input state and its log-amplitude on the incident side of the profile.
struct Incident {
    ImpedanceState state;
    complex log_amplitude;
    const RegionWave* wave;
    double position;
};

Incident incident_of(const ImpedanceProfile& p) {
    const std::size_t n = p.boundaries.size();
    if (p.sweep == Direction::leftward) {
        if (n == 0)
            return {{p.seed(), 0.0, Side::left_limit, false}, {}, &p.waves.front(), 0.0};
        return {p.left_limits.front(), p.log_amplitude_left.front(), &p.waves.front(), p.boundaries.front()};
    }
    if (n == 0)
        return {{p.seed(), 0.0, Side::right_limit, false}, {}, &p.waves.back(), 0.0};
    return {p.right_limits.back(), p.log_amplitude_right.back(), &p.waves.back(), p.boundaries.back()};
}

// Reflection amplitude referenced to the incident-side boundary.
complex local_reflection(const Incident& in, Direction sweep) {
    if (in.state.node)
        return -1.0;
    const complex z = in.wave->characteristic_impedance;
    return sweep == Direction::leftward ? reflection_from_impedance(in.state.value, z)
                                        : reflection_from_impedance(-in.state.value, z);
}

} // namespace

ImpedanceState input_impedance(const PotentialSpec& spec, double energy, IncidentSide side) {
    require_channel(spec, energy, side);
    return incident_of(fold_impedance(spec, energy, sweep_for(side))).state;
}

complex reflection_from_impedance(complex input, complex incident_impedance) {
    if (!(incident_impedance.real() > 0.0))
        throw domain_error("incident characteristic impedance must be real and positive");
    const complex den = incident_impedance + input;
    if (std::abs(den) <= 1e-15 * std::abs(incident_impedance))
        throw domain_error("input impedance equals -z (perfect absorber pole)");
    return (incident_impedance - input) / den;
}

complex log_incident_scale(const ImpedanceProfile& p) {
    const Incident in = incident_of(p);
    const complex r0 = local_reflection(in, p.sweep);
    const complex gamma = in.wave->propagation_constant;
    // Amplitude A of the incident wave at the boundary, in profile units.
    complex log_a;
    if (in.state.node) {
        // psi = 0 there, the stored amplitude is psi' = +-2 i k A.
        const complex slope = p.sweep == Direction::leftward ? 2.0 * gamma : -2.0 * gamma;
        log_a = in.log_amplitude - std::log(slope);
    } else {
        log_a = in.log_amplitude - std::log(1.0 + r0);
    }
    // Incident coefficient of exp(+-i k x) at the boundary is exp(+-gamma x).
    const double sign = p.sweep == Direction::leftward ? 1.0 : -1.0;
    return sign * gamma * in.position - log_a;
}

ScatteringResult solve(const PotentialSpec& spec, double energy, IncidentSide side) {
    require_channel(spec, energy, side);
    const ImpedanceProfile p = fold_impedance(spec, energy, sweep_for(side));
    const Incident in = incident_of(p);
    const complex r0 = local_reflection(in, p.sweep);

    // The profile is seeded with unit amplitude on the transmitted side.
    const bool left = side == IncidentSide::left;
    const RegionWave& w_in = left ? p.waves.front() : p.waves.back();
    const RegionWave& w_out = left ? p.waves.back() : p.waves.front();
    const double x_in = p.boundaries.empty() ? 0.0 : (left ? p.boundaries.front() : p.boundaries.back());
    const double x_out = p.boundaries.empty() ? 0.0 : (left ? p.boundaries.back() : p.boundaries.front());
    const double sign = left ? 1.0 : -1.0;

    ScatteringResult res;
    res.incident_side = side;
    res.r = r0 * std::exp(2.0 * sign * w_in.propagation_constant * x_in);
    res.t = std::exp(log_incident_scale(p) - sign * w_out.propagation_constant * x_out);
    res.R = std::norm(res.r);
    res.T = w_out.propagating() ? (w_out.wave_number / w_in.wave_number) * std::norm(res.t) : 0.0;
    res.unitarity_defect = res.R + res.T - 1.0;
    return res;
}

ScatteringResult closed_form_single_delta(double strength, double energy, const PhysicalConstants& constants) {
    if (!(energy > 0.0))
        throw domain_error("closed-form delta scattering needs E > 0");
    const double z = std::sqrt(2.0 * energy / constants.mass);
    const double zh = z * constants.hbar;
    const complex den{zh, strength};
    ScatteringResult res;
    res.r = complex{0.0, -strength} / den;
    res.t = zh / den;
    res.R = strength * strength / (zh * zh + strength * strength);
    res.T = zh * zh / (zh * zh + strength * strength);
    res.unitarity_defect = res.R + res.T - 1.0;
    return res;
}

ScatteringResult closed_form_delta_delta_prime(double strength, double beta, double energy,
                                               const PhysicalConstants& constants) {
    if (!(energy > 0.0))
        throw domain_error("closed-form delta-delta' scattering needs E > 0");
    const double b = reduced_beta(beta, constants);
    if (std::abs(1.0 - b) < 1e-12 || std::abs(1.0 + b) < 1e-12)
        throw domain_error("resonant delta-prime strength (m beta / hbar^2 = +-1)");
    const double z = std::sqrt(2.0 * energy / constants.mass);
    const double eta = 2.0 * strength / constants.hbar;
    const complex den{2.0 * (1.0 + b * b) * z, eta};
    ScatteringResult res;
    res.r = complex{-4.0 * b * z, -eta} / den;
    res.t = 2.0 * (1.0 - b * b) * z / den;
    // Omega = m alpha / (hbar^2 k)
    const double omega = strength / (constants.hbar * z);
    const double d = (1.0 + b * b) * (1.0 + b * b) + omega * omega;
    res.R = (4.0 * b * b + omega * omega) / d;
    res.T = (1.0 - b * b) * (1.0 - b * b) / d;
    res.unitarity_defect = res.R + res.T - 1.0;
    return res;
}

std::vector<SweepRow> sweep(const PotentialSpec& spec, double e_min, double e_max, std::size_t steps,
                            IncidentSide side, unsigned threads) {
    if (steps == 0)
        throw domain_error("sweep needs at least one step");
    if (!std::isfinite(e_min) || !std::isfinite(e_max) || !(e_min < e_max))
        throw domain_error("degenerate energy grid (need e_min < e_max)");
    require_channel(spec, e_min, side);

    std::vector<SweepRow> rows(steps);
    const double h = steps > 1 ? (e_max - e_min) / static_cast<double>(steps - 1) : 0.0;
    parallel_for(steps, threads, [&](std::size_t i) {
        const double e = i + 1 == steps && steps > 1 ? e_max : e_min + h * static_cast<double>(i);
        rows[i] = SweepRow{e, solve(spec, e, side)};
    });
    return rows;
}

std::vector<std::size_t> transmission_peaks(std::span<const SweepRow> rows) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
        const double t = rows[i].result.T;
        if (t > rows[i - 1].result.T && t >= rows[i + 1].result.T)
            peaks.push_back(i);
    }
    return peaks;
}

double relative_deviation(const ScatteringResult& a, const ScatteringResult& b) {
    const double diff = std::sqrt(std::norm(a.r - b.r) + std::norm(a.t - b.t));
    const double scale = std::sqrt(std::norm(b.r) + std::norm(b.t));
    return scale > 0.0 ? diff / scale : diff;
}

} // namespace qwi
