#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "qwi/error.hpp"

namespace qwi {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct PhysicalConstants {
    double hbar = 1.0;
    double mass = 1.0;
    friend bool operator==(const PhysicalConstants&, const PhysicalConstants&) = default;
};

// Zero-range interaction delta_strength * delta(x - a) + delta_prime_strength * delta'(x - a).
// Attractive wells carry a negative delta_strength.
struct PointInteraction {
    double position = 0.0;
    double delta_strength = 0.0;
    double delta_prime_strength = 0.0;

    bool is_trivial() const noexcept { return delta_strength == 0.0 && delta_prime_strength == 0.0; }
    friend bool operator==(const PointInteraction&, const PointInteraction&) = default;
};

struct Region {
    double left = -infinity;
    double right = infinity;
    double height = 0.0;

    friend bool operator==(const Region&, const Region&) = default;
};

/// Canonical potential: regions tile the real line, sorted left to right,
/// and every point interaction sits on a region boundary.
///
/// With boundaries x_0 < ... < x_{N-1} there are N + 1 regions; region i
/// spans (x_{i-1}, x_i), region 0 reaches -inf and region N reaches +inf.
/// Each boundary carries an interaction (trivial when no point was placed there).
class PotentialSpec {
public:
    // Flat U = 0 on the whole line with no point interactions.
    PotentialSpec();

    const PhysicalConstants& constants() const noexcept { return constants_; }
    std::span<const Region> regions() const noexcept { return regions_; }
    std::span<const PointInteraction> points() const noexcept { return points_; }

    std::size_t boundary_count() const noexcept { return regions_.size() - 1; }
    double boundary(std::size_t i) const { return regions_[i].right; }
    // Interaction at boundary i; trivial when no point is attached.
    const PointInteraction& interaction(std::size_t i) const { return interactions_[i]; }

    double left_asymptote() const noexcept { return regions_.front().height; }
    double right_asymptote() const noexcept { return regions_.back().height; }

    // Index of the region containing x; a boundary coordinate maps to the region on its right.
    std::size_t region_index(double x) const;
    // Background height at x (right-limit convention on boundaries).
    double height_at(double x) const { return regions_[region_index(x)].height; }

    friend bool operator==(const PotentialSpec&, const PotentialSpec&) = default;

private:
    friend PotentialSpec canonicalize(const PhysicalConstants&, std::span<const Region>,
                                      std::span<const PointInteraction>);

    PhysicalConstants constants_;
    std::vector<Region> regions_;
    std::vector<PointInteraction> points_;
    std::vector<PointInteraction> interactions_;
};

// Sorts, validates and merges raw regions and points. An empty region list
// means U = 0 everywhere. Throws potential_error on gaps, overlaps,
// non-finite values or two points at the same coordinate.
PotentialSpec canonicalize(const PhysicalConstants& constants, std::span<const Region> raw_regions,
                           std::span<const PointInteraction> raw_points);

// Reads the line-oriented potential format:
//   hbar <f> | mass <f> | segment <left|-inf> <right|inf> <height>
//   delta <pos> <alpha> | deltaprime <pos> <beta> | point <pos> <alpha> <beta>
// '#' starts a comment.
PotentialSpec parse_potential_file(std::string_view text);

PotentialSpec load_potential_file(const std::string& path);

// Writes a spec back in the file format above (round-trips through parse_potential_file).
std::string format_potential(const PotentialSpec& spec);

} // namespace qwi
