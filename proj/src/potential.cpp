#include "qwi/potential.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace qwi {

PotentialSpec::PotentialSpec() : regions_{Region{}} {}

std::size_t PotentialSpec::region_index(double x) const {
    // First region whose right edge lies strictly beyond x.
    auto it = std::upper_bound(regions_.begin(), regions_.end() - 1, x,
                               [](double v, const Region& r) { return v < r.right; });
    return static_cast<std::size_t>(std::distance(regions_.begin(), it));
}

PotentialSpec canonicalize(const PhysicalConstants& constants, std::span<const Region> raw_regions,
                           std::span<const PointInteraction> raw_points) {
    if (!(constants.hbar > 0.0) || !std::isfinite(constants.hbar))
        throw potential_error("hbar must be positive and finite");
    if (!(constants.mass > 0.0) || !std::isfinite(constants.mass))
        throw potential_error("mass must be positive and finite");

    std::vector<Region> regions(raw_regions.begin(), raw_regions.end());
    if (regions.empty())
        regions.push_back(Region{});

    for (const auto& r : regions) {
        if (std::isnan(r.left) || std::isnan(r.right) || !std::isfinite(r.height))
            throw potential_error("segment with non-finite height or NaN edge");
        if (!(r.left < r.right))
            throw potential_error("segment with left >= right");
        if (r.left == infinity || r.right == -infinity)
            throw potential_error("segment edge at the wrong infinity");
    }
    std::sort(regions.begin(), regions.end(), [](const Region& a, const Region& b) { return a.left < b.left; });

    if (regions.front().left != -infinity)
        throw potential_error("no segment extends to -inf");
    if (regions.back().right != infinity)
        throw potential_error("no segment extends to +inf");
    for (std::size_t i = 1; i < regions.size(); ++i) {
        const double prev = regions[i - 1].right;
        const double next = regions[i].left;
        if (prev > next)
            throw potential_error("overlapping segments at x = " + std::to_string(next));
        if (prev < next)
            throw potential_error("gap between segments at x = " + std::to_string(prev));
    }

    std::vector<PointInteraction> points(raw_points.begin(), raw_points.end());
    for (const auto& p : points) {
        if (!std::isfinite(p.position))
            throw potential_error("point interaction at non-finite position");
        if (!std::isfinite(p.delta_strength) || !std::isfinite(p.delta_prime_strength))
            throw potential_error("non-finite point interaction strength at x = " + std::to_string(p.position));
    }
    std::sort(points.begin(), points.end(),
              [](const PointInteraction& a, const PointInteraction& b) { return a.position < b.position; });
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].position == points[i - 1].position)
            throw potential_error("duplicate point interactions at x = " + std::to_string(points[i].position));

    // Split regions at point positions that fall strictly inside them.
    std::vector<Region> split;
    split.reserve(regions.size() + points.size());
    auto pt = points.begin();
    for (const auto& r : regions) {
        double left = r.left;
        while (pt != points.end() && pt->position < r.right) {
            if (pt->position > left) {
                split.push_back(Region{left, pt->position, r.height});
                left = pt->position;
            }
            ++pt;
        }
        split.push_back(Region{left, r.right, r.height});
    }

    PotentialSpec spec;
    spec.constants_ = constants;
    spec.regions_ = std::move(split);
    spec.points_ = std::move(points);
    spec.interactions_.resize(spec.regions_.size() - 1);
    pt = spec.points_.begin();
    for (std::size_t i = 0; i + 1 < spec.regions_.size(); ++i) {
        const double x = spec.regions_[i].right;
        spec.interactions_[i] = PointInteraction{x, 0.0, 0.0};
        if (pt != spec.points_.end() && pt->position == x)
            spec.interactions_[i] = *pt++;
    }
    return spec;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

enum class Infinite { none, negative, positive };

double parse_number(std::string_view field, std::size_t line, Infinite allowed = Infinite::none) {
    if (allowed == Infinite::negative && field == "-inf")
        return -infinity;
    if (allowed == Infinite::positive && (field == "inf" || field == "+inf"))
        return infinity;
    std::string_view digits = field;
    if (!digits.empty() && digits.front() == '+')
        digits.remove_prefix(1);
    double value = 0.0;
    auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || end != digits.data() + digits.size() || !std::isfinite(value))
        throw potential_error("invalid number '" + std::string(field) + "'", line);
    return value;
}

void expect_fields(const std::vector<std::string_view>& f, std::size_t n, std::size_t line) {
    if (f.size() != n)
        throw potential_error("'" + std::string(f[0]) + "' expects " + std::to_string(n - 1) + " value(s), got " +
                                  std::to_string(f.size() - 1),
                              line);
}

} // namespace

PotentialSpec parse_potential_file(std::string_view text) {
    PhysicalConstants constants;
    bool have_hbar = false;
    bool have_mass = false;
    std::vector<Region> regions;
    std::vector<PointInteraction> points;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto f = split_fields(line);
        if (f.empty())
            continue;

        const std::string_view key = f[0];
        if (key == "hbar" || key == "mass") {
            expect_fields(f, 2, line_no);
            bool& seen = key == "hbar" ? have_hbar : have_mass;
            if (seen)
                throw potential_error("duplicate '" + std::string(key) + "'", line_no);
            seen = true;
            const double v = parse_number(f[1], line_no);
            if (!(v > 0.0))
                throw potential_error("'" + std::string(key) + "' must be positive", line_no);
            (key == "hbar" ? constants.hbar : constants.mass) = v;
        } else if (key == "segment") {
            expect_fields(f, 4, line_no);
            regions.push_back(Region{parse_number(f[1], line_no, Infinite::negative),
                                     parse_number(f[2], line_no, Infinite::positive), parse_number(f[3], line_no)});
        } else if (key == "delta") {
            expect_fields(f, 3, line_no);
            points.push_back(PointInteraction{parse_number(f[1], line_no), parse_number(f[2], line_no), 0.0});
        } else if (key == "deltaprime") {
            expect_fields(f, 3, line_no);
            points.push_back(PointInteraction{parse_number(f[1], line_no), 0.0, parse_number(f[2], line_no)});
        } else if (key == "point") {
            expect_fields(f, 4, line_no);
            points.push_back(PointInteraction{parse_number(f[1], line_no), parse_number(f[2], line_no),
                                              parse_number(f[3], line_no)});
        } else {
            throw potential_error("unknown keyword '" + std::string(key) + "'", line_no);
        }
    }
    return canonicalize(constants, regions, points);
}

PotentialSpec load_potential_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw potential_error("cannot open potential file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_potential_file(buf.str());
}

namespace {

std::string number(double v) {
    if (v == infinity)
        return "inf";
    if (v == -infinity)
        return "-inf";
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

} // namespace

std::string format_potential(const PotentialSpec& spec) {
    std::string out;
    out += "hbar " + number(spec.constants().hbar) + "\n";
    out += "mass " + number(spec.constants().mass) + "\n";
    for (const auto& r : spec.regions())
        out += "segment " + number(r.left) + " " + number(r.right) + " " + number(r.height) + "\n";
    for (const auto& p : spec.points())
        out += "point " + number(p.position) + " " + number(p.delta_strength) + " " +
               number(p.delta_prime_strength) + "\n";
    return out;
}

} // namespace qwi
