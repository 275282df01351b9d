#include "qwi/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qwi/oracle.hpp"
#include "qwi/potential.hpp"
#include "qwi/spectrum.hpp"
#include "qwi/wavefunction.hpp"

namespace qwi::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* command_name(Command c) {
    switch (c) {
    case Command::scatter: return "scatter";
    case Command::sweep: return "sweep";
    case Command::bound: return "bound";
    case Command::wavefunction: return "wavefunction";
    case Command::validate: return "validate";
    }
    return "?";
}

// Column-ordered table written as CSV or as {"input": ..., "rows": [...]}.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    struct Cell {
        double number = 0.0;
        std::string text;
        bool is_text = false;
        bool is_integer = false;
        Cell(double v) : number(v) {}
        Cell(int v) : number(v), is_integer(true) {}
        Cell(std::string s) : text(std::move(s)), is_text(true) {}
    };

    void add(std::vector<Cell> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& os, Format format, const Json& input) const {
        if (format == Format::csv) {
            for (std::size_t i = 0; i < columns_.size(); ++i)
                os << (i ? "," : "") << columns_[i];
            os << '\n';
            for (const auto& row : rows_) {
                for (std::size_t i = 0; i < row.size(); ++i)
                    os << (i ? "," : "") << (row[i].is_text ? row[i].text : fmt17(row[i].number));
                os << '\n';
            }
            return;
        }
        Json doc;
        doc["input"] = input;
        doc["rows"] = Json::array();
        for (const auto& row : rows_) {
            Json obj = Json::object();
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (row[i].is_text)
                    obj[columns_[i]] = row[i].text;
                else if (row[i].is_integer)
                    obj[columns_[i]] = static_cast<long long>(row[i].number);
                else if (std::isfinite(row[i].number))
                    obj[columns_[i]] = row[i].number;
                else
                    obj[columns_[i]] = fmt17(row[i].number);
            }
            doc["rows"].push_back(std::move(obj));
        }
        os << doc.dump(2) << '\n';
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

Json echo(const RunConfig& c) {
    Json in;
    in["command"] = command_name(c.command);
    in["potential"] = c.potential_path;
    if (c.energy)
        in["energy"] = *c.energy;
    if (c.command == Command::sweep) {
        in["emin"] = *c.e_min;
        in["emax"] = *c.e_max;
        in["steps"] = c.steps;
    }
    if (c.command == Command::wavefunction) {
        if (c.x_min)
            in["xmin"] = *c.x_min;
        if (c.x_max)
            in["xmax"] = *c.x_max;
        in["samples"] = c.samples;
        if (!c.energy)
            in["index"] = c.index;
    }
    if (c.tolerance)
        in["tol"] = *c.tolerance;
    in["side"] = c.side == IncidentSide::left ? "left" : "right";
    return in;
}

Table scattering_table() {
    return Table({"E", "re_r", "im_r", "re_t", "im_t", "R", "T", "unitarity_defect"});
}

void add_scattering_row(Table& t, double e, const ScatteringResult& s) {
    t.add({e, s.r.real(), s.r.imag(), s.t.real(), s.t.imag(), s.R, s.T, s.unitarity_defect});
}

std::vector<BoundState> bound_states(const PotentialSpec& spec, const RunConfig& c) {
    return find_bound_states(spec, std::nullopt, default_grid_points, c.tolerance);
}

int run_validate(const PotentialSpec& spec, const RunConfig& c, Table& table) {
    double worst = 0.0;
    auto record = [&](const std::string& name, double dev) {
        table.add({name, dev});
        worst = std::isnan(dev) ? std::numeric_limits<double>::infinity() : std::max(worst, dev);
    };
    if (c.energy) {
        const double e = *c.energy;
        for (auto side : {IncidentSide::left, IncidentSide::right}) {
            const double floor = side == IncidentSide::left ? spec.left_asymptote() : spec.right_asymptote();
            if (!(e > floor))
                continue;
            const auto engine = solve(spec, e, side);
            const auto reference = oracle::oracle_scatter(spec, e, side);
            record(side == IncidentSide::left ? "scatter_left" : "scatter_right",
                   relative_deviation(engine, reference));
        }
    }
    const double floor = default_energy_floor(spec);
    const auto engine = find_bound_states(spec, floor, default_grid_points, c.tolerance);
    const double oracle_floor = engine.empty() ? floor : std::min(floor, 2.0 * engine.front().energy - 1.0);
    const auto reference = oracle::oracle_bound_states(spec, oracle_floor, c.tolerance.value_or(1e-13));
    double dev = engine.size() == reference.size() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < std::min(engine.size(), reference.size()); ++i)
        dev = std::max(dev, std::abs(engine[i].energy - reference[i].energy) / std::max(1.0, std::abs(reference[i].energy)));
    record("bound_states", dev);
    table.add({std::string("max"), worst});
    return worst <= validation_threshold ? exit_ok : exit_validation_failed;
}

int execute(const RunConfig& c, std::ostream& os) {
    const PotentialSpec spec = load_potential_file(c.potential_path);
    int code = exit_ok;
    switch (c.command) {
    case Command::scatter: {
        Table t = scattering_table();
        add_scattering_row(t, *c.energy, solve(spec, *c.energy, c.side));
        t.write(os, c.format, echo(c));
        break;
    }
    case Command::sweep: {
        Table t = scattering_table();
        for (const auto& row : sweep(spec, *c.e_min, *c.e_max, c.steps, c.side, c.threads))
            add_scattering_row(t, row.energy, row.result);
        t.write(os, c.format, echo(c));
        break;
    }
    case Command::bound: {
        Table t({"index", "E", "kappa_left", "kappa_right"});
        for (const auto& s : bound_states(spec, c))
            t.add({s.label, s.energy, s.kappa_left, s.kappa_right});
        t.write(os, c.format, echo(c));
        break;
    }
    case Command::wavefunction: {
        ImpedanceProfile profile;
        double margin = 10.0;
        if (c.energy) {
            const double floor = c.side == IncidentSide::left ? spec.left_asymptote() : spec.right_asymptote();
            if (!(*c.energy > floor))
                throw domain_error("no propagating channel on the incident side");
            profile = fold_impedance(spec, *c.energy,
                                     c.side == IncidentSide::left ? Direction::leftward : Direction::rightward);
        } else {
            const auto states = bound_states(spec, c);
            if (c.index < 0 || static_cast<std::size_t>(c.index) >= states.size())
                throw domain_error("bound state index " + std::to_string(c.index) + " not found (" +
                                   std::to_string(states.size()) + " bound states)");
            const auto& s = states[static_cast<std::size_t>(c.index)];
            profile = fold_impedance(spec, s.energy, Direction::leftward);
            margin = 12.0 / std::min(s.kappa_left, s.kappa_right);
        }
        const std::size_t n = spec.boundary_count();
        const double lo = c.x_min.value_or((n ? spec.boundary(0) : 0.0) - margin);
        const double hi = c.x_max.value_or((n ? spec.boundary(n - 1) : 0.0) + margin);
        const auto grid = uniform_grid(lo, hi, c.samples);
        auto samples = reconstruct(profile, grid);
        if (samples.normalizable)
            samples = normalize(std::move(samples));
        Table t({"x", "re_psi", "im_psi", "abs2_psi"});
        for (std::size_t i = 0; i < samples.xs.size(); ++i)
            t.add({samples.xs[i], samples.psi[i].real(), samples.psi[i].imag(), std::norm(samples.psi[i])});
        t.write(os, c.format, echo(c));
        break;
    }
    case Command::validate: {
        Table t({"check", "deviation"});
        code = run_validate(spec, c, t);
        t.write(os, c.format, echo(c));
        break;
    }
    }
    return code;
}

} // namespace

void check(const RunConfig& c) {
    if (c.potential_path.empty())
        throw usage_error("--potential is required");
    switch (c.command) {
    case Command::scatter:
        if (!c.energy)
            throw usage_error("scatter requires --energy");
        break;
    case Command::sweep:
        if (!c.e_min || !c.e_max)
            throw usage_error("sweep requires --emin and --emax");
        if (c.steps < 1)
            throw usage_error("--steps must be >= 1");
        break;
    case Command::wavefunction:
        if (c.samples < 2)
            throw usage_error("--samples must be >= 2");
        break;
    case Command::bound:
    case Command::validate:
        break;
    }
    if (c.tolerance && !(*c.tolerance > 0.0))
        throw usage_error("--tol must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        check(config);
        if (config.out_path.empty())
            return execute(config, out);
        std::ofstream file(config.out_path, std::ios::binary);
        if (!file)
            throw usage_error("cannot open output file '" + config.out_path + "'");
        return execute(config, file);
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const potential_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain;
    }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    if (const char* env = std::getenv("QWI_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0) {
            err << "error: QWI_THREADS must be a non-negative integer\n";
            return exit_usage;
        }
        config.threads = static_cast<unsigned>(v);
    }

    CLI::App app{"1D scattering and bound states of piecewise-constant potentials with delta and delta' "
                 "interactions (quantum wave impedance solver)",
                 "qwi"};
    app.require_subcommand(1);
    const std::map<std::string, IncidentSide> sides{{"left", IncidentSide::left}, {"right", IncidentSide::right}};
    const std::map<std::string, Format> formats{{"csv", Format::csv}, {"json", Format::json}};

    auto add = [&](const char* name, Command command, const char* description) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--potential", config.potential_path, "Potential file")->required();
        sub->add_option("--energy", config.energy, "Energy");
        sub->add_option("--emin", config.e_min, "Sweep start energy");
        sub->add_option("--emax", config.e_max, "Sweep end energy");
        sub->add_option("--steps", config.steps, "Sweep grid points (inclusive)");
        sub->add_option("--xmin", config.x_min, "Wavefunction grid start");
        sub->add_option("--xmax", config.x_max, "Wavefunction grid end");
        sub->add_option("--samples", config.samples, "Wavefunction grid points");
        sub->add_option("--tol", config.tolerance, "Bound-state energy tolerance");
        sub->add_option("--index", config.index, "Bound state to reconstruct when --energy is absent");
        sub->add_option("--side", config.side, "Incident side (left|right)")
            ->transform(CLI::CheckedTransformer(sides, CLI::ignore_case));
        sub->add_option("--format", config.format, "Output format (csv|json)")
            ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
        sub->add_option("--out", config.out_path, "Output path (default stdout)");
        sub->callback([&config, command] { config.command = command; });
    };
    add("scatter", Command::scatter, "Reflection and transmission at one energy");
    add("sweep", Command::sweep, "Reflection and transmission on an energy grid");
    add("bound", Command::bound, "Bound-state energies");
    add("wavefunction", Command::wavefunction, "Sampled wavefunction (bound state or scattering state)");
    add("validate", Command::validate, "Compare the impedance engine with the transfer-matrix oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return run(config, out, err);
}

} // namespace qwi::cli
