#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perpconj/app.hpp"
#include "perpconj/error.hpp"

namespace fs = std::filesystem;
using namespace perpconj;

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kInputError = 2;

struct SolverFlags {
    std::string region;
    std::size_t seeds = SolverConfig{}.seed_count;
    std::uint64_t rng_seed = SolverConfig{}.rng_seed;
    double eps_v = SolverConfig{}.velocity_floor;
    double root_tol = SolverConfig{}.root_tol;
    std::string format = "json";
    std::string out;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--region", region, "Search box, lo:hi[,lo:hi...]");
        cmd->add_option("--seeds", seeds, "Number of Newton seeds")->capture_default_str();
        cmd->add_option("--rng-seed", rng_seed, "Seed for the seed-lattice jitter")->capture_default_str();
        cmd->add_option("--eps-v", eps_v, "Speed above which an F-root is a perpetual point")->capture_default_str();
        cmd->add_option("--root-tol", root_tol, "Residual at an accepted root")->capture_default_str();
        cmd->add_option("--format", format, "Report format: json or csv")->capture_default_str();
        cmd->add_option("--out", out, "Write the report here instead of stdout");
    }

    SolverConfig solver() const {
        SolverConfig c;
        c.seed_count = seeds;
        c.rng_seed = rng_seed;
        c.velocity_floor = eps_v;
        c.root_tol = root_tol;
        c.validate();
        return c;
    }

    std::optional<AnalysisRegion> parsed_region() const {
        if (region.empty()) return std::nullopt;
        return app::parse_region(region);
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot write '" + path + "'");
    file << text;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad coordinate '" + item + "' in --start");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t x = text.find('x', pos);
        const std::string item = text.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
        if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
            throw ValidationError("bad grid '" + text + "' (expected N or NxM)");
        }
        out.push_back(std::stoul(item));
        if (x == std::string::npos) break;
        pos = x + 1;
    }
    return out;
}

std::string trajectory_path(const std::string& out, std::size_t k) {
    fs::path p(out);
    const std::string stem = p.stem().string();
    const std::string ext = p.has_extension() ? p.extension().string() : ".csv";
    return (p.parent_path() / (stem + "_traj" + std::to_string(k + 1) + ext)).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Fixed points, perpetual points and conjugacy checks for autonomous ODE systems"};
    cli.set_version_flag("--version", std::string(app::kToolVersion));
    cli.require_subcommand(1);

    SolverFlags analyze_flags;
    std::string analyze_system;
    auto* analyze = cli.add_subcommand("analyze", "Find fixed and perpetual points of a system");
    analyze->add_option("system", analyze_system, "System file")->required();
    analyze_flags.add_to(analyze);

    SolverFlags transform_flags;
    std::string transform_system, transform_map, transform_system_out;
    auto* transform = cli.add_subcommand("transform", "Build and analyze the system in transformed coordinates");
    transform->add_option("system", transform_system, "System file")->required();
    transform->add_option("map", transform_map, "Map file (needs an inverse)")->required();
    transform->add_option("--system-out", transform_system_out, "Write the transformed system file here");
    transform_flags.add_to(transform);

    SolverFlags verify_flags;
    std::string verify_system, verify_map, verify_target, theorems = "flow,t1,t2,t3,r1";
    double flow_time = 1.0, flow_tol = VerifyConfig{}.flow_tol;
    auto* verify = cli.add_subcommand("verify", "Check the conjugacy theorems for a system and a map");
    verify->add_option("system", verify_system, "System file")->required();
    verify->add_option("map", verify_map, "Map file")->required();
    verify->add_option("--against", verify_target, "System file for g (default: built from the map's inverse)");
    verify->add_option("--theorems", theorems, "Checks to run: flow,t1,t2,t3,r1")->capture_default_str();
    verify->add_option("--T", flow_time, "Flow comparison time")->capture_default_str();
    verify->add_option("--tol", flow_tol, "Flow residual tolerance")->capture_default_str();
    verify_flags.add_to(verify);

    std::string portrait_system, portrait_region, portrait_out, grid_text, portrait_format = "csv";
    std::size_t trajectories = 0, samples = 201;
    std::uint64_t portrait_seed = 1;
    double portrait_time = 10.0;
    std::vector<std::string> starts;
    auto* portrait = cli.add_subcommand("portrait", "Export grid and trajectory samples as CSV");
    portrait->add_option("system", portrait_system, "System file")->required();
    portrait->add_option("--region", portrait_region, "Grid box, lo:hi[,lo:hi]");
    portrait->add_option("--grid", grid_text, "Grid points, N or NxM");
    portrait->add_option("--trajectories", trajectories, "Random trajectory starts")->capture_default_str();
    portrait->add_option("--start", starts, "Trajectory start x[,y] (repeatable)");
    portrait->add_option("--T", portrait_time, "Trajectory length")->capture_default_str();
    portrait->add_option("--samples", samples, "Samples per trajectory")->capture_default_str();
    portrait->add_option("--rng-seed", portrait_seed, "Seed for random starts")->capture_default_str();
    portrait->add_option("--format", portrait_format, "Output format (csv only)")->capture_default_str();
    portrait->add_option("--out", portrait_out, "Grid CSV path; trajectories go next to it");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*analyze) {
            app::AnalyzeOptions opts;
            opts.solver = analyze_flags.solver();
            opts.region = analyze_flags.parsed_region();
            opts.format = app::parse_format(analyze_flags.format);
            write_text(analyze_flags.out, app::analyze_command(app::read_input(analyze_system), opts));
            return kOk;
        }
        if (*transform) {
            app::AnalyzeOptions opts;
            opts.solver = transform_flags.solver();
            opts.region = transform_flags.parsed_region();
            opts.format = app::parse_format(transform_flags.format);
            const auto out = app::transform_command(app::read_input(transform_system), app::read_input(transform_map), opts);
            if (!transform_system_out.empty()) write_text(transform_system_out, out.system_file);
            write_text(transform_flags.out, out.report);
            return kOk;
        }
        if (*verify) {
            app::VerifyOptions opts;
            opts.verify.solver = verify_flags.solver();
            opts.verify.flow_time = flow_time;
            opts.verify.flow_tol = flow_tol;
            opts.region = verify_flags.parsed_region();
            opts.theorems = parse_theorem_list(theorems);
            opts.format = app::parse_format(verify_flags.format);
            std::optional<app::Input> target;
            if (!verify_target.empty()) target = app::read_input(verify_target);
            const auto out =
                app::verify_command(app::read_input(verify_system), app::read_input(verify_map), target, opts);
            write_text(verify_flags.out, out.report);
            return out.passed ? kOk : kVerificationFailed;
        }
        if (*portrait) {
            if (app::parse_format(portrait_format) != app::Format::Csv) {
                throw ValidationError("portrait writes CSV only");
            }
            app::PortraitOptions opts;
            if (!portrait_region.empty()) opts.region = app::parse_region(portrait_region);
            if (!grid_text.empty()) opts.grid = parse_grid(grid_text);
            opts.trajectories = trajectories;
            for (const auto& s : starts) opts.starts.push_back(parse_point(s));
            opts.t_end = portrait_time;
            opts.samples = samples;
            opts.rng_seed = portrait_seed;
            const auto out = app::portrait_command(app::read_input(portrait_system), opts);
            if (!out.trajectory_csv.empty() && portrait_out.empty()) {
                throw ValidationError("trajectories need --out to name their files");
            }
            write_text(portrait_out, out.grid_csv);
            for (std::size_t k = 0; k < out.trajectory_csv.size(); ++k) {
                write_text(trajectory_path(portrait_out, k), out.trajectory_csv[k]);
            }
            return kOk;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
