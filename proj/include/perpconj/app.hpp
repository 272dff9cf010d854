#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perpconj/conjugacy.hpp"
#include "perpconj/critical_points.hpp"
#include "perpconj/field.hpp"
#include "perpconj/region.hpp"
#include "perpconj/system.hpp"

namespace perpconj::app {

inline constexpr std::string_view kToolName = "perpconj";
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Raw contents of an input file plus the name it is reported under.
struct Input {
    std::string path;
    std::string text;
};

/// Reads a whole file. Throws ValidationError when it can't be read.
Input read_input(const std::string& path);

std::string sha256_hex(std::string_view data);

/// System file (JSON object, unknown keys rejected):
///   name: string, state: [string], params: {string: number},
///   field: [expression], region: [[lo, hi], ...] (optional)
struct SystemFile {
    SystemDefinition definition;
    std::optional<AnalysisRegion> region;
};

/// Map file (JSON object, unknown keys rejected):
///   map: [expression in the system's state names], inverse: [expression in
///   the target names] (optional), params: {string: number} (optional),
///   domain: [[lo, hi], ...], linear: bool (optional, default false),
///   state: [target names] (optional; "y" for one dimension, y1..yn otherwise)
struct MapFile {
    SystemDefinition map;
    std::optional<SystemDefinition> inverse;
    AnalysisRegion domain;
    bool linear = false;
    std::vector<std::string> target_names;
};

SystemFile parse_system_file(const Input& in);
/// `source_state` are the coordinates the map is written in.
MapFile parse_map_file(const Input& in, const std::vector<std::string>& source_state);

/// "lo:hi[,lo:hi...]"
AnalysisRegion parse_region(std::string_view text);

/// Serializes a system (and optional region) in the system file format.
std::string system_file_text(const SystemDefinition& def, const std::optional<AnalysisRegion>& region);

enum class Format { Json, Csv };

Format parse_format(std::string_view text);

struct AnalyzeOptions {
    SolverConfig solver;
    std::optional<AnalysisRegion> region;  // overrides the file's region
    Format format = Format::Json;
};

struct VerifyOptions {
    VerifyConfig verify;
    std::optional<AnalysisRegion> region;  // source region; default: the map domain
    std::vector<TheoremId> theorems = all_theorems();
    Format format = Format::Json;
};

struct PortraitOptions {
    std::optional<AnalysisRegion> region;
    std::vector<std::size_t> grid;  // points per dimension; empty: 101 (1D) or 21x21 (2D)
    std::size_t trajectories = 0;   // random starts in the region, besides `starts`
    std::vector<Vector> starts;
    double t_end = 10.0;
    std::size_t samples = 201;
    std::uint64_t rng_seed = 1;
};

/// Report for `analyze`: fixed and perpetual points of the system.
std::string analyze_command(const Input& system, const AnalyzeOptions& opts);

struct TransformOutput {
    std::string report;       // analysis of g on the image region, with g's definition
    std::string system_file;  // g in the system file format
};

/// Needs the map's inverse. Throws ValidationError otherwise.
TransformOutput transform_command(const Input& system, const Input& map, const AnalyzeOptions& opts);

struct VerifyOutput {
    std::string report;
    bool passed = true;  // no requested check failed
};

/// g comes from `target` when given, otherwise from the map's inverse.
VerifyOutput verify_command(const Input& system, const Input& map, const std::optional<Input>& target,
                            const VerifyOptions& opts);

struct PortraitOutput {
    std::string grid_csv;
    std::vector<std::string> trajectory_csv;
};

/// Grid of f and F values (header "x,f1,F1" or "x,y,f1,f2,F1,F2") and one
/// CSV per trajectory ("t,x" or "t,x,y"). Dimension above 2 is a ValidationError.
PortraitOutput portrait_command(const Input& system, const PortraitOptions& opts);

/// JSON object describing one verification (no tool or input metadata).
std::string report_json(const ConjugacyReport& report);

/// Shortest round-trip decimal form, '.' separator.
std::string format_double(double v);

}  // namespace perpconj::app
