#include "perpconj/app.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "perpconj/error.hpp"
#include "perpconj/integrator.hpp"

namespace perpconj::app {

namespace {

using json = nlohmann::ordered_json;

std::string describe_input(const Input& in) { return in.path.empty() ? std::string("<input>") : in.path; }

json parse_document(const Input& in) {
    try {
        json doc = json::parse(in.text);
        if (!doc.is_object()) throw ValidationError(describe_input(in) + ": top level must be an object");
        return doc;
    } catch (const json::parse_error& e) {
        throw ValidationError(describe_input(in) + ": " + e.what());
    }
}

void reject_unknown_keys(const json& doc, std::initializer_list<std::string_view> allowed, const Input& in) {
    for (const auto& [key, value] : doc.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(describe_input(in) + ": unknown key '" + key + "'");
        }
    }
}

const json& require(const json& doc, const char* key, const Input& in) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ValidationError(describe_input(in) + ": missing key '" + key + "'");
    return *it;
}

std::vector<std::string> string_list(const json& v, const char* key, const Input& in) {
    if (!v.is_array()) throw ValidationError(describe_input(in) + ": '" + key + "' must be a list of strings");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string()) throw ValidationError(describe_input(in) + ": '" + key + "' must be a list of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

ParameterSet parameter_map(const json& v, const Input& in) {
    if (!v.is_object()) throw ValidationError(describe_input(in) + ": 'params' must be an object of numbers");
    ParameterSet out;
    for (const auto& [key, value] : v.items()) {
        if (!value.is_number()) {
            throw ValidationError(describe_input(in) + ": parameter '" + key + "' must be a number");
        }
        const double d = value.get<double>();
        if (!std::isfinite(d)) throw ValidationError(describe_input(in) + ": parameter '" + key + "' is not finite");
        out.emplace(key, d);
    }
    return out;
}

AnalysisRegion region_value(const json& v, const char* key, const Input& in) {
    const std::string what = describe_input(in) + ": '" + key + "'";
    if (!v.is_array() || v.empty()) throw ValidationError(what + " must be a list of [lo, hi] pairs");
    std::vector<Interval> bounds;
    for (const auto& pair : v) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
            throw ValidationError(what + " must be a list of [lo, hi] pairs");
        }
        bounds.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    try {
        return AnalysisRegion(std::move(bounds));
    } catch (const ValidationError& e) {
        throw ValidationError(what + ": " + e.what());
    }
}

SystemDefinition build_system(const Input& in, std::string name, std::vector<std::string> state, ParameterSet params,
                              const std::vector<std::string>& sources, const char* key) {
    try {
        return make_system(std::move(name), std::move(state), std::move(params), sources);
    } catch (const ValidationError& e) {
        throw ValidationError(describe_input(in) + ": '" + key + "' " + e.what());
    }
}

json vector_json(std::span<const double> v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json spectrum_json(const Spectrum& s) {
    json a = json::array();
    for (const auto& z : s.values) a.push_back(json{{"re", z.real()}, {"im", z.imag()}});
    return a;
}

json region_json(const AnalysisRegion& r) {
    json a = json::array();
    for (const auto& b : r.bounds) a.push_back(json::array({b.lo, b.hi}));
    return a;
}

json system_json(const SystemDefinition& def, const std::optional<AnalysisRegion>& region) {
    json doc;
    doc["name"] = def.name;
    doc["state"] = def.state_names;
    json params = json::object();
    for (const auto& [k, v] : def.parameters) params[k] = v;
    doc["params"] = params;
    json field = json::array();
    for (const auto& e : def.components) field.push_back(to_string(e));
    doc["field"] = field;
    if (region) doc["region"] = region_json(*region);
    return doc;
}

json point_json(const CriticalPoint& p) {
    json o;
    o["location"] = vector_json(p.location);
    o["residual"] = p.residual;
    o["velocity"] = vector_json(p.velocity);
    o["speed"] = p.speed;
    const char* key = p.kind == PointKind::Fixed ? "lambda" : "mu";
    o[key] = p.spectrum_defined ? spectrum_json(p.spectrum) : json(nullptr);
    o["spectrum_defined"] = p.spectrum_defined;
    o["degenerate_flag"] = p.degenerate;
    o["boundary"] = p.boundary;
    return o;
}

json points_json(const CriticalPointSet& s) {
    json a = json::array();
    for (const auto& p : s.points) a.push_back(point_json(p));
    return a;
}

json solver_json(const SolverConfig& c) {
    json o;
    o["seeds"] = c.seed_count;
    o["rng_seed"] = c.rng_seed;
    o["eps_v"] = c.velocity_floor;
    o["root_tol"] = c.root_tol;
    o["dedup_tol"] = c.dedup_tol;
    o["classify_tol"] = c.classify_tol;
    o["degenerate_pivot"] = c.degenerate_pivot;
    o["max_newton_iters"] = c.max_newton_iters;
    o["boundary_margin"] = c.boundary_margin;
    return o;
}

json analysis_json(const CriticalPointSet& fixed, const CriticalPointSet& perpetual) {
    json o;
    o["fixed_points"] = points_json(fixed);
    o["perpetual_points"] = points_json(perpetual);
    json warnings = json::array();
    for (const auto& w : fixed.warnings) warnings.push_back(w);
    for (const auto& w : perpetual.warnings) warnings.push_back(w);
    const bool degenerate =
        std::any_of(fixed.points.begin(), fixed.points.end(), [](const auto& p) { return p.degenerate; }) ||
        std::any_of(perpetual.points.begin(), perpetual.points.end(), [](const auto& p) { return p.degenerate; });
    o["summary"] = json{{"fixed_points", fixed.points.size()},
                        {"isolated_fixed_points", fixed.isolated_count()},
                        {"perpetual_points", perpetual.points.size()},
                        {"isolated_perpetual_points", perpetual.isolated_count()},
                        {"degenerate_flag", degenerate}};
    o["warnings"] = warnings;
    return o;
}

json header_json(std::string_view command, std::initializer_list<std::pair<const char*, const Input*>> inputs) {
    json o;
    o["tool"] = kToolName;
    o["version"] = kToolVersion;
    o["command"] = command;
    json list = json::array();
    for (const auto& [role, in] : inputs) {
        if (!in) continue;
        list.push_back(json{{"role", role}, {"path", in->path}, {"sha256", sha256_hex(in->text)}});
    }
    o["inputs"] = list;
    return o;
}

json check_json(const TheoremCheck& c) {
    json o;
    o["theorem"] = to_string(c.id);
    o["verdict"] = to_string(c.verdict);
    o["worst_residual"] = c.worst_residual;
    o["tolerance"] = c.tolerance;
    json metrics = json::object();
    for (const auto& [k, v] : c.metrics) metrics[k] = v;
    o["metrics"] = metrics;
    o["notes"] = c.notes;
    json details = json::array();
    for (const auto& d : c.details) {
        json r;
        r["kind"] = to_string(d.kind);
        r["source"] = d.source ? vector_json(*d.source) : json(nullptr);
        r["mapped"] = d.mapped ? vector_json(*d.mapped) : json(nullptr);
        r["matched"] = d.matched ? vector_json(*d.matched) : json(nullptr);
        r["residual"] = d.residual ? json(*d.residual) : json(nullptr);
        r["spectrum_distance"] = d.spectrum_distance ? json(*d.spectrum_distance) : json(nullptr);
        r["similarity_residual"] = d.similarity_residual ? json(*d.similarity_residual) : json(nullptr);
        r["note"] = d.note;
        details.push_back(std::move(r));
    }
    o["details"] = details;
    return o;
}

json conjugacy_json(const ConjugacyReport& report) {
    json o;
    o["linear"] = report.linear;
    o["invertible"] = report.invertible;
    o["source_region"] = region_json(report.source_region);
    o["target_region"] = region_json(report.target_region);
    json checks = json::array();
    for (const auto& c : report.checks) checks.push_back(check_json(c));
    o["checks"] = checks;
    o["passed"] = report.passed();
    return o;
}

void merge_into(json& doc, const json& extra) {
    for (const auto& [k, v] : extra.items()) doc[k] = v;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string complex_text(const std::complex<double>& z) {
    if (z.imag() == 0.0) return format_double(z.real());
    return format_double(z.real()) + (z.imag() < 0 ? "-" : "+") + format_double(std::abs(z.imag())) + "i";
}

std::string points_csv(const SystemDefinition& def, const CriticalPointSet& fixed, const CriticalPointSet& perpetual) {
    std::string out = "kind";
    for (const auto& s : def.state_names) out += "," + s;
    for (const auto& s : def.state_names) out += ",v_" + s;
    out += ",speed,residual,spectrum,degenerate,boundary\n";
    for (const CriticalPointSet* set : {&fixed, &perpetual}) {
        for (const auto& p : set->points) {
            out += std::string(to_string(p.kind));
            for (double v : p.location) out += "," + format_double(v);
            for (double v : p.velocity) out += "," + format_double(v);
            out += "," + format_double(p.speed) + "," + format_double(p.residual) + ",";
            if (p.spectrum_defined) {
                for (std::size_t i = 0; i < p.spectrum.values.size(); ++i) {
                    if (i) out += ";";
                    out += complex_text(p.spectrum.values[i]);
                }
            }
            out += p.degenerate ? ",1" : ",0";
            out += p.boundary ? ",1\n" : ",0\n";
        }
    }
    return out;
}

AnalysisRegion resolve_region(const std::optional<AnalysisRegion>& override_region,
                              const std::optional<AnalysisRegion>& file_region, std::size_t dimension) {
    const auto& r = override_region ? override_region : file_region;
    if (!r) throw ValidationError("no region given: add 'region' to the system file or pass --region");
    if (r->dimension() != dimension) {
        throw ValidationError("region has " + std::to_string(r->dimension()) + " dimensions, system has " +
                              std::to_string(dimension));
    }
    return *r;
}

struct LoadedMap {
    MapFile file;
    TransformationMap h;
};

LoadedMap load_map(const Input& map, const SystemDefinition& f) {
    MapFile mf = parse_map_file(map, f.state_names);
    TransformationMap h(mf.map, mf.domain, mf.linear, mf.target_names);
    return {std::move(mf), std::move(h)};
}

VectorField transformed(const VectorField& f, const LoadedMap& m) {
    if (!m.file.inverse) throw ValidationError("the map file has no 'inverse'; it is needed to build g");
    TransformationMap inv(*m.file.inverse, m.h.image_region(), m.file.linear, f.definition().state_names);
    return transformed_system(f, m.h, inv);
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

Input read_input(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ValidationError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << file.rdbuf();
    return {path, ss.str()};
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

SystemFile parse_system_file(const Input& in) {
    const json doc = parse_document(in);
    reject_unknown_keys(doc, {"name", "state", "params", "field", "region"}, in);
    const json& name = require(doc, "name", in);
    if (!name.is_string()) throw ValidationError(describe_input(in) + ": 'name' must be a string");
    auto state = string_list(require(doc, "state", in), "state", in);
    ParameterSet params;
    if (doc.contains("params")) params = parameter_map(doc["params"], in);
    const auto field = string_list(require(doc, "field", in), "field", in);
    if (field.size() != state.size()) {
        throw ValidationError(describe_input(in) + ": 'field' has " + std::to_string(field.size()) +
                              " expressions for " + std::to_string(state.size()) + " state variables");
    }
    SystemFile out{build_system(in, name.get<std::string>(), std::move(state), std::move(params), field, "field"),
                   std::nullopt};
    if (doc.contains("region")) {
        out.region = region_value(doc["region"], "region", in);
        if (out.region->dimension() != out.definition.dimension()) {
            throw ValidationError(describe_input(in) + ": 'region' dimension does not match 'state'");
        }
    }
    return out;
}

MapFile parse_map_file(const Input& in, const std::vector<std::string>& source_state) {
    const json doc = parse_document(in);
    reject_unknown_keys(doc, {"map", "inverse", "params", "domain", "linear", "state"}, in);
    const std::size_t n = source_state.size();
    const auto map = string_list(require(doc, "map", in), "map", in);
    if (map.size() != n) {
        throw ValidationError(describe_input(in) + ": 'map' has " + std::to_string(map.size()) +
                              " expressions, the system has dimension " + std::to_string(n));
    }
    ParameterSet params;
    if (doc.contains("params")) params = parameter_map(doc["params"], in);

    MapFile out;
    if (doc.contains("state")) {
        out.target_names = string_list(doc["state"], "state", in);
        if (out.target_names.size() != n) {
            throw ValidationError(describe_input(in) + ": 'state' must name " + std::to_string(n) + " coordinates");
        }
    } else if (n == 1) {
        out.target_names = {"y"};
    } else {
        for (std::size_t i = 0; i < n; ++i) out.target_names.push_back("y" + std::to_string(i + 1));
    }
    for (const auto& t : out.target_names) {
        if (std::find(source_state.begin(), source_state.end(), t) != source_state.end()) {
            throw ValidationError(describe_input(in) + ": target coordinate '" + t +
                                  "' clashes with a system state name; set 'state'");
        }
    }
    if (doc.contains("linear")) {
        if (!doc["linear"].is_boolean()) throw ValidationError(describe_input(in) + ": 'linear' must be true or false");
        out.linear = doc["linear"].get<bool>();
    }
    out.domain = region_value(require(doc, "domain", in), "domain", in);
    if (out.domain.dimension() != n) {
        throw ValidationError(describe_input(in) + ": 'domain' dimension does not match the system");
    }
    out.map = build_system(in, "h", source_state, params, map, "map");
    if (doc.contains("inverse")) {
        const auto inv = string_list(doc["inverse"], "inverse", in);
        if (inv.size() != n) throw ValidationError(describe_input(in) + ": 'inverse' must have " + std::to_string(n) + " expressions");
        out.inverse = build_system(in, "h_inverse", out.target_names, params, inv, "inverse");
    }
    return out;
}

AnalysisRegion parse_region(std::string_view text) {
    std::vector<Interval> bounds;
    auto number = [&](std::string_view s) {
        double v = 0.0;
        const char* first = s.data();
        const char* last = s.data() + s.size();
        if (first != last && *first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) throw ValidationError("bad number '" + std::string(s) + "' in region");
        return v;
    };
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        const std::size_t colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw ValidationError("region interval '" + std::string(item) + "' must look like lo:hi");
        }
        bounds.push_back({number(item.substr(0, colon)), number(item.substr(colon + 1))});
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return AnalysisRegion(std::move(bounds));
}

std::string system_file_text(const SystemDefinition& def, const std::optional<AnalysisRegion>& region) {
    return dump(system_json(def, region));
}

Format parse_format(std::string_view text) {
    if (text == "json") return Format::Json;
    if (text == "csv") return Format::Csv;
    throw ValidationError("unknown format '" + std::string(text) + "' (expected json or csv)");
}

std::string analyze_command(const Input& system, const AnalyzeOptions& opts) {
    const SystemFile sf = parse_system_file(system);
    const AnalysisRegion region = resolve_region(opts.region, sf.region, sf.definition.dimension());
    const CriticalPointFinder finder(VectorField(sf.definition), opts.solver);
    const CriticalPointSet fixed = finder.fixed_points(region);
    const CriticalPointSet perpetual = finder.perpetual_points(region);
    if (opts.format == Format::Csv) return points_csv(sf.definition, fixed, perpetual);

    json doc = header_json("analyze", {{"system", &system}});
    doc["settings"] = solver_json(opts.solver);
    doc["settings"]["region"] = region.to_string();
    doc["system"] = system_json(sf.definition, sf.region);
    merge_into(doc, analysis_json(fixed, perpetual));
    return dump(doc);
}

TransformOutput transform_command(const Input& system, const Input& map, const AnalyzeOptions& opts) {
    const SystemFile sf = parse_system_file(system);
    const VectorField f(sf.definition);
    const LoadedMap m = load_map(map, sf.definition);
    const VectorField g = transformed(f, m);
    AnalysisRegion region = opts.region ? *opts.region : m.h.image_region();
    if (region.dimension() != g.dimension()) throw ValidationError("region dimension does not match the system");

    const CriticalPointFinder finder(g, opts.solver);
    const CriticalPointSet fixed = finder.fixed_points(region);
    const CriticalPointSet perpetual = finder.perpetual_points(region);

    TransformOutput out;
    out.system_file = system_file_text(g.definition(), region);
    if (opts.format == Format::Csv) {
        out.report = points_csv(g.definition(), fixed, perpetual);
        return out;
    }
    json doc = header_json("transform", {{"system", &system}, {"map", &map}});
    doc["settings"] = solver_json(opts.solver);
    doc["settings"]["region"] = region.to_string();
    doc["system"] = system_json(sf.definition, sf.region);
    json mj;
    json comps = json::array();
    for (const auto& e : m.file.map.components) comps.push_back(to_string(e));
    mj["map"] = comps;
    mj["target_state"] = m.file.target_names;
    mj["domain"] = region_json(m.file.domain);
    mj["linear"] = m.file.linear;
    doc["map"] = mj;
    doc["transformed_system"] = system_json(g.definition(), region);
    merge_into(doc, analysis_json(fixed, perpetual));
    out.report = dump(doc);
    return out;
}

VerifyOutput verify_command(const Input& system, const Input& map, const std::optional<Input>& target,
                            const VerifyOptions& opts) {
    const SystemFile sf = parse_system_file(system);
    const VectorField f(sf.definition);
    const LoadedMap m = load_map(map, sf.definition);
    std::optional<VectorField> g;
    if (target) {
        SystemFile tf = parse_system_file(*target);
        if (tf.definition.state_names != m.file.target_names) {
            throw ValidationError(describe_input(*target) + ": state names must match the map's target coordinates");
        }
        g.emplace(std::move(tf.definition));
    } else {
        g.emplace(transformed(f, m));
    }
    if (opts.region && opts.region->dimension() != f.dimension()) {
        throw ValidationError("region dimension does not match the system");
    }

    ConjugacyVerifier verifier(f, m.h, *g, opts.verify, opts.region);
    const ConjugacyReport report = verifier.run(opts.theorems);

    VerifyOutput out;
    out.passed = report.passed();
    if (opts.format == Format::Csv) {
        std::string csv = "theorem,verdict,worst_residual,tolerance\n";
        for (const auto& c : report.checks) {
            csv += std::string(to_string(c.id)) + "," + std::string(to_string(c.verdict)) + "," +
                   format_double(c.worst_residual) + "," + format_double(c.tolerance) + "\n";
        }
        out.report = csv;
        return out;
    }

    json doc = header_json("verify", {{"system", &system}, {"map", &map}, {"target", target ? &*target : nullptr}});
    json settings = solver_json(opts.verify.solver);
    settings["match_tol"] = opts.verify.effective_match_tol();
    settings["spectrum_tol"] = opts.verify.spectrum_tol;
    settings["similarity_tol"] = opts.verify.similarity_tol;
    settings["flow_tol"] = opts.verify.flow_tol;
    settings["T"] = opts.verify.flow_time;
    settings["flow_samples"] = opts.verify.flow_samples;
    settings["flow_points"] = opts.verify.flow_points;
    json ids = json::array();
    for (TheoremId id : opts.theorems) ids.push_back(to_string(id));
    settings["theorems"] = ids;
    doc["settings"] = settings;
    doc["system"] = system_json(sf.definition, sf.region);
    doc["transformed_system"] = system_json(g->definition(), verifier.target_region());
    merge_into(doc, conjugacy_json(report));
    out.report = dump(doc);
    return out;
}

std::string report_json(const ConjugacyReport& report) { return dump(conjugacy_json(report)); }

PortraitOutput portrait_command(const Input& system, const PortraitOptions& opts) {
    const SystemFile sf = parse_system_file(system);
    const std::size_t n = sf.definition.dimension();
    if (n > 2) throw ValidationError("portrait supports one- and two-dimensional systems only");
    const AnalysisRegion region = resolve_region(opts.region, sf.region, n);
    std::vector<std::size_t> grid = opts.grid;
    if (grid.empty()) grid.assign(n, n == 1 ? 101 : 21);
    if (grid.size() == 1 && n == 2) grid.push_back(grid[0]);
    if (grid.size() != n) throw ValidationError("grid has the wrong number of dimensions");
    for (std::size_t g : grid) {
        if (g == 0) throw ValidationError("grid sizes must be positive");
    }

    const VectorField f(sf.definition);
    const VectorField acc = acceleration_field(f);
    // lo*(m-1-i)/(m-1) + hi*i/(m-1): symmetric grids hit 0 exactly
    auto coord = [&](std::size_t d, std::size_t i) {
        const auto& b = region.bounds[d];
        if (grid[d] == 1) return 0.5 * (b.lo + b.hi);
        const double m = static_cast<double>(grid[d] - 1);
        const double k = static_cast<double>(i);
        return b.lo * ((m - k) / m) + b.hi * (k / m);
    };

    PortraitOutput out;
    std::string& csv = out.grid_csv;
    csv = n == 1 ? "x,f1,F1\n" : "x,y,f1,f2,F1,F2\n";
    auto row = [&](const Vector& x) {
        Vector fv(n, std::nan("")), Fv(n, std::nan(""));
        try {
            fv = f.value(x);
        } catch (const DomainError&) {
        }
        try {
            Fv = acc.value(x);
        } catch (const DomainError&) {
        }
        std::string line;
        for (double v : x) line += format_double(v) + ",";
        for (double v : fv) line += format_double(v) + ",";
        for (std::size_t i = 0; i < n; ++i) line += format_double(Fv[i]) + (i + 1 < n ? "," : "\n");
        csv += line;
    };
    if (n == 1) {
        for (std::size_t i = 0; i < grid[0]; ++i) row({coord(0, i)});
    } else {
        for (std::size_t j = 0; j < grid[1]; ++j) {
            for (std::size_t i = 0; i < grid[0]; ++i) row({coord(0, i), coord(1, j)});
        }
    }

    std::vector<Vector> starts = opts.starts;
    for (const auto& s : starts) {
        if (s.size() != n) throw ValidationError("trajectory start has the wrong dimension");
    }
    Rng rng(opts.rng_seed);
    for (std::size_t k = 0; k < opts.trajectories; ++k) starts.push_back(rng.point_in(region));

    IntegratorConfig icfg;
    icfg.t_end = opts.t_end;
    icfg.sample_count = opts.samples;
    icfg.validate();
    for (const auto& x0 : starts) {
        Trajectory t;
        try {
            t = integrate(f, x0, icfg);
        } catch (const BlowUp& e) {
            t = e.partial();
        } catch (const StepUnderflow& e) {
            t = e.partial();
        }
        std::string tc = n == 1 ? "t,x\n" : "t,x,y\n";
        for (const auto& s : t.samples) {
            tc += format_double(s.t);
            for (double v : s.state) tc += "," + format_double(v);
            tc += "\n";
        }
        out.trajectory_csv.push_back(std::move(tc));
    }
    return out;
}

}  // namespace perpconj::app
