#include "topodeg/cli.hpp"

#include "topodeg/bmo.hpp"
#include "topodeg/degree.hpp"
#include "topodeg/io.hpp"
#include "topodeg/mapzoo.hpp"
#include "topodeg/regularity.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace topodeg {

using nlohmann::ordered_json;

Vec parse_vec(const std::string& text) {
    std::vector<double> parts = parse_list(text);
    if (parts.size() < 2 || parts.size() > kMaxDim)
        throw UsageError("expected 2 or 3 comma-separated coordinates: " + text);
    Vec v(static_cast<int>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[i] = parts[i];
    return v;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        if (used != cell.size()) throw UsageError("bad number '" + cell + "'");
        out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty number list: " + text);
    return out;
}

Domain resolve_domain_spec(const std::string& spec, int res) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (kind == "disk") {
            const double r = rest.empty() ? 1.0 : std::stod(rest);
            return Domain::ball(vec2(0, 0), r, res);
        }
        if (kind == "ball") {
            const auto second = rest.find(':');
            if (second == std::string::npos) throw UsageError("ball spec: ball:cx,cy[,cz]:r");
            const Vec c = parse_vec(rest.substr(0, second));
            return Domain::ball(c, std::stod(rest.substr(second + 1)), res);
        }
        if (kind == "box") {
            const auto second = rest.find(':');
            if (second == std::string::npos) throw UsageError("box spec: box:lo...:hi...");
            return Domain::box(parse_vec(rest.substr(0, second)),
                               parse_vec(rest.substr(second + 1)), res);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("domain: ") + e.what());
    }
    throw UsageError("unknown domain spec '" + spec + "' (disk:r, ball:c:r, box:lo:hi)");
}

MapField resolve_map_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (name == "grid") return load_grid_map(rest);
        if (name == "tilde") {
            const auto second = rest.find(':');
            const std::string surf = second == std::string::npos ? rest : rest.substr(0, second);
            const double d =
                second == std::string::npos ? 0.25 : std::stod(rest.substr(second + 1));
            return tilde_F(surface_preset(surf), d);
        }
        std::map<std::string, double> params;
        if (!rest.empty()) {
            const std::vector<double> values = parse_list(rest);
            if (name == "zpow" || name == "winding_boundary") {
                params["k"] = values.at(0);
            } else if (name == "rotation") {
                params["theta"] = values.at(0);
            } else if (name == "translate") {
                params["tx"] = values.at(0);
                params["ty"] = values.at(1);
            } else if (name == "linear") {
                params["a00"] = values.at(0);
                params["a01"] = values.at(1);
                params["a10"] = values.at(2);
                params["a11"] = values.at(3);
            } else if (name == "spike") {
                params["amplitude"] = values.at(0);
            } else {
                throw UsageError("map '" + name + "' takes no parameters");
            }
        }
        return preset(name, params).map;
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("map: ") + e.what());
    } catch (const std::out_of_range&) {
        throw UsageError("map '" + spec + "': missing parameters");
    }
}

std::string RunConfig::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["map"] = map_spec;
    j["domain"] = domain_spec;
    j["res"] = res;
    j["bres"] = bres;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["out"] = out;
    j["probes"] = probes;
    j["method"] = method;
    j["bump"] = bump;
    j["yres"] = yres;
    j["ywindow"] = ywindow;
    j["a"] = a;
    j["radii"] = radii;
    j["scales"] = scales;
    j["base_scale"] = base_scale;
    j["centers"] = centers;
    j["p"] = p;
    j["schedule"] = schedule;
    j["trim"] = trim;
    j["points"] = points;
    j["theta"] = theta;
    j["surface"] = surface;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunConfig c;
    c.command = j.at("command");
    c.map_spec = j.at("map");
    c.domain_spec = j.at("domain");
    c.res = j.at("res");
    c.bres = j.at("bres");
    c.seed = j.at("seed");
    c.jobs = j.at("jobs");
    c.out = j.at("out");
    c.probes = j.at("probes").get<std::vector<std::string>>();
    c.method = j.at("method");
    c.bump = j.at("bump");
    c.yres = j.at("yres");
    c.ywindow = j.at("ywindow");
    c.a = j.at("a");
    c.radii = j.at("radii");
    c.scales = j.at("scales");
    c.base_scale = j.at("base_scale");
    c.centers = j.at("centers");
    c.p = j.at("p");
    c.schedule = j.at("schedule");
    c.trim = j.at("trim");
    c.points = j.at("points");
    c.theta = j.at("theta");
    c.surface = j.at("surface");
    return c;
}

namespace {

void add_common(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--map", c.map_spec, "map spec (zoo name[:params], grid:path, tilde:surf:d)");
    cmd->add_option("--domain", c.domain_spec, "domain spec (disk:r, ball:c:r, box:lo:hi)");
    cmd->add_option("--res", c.res, "domain grid resolution")->check(CLI::Range(8, 4096));
    cmd->add_option("--bres", c.bres, "boundary mesh resolution")->check(CLI::Range(16, 1 << 20));
    cmd->add_option("--seed", c.seed, "rng seed");
    cmd->add_option("--jobs", c.jobs, "worker threads (0 = auto)");
    cmd->add_option("--out", c.out, "output path prefix");
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
    // A config file reproduces the run exactly.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            std::ifstream in(args[i + 1]);
            if (!in) throw UsageError("cannot open config file " + args[i + 1]);
            std::stringstream ss;
            ss << in.rdbuf();
            return RunConfig::from_json(ss.str());
        }
    }

    RunConfig c;
    CLI::App app{"Brouwer degree and oscillation diagnostics toolkit"};
    app.require_subcommand(1);

    CLI::App* zoo = app.add_subcommand("zoo", "catalogue of preset maps");
    std::string zoo_action = "list";
    zoo->add_option("action", zoo_action)->check(CLI::IsMember({"list"}));
    zoo->add_option("--out", c.out, "output path prefix");

    CLI::App* degree = app.add_subcommand("degree", "degree of a map at probe points");
    add_common(degree, c);
    degree->add_option("--y", c.probes, "probe point(s) 'x,y'")->required();
    degree->add_option("--method", c.method)
        ->check(CLI::IsMember({"all", "counting", "integral", "winding", "pullback"}));
    degree->add_option("--bump", c.bump, "bump radius for integral/pullback");

    CLI::App* escan = app.add_subcommand("escan", "degree raster of the target plane (E set)");
    add_common(escan, c);
    escan->add_option("--yres", c.yres, "raster cells per axis");
    escan->add_option("--ywindow", c.ywindow, "window 'lo0,lo1:hi0,hi1' (default: image box)");

    CLI::App* fscan = app.add_subcommand("fscan", "possible-value set F(a) over shrinking balls");
    add_common(fscan, c);
    fscan->add_option("--a", c.a, "center point 'x,y'")->required();
    fscan->add_option("--radii", c.radii, "descending radii list")->required();
    fscan->add_option("--yres", c.yres, "raster cells per axis");

    CLI::App* bmocmd = app.add_subcommand("bmo", "BMO seminorm estimate and VMO modulus");
    add_common(bmocmd, c);
    bmocmd->add_option("--scales", c.scales, "dyadic scale count")->check(CLI::Range(4, 16));
    bmocmd->add_option("--base", c.base_scale, "largest scale (0 = auto)");
    bmocmd->add_option("--centers", c.centers, "max centers per scale");

    CLI::App* vmodeg = app.add_subcommand("vmodegree", "degree of averaged maps on shrunken domains");
    add_common(vmodeg, c);
    vmodeg->add_option("--p", c.p, "probe point")->required();
    vmodeg->add_option("--schedule", c.schedule, "descending eps schedule");

    CLI::App* cov = app.add_subcommand("cov", "change-of-variables residual");
    add_common(cov, c);
    cov->add_option("--p", c.p, "bump center")->required();
    cov->add_option("--bump", c.bump, "bump radius");
    cov->add_option("--schedule", c.schedule, "eps schedule for the degree side");

    CLI::App* energy = app.add_subcommand("energy", "elastic / immersion energy");
    add_common(energy, c);
    energy->add_option("--theta", c.theta)->check(CLI::IsMember({"log", "none"}));
    energy->add_option("--surface", c.surface, "immersion energy of flat|hemisphere|graph");

    CLI::App* scan = app.add_subcommand("scan", "continuity classification scan");
    add_common(scan, c);
    scan->add_option("--points", c.points, "sample point count")->check(CLI::Range(1, 100000));
    scan->add_option("--radii", c.radii, "descending radii schedule (>= 4)");
    scan->add_option("--trim", c.trim, "eosc trim fraction");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }
    for (CLI::App* sub : app.get_subcommands()) c.command = sub->get_name();
    if (c.command == "zoo") c.command = "zoo-" + zoo_action;
    return c;
}

namespace {

struct OutputSink {
    std::string prefix;
    std::string config_echo;

    std::ofstream open(const std::string& suffix) const {
        std::ofstream out(prefix + suffix);
        if (!out) throw std::runtime_error("cannot open output " + prefix + suffix);
        return out;
    }
    bool enabled() const { return !prefix.empty(); }
};

ordered_json report_to_json(const DegreeReport& r) {
    ordered_json j;
    j["method"] = degree_method_name(r.method);
    j["y"] = std::vector<double>(r.y.begin(), r.y.end());
    j["value"] = r.value;
    j["raw"] = r.raw;
    j["residual"] = r.residual;
    j["inconclusive"] = r.inconclusive;
    if (!r.preimages.empty()) {
        ordered_json pre = ordered_json::array();
        for (const auto& [z, s] : r.preimages) {
            ordered_json rec;
            rec["point"] = std::vector<double>(z.begin(), z.end());
            rec["sign"] = s;
            pre.push_back(rec);
        }
        j["preimages"] = pre;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

int run_degree(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    DegreeOptions opts;
    opts.bump_radius = c.bump;
    opts.boundary_resolution = c.bres;

    std::vector<ordered_json> records;
    bool inconclusive = false;
    for (const std::string& ys : c.probes) {
        const Vec y = parse_vec(ys);
        std::vector<DegreeReport> reports;
        const bool all = c.method == "all";
        try {
            if (all || c.method == "counting")
                reports.push_back(degree_by_counting(map, domain, y, opts));
            if (all || c.method == "integral")
                reports.push_back(degree_by_integral(map, domain, y, opts));
            if ((all || c.method == "winding") && domain.dimension() == 2) {
                const BoundaryMesh mesh = boundary_mesh(domain, c.bres);
                DegreeReport r;
                r.method = DegreeMethod::Winding;
                r.y = y;
                r.value = winding_number(boundary_values(map, mesh), y);
                r.raw = r.value;
                reports.push_back(r);
            }
            if (all || c.method == "pullback")
                reports.push_back(boundary_pullback_degree(map, domain, y, opts));
        } catch (const std::domain_error& e) {
            ordered_json err;
            err["y"] = std::vector<double>(y.begin(), y.end());
            err["error"] = e.what();
            records.push_back(err);
            std::cout << "degree y=" << ys << " error: " << e.what() << "\n";
            inconclusive = true;
            continue;
        }
        std::ostringstream line;
        line << "degree y=" << ys;
        for (const DegreeReport& r : reports) {
            records.push_back(report_to_json(r));
            line << " " << degree_method_name(r.method) << "=" << r.value;
            if (r.method == DegreeMethod::Integral || r.method == DegreeMethod::BoundaryPullback)
                line << "(raw " << r.raw << ")";
            inconclusive |= r.inconclusive;
        }
        std::cout << line.str() << "\n";
    }
    if (sink.enabled()) {
        std::ofstream out = sink.open(".jsonl");
        out << sink.config_echo << "\n";
        for (const auto& r : records) out << r.dump() << "\n";
    }
    return inconclusive ? 1 : 0;
}

int run_escan(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    ESetRaster raster;
    if (c.ywindow.empty()) {
        raster = degree_region_auto(map, domain, c.yres, c.bres);
    } else {
        const auto colon = c.ywindow.find(':');
        if (colon == std::string::npos) throw UsageError("ywindow: 'lo0,lo1:hi0,hi1'");
        raster = degree_region(map, domain, parse_vec(c.ywindow.substr(0, colon)),
                               parse_vec(c.ywindow.substr(colon + 1)), c.yres, c.bres);
    }
    std::int64_t covered = 0;
    for (std::int64_t i = 0; i < raster.cell_total(); ++i) covered += raster.in_mask(i);
    std::cout << "escan raster " << raster.resolution << "^" << raster.dimension << ", E covers "
              << covered << " cells, diam " << raster.mask_diameter() << "\n";
    if (sink.enabled()) {
        if (raster.dimension == 2) write_pgm(raster, sink.prefix + ".pgm", sink.config_echo);
        std::ofstream out = sink.open(".csv");
        out << "# " << sink.config_echo << "\n";
        for (int a = 0; a < raster.dimension; ++a) out << "y" << a << ",";
        out << "degree,boundary\n";
        for (std::int64_t i = 0; i < raster.cell_total(); ++i) {
            const Vec y = raster.cell_center(i);
            for (int a = 0; a < raster.dimension; ++a) out << format_double(y[a]) << ",";
            out << raster.degree[i] << "," << int(raster.boundary_flag[i]) << "\n";
        }
    }
    return 0;
}

int run_fscan(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    const FSetReport rep = f_set(map, domain, parse_vec(c.a), parse_list(c.radii), c.yres);
    std::cout << "fscan a=" << c.a << " diam F(a) = " << rep.diam
              << (rep.empty_intersection ? " (empty intersection!)" : "") << "\n";
    if (sink.enabled()) {
        std::ofstream csv = sink.open(".csv");
        csv << "# " << sink.config_echo << "\n";
        csv << "radius,sphere_osc,mask_diam\n";
        for (std::size_t i = 0; i < rep.radii.size(); ++i)
            csv << format_double(rep.radii[i]) << "," << format_double(rep.sphere_osc[i]) << ","
                << format_double(rep.mask_diam[i]) << "\n";
        ordered_json j;
        j["config"] = nlohmann::json::parse(sink.config_echo);
        j["a"] = std::vector<double>(rep.a.begin(), rep.a.end());
        j["diam"] = rep.diam;
        j["empty_intersection"] = rep.empty_intersection;
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return rep.empty_intersection ? 1 : 0;
}

int run_bmo(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    const BmoPlan plan = make_bmo_plan(domain, c.seed, c.scales, c.base_scale, c.centers);
    const BmoProfile profile = bmo_seminorm(map, domain, plan);
    std::cout << "bmo seminorm estimate " << profile.seminorm << " over " << plan.balls.size()
              << " balls\n";
    if (sink.enabled()) {
        std::ofstream csv = sink.open(".csv");
        csv << "# " << sink.config_echo << "\n";
        csv << "eps,omega\n";
        for (const auto& [eps, omega] : profile.modulus)
            csv << format_double(eps) << "," << format_double(omega) << "\n";
        ordered_json j;
        j["config"] = nlohmann::json::parse(sink.config_echo);
        j["version"] = kToolVersion;
        j["seminorm"] = profile.seminorm;
        j["plan_seed"] = profile.plan.seed;
        j["plan_scales"] = profile.plan.scales;
        j["plan_balls"] = profile.plan.balls.size();
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return 0;
}

int run_vmodegree(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    ordered_json j;
    j["config"] = nlohmann::json::parse(sink.config_echo);
    j["version"] = kToolVersion;
    int code = 0;
    try {
        const VmoDegreeReport rep = vmo_degree(map, domain, parse_vec(c.p), parse_list(c.schedule));
        j["p"] = std::vector<double>(rep.p.begin(), rep.p.end());
        j["schedule"] = rep.schedule;
        ordered_json degs = ordered_json::array();
        for (const auto& d : rep.degrees) {
            if (d)
                degs.push_back(*d);
            else
                degs.push_back(nullptr);
        }
        j["degrees"] = degs;
        j["stabilized"] = rep.stabilized;
        j["value"] = rep.value;
        j["margin_d0"] = rep.margin_d0;
        std::cout << "vmodegree p=" << c.p << (rep.stabilized ? " value " : " UNSTABLE ")
                  << (rep.stabilized ? std::to_string(rep.value) : "") << " margin "
                  << rep.margin_d0 << "\n";
        code = rep.stabilized ? 0 : 1;
    } catch (const std::domain_error& e) {
        j["error"] = e.what();
        std::cout << "vmodegree error: " << e.what() << "\n";
        code = 1;
    }
    if (sink.enabled()) {
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return code;
}

int run_cov(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    ordered_json j;
    j["config"] = nlohmann::json::parse(sink.config_echo);
    j["version"] = kToolVersion;
    int code = 0;
    try {
        const CovCheckReport rep = vmo_change_of_variables_check(map, domain, parse_vec(c.p),
                                                                 c.bump, parse_list(c.schedule));
        j["lhs"] = rep.lhs;
        j["rhs"] = rep.rhs;
        j["residual"] = rep.residual;
        j["degree"] = rep.degree;
        j["stabilized"] = rep.stabilized;
        std::cout << "cov p=" << c.p << " residual " << rep.residual << " (degree " << rep.degree
                  << ")\n";
        code = rep.stabilized && rep.residual < 0.5 ? 0 : 1;
    } catch (const std::domain_error& e) {
        j["error"] = e.what();
        std::cout << "cov error: " << e.what() << "\n";
        code = 1;
    }
    if (sink.enabled()) {
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return code;
}

int run_energy(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    EnergyResult res;
    if (!c.surface.empty()) {
        res = immersion_energy(surface_preset(c.surface), domain);
        std::cout << "immersion energy " << res.value << " (stretch " << res.stretch_term
                  << ", bending " << res.barrier_term << ")\n";
    } else {
        const MapField map = resolve_map_spec(c.map_spec);
        EnergySpec spec;
        spec.theta = c.theta == "log" ? BarrierKind::LogBarrier : BarrierKind::None;
        spec.exponent = domain.dimension();
        res = elastic_energy(map, domain, spec);
        if (res.infinite)
            std::cout << "elastic energy infinite (barrier hit det <= 0)\n";
        else
            std::cout << "elastic energy " << res.value << " (stretch " << res.stretch_term
                      << ", barrier " << res.barrier_term << ")\n";
    }
    if (sink.enabled()) {
        ordered_json j;
        j["config"] = nlohmann::json::parse(sink.config_echo);
        j["version"] = kToolVersion;
        j["infinite"] = res.infinite;
        if (!res.infinite) j["value"] = res.value;
        j["stretch"] = res.stretch_term;
        j["second_term"] = res.barrier_term;
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return 0;
}

int run_scan(const RunConfig& c, const OutputSink& sink) {
    const Domain domain = resolve_domain_spec(c.domain_spec, c.res);
    const MapField map = resolve_map_spec(c.map_spec);
    ScanOptions opts;
    opts.radii = c.radii.empty() ? parse_list(c.schedule) : parse_list(c.radii);
    opts.trim = c.trim;

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec> points;
    const Vec lo = domain.bounding_lo(), hi = domain.bounding_hi();
    const double inset = 1.2 * opts.radii.front();
    while (static_cast<int>(points.size()) < c.points) {
        Vec x(domain.dimension());
        for (int a = 0; a < domain.dimension(); ++a)
            x[a] = lo[a] + (hi[a] - lo[a]) * unit(rng);
        if (domain.contains(x) && domain.dist_to_boundary(x) > inset) points.push_back(x);
    }

    const OscillationProfile profile = continuity_scan(map, domain, points, opts);
    int suspect = 0;
    for (const auto& pp : profile.points) suspect += pp.continuous ? 0 : 1;
    std::cout << "scan " << profile.points.size() << " points, " << suspect
              << " suspect (tol_abs " << profile.tol_abs << ")\n";
    if (sink.enabled()) {
        std::ofstream csv = sink.open(".csv");
        csv << "# " << sink.config_echo << "\n";
        for (int a = 0; a < domain.dimension(); ++a) csv << "x" << a << ",";
        csv << "radius,eosc,sphere_osc,local_energy,continuous\n";
        for (const auto& pp : profile.points) {
            for (const auto& rec : pp.records) {
                for (int a = 0; a < domain.dimension(); ++a)
                    csv << format_double(pp.x[a]) << ",";
                csv << format_double(rec.radius) << "," << format_double(rec.eosc) << ","
                    << format_double(rec.sphere_osc) << "," << format_double(rec.local_energy)
                    << "," << (pp.continuous ? 1 : 0) << "\n";
            }
        }
        ordered_json j;
        j["config"] = nlohmann::json::parse(sink.config_echo);
        j["version"] = kToolVersion;
        j["points"] = profile.points.size();
        j["suspect"] = suspect;
        j["tol_abs"] = profile.tol_abs;
        j["energy_ratio"] = profile.energy_ratio;
        j["grid_modulus"] = profile.grid_modulus;
        std::ofstream js = sink.open(".json");
        js << j.dump(2) << "\n";
    }
    return 0;
}

int run_zoo_list(const RunConfig& c, const OutputSink& sink) {
    std::vector<ordered_json> records;
    for (const ZooEntry& e : standard_zoo()) {
        ordered_json j;
        j["name"] = e.map.name();
        j["det_sign"] = e.props.det_sign;
        j["det_nonneg"] = e.props.det_nonneg;
        j["injective"] = e.props.injective;
        j["w1n"] = e.props.sobolev_w1n;
        j["smooth"] = e.props.smooth;
        ordered_json degs = ordered_json::array();
        for (const auto& [y, d] : e.props.expected_degrees) {
            ordered_json rec;
            rec["y"] = std::vector<double>(y.begin(), y.end());
            rec["deg"] = d;
            degs.push_back(rec);
        }
        j["expected_degrees"] = degs;
        j["notes"] = e.props.notes;
        records.push_back(j);
        std::cout << j.dump() << "\n";
    }
    (void)c;
    if (sink.enabled()) {
        std::ofstream out = sink.open(".jsonl");
        out << sink.config_echo << "\n";
        for (const auto& r : records) out << r.dump() << "\n";
    }
    return 0;
}

}  // namespace

int run(const RunConfig& config) {
    set_jobs(config.jobs);
    OutputSink sink;
    sink.prefix = config.out;
    ordered_json echo;
    echo["config"] = nlohmann::json::parse(config.to_json());
    echo["version"] = kToolVersion;
    sink.config_echo = echo.dump();
    try {
        if (config.command == "zoo-list") return run_zoo_list(config, sink);
        if (config.command == "degree") return run_degree(config, sink);
        if (config.command == "escan") return run_escan(config, sink);
        if (config.command == "fscan") return run_fscan(config, sink);
        if (config.command == "bmo") return run_bmo(config, sink);
        if (config.command == "vmodegree") return run_vmodegree(config, sink);
        if (config.command == "cov") return run_cov(config, sink);
        if (config.command == "energy") return run_energy(config, sink);
        if (config.command == "scan") return run_scan(config, sink);
    } catch (const std::ios_base::failure&) {
        return 3;
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        if (what.find("cannot open") != std::string::npos ||
            what.find("write failed") != std::string::npos) {
            std::cerr << "io error: " << what << "\n";
            return 3;
        }
        std::cerr << "error: " << what << "\n";
        return 1;
    }
    throw UsageError("unknown command '" + config.command + "'");
}

}  // namespace topodeg
