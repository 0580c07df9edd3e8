#include "topodeg/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace topodeg {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

nlohmann::ordered_json domain_to_json(const Domain& d) {
    nlohmann::ordered_json j;
    if (d.kind() == DomainKind::Ball) {
        j["kind"] = "ball";
        j["center"] = std::vector<double>(d.center().begin(), d.center().end());
        j["radius"] = d.radius();
    } else {
        j["kind"] = "box";
        j["lo"] = std::vector<double>(d.bounding_lo().begin(), d.bounding_lo().end());
        j["hi"] = std::vector<double>(d.bounding_hi().begin(), d.bounding_hi().end());
    }
    return j;
}

Domain domain_from_json(const nlohmann::json& j, int resolution) {
    const std::string kind = j.at("kind");
    if (kind == "ball") {
        const std::vector<double> c = j.at("center");
        Vec center(static_cast<int>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i) center[i] = c[i];
        return Domain::ball(center, j.at("radius"), resolution);
    }
    const std::vector<double> lo = j.at("lo"), hi = j.at("hi");
    Vec vlo(static_cast<int>(lo.size())), vhi(static_cast<int>(hi.size()));
    for (std::size_t i = 0; i < lo.size(); ++i) vlo[i] = lo[i];
    for (std::size_t i = 0; i < hi.size(); ++i) vhi[i] = hi[i];
    return Domain::box(vlo, vhi, resolution);
}

}  // namespace

void save_grid_map(const MapField& map, const std::string& path) {
    const GridData& grid = map.grid_data();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_grid_map: cannot open " + path);
    nlohmann::ordered_json header;
    header["name"] = map.name();
    header["n"] = map.source_dim();
    header["m"] = map.target_dim();
    header["domain"] = domain_to_json(grid.domain);
    header["resolution"] = grid.domain.resolution();
    header["order"] = grid.order;
    out << header.dump() << "\n";
    for (int c = 0; c < map.target_dim(); ++c) out << (c ? "," : "") << "f" << c;
    out << "\n";
    const std::int64_t count = grid.vertex_count();
    for (std::int64_t i = 0; i < count; ++i) {
        for (int c = 0; c < map.target_dim(); ++c)
            out << (c ? "," : "") << format_double(grid.samples[i * map.target_dim() + c]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("save_grid_map: write failed for " + path);
}

MapField load_grid_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_grid_map: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_grid_map: missing header");
    const nlohmann::json header = nlohmann::json::parse(line);
    const int m = header.at("m");
    const int resolution = header.at("resolution");
    const Domain domain = domain_from_json(header.at("domain"), resolution);
    std::getline(in, line);  // column header
    std::vector<double> samples;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) samples.push_back(std::strtod(cell.c_str(), nullptr));
    }
    return MapField::from_grid(domain, m, std::move(samples), header.at("order"),
                               header.value("name", "grid"));
}

void write_pgm(const ESetRaster& raster, const std::string& path, const std::string& header) {
    if (raster.dimension != 2)
        throw std::invalid_argument("write_pgm: only 2-d rasters export to PGM");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
    const int res = raster.resolution;
    out << "P2\n";
    if (!header.empty()) out << "# " << header << "\n";
    out << res << " " << res << "\n255\n";
    for (int row = res - 1; row >= 0; --row) {
        for (int col = 0; col < res; ++col) {
            const std::int64_t flat = static_cast<std::int64_t>(col) * res + row;
            int pixel;
            if (raster.boundary_flag[flat]) {
                pixel = 255;
            } else {
                pixel = std::clamp(raster.degree[flat] + 128, 0, 254);
            }
            out << pixel << (col + 1 == res ? "" : " ");
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path);
}

}  // namespace topodeg
