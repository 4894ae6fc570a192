#include "percolab/csvio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "percolab/graphs.hpp"
#include "percolab/procgen.hpp"

namespace percolab {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_configuration_csv(std::ostream& os, const PointConfiguration& config) {
    os << "id";
    for (int a = 0; a < config.window.dim; ++a) os << ",x" << a;
    os << ",mark\n";
    for (const MarkedPoint& mp : config.points) {
        os << mp.point.id;
        for (double c : mp.point.coords) os << ',' << format_double(c);
        os << ',' << format_double(mp.mark) << '\n';
    }
}

void write_configuration_sidecar(std::ostream& os, const PointConfiguration& config) {
    os << "dimension = " << config.window.dim << '\n';
    os << "boundary = " << (config.window.boundary == BoundaryMode::torus ? "torus" : "hard")
       << '\n';
    for (int a = 0; a < config.window.dim; ++a) {
        os << "lower" << a << " = " << format_double(config.window.lower[a]) << '\n';
        os << "upper" << a << " = " << format_double(config.window.upper[a]) << '\n';
    }
    os << "norm_p = " << format_double(config.norm.p) << '\n';
    os << "generator = " << config.meta.generator << '\n';
    os << "params = " << config.meta.params << '\n';
    os << "seed = " << config.meta.seed << '\n';
}

std::map<std::string, std::string> read_keyvalue_lines(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t\r");
        size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(is, line)) {
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

PointConfiguration read_configuration_csv(std::istream& points_csv, std::istream& sidecar) {
    auto kv = read_keyvalue_lines(sidecar);
    int dim = std::stoi(kv.at("dimension"));
    Vec lo(dim), hi(dim);
    for (int a = 0; a < dim; ++a) {
        lo[a] = std::stod(kv.at("lower" + std::to_string(a)));
        hi[a] = std::stod(kv.at("upper" + std::to_string(a)));
    }
    PointConfiguration cfg;
    cfg.window = Window(lo, hi, kv.at("boundary") == "torus" ? BoundaryMode::torus
                                                             : BoundaryMode::hard);
    cfg.norm.p = std::stod(kv.at("norm_p"));
    cfg.meta.generator = kv.count("generator") ? kv.at("generator") : "";
    cfg.meta.params = kv.count("params") ? kv.at("params") : "";
    cfg.meta.seed = kv.count("seed") ? std::stoull(kv.at("seed")) : 0;

    std::string line;
    std::getline(points_csv, line);  // header
    while (std::getline(points_csv, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        MarkedPoint mp;
        std::getline(ss, tok, ',');
        mp.point.id = std::stoi(tok);
        mp.point.coords.resize(dim);
        for (int a = 0; a < dim; ++a) {
            std::getline(ss, tok, ',');
            mp.point.coords[a] = std::stod(tok);
        }
        std::getline(ss, tok, ',');
        mp.mark = std::stod(tok);
        cfg.points.push_back(std::move(mp));
    }
    cfg.validate();
    return cfg;
}

void save_configuration(const PointConfiguration& config, const std::string& csv_path,
                        const std::string& sidecar_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    write_configuration_csv(csv, config);
    std::ofstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    write_configuration_sidecar(side, config);
}

PointConfiguration load_configuration(const std::string& csv_path,
                                      const std::string& sidecar_path) {
    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open " + csv_path);
    std::ifstream side(sidecar_path);
    if (!side) throw std::runtime_error("cannot open " + sidecar_path);
    return read_configuration_csv(csv, side);
}

void write_segments_csv(std::ostream& os, const SegmentSet& segments) {
    os << "x0,y0,x1,y1\n";
    for (const auto& s : segments.segments) {
        os << format_double(s.a[0]) << ',' << format_double(s.a[1]) << ','
           << format_double(s.b[0]) << ',' << format_double(s.b[1]) << '\n';
    }
}

void write_graph_csv(std::ostream& os, const SpatialGraph& graph) {
    os << "src,dst\n";
    for (const auto& [a, b] : graph.edges) os << a << ',' << b << '\n';
}

}  // namespace percolab
