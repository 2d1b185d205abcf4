#include "neurotwin/component_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace neurotwin {

using json = nlohmann::ordered_json;

double Box::volume() const {
    double v = 1.0;
    for (std::size_t d = 0; d < dims(); ++d) v *= width(d);
    return v;
}

bool Box::contains(std::span<const double> x, double slack) const {
    if (x.size() != dims()) return false;
    for (std::size_t d = 0; d < dims(); ++d) {
        if (x[d] < lo[d] - slack || x[d] > hi[d] + slack) return false;
    }
    return true;
}

void Box::validate() const {
    if (lo.size() != hi.size() || lo.empty()) {
        throw std::invalid_argument("domain: lo/hi must be non-empty and equal length");
    }
    for (std::size_t d = 0; d < dims(); ++d) {
        if (!std::isfinite(lo[d]) || !std::isfinite(hi[d])) {
            throw std::invalid_argument("domain: bound not finite in dimension " + std::to_string(d));
        }
        if (!(lo[d] < hi[d])) {
            throw std::invalid_argument("domain: lo >= hi in dimension " + std::to_string(d));
        }
    }
}

Box box1(double lo, double hi) { return Box{{lo}, {hi}}; }
Box box2(double lo0, double hi0, double lo1, double hi1) {
    return Box{{lo0, lo1}, {hi0, hi1}};
}

std::size_t ComponentMap::size() const {
    std::size_t n = 1;
    for (std::size_t s : shape) n *= s;
    return n;
}

double ComponentMap::coord(std::size_t d, std::size_t k) const {
    return domain.lo[d] + (static_cast<double>(k) + 0.5) * cell_width(d);
}

std::vector<double> ComponentMap::point(std::size_t flat) const {
    std::vector<double> x(dims());
    for (std::size_t d = dims(); d-- > 0;) {
        x[d] = coord(d, flat % shape[d]);
        flat /= shape[d];
    }
    return x;
}

std::size_t ComponentMap::flat_index(std::span<const std::size_t> idx) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dims(); ++d) flat = flat * shape[d] + idx[d];
    return flat;
}

double ComponentMap::value_min() const { return *std::min_element(value.begin(), value.end()); }
double ComponentMap::value_max() const { return *std::max_element(value.begin(), value.end()); }

namespace {

// Fractional sample index along one axis, clamped to the sample hull.
void axis_weights(const ComponentMap& m, std::size_t d, double x,
                  std::size_t& k0, double& t) {
    const double u = (x - m.domain.lo[d]) / m.cell_width(d) - 0.5;
    const double c = std::clamp(u, 0.0, static_cast<double>(m.shape[d] - 1));
    k0 = std::min(static_cast<std::size_t>(c), m.shape[d] - 2);
    t = c - static_cast<double>(k0);
}

}  // namespace

double ComponentMap::interpolate_channel(const std::vector<double>& channel,
                                         std::span<const double> x) const {
    if (x.size() != dims()) throw std::invalid_argument("interpolate: dimension mismatch");
    if (channel.size() != size()) throw std::invalid_argument("interpolate: channel size mismatch");
    if (dims() == 1) {
        std::size_t k;
        double t;
        axis_weights(*this, 0, x[0], k, t);
        return channel[k] * (1.0 - t) + channel[k + 1] * t;
    }
    std::size_t k0, k1;
    double t0, t1;
    axis_weights(*this, 0, x[0], k0, t0);
    axis_weights(*this, 1, x[1], k1, t1);
    const std::size_t n1 = shape[1];
    const double v00 = channel[k0 * n1 + k1];
    const double v01 = channel[k0 * n1 + k1 + 1];
    const double v10 = channel[(k0 + 1) * n1 + k1];
    const double v11 = channel[(k0 + 1) * n1 + k1 + 1];
    return (v00 * (1 - t1) + v01 * t1) * (1 - t0) + (v10 * (1 - t1) + v11 * t1) * t0;
}

double ComponentMap::interpolate(std::span<const double> x) const {
    return interpolate_channel(value, x);
}

double ComponentMap::interpolate1(double x) const {
    const double xs[1] = {x};
    return interpolate(xs);
}

double ComponentMap::eval(std::span<const double> x) const {
    if (evaluator) return evaluator(x);
    return interpolate(x);
}

double ComponentMap::eval1(double x) const {
    const double xs[1] = {x};
    return eval(xs);
}

void ComponentMap::validate() const {
    domain.validate();
    if (shape.size() != domain.dims()) {
        throw std::invalid_argument("map: shape rank does not match domain");
    }
    if (dims() > 2) throw std::invalid_argument("map: only 1-D and 2-D grids supported");
    for (std::size_t s : shape) {
        if (s < 2) throw std::invalid_argument("map: need at least 2 samples per dimension");
    }
    if (value.size() != size()) throw std::invalid_argument("map: value channel size mismatch");
    if (!probability.empty() && probability.size() != size()) {
        throw std::invalid_argument("map: probability channel size mismatch");
    }
    if (!delay.empty() && delay.size() != size()) {
        throw std::invalid_argument("map: delay channel size mismatch");
    }
    for (double v : value) {
        if (!std::isfinite(v)) throw std::invalid_argument("map: non-finite value sample");
    }
    for (double p : probability) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("map: probability outside [0,1]");
    }
    for (double d : delay) {
        if (!(d >= 0.0)) throw std::invalid_argument("map: negative delay");
    }
}

ComponentMap sample_map(const Box& box, const std::vector<std::size_t>& shape,
                        const std::function<double(std::span<const double>)>& fn) {
    ComponentMap m;
    m.domain = box;
    m.shape = shape;
    m.domain.validate();
    m.value.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto x = m.point(i);
        m.value[i] = fn(x);
    }
    m.evaluator = fn;
    m.validate();
    return m;
}

ComponentMap sample_map1(double lo, double hi, std::size_t n,
                         const std::function<double(double)>& fn) {
    return sample_map(box1(lo, hi), {n},
                      [fn](std::span<const double> x) { return fn(x[0]); });
}

std::string map_to_json(const ComponentMap& map) {
    json j;
    j["schema_version"] = 1;
    j["domain"] = {{"lo", map.domain.lo}, {"hi", map.domain.hi}};
    j["shape"] = map.shape;
    j["channels"] = {{"value", map.value}};
    if (!map.probability.empty()) j["channels"]["probability"] = map.probability;
    if (!map.delay.empty()) j["channels"]["delay"] = map.delay;
    return j.dump(2);
}

ComponentMap map_from_json(const std::string& text) {
    const json j = json::parse(text);
    ComponentMap m;
    m.domain.lo = j.at("domain").at("lo").get<std::vector<double>>();
    m.domain.hi = j.at("domain").at("hi").get<std::vector<double>>();
    m.shape = j.at("shape").get<std::vector<std::size_t>>();
    m.value = j.at("channels").at("value").get<std::vector<double>>();
    if (j.at("channels").contains("probability")) {
        m.probability = j.at("channels").at("probability").get<std::vector<double>>();
    }
    if (j.at("channels").contains("delay")) {
        m.delay = j.at("channels").at("delay").get<std::vector<double>>();
    }
    m.validate();
    return m;
}

std::string map_to_csv(const ComponentMap& map) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t d = 0; d < map.dims(); ++d) out << "x" << d << ",";
    out << "value,probability,delay\n";
    for (std::size_t i = 0; i < map.size(); ++i) {
        for (double c : map.point(i)) out << c << ",";
        out << map.value[i] << ","
            << (map.probability.empty() ? 1.0 : map.probability[i]) << ","
            << (map.delay.empty() ? 0.0 : map.delay[i]) << "\n";
    }
    return out.str();
}

namespace {

std::vector<double> split_csv_row(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

}  // namespace

ComponentMap map_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file");
    const std::size_t dims = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) - 2;
    if (dims < 1 || dims > 2) throw std::invalid_argument("csv: expected 1 or 2 coordinate columns");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split_csv_row(line);
        if (row.size() != dims + 3) throw std::invalid_argument("csv: malformed row");
        rows.push_back(std::move(row));
    }
    if (rows.size() < 2) throw std::invalid_argument("csv: need at least 2 grid points");

    ComponentMap m;
    if (dims == 1) {
        m.shape = {rows.size()};
        const double h = rows[1][0] - rows[0][0];
        m.domain = box1(rows.front()[0] - 0.5 * h, rows.back()[0] + 0.5 * h);
    } else {
        // row-major dump: the second coordinate varies fastest
        std::size_t n1 = 1;
        while (n1 < rows.size() && rows[n1][0] == rows[0][0]) ++n1;
        if (rows.size() % n1 != 0) throw std::invalid_argument("csv: ragged 2-D grid");
        const std::size_t n0 = rows.size() / n1;
        m.shape = {n0, n1};
        const double h0 = rows[n1][0] - rows[0][0];
        const double h1 = rows[1][1] - rows[0][1];
        m.domain = box2(rows.front()[0] - 0.5 * h0, rows.back()[0] + 0.5 * h0,
                        rows.front()[1] - 0.5 * h1, rows.back()[1] + 0.5 * h1);
    }
    m.value.reserve(rows.size());
    m.probability.reserve(rows.size());
    m.delay.reserve(rows.size());
    for (const auto& row : rows) {
        m.value.push_back(row[dims]);
        m.probability.push_back(row[dims + 1]);
        m.delay.push_back(row[dims + 2]);
    }
    m.validate();
    return m;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << text;
}

}  // namespace

void save_map_json(const ComponentMap& map, const std::string& path) {
    write_file(path, map_to_json(map));
}

ComponentMap load_map_json(const std::string& path) { return map_from_json(read_file(path)); }

void save_map_csv(const ComponentMap& map, const std::string& path) {
    write_file(path, map_to_csv(map));
}

ComponentMap load_map_csv(const std::string& path) { return map_from_csv(read_file(path)); }

}  // namespace neurotwin
