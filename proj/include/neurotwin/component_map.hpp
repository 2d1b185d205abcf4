#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace neurotwin {

// Compact box domain, one [lo, hi] pair per dimension.
struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dims() const { return lo.size(); }
    double width(std::size_t d) const { return hi[d] - lo[d]; }
    double volume() const;
    bool contains(std::span<const double> x, double slack = 0.0) const;
    void validate() const;  // finite bounds, lo < hi per dimension
};

Box box1(double lo, double hi);
Box box2(double lo0, double hi0, double lo1, double hi1);

// Static input->output map of one component, sampled on a regular grid.
//
// Samples sit at cell midpoints: coordinate k along dimension d is
// lo + (k + 0.5) * (hi - lo) / shape[d]. The value channel is required;
// probability and delay channels are optional and, when present, have the
// same length. An optional evaluator gives the backing function for
// resampling (simulator or closed form); maps loaded from files carry
// samples only.
class ComponentMap {
  public:
    using Evaluator = std::function<double(std::span<const double>)>;

    Box domain;
    std::vector<std::size_t> shape;    // samples per dimension, 1-D or 2-D
    std::vector<double> value;         // row-major, size = product(shape)
    std::vector<double> probability;   // optional channel
    std::vector<double> delay;         // optional channel
    Evaluator evaluator;               // optional, not serialized

    std::size_t dims() const { return shape.size(); }
    std::size_t size() const;
    double cell_width(std::size_t d) const { return domain.width(d) / static_cast<double>(shape[d]); }
    double coord(std::size_t d, std::size_t k) const;
    std::vector<double> point(std::size_t flat) const;
    std::size_t flat_index(std::span<const std::size_t> idx) const;

    double value_min() const;
    double value_max() const;
    double value_range() const { return value_max() - value_min(); }

    // Piecewise-linear (1-D) / bilinear (2-D) interpolation of the value
    // channel, clamped to the sample hull at the domain edge.
    double interpolate(std::span<const double> x) const;
    double interpolate1(double x) const;
    // Same scheme over an arbitrary channel of this map's grid.
    double interpolate_channel(const std::vector<double>& channel,
                               std::span<const double> x) const;

    // Evaluator when attached, interpolation otherwise.
    double eval(std::span<const double> x) const;
    double eval1(double x) const;
    bool has_evaluator() const { return static_cast<bool>(evaluator); }

    void validate() const;
};

// Samples fn on a regular grid over box and attaches it as the evaluator.
ComponentMap sample_map(const Box& box, const std::vector<std::size_t>& shape,
                        const std::function<double(std::span<const double>)>& fn);
ComponentMap sample_map1(double lo, double hi, std::size_t n,
                         const std::function<double(double)>& fn);

// File formats. JSON carries domain metadata and all channels; CSV holds one
// row per grid point (x..., value, probability, delay) and reconstructs the
// domain from the midpoint spacing on import.
std::string map_to_json(const ComponentMap& map);
ComponentMap map_from_json(const std::string& text);
std::string map_to_csv(const ComponentMap& map);
ComponentMap map_from_csv(const std::string& text);

void save_map_json(const ComponentMap& map, const std::string& path);
ComponentMap load_map_json(const std::string& path);
void save_map_csv(const ComponentMap& map, const std::string& path);
ComponentMap load_map_csv(const std::string& path);

}  // namespace neurotwin
