#include "neurotwin/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace neurotwin {

using json = nlohmann::ordered_json;

CheckConfig resolve_config(const ComponentMap& map, CheckConfig cfg) {
    const double range = map.value_range();
    if (cfg.jump_tol <= 0.0) cfg.jump_tol = 1e-3 * (range > 0.0 ? range : 1.0);
    if (cfg.refine_depth < 1) cfg.refine_depth = 1;
    if (cfg.neighborhood <= 0.0) {
        double max_cell = 0.0;
        for (std::size_t d = 0; d < map.dims(); ++d) max_cell = std::max(max_cell, map.cell_width(d));
        cfg.neighborhood = 1.5 * max_cell;
    }
    if (cfg.level_tol <= 0.0) cfg.level_tol = 1e-9 * (range > 0.0 ? range : 1.0);
    if (cfg.plateau_cells < 2) cfg.plateau_cells = 2;
    return cfg;
}

namespace {

// One scan line through the grid: sample values plus their coordinates along
// the scan axis, with the off-axis coordinate fixed.
struct ScanLine {
    std::vector<double> v;
    std::vector<double> x;      // coordinate along the scan axis
    std::size_t axis = 0;
    double other_coord = 0.0;   // fixed coordinate of the other axis (2-D only)
    bool two_d = false;
};

std::vector<ScanLine> scan_lines(const ComponentMap& map) {
    std::vector<ScanLine> lines;
    if (map.dims() == 1) {
        ScanLine line;
        line.axis = 0;
        line.v = map.value;
        line.x.resize(map.shape[0]);
        for (std::size_t k = 0; k < map.shape[0]; ++k) line.x[k] = map.coord(0, k);
        lines.push_back(std::move(line));
        return lines;
    }
    const std::size_t n0 = map.shape[0];
    const std::size_t n1 = map.shape[1];
    for (std::size_t j = 0; j < n1; ++j) {  // scan along axis 0
        ScanLine line;
        line.axis = 0;
        line.two_d = true;
        line.other_coord = map.coord(1, j);
        line.v.resize(n0);
        line.x.resize(n0);
        for (std::size_t i = 0; i < n0; ++i) {
            line.v[i] = map.value[i * n1 + j];
            line.x[i] = map.coord(0, i);
        }
        lines.push_back(std::move(line));
    }
    for (std::size_t i = 0; i < n0; ++i) {  // scan along axis 1
        ScanLine line;
        line.axis = 1;
        line.two_d = true;
        line.other_coord = map.coord(0, i);
        line.v.assign(map.value.begin() + static_cast<std::ptrdiff_t>(i * n1),
                      map.value.begin() + static_cast<std::ptrdiff_t>((i + 1) * n1));
        line.x.resize(n1);
        for (std::size_t j = 0; j < n1; ++j) line.x[j] = map.coord(1, j);
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<double> line_point(const ScanLine& line, double coord_on_axis) {
    if (!line.two_d) return {coord_on_axis};
    if (line.axis == 0) return {coord_on_axis, line.other_coord};
    return {line.other_coord, coord_on_axis};
}

double eval_on_line(const ComponentMap& map, const ScanLine& line, double coord_on_axis) {
    const auto p = line_point(line, coord_on_axis);
    return map.evaluator(p);
}

Discontinuity localize(const ComponentMap& map, const ScanLine& line, std::size_t k_left,
                       std::size_t k_right, const CheckConfig& cfg) {
    // Refine inside the single cell with the largest adjacent jump.
    std::size_t cell = k_left;
    double best = 0.0;
    for (std::size_t k = k_left; k < k_right; ++k) {
        const double d = std::abs(line.v[k + 1] - line.v[k]);
        if (d > best) {
            best = d;
            cell = k;
        }
    }
    double a = line.x[cell];
    double b = line.x[cell + 1];
    double fa = line.v[cell];
    double fb = line.v[cell + 1];
    if (map.has_evaluator()) {
        for (int depth = 0; depth < cfg.refine_depth; ++depth) {
            const double m = 0.5 * (a + b);
            const double fm = eval_on_line(map, line, m);
            if (std::abs(fm - fa) >= std::abs(fb - fm)) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
    }
    Discontinuity disc;
    disc.axis = line.axis;
    disc.location = line_point(line, 0.5 * (a + b));
    disc.left_limit = map.has_evaluator() ? fa : line.v[k_left];
    disc.right_limit = map.has_evaluator() ? fb : line.v[k_right];
    disc.jump = line.v[k_right] - line.v[k_left];
    return disc;
}

}  // namespace

SmoothnessReport detect_discontinuities(const ComponentMap& map, CheckConfig cfg) {
    map.validate();
    for (std::size_t s : map.shape) {
        if (s < 16) throw std::invalid_argument("detect_discontinuities: grid resolution < 16");
    }
    cfg = resolve_config(map, cfg);

    SmoothnessReport report;
    report.grid_shape = map.shape;
    report.config = cfg;

    for (const ScanLine& line : scan_lines(map)) {
        const std::size_t n = line.v.size();
        std::size_t k = 0;
        while (k + 1 < n) {
            if (std::abs(line.v[k + 1] - line.v[k]) > cfg.jump_tol) {
                std::size_t end = k + 1;  // merge a run of flagged cells
                while (end + 1 < n && std::abs(line.v[end + 1] - line.v[end]) > cfg.jump_tol) ++end;
                report.discontinuities.push_back(localize(map, line, k, end, cfg));
                k = end;
            } else {
                ++k;
            }
        }
    }

    report.piecewise_continuous = true;
    for (const Discontinuity& d : report.discontinuities) {
        if (!std::isfinite(d.left_limit) || !std::isfinite(d.right_limit)) {
            report.piecewise_continuous = false;
        }
    }
    return report;
}

namespace {

// Irregular points of one scan line. Candidates are exact sample hits and
// linearly-interpolated crossings in cells whose jump stays below jump_tol;
// each candidate must then see samples strictly above and strictly below c
// inside its two-sided window.
void line_irregular_points(const ComponentMap& map, const ScanLine& line, double c,
                           const CheckConfig& cfg, bool* indeterminate,
                           std::vector<std::vector<double>>* out) {
    const std::size_t n = line.v.size();
    const auto attained = [&](std::size_t k) { return std::abs(line.v[k] - c) <= cfg.level_tol; };

    // Plateau scan: a long attained run with strict sign changes inside is
    // indistinguishable from dense oscillation at grid scale.
    std::size_t run = 0;
    bool run_above = false;
    bool run_below = false;
    for (std::size_t k = 0; k < n; ++k) {
        if (attained(k)) {
            ++run;
        } else if (run > 0) {
            if (run > static_cast<std::size_t>(cfg.plateau_cells) && run_above && run_below) {
                *indeterminate = true;
            }
            run = 0;
            run_above = run_below = false;
        }
        if (run > 0) {
            if (line.v[k] > c + cfg.margin) run_above = true;
            if (line.v[k] < c - cfg.margin) run_below = true;
        }
    }
    if (run > static_cast<std::size_t>(cfg.plateau_cells) && run_above && run_below) {
        *indeterminate = true;
    }

    const auto two_sided = [&](double x_star) {
        bool above = false;
        bool below = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(line.x[k] - x_star) >= cfg.neighborhood) continue;
            if (line.v[k] > c + cfg.margin) above = true;
            if (line.v[k] < c - cfg.margin) below = true;
        }
        return above && below;
    };

    const double x_lo = map.domain.lo[line.axis];
    const double x_hi = map.domain.hi[line.axis];
    const auto interior = [&](double x_star) { return x_star > x_lo && x_star < x_hi; };

    // A cell skips interior levels only when it is a jump: large against the
    // tolerance AND an outlier against its neighbor cells. A merely steep
    // continuous stretch has comparable neighbor differences and still
    // attains every level it passes through.
    const auto cell_diff = [&](std::size_t k) {
        return k + 1 < n ? std::abs(line.v[k + 1] - line.v[k]) : 0.0;
    };
    const auto is_jump_cell = [&](std::size_t k) {
        const double d = cell_diff(k);
        if (d <= cfg.jump_tol) return false;
        const double left = k > 0 ? cell_diff(k - 1) : 0.0;
        const double right = cell_diff(k + 1);
        return d > 4.0 * std::max(left, right);
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (attained(k) && interior(line.x[k]) && two_sided(line.x[k])) {
            out->push_back(line_point(line, line.x[k]));
        }
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (attained(k) || attained(k + 1)) continue;  // covered by sample hits
        const double dl = line.v[k] - c;
        const double dr = line.v[k + 1] - c;
        if (dl * dr >= 0.0) continue;
        if (is_jump_cell(k)) continue;  // the jump skips the level
        const double x_star = line.x[k] + (line.x[k + 1] - line.x[k]) * (c - line.v[k]) /
                                              (line.v[k + 1] - line.v[k]);
        if (interior(x_star) && two_sided(x_star)) out->push_back(line_point(line, x_star));
    }
}

}  // namespace

std::vector<std::vector<double>> find_irregular_points(const ComponentMap& map, double c,
                                                       CheckConfig cfg) {
    map.validate();
    cfg = resolve_config(map, cfg);
    const double lo = map.value_min();
    const double hi = map.value_max();
    if (!(c > lo && c < hi)) {
        throw std::invalid_argument("find_irregular_points: level outside open value range");
    }
    std::vector<std::vector<double>> points;
    bool indeterminate = false;
    for (const ScanLine& line : scan_lines(map)) {
        line_irregular_points(map, line, c, cfg, &indeterminate, &points);
    }
    std::sort(points.begin(), points.end());
    return points;
}

AllOrNoneReport check_all_or_none_smoothness(const ComponentMap& map,
                                             const std::vector<double>& levels,
                                             CheckConfig cfg) {
    map.validate();
    cfg = resolve_config(map, cfg);
    const double lo = map.value_min();
    const double hi = map.value_max();

    AllOrNoneReport report;
    report.config = cfg;
    report.verdict = true;
    for (double c : levels) {
        LevelStatus status;
        status.level = c;
        status.testable = c > lo && c < hi;
        if (status.testable) {
            ++report.testable_count;
            bool indeterminate = false;
            std::vector<std::vector<double>> points;
            for (const ScanLine& line : scan_lines(map)) {
                line_irregular_points(map, line, c, cfg, &indeterminate, &points);
            }
            status.indeterminate = indeterminate;
            status.count = points.size();
            if (indeterminate) report.verdict = false;
        }
        report.levels.push_back(status);
    }
    return report;
}

namespace {

std::size_t crossings_through(const ComponentMap& inner, double level) {
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < inner.value.size(); ++k) {
        if ((inner.value[k] - level) * (inner.value[k + 1] - level) <= 0.0) ++count;
    }
    return count;
}

}  // namespace

CompositionReport verify_composition_preservation(const ComponentMap& outer,
                                                  const std::vector<ComponentMap>& inners,
                                                  CheckConfig cfg) {
    outer.validate();
    if (inners.empty()) throw std::invalid_argument("composition: need at least one inner map");
    if (inners.size() != outer.dims()) {
        throw std::invalid_argument("composition: outer arity does not match inner count");
    }
    for (std::size_t j = 0; j < inners.size(); ++j) {
        inners[j].validate();
        if (inners[j].dims() != 1) {
            throw std::invalid_argument("composition: inner maps must be 1-D");
        }
        if (inners[j].domain.lo != inners[0].domain.lo ||
            inners[j].domain.hi != inners[0].domain.hi) {
            throw std::invalid_argument("composition: inner " + std::to_string(j) +
                                        " domain differs from inner 0");
        }
        const double span = outer.domain.width(j);
        if (inners[j].value_min() < outer.domain.lo[j] - 1e-9 * span ||
            inners[j].value_max() > outer.domain.hi[j] + 1e-9 * span) {
            throw std::invalid_argument("composition: inner " + std::to_string(j) +
                                        " range escapes outer domain dimension " +
                                        std::to_string(j));
        }
    }

    std::size_t resolution = 0;
    for (const auto& inner : inners) resolution = std::max(resolution, inner.shape[0]);

    const ComponentMap* outer_ptr = &outer;
    ComponentMap composite =
        sample_map(inners[0].domain, {resolution}, [outer_ptr, &inners](std::span<const double> x) {
            std::vector<double> y(inners.size());
            for (std::size_t j = 0; j < inners.size(); ++j) y[j] = inners[j].eval(x);
            return outer_ptr->eval(y);
        });

    CompositionReport report;
    report.discontinuities = detect_discontinuities(composite, cfg);
    report.all_or_none =
        check_all_or_none_smoothness(composite, default_levels(composite), cfg);

    for (const auto& inner : inners) {
        report.inner_count_total += detect_discontinuities(inner, cfg).discontinuities.size();
    }
    const SmoothnessReport outer_report = detect_discontinuities(outer, cfg);
    for (const Discontinuity& d : outer_report.discontinuities) {
        report.outer_mapped_count += crossings_through(inners[d.axis], d.location[d.axis]);
    }
    report.count_bound = report.inner_count_total + report.outer_mapped_count;
    report.count_ok = report.discontinuities.discontinuities.size() <= report.count_bound;
    report.verdict_ok = report.all_or_none.verdict && report.discontinuities.piecewise_continuous;
    report.composite = std::move(composite);
    return report;
}

std::vector<double> default_levels(const ComponentMap& map, std::size_t count) {
    const double lo = map.value_min();
    const double hi = map.value_max();
    std::vector<double> levels;
    levels.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) {
        levels.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count + 1));
    }
    return levels;
}

namespace {

json config_json(const CheckConfig& cfg) {
    return json{{"jump_tol", cfg.jump_tol},
                {"refine_depth", cfg.refine_depth},
                {"neighborhood", cfg.neighborhood},
                {"margin", cfg.margin},
                {"level_tol", cfg.level_tol},
                {"plateau_cells", cfg.plateau_cells}};
}

}  // namespace

std::string smoothness_report_to_json(const SmoothnessReport& report) {
    json j;
    j["schema_version"] = 1;
    j["piecewise_continuous"] = report.piecewise_continuous;
    j["grid_shape"] = report.grid_shape;
    j["config"] = config_json(report.config);
    j["discontinuities"] = json::array();
    for (const Discontinuity& d : report.discontinuities) {
        j["discontinuities"].push_back({{"location", d.location},
                                        {"axis", d.axis},
                                        {"left_limit", d.left_limit},
                                        {"right_limit", d.right_limit},
                                        {"jump", d.jump}});
    }
    return j.dump(2);
}

std::string all_or_none_report_to_json(const AllOrNoneReport& report) {
    json j;
    j["schema_version"] = 1;
    j["verdict"] = report.verdict;
    j["testable_count"] = report.testable_count;
    j["config"] = config_json(report.config);
    j["levels"] = json::array();
    for (const LevelStatus& s : report.levels) {
        j["levels"].push_back({{"level", s.level},
                               {"testable", s.testable},
                               {"indeterminate", s.indeterminate},
                               {"count", s.count}});
    }
    return j.dump(2);
}

std::string smoothness_summary_csv(const SmoothnessReport& report) {
    std::ostringstream out;
    out.precision(17);
    out << "index,axis,location,left_limit,right_limit,jump\n";
    for (std::size_t i = 0; i < report.discontinuities.size(); ++i) {
        const Discontinuity& d = report.discontinuities[i];
        out << i << "," << d.axis << ",";
        for (std::size_t c = 0; c < d.location.size(); ++c) {
            out << (c ? ";" : "") << d.location[c];
        }
        out << "," << d.left_limit << "," << d.right_limit << "," << d.jump << "\n";
    }
    return out.str();
}

}  // namespace neurotwin
