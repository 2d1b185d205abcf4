#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "neurotwin/component_map.hpp"

namespace neurotwin {

struct CheckConfig {
    double jump_tol = 0.0;       // minimum jump treated as discontinuity; 0 = 1e-3 * value range
    int refine_depth = 6;        // bisection levels when the map has an evaluator
    double neighborhood = 0.0;   // two-sided window for irregular points; 0 = 1.5 cells
    double margin = 0.0;         // strictness margin for above/below the level
    double level_tol = 0.0;      // sample-attainment tolerance; 0 = 1e-9 * value range
    int plateau_cells = 8;       // attained run longer than this with sign changes => indeterminate
};

// Config with the auto fields filled in for a concrete map.
CheckConfig resolve_config(const ComponentMap& map, CheckConfig cfg);

struct Discontinuity {
    std::vector<double> location;
    std::size_t axis = 0;    // scan axis (2-D maps are scanned per axis)
    double left_limit = 0.0;
    double right_limit = 0.0;
    double jump = 0.0;       // right_limit - left_limit
};

struct SmoothnessReport {
    bool piecewise_continuous = false;
    std::vector<Discontinuity> discontinuities;
    std::vector<std::size_t> grid_shape;
    CheckConfig config;  // resolved values echoed back
};

// Scans adjacent samples for jumps above jump_tol (per axis on 2-D grids),
// merges runs of flagged cells, and bisects refine_depth times against the
// map evaluator (when present) to localize each jump. One-sided limits are
// the nearest retained samples on each side. Verdict is true iff the count
// is finite (always, on grids) and all limit estimates are finite.
SmoothnessReport detect_discontinuities(const ComponentMap& map, CheckConfig cfg = {});

// Locations where the value channel attains level c with samples strictly
// above and strictly below c inside every two-sided neighborhood window.
// Cells whose jump exceeds jump_tol do not attain interior levels (the jump
// skips them), and domain endpoints are never irregular. 2-D maps are
// scanned line by line along each axis. Throws if c is not strictly inside
// the observed value range.
std::vector<std::vector<double>> find_irregular_points(const ComponentMap& map, double c,
                                                       CheckConfig cfg = {});

struct LevelStatus {
    double level = 0.0;
    bool testable = false;       // strictly inside the observed range
    bool indeterminate = false;  // plateau with interior sign changes
    std::size_t count = 0;
};

struct AllOrNoneReport {
    bool verdict = false;
    std::vector<LevelStatus> levels;
    std::size_t testable_count = 0;
    CheckConfig config;
};

// Definition-3 check over a batch of levels: verdict true iff every testable
// level has a finite, determinate irregular-point count. Levels outside the
// open value range are recorded as untestable (vacuously fine).
AllOrNoneReport check_all_or_none_smoothness(const ComponentMap& map,
                                             const std::vector<double>& levels,
                                             CheckConfig cfg = {});

struct CompositionReport {
    SmoothnessReport discontinuities;
    AllOrNoneReport all_or_none;
    std::size_t inner_count_total = 0;
    std::size_t outer_mapped_count = 0;
    std::size_t count_bound = 0;
    bool count_ok = false;    // composite count <= bound, zero slack
    bool verdict_ok = false;  // composite all-or-none verdict
    ComponentMap composite;
};

// Builds outer(inner_1(x), ..., inner_k(x)) by interpolated evaluation on
// the inners' common domain, certifies it with both checkers, and compares
// the detected discontinuity count against the propagation bound
//   sum of inner counts + outer discontinuities mapped through the inners.
CompositionReport verify_composition_preservation(const ComponentMap& outer,
                                                  const std::vector<ComponentMap>& inners,
                                                  CheckConfig cfg = {});

// Interior levels at fixed fractions of the observed range, used when a
// caller has no domain-specific level set.
std::vector<double> default_levels(const ComponentMap& map, std::size_t count = 7);

std::string smoothness_report_to_json(const SmoothnessReport& report);
std::string all_or_none_report_to_json(const AllOrNoneReport& report);
std::string smoothness_summary_csv(const SmoothnessReport& report);

}  // namespace neurotwin
