#pragma once

// Domain types shared by every stage of the matcher.
//
// Angles are degrees everywhere at the interface. Radians only appear inside
// the trigonometric calls.

#include <cstddef>
#include <string>
#include <vector>

namespace fpmatch {

enum class MinutiaType { Ending, Bifurcation };

struct Minutia {
    double x = 0.0;          // pixels
    double y = 0.0;          // pixels
    double direction = 0.0;  // degrees, [0, 360)
    MinutiaType type = MinutiaType::Ending;
    double quality = 1.0;    // [0, 1]

    friend bool operator==(const Minutia&, const Minutia&) = default;
};

struct MinutiaTemplate {
    std::vector<Minutia> minutiae;
    int width = 0;
    int height = 0;
    std::string id;

    std::size_t size() const { return minutiae.size(); }
    bool empty() const { return minutiae.empty(); }
};

/// Candidate correspondence between query minutia `query_index` (in U) and
/// template minutia `template_index` (in V).
struct PairEntry {
    std::size_t query_index = 0;
    std::size_t template_index = 0;
    double weight = 0.0;

    friend bool operator==(const PairEntry&, const PairEntry&) = default;
};

/// The mutable queue of candidate pairs driven by the matching loop.
struct PairQueue {
    std::vector<PairEntry> entries;
    std::size_t n_u = 0;
    std::size_t n_v = 0;

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
    double total_weight() const;
};

/// Rigid motion applied to the query: p' = R(theta) p + (a, b).
struct AlignmentParams {
    double theta = 0.0;  // degrees, reported in (-180, 180]
    double a = 0.0;      // pixels
    double b = 0.0;      // pixels
};

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct MatchConfig {
    static constexpr int kOctantCount = 8;

    double t_d = 10.0;    // pixels
    double t_psi = 20.0;  // degrees
    std::vector<double> thresholds{24.0, 20.0, 16.0, 12.0, 8.0, 4.0};
    double c1 = 1.0 / 128.0;  // px^-2
    double c2 = 1.0 / 32.0;   // deg^-2
    int octant_count = kOctantCount;
    double ill_posed_epsilon = 1e-9;

    /// Throws ConfigError when a field breaks its invariant.
    void validate() const;

    /// Evenly spaced descending schedule t1, t1 - step, ... down to tmin.
    static std::vector<double> threshold_schedule(double t1, double step, double tmin);
};

/// Unsigned angular distance in [0, 180].
double angle_diff(double alpha, double beta);

/// Wraps to [0, 360).
double wrap_degrees(double angle);

/// Wraps to (-180, 180].
double normalize_theta(double angle);

double deg_to_rad(double degrees);
double rad_to_deg(double radians);

Point2 transform_point(Point2 p, const AlignmentParams& params);
Point2 transform_point(const Minutia& m, const AlignmentParams& params);

/// Rigid inverse: transform_point(transform_point(p, t), inverse(t)) == p.
AlignmentParams inverse(const AlignmentParams& params);

/// The motion that applies `first` and then `second`.
AlignmentParams compose(const AlignmentParams& second, const AlignmentParams& first);

/// Applies `params` to every minutia (positions and directions). Image
/// bounds are left untouched.
MinutiaTemplate transform_template(const MinutiaTemplate& t, const AlignmentParams& params);

bool is_valid(const Minutia& m);

/// Throws RangeError naming the first minutia that breaks a Minutia
/// invariant or lies outside [0, width] x [0, height].
void validate_template(const MinutiaTemplate& t);

}  // namespace fpmatch
