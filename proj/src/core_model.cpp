#include "fpmatch/core_model.hpp"

#include "fpmatch/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace fpmatch {

double PairQueue::total_weight() const
{
    double sum = 0.0;
    for (const auto& e : entries)
        sum += e.weight;
    return sum;
}

void MatchConfig::validate() const
{
    if (!(t_d > 0.0) || !(t_psi > 0.0))
        throw ConfigError("t_d and t_psi must be positive");
    if (!(c1 > 0.0) || !(c2 > 0.0))
        throw ConfigError("c1 and c2 must be positive");
    if (octant_count != kOctantCount)
        throw ConfigError("octant_count is fixed at 8");
    if (!(ill_posed_epsilon >= 0.0))
        throw ConfigError("ill_posed_epsilon must be non-negative");
    if (thresholds.empty())
        throw ConfigError("threshold schedule is empty");
    for (std::size_t j = 0; j < thresholds.size(); ++j) {
        if (!(thresholds[j] > 0.0) || !std::isfinite(thresholds[j]))
            throw ConfigError("thresholds must be finite and positive");
        if (j > 0 && !(thresholds[j] < thresholds[j - 1]))
            throw ConfigError("thresholds must be strictly decreasing");
    }
}

std::vector<double> MatchConfig::threshold_schedule(double t1, double step, double tmin)
{
    if (!(step > 0.0) || !(tmin > 0.0) || !(t1 >= tmin))
        throw ConfigError("threshold schedule needs step > 0 and t1 >= tmin > 0");
    std::vector<double> out;
    // Integer stepping keeps the schedule free of accumulated drift.
    for (int j = 0;; ++j) {
        const double t = t1 - j * step;
        if (t < tmin - 1e-9 * std::abs(tmin))
            break;
        out.push_back(t);
    }
    return out;
}

double wrap_degrees(double angle)
{
    double r = std::fmod(angle, 360.0);
    if (r < 0.0)
        r += 360.0;
    if (r >= 360.0)
        r = 0.0;
    return r;
}

double normalize_theta(double angle)
{
    double r = wrap_degrees(angle);
    if (r > 180.0)
        r -= 360.0;
    return r;
}

double angle_diff(double alpha, double beta)
{
    const double d = std::abs(wrap_degrees(alpha) - wrap_degrees(beta));
    return std::min(d, 360.0 - d);
}

double deg_to_rad(double degrees) { return degrees * (std::numbers::pi / 180.0); }
double rad_to_deg(double radians) { return radians * (180.0 / std::numbers::pi); }

Point2 transform_point(Point2 p, const AlignmentParams& params)
{
    const double th = deg_to_rad(params.theta);
    const double c = std::cos(th);
    const double s = std::sin(th);
    return {p.x * c - p.y * s + params.a, p.x * s + p.y * c + params.b};
}

Point2 transform_point(const Minutia& m, const AlignmentParams& params)
{
    return transform_point(Point2{m.x, m.y}, params);
}

AlignmentParams inverse(const AlignmentParams& params)
{
    const double th = deg_to_rad(params.theta);
    const double c = std::cos(th);
    const double s = std::sin(th);
    // R^T applied to -(a, b)
    return {normalize_theta(-params.theta), -(c * params.a + s * params.b), -(-s * params.a + c * params.b)};
}

AlignmentParams compose(const AlignmentParams& second, const AlignmentParams& first)
{
    const Point2 shifted = transform_point(Point2{first.a, first.b}, second);
    return {normalize_theta(first.theta + second.theta), shifted.x, shifted.y};
}

MinutiaTemplate transform_template(const MinutiaTemplate& t, const AlignmentParams& params)
{
    MinutiaTemplate out = t;
    for (auto& m : out.minutiae) {
        const Point2 p = transform_point(m, params);
        m.x = p.x;
        m.y = p.y;
        m.direction = wrap_degrees(m.direction + params.theta);
    }
    return out;
}

bool is_valid(const Minutia& m)
{
    return std::isfinite(m.x) && std::isfinite(m.y) && m.direction >= 0.0 && m.direction < 360.0 &&
           m.quality >= 0.0 && m.quality <= 1.0;
}

void validate_template(const MinutiaTemplate& t)
{
    for (std::size_t i = 0; i < t.minutiae.size(); ++i) {
        const Minutia& m = t.minutiae[i];
        std::ostringstream why;
        if (!is_valid(m))
            why << "minutia " << i << " has direction or quality out of range";
        else if (m.x < 0.0 || m.y < 0.0 || m.x > t.width || m.y > t.height)
            why << "minutia " << i << " at (" << m.x << ", " << m.y << ") lies outside the "
                << t.width << "x" << t.height << " image";
        else
            continue;
        throw RangeError(why.str());
    }
}

}  // namespace fpmatch
