#include "fpmatch/registration.hpp"

#include "fpmatch/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fpmatch {

namespace {

// The only transcendental evaluated per solve. Kept separate so a table
// lookup can replace it.
double rotation_from_moments(double w1, double w4)
{
    return normalize_theta(rad_to_deg(std::atan2(-w4, w1)));
}

}  // namespace

Centroids weighted_centroids(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v)
{
    double sum_m = 0.0;
    Centroids c;
    for (const auto& e : q.entries) {
        const Minutia& mi = u.minutiae[e.query_index];
        const Minutia& mk = v.minutiae[e.template_index];
        sum_m += e.weight;
        c.x += e.weight * mi.x;
        c.y += e.weight * mi.y;
        c.z += e.weight * mk.x;
        c.t += e.weight * mk.y;
    }
    if (!(sum_m > 0.0))
        throw ZeroTotalWeight();
    c.x /= sum_m;
    c.y /= sum_m;
    c.z /= sum_m;
    c.t /= sum_m;
    return c;
}

AlignmentParams translation_for_rotation(const Centroids& c, double theta)
{
    const double th = deg_to_rad(theta);
    const double cs = std::cos(th);
    const double sn = std::sin(th);
    return {normalize_theta(theta), c.z + c.y * sn - c.x * cs, c.t - c.y * cs - c.x * sn};
}

bool detect_ill_posed(double w1, double w4, double scale, double epsilon)
{
    return std::max(std::abs(w1), std::abs(w4)) <= epsilon * scale;
}

Alignment solve_alignment(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                          const MatchConfig& cfg)
{
    Alignment out;
    AlignmentDiagnostics& d = out.diagnostics;
    d.centroids = weighted_centroids(q, u, v);
    const Centroids& c = d.centroids;

    // Both sides centered. Centering the query side as well does not change
    // w1/w4 (the template deviations already sum to zero under m_ik) but
    // keeps the products small.
    for (const auto& e : q.entries) {
        const Minutia& mi = u.minutiae[e.query_index];
        const Minutia& mk = v.minutiae[e.template_index];
        const double xi = mi.x - c.x;
        const double yi = mi.y - c.y;
        const double zk = mk.x - c.z;
        const double tk = mk.y - c.t;
        d.total_weight += e.weight;
        d.w1 += e.weight * (zk * xi + tk * yi);
        d.w4 += e.weight * (zk * yi - tk * xi);
        d.scale += e.weight * 0.5 * (xi * xi + yi * yi + zk * zk + tk * tk);
    }

    d.ill_posed = detect_ill_posed(d.w1, d.w4, d.scale, cfg.ill_posed_epsilon);
    const double theta = d.ill_posed ? 0.0 : rotation_from_moments(d.w1, d.w4);
    out.params = translation_for_rotation(c, theta);
    return out;
}

double objective(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                 const AlignmentParams& p)
{
    const double th = deg_to_rad(p.theta);
    const double cs = std::cos(th);
    const double sn = std::sin(th);
    double sum_m = 0.0;
    double sum_d2 = 0.0;
    for (const auto& e : q.entries) {
        const Minutia& mi = u.minutiae[e.query_index];
        const Minutia& mk = v.minutiae[e.template_index];
        const double dx = mi.x * cs - mi.y * sn + p.a - mk.x;
        const double dy = mi.x * sn + mi.y * cs + p.b - mk.y;
        sum_m += e.weight;
        sum_d2 += e.weight * (dx * dx + dy * dy);
    }
    if (!(sum_m > 0.0))
        throw ZeroTotalWeight();
    return sum_d2 / sum_m;
}

}  // namespace fpmatch
