#include "fpmatch/pair_weights.hpp"

#include "fpmatch/errors.hpp"

#include <cmath>

namespace fpmatch {

int octant_of(double dx, double dy, double reference_direction)
{
    const double bearing = wrap_degrees(rad_to_deg(std::atan2(dy, dx)) - reference_direction);
    const int idx = static_cast<int>(std::floor((bearing + 22.5) / 45.0));
    return idx % MatchConfig::kOctantCount;
}

std::vector<OctantNeighborhood> compute_octant_neighbors(const MinutiaTemplate& t)
{
    const auto& ms = t.minutiae;
    std::vector<OctantNeighborhood> out(ms.size());
    std::array<double, MatchConfig::kOctantCount> best_sq{};
    std::array<std::size_t, MatchConfig::kOctantCount> best_idx{};

    for (std::size_t r = 0; r < ms.size(); ++r) {
        best_sq.fill(INFINITY);
        for (std::size_t j = 0; j < ms.size(); ++j) {
            if (j == r)
                continue;
            const double dx = ms[j].x - ms[r].x;
            const double dy = ms[j].y - ms[r].y;
            const double d2 = dx * dx + dy * dy;
            // A coincident point has no bearing.
            if (!(d2 > 0.0))
                continue;
            const int l = octant_of(dx, dy, ms[r].direction);
            // Strict comparison keeps the lower index on ties.
            if (d2 < best_sq[l]) {
                best_sq[l] = d2;
                best_idx[l] = j;
            }
        }
        for (int l = 0; l < MatchConfig::kOctantCount; ++l) {
            if (std::isinf(best_sq[l]))
                continue;
            out[r].slots[l] = OctantNeighbor{std::sqrt(best_sq[l]),
                                             angle_diff(ms[r].direction, ms[best_idx[l]].direction)};
        }
    }
    return out;
}

double s_nn(const OctantNeighborhood& nbr_i, const OctantNeighborhood& nbr_k, double t_d, double t_psi)
{
    int n_octants = 0;
    int n_matching = 0;
    for (int l = 0; l < MatchConfig::kOctantCount; ++l) {
        const auto& a = nbr_i.slots[l];
        const auto& b = nbr_k.slots[l];
        if (!a || !b)
            continue;
        ++n_octants;
        if (std::abs(a->distance - b->distance) <= t_d && std::abs(a->angle_diff - b->angle_diff) <= t_psi)
            ++n_matching;
    }
    if (n_octants == 0)
        return 0.5;
    return static_cast<double>(n_matching) / n_octants;
}

double initial_weight(const Minutia& mi, const Minutia& mk, double s)
{
    const double type_factor = mi.type == mk.type ? 1.0 : 0.5;
    return type_factor * mi.quality * mk.quality * s;
}

PairQueue build_pair_queue(const MinutiaTemplate& u, const std::vector<OctantNeighborhood>& nbr_u,
                           const MinutiaTemplate& v, const std::vector<OctantNeighborhood>& nbr_v,
                           const MatchConfig& cfg)
{
    if (u.empty() || v.empty())
        throw EmptyTemplate();
    PairQueue q;
    q.n_u = u.size();
    q.n_v = v.size();
    q.entries.reserve(q.n_u * q.n_v);
    for (std::size_t i = 0; i < q.n_u; ++i) {
        for (std::size_t k = 0; k < q.n_v; ++k) {
            const double s = s_nn(nbr_u[i], nbr_v[k], cfg.t_d, cfg.t_psi);
            q.entries.push_back({i, k, initial_weight(u.minutiae[i], v.minutiae[k], s)});
        }
    }
    return q;
}

PairQueue build_pair_queue(const MinutiaTemplate& u, const MinutiaTemplate& v, const MatchConfig& cfg)
{
    if (u.empty() || v.empty())
        throw EmptyTemplate();
    return build_pair_queue(u, compute_octant_neighbors(u), v, compute_octant_neighbors(v), cfg);
}

}  // namespace fpmatch
