#pragma once

// Local octant features and the initial coupled pair weights.

#include "fpmatch/core_model.hpp"

#include <array>
#include <optional>
#include <vector>

namespace fpmatch {

struct OctantNeighbor {
    double distance = 0.0;    // pixels, > 0
    double angle_diff = 0.0;  // degrees, [0, 180]
};

/// Nearest neighbor per 45-degree sector around one reference minutia.
/// Sector l is centered on bearing l * 45 degrees (l = 0..7), measured
/// counterclockwise from the reference minutia's own direction, so the
/// descriptor does not change under rotation of the whole template.
struct OctantNeighborhood {
    std::array<std::optional<OctantNeighbor>, MatchConfig::kOctantCount> slots;
};

/// Sector index in [0, 8) for a displacement. Sector l covers the half-open
/// bearing interval [l*45 - 22.5, l*45 + 22.5), with bearings taken relative
/// to `reference_direction` (degrees).
int octant_of(double dx, double dy, double reference_direction = 0.0);

std::vector<OctantNeighborhood> compute_octant_neighbors(const MinutiaTemplate& t);

/// Fraction of shared octants whose neighbor distance and angle agree within
/// tolerance; 0.5 when no octant is shared.
double s_nn(const OctantNeighborhood& nbr_i, const OctantNeighborhood& nbr_k, double t_d, double t_psi);

/// type factor * q_i * q_k * s. The type factor is 1 for equal types, 0.5
/// otherwise.
double initial_weight(const Minutia& mi, const Minutia& mk, double s);

/// Every (query, template) pairing, query-major, with initial weights.
/// Throws EmptyTemplate if either side has no minutiae.
PairQueue build_pair_queue(const MinutiaTemplate& u, const MinutiaTemplate& v, const MatchConfig& cfg);

/// Same as above with neighborhoods computed by the caller.
PairQueue build_pair_queue(const MinutiaTemplate& u, const std::vector<OctantNeighborhood>& nbr_u,
                           const MinutiaTemplate& v, const std::vector<OctantNeighborhood>& nbr_v,
                           const MatchConfig& cfg);

}  // namespace fpmatch
