#pragma once

// Weighted least-squares rigid alignment over a queue of candidate pairs.
//
// The objective is the weight-normalized sum of squared distances between
// every transformed query point and its paired template point. Its minimizer
// has a closed form: the rotation comes from the two weighted cross moments
// w1 and w4, the translation from the weighted centroids. When the weights
// factor as m_ik = s_i * g_k the cross moments cancel exactly and the
// rotation is undetermined.

#include "fpmatch/core_model.hpp"

namespace fpmatch {

/// Weighted means of query (x, y) and template (z, t) coordinates.
struct Centroids {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double t = 0.0;
};

struct AlignmentDiagnostics {
    double w1 = 0.0;
    double w4 = 0.0;
    double total_weight = 0.0;
    /// Natural magnitude of w1/w4: sum of m_ik * (|u_i - u_bar|^2 + |v_k - v_bar|^2) / 2.
    /// Bounds both |w1| and |w4| from above.
    double scale = 0.0;
    Centroids centroids;
    bool ill_posed = false;
};

struct Alignment {
    AlignmentParams params;
    AlignmentDiagnostics diagnostics;
};

/// Throws ZeroTotalWeight when the queue carries no weight.
Centroids weighted_centroids(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v);

/// Optimal translation for a fixed rotation (degrees).
AlignmentParams translation_for_rotation(const Centroids& c, double theta);

/// True iff max(|w1|, |w4|) <= epsilon * scale.
bool detect_ill_posed(double w1, double w4, double scale, double epsilon);

/// Closed-form minimizer of objective(). Ill-posed queues get theta = 0 and
/// the centroid-matching translation, with diagnostics.ill_posed set.
Alignment solve_alignment(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                          const MatchConfig& cfg);

/// Weighted mean squared pair distance after moving U by `p`.
double objective(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                 const AlignmentParams& p);

}  // namespace fpmatch
