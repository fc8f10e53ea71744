#pragma once

// Shared random fixtures for the unit and acceptance tests.

#include "fpmatch/core_model.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

namespace fpmatch::testing {

inline MinutiaTemplate random_template(std::mt19937_64& rng, std::size_t n, double box = 400.0)
{
    std::uniform_real_distribution<double> pos(0.0, box);
    std::uniform_real_distribution<double> dir(0.0, 360.0);
    std::uniform_real_distribution<double> qual(0.3, 1.0);
    std::bernoulli_distribution coin(0.5);
    MinutiaTemplate t;
    t.width = static_cast<int>(box);
    t.height = static_cast<int>(box);
    for (std::size_t i = 0; i < n; ++i) {
        Minutia m;
        m.x = pos(rng);
        m.y = pos(rng);
        m.direction = wrap_degrees(dir(rng));
        m.type = coin(rng) ? MinutiaType::Ending : MinutiaType::Bifurcation;
        m.quality = qual(rng);
        t.minutiae.push_back(m);
    }
    return t;
}

/// All-pairs queue with i.i.d. weights in (0, 1].
inline PairQueue random_full_queue(std::mt19937_64& rng, std::size_t n_u, std::size_t n_v)
{
    std::uniform_real_distribution<double> w(0.0, 1.0);
    PairQueue q;
    q.n_u = n_u;
    q.n_v = n_v;
    for (std::size_t i = 0; i < n_u; ++i)
        for (std::size_t k = 0; k < n_v; ++k)
            q.entries.push_back({i, k, 1.0 - w(rng)});
    return q;
}

/// m_ik = sigma_i * gamma_k.
inline PairQueue separable_queue(std::mt19937_64& rng, std::size_t n_u, std::size_t n_v)
{
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::vector<double> sigma(n_u), gamma(n_v);
    for (auto& s : sigma)
        s = w(rng);
    for (auto& g : gamma)
        g = w(rng);
    PairQueue q;
    q.n_u = n_u;
    q.n_v = n_v;
    for (std::size_t i = 0; i < n_u; ++i)
        for (std::size_t k = 0; k < n_v; ++k)
            q.entries.push_back({i, k, sigma[i] * gamma[k]});
    return q;
}

inline PairQueue constant_queue(std::size_t n_u, std::size_t n_v, double c)
{
    PairQueue q;
    q.n_u = n_u;
    q.n_v = n_v;
    for (std::size_t i = 0; i < n_u; ++i)
        for (std::size_t k = 0; k < n_v; ++k)
            q.entries.push_back({i, k, c});
    return q;
}

/// Identity correspondence i <-> i with weight 1.
inline PairQueue one_hot_queue(std::size_t n)
{
    PairQueue q;
    q.n_u = n;
    q.n_v = n;
    for (std::size_t i = 0; i < n; ++i)
        q.entries.push_back({i, i, 1.0});
    return q;
}

/// Independent evaluation of the registration objective in extended
/// precision, so finite differences are not swamped by rounding.
inline long double objective_ld(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                                long double theta, long double a, long double b)
{
    const long double pi = 3.141592653589793238462643383279502884L;
    const long double th = theta * pi / 180.0L;
    const long double cs = std::cos(th);
    const long double sn = std::sin(th);
    long double acc = 0.0L;
    long double mass = 0.0L;
    for (const auto& e : q.entries) {
        const Minutia& mi = u.minutiae[e.query_index];
        const Minutia& mk = v.minutiae[e.template_index];
        const long double dx = mi.x * cs - mi.y * sn + a - mk.x;
        const long double dy = mi.x * sn + mi.y * cs + b - mk.y;
        acc += e.weight * (dx * dx + dy * dy);
        mass += e.weight;
    }
    return acc / mass;
}

/// Central differences of objective_ld in (theta, a, b) with step h.
struct Gradient {
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
};

inline Gradient numeric_gradient(const PairQueue& q, const MinutiaTemplate& u, const MinutiaTemplate& v,
                                 const AlignmentParams& p, long double h = 1e-4L)
{
    auto f = [&](long double t, long double a, long double b) { return objective_ld(q, u, v, t, a, b); };
    Gradient g;
    g.theta = static_cast<double>((f(p.theta + h, p.a, p.b) - f(p.theta - h, p.a, p.b)) / (2 * h));
    g.a = static_cast<double>((f(p.theta, p.a + h, p.b) - f(p.theta, p.a - h, p.b)) / (2 * h));
    g.b = static_cast<double>((f(p.theta, p.a, p.b + h) - f(p.theta, p.a, p.b - h)) / (2 * h));
    return g;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        static std::atomic<unsigned> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("fpmatch_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace fpmatch::testing
