#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sawsum/blocks.hpp"
#include "sawsum/percolation.hpp"

namespace sawsum {

struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundedPathOptions {
    int vertical_prefix_h = 0;   // start with a vertical run to the block diagonal
    bool check_self_avoiding = false;
    bool collect_exit_sums = true;
    std::size_t dump_vertices = 0;  // keep at most this many path vertices
    std::function<void(Vertex, Vertex)> edge_sink;  // optional streaming consumer
};

struct BoundedPathResult {
    std::vector<double> exit_sums;  // s_0, s_1, ..., s_steps
    double s0 = 0.0;
    int blocks_built = 0;
    long long edges = 0;
    long long prefix_edges = 0;
    double max_abs_exit = 0.0;    // max |s_k|
    double max_abs_prefix = 0.0;  // max |S_n| over every emitted prefix
    // |s_k| leaving [-K3, K3] from inside, and |S_n| beyond 2 K3 while the
    // governing exit sum was inside the invariant interval.
    int violations_exit = 0;
    int violations_prefix = 0;
    bool self_avoiding = true;  // meaningful when the check is enabled
    std::vector<Vertex> vertices;  // first dump_vertices vertices when requested
};

// Assembles the bounded-sum path along an oriented path of good blocks: each
// step concatenates the transit path that opposes the sign of the running
// exit sum (the sign of zero counts as negative, so a nonpositive sum picks
// the maximal path). Throws ConstructionError when a block is not good.
BoundedPathResult build_bounded_path(const EnvHandle& env, const BlockParams& params,
                                     const BlockLaws& laws,
                                     std::span<const BlockAddress> block_path, int steps,
                                     const BoundedPathOptions& opts = {});

// Convenience overload classifying through a field's cache.
BoundedPathResult build_bounded_path(const BlockField& field,
                                     std::span<const BlockAddress> block_path, int steps,
                                     const BoundedPathOptions& opts = {});

// Increment pair (zeta_minus, zeta_plus) driving the exit-sum chain; both
// positive-valued.
struct IncrementLaws {
    std::function<double(RandomStream&)> minus_draw;
    std::function<double(RandomStream&)> plus_draw;
    std::string description;

    static IncrementLaws constants(double zeta_minus, double zeta_plus);
    // Uniform choice among the listed values.
    static IncrementLaws atom_sets(std::vector<double> minus_vals,
                                   std::vector<double> plus_vals);
    static IncrementLaws from_samples(std::vector<double> minus_samples,
                                      std::vector<double> plus_samples);
    static IncrementLaws from_law(const LawSpec& minus_law, const LawSpec& plus_law);
};

// s_{k+1} = s_k - zeta^-_k 1{s_k > 0} + zeta^+_k 1{s_k <= 0}; returns
// s_1..s_steps.
std::vector<double> simulate_chain(const IncrementLaws& laws, double x0, long long steps,
                                   RandomStream& rs);

struct RecurrenceStats {
    long long zero_returns = 0;
    long long eps_hits = 0;
    std::optional<long long> first_zero_time;
    std::optional<long long> first_eps_time;
    std::vector<long long> hit_times;  // times of |s| <= eps, capped
};

RecurrenceStats recurrence_stats(std::span<const double> s, double eps,
                                 std::size_t max_times = 1000);

// First-return map of the two-slope dynamics on (0, 1]: rotation by theta.
double induced_map_eval(double theta, double w);

struct RotationOrbit {
    std::vector<double> points;
    double max_gap = 0.0;      // circular gap between sorted orbit points
    int distinct_gaps = 0;     // number of distinct gap lengths (tol 1e-9)
};

RotationOrbit rotation_orbit(double theta, double w0, int n_points);

// Replays the add-when-nonpositive / subtract-when-positive scheduling of a
// zero-sum multiset: starting from y0 = sum(subs) - sum(adds), each step
// consumes one pool element; the final value is exactly zero. Returns the
// trajectory after each step.
std::vector<double> schedule_zero_sum(std::vector<double> adds, std::vector<double> subs);

// Two-value dynamics with per-step perturbations u_n shared across
// trajectories; returns w_0..w_N.
std::vector<double> perturbed_two_value_orbit(double xbar, double ybar, double z,
                                              std::span<const double> us);

// Empirical increment samples harvested from synthetic good blocks.
struct GoodBlockIncrements {
    std::vector<double> minus_samples;  // -S(transit through the minimal path)
    std::vector<double> plus_samples;   // S(transit through the maximal path)
    int blocks_tried = 0;
};

GoodBlockIncrements sample_good_block_increments(const BlockParams& params, const LawSpec& law,
                                                 const BlockLaws& laws, int want,
                                                 std::uint64_t seed);

}  // namespace sawsum
