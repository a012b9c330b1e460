#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sawsum/env.hpp"
#include "sawsum/geometry.hpp"
#include "sawsum/probability.hpp"
#include "sawsum/tessellation.hpp"

namespace sawsum {

// Calibrated block parameters: tessellation size, interior path count, the
// boundary weight budget K1 and the interior weight cap K2. K3 is always the
// derived K1 + K2 * (a1 + a2).
struct BlockParams {
    int m = 1;
    long long n = 1;  // index into the tessellation sequence
    long long a1 = 1;
    long long a2 = 0;
    double K1 = 1.0;
    double K2 = 1.0;
    double p_o = 0.5;
    double p_v = 0.5;

    long long crossing_len() const { return a1 + a2; }
    double K3() const { return K1 + K2 * static_cast<double>(crossing_len()); }
    TessellationParams tess() const { return {a1, a2, m}; }
    void validate() const;
};

void to_json(nlohmann::json& j, const BlockParams& p);
void from_json(const nlohmann::json& j, BlockParams& p);

// Exact crossing-total laws for the two block sides plus the symmetric
// discretized-Gaussian companion, with prebuilt maximal couplings.
struct BlockLaws {
    Pmf exact_right, exact_left, sym;
    MaxCoupling coup_right, coup_left;
    bool degenerate = false;  // zero-variance case: the coupling is identity
};

BlockLaws make_block_laws(const BlockParams& params);

struct CrossingRecord {
    long long crossings = 0;      // T along the path
    long long crossings_sym = 0;  // coupled companion draw
    double sum = 0.0;             // S along the path
    double sum_sym = 0.0;         // sign-reordered representation at the companion
    bool coupled = false;         // companion == observed
    double max_abs_x = 0.0;
};

// Symmetrization of one path: reads T and S from the environment, draws the
// companion crossing total from the maximal coupling of (exact, sym), and
// evaluates the sign-reordered sum that carries the symmetric law.
CrossingRecord symmetrize_path(const EnvHandle& env, const PathSeq& path, const Pmf& exact,
                               const Pmf& sym, RandomStream& rs);

struct BlockReport {
    // Events: all couplings succeeded / boundary weight small / both a very
    // positive and a very negative crossing path exist / interior weights
    // capped.
    bool coupling_ok = false;
    bool boundary_light = false;
    bool escapes_both = false;
    bool interior_bounded = false;
    bool good = false;

    std::vector<CrossingRecord> crossings;  // one per interior path, index 1..m
    int i_min = 1;  // smallest index attaining the minimal crossing sum
    int i_max = 1;  // smallest index attaining the maximal crossing sum

    double entry_col_abs_sum = 0.0;
    double exit_col_abs_sum = 0.0;
    double transit_sum_min = 0.0;  // sum along the transit path through i_min
    double transit_sum_max = 0.0;  // sum along the transit path through i_max
    bool bounds_ok = true;  // good implies transit sums inside the K1..K3 bands
};

// Evaluates the four block events on the environment. Auxiliary coupling
// randomness is keyed by (env seed, block coordinate, side, path index), so
// the report is a pure function of (seed, params, address).
BlockReport classify_block(const EnvHandle& env, const BlockGeometry& geom,
                           const BlockParams& params, const BlockLaws& laws);

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrateOptions {
    int mc_samples = 10000;
    long long n_max = 1LL << 21;
    double k1_grid_step = 0.5;
    int refine_steps = 3;      // sub-doubling refinement probes
    int verify_blocks = 2000;
    std::uint64_t seed = 0xCA11B8A7E5EEDULL;
    int workers = 0;  // 0 = default
};

struct CalibrationOutcome {
    BlockParams params;
    double tv = 0.0;          // coupling failure distance at the final size
    double p_F0 = 0.0, p_F1 = 0.0, p_F2 = 0.0, p_F3 = 0.0;
    double p_plus = 0.0, p_minus = 0.0;  // single-path escape estimates
    double p_good = 0.0;      // verified empirical good-block frequency
    int ladder_steps = 0;
    bool verified = false;
};

// Lemma-style parameter calibration: m from the target failure budget,
// K1 from the boundary-sum quantile, n grown along the tessellation sequence
// until the coupling and escape events clear their budgets, K2 from the
// weight quantile, then a fresh-block verification pass.
CalibrationOutcome calibrate(double epsilon, const LawSpec& law, CalibrateOptions opts = {});

// Number of interior paths prescribed for a failure budget epsilon.
int calibrated_m(double epsilon);

// Synthetic i.i.d. block draw (no lattice): same event logic as
// classify_block, used by calibration and by empirical increment sampling.
struct SyntheticBlock {
    bool coupling_ok = false, boundary_light = false, escapes_both = false,
         interior_bounded = false, good = false;
    double transit_sum_min = 0.0, transit_sum_max = 0.0;
};

SyntheticBlock simulate_synthetic_block(const BlockParams& params, const LawSpec& law,
                                        const BlockLaws& laws, RandomStream& rs);

// Monte Carlo estimate of the single-crossing escape probabilities
// P(S >= 2 K1) and P(S <= -2 K1).
struct EscapeEstimate {
    double p_plus = 0.0;
    double p_minus = 0.0;
    int samples = 0;
};
EscapeEstimate estimate_escape_probs(const BlockParams& params, const LawSpec& law,
                                     int samples, std::uint64_t seed, int workers = 0);

}  // namespace sawsum
