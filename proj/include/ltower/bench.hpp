#ifndef LTOWER_BENCH_HPP
#define LTOWER_BENCH_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ltower/tower.hpp"

namespace ltower {

// Reference embedding that ignores the tower structure: a root of Q_{i-1} in level i is found by
// equal-degree splitting over the level-i field, and elements are mapped by modular composition.
// The root is some conjugate of the image of x_{i-1}, so results agree with Tower::embed only up
// to a field automorphism.
DensePoly baseline_root(const Tower& tower, unsigned i, Rng& rng);
LevelElement baseline_embed(const Tower& tower, const LevelElement& a, Rng& rng);

struct BenchRecord {
    std::string strategy;
    u64 p = 0;
    u64 ell = 0;
    unsigned level = 0;
    std::string op;  // build, lift, push, embed, mul, inv, baseline_embed
    std::size_t reps = 0;
    double median_seconds = 0;
    std::size_t coefficients = 0;  // ell^level
};

struct BenchConfig {
    u64 p = 0;
    u64 ell = 0;
    std::optional<Strategy> strategy;
    unsigned levels = 0;
    std::size_t reps = 5;
    u64 seed = 0;
    unsigned jobs = 1;
    unsigned first_level = 1;
    unsigned baseline_max_level = 4;  // baseline_embed becomes very slow above this
    std::vector<std::string> ops;     // empty: every op
};

// One warm-up iteration is discarded, then the median of reps timings is reported.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

inline constexpr const char* bench_csv_header = "strategy,p,ell,level,op,reps,median_seconds,coefficients";
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace ltower

#endif
