#ifndef LTOWER_TOWER_HPP
#define LTOWER_TOWER_HPP

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ltower/conic.hpp"
#include "ltower/cyclodescent.hpp"
#include "ltower/elliptic.hpp"
#include "ltower/liftpush.hpp"

namespace ltower {

enum class Strategy { t1, t2, elliptic, general };

std::string_view strategy_name(Strategy s) noexcept;
// Accepts the names printed by strategy_name; throws invalid_parameter otherwise.
Strategy parse_strategy(std::string_view name);

// Radical towers: Q_i = X^{ell^i} - seed, with seed not an ell-th power in F_p.
struct T1Init {
    u64 seed = 0;
};
bool is_t1_seed(const PrimeField& field, u64 ell, u64 seed);
T1Init find_t1_seed(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap = default_iteration_cap);

using TowerInit = std::variant<T1Init, T2Init, EllipticInit, K0Context>;

struct TowerLevel {
    unsigned index = 0;
    DensePoly minpoly;  // Q_i
    ModulusContext modulus;
    // x_{i-1} = f(x_i) / g(x_i); absent on level 0 and for the general strategy.
    std::optional<FiberRelation> relation;
    std::optional<FiberScaling> scaling;
    std::shared_ptr<const DescentData> descent;  // general strategy only
};

struct LevelElement {
    unsigned level = 0;
    DensePoly value;
    bool operator==(const LevelElement& o) const { return level == o.level && value == o.value; }
};

// Stored form of one level, as written to and read back from tower files.
struct LevelRecord {
    DensePoly minpoly;
    DensePoly f;  // both zero when the level carries no fiber relation
    DensePoly g;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double seconds = 0;
    std::string detail;
};

struct VerifyReport {
    unsigned level = 0;
    std::vector<CheckResult> checks;
    bool passed() const;
};

class Tower {
public:
    // Picks T1, then T2, then elliptic, then general when no strategy is given.
    static Tower create(const PrimeField& field, u64 ell, std::optional<Strategy> strategy, Rng& rng);
    // Installs stored levels as given; only their shape is checked here, verify_level does the rest.
    static Tower restore(const PrimeField& field, u64 ell, TowerInit init, const std::vector<LevelRecord>& levels);

    Tower(Tower&&) noexcept = default;
    Tower& operator=(Tower&&) noexcept = default;

    const PrimeField& field() const noexcept { return field_; }
    u64 ell() const noexcept { return ell_; }
    Strategy strategy() const noexcept;
    const TowerInit& init() const noexcept { return init_; }
    std::size_t degree(unsigned i) const;  // ell^i

    // Builds every missing level up to i. Safe to call from several threads.
    std::shared_ptr<const TowerLevel> level(unsigned i) const;
    unsigned built_levels() const;
    LevelRecord record(unsigned i) const;

    LevelElement element(unsigned i, const DensePoly& a) const;  // reduced mod Q_i
    LevelElement generator(unsigned i) const;                    // x_i
    LevelElement constant(unsigned i, u64 c) const;
    LevelElement random(unsigned i, Rng& rng) const;
    LevelElement add(const LevelElement& a, const LevelElement& b) const;
    LevelElement sub(const LevelElement& a, const LevelElement& b) const;
    LevelElement mul(const LevelElement& a, const LevelElement& b) const;
    LevelElement inverse(const LevelElement& a) const;  // throws division_by_zero
    LevelElement pow(const LevelElement& a, const BigExponent& e) const;

    // T_i in the bivariate basis: ell^{i-1} rows, ell + 1 columns, monic in Y.
    BiPoly fiber_poly(unsigned i) const;
    // Product of two level-i bivariate elements reduced modulo Q_{i-1}(X) and T_i(X, Y).
    BiPoly bivariate_mul(const BiPoly& a, const BiPoly& b, unsigned i) const;
    BiPoly bivariate_generator(unsigned i) const;  // x_{i-1} in the bivariate basis of level i

    LevelElement lift(const BiPoly& a, unsigned i) const;
    BiPoly push(const LevelElement& a) const;
    LevelElement embed(const LevelElement& a, unsigned target) const;
    LevelElement project(const LevelElement& a, unsigned target) const;  // throws not_in_subfield

    VerifyReport verify_level(unsigned i, Rng& rng, std::size_t samples = 20) const;

private:
    Tower(const PrimeField& field, u64 ell, TowerInit init);
    std::shared_ptr<const TowerLevel> build_level(unsigned i, const TowerLevel* below) const;
    FiberRelation relation_for(unsigned i) const;
    void check_level(const LevelElement& a) const;

    PrimeField field_;
    u64 ell_;
    TowerInit init_;
    mutable std::unique_ptr<std::shared_mutex> mutex_;
    mutable std::vector<std::shared_ptr<const TowerLevel>> levels_;
};

}  // namespace ltower

#endif
