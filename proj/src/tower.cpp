#include "ltower/tower.hpp"

#include <chrono>
#include <functional>
#include <mutex>

#include "ltower/error.hpp"
#include "ltower/factor.hpp"

namespace ltower {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::size_t power_of(u64 ell, unsigned i) {
    std::size_t n = 1;
    for (unsigned k = 0; k < i; ++k) n *= ell;
    return n;
}

void check_parameters(const PrimeField& field, u64 ell) {
    const u64 p = field.modulus();
    if (p < 5) throw Error(Errc::invalid_parameter, "tower: p must be at least 5");
    if (ell < 3 || !is_prime_u64(ell)) throw Error(Errc::invalid_parameter, "tower: ell must be an odd prime");
    if (ell == p) throw Error(Errc::invalid_parameter, "tower: ell = p is excluded");
}

// Root of the degree-one Q_0.
u64 base_root(const DensePoly& q0) { return q0.field().neg(q0[0]); }

}  // namespace

std::string_view strategy_name(Strategy s) noexcept {
    switch (s) {
        case Strategy::t1: return "t1";
        case Strategy::t2: return "t2";
        case Strategy::elliptic: return "elliptic";
        case Strategy::general: return "general";
    }
    return "?";
}

Strategy parse_strategy(std::string_view name) {
    for (Strategy s : {Strategy::t1, Strategy::t2, Strategy::elliptic, Strategy::general})
        if (strategy_name(s) == name) return s;
    throw Error(Errc::invalid_parameter, "unknown strategy: " + std::string(name));
}

bool is_t1_seed(const PrimeField& field, u64 ell, u64 seed) {
    const u64 p = field.modulus();
    if (seed % p == 0 || (p - 1) % ell != 0) return false;
    return field.pow(seed % p, (p - 1) / ell) != 1;
}

T1Init find_t1_seed(const PrimeField& field, u64 ell, Rng& rng, std::size_t cap) {
    if ((field.modulus() - 1) % ell != 0) throw Error(Errc::invalid_parameter, "T1: ell must divide p - 1");
    for (std::size_t k = 0; k < cap; ++k) {
        u64 y = field.random(rng);
        if (is_t1_seed(field, ell, y)) return {y};
    }
    throw Error(Errc::iteration_cap, "T1: no non-residue found");
}

bool VerifyReport::passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

Tower::Tower(const PrimeField& field, u64 ell, TowerInit init)
    : field_(field), ell_(ell), init_(std::move(init)), mutex_(std::make_unique<std::shared_mutex>()) {}

Tower Tower::create(const PrimeField& field, u64 ell, std::optional<Strategy> strategy, Rng& rng) {
    check_parameters(field, ell);
    const u64 p = field.modulus();
    if (!strategy) {
        if ((p - 1) % ell == 0) {
            strategy = Strategy::t1;
        } else if ((p + 1) % ell == 0) {
            strategy = Strategy::t2;
        } else {
            try {
                return Tower(field, ell, elliptic_init(field, ell, rng));
            } catch (const Error&) {
                strategy = Strategy::general;
            }
        }
    }
    switch (*strategy) {
        case Strategy::t1: return Tower(field, ell, find_t1_seed(field, ell, rng));
        case Strategy::t2:
            if ((p + 1) % ell != 0) throw Error(Errc::invalid_parameter, "T2: ell must divide p + 1");
            return Tower(field, ell, find_t2_generator(field, ell, rng));
        case Strategy::elliptic:
            if ((p - 1) % ell == 0) throw Error(Errc::invalid_parameter, "elliptic: ell must not divide p - 1");
            return Tower(field, ell, elliptic_init(field, ell, rng));
        case Strategy::general: return Tower(field, ell, general_init(field, ell, rng));
    }
    throw Error(Errc::invalid_parameter, "unknown strategy");
}

Tower Tower::restore(const PrimeField& field, u64 ell, TowerInit init, const std::vector<LevelRecord>& records) {
    check_parameters(field, ell);
    Tower t(field, ell, std::move(init));
    for (unsigned i = 0; i < records.size(); ++i) {
        const LevelRecord& rec = records[i];
        if (rec.minpoly.degree() != static_cast<long>(t.degree(i)) || !rec.minpoly.is_monic())
            throw Error(Errc::corrupted_state, "level " + std::to_string(i) + ": Q_i must be monic of degree ell^i");
        auto lvl = std::make_shared<TowerLevel>(TowerLevel{i, rec.minpoly, ModulusContext(rec.minpoly), {}, {}, {}});
        const bool fiber = t.strategy() != Strategy::general && i > 0;
        if (fiber) {
            try {
                lvl->relation = FiberRelation::make(rec.f, rec.g);
            } catch (const Error& e) {
                throw Error(Errc::corrupted_state, "level " + std::to_string(i) + ": " + e.what());
            }
            if (lvl->relation->ell != ell)
                throw Error(Errc::corrupted_state, "level " + std::to_string(i) + ": relation degree differs from ell");
            lvl->scaling = fiber_scaling(*lvl->relation, lvl->modulus, t.degree(i - 1));
        } else if (!rec.f.is_zero() || !rec.g.is_zero()) {
            throw Error(Errc::corrupted_state, "level " + std::to_string(i) + ": unexpected fiber relation");
        }
        if (t.strategy() == Strategy::general)
            lvl->descent = std::make_shared<DescentData>(descend(std::get<K0Context>(t.init_), i));
        t.levels_.push_back(std::move(lvl));
    }
    return t;
}

Strategy Tower::strategy() const noexcept {
    return std::visit(overloaded{[](const T1Init&) { return Strategy::t1; },
                                 [](const T2Init&) { return Strategy::t2; },
                                 [](const EllipticInit&) { return Strategy::elliptic; },
                                 [](const K0Context&) { return Strategy::general; }},
                      init_);
}

std::size_t Tower::degree(unsigned i) const { return power_of(ell_, i); }

FiberRelation Tower::relation_for(unsigned i) const {
    return std::visit(
        overloaded{[&](const T1Init&) {
                       return FiberRelation::make(DensePoly::monomial(field_, 1, ell_), DensePoly::constant(field_, 1));
                   },
                   [&](const T2Init& init) { return t2_relation(init); },
                   [&](const EllipticInit& init) { return backward_relation(init.cycle, i); },
                   [&](const K0Context&) -> FiberRelation {
                       throw Error(Errc::invalid_parameter, "general towers carry no fiber relation");
                   }},
        init_);
}

std::shared_ptr<const TowerLevel> Tower::build_level(unsigned i, const TowerLevel* below) const {
    const std::size_t n = degree(i);
    DensePoly q(field_);
    std::shared_ptr<const DescentData> descent;
    switch (strategy()) {
        case Strategy::t1:
            q = DensePoly::monomial(field_, 1, n) - DensePoly::constant(field_, std::get<T1Init>(init_).seed);
            break;
        case Strategy::t2: q = t2_level_poly(std::get<T2Init>(init_), i); break;
        case Strategy::elliptic:
            if (i == 0) {
                q = DensePoly(field_, std::vector<u64>{field_.neg(std::get<EllipticInit>(init_).eta), 1});
            } else {
                // Q_i = g^{deg Q_{i-1}} Q_{i-1}(f / g), made monic.
                const FiberRelation rel = relation_for(i);
                const std::size_t rows = below->minpoly.size();
                q = compose(BiPoly::from_x_poly(below->minpoly, rows, ell_), rel.f, rel.g, rows).monic();
            }
            break;
        case Strategy::general: {
            auto d = std::make_shared<DescentData>(descend(std::get<K0Context>(init_), i));
            q = d->minpoly;
            descent = std::move(d);
            break;
        }
    }
    if (q.degree() != static_cast<long>(n)) throw Error(Errc::corrupted_state, "tower: Q_i has the wrong degree");
    auto lvl = std::make_shared<TowerLevel>(TowerLevel{i, q, ModulusContext(q), {}, {}, std::move(descent)});
    if (i > 0 && strategy() != Strategy::general) {
        lvl->relation = relation_for(i);
        if (strategy() != Strategy::t1) lvl->scaling = fiber_scaling(*lvl->relation, lvl->modulus, degree(i - 1));
    }
    return lvl;
}

std::shared_ptr<const TowerLevel> Tower::level(unsigned i) const {
    {
        std::shared_lock lock(*mutex_);
        if (i < levels_.size()) return levels_[i];
    }
    std::unique_lock lock(*mutex_);
    while (levels_.size() <= i) {
        const TowerLevel* below = levels_.empty() ? nullptr : levels_.back().get();
        levels_.push_back(build_level(static_cast<unsigned>(levels_.size()), below));
    }
    return levels_[i];
}

unsigned Tower::built_levels() const {
    std::shared_lock lock(*mutex_);
    return static_cast<unsigned>(levels_.size());
}

LevelRecord Tower::record(unsigned i) const {
    auto lvl = level(i);
    LevelRecord rec{lvl->minpoly, DensePoly(field_), DensePoly(field_)};
    if (lvl->relation) {
        rec.f = lvl->relation->f;
        rec.g = lvl->relation->g;
    }
    return rec;
}

void Tower::check_level(const LevelElement& a) const {
    if (a.value.size() > degree(a.level))
        throw Error(Errc::invalid_parameter, "level element exceeds the degree bound");
}

LevelElement Tower::element(unsigned i, const DensePoly& a) const { return {i, level(i)->modulus.reduce(a)}; }

LevelElement Tower::generator(unsigned i) const {
    if (i == 0) return constant(0, base_root(level(0)->minpoly));
    return element(i, DensePoly::x(field_));
}

LevelElement Tower::constant(unsigned i, u64 c) const { return {i, DensePoly::constant(field_, c)}; }

LevelElement Tower::random(unsigned i, Rng& rng) const { return {i, DensePoly::random(field_, degree(i), rng)}; }

LevelElement Tower::add(const LevelElement& a, const LevelElement& b) const {
    if (a.level != b.level) throw Error(Errc::invalid_parameter, "add: level mismatch");
    return {a.level, a.value + b.value};
}

LevelElement Tower::sub(const LevelElement& a, const LevelElement& b) const {
    if (a.level != b.level) throw Error(Errc::invalid_parameter, "sub: level mismatch");
    return {a.level, a.value - b.value};
}

LevelElement Tower::mul(const LevelElement& a, const LevelElement& b) const {
    if (a.level != b.level) throw Error(Errc::invalid_parameter, "mul: level mismatch");
    return {a.level, level(a.level)->modulus.mul(a.value, b.value)};
}

LevelElement Tower::inverse(const LevelElement& a) const {
    if (a.value.is_zero()) throw Error(Errc::division_by_zero, "inverse of zero");
    return {a.level, level(a.level)->modulus.inverse(a.value)};
}

LevelElement Tower::pow(const LevelElement& a, const BigExponent& e) const {
    return {a.level, level(a.level)->modulus.pow(a.value, e)};
}

BiPoly Tower::fiber_poly(unsigned i) const {
    if (i == 0) throw Error(Errc::invalid_parameter, "level 0 has no fiber polynomial");
    auto lvl = level(i);
    auto below = level(i - 1);
    const std::size_t n = degree(i - 1);
    if (lvl->descent) return general_fiber_poly(*lvl->descent, *below->descent);
    // f(Y) - x_{i-1} g(Y)
    const FiberRelation& rel = *lvl->relation;
    BiPoly t(field_, n, ell_ + 1);
    const u64 x0 = base_root(level(0)->minpoly);
    for (std::size_t s = 0; s <= ell_; ++s) {
        if (n == 1) {
            t.set(0, s, field_.sub(rel.f[s], field_.mul(x0, rel.g[s])));
        } else {
            t.set(0, s, rel.f[s]);
            t.set(1, s, field_.neg(rel.g[s]));
        }
    }
    return t;
}

BiPoly Tower::bivariate_generator(unsigned i) const {
    if (i == 0) throw Error(Errc::invalid_parameter, "level 0 has no bivariate basis");
    BiPoly x(field_, degree(i - 1), ell_);
    if (i == 1)
        x.set(0, 0, base_root(level(0)->minpoly));
    else
        x.set(1, 0, 1);
    return x;
}

BiPoly Tower::bivariate_mul(const BiPoly& a, const BiPoly& b, unsigned i) const {
    const ModulusContext& below = level(i - 1)->modulus;
    const BiPoly fiber = fiber_poly(i);
    std::vector<DensePoly> prod(2 * ell_ - 1, DensePoly(field_));
    for (std::size_t s = 0; s < ell_; ++s) {
        const DensePoly as = a.column(s);
        for (std::size_t t = 0; t < ell_; ++t) prod[s + t] = prod[s + t] + ltower::mul(as, b.column(t));
    }
    for (auto& c : prod) c = below.reduce(c);
    for (std::size_t top = prod.size() - 1; top >= ell_; --top) {
        const DensePoly c = prod[top];
        for (std::size_t s = 0; s < ell_; ++s)
            prod[top - ell_ + s] = below.reduce(prod[top - ell_ + s] - ltower::mul(c, fiber.column(s)));
    }
    BiPoly out(field_, a.rows(), ell_);
    for (std::size_t t = 0; t < ell_; ++t)
        for (std::size_t r = 0; r < prod[t].size(); ++r) out.set(r, t, prod[t][r]);
    return out;
}

LevelElement Tower::lift(const BiPoly& a, unsigned i) const {
    if (i == 0) throw Error(Errc::invalid_parameter, "lift needs a level of at least 1");
    const std::size_t n = degree(i - 1);
    if (a.rows() != n || a.cols() != ell_) throw Error(Errc::invalid_parameter, "lift: bivariate shape mismatch");
    auto lvl = level(i);
    if (lvl->descent) return {i, general_lift(a, *lvl->descent, *level(i - 1)->descent)};
    if (strategy() == Strategy::t1) return {i, t1_lift(a, ell_, n)};
    return {i, lift_fiber(a, *lvl->relation, lvl->modulus, n, *lvl->scaling)};
}

BiPoly Tower::push(const LevelElement& a) const {
    const unsigned i = a.level;
    if (i == 0) throw Error(Errc::invalid_parameter, "push needs a level of at least 1");
    check_level(a);
    const std::size_t n = degree(i - 1);
    auto lvl = level(i);
    if (lvl->descent) return general_push(a.value, *lvl->descent, *level(i - 1)->descent);
    if (strategy() == Strategy::t1) return t1_push(a.value, ell_, n);
    return push_fiber(a.value, *lvl->relation, lvl->modulus, n, *lvl->scaling);
}

LevelElement Tower::embed(const LevelElement& a, unsigned target) const {
    if (target < a.level) throw Error(Errc::invalid_parameter, "embed: target below source");
    check_level(a);
    LevelElement cur = a;
    while (cur.level < target) {
        const unsigned next = cur.level + 1;
        cur = lift(BiPoly::from_x_poly(cur.value, degree(cur.level), ell_), next);
    }
    return cur;
}

LevelElement Tower::project(const LevelElement& a, unsigned target) const {
    if (target > a.level) throw Error(Errc::invalid_parameter, "project: target above source");
    LevelElement cur = a;
    while (cur.level > target) {
        BiPoly b = push(cur);
        if (!b.y_free())
            throw Error(Errc::not_in_subfield, "element does not lie in level " + std::to_string(cur.level - 1));
        cur = {cur.level - 1, b.column(0)};
    }
    return cur;
}

VerifyReport Tower::verify_level(unsigned i, Rng& rng, std::size_t samples) const {
    VerifyReport report{i, {}};
    auto run = [&](std::string name, const std::function<std::string()>& body) {
        CheckResult r{std::move(name), false, 0, {}};
        auto t0 = std::chrono::steady_clock::now();
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.checks.push_back(std::move(r));
    };
    std::shared_ptr<const TowerLevel> lvl;
    try {
        lvl = level(i);
    } catch (const std::exception& e) {
        report.checks.push_back({"build", false, 0, e.what()});
        return report;
    }
    const DensePoly& q = lvl->minpoly;
    run("shape", [&]() -> std::string {
        if (q.degree() != static_cast<long>(degree(i))) return "degree differs from ell^i";
        if (!q.is_monic()) return "not monic";
        return {};
    });
    run("irreducible", [&]() -> std::string { return is_irreducible(q) ? "" : "Q_i is reducible"; });
    if (lvl->descent)
        run("descent_consistent",
            [&]() -> std::string { return lvl->descent->minpoly == q ? "" : "stored Q_i differs from the descent"; });
    if (degree(i) <= 729) {
        // Newton: the sum of the Frobenius conjugates of x_i is minus the subleading coefficient.
        run("frobenius_trace", [&]() -> std::string {
            DensePoly conj = generator(i).value, trace(field_);
            for (std::size_t k = 0; k < degree(i); ++k) {
                trace = trace + conj;
                conj = lvl->modulus.pow(conj, field_.modulus());
            }
            if (conj != generator(i).value) return "x_i^{p^{ell^i}} != x_i";
            if (trace != DensePoly::constant(field_, field_.neg(q[degree(i) - 1]))) return "trace mismatch";
            return {};
        });
    }
    if (i == 0) return report;
    const std::size_t n = degree(i - 1);
    const LevelElement lifted = lift(bivariate_generator(i), i);
    run("root_of_previous", [&]() -> std::string {
        return lvl->modulus.compose(level(i - 1)->minpoly, lifted.value).is_zero() ? ""
                                                                                     : "Q_{i-1}(x_{i-1}) != 0";
    });
    run("fiber_vanishes", [&]() -> std::string {
        const BiPoly t = fiber_poly(i);
        DensePoly acc(field_);
        for (std::size_t s = ell_ + 1; s-- > 0;)
            acc = lvl->modulus.mul(acc, DensePoly::x(field_)) + lvl->modulus.compose(t.column(s), lifted.value);
        return lvl->modulus.reduce(acc).is_zero() ? "" : "T_i(x_{i-1}, x_i) != 0";
    });
    run("roundtrip", [&]() -> std::string {
        for (std::size_t k = 0; k < samples; ++k) {
            BiPoly a = BiPoly::random(field_, n, ell_, rng);
            if (push(lift(a, i)) != a) return "push(lift(A)) != A";
            LevelElement u = random(i, rng);
            if (lift(push(u), i) != u) return "lift(push(a)) != a";
        }
        return {};
    });
    run("homomorphism", [&]() -> std::string {
        for (std::size_t k = 0; k < samples; ++k) {
            BiPoly a = BiPoly::random(field_, n, ell_, rng), b = BiPoly::random(field_, n, ell_, rng);
            if (lift(bivariate_mul(a, b, i), i) != mul(lift(a, i), lift(b, i))) return "lift(AB) != lift(A) lift(B)";
        }
        return {};
    });
    return report;
}

}  // namespace ltower
