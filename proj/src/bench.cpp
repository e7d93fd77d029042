#include "ltower/bench.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <ostream>

#include "ltower/error.hpp"

namespace ltower {

namespace {

// Polynomials in Y over L = F_p[X]/(Q_i); entry k is the reduced coefficient of Y^k.
using ExtPoly = std::vector<DensePoly>;

class ExtArith {
public:
    explicit ExtArith(const ModulusContext& big) : big_(big), n_(big.degree()) {}

    const PrimeField& field() const { return big_.field(); }

    void trim(ExtPoly& a) const {
        while (!a.empty() && a.back().is_zero()) a.pop_back();
    }

    // One Kronecker-packed product, then coefficientwise reduction mod Q_i.
    ExtPoly mul(const ExtPoly& a, const ExtPoly& b) const {
        if (a.empty() || b.empty()) return {};
        const std::size_t stride = 2 * n_ - 1;
        return unpack(&a == &b ? square(pack(a, stride)) : ltower::mul(pack(a, stride), pack(b, stride)),
                      a.size() + b.size() - 1);
    }

    ExtPoly unpack(const DensePoly& c, std::size_t size) const {
        const std::size_t stride = 2 * n_ - 1;
        const auto& cc = c.coeffs();
        ExtPoly out(size, DensePoly(field()));
        for (std::size_t k = 0; k < out.size(); ++k) {
            const std::size_t lo = k * stride;
            if (lo >= cc.size()) break;
            const std::size_t hi = std::min(cc.size(), lo + stride);
            out[k] = big_.reduce(DensePoly(field(), std::vector<u64>(cc.begin() + static_cast<std::ptrdiff_t>(lo),
                                                                     cc.begin() + static_cast<std::ptrdiff_t>(hi))));
        }
        trim(out);
        return out;
    }

    ExtPoly sub(ExtPoly a, const ExtPoly& b) const {
        if (a.size() < b.size()) a.resize(b.size(), DensePoly(field()));
        for (std::size_t k = 0; k < b.size(); ++k) a[k] = a[k] - b[k];
        trim(a);
        return a;
    }

    ExtPoly truncated(ExtPoly a, std::size_t k) const {
        if (a.size() > k) a.resize(k, DensePoly(field()));
        trim(a);
        return a;
    }

    ExtPoly reversed(const ExtPoly& a, std::size_t len) const {
        ExtPoly r(len, DensePoly(field()));
        for (std::size_t k = 0; k < a.size() && k < len; ++k) r[len - 1 - k] = a[k];
        trim(r);
        return r;
    }

    ExtPoly inv_series(const ExtPoly& f, std::size_t k) const {
        ExtPoly g{big_.inverse(f.at(0))};
        for (std::size_t m = 1; m < k;) {
            m = std::min(2 * m, k);
            ExtPoly e = truncated(mul(truncated(f, m), g), m);
            e[0] = e[0] - DensePoly::constant(field(), 1);
            trim(e);
            g = sub(g, truncated(mul(g, e), m));
        }
        return g;
    }

    ExtPoly monic(ExtPoly a) const {
        const DensePoly inv = big_.inverse(a.back());
        for (auto& c : a) c = big_.mul(c, inv);
        return a;
    }

    struct Modulus {
        ExtPoly m;  // monic
        ExtPoly recip;
    };

    Modulus make_modulus(ExtPoly m) const {
        const std::size_t d = m.size() - 1;
        ExtPoly r = inv_series(reversed(m, m.size()), std::max<std::size_t>(d, 1));
        return {std::move(m), std::move(r)};
    }

    ExtPoly rem(const ExtPoly& a, const Modulus& md) const {
        const std::size_t d = md.m.size() - 1;
        if (a.size() <= d) return a;
        const std::size_t qlen = a.size() - d;
        ExtPoly q = truncated(mul(reversed(a, a.size()), truncated(md.recip, qlen)), qlen);
        q = reversed(q, qlen);
        return truncated(sub(a, mul(q, md.m)), d);
    }

    ExtPoly powmod(const ExtPoly& base, const BigExponent& e, const Modulus& md) const {
        ExtPoly acc{DensePoly::constant(field(), 1)};
        for (std::size_t bit = bit_length(e); bit-- > 0;) {
            acc = rem(mul(acc, acc), md);
            if (bit_test(e, bit)) acc = rem(mul(acc, base), md);
        }
        return acc;
    }

    // Schoolbook division; the degrees involved here stay small.
    std::pair<ExtPoly, ExtPoly> divrem(ExtPoly a, const ExtPoly& b) const {
        const DensePoly lead_inv = big_.inverse(b.back());
        const std::size_t db = b.size() - 1;
        ExtPoly q(a.size() >= b.size() ? a.size() - db : 0, DensePoly(field()));
        for (std::size_t k = a.size(); k-- > db;) {
            if (a[k].is_zero()) continue;
            const DensePoly c = big_.mul(a[k], lead_inv);
            q[k - db] = c;
            for (std::size_t j = 0; j <= db; ++j) a[k - db + j] = big_.reduce(a[k - db + j] - ltower::mul(c, b[j]));
        }
        trim(a);
        trim(q);
        return {q, a};
    }

    ExtPoly gcd(ExtPoly a, ExtPoly b) const {
        while (!b.empty()) {
            ExtPoly r = divrem(std::move(a), b).second;
            a = std::move(b);
            b = std::move(r);
        }
        return monic(std::move(a));
    }

private:
    DensePoly pack(const ExtPoly& a, std::size_t stride) const {
        std::vector<u64> flat(a.size() * stride, 0);
        for (std::size_t k = 0; k < a.size(); ++k)
            std::copy(a[k].coeffs().begin(), a[k].coeffs().end(), flat.begin() + static_cast<std::ptrdiff_t>(k * stride));
        return DensePoly(field(), std::move(flat));
    }

    const ModulusContext& big_;
    std::size_t n_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <class Fn>
double timed(Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    return seconds_since(t0);
}

}  // namespace

DensePoly baseline_root(const Tower& tower, unsigned i, Rng& rng) {
    if (i == 0) throw Error(Errc::invalid_parameter, "baseline_root: level must be at least 1");
    const PrimeField& f = tower.field();
    const u64 p = f.modulus();
    const auto level = tower.level(i);
    const auto below = tower.level(i - 1);
    const ModulusContext& big = level->modulus;
    const DensePoly& target = below->minpoly;
    const std::size_t n = static_cast<std::size_t>(target.degree());
    if (n == 1) return DensePoly::constant(f, f.neg(target[0]));

    ExtArith ext(big);
    ExtPoly h;
    for (u64 c : target.coeffs()) h.push_back(DensePoly::constant(f, c));
    // The roots all lie in the subfield of degree n; its quadratic character splits them.
    const BigExponent half = (big_pow(p, n) - 1) / 2;
    while (h.size() > 2) {
        DensePoly z = DensePoly::random(f, big.degree(), rng);
        DensePoly delta(f);
        for (std::size_t k = 0; k < tower.ell(); ++k) {
            delta = delta + z;
            for (std::size_t t = 0; t < n; ++t) z = big.pow(z, p);
        }
        const auto md = ext.make_modulus(h);
        ExtPoly w = ext.powmod({delta, DensePoly::constant(f, 1)}, half, md);
        if (w.empty()) continue;
        w[0] = w[0] - DensePoly::constant(f, 1);
        ext.trim(w);
        ExtPoly g = ext.gcd(h, w);
        if (g.size() <= 1 || g.size() == h.size()) continue;
        if (2 * (g.size() - 1) <= h.size() - 1)
            h = std::move(g);
        else
            h = ext.monic(ext.divrem(h, g).first);
    }
    return big.reduce(-h[0]);  // h = Y - root
}

LevelElement baseline_embed(const Tower& tower, const LevelElement& a, Rng& rng) {
    const unsigned i = a.level + 1;
    const DensePoly root = baseline_root(tower, i, rng);
    return {i, tower.level(i)->modulus.compose(a.value, root)};
}

std::vector<BenchRecord> run_bench(const BenchConfig& config) {
    const PrimeField field(config.p);
    auto wanted = [&](const std::string& op) {
        return config.ops.empty() || std::find(config.ops.begin(), config.ops.end(), op) != config.ops.end();
    };
    const std::size_t reps = std::max<std::size_t>(config.reps, 1);

    // Each level runs on its own tower instance, so levels can be measured concurrently.
    auto bench_level = [&](unsigned i) {
        std::vector<BenchRecord> out;
        Rng rng(config.seed);
        Tower tower = Tower::create(field, config.ell, config.strategy, rng);
        const std::string name(strategy_name(tower.strategy()));
        // body returns the seconds it wants counted.
        auto record = [&](const std::string& op, const std::function<double()>& body) {
            if (!wanted(op)) return;
            body();  // warm-up
            std::vector<double> times;
            for (std::size_t r = 0; r < reps; ++r) times.push_back(body());
            std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
            out.push_back({name, config.p, config.ell, i, op, reps, times[times.size() / 2], tower.degree(i)});
        };
        if (i > 0) tower.level(i - 1);
        record("build", [&] {
            Rng build_rng(config.seed);
            Tower fresh = Tower::create(field, config.ell, tower.strategy(), build_rng);
            if (i > 0) fresh.level(i - 1);
            auto t0 = std::chrono::steady_clock::now();
            fresh.level(i);
            return seconds_since(t0);
        });
        tower.level(i);
        const LevelElement a = tower.random(i, rng), b = tower.random(i, rng);
        record("mul", [&] { return timed([&] { tower.mul(a, b); }); });
        record("inv", [&] { return timed([&] { tower.inverse(a.value.is_zero() ? tower.constant(i, 1) : a); }); });
        if (i > 0) {
            const BiPoly bi = BiPoly::random(field, tower.degree(i - 1), config.ell, rng);
            const LevelElement below = tower.random(i - 1, rng);
            record("lift", [&] { return timed([&] { tower.lift(bi, i); }); });
            record("push", [&] { return timed([&] { tower.push(a); }); });
            record("embed", [&] { return timed([&] { tower.embed(below, i); }); });
            if (i <= config.baseline_max_level)
                record("baseline_embed", [&] { return timed([&] { baseline_embed(tower, below, rng); }); });
        }
        return out;
    };

    std::vector<BenchRecord> records;
    std::vector<unsigned> levels;
    for (unsigned i = config.first_level; i <= config.levels; ++i) levels.push_back(i);
    const unsigned jobs = std::max(1u, config.jobs);
    for (std::size_t start = 0; start < levels.size(); start += jobs) {
        std::vector<std::future<std::vector<BenchRecord>>> batch;
        for (std::size_t k = start; k < std::min(levels.size(), start + jobs); ++k)
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, bench_level, levels[k]));
        for (auto& fut : batch) {
            auto part = fut.get();
            records.insert(records.end(), part.begin(), part.end());
        }
    }
    return records;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
    out << bench_csv_header << '\n';
    const auto old_precision = out.precision(9);
    for (const auto& r : records)
        out << r.strategy << ',' << r.p << ',' << r.ell << ',' << r.level << ',' << r.op << ',' << r.reps << ','
            << r.median_seconds << ',' << r.coefficients << '\n';
    out.precision(old_precision);
}

}  // namespace ltower
