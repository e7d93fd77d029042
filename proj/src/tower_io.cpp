#include "ltower/tower_io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "ltower/error.hpp"

namespace ltower {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* format_tag = "ltower-tower";

[[noreturn]] void corrupt(const std::string& what) { throw Error(Errc::corrupt_file, "tower file: " + what); }

std::string dec(u64 v) { return std::to_string(v); }

json poly_json(const DensePoly& a) {
    json out = json::array();
    for (u64 c : a.coeffs()) out.push_back(dec(c));
    return out;
}

u64 read_u64(const json& j, const std::string& what) {
    if (!j.is_string()) corrupt(what + " must be a decimal string");
    const std::string s = j.get<std::string>();
    u64 v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size() || s.empty()) corrupt(what + " is not a decimal integer");
    return v;
}

const json& field_of(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) corrupt(std::string("missing field '") + key + "'");
    return obj.at(key);
}

u64 read_field(const json& obj, const char* key) { return read_u64(field_of(obj, key), key); }

DensePoly read_poly(const PrimeField& f, const json& j, const std::string& what) {
    if (!j.is_array()) corrupt(what + " must be an array");
    std::vector<u64> c;
    for (const auto& e : j) {
        const u64 v = read_u64(e, what);
        if (v >= f.modulus()) throw Error(Errc::corrupted_state, what + " has a coefficient out of range");
        c.push_back(v);
    }
    // Stored polynomials carry no trailing zeros.
    if (!c.empty() && c.back() == 0) throw Error(Errc::corrupted_state, what + " has a zero leading coefficient");
    return DensePoly(f, std::move(c));
}

json init_json(const Tower& t) {
    return std::visit(
        [](const auto& init) -> json {
            using T = std::decay_t<decltype(init)>;
            if constexpr (std::is_same_v<T, T1Init>) {
                return {{"seed", dec(init.seed)}};
            } else if constexpr (std::is_same_v<T, T2Init>) {
                return {{"delta", dec(init.params.delta)}, {"alpha", dec(init.alpha)}};
            } else if constexpr (std::is_same_v<T, EllipticInit>) {
                const Curve& e0 = init.cycle.steps.front().domain;
                return {{"a", dec(e0.a)},
                        {"b", dec(e0.b)},
                        {"order", dec(init.order)},
                        {"exponent", dec(init.exponent)},
                        {"eta_x", dec(init.eta_point.x)},
                        {"eta_y", dec(init.eta_point.y)}};
            } else {
                return {{"degree", dec(init.degree)},
                        {"cyclotomic_factor", poly_json(init.cyclotomic_factor)},
                        {"seed", poly_json(init.seed)},
                        {"base_modulus", poly_json(init.base_modulus)}};
            }
        },
        t.init());
}

TowerInit read_init(const PrimeField& f, u64 ell, Strategy s, const json& j) {
    switch (s) {
        case Strategy::t1: {
            T1Init init{read_field(j, "seed")};
            if (!is_t1_seed(f, ell, init.seed)) throw Error(Errc::corrupted_state, "T1 seed is an ell-th power");
            return init;
        }
        case Strategy::t2: {
            T2Init init{ConicParams{f, read_field(j, "delta")}, read_field(j, "alpha"), ell};
            if (init.params.delta >= f.modulus() || is_quadratic_residue(FieldElement(f, init.params.delta)))
                throw Error(Errc::corrupted_state, "T2 delta is not a non-residue");
            if (init.alpha >= f.modulus()) throw Error(Errc::corrupted_state, "alpha out of range");
            return init;
        }
        case Strategy::elliptic: {
            const u64 a = read_field(j, "a"), b = read_field(j, "b");
            if (a >= f.modulus() || b >= f.modulus()) throw Error(Errc::corrupted_state, "curve coefficient out of range");
            EllipticInit init;
            const Curve e0 = Curve::make(f, a, b);
            init.order = read_field(j, "order");
            init.exponent = static_cast<unsigned>(read_field(j, "exponent"));
            init.eta_point = ECPoint::affine(read_field(j, "eta_x"), read_field(j, "eta_y"));
            init.eta = init.eta_point.x;
            if (!on_curve(init.eta_point, e0)) throw Error(Errc::corrupted_state, "eta is not on the curve");
            init.cycle = build_cycle(e0, ell, init.order);
            return init;
        }
        case Strategy::general: {
            K0Context ctx{f,
                          ell,
                          static_cast<std::size_t>(read_field(j, "degree")),
                          read_poly(f, field_of(j, "cyclotomic_factor"), "cyclotomic_factor"),
                          read_poly(f, field_of(j, "seed"), "seed"),
                          read_poly(f, field_of(j, "base_modulus"), "base_modulus"),
                          0};
            if (ctx.base_modulus.degree() != static_cast<long>(ctx.degree) || !ctx.base_modulus.is_monic())
                throw Error(Errc::corrupted_state, "base modulus has the wrong shape");
            ctx.group_order = big_pow(f.modulus(), ctx.degree) - 1;
            return ctx;
        }
    }
    corrupt("unknown strategy");
}

}  // namespace

std::string export_tower(const Tower& tower) {
    json doc;
    doc["format"] = format_tag;
    doc["version"] = tower_file_version;
    doc["p"] = dec(tower.field().modulus());
    doc["ell"] = dec(tower.ell());
    doc["strategy"] = std::string(strategy_name(tower.strategy()));
    doc["init"] = init_json(tower);
    json levels = json::array();
    for (unsigned i = 0; i < tower.built_levels(); ++i) {
        const LevelRecord rec = tower.record(i);
        levels.push_back({{"i", i}, {"q", poly_json(rec.minpoly)}, {"f", poly_json(rec.f)}, {"g", poly_json(rec.g)}});
    }
    doc["levels"] = std::move(levels);
    return doc.dump(1) + "\n";
}

Tower import_tower(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        corrupt(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) corrupt("top level must be an object");
    if (!doc.contains("format") || doc.at("format") != format_tag) corrupt("not a tower file");
    const json& version = field_of(doc, "version");
    if (!version.is_number_integer()) corrupt("version must be an integer");
    if (version.get<long long>() != tower_file_version)
        throw Error(Errc::version_mismatch, "tower file version " + version.dump() + " is not supported (expected " +
                                                std::to_string(tower_file_version) + ")");
    const u64 p = read_field(doc, "p");
    const u64 ell = read_field(doc, "ell");
    if (!is_prime_u64(p) || p >= PrimeField::max_modulus || p < 5)
        throw Error(Errc::corrupted_state, "p is not a usable prime");
    const PrimeField f(p);
    const json& sj = field_of(doc, "strategy");
    if (!sj.is_string()) corrupt("strategy must be a string");
    Strategy strategy;
    try {
        strategy = parse_strategy(sj.get<std::string>());
    } catch (const Error&) {
        corrupt("unknown strategy");
    }
    // Content that parses but does not describe a valid tower is a verification failure.
    auto as_invalid = [](const Error& e) {
        if (e.code() == Errc::corrupt_file || e.code() == Errc::version_mismatch) throw e;
        throw Error(Errc::corrupted_state, e.what());
    };
    std::optional<TowerInit> init;
    try {
        init = read_init(f, ell, strategy, field_of(doc, "init"));
    } catch (const Error& e) {
        as_invalid(e);
    }

    const json& lj = field_of(doc, "levels");
    if (!lj.is_array()) corrupt("levels must be an array");
    std::vector<LevelRecord> records;
    for (std::size_t k = 0; k < lj.size(); ++k) {
        const json& lv = lj[k];
        const json& ij = field_of(lv, "i");
        if (!ij.is_number_unsigned() || ij.get<std::size_t>() != k) corrupt("levels must be listed as 0, 1, 2, ...");
        const std::string tag = "level " + std::to_string(k);
        records.push_back({read_poly(f, field_of(lv, "q"), tag + " q"), read_poly(f, field_of(lv, "f"), tag + " f"),
                           read_poly(f, field_of(lv, "g"), tag + " g")});
    }
    try {
        return Tower::restore(f, ell, std::move(*init), records);
    } catch (const Error& e) {
        as_invalid(e);
    }
    corrupt("unreachable");
}

void save_tower(const Tower& tower, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
    out << export_tower(tower);
    if (!out) throw Error(Errc::io_error, "write to " + path + " failed");
}

Tower load_tower(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return import_tower(buf.str());
}

}  // namespace ltower
