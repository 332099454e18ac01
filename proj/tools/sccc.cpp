// Command-line front end: scheme demos, container replay, security sweeps,
// tradeoff curves and gap tables.  Exit codes: 0 success, 1 assertion or
// security violation, 2 invalid configuration or unreadable input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sccc/bounds.hpp"
#include "sccc/container.hpp"
#include "sccc/scheme.hpp"
#include "sccc/security.hpp"

using namespace sccc;
using nlohmann::json;

namespace {

constexpr const char* kCurvesSchema =
    "# sccc curves csv v1\n"
    "# series: point (achievable corner), envelope (lower convex envelope vertex),\n"
    "#         outer (outer-bound sample; t is -1)\n"
    "# columns: l,series,t,mem_num,mem_den,mem,rate_num,rate_den,rate\n";

constexpr const char* kGapSchema =
    "# sccc gap csv v1\n"
    "# columns: n,k,l,t,mem_num,mem_den,mem,inner_rate,outer_rate,ratio,flagged\n";

std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

DemandVector parse_demands(const std::string& spec, const SchemeParams& p, std::uint64_t seed) {
    DemandVector d;
    if (spec == "distinct") {
        for (unsigned u = 0; u < p.num_users; ++u) d.demands.push_back(u % p.num_files);
    } else if (spec == "random") {
        StreamRng rng(seed, "demands");
        for (unsigned u = 0; u < p.num_users; ++u)
            d.demands.push_back(unsigned(rng.uniform(p.num_files)));
    } else {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) d.demands.push_back(unsigned(std::stoul(item)));
    }
    check_demand(d, p);
    return d;
}

std::vector<DemandVector> sample_demands(const SchemeParams& p, std::uint64_t seed,
                                         long long random_count) {
    std::vector<DemandVector> out;
    DemandVector distinct;
    for (unsigned u = 0; u < p.num_users; ++u) distinct.demands.push_back(u % p.num_files);
    out.push_back(distinct);
    DemandVector same;
    same.demands.assign(p.num_users, 0);
    out.push_back(same);
    StreamRng rng(seed, "demands");
    for (long long i = 0; i < random_count; ++i) {
        DemandVector d;
        for (unsigned u = 0; u < p.num_users; ++u)
            d.demands.push_back(unsigned(rng.uniform(p.num_files)));
        out.push_back(d);
    }
    return out;
}

Mutation parse_mutation(const std::string& name, std::size_t index) {
    if (name == "none") return Mutation::None();
    if (name == "drop-ekey") return Mutation::DropEKey(index);
    if (name == "reduce-q") return Mutation::ReduceQ();
    throw Error("unknown mutation: " + name);
}

struct DemoOptions {
    unsigned n = 4, k = 4, l = 2;
    unsigned t = 1;
    long long file_size = 1024;
    std::uint64_t seed = 0;
    std::string demands = "distinct";
    std::string out, library, sidecar;
};

int run_demo(const DemoOptions& o) {
    // files are zero-padded to the next multiple of P*m bits; the requested
    // length is kept in the container header
    SchemeParams params = derive_params(o.n, o.k, o.l, o.t, o.file_size, std::nullopt,
                                        Alignment::pad);
    StreamRng files(o.seed, "files"), ykeys(o.seed, "ykeys"), ekeys(o.seed, "ekeys");
    long long original_bits = o.file_size > 0 ? o.file_size : params.file_bits;
    FileLibrary lib;
    if (!o.library.empty()) {
        RawLibrary raw = read_raw_library(o.library, o.sidecar);
        lib = to_symbols(raw, params);
        original_bits = 0;
        for (const auto& f : raw.files)
            original_bits = std::max<long long>(original_bits, 8 * (long long)f.size());
    } else {
        lib = random_library(params, files);
    }
    PrecodedLibrary pre = precode(lib, params, ykeys);
    KeyPool pool = generate_key_pool(params, ekeys);
    std::vector<UserCache> caches = place(pre, pool, params);
    DemandVector demand = parse_demands(o.demands, params, o.seed);
    BroadcastMessage msg = deliver(demand, pre, pool, params);

    bool all_ok = true;
    for (unsigned u = 0; u < params.num_users; ++u) {
        const bool ok = decode(u, demand, caches[u], msg, params) == lib.files[demand.demands[u]];
        all_ok = all_ok && ok;
        std::cout << "user " << u << " wants file " << demand.demands[u] << ": "
                  << (ok ? "decoded" : "DECODE MISMATCH") << '\n';
    }
    const auto [m, r] = rate_pair(params);
    std::cout << "memory load M = " << rational_str(m) << " ("
              << Rational(cache_bits(caches[0], params), params.file_bits) << " measured)\n"
              << "communication load R = " << rational_str(r) << " ("
              << Rational(message_bits(msg, params), params.file_bits) << " measured)\n";

    if (!o.out.empty()) {
        SchemeContainer c;
        c.num_files = o.n;
        c.num_users = o.k;
        c.max_colluders = o.l;
        c.cache_param = o.t;
        c.file_bits = params.file_bits;
        c.original_bits = original_bits;
        c.field_width = params.spec().width();
        c.reduction_polynomial = params.spec().polynomial();
        c.seed = o.seed;
        c.library = std::move(lib);
        c.precoded = std::move(pre);
        c.pool = std::move(pool);
        c.caches = std::move(caches);
        c.demand = demand;
        c.message = msg;
        write_container(o.out, c);
        std::cout << "container written to " << o.out << '\n';
    }
    return all_ok ? 0 : 1;
}

int run_replay(const std::string& in) {
    SchemeContainer c = read_container(in);
    SchemeParams params = c.params();
    bool all_ok = c.demand.has_value() && c.message.has_value();
    if (!all_ok) {
        std::cout << "container has no delivery to replay\n";
        return 1;
    }
    for (unsigned u = 0; u < params.num_users; ++u) {
        const bool ok = decode(u, *c.demand, c.caches[u], *c.message, params) ==
                        c.library.files[c.demand->demands[u]];
        all_ok = all_ok && ok;
        std::cout << "user " << u << ": " << (ok ? "decoded" : "DECODE MISMATCH") << '\n';
    }
    return all_ok ? 0 : 1;
}

struct VerifyOptions {
    unsigned n = 4, k = 4, l = 2;
    long long t = -1;
    std::string t_range;
    std::uint64_t seed = 0;
    long long demands = 3; // random demand vectors on top of distinct + all-equal
    std::string mutate = "none";
    std::size_t mutate_index = 0;
    bool oracle = false;
    std::string out;
};

json record_json(const SweepRecord& rec, const std::vector<DemandVector>& demands) {
    json j;
    j["constraint"] = rec.constraint;
    j["colluders"] = mask_elements(rec.colluders);
    j["demand"] = rec.demand_index < 0
                      ? json(nullptr)
                      : json(demands[std::size_t(rec.demand_index)].demands);
    j["ok"] = rec.ok;
    j["rank_full"] = rec.rank_full;
    j["rank_keys"] = rec.rank_keys;
    return j;
}

int run_verify(const VerifyOptions& o) {
    std::vector<long long> t_values;
    if (!o.t_range.empty()) {
        const auto colon = o.t_range.find(':');
        if (colon == std::string::npos) throw Error("--t-range expects lo:hi");
        const long long lo = std::stoll(o.t_range.substr(0, colon));
        const long long hi = std::stoll(o.t_range.substr(colon + 1));
        for (long long t = lo; t <= hi; ++t) t_values.push_back(t);
    } else {
        t_values.push_back(o.t < 0 ? 0 : o.t);
    }
    const Mutation mutation = parse_mutation(o.mutate, o.mutate_index);

    json report;
    report["config"] = {{"n", o.n},       {"k", o.k},           {"l", o.l},
                        {"seed", o.seed}, {"mutate", o.mutate}, {"random_demands", o.demands}};
    report["runs"] = json::array();
    bool all_ok = true;
    for (long long t : t_values) {
        SchemeParams params = derive_params(o.n, o.k, o.l, unsigned(t), 0, std::nullopt,
                                            Alignment::pad);
        const auto demands = sample_demands(params, o.seed, o.demands);
        SweepReport sweep = sweep_all_colluding_sets(params, demands, mutation);
        json run;
        run["t"] = t;
        run["colluding_sets"] = (json::number_integer_t)binomial(o.k, o.l);
        run["checks"] = sweep.records.size();
        run["ok"] = sweep.all_ok();
        run["violations"] = json::array();
        for (const auto& rec : sweep.violations())
            run["violations"].push_back(record_json(rec, demands));
        all_ok = all_ok && sweep.all_ok();

        if (o.oracle) {
            json agree = json::array();
            DemandVector distinct = demands.front();
            for (std::uint32_t colluders : subsets_of_size(o.k, o.l)) {
                for (Phase phase : {Phase::pre_delivery, Phase::post_delivery}) {
                    const auto demand = phase == Phase::post_delivery
                                            ? std::optional<DemandVector>(distinct)
                                            : std::nullopt;
                    ObservationSystem sys = build_observation_system(colluders, phase, demand,
                                                                     params, std::nullopt,
                                                                     mutation);
                    const MiResult mi = mutual_information(sys);
                    const bool rank_ok = verify_zero_leakage(sys);
                    json a;
                    a["colluders"] = mask_elements(colluders);
                    a["phase"] = phase == Phase::pre_delivery ? "pre" : "post";
                    a["mi_bits"] = mi.bits;
                    a["mi_zero"] = mi.is_zero;
                    a["rank_ok"] = rank_ok;
                    agree.push_back(a);
                    if (mi.is_zero != rank_ok) all_ok = false;
                }
            }
            run["oracle"] = agree;
        }
        report["runs"].push_back(run);
    }
    report["ok"] = all_ok;

    const std::string text = report.dump(2) + "\n";
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        os << text;
    }
    std::cout << text;
    return all_ok ? 0 : 1;
}

struct CurvesOptions {
    unsigned n = 30, k = 30;
    std::string l_list = "1,2,5,10";
    std::string out, format = "csv";
};

int run_curves(const CurvesOptions& o) {
    std::vector<long long> ls;
    std::stringstream ss(o.l_list);
    std::string item;
    while (std::getline(ss, item, ',')) ls.push_back(std::stoll(item));

    std::ostringstream csv;
    csv << kCurvesSchema;
    json j;
    j["n"] = o.n;
    j["k"] = o.k;
    j["series"] = json::array();
    auto emit = [&](long long l, const char* series, long long t, const Rational& m,
                    const Rational& r) {
        csv << l << ',' << series << ',' << t << ',' << m.numerator() << ',' << m.denominator()
            << ',' << to_double(m) << ',' << r.numerator() << ',' << r.denominator() << ','
            << to_double(r) << '\n';
        j["series"].push_back({{"l", l},
                               {"series", series},
                               {"t", t},
                               {"mem", rational_str(m)},
                               {"rate", rational_str(r)}});
    };
    for (long long l : ls) {
        const TradeoffCurve curve = achievable_points(o.n, o.k, l);
        for (const RatePoint& p : curve.points) emit(l, "point", p.t, p.mem, p.rate);
        for (const RatePoint& p : curve.envelope) emit(l, "envelope", p.t, p.mem, p.rate);
        // outer-bound samples over an even M grid spanning the curve
        const Rational lo = curve.points.front().mem;
        const Rational hi = curve.points.back().mem;
        const int samples = 60;
        for (int i = 0; i <= samples; ++i) {
            const Rational m = lo + (hi - lo) * Rational(i, samples);
            emit(l, "outer", -1, m, outer_bound(m, o.n, o.k, l));
        }
    }

    const std::string text = o.format == "json" ? j.dump(2) + "\n" : csv.str();
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        os << text;
    } else {
        std::cout << text;
    }
    return 0;
}

struct GapOptions {
    unsigned n = 30, k = 30, l = 5;
    std::string out, format = "csv";
};

int run_gap(const GapOptions& o) {
    const std::vector<GapEntry> entries = gap_ratio(o.n, o.k, o.l);
    std::ostringstream csv;
    csv << kGapSchema;
    json j;
    j["n"] = o.n;
    j["k"] = o.k;
    j["l"] = o.l;
    j["entries"] = json::array();
    Rational max_flagged(0);
    bool any_flagged = false;
    for (const GapEntry& e : entries) {
        csv << o.n << ',' << o.k << ',' << o.l << ',' << e.t << ',' << e.mem.numerator() << ','
            << e.mem.denominator() << ',' << to_double(e.mem) << ',' << to_double(e.inner_rate)
            << ',' << to_double(e.outer_rate) << ',' << to_double(e.ratio) << ','
            << (e.flagged ? 1 : 0) << '\n';
        j["entries"].push_back({{"t", e.t},
                                {"mem", rational_str(e.mem)},
                                {"inner_rate", rational_str(e.inner_rate)},
                                {"outer_rate", rational_str(e.outer_rate)},
                                {"ratio", rational_str(e.ratio)},
                                {"flagged", e.flagged}});
        if (e.flagged) {
            any_flagged = true;
            max_flagged = std::max(max_flagged, e.ratio);
        }
    }
    const std::string summary =
        any_flagged ? "max flagged ratio = " + rational_str(max_flagged) + " (" +
                          std::to_string(to_double(max_flagged)) + ")"
                    : "no flagged points";
    csv << "# " << summary << '\n';
    j["max_flagged_ratio"] = any_flagged ? json(rational_str(max_flagged)) : json(nullptr);

    const std::string text = o.format == "json" ? j.dump(2) + "\n" : csv.str();
    if (!o.out.empty()) {
        std::ofstream os(o.out);
        os << text;
        std::cout << summary << '\n';
    } else {
        std::cout << text;
    }
    return 0;
}

// The worked 4-file, 4-user, 2-colluder, t=1 system: asserts the cache layout,
// broadcast composition, decodability, rates and the full security sweep.
int run_golden(std::uint64_t seed) {
    int failures = 0;
    auto check = [&](bool ok, const std::string& what) {
        std::cout << (ok ? "  ok: " : "  FAIL: ") << what << '\n';
        if (!ok) ++failures;
    };

    SchemeParams p = derive_params(4, 4, 2, 1, 1024, FieldSpec(4));
    check(p.secret_count == 2 && p.key_count == 2 && p.share_count == 4, "(G,P,Q) = (4,2,2)");
    StreamRng files(seed, "files"), ykeys(seed, "ykeys"), ekeys(seed, "ekeys");
    FileLibrary lib = random_library(p, files);
    PrecodedLibrary pre = precode(lib, p, ykeys);
    KeyPool pool = generate_key_pool(p, ekeys);
    std::vector<UserCache> caches = place(pre, pool, p);

    for (unsigned k = 0; k < 4; ++k) {
        const auto& z = caches[k];
        bool pattern = z.blocks.size() == 4 && z.e_keys.size() == 3;
        for (const auto& [key, block] : z.blocks)
            pattern = pattern && p.t_subsets.mask(key.second) == (1u << k);
        for (const auto& [j, e] : z.e_keys)
            pattern = pattern && (p.t1_subsets.mask(j) >> k & 1u);
        check(pattern, "user " + std::to_string(k) + " caches its 4 blocks and 3 unique keys");
        check(Rational(cache_bits(z, p), p.file_bits) == Rational(7, 2),
              "user " + std::to_string(k) + " memory load is 7/2");
    }

    DemandVector d{{0, 1, 2, 3}};
    BroadcastMessage msg = deliver(d, pre, pool, p);
    check(msg.symbols.size() == 6, "delivery broadcasts 6 symbols");
    bool composition = true;
    for (const auto& [j, sym] : msg.symbols) {
        std::vector<Symbol> expect = pool.e_keys[j];
        for (unsigned u : mask_elements(p.t1_subsets.mask(j))) {
            const std::size_t ti = p.t_subsets.index(p.t1_subsets.mask(j) & ~(1u << u));
            const auto& block = pre.blocks[d.demands[u]][ti];
            for (std::size_t s = 0; s < expect.size(); ++s) expect[s] ^= block[s];
        }
        composition = composition && sym == expect;
    }
    check(composition, "each symbol is its unique key XOR the two cross blocks");
    check(Rational(message_bits(msg, p), p.file_bits) == Rational(3), "communication load is 3");

    bool decoded = true;
    for (unsigned u = 0; u < 4; ++u)
        decoded = decoded && decode(u, d, caches[u], msg, p) == lib.files[d.demands[u]];
    check(decoded, "all 4 users decode bit-exactly");

    SweepReport sweep = sweep_all_colluding_sets(p, sample_demands(p, seed, 3));
    check(sweep.all_ok(), "all 6 colluding pairs leak nothing, before and after delivery");

    std::cout << (failures == 0 ? "golden example: PASS\n" : "golden example: FAIL\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"secure coded caching with colluding users"};
    app.require_subcommand(1);

    DemoOptions demo;
    auto* cmd_demo = app.add_subcommand("demo", "run precode, place, deliver, decode end to end");
    cmd_demo->add_option("--n", demo.n, "number of files");
    cmd_demo->add_option("--k", demo.k, "number of users");
    cmd_demo->add_option("--l", demo.l, "colluding set size");
    cmd_demo->add_option("--t", demo.t, "caching parameter");
    cmd_demo->add_option("--file-size", demo.file_size, "file size in bits");
    cmd_demo->add_option("--seed", demo.seed, "randomness seed");
    cmd_demo->add_option("--demands", demo.demands, "distinct | random | comma list");
    cmd_demo->add_option("--out", demo.out, "write the scheme container here");
    cmd_demo->add_option("--library", demo.library, "raw concatenated library file");
    cmd_demo->add_option("--sidecar", demo.sidecar, "JSON sidecar with file_lengths");

    std::string replay_in;
    auto* cmd_replay = app.add_subcommand("replay", "re-decode a stored scheme container");
    cmd_replay->add_option("--in", replay_in, "container path")->required();

    VerifyOptions verify;
    auto* cmd_verify = app.add_subcommand("verify", "sweep every colluding set for leakage");
    cmd_verify->add_option("--n", verify.n, "number of files");
    cmd_verify->add_option("--k", verify.k, "number of users");
    cmd_verify->add_option("--l", verify.l, "colluding set size");
    cmd_verify->add_option("--t", verify.t, "caching parameter");
    cmd_verify->add_option("--t-range", verify.t_range, "inclusive lo:hi range of t");
    cmd_verify->add_option("--seed", verify.seed, "demand sampling seed");
    cmd_verify->add_option("--demands", verify.demands,
                           "random demand vectors besides distinct and all-equal");
    cmd_verify->add_option("--mutate", verify.mutate, "none | drop-ekey | reduce-q");
    cmd_verify->add_option("--mutate-index", verify.mutate_index, "unique key to drop");
    cmd_verify->add_flag("--oracle", verify.oracle,
                         "confirm verdicts by brute-force mutual information");
    cmd_verify->add_option("--out", verify.out, "write the JSON report here");

    CurvesOptions curves;
    auto* cmd_curves = app.add_subcommand("curves", "achievable points, envelope, outer bound");
    cmd_curves->add_option("--n", curves.n, "number of files");
    cmd_curves->add_option("--k", curves.k, "number of users");
    cmd_curves->add_option("--l-list", curves.l_list, "comma list of colluding set sizes");
    cmd_curves->add_option("--out", curves.out, "output path");
    cmd_curves->add_option("--format", curves.format, "csv | json");

    GapOptions gap;
    auto* cmd_gap = app.add_subcommand("gap", "inner/outer bound ratio table");
    cmd_gap->add_option("--n", gap.n, "number of files");
    cmd_gap->add_option("--k", gap.k, "number of users");
    cmd_gap->add_option("--l", gap.l, "colluding set size");
    cmd_gap->add_option("--out", gap.out, "output path");
    cmd_gap->add_option("--format", gap.format, "csv | json");

    std::uint64_t golden_seed = 7;
    auto* cmd_golden = app.add_subcommand("golden", "check the worked 4x4 example end to end");
    cmd_golden->add_option("--seed", golden_seed, "randomness seed");

    try {
        app.parse(argc, argv);
        if (*cmd_demo) return run_demo(demo);
        if (*cmd_replay) return run_replay(replay_in);
        if (*cmd_verify) return run_verify(verify);
        if (*cmd_curves) return run_curves(curves);
        if (*cmd_gap) return run_gap(gap);
        if (*cmd_golden) return run_golden(golden_seed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
