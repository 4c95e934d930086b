#pragma once

#include "qlab/json_io.hpp"
#include "qlab/qlab.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace qlab::cli {

enum Exit : int { kOk = 0, kUsage = 1, kResource = 2, kViolation = 3 };

inline int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::CapExceeded:
    case ErrorKind::CacheIntegrity:
    case ErrorKind::FieldNotFinite:
        return kResource;
    case ErrorKind::NotFactorable:
    case ErrorKind::NotSurjective:
    case ErrorKind::RelationViolated:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::AlgorithmFailure:
        return kViolation;
    case ErrorKind::UnsupportedType:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::NonGenericTheta:
    case ErrorKind::ParseError:
    case ErrorKind::InvalidArgument:
        return kUsage;
    }
    return kUsage;
}

struct RunConfig {
    std::string type;
    int node = 0;
    std::string theta;
    std::string word;
    std::string out;
    std::string report;
    std::string cache_dir;
    std::size_t cap_monomials = FmCaps{}.max_monomials;
    std::int64_t cap_height = FmCaps{}.max_height;
    std::size_t cap_w = 2000;
    std::size_t cap_entries = SearchCaps{}.max_entries;
    std::size_t cap_stability_dim = StabilityOptions{}.dim_cap;
    std::string field = "F2";
    std::string v;
    std::string w;
    std::string point;
    bool trusted = false;
    std::optional<std::uint64_t> shuffle_seed;

    FmCaps fm_caps() const { return FmCaps{cap_monomials, cap_height}; }

    std::string effective_cache_dir() const
    {
        if (const char* env = std::getenv("QLAB_CACHE_DIR"); env && *env)
            return env;
        return cache_dir;
    }
};

class Context {
public:
    Context(const RunConfig& cfg, std::ostream& out, std::ostream& err) : cfg(cfg), out(out), err(err) {}

    const RunConfig& cfg;
    std::ostream& out;
    std::ostream& err;

    CartanDatum datum() const
    {
        if (cfg.type.empty())
            throw Error(ErrorKind::InvalidArgument, "--type is required");
        return build_cartan(cfg.type);
    }

    /// q-character through the on-disk cache when a cache directory is set.
    QChar qchar(const CartanDatum& cd, int k) const
    {
        const std::string dir = cfg.effective_cache_dir();
        const FmCaps caps = cfg.fm_caps();
        if (dir.empty() || cfg.shuffle_seed)
            return fm_qchar(cd, k, caps, cfg.shuffle_seed);
        const std::string key = qchar_cache_key(cd.label(), k, caps);
        const std::filesystem::path file = std::filesystem::path(dir) / cache_file_name(key);
        if (std::filesystem::exists(file)) {
            json j;
            try {
                j = read_json_file(file.string());
            } catch (const Error& e) {
                throw Error(ErrorKind::CacheIntegrity, file.string() + ": unreadable cache entry");
            }
            try {
                return qchar_from_json(open_cache_envelope(j, key));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::CacheIntegrity)
                    throw Error(ErrorKind::CacheIntegrity, file.string() + ": " + e.what());
                throw Error(ErrorKind::CacheIntegrity, file.string() + ": malformed payload");
            }
        }
        QChar chi = fm_qchar(cd, k, caps);
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec)
            throw Error(ErrorKind::CacheIntegrity, "cannot create cache directory " + dir);
        write_file(file.string(), dump(cache_envelope(key, to_json(chi))));
        return chi;
    }

    std::vector<int> nodes(const CartanDatum& cd) const
    {
        if (cfg.node != 0) {
            if (cfg.node < 1 || cfg.node > cd.rank())
                throw Error(ErrorKind::InvalidArgument, "node " + std::to_string(cfg.node) + " out of range");
            return {cfg.node};
        }
        std::vector<int> all;
        for (int k = 1; k <= cd.rank(); ++k)
            all.push_back(k);
        return all;
    }

    void write_json(const std::string& path, const json& j) const
    {
        if (!path.empty())
            write_file(path, dump(j));
    }
};

// -- qchar -------------------------------------------------------------------

inline int cmd_qchar(const Context& ctx)
{
    const CartanDatum cd = ctx.datum();
    const auto nodes = ctx.nodes(cd);
    json all = json::array();
    ctx.out << std::left << std::setw(6) << "type" << std::setw(6) << "node" << std::setw(11) << "monomials"
            << std::setw(12) << "max height" << "dim" << "\n";
    for (int k : nodes) {
        const QChar chi = ctx.qchar(cd, k);
        ctx.out << std::setw(6) << cd.label() << std::setw(6) << k << std::setw(11) << chi.size() << std::setw(12)
                << chi.max_height() << chi.total_multiplicity() << "\n";
        all.push_back(to_json(chi));
    }
    ctx.write_json(ctx.cfg.out, nodes.size() == 1 ? all[0] : all);
    return kOk;
}

// -- extremal-check ----------------------------------------------------------

inline int cmd_extremal(const Context& ctx)
{
    const CartanDatum cd = ctx.datum();
    TheoremOptions opt;
    opt.fm_caps = ctx.cfg.fm_caps();
    opt.weyl_cap = ctx.cfg.cap_w;
    json reports = json::array();
    std::size_t violations = 0;
    ctx.out << std::left << std::setw(6) << "type" << std::setw(6) << "node" << std::setw(11) << "monomials"
            << std::setw(5) << "|W|" << std::setw(9) << "checks" << std::setw(14) << "s_i/w0 checks"
            << "violations\n";

    std::vector<BraidWord> only;
    if (!ctx.cfg.word.empty())
        only.push_back(parse_braid_word(ctx.cfg.word));

    for (int k : ctx.nodes(cd)) {
        const QChar chi = ctx.qchar(cd, k);
        TheoremSummary s;
        if (only.empty()) {
            s = verify_theorem_main(cd, k, opt, &chi);
        } else {
            s.type = cd.label();
            s.node = k;
            s.monomials = chi.size();
            auto r = extremal_check(cd, chi, only.front());
            s.checks = r.checks;
            s.violations = r.violations;
        }
        ctx.out << std::setw(6) << s.type << std::setw(6) << k << std::setw(11) << s.monomials << std::setw(5)
                << s.group_order << std::setw(9) << s.checks << std::setw(14) << s.anchor_case_checks
                << s.violations.size() << "\n";
        for (std::size_t t = 0; t < s.violations.size() && t < 10; ++t) {
            const auto& x = s.violations[t];
            ctx.out << "  witness v=" << x.v << " word=[";
            for (std::size_t q = 0; q < x.word.size(); ++q)
                ctx.out << (q ? "," : "") << x.word[q];
            ctx.out << "] image=" << x.image << " at " << x.position << " = " << x.value << "\n";
        }
        violations += s.violations.size();
        reports.push_back(to_json(s));
    }
    ctx.write_json(ctx.cfg.report.empty() ? ctx.cfg.out : ctx.cfg.report,
                   json{{"conventions", kConventions}, {"reports", reports}});
    return violations == 0 ? kOk : kViolation;
}

// -- braid-orbit -------------------------------------------------------------

inline int cmd_braid_orbit(const Context& ctx)
{
    const CartanDatum cd = ctx.datum();
    json all = json::array();
    int status = kOk;
    for (int k : ctx.nodes(cd)) {
        const auto verts = cone_vertices(cd, k, ctx.cfg.cap_w);
        std::map<LatticeVector, std::vector<int>> distinct;
        for (auto& cv : verts)
            distinct.emplace(cv.vertex.v, cv.element.word);
        const QChar chi = ctx.qchar(cd, k);
        std::size_t wrong = 0;
        for (auto& [v, word] : distinct)
            if (chi.multiplicity(v) != 1)
                ++wrong;
        ctx.out << cd.label() << " node " << k << ": " << distinct.size() << " extremal monomials, " << wrong
                << " without multiplicity 1\n";
        for (auto& [v, word] : distinct) {
            ctx.out << "  [";
            for (std::size_t q = 0; q < word.size(); ++q)
                ctx.out << (q ? "," : "") << word[q];
            ctx.out << "] " << v << "\n";
        }
        json vs = json::array();
        for (auto& [v, word] : distinct)
            vs.push_back(json{{"word", word}, {"v", lattice_to_json(v)}, {"mu", chi.multiplicity(v)}});
        all.push_back(json{{"type", cd.label()}, {"node", k}, {"vertices", vs}});
        if (wrong)
            status = kViolation;
    }
    ctx.write_json(ctx.cfg.out, json{{"conventions", kConventions}, {"orbits", all}});
    return status;
}

// -- quiver commands ---------------------------------------------------------

template <class F>
decltype(auto) with_field(const std::string& name, F&& f)
{
    if (name == "Q")
        return f(Rational{});
    if (name == "F2")
        return f(F2{});
    if (name == "F3")
        return f(F3{});
    if (name == "F5")
        return f(F5{});
    if (name == "F7")
        return f(F7{});
    throw Error(ErrorKind::InvalidArgument, "unsupported field " + name + " (use Q, F2, F3, F5, F7)");
}

inline std::string point_field(const Context& ctx, const json& j)
{
    if (j.contains("field"))
        return j["field"].get<std::string>();
    return ctx.cfg.field;
}

inline WeightVector theta_for(const Context& ctx, const CartanDatum& cd, const json* point)
{
    WeightVector theta;
    if (!ctx.cfg.theta.empty())
        theta = parse_weight(ctx.cfg.theta);
    else if (point && point->contains("theta"))
        theta = weight_from_json((*point)["theta"]);
    else
        theta = WeightVector::constant(cd.rank(), -1);
    if (theta.rank() != cd.rank())
        throw Error(ErrorKind::InvalidArgument, "theta needs " + std::to_string(cd.rank()) + " coefficients");
    return theta;
}

inline json read_point(const Context& ctx)
{
    if (ctx.cfg.point.empty())
        throw Error(ErrorKind::InvalidArgument, "a point file is required");
    return read_json_file(ctx.cfg.point);
}

inline int cmd_quiver_check(const Context& ctx)
{
    const json j = read_point(ctx);
    return with_field(point_field(ctx, j), [&](auto zero) -> int {
        using K = decltype(zero);
        const auto rep = quiver_from_json<K>(j);
        const CartanDatum& cd = rep.cartan();
        const auto bad = validate_relations(rep);
        ctx.out << cd.label() << " point over " << FieldTraits<K>::name() << ", dim V = " << rep.total_dim()
                << ", relations: " << (bad.empty() ? "ok" : std::to_string(bad.size()) + " violated") << "\n";
        for (auto& r : bad)
            ctx.out << "  " << r << "\n";
        if (!bad.empty())
            return kViolation;
        const WeightVector theta = theta_for(ctx, cd, &j);
        if constexpr (FieldTraits<K>::finite) {
            if (rep.total_dim() <= ctx.cfg.cap_stability_dim) {
                StabilityOptions so;
                so.dim_cap = ctx.cfg.cap_stability_dim;
                const bool st = stability_check(rep, theta, so);
                ctx.out << "theta-stable: " << (st ? "yes" : "no") << "\n";
                ctx.write_json(ctx.cfg.out, json{{"conventions", kConventions},
                                                 {"relations", "ok"},
                                                 {"theta", to_json(theta)},
                                                 {"stable", st}});
                return kOk;
            }
        }
        ctx.out << "theta-stable: undecided\n";
        ctx.write_json(ctx.cfg.out, json{{"conventions", kConventions},
                                         {"relations", "ok"},
                                         {"theta", to_json(theta)},
                                         {"stable", nullptr}});
        return kOk;
    });
}

inline int cmd_quiver_reflect(const Context& ctx)
{
    const json j = read_point(ctx);
    return with_field(point_field(ctx, j), [&](auto zero) -> int {
        using K = decltype(zero);
        const auto rep = quiver_from_json<K>(j);
        const CartanDatum& cd = rep.cartan();
        const WeightVector theta = theta_for(ctx, cd, &j);
        ReflectOptions opt;
        opt.trusted = ctx.cfg.trusted;
        opt.stability.dim_cap = ctx.cfg.cap_stability_dim;
        BraidWord word;
        if (!ctx.cfg.word.empty())
            word = parse_braid_word(ctx.cfg.word);
        else if (ctx.cfg.node != 0)
            word = {ctx.cfg.node};
        else
            throw Error(ErrorKind::InvalidArgument, "give --node or --word");
        const Reflected<K> r = chain_reflect(rep, theta, word, opt);
        ctx.out << "reflected dims " << r.rep.v() << ", theta =";
        for (auto& x : r.theta.coeffs)
            ctx.out << " " << format_rational(x);
        ctx.out << "\n";
        ctx.write_json(ctx.cfg.out, to_json(r.rep, &r.theta));
        return kOk;
    });
}

inline int cmd_quiver_search(const Context& ctx)
{
    const CartanDatum cd = ctx.datum();
    const LatticeVector v = parse_dimension_vector(ctx.cfg.v);
    const LatticeVector w = parse_dimension_vector(ctx.cfg.w);
    const WeightVector theta = theta_for(ctx, cd, nullptr);
    return with_field(ctx.cfg.field, [&](auto zero) -> int {
        using K = decltype(zero);
        if constexpr (!FieldTraits<K>::finite) {
            throw Error(ErrorKind::FieldNotFinite, "exhaustive search needs a finite field");
        } else {
            SearchCaps caps;
            caps.max_entries = ctx.cfg.cap_entries;
            caps.stability.dim_cap = ctx.cfg.cap_stability_dim;
            const auto res = exhaustive_search<K>(cd, v, w, {theta}, caps);
            std::size_t stable = 0;
            json pts = json::array();
            for (auto& p : res.points)
                if (p.stable[0]) {
                    ++stable;
                    pts.push_back(to_json(p.rep, &theta));
                }
            ctx.out << cd.label() << " over " << FieldTraits<K>::name() << ": " << res.enumerated
                    << " tuples, " << res.points.size() << " satisfy the relations, " << stable << " theta-stable\n";
            ctx.write_json(ctx.cfg.out, json{{"conventions", kConventions},
                                             {"enumerated", res.enumerated},
                                             {"points", res.points.size()},
                                             {"stable", pts}});
            return kOk;
        }
    });
}

// -- entry point ---------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    RunConfig cfg;
    CLI::App app{"q-character, braid and graded quiver toolkit", "qlab"};
    app.set_config("--config", "", "key = value file with option defaults");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--type", cfg.type, "Cartan type, e.g. A3, B2, G2");
    app.add_option("--node", cfg.node, "node k (1-based); all nodes when omitted");
    app.add_option("--theta", cfg.theta, "stability parameter, e.g. \"-1,-1\"");
    app.add_option("--word", cfg.word, "word i_1,...,i_t (product order)");
    app.add_option("--out", cfg.out, "JSON output file");
    app.add_option("--report", cfg.report, "JSON report file");
    app.add_option("--cache-dir", cfg.cache_dir, "q-character cache directory (QLAB_CACHE_DIR overrides)");
    app.add_option("--cap-monomials", cfg.cap_monomials)->check(CLI::PositiveNumber);
    app.add_option("--cap-height", cfg.cap_height)->check(CLI::PositiveNumber);
    app.add_option("--cap-w", cfg.cap_w, "Weyl group size cap")->check(CLI::PositiveNumber);
    app.add_option("--cap-entries", cfg.cap_entries, "free matrix entries for quiver-search")
        ->check(CLI::PositiveNumber);
    app.add_option("--cap-stability-dim", cfg.cap_stability_dim)->check(CLI::PositiveNumber);
    app.add_option("--field", cfg.field, "Q, F2, F3, F5 or F7");
    app.add_option("--v", cfg.v, "dimension vector n@(i,a),...");
    app.add_option("--w", cfg.w, "framing vector n@(i,a),...");
    app.add_flag("--trusted", cfg.trusted, "reflect without deciding stability");
    app.add_option("--shuffle-seed", cfg.shuffle_seed, "shuffle FM processing order inside height classes");

    auto* qchar = app.add_subcommand("qchar", "q-character of a fundamental module");
    auto* extremal = app.add_subcommand("extremal-check", "cone check over the Weyl group");
    auto* orbit = app.add_subcommand("braid-orbit", "extremal monomials S_w^{-1}(psi)");
    auto* qcheck = app.add_subcommand("quiver-check", "validate a quiver point");
    auto* qreflect = app.add_subcommand("quiver-reflect", "reflect a quiver point");
    auto* qsearch = app.add_subcommand("quiver-search", "enumerate points over a finite field");
    for (auto* sub : {qcheck, qreflect})
        sub->add_option("point", cfg.point, "point JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    }

    const Context ctx(cfg, out, err);
    try {
        if (*qchar)
            return cmd_qchar(ctx);
        if (*extremal)
            return cmd_extremal(ctx);
        if (*orbit)
            return cmd_braid_orbit(ctx);
        if (*qcheck)
            return cmd_quiver_check(ctx);
        if (*qreflect)
            return cmd_quiver_reflect(ctx);
        if (*qsearch)
            return cmd_quiver_search(ctx);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const nlohmann::json::exception& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

} // namespace qlab::cli
