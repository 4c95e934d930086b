// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "corpus.hpp"
#include "qlab/json_io.hpp"

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace qlab;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            if (pass)
                detail << "first failure: " << what << "; ";
            pass = false;
        }
    }
};

const std::vector<std::string> kTheoremCorpus = {"A1", "A2", "A3", "B2", "C2", "B3", "C3", "G2", "D4"};
const std::vector<std::string> kRank2 = {"A2", "B2", "C2", "G2"};

std::size_t orbit_size(const CartanDatum& cd, int k)
{
    ClassicalWeight start(static_cast<std::size_t>(cd.rank()), 0);
    start[k - 1] = 1;
    std::set<ClassicalWeight> seen{start};
    std::vector<ClassicalWeight> todo{start};
    while (!todo.empty()) {
        auto x = todo.back();
        todo.pop_back();
        for (int i = 1; i <= cd.rank(); ++i) {
            auto y = reflect_coeffs(cd, i, x);
            if (seen.insert(y).second)
                todo.push_back(y);
        }
    }
    return seen.size();
}

LatticeVector random_v(const CartanDatum& cd, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> node(1, cd.rank()), param(-5, 9), count(0, 6);
    LatticeVector v;
    const int n = count(rng);
    for (int k = 0; k < n; ++k)
        v.add({node(rng), param(rng)}, 1);
    return v;
}

Outcome c1_rank_one()
{
    Outcome o;
    const auto t0 = Clock::now();
    auto chi = fm_qchar(build_cartan("A1"), 1);
    const double s = since(t0);
    o.require(chi.size() == 2, "two monomials");
    if (chi.size() == 2) {
        o.require(chi.entries[0].v.empty() && chi.entries[0].mu == 1, "psi with mu 1");
        o.require(chi.entries[1].v == LatticeVector::unit({1, 1}) && chi.entries[1].mu == 1, "psi A_{1,1}^{-1}");
    }
    o.require(s < 0.1, "runtime under 0.1 s");
    o.detail << "monomials=" << chi.size() << " fm=" << std::fixed << std::setprecision(4) << s << "s";
    return o;
}

Outcome c2_rank_two()
{
    Outcome o;
    double worst = 0;
    for (auto& l : kRank2) {
        auto cd = build_cartan(l);
        for (int k = 1; k <= cd.rank(); ++k) {
            const auto t0 = Clock::now();
            auto chi = fm_qchar(cd, k);
            const bool inv = is_weyl_invariant(cd, classical_character(cd, chi));
            const double s = since(t0);
            worst = std::max(worst, s);
            const std::string tag = l + " node " + std::to_string(k);
            o.require(!chi.entries.empty() && chi.entries[0].v.empty() && chi.entries[0].mu == 1, tag + " mu(psi)=1");
            for (auto& e : chi.entries)
                o.require(e.v.nonnegative(), tag + " v >= 0");
            o.require(inv, tag + " Weyl invariant");
            o.require(s < 10, tag + " under 10 s");
            o.detail << tag << ": " << chi.size() << " monomials, dim " << chi.total_multiplicity() << "; ";
        }
    }
    o.detail << "slowest " << std::fixed << std::setprecision(3) << worst << "s";
    return o;
}

Outcome c3_theorem()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t checks = 0, violations = 0, anchor_checks = 0, anchor_violations = 0, alt = 0;
    for (auto& l : kTheoremCorpus) {
        auto cd = build_cartan(l);
        for (int k = 1; k <= cd.rank(); ++k) {
            auto s = verify_theorem_main(cd, k);
            checks += s.checks;
            violations += s.violations.size();
            anchor_checks += s.anchor_case_checks;
            anchor_violations += s.anchor_case_violations;
            alt += s.alternative_word_checks;
            o.require(s.group_order == WeylGroup(cd).size(), l + " full Weyl group");
        }
    }
    const double s = since(t0);
    o.require(violations == 0, "zero violations");
    o.require(anchor_violations == 0 && anchor_checks > 0, "s_i and w0 subset");
    o.require(s < 300, "under 5 min");
    o.detail << "checks=" << checks << " violations=" << violations << " | s_i/w0 subset: checks=" << anchor_checks
             << " violations=" << anchor_violations << " | second-word checks=" << alt << " | " << std::fixed
             << std::setprecision(2) << s << "s";
    return o;
}

Outcome c4_cone_vertices()
{
    Outcome o;
    std::size_t total = 0;
    for (auto& l : kTheoremCorpus) {
        auto cd = build_cartan(l);
        for (int k = 1; k <= cd.rank(); ++k) {
            auto chi = fm_qchar(cd, k);
            std::set<LatticeVector> distinct;
            for (auto& cv : cone_vertices(cd, k)) {
                distinct.insert(cv.vertex.v);
                o.require(chi.multiplicity(cv.vertex.v) == 1, l + " vertex multiplicity 1");
            }
            o.require(distinct.size() == orbit_size(cd, k), l + " node " + std::to_string(k) + " orbit size");
            total += distinct.size();
        }
    }
    o.detail << "distinct vertices=" << total;
    return o;
}

Outcome c5_braid()
{
    Outcome o;
    std::size_t subsystems = 0;
    for (auto l : {"A2", "B2", "C2", "G2", "A3", "B3", "C3", "D4"}) {
        auto cd = build_cartan(l);
        for (int i = 1; i <= cd.rank(); ++i)
            for (int j = i + 1; j <= cd.rank(); ++j) {
                o.require(braid_relation_check(cd, i, j, 1000, static_cast<std::uint64_t>(100 * i + j)),
                          std::string(l) + " braid relation");
                ++subsystems;
            }
    }
    std::mt19937_64 rng(7);
    std::size_t words = 0, vectors = 0;
    for (auto l : {"A1", "A2", "A3", "B2", "C2", "B3", "C3", "G2"}) {
        auto cd = build_cartan(l);
        WeylGroup g(cd);
        std::vector<LaurentMonomial> samples;
        for (int k = 0; k < 5; ++k)
            samples.push_back(random_monomial(cd, rng));
        for (std::size_t e = 0; e < g.size(); ++e) {
            auto all = g.reduced_words(e);
            words += all.size();
            for (auto& m : samples) {
                auto ref = apply_s_word(cd, all.front(), m);
                for (auto& w : all)
                    o.require(apply_s_word(cd, w, m) == ref, std::string(l) + " word independence");
            }
        }
        std::uniform_int_distribution<int> anchor(1, cd.rank());
        for (int rep = 0; rep < 1000; ++rep) {
            AMonomialVector x{anchor(rng), random_v(cd, rng)};
            const auto m = expand_to_y(cd, x);
            for (int i = 1; i <= cd.rank(); ++i) {
                o.require(apply_s_on_v(cd, i, x) == factor_to_a(cd, x.anchor, apply_s(cd, i, m)),
                          std::string(l) + " applySOnV");
                o.require(classical_weight(cd, apply_s(cd, i, m)) == reflect_coeffs(cd, i, classical_weight(cd, m)),
                          std::string(l) + " weight intertwining");
            }
            ++vectors;
        }
    }
    o.detail << "rank-2 subsystems=" << subsystems << " reduced words=" << words << " random vectors=" << vectors;
    return o;
}

Outcome c6_negative_control()
{
    Outcome o;
    auto cd = build_cartan("A1");
    QChar fake = fm_qchar(cd, 1);
    fake.entries.push_back(QCharEntry{LatticeVector::unit({1, 3}), 1});
    auto r = extremal_check(cd, fake, BraidWord{1});
    bool flagged = false;
    for (auto& x : r.violations)
        flagged |= x.v == LatticeVector::unit({1, 3});
    o.require(flagged, "A1 e_(1,3) flagged at s_1");
    // an A2 monomial outside the cones is caught by some w
    auto a2 = build_cartan("A2");
    QChar fake2 = fm_qchar(a2, 1);
    fake2.entries.push_back(QCharEntry{LatticeVector{{{2, 2}, 1}}, 1});
    std::size_t hits = 0;
    WeylGroup g(a2);
    for (auto& w : g.elements())
        hits += extremal_check(a2, fake2, w).violations.size();
    o.require(hits > 0, "A2 injected e_(2,2) flagged");
    o.detail << "A1 violations at s_1=" << r.violations.size() << " A2 flags=" << hits;
    return o;
}

struct QuiverRun {
    Outcome c7, c8;
};

QuiverRun c7_c8_quiver()
{
    QuiverRun q;
    const auto t0 = Clock::now();
    std::ostringstream d7, d8;
    for (auto l : {"A1", "A2", "B2"}) {
        const auto tl = Clock::now();
        auto cd = build_cartan(l);
        const bool simply_laced = cd.simply_laced();
        const auto theta = WeightVector::constant(cd.rank(), Rational(-1));
        WeylGroup g(cd);
        const auto words = g.reduced_words(g.size() - 1);
        const auto corpus = testing::quiver_corpus(cd);
        std::size_t points = 0, stable = 0, reflections = 0, chains = 0;
        for (auto& c : corpus) {
            auto res = exhaustive_search<F2>(cd, c.v, c.w, {theta});
            points += res.points.size();
            for (auto& p : res.points) {
                q.c7.require(is_stable_plain(p.rep) == p.stable[0], std::string(l) + " plain stability agrees");
                if (!p.stable[0])
                    continue;
                ++stable;
                if (simply_laced)
                    q.c7.require(p.rep.all_loops_zero(), std::string(l) + " loops vanish");
                for (int i = 1; i <= cd.rank(); ++i) {
                    try {
                        for (int a : detail::reflection_params(p.rep, i)) {
                            auto phi = phi_map(p.rep, i, a);
                            q.c7.require(rank(phi) == phi.rows(), std::string(l) + " Phi surjective");
                        }
                        ReflectOptions loose;
                        loose.check_postconditions = false;
                        auto r = reflect(p.rep, i, theta, loose);
                        q.c7.require(validate_relations(r.rep).empty(), std::string(l) + " reflected relations");
                        q.c7.require(r.rep.v() == apply_s_on_v(cd, i, c.v, c.w), std::string(l) + " reflected dims");
                        q.c7.require(stability_check(r.rep, r.theta), std::string(l) + " reflected stability");
                        ++reflections;
                    } catch (const Error& e) {
                        q.c7.require(false, std::string(l) + " reflect threw " + e.what());
                    }
                }
                for (auto& w : words) {
                    try {
                        auto r = chain_reflect(p.rep, theta, w);
                        q.c8.require(r.rep.v() == apply_s_word_on_v(cd, w, c.v, c.w), std::string(l) + " chain dims");
                        q.c8.require(r.rep.v().nonnegative(), std::string(l) + " chain dims >= 0");
                        ++chains;
                    } catch (const Error& e) {
                        q.c8.require(false, std::string(l) + " chain threw " + e.what());
                    }
                }
            }
        }
        q.c7.require(stable > 0, std::string(l) + " stable locus nonempty");
        d7 << l << ": cases=" << corpus.size() << " points=" << points << " stable=" << stable
           << " reflections=" << reflections << " (" << std::fixed << std::setprecision(1) << since(tl) << "s); ";
        if (std::string(l) != "A1")
            d8 << l << ": words=" << words.size() << " chains=" << chains << "; ";
    }
    const double s = since(t0);
    q.c7.require(s < 600, "corpus under 10 min");
    q.c7.detail << d7.str() << "total " << std::fixed << std::setprecision(1) << s << "s";
    q.c8.detail << d8.str();
    return q;
}

Outcome c9_determinism()
{
    Outcome o;
    auto render = [] {
        std::string s;
        for (auto& l : kTheoremCorpus) {
            auto cd = build_cartan(l);
            for (int k = 1; k <= cd.rank(); ++k) {
                s += dump(to_json(fm_qchar(cd, k)));
                s += dump(to_json(verify_theorem_main(cd, k)));
            }
        }
        auto a2 = build_cartan("A2");
        auto theta = WeightVector::constant(2, Rational(-1));
        auto res = exhaustive_search<F2>(a2, LatticeVector{{{1, 1}, 1}, {{2, 2}, 1}}, LatticeVector::unit({1, 0}),
                                         {theta});
        for (auto& p : res.points)
            if (p.stable[0]) {
                auto r = chain_reflect(p.rep, theta, BraidWord{1, 2, 1});
                s += dump(to_json(r.rep, &r.theta));
            }
        return s;
    };
    const std::string first = render(), second = render();
    o.require(first == second, "byte-identical repeat");
    std::size_t shuffled = 0;
    for (auto& l : kTheoremCorpus) {
        auto cd = build_cartan(l);
        for (int k = 1; k <= cd.rank(); ++k) {
            const std::string base = dump(to_json(fm_qchar(cd, k)));
            for (std::uint64_t seed : {1u, 17u, 12345u}) {
                o.require(dump(to_json(fm_qchar(cd, k, {}, seed))) == base, l + " shuffle invariance");
                ++shuffled;
            }
        }
    }
    o.detail << "artifact bytes=" << first.size() << " shuffled runs=" << shuffled;
    return o;
}

} // namespace

int main()
{
    struct Entry {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    bool all = true;
    auto report = [&](int id, const char* name, Outcome& o, double s) {
        all &= o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << " [" << std::fixed
                  << std::setprecision(2) << s << "s] " << o.detail.str() << std::endl;
    };
    const std::vector<Entry> first = {
        {1, "rank-1 exactness", c1_rank_one},
        {2, "rank-2 corpus", c2_rank_two},
        {3, "extremal theorem", c3_theorem},
        {4, "cone vertices", c4_cone_vertices},
        {5, "braid coherence", c5_braid},
        {6, "negative control", c6_negative_control},
    };
    for (auto& e : first) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = e.run();
        } catch (const std::exception& ex) {
            o.require(false, ex.what());
        }
        report(e.id, e.name, o, since(t0));
    }
    {
        const auto t0 = Clock::now();
        QuiverRun q;
        try {
            q = c7_c8_quiver();
        } catch (const std::exception& ex) {
            q.c7.require(false, ex.what());
            q.c8.require(false, ex.what());
        }
        const double s = since(t0);
        report(7, "quiver reflection", q.c7, s);
        report(8, "chain property", q.c8, s);
    }
    {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c9_determinism();
        } catch (const std::exception& ex) {
            o.require(false, ex.what());
        }
        report(9, "determinism", o, since(t0));
    }
    return all ? 0 : 1;
}
