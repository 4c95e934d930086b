#pragma once

#include "qlab/braid.hpp"
#include "qlab/cartan.hpp"
#include "qlab/lattice.hpp"
#include "qlab/lweights.hpp"
#include "qlab/qchar_fm.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qlab {

/// psi * prod A^{-v} lies in the cone psi * prod A^{-1} iff v >= 0.
inline bool cone_membership(const AMonomialVector& x)
{
    return x.v.nonnegative();
}

/// A q-character entry pushed out of the cone by S_w, with the first negative
/// lattice position as witness.
struct ExtremalViolation {
    LatticeVector v;
    BraidWord word;
    LatticeVector image;
    Vertex position;
    std::int64_t value = 0;
};

struct ExtremalReport {
    BraidWord word;
    std::size_t checks = 0;
    std::vector<ExtremalViolation> violations;
};

/// Applies S_w (via the induced action on v, last letter first) to every entry
/// of the q-character and records the entries that leave the cone.
inline ExtremalReport extremal_check(const CartanDatum& cd, const QChar& chi, const BraidWord& word)
{
    check_word(cd, word);
    ExtremalReport rep{word, 0, {}};
    const LatticeVector w = LatticeVector::unit({chi.anchor, 0});
    for (auto& entry : chi.entries) {
        LatticeVector image = apply_s_word_on_v(cd, word, entry.v, w);
        ++rep.checks;
        if (cone_membership(AMonomialVector{chi.anchor, image}))
            continue;
        for (auto& e : image)
            if (e.value < 0) {
                rep.violations.push_back(ExtremalViolation{entry.v, word, image, e.at, e.value});
                break;
            }
    }
    return rep;
}

inline ExtremalReport extremal_check(const CartanDatum& cd, const QChar& chi, const WeylElement& w)
{
    return extremal_check(cd, chi, w.word);
}

struct TheoremSummary {
    std::string type;
    int node = 0;
    std::size_t monomials = 0;
    std::size_t group_order = 0;
    std::size_t checks = 0;
    /// Checks made with a second reduced word (groups of order <= 48).
    std::size_t alternative_word_checks = 0;
    /// Violations restricted to w = s_i and w = w_0.
    std::size_t anchor_case_violations = 0;
    std::size_t anchor_case_checks = 0;
    std::vector<ExtremalViolation> violations;
    double seconds = 0;

    bool ok() const { return violations.empty(); }
};

struct TheoremOptions {
    FmCaps fm_caps{};
    std::size_t weyl_cap = 2000;
    std::size_t alternative_word_limit = 48;
};

/// Computes the q-character of L(Y_{k,0}) and runs extremal_check for every
/// element of W. Groups of order <= 48 are re-checked with a second reduced
/// word wherever one exists, so braid well-definedness is never assumed.
inline TheoremSummary verify_theorem_main(const CartanDatum& cd, int k, const TheoremOptions& opt = {},
                                          const QChar* precomputed = nullptr)
{
    const auto t0 = std::chrono::steady_clock::now();
    WeylGroup group(cd, opt.weyl_cap);
    std::optional<QChar> computed;
    if (!precomputed)
        computed = fm_qchar(cd, k, opt.fm_caps);
    const QChar& chi = precomputed ? *precomputed : *computed;

    TheoremSummary s;
    s.type = cd.label();
    s.node = k;
    s.monomials = chi.size();
    s.group_order = group.size();

    auto record = [&](const ExtremalReport& r, bool anchor_case) {
        s.checks += r.checks;
        if (anchor_case) {
            s.anchor_case_checks += r.checks;
            s.anchor_case_violations += r.violations.size();
        }
        s.violations.insert(s.violations.end(), r.violations.begin(), r.violations.end());
    };

    for (std::size_t idx = 0; idx < group.size(); ++idx) {
        const WeylElement& w = group[idx];
        const bool anchor_case = w.length() == 1 || idx + 1 == group.size();
        record(extremal_check(cd, chi, w), anchor_case);
        if (group.size() <= opt.alternative_word_limit) {
            auto alt = group.alternative_reduced_word(idx);
            if (!alt.empty()) {
                auto r = extremal_check(cd, chi, alt);
                s.alternative_word_checks += r.checks;
                record(r, anchor_case);
            }
        }
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

struct ConeVertex {
    WeylElement element;
    AMonomialVector vertex;
};

/// S_w^{-1}(psi) for every w in W, factored as psi * prod A^{-v}.
inline std::vector<ConeVertex> cone_vertices(const CartanDatum& cd, int k, std::size_t weyl_cap = 2000)
{
    WeylGroup group(cd, weyl_cap);
    const LaurentMonomial psi = LaurentMonomial::y(k, 0);
    std::vector<ConeVertex> out;
    out.reserve(group.size());
    for (auto& w : group.elements())
        out.push_back(ConeVertex{w, factor_to_a(cd, k, apply_s_inverse_word(cd, w.word, psi))});
    return out;
}

} // namespace qlab
