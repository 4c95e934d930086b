#pragma once

#include "qlab/braid.hpp"
#include "qlab/cartan.hpp"
#include "qlab/errors.hpp"
#include "qlab/field.hpp"
#include "qlab/lattice.hpp"
#include "qlab/matrix.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qlab {

/*
  Graded (co)framed quiver representations.

  Vertex set I x Z. For every i, a and every j with j == i or j adjacent to i
  there is an arrow

      V_i^a --> V_j^{a - d_ij}

  (the loop at i lowers the parameter by d_ii; arrows between adjacent nodes
  raise it by |d_ij|). Arrows between non-adjacent nodes are not modelled.
  Framing and coframing maps:

      A_i^a : W_i^a --> V_i^{a + d_i}        B_i^a : V_i^{a - d_i} --> W_i^a

  Only slots whose source and target are both nonzero carry a matrix; every
  other map is the zero map of the appropriate shape.
*/

enum class SlotKind { Arrow = 0, A = 1, B = 2 };

inline const char* to_string(SlotKind k)
{
    switch (k) {
    case SlotKind::Arrow: return "arrow";
    case SlotKind::A: return "A";
    case SlotKind::B: return "B";
    }
    return "?";
}

/// An arrow is keyed by its source vertex and target node; A_i^a and B_i^a by
/// (i, a) with `target` equal to i.
struct SlotKey {
    SlotKind kind = SlotKind::Arrow;
    Vertex source;
    int target = 0;

    friend auto operator<=>(const SlotKey&, const SlotKey&) = default;
    friend bool operator==(const SlotKey&, const SlotKey&) = default;
};

struct RelationViolation {
    std::string relation;
    int i = 0;
    int j = 0;
    int a = 0;
};

inline std::ostream& operator<<(std::ostream& os, const RelationViolation& r)
{
    os << r.relation << " at i=" << r.i;
    if (r.j)
        os << " j=" << r.j;
    return os << " a=" << r.a;
}

template <class K>
class GradedQuiverRep {
public:
    GradedQuiverRep() = default;

    GradedQuiverRep(CartanDatum cd, LatticeVector v, LatticeVector w)
        : cd_(std::move(cd)), v_(std::move(v)), w_(std::move(w))
    {
        if (!v_.nonnegative() || !w_.nonnegative())
            throw Error(ErrorKind::DimensionMismatch, "dimension vectors must be nonnegative");
        for (auto& e : v_)
            check_node(e.at.node);
        for (auto& e : w_)
            check_node(e.at.node);
        for (auto& s : enumerate_slots())
            maps_.emplace(s, Matrix<K>(target_dim(s), source_dim(s)));
    }

    const CartanDatum& cartan() const noexcept { return cd_; }
    const LatticeVector& v() const noexcept { return v_; }
    const LatticeVector& w() const noexcept { return w_; }

    std::size_t dim_v(Vertex x) const { return static_cast<std::size_t>(v_[x]); }
    std::size_t dim_w(Vertex x) const { return static_cast<std::size_t>(w_[x]); }
    std::size_t total_dim() const { return static_cast<std::size_t>(v_.total()); }

    /// Target vertex of the arrow out of (i, a) towards node j.
    Vertex arrow_target(int i, int a, int j) const { return Vertex{j, a - cd_.d(i, j)}; }

    std::size_t source_dim(const SlotKey& s) const
    {
        switch (s.kind) {
        case SlotKind::Arrow: return dim_v(s.source);
        case SlotKind::A: return dim_w(s.source);
        case SlotKind::B: return dim_v({s.source.node, s.source.param - cd_.di(s.source.node)});
        }
        return 0;
    }

    std::size_t target_dim(const SlotKey& s) const
    {
        switch (s.kind) {
        case SlotKind::Arrow: return dim_v(arrow_target(s.source.node, s.source.param, s.target));
        case SlotKind::A: return dim_v({s.source.node, s.source.param + cd_.di(s.source.node)});
        case SlotKind::B: return dim_w(s.source);
        }
        return 0;
    }

    /// Slots with nonzero source and target, in canonical (kind, source, target) order.
    std::vector<SlotKey> slots() const
    {
        std::vector<SlotKey> out;
        for (auto& [k, _] : maps_)
            out.push_back(k);
        return out;
    }

    const Matrix<K>& slot(const SlotKey& s) const { return maps_.at(s); }

    Matrix<K> get(const SlotKey& s) const
    {
        auto it = maps_.find(s);
        if (it != maps_.end())
            return it->second;
        return Matrix<K>(target_dim(s), source_dim(s));
    }

    void set(const SlotKey& s, Matrix<K> m)
    {
        if (s.kind == SlotKind::Arrow && s.source.node != s.target && !cd_.adjacent(s.source.node, s.target))
            throw Error(ErrorKind::ShapeMismatch, "no arrow between non-adjacent nodes");
        if (m.rows() != target_dim(s) || m.cols() != source_dim(s)) {
            std::ostringstream msg;
            msg << to_string(s.kind) << " from " << s.source << " expects " << target_dim(s) << "x"
                << source_dim(s) << ", got " << m.shape();
            throw Error(ErrorKind::ShapeMismatch, msg.str());
        }
        auto it = maps_.find(s);
        if (it == maps_.end()) {
            if (!m.is_zero())
                throw Error(ErrorKind::ShapeMismatch, "nonzero map between zero spaces");
            return;
        }
        it->second = std::move(m);
    }

    /// V_i^a -> V_j^{a - d_ij}.
    Matrix<K> arrow(int i, int a, int j) const { return get({SlotKind::Arrow, {i, a}, j}); }
    void set_arrow(int i, int a, int j, Matrix<K> m) { set({SlotKind::Arrow, {i, a}, j}, std::move(m)); }

    /// V_i^a -> V_i^{a - d_ii}.
    Matrix<K> loop(int i, int a) const { return arrow(i, a, i); }

    /// n-fold loop composite V_i^a -> V_i^{a - n d_ii}.
    Matrix<K> loop_power(int i, int a, int n) const
    {
        Matrix<K> m = Matrix<K>::identity(dim_v({i, a}));
        for (int s = 0; s < n; ++s)
            m = loop(i, a - s * cd_.d(i, i)) * m;
        return m;
    }

    /// W_i^a -> V_i^{a + d_i}.
    Matrix<K> A(int i, int a) const { return get({SlotKind::A, {i, a}, i}); }
    void set_A(int i, int a, Matrix<K> m) { set({SlotKind::A, {i, a}, i}, std::move(m)); }

    /// V_i^{a - d_i} -> W_i^a.
    Matrix<K> B(int i, int a) const { return get({SlotKind::B, {i, a}, i}); }
    void set_B(int i, int a, Matrix<K> m) { set({SlotKind::B, {i, a}, i}, std::move(m)); }

    bool all_b_zero() const
    {
        for (auto& [k, m] : maps_)
            if (k.kind == SlotKind::B && !m.is_zero())
                return false;
        return true;
    }

    bool all_loops_zero() const
    {
        for (auto& [k, m] : maps_)
            if (k.kind == SlotKind::Arrow && k.target == k.source.node && !m.is_zero())
                return false;
        return true;
    }

    /// Outgoing V-to-V arrows of vertex x as (target vertex, matrix).
    std::vector<std::pair<Vertex, const Matrix<K>*>> out_arrows(Vertex x) const
    {
        std::vector<std::pair<Vertex, const Matrix<K>*>> out;
        auto it = maps_.lower_bound(SlotKey{SlotKind::Arrow, x, 0});
        for (; it != maps_.end() && it->first.kind == SlotKind::Arrow && it->first.source == x; ++it)
            out.emplace_back(arrow_target(x.node, x.param, it->first.target), &it->second);
        return out;
    }

    friend bool operator==(const GradedQuiverRep& a, const GradedQuiverRep& b)
    {
        return a.cd_ == b.cd_ && a.v_ == b.v_ && a.w_ == b.w_ && a.maps_ == b.maps_;
    }

private:
    void check_node(int i) const
    {
        if (i < 1 || i > cd_.rank())
            throw Error(ErrorKind::DimensionMismatch, "node " + std::to_string(i) + " not in " + cd_.label());
    }

    std::vector<SlotKey> enumerate_slots() const
    {
        std::vector<SlotKey> out;
        for (auto& e : v_) {
            const int i = e.at.node;
            for (int j = 1; j <= cd_.rank(); ++j) {
                if (j != i && !cd_.adjacent(i, j))
                    continue;
                if (dim_v(arrow_target(i, e.at.param, j)) > 0)
                    out.push_back({SlotKind::Arrow, e.at, j});
            }
        }
        for (auto& e : w_) {
            const int i = e.at.node;
            if (dim_v({i, e.at.param + cd_.di(i)}) > 0)
                out.push_back({SlotKind::A, e.at, i});
            if (dim_v({i, e.at.param - cd_.di(i)}) > 0)
                out.push_back({SlotKind::B, e.at, i});
        }
        return out;
    }

    CartanDatum cd_;
    LatticeVector v_;
    LatticeVector w_;
    std::map<SlotKey, Matrix<K>> maps_;
};

// ---------------------------------------------------------------------------
// Relations.

namespace detail {

/// Sum over j != i, l = 0..-c_ij-1 of loop^{-c_ij-1-l} (i<-j)(j<-i) loop^l,
/// as a map V_i^a -> V_i^{a + d_ii}.
template <class K>
Matrix<K> preprojective_sum(const GradedQuiverRep<K>& rep, int i, int a)
{
    const CartanDatum& cd = rep.cartan();
    const int dii = cd.d(i, i);
    Matrix<K> sum(rep.dim_v({i, a + dii}), rep.dim_v({i, a}));
    for (int j = 1; j <= cd.rank(); ++j) {
        if (!cd.adjacent(i, j))
            continue;
        const int dij = cd.d(i, j);
        for (int l = 0; l <= -cd.c(i, j) - 1; ++l) {
            const int base = a - l * dii;
            sum += rep.loop_power(i, base - 2 * dij, -cd.c(i, j) - 1 - l) * rep.arrow(j, base - dij, i) *
                   rep.arrow(i, base, j) * rep.loop_power(i, a, l);
        }
    }
    return sum;
}

template <class K>
std::set<int> node_params(const LatticeVector& v, int node)
{
    std::set<int> s;
    for (auto& e : v)
        if (e.at.node == node)
            s.insert(e.at.param);
    return s;
}

} // namespace detail

/// Checks the defining relations of a point of P_{v,w}:
///   E1bis  preprojective sum + A_i^{a+d_i} B_i^{a+d_i} = 0   (V_i^a -> V_i^{a+d_ii})
///   E2     loop_j^{-c_ji} (j<-i) + (j<-i) loop_i^{-c_ij} = 0   (V_i^a -> V_j^{a+d_ij})
///   E4     loop_i A_i^a = 0
///   E5     B_i^a loop_i = 0
template <class K>
std::vector<RelationViolation> validate_relations(const GradedQuiverRep<K>& rep, bool include_framing_term = true)
{
    const CartanDatum& cd = rep.cartan();
    std::vector<RelationViolation> out;
    for (int i = 1; i <= cd.rank(); ++i) {
        const int di = cd.di(i);
        const int dii = cd.d(i, i);
        for (int a : detail::node_params<K>(rep.v(), i)) {
            if (rep.dim_v({i, a + dii}) > 0) {
                Matrix<K> e1 = detail::preprojective_sum(rep, i, a);
                if (include_framing_term)
                    e1 += rep.A(i, a + di) * rep.B(i, a + di);
                if (!e1.is_zero())
                    out.push_back({include_framing_term ? "E1bis" : "E1", i, 0, a});
            }
            for (int j = 1; j <= cd.rank(); ++j) {
                if (!cd.adjacent(i, j))
                    continue;
                const int dij = cd.d(i, j);
                if (rep.dim_v({j, a + dij}) == 0)
                    continue;
                Matrix<K> e2 = rep.loop_power(j, a - dij, -cd.c(j, i)) * rep.arrow(i, a, j) +
                               rep.arrow(i, a + 2 * dij, j) * rep.loop_power(i, a, -cd.c(i, j));
                if (!e2.is_zero())
                    out.push_back({"E2", i, j, a});
            }
        }
        for (int a : detail::node_params<K>(rep.w(), i)) {
            if (!(rep.loop(i, a + di) * rep.A(i, a)).is_zero())
                out.push_back({"E4", i, 0, a});
            if (!(rep.B(i, a) * rep.loop(i, a + di)).is_zero())
                out.push_back({"E5", i, 0, a});
        }
    }
    return out;
}

/// The framing vector xi = A_k^0(1) in V_k^{d_k} of a point with w = e_{(k,0)}.
template <class K>
Matrix<K> framing_vector(const GradedQuiverRep<K>& rep, int k)
{
    if (rep.w() != LatticeVector::unit({k, 0}))
        throw Error(ErrorKind::DimensionMismatch, "framing vector needs w = e_(k,0)");
    return rep.A(k, 0);
}

/// Relations cutting out N: the preprojective relation without the AB term,
/// E2, and loop_k(xi) = 0 for the framing vector xi in V_k^{d_k}.
template <class K>
std::vector<RelationViolation> validate_n(const GradedQuiverRep<K>& rep, int k, const Matrix<K>& xi)
{
    if (!rep.all_b_zero())
        throw Error(ErrorKind::InvalidArgument, "validate_n expects B = 0");
    const int dk = rep.cartan().di(k);
    if (xi.rows() != rep.dim_v({k, dk}) || xi.cols() != 1)
        throw Error(ErrorKind::ShapeMismatch, "framing vector must be a column in V_k^{d_k}");
    std::vector<RelationViolation> out;
    for (auto& r : validate_relations(rep, false))
        if (r.relation != "E4" && r.relation != "E5")
            out.push_back(r);
    if (!(rep.loop(k, dk) * xi).is_zero())
        out.push_back({"framing", k, 0, dk});
    return out;
}

// ---------------------------------------------------------------------------
// Stability.

/// (theta, u) = sum_i d_i theta_i u_i with u_i = sum_a u_i^a.
inline Rational stability_pairing(const CartanDatum& cd, const WeightVector& theta, const LatticeVector& u)
{
    Rational s = 0;
    for (auto& e : u)
        s += Rational(cd.di(e.at.node)) * theta[e.at.node] * Rational(e.value);
    return s;
}

/// A graded subspace of V: canonical basis per vertex (nonzero pieces only).
template <class K>
struct Subrep {
    std::map<Vertex, Subspace<K>> spaces;
    bool contains_image_a = false;
    bool inside_kernel_b = false;

    LatticeVector dims() const
    {
        LatticeVector u;
        for (auto& [x, s] : spaces)
            u.add(x, static_cast<std::int64_t>(s.dim()));
        return u;
    }

    std::size_t dim_at(Vertex x) const
    {
        auto it = spaces.find(x);
        return it == spaces.end() ? 0 : it->second.dim();
    }

    std::vector<std::int64_t> key() const
    {
        std::vector<std::int64_t> out;
        for (auto& [x, s] : spaces) {
            out.push_back(x.node);
            out.push_back(x.param);
            out.push_back(static_cast<std::int64_t>(s.dim()));
            for (std::size_t r = 0; r < s.basis.rows(); ++r)
                for (std::size_t c = 0; c < s.basis.cols(); ++c)
                    FieldTraits<K>::encode(s.basis(r, c), out);
        }
        return out;
    }
};

namespace detail {

template <class K>
Matrix<K> hstack(const Matrix<K>& x, const Matrix<K>& y)
{
    Matrix<K> m(x.rows(), x.cols() + y.cols());
    m.set_block(0, 0, x);
    m.set_block(0, x.cols(), y);
    return m;
}

template <class K>
Subspace<K> empty_subspace(std::size_t ambient)
{
    return Subspace<K>{Matrix<K>(ambient, 0), {}};
}

/// Smallest subrepresentation containing `start` and the columns `gens` placed at vertex x.
template <class K>
Subrep<K> close_under_arrows(const GradedQuiverRep<K>& rep, Subrep<K> start,
                             const std::vector<std::pair<Vertex, Matrix<K>>>& gens)
{
    std::deque<Vertex> work;
    auto grow = [&](Vertex x, const Matrix<K>& cols) {
        auto it = start.spaces.find(x);
        const std::size_t before = it == start.spaces.end() ? 0 : it->second.dim();
        Subspace<K> cur = it == start.spaces.end() ? empty_subspace<K>(rep.dim_v(x)) : it->second;
        Subspace<K> next = column_span(hstack(cur.basis, cols));
        if (next.dim() > before) {
            start.spaces[x] = std::move(next);
            work.push_back(x);
        }
    };
    for (auto& [x, cols] : gens)
        grow(x, cols);
    while (!work.empty()) {
        Vertex x = work.front();
        work.pop_front();
        const Matrix<K> basis = start.spaces.at(x).basis;
        for (auto& [y, m] : rep.out_arrows(x))
            grow(y, *m * basis);
    }
    return start;
}

template <class K>
void classify(const GradedQuiverRep<K>& rep, Subrep<K>& u)
{
    const CartanDatum& cd = rep.cartan();
    u.inside_kernel_b = true;
    for (auto& [x, s] : u.spaces)
        if (!(rep.B(x.node, x.param + cd.di(x.node)) * s.basis).is_zero())
            u.inside_kernel_b = false;
    u.contains_image_a = true;
    for (auto& e : rep.w()) {
        const Vertex x{e.at.node, e.at.param + cd.di(e.at.node)};
        Matrix<K> img = rep.A(e.at.node, e.at.param);
        if (img.rows() == 0)
            continue;
        auto it = u.spaces.find(x);
        if (img.is_zero())
            continue;
        if (it == u.spaces.end() || !it->second.contains_columns(img))
            u.contains_image_a = false;
    }
}

/// Every nonzero vector of `space` up to scalars (first nonzero coordinate 1).
template <class K>
std::vector<Matrix<K>> projective_points(const Subspace<K>& space)
{
    std::vector<Matrix<K>> out;
    const std::size_t d = space.dim();
    const auto elems = FieldTraits<K>::elements();
    const std::size_t q = elems.size();
    std::vector<std::size_t> digits(d, 0);
    for (;;) {
        std::size_t k = 0;
        while (k < d && digits[k] == q - 1) {
            digits[k] = 0;
            ++k;
        }
        if (k == d)
            break;
        ++digits[k];
        // leading (last) nonzero digit must be 1
        std::size_t lead = d;
        for (std::size_t t = d; t-- > 0;)
            if (digits[t] != 0) {
                lead = t;
                break;
            }
        if (lead == d || !(elems[digits[lead]] == K(1)))
            continue;
        Matrix<K> coeffs(d, 1);
        for (std::size_t t = 0; t < d; ++t)
            coeffs(t, 0) = elems[digits[t]];
        out.push_back(space.basis * coeffs);
    }
    return out;
}

} // namespace detail

template <class K>
Subrep<K> subrep_closure(const GradedQuiverRep<K>& rep, const std::vector<std::pair<Vertex, Matrix<K>>>& gens)
{
    Subrep<K> u = detail::close_under_arrows(rep, Subrep<K>{}, gens);
    detail::classify(rep, u);
    return u;
}

/// Smallest subrepresentation containing the images of all A maps.
template <class K>
Subrep<K> image_a_closure(const GradedQuiverRep<K>& rep)
{
    const CartanDatum& cd = rep.cartan();
    std::vector<std::pair<Vertex, Matrix<K>>> gens;
    for (auto& e : rep.w()) {
        Vertex x{e.at.node, e.at.param + cd.di(e.at.node)};
        if (rep.dim_v(x) > 0)
            gens.emplace_back(x, rep.A(e.at.node, e.at.param));
    }
    return subrep_closure(rep, gens);
}

/// Stability in the plain sense: no proper subrepresentation contains Im A.
template <class K>
bool is_stable_plain(const GradedQuiverRep<K>& rep)
{
    return image_a_closure(rep).dims() == rep.v();
}

struct StabilityOptions {
    std::size_t dim_cap = 14;
    std::size_t lattice_cap = 200000;
};

namespace detail {

/// Breadth-first enumeration of subrepresentations reachable from `root` by
/// adding cyclic subrepresentations of vectors drawn from `pool`. Stops early
/// when `visit` returns false.
template <class K, class Visit>
bool walk_subreps(const GradedQuiverRep<K>& rep, Subrep<K> root, const std::map<Vertex, Subspace<K>>& pool,
                  bool require_inside_kernel_b, const StabilityOptions& opt, Visit&& visit)
{
    std::map<Vertex, std::vector<Matrix<K>>> points;
    for (auto& [x, s] : pool)
        points[x] = projective_points(s);

    std::set<std::vector<std::int64_t>> seen;
    std::deque<Subrep<K>> queue;
    classify(rep, root);
    seen.insert(root.key());
    queue.push_back(std::move(root));
    while (!queue.empty()) {
        Subrep<K> u = std::move(queue.front());
        queue.pop_front();
        if (!visit(u))
            return false;
        for (auto& [x, vecs] : points) {
            auto here = u.spaces.find(x);
            for (auto& vec : vecs) {
                if (here != u.spaces.end() && here->second.contains_columns(vec))
                    continue;
                Subrep<K> next = close_under_arrows(rep, u, {{x, vec}});
                classify(rep, next);
                if (require_inside_kernel_b && !next.inside_kernel_b)
                    continue;
                if (seen.insert(next.key()).second) {
                    if (seen.size() > opt.lattice_cap)
                        throw Error(ErrorKind::CapExceeded, "submodule lattice exceeds " +
                                                                std::to_string(opt.lattice_cap));
                    queue.push_back(std::move(next));
                }
            }
        }
    }
    return true;
}

template <class K>
void require_decidable(const GradedQuiverRep<K>& rep, const WeightVector& theta, const StabilityOptions& opt)
{
    if constexpr (!FieldTraits<K>::finite)
        throw Error(ErrorKind::FieldNotFinite, "stability is only decided over finite fields");
    if (rep.total_dim() > opt.dim_cap)
        throw Error(ErrorKind::CapExceeded, "total dimension " + std::to_string(rep.total_dim()) +
                                                " exceeds stability cap " + std::to_string(opt.dim_cap));
    if (!is_generic(rep.cartan(), theta))
        throw Error(ErrorKind::NonGenericTheta, "theta lies on a root hyperplane");
}

} // namespace detail

/// Every subrepresentation (graded, closed under all arrows) of a point over a
/// finite field.
template <class K>
std::vector<Subrep<K>> enumerate_subreps(const GradedQuiverRep<K>& rep, const StabilityOptions& opt = {})
{
    if constexpr (!FieldTraits<K>::finite)
        throw Error(ErrorKind::FieldNotFinite, "submodule lattices are only enumerated over finite fields");
    std::map<Vertex, Subspace<K>> pool;
    for (auto& e : rep.v())
        pool[e.at] = column_span(Matrix<K>::identity(static_cast<std::size_t>(e.value)));
    std::vector<Subrep<K>> out;
    detail::walk_subreps(rep, Subrep<K>{}, pool, false, opt, [&](const Subrep<K>& u) {
        out.push_back(u);
        return true;
    });
    return out;
}

/// theta-stability: every subrepresentation inside Ker B has (theta, u) <= 0
/// and every subrepresentation containing Im A has (theta, v - u) >= 0.
///
/// The two families are walked separately: the first from 0 using vectors of
/// Ker B (a subrepresentation inside Ker B is a sum of cyclic ones generated
/// there), the second from the closure of Im A using all vectors.
template <class K>
bool stability_check(const GradedQuiverRep<K>& rep, const WeightVector& theta, const StabilityOptions& opt = {})
{
    detail::require_decidable(rep, theta, opt);
    const CartanDatum& cd = rep.cartan();

    std::map<Vertex, Subspace<K>> kernel_b, everything;
    for (auto& e : rep.v()) {
        const Vertex x = e.at;
        everything[x] = column_span(Matrix<K>::identity(static_cast<std::size_t>(e.value)));
        Subspace<K> kb = kernel(rep.B(x.node, x.param + cd.di(x.node)));
        if (kb.dim() > 0)
            kernel_b[x] = std::move(kb);
    }

    bool ok = detail::walk_subreps(rep, Subrep<K>{}, kernel_b, true, opt, [&](const Subrep<K>& u) {
        return stability_pairing(cd, theta, u.dims()) <= Rational(0);
    });
    if (!ok)
        return false;
    const Rational full = stability_pairing(cd, theta, rep.v());
    return detail::walk_subreps(rep, image_a_closure(rep), everything, false, opt, [&](const Subrep<K>& u) {
        return full - stability_pairing(cd, theta, u.dims()) >= Rational(0);
    });
}

// ---------------------------------------------------------------------------
// The maps Phi, Psi, Upsilon and the reflection.

/// One summand of W_i^{a+d_i} (+) (+)_{j != i} (+)_{t=1}^{-c_ij} V_j^{a + d_ij + t d_ii}.
struct Summand {
    bool framing = false;
    Vertex at;
    int t = 0;
    std::size_t offset = 0;
    std::size_t dim = 0;
};

/// Summands in canonical order: W first, then (j, t) lexicographically.
template <class K>
std::vector<Summand> phi_domain(const GradedQuiverRep<K>& rep, int i, int a)
{
    const CartanDatum& cd = rep.cartan();
    std::vector<Summand> out;
    std::size_t off = 0;
    const Vertex wv{i, a + cd.di(i)};
    out.push_back({true, wv, 0, off, rep.dim_w(wv)});
    off += out.back().dim;
    for (int j = 1; j <= cd.rank(); ++j) {
        if (!cd.adjacent(i, j))
            continue;
        for (int t = 1; t <= -cd.c(i, j); ++t) {
            const Vertex x{j, a + cd.d(i, j) + t * cd.d(i, i)};
            out.push_back({false, x, t, off, rep.dim_v(x)});
            off += out.back().dim;
        }
    }
    return out;
}

inline std::size_t domain_dim(const std::vector<Summand>& d)
{
    std::size_t n = 0;
    for (auto& s : d)
        n += s.dim;
    return n;
}

/// Phi_i^a : domain -> V_i^{a + d_ii}, blocks A_i^{a+d_i} and loop_i^{t-1} (i<-j).
template <class K>
Matrix<K> phi_map(const GradedQuiverRep<K>& rep, int i, int a)
{
    const CartanDatum& cd = rep.cartan();
    const auto dom = phi_domain(rep, i, a);
    Matrix<K> phi(rep.dim_v({i, a + cd.d(i, i)}), domain_dim(dom));
    for (auto& s : dom) {
        if (s.dim == 0)
            continue;
        if (s.framing)
            phi.set_block(0, s.offset, rep.A(i, s.at.param));
        else
            phi.set_block(0, s.offset,
                          rep.loop_power(i, s.at.param - cd.d(s.at.node, i), s.t - 1) *
                              rep.arrow(s.at.node, s.at.param, i));
    }
    return phi;
}

/// Psi_i^a : V_i^a -> domain, blocks B_i^{a+d_i} and (j<-i) loop_i^{-c_ij-t}.
/// Phi_i^a Psi_i^a is the left side of E1bis at (i, a); a nonzero composite
/// raises RelationViolated.
template <class K>
Matrix<K> psi_map(const GradedQuiverRep<K>& rep, int i, int a)
{
    const CartanDatum& cd = rep.cartan();
    const auto dom = phi_domain(rep, i, a);
    Matrix<K> psi(domain_dim(dom), rep.dim_v({i, a}));
    for (auto& s : dom) {
        if (s.dim == 0)
            continue;
        if (s.framing) {
            psi.set_block(s.offset, 0, rep.B(i, s.at.param));
        } else {
            const int steps = -cd.c(i, s.at.node) - s.t;
            psi.set_block(s.offset, 0,
                          rep.arrow(i, a - steps * cd.d(i, i), s.at.node) * rep.loop_power(i, a, steps));
        }
    }
    if (!(phi_map(rep, i, a) * psi).is_zero())
        throw Error(ErrorKind::RelationViolated,
                    "Phi o Psi != 0 at i=" + std::to_string(i) + " a=" + std::to_string(a));
    return psi;
}

/// Upsilon : domain(i, a) -> domain(i, a - d_ii). The W block is zero, (j, t)
/// goes identically to (j, t+1) for t < -c_ij, and the top summand
/// V_j^{a - d_ij} goes to V_j^{a + d_ij} by minus the (-c_ji)-fold loop.
template <class K>
Matrix<K> upsilon_map(const GradedQuiverRep<K>& rep, int i, int a)
{
    const CartanDatum& cd = rep.cartan();
    const auto src = phi_domain(rep, i, a);
    const auto dst = phi_domain(rep, i, a - cd.d(i, i));
    Matrix<K> u(domain_dim(dst), domain_dim(src));
    auto find_dst = [&](int j, int t) -> const Summand& {
        for (auto& s : dst)
            if (!s.framing && s.at.node == j && s.t == t)
                return s;
        throw Error(ErrorKind::AlgorithmFailure, "missing summand");
    };
    for (auto& s : src) {
        if (s.framing || s.dim == 0)
            continue;
        const int j = s.at.node;
        if (s.t < -cd.c(i, j)) {
            u.set_block(find_dst(j, s.t + 1).offset, s.offset, Matrix<K>::identity(s.dim));
        } else {
            const Summand& d = find_dst(j, 1);
            if (d.dim > 0)
                u.set_block(d.offset, s.offset, -rep.loop_power(j, s.at.param, -cd.c(j, i)));
        }
    }
    return u;
}

struct ReflectOptions {
    /// Skip the stability precondition when it cannot be decided.
    bool trusted = false;
    bool check_postconditions = true;
    StabilityOptions stability{};
};

template <class K>
struct Reflected {
    GradedQuiverRep<K> rep;
    WeightVector theta;
};

namespace detail {

template <class K>
std::set<int> reflection_params(const GradedQuiverRep<K>& rep, int i)
{
    const CartanDatum& cd = rep.cartan();
    std::set<int> params;
    for (auto& e : rep.w())
        if (e.at.node == i)
            params.insert(e.at.param - cd.di(i));
    for (auto& e : rep.v()) {
        const int j = e.at.node;
        if (j == i) {
            params.insert(e.at.param - cd.d(i, i));
        } else if (cd.adjacent(i, j)) {
            for (int t = 1; t <= -cd.c(i, j); ++t)
                params.insert(e.at.param - cd.d(i, j) - t * cd.d(i, i));
        }
    }
    return params;
}

template <class K>
bool stability_decidable(const GradedQuiverRep<K>& rep, const StabilityOptions& opt)
{
    return FieldTraits<K>::finite && rep.total_dim() <= opt.dim_cap;
}

} // namespace detail

/// The reflection S_i: replaces every V_i^a by Ker Phi_i^a and theta by s_i(theta).
///
/// New maps at node i: projections of the kernel onto V_j^{a-d_ij} (arrows out)
/// and onto W_i^{a+d_i} (B), Psi composed with the old arrows into V_i^a and
/// with A (arrows in, A), and the loop induced by Upsilon. Everything not
/// touching node i is kept.
template <class K>
Reflected<K> reflect(const GradedQuiverRep<K>& rep, int i, const WeightVector& theta, const ReflectOptions& opt = {})
{
    const CartanDatum& cd = rep.cartan();
    if (i < 1 || i > cd.rank())
        throw Error(ErrorKind::InvalidArgument, "node out of range");
    if (!(theta[i] < Rational(0)))
        throw Error(ErrorKind::InvalidArgument, "reflection at node " + std::to_string(i) + " needs theta_i < 0");
    if (!is_generic(cd, theta))
        throw Error(ErrorKind::NonGenericTheta, "theta lies on a root hyperplane");
    const bool decidable = detail::stability_decidable(rep, opt.stability);
    if (decidable) {
        if (!stability_check(rep, theta, opt.stability))
            throw Error(ErrorKind::InvalidArgument, "point is not theta-stable");
    } else if (!opt.trusted) {
        throw Error(ErrorKind::InvalidArgument,
                    "stability of the input cannot be decided here; pass the trusted flag");
    }

    const int di = cd.di(i);
    const int dii = cd.d(i, i);
    std::map<int, Subspace<K>> kernels;
    std::map<int, Matrix<K>> psis;
    for (int a : detail::reflection_params(rep, i)) {
        Matrix<K> phi = phi_map(rep, i, a);
        if (rank(phi) != phi.rows())
            throw Error(ErrorKind::NotSurjective,
                        "Phi_" + std::to_string(i) + "^" + std::to_string(a) + " is not surjective");
        psis[a] = psi_map(rep, i, a);
        kernels[a] = kernel(phi);
    }

    LatticeVector vbar;
    for (auto& e : rep.v())
        if (e.at.node != i)
            vbar.add(e.at, e.value);
    for (auto& [a, k] : kernels)
        vbar.add({i, a}, static_cast<std::int64_t>(k.dim()));

    GradedQuiverRep<K> out(cd, vbar, rep.w());

    auto coords = [&](int a, const Matrix<K>& x) {
        const Subspace<K>& ker = kernels.at(a);
        if (!ker.contains_columns(x))
            throw Error(ErrorKind::RelationViolated, "image of Psi_" + std::to_string(i) + "^" + std::to_string(a) +
                                                         " leaves Ker Phi");
        return ker.coordinates(x);
    };
    auto summand_rows = [&](int a, bool framing, int j, int t) {
        const auto dom = phi_domain(rep, i, a);
        for (auto& s : dom)
            if (s.framing == framing && (framing || (s.at.node == j && s.t == t)))
                return kernels.at(a).basis.row_block(s.offset, s.dim);
        throw Error(ErrorKind::AlgorithmFailure, "missing summand");
    };

    for (auto& key : out.slots()) {
        const int x = key.source.node;
        const int b = key.source.param;
        switch (key.kind) {
        case SlotKind::Arrow:
            if (x != i && key.target != i) {
                out.set(key, rep.get(key));
            } else if (x == i && key.target == i) {
                Matrix<K> ups = upsilon_map(rep, i, b) * kernels.at(b).basis;
                out.set(key, coords(b - dii, ups));
            } else if (x == i) {
                out.set(key, summand_rows(b, false, key.target, -cd.c(i, key.target)));
            } else {
                const int a = b - cd.d(x, i);
                out.set(key, coords(a, psis.at(a) * rep.arrow(x, b, i)));
            }
            break;
        case SlotKind::A:
            if (x != i)
                out.set(key, rep.get(key));
            else
                out.set(key, coords(b + di, psis.at(b + di) * rep.A(i, b)));
            break;
        case SlotKind::B:
            if (x != i)
                out.set(key, rep.get(key));
            else
                out.set(key, summand_rows(b - di, true, 0, 0));
            break;
        }
    }

    Reflected<K> result{std::move(out), reflect_weight(cd, i, theta)};

    if (opt.check_postconditions) {
        auto bad = validate_relations(result.rep);
        if (!bad.empty()) {
            std::ostringstream msg;
            msg << "reflected point violates " << bad.front();
            throw Error(ErrorKind::RelationViolated, msg.str());
        }
        if (result.rep.v() != apply_s_on_v(cd, i, rep.v(), rep.w())) {
            std::ostringstream msg;
            msg << "reflected dimensions " << result.rep.v() << " differ from S_i(v) "
                << apply_s_on_v(cd, i, rep.v(), rep.w());
            throw Error(ErrorKind::DimensionMismatch, msg.str());
        }
        if (detail::stability_decidable(result.rep, opt.stability) &&
            !stability_check(result.rep, result.theta, opt.stability))
            throw Error(ErrorKind::AlgorithmFailure, "reflected point is not s_i(theta)-stable");
    }
    return result;
}

/// Reflections along a word, last letter first.
template <class K>
Reflected<K> chain_reflect(const GradedQuiverRep<K>& rep, const WeightVector& theta, const BraidWord& word,
                           const ReflectOptions& opt = {})
{
    check_word(rep.cartan(), word);
    Reflected<K> cur{rep, theta};
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        cur = reflect(cur.rep, *it, cur.theta, opt);
    return cur;
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration over a finite field.

struct SearchCaps {
    std::size_t max_entries = 22;
    StabilityOptions stability{};
};

template <class K>
struct SearchPoint {
    GradedQuiverRep<K> rep;
    /// One flag per supplied theta.
    std::vector<bool> stable;
};

template <class K>
struct SearchResult {
    std::uint64_t enumerated = 0;
    std::vector<SearchPoint<K>> points;
};

/// Number of free matrix entries of P_{v,w}.
template <class K>
std::size_t free_entries(const GradedQuiverRep<K>& rep)
{
    std::size_t n = 0;
    for (auto& s : rep.slots()) {
        const auto& m = rep.slot(s);
        n += m.rows() * m.cols();
    }
    return n;
}

/// All matrix tuples satisfying the relations, each classified by
/// stability_check for every theta. Points are raw (no quotient by graded
/// automorphisms).
template <class K>
SearchResult<K> exhaustive_search(const CartanDatum& cd, const LatticeVector& v, const LatticeVector& w,
                                  const std::vector<WeightVector>& thetas, const SearchCaps& caps = {})
{
    static_assert(FieldTraits<K>::finite, "exhaustive search needs a finite field");
    GradedQuiverRep<K> rep(cd, v, w);
    struct Cell {
        SlotKey slot;
        std::size_t r, c;
    };
    std::vector<Cell> cells;
    for (auto& s : rep.slots()) {
        const auto& m = rep.slot(s);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                cells.push_back({s, r, c});
    }
    if (cells.size() > caps.max_entries)
        throw Error(ErrorKind::CapExceeded, std::to_string(cells.size()) + " free entries exceed cap " +
                                                std::to_string(caps.max_entries));
    for (auto& th : thetas)
        if (!is_generic(cd, th))
            throw Error(ErrorKind::NonGenericTheta, "theta lies on a root hyperplane");

    const auto elems = FieldTraits<K>::elements();
    const std::size_t q = elems.size();
    std::vector<std::size_t> digits(cells.size(), 0);
    std::map<SlotKey, Matrix<K>> current;
    for (auto& s : rep.slots())
        current[s] = rep.slot(s);

    SearchResult<K> result;
    for (;;) {
        ++result.enumerated;
        if (validate_relations(rep).empty()) {
            SearchPoint<K> p{rep, {}};
            for (auto& th : thetas)
                p.stable.push_back(stability_check(rep, th, caps.stability));
            result.points.push_back(std::move(p));
        }
        std::size_t k = 0;
        while (k < cells.size() && digits[k] == q - 1) {
            digits[k] = 0;
            current[cells[k].slot](cells[k].r, cells[k].c) = elems[0];
            rep.set(cells[k].slot, current[cells[k].slot]);
            ++k;
        }
        if (k == cells.size())
            break;
        ++digits[k];
        current[cells[k].slot](cells[k].r, cells[k].c) = elems[digits[k]];
        rep.set(cells[k].slot, current[cells[k].slot]);
    }
    return result;
}

} // namespace qlab
