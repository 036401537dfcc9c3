#include "automorph/reps.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_set>

#include "automorph/parallel.hpp"

namespace automorph {

namespace detail {
i64 isqrt128(__int128 n)
{
    if (n <= 0) return 0;
    i64 r = static_cast<i64>(std::sqrt(static_cast<long double>(n)));
    while (static_cast<__int128>(r) * r > n) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

static i64 floor_div128(__int128 a, i64 b)
{
    __int128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return static_cast<i64>(q);
}

bool quad_interval(i64 t, __int128 u, __int128 v, __int128 R, i64& lo, i64& hi)
{
    // t x^2 + 2ux + v <= R  <=>  (tx + u)^2 <= u^2 - t(v - R)
    __int128 disc = u * u - static_cast<__int128>(t) * (v - R);
    if (disc < 0) return false;
    i64 s = isqrt128(disc);
    lo = -floor_div128(u + s, t);  // ceil((-u - s)/t)
    hi = floor_div128(-u + s, t);
    return lo <= hi;
}
}  // namespace detail

void require_positive_definite(const QuadraticForm& q)
{
    if (!is_positive_definite(q)) throw std::domain_error("enumeration requires positive definite");
    if (q.gram.rows() == 0) throw std::overflow_error("form coefficients exceed 64-bit kernels");
}

ShortVectors::ShortVectors(const SmallMatrix& Q) : m_(static_cast<int>(Q.rows())), Q_(Q)
{
    IntMatrix QB = to_big(Q);
    for (int k = 0; k < m_; ++k) {
        int n = m_ - k;
        IntMatrix S = QB.block(k, k, n, n);
        BigInt Dk = 1;
        if (k > 0) {
            IntMatrix A = QB.block(0, 0, k, k);
            Dk = det(A);
            if (Dk <= 0) throw std::domain_error("enumeration requires positive definite");
            IntMatrix C = QB.block(0, k, k, n);
            S = scale(S, Dk) - C.transpose() * adjoint(A) * C;
        }
        P_.push_back(to_small(S));
        D_.push_back(to_i64(Dk));
    }
    if (P_[m_ - 1](0, 0) <= 0) throw std::domain_error("enumeration requires positive definite");
}

std::pair<i64, i64> ShortVectors::top_range(i64 bound2) const
{
    i64 lo, hi;
    if (bound2 < 0 || !detail::quad_interval(P_[m_ - 1](0, 0), 0, 0, static_cast<__int128>(bound2) * D_[m_ - 1], lo, hi))
        return {1, 0};
    return {lo, hi};
}

std::vector<IntVec> representations(const QuadraticForm& q, i64 a)
{
    require_positive_definite(q);
    if (a < 0) return {};
    ShortVectors sv(q.gram);
    const i64 target = checked_mul(2, a);
    auto [lo, hi] = sv.top_range(target);
    std::vector<std::vector<IntVec>> parts(hi >= lo ? hi - lo + 1 : 0);
    parallel_for(parts.size(), [&](std::size_t i) {
        sv.run_with_top(target, lo + static_cast<i64>(i), [&](const IntVec& x, i64 n2) {
            if (n2 == target) parts[i].push_back(x);
        });
    });
    std::vector<IntVec> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<i64> representation_counts(const QuadraticForm& q, i64 n_max)
{
    require_positive_definite(q);
    ShortVectors sv(q.gram);
    const i64 bound = checked_mul(2, n_max);
    auto [lo, hi] = sv.top_range(bound);
    std::vector<std::vector<i64>> parts(hi >= lo ? hi - lo + 1 : 0);
    parallel_for(parts.size(), [&](std::size_t i) {
        std::vector<i64> c(n_max + 1, 0);
        sv.run_with_top(bound, lo + static_cast<i64>(i), [&](const IntVec&, i64 n2) { ++c[n2 / 2]; });
        parts[i] = std::move(c);
    });
    std::vector<i64> counts(n_max + 1, 0);
    for (auto& p : parts)
        for (i64 n = 0; n <= n_max; ++n) counts[n] += p[n];
    return counts;
}

/* {{{ automorph backtracking */
namespace {
struct Cand {
    IntVec v, Qv;
};
struct AutomorphSearch {
    int m;
    i64 a;
    const SmallMatrix* T;
    std::map<i64, std::vector<Cand>> by_norm;
    std::vector<const std::vector<Cand>*> cols;

    AutomorphSearch(const QuadraticForm& q, const QuadraticForm& target, i64 mult) : m(q.m), a(mult), T(&target.gram)
    {
        require_positive_definite(q);
        require_positive_definite(target);
        if (q.m != target.m) throw std::invalid_argument("dimension mismatch");
        if (q.det_q != target.det_q) throw std::invalid_argument("determinant mismatch");
        if (a <= 0) throw std::invalid_argument("multiplier must be positive");
        cols.resize(m);
        for (int j = 0; j < m; ++j) {
            i64 n = checked_mul(a, (*T)(j, j) / 2);
            auto it = by_norm.find(n);
            if (it == by_norm.end()) {
                std::vector<Cand> cs;
                for (auto& v : representations(q, n)) cs.push_back({v, mat_vec(q.gram, v)});
                it = by_norm.emplace(n, std::move(cs)).first;
            }
            cols[j] = &it->second;
        }
    }

    /* depth-first from a fixed first column; emit returns false to stop */
    template <class Emit>
    bool extend(std::vector<const Cand*>& chosen, int j, Emit& emit) const
    {
        if (j == m) {
            SmallMatrix M(m, m);
            for (int c = 0; c < m; ++c)
                for (int r = 0; r < m; ++r) M(r, c) = chosen[c]->v[r];
            return emit(std::move(M));
        }
        for (const Cand& c : *cols[j]) {
            bool ok = true;
            for (int i = 0; i < j && ok; ++i) {
                i64 s = 0;
                for (int r = 0; r < m; ++r) s += chosen[i]->Qv[r] * c.v[r];
                if (s != a * (*T)(i, j)) ok = false;
            }
            if (!ok) continue;
            chosen[j] = &c;
            if (!extend(chosen, j + 1, emit)) return false;
        }
        return true;
    }
};
}  // namespace

std::vector<SmallMatrix> automorph_matrices(const QuadraticForm& q, const QuadraticForm& target, i64 a)
{
    AutomorphSearch search(q, target, a);
    const auto& first = *search.cols[0];
    // split on the first column so that results stay in a fixed order
    std::vector<std::vector<SmallMatrix>> parts(first.size());
    parallel_for(first.size(), [&](std::size_t f) {
        std::vector<const Cand*> chosen(search.m, nullptr);
        chosen[0] = &first[f];
        auto emit = [&](SmallMatrix&& M) {
            parts[f].push_back(std::move(M));
            return true;
        };
        search.extend(chosen, 1, emit);
    });
    std::vector<SmallMatrix> out;
    for (auto& p : parts)
        for (auto& M : p) out.push_back(std::move(M));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<SmallMatrix> find_automorph(const QuadraticForm& q, const QuadraticForm& target, i64 a)
{
    AutomorphSearch search(q, target, a);
    std::optional<SmallMatrix> found;
    std::vector<const Cand*> chosen(search.m, nullptr);
    auto emit = [&](SmallMatrix&& M) {
        found = std::move(M);
        return false;
    };
    for (const Cand& c : *search.cols[0]) {
        chosen[0] = &c;
        if (!search.extend(chosen, 1, emit)) break;
    }
    return found;
}

std::vector<Automorph> automorphs(const FormPtr& q, const FormPtr& target, i64 a)
{
    std::vector<Automorph> out;
    for (auto& M : automorph_matrices(*q, *target, a)) out.push_back({M, q, target, a});
    return out;
}

const UnitGroup& unit_group(const QuadraticForm& q)
{
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<UnitGroup>> cache;
    const std::string key = q.key();
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return *it->second;
    }
    auto E = std::make_unique<UnitGroup>();
    E->form = std::make_shared<QuadraticForm>(q);
    E->elements = automorph_matrices(q, q, 1);
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.emplace(key, std::move(E)).first;
    return *it->second;
}
/* }}} */

PrimitiveSplit primitive_filter(const std::vector<SmallMatrix>& ms)
{
    PrimitiveSplit s;
    for (const auto& M : ms) (content(M) == 1 ? s.primitive : s.imprimitive).push_back(M);
    return s;
}
PrimitiveSplit primitive_filter(const std::vector<Automorph>& ms)
{
    std::vector<SmallMatrix> v;
    for (const auto& a : ms) v.push_back(a.matrix);
    return primitive_filter(v);
}

SmallMatrix canonical_left(const UnitGroup& E, const SmallMatrix& M)
{
    SmallMatrix best;
    bool have = false;
    for (const auto& U : E.elements) {
        SmallMatrix X = U * M;
        if (!have || X < best) {
            best = std::move(X);
            have = true;
        }
    }
    return best;
}

SmallMatrix canonical_right(const SmallMatrix& M, const UnitGroup& E)
{
    SmallMatrix best;
    bool have = false;
    for (const auto& U : E.elements) {
        SmallMatrix X = M * U;
        if (!have || X < best) {
            best = std::move(X);
            have = true;
        }
    }
    return best;
}

CosetList coset_decompose(const std::vector<SmallMatrix>& ms, const UnitGroup& E, CosetSide side)
{
    std::unordered_set<SmallMatrix, SmallMatrixHash> seen;
    CosetList out;
    out.side = side;
    for (const auto& M : ms) {
        if (seen.count(M)) continue;
        SmallMatrix best = M;
        for (const auto& U : E.elements) {
            SmallMatrix X = side == CosetSide::Left ? U * M : M * U;
            if (X < best) best = X;
            seen.insert(std::move(X));
        }
        out.representatives.push_back(best);
    }
    std::sort(out.representatives.begin(), out.representatives.end());
    return out;
}

i64 stabilizer_order(const QuadraticForm& q, const IntVec& L)
{
    const UnitGroup& E = unit_group(q);
    i64 n = 0;
    for (const auto& U : E.elements)
        if (mat_vec(U, L) == L) ++n;
    return n;
}

IntVec canonical_orbit_vector(const UnitGroup& E, const IntVec& L)
{
    IntVec best = L;
    for (const auto& U : E.elements) {
        IntVec x = mat_vec(U, L);
        if (x < best) best = std::move(x);
    }
    return best;
}

}  // namespace automorph
