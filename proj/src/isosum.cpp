#include "automorph/isosum.hpp"

#include <atomic>
#include <optional>

#include "automorph/parallel.hpp"

namespace automorph {

static i64 md(i64 a, i64 p) { return mod_floor(a, p); }

static i64 inv_mod(i64 a, i64 p)
{
    ExtGcd<i64> e = ext_gcd(md(a, p), p);
    if (e.g != 1) throw std::domain_error("not invertible mod p");
    return md(e.x, p);
}

std::vector<int> rref_mod_p(std::vector<IntVec>& rows, i64 p)
{
    std::vector<int> piv;
    if (rows.empty()) return piv;
    const int m = static_cast<int>(rows[0].size());
    std::size_t r = 0;
    for (auto& row : rows)
        for (auto& x : row) x = md(x, p);
    for (int c = 0; c < m && r < rows.size(); ++c) {
        std::size_t s = r;
        while (s < rows.size() && rows[s][c] == 0) ++s;
        if (s == rows.size()) continue;
        std::swap(rows[r], rows[s]);
        i64 inv = inv_mod(rows[r][c], p);
        for (auto& x : rows[r]) x = x * inv % p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            i64 f = rows[i][c];
            for (int j = 0; j < m; ++j) rows[i][j] = md(rows[i][j] - f * rows[r][j], p);
        }
        piv.push_back(c);
        ++r;
    }
    rows.resize(r);
    return piv;
}

void for_each_subspace(int m, int k, i64 p, const std::function<void(const std::vector<IntVec>&, const std::vector<int>&)>& f)
{
    std::vector<int> pick(m, 0);
    std::fill(pick.begin(), pick.begin() + k, 1);
    // pick marks pivot columns; prev_permutation walks k-subsets in lexicographic order
    do {
        std::vector<int> piv;
        for (int c = 0; c < m; ++c)
            if (pick[c]) piv.push_back(c);
        std::vector<std::pair<int, int>> free;
        for (int i = 0; i < k; ++i)
            for (int c = piv[i] + 1; c < m; ++c)
                if (!pick[c]) free.emplace_back(i, c);
        std::vector<IntVec> rows(k, IntVec(m, 0));
        for (int i = 0; i < k; ++i) rows[i][piv[i]] = 1;
        std::vector<i64> digit(free.size(), 0);
        for (;;) {
            for (std::size_t t = 0; t < free.size(); ++t) rows[free[t].first][free[t].second] = digit[t];
            f(rows, piv);
            std::size_t t = 0;
            while (t < free.size() && digit[t] == p - 1) digit[t++] = 0;
            if (t == free.size()) break;
            ++digit[t];
        }
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

std::vector<i64> odd_profile(int m, int d, i64 p)
{
    std::vector<i64> prof;
    for (int i = 0; i < d; ++i) prof.push_back(1);
    for (int i = 0; i < m - 2 * d; ++i) prof.push_back(p);
    for (int i = 0; i < d; ++i) prof.push_back(p * p);
    return prof;
}

SubgroupType profile_type(int m, const std::vector<i64>& profile, i64 p)
{
    if (static_cast<int>(profile.size()) != m) throw std::invalid_argument("unsupported profile");
    SubgroupType t{m, 0, 0, p};
    for (i64 x : profile) {
        if (x == 1) ++t.d;
        else if (x == p) ++t.b;
        else if (x != p * p) throw std::invalid_argument("unsupported profile");
    }
    if (!std::is_sorted(profile.begin(), profile.end())) throw std::invalid_argument("unsupported profile");
    return t;
}

BigInt coset_count(const SubgroupType& t)
{
    return gaussian_binomial(t.m, t.d, t.p) * gaussian_binomial(t.m - t.d, t.b, t.p) *
           ipow(BigInt(static_cast<long>(t.p)), static_cast<unsigned>(t.d * (t.m - t.d - t.b)));
}

/* lattice spanned by U_i, p*Y, p^2 Z^m as a column Hermite form */
static SmallMatrix lattice_hnf(const std::vector<IntVec>& U, const std::vector<IntVec>& Y, int m, i64 p)
{
    SmallMatrix G(m, U.size() + Y.size() + m);
    std::size_t c = 0;
    for (auto& u : U) G.set_col(c++, u);
    for (auto& y : Y) {
        IntVec py(m);
        for (int i = 0; i < m; ++i) py[i] = p * y[i];
        G.set_col(c++, py);
    }
    for (int i = 0; i < m; ++i) G(i, c++) = p * p;
    return hnf(G);
}

static std::vector<int> complement(const std::vector<int>& piv, int m)
{
    std::vector<int> out;
    for (int c = 0; c < m; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) out.push_back(c);
    return out;
}

/* all lifts x_i + p a_i with a_i supported on the given coordinates */
static void for_each_lift(const std::vector<IntVec>& X, const std::vector<int>& coords, i64 p,
                          const std::function<void(const std::vector<IntVec>&)>& f)
{
    const std::size_t d = X.size(), n = coords.size();
    std::vector<i64> digit(d * n, 0);
    std::vector<IntVec> U = X;
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            U[i] = X[i];
            for (std::size_t j = 0; j < n; ++j) U[i][coords[j]] += p * digit[i * n + j];
        }
        f(U);
        std::size_t t = 0;
        while (t < digit.size() && digit[t] == p - 1) digit[t++] = 0;
        if (t == digit.size()) break;
        ++digit[t];
    }
}

void for_each_coset(const SubgroupType& t, const std::function<void(const SmallMatrix&)>& f)
{
    const int m = t.m;
    const i64 p = t.p;
    for_each_subspace(m, t.d, p, [&](const std::vector<IntVec>& X, const std::vector<int>& xpiv) {
        std::vector<int> nonx = complement(xpiv, m);
        for_each_subspace(m - t.d, t.b, p, [&](const std::vector<IntVec>& W, const std::vector<int>&) {
            std::vector<IntVec> Y = X;
            for (auto& w : W) {
                IntVec y(m, 0);
                for (std::size_t j = 0; j < nonx.size(); ++j) y[nonx[j]] = w[j];
                Y.push_back(y);
            }
            std::vector<int> ypiv = rref_mod_p(Y, p);
            std::vector<int> nony = complement(ypiv, m);
            for_each_lift(X, nony, p, [&](const std::vector<IntVec>& U) { f(lattice_hnf(U, Y, m, p)); });
        });
    });
}

std::vector<SmallMatrix> coset_representatives(int m, const std::vector<i64>& profile, i64 p)
{
    SubgroupType t = profile_type(m, profile, p);
    std::vector<SmallMatrix> out;
    for_each_coset(t, [&](const SmallMatrix& H) { out.push_back(H); });
    std::sort(out.begin(), out.end());
    return out;
}

bool divides_vector(const SmallMatrix& M, const IntVec& K)
{
    SmallMatrix H = hnf(M);
    return lattice_contains(H, K);
}

static void check_p2_preconditions(const QuadraticForm& q, int d, const IntVec& K, i64 p)
{
    if (q.m % 2 == 0) throw std::invalid_argument("isotropic p^2 sums need odd m");
    if (d < 1 || d > (q.m - 1) / 2) throw std::out_of_range("d out of range");
    if (static_cast<int>(K.size()) != q.m) throw std::invalid_argument("K has wrong length");
    if (p == 2 || !is_prime(p)) throw std::domain_error("even prime unsupported");
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
    if (!divides(BigInt(static_cast<long>(p * p)), evaluate(q, to_big(K)))) throw std::domain_error("q(K) must vanish mod p^2");
}

/* v in span of RREF rows mod p */
static bool in_span_mod_p(const std::vector<IntVec>& rows, const std::vector<int>& piv, IntVec v, i64 p)
{
    for (auto& x : v) x = md(x, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        i64 c = v[piv[i]];
        if (!c) continue;
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = md(v[j] - c * rows[i][j], p);
    }
    return std::all_of(v.begin(), v.end(), [](i64 x) { return x == 0; });
}

namespace {
struct Frame {
    std::vector<IntVec> X, Y;
    std::vector<int> xpiv, ypiv, nony;
};
}  // namespace

/* totally isotropic X mod p with Y = X^perp */
static std::vector<Frame> isotropic_frames(const QuadraticForm& q, int d, i64 p)
{
    const int m = q.m;
    const SmallMatrix& Q = q.gram;
    std::vector<Frame> frames;
    for_each_subspace(m, d, p, [&](const std::vector<IntVec>& X, const std::vector<int>& xpiv) {
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j)
                if (md(bilinear(Q, X[i], X[j]), p) != 0) return;
        // Y must equal the orthogonal complement of X mod p
        std::vector<IntVec> rows;
        for (auto& x : X) rows.push_back(mat_vec(Q, x));
        std::vector<int> rp = rref_mod_p(rows, p);
        std::vector<int> freec = complement(rp, m);
        std::vector<IntVec> Y;
        for (int fc : freec) {
            IntVec y(m, 0);
            y[fc] = 1;
            for (std::size_t i = 0; i < rows.size(); ++i) y[rp[i]] = md(-rows[i][fc], p);
            Y.push_back(y);
        }
        Frame fr{X, Y, xpiv, {}, {}};
        fr.ypiv = rref_mod_p(fr.Y, p);
        fr.nony = complement(fr.ypiv, m);
        frames.push_back(std::move(fr));
    });
    return frames;
}

static bool lift_is_isotropic(const SmallMatrix& Q, const std::vector<IntVec>& U, i64 p2)
{
    for (std::size_t i = 0; i < U.size(); ++i)
        for (std::size_t j = i; j < U.size(); ++j)
            if (md(bilinear(Q, U[i], U[j]), p2) != 0) return false;
    return true;
}

std::vector<SmallMatrix> isotropic_cosets_p2(const QuadraticForm& q, int d, i64 p)
{
    check_p2_preconditions(q, d, IntVec(q.m, 0), p);
    std::vector<Frame> frames = isotropic_frames(q, d, p);
    std::vector<std::vector<SmallMatrix>> parts(frames.size());
    parallel_for(frames.size(), [&](std::size_t fi) {
        const Frame& fr = frames[fi];
        for_each_lift(fr.X, fr.nony, p, [&](const std::vector<IntVec>& U) {
            if (lift_is_isotropic(q.gram, U, p * p)) parts[fi].push_back(lattice_hnf(U, fr.Y, q.m, p));
        });
    });
    std::vector<SmallMatrix> out;
    for (auto& v : parts) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<SmallMatrix> isotropic_cosets_p(const QuadraticForm& q, i64 p)
{
    if (q.m % 2) throw std::invalid_argument("multiplier p cosets need even m");
    if (p == 2 || !is_prime(p)) throw std::domain_error("even prime unsupported");
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
    const int m = q.m, k = m / 2;
    std::vector<SmallMatrix> out;
    for_each_subspace(m, k, p, [&](const std::vector<IntVec>& X, const std::vector<int>&) {
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j)
                if (md(bilinear(q.gram, X[i], X[j]), p) != 0) return;
        SmallMatrix G(m, k + m);
        for (int i = 0; i < k; ++i) G.set_col(i, X[i]);
        for (int i = 0; i < m; ++i) G(i, k + i) = p;
        out.push_back(hnf(G));
    });
    std::sort(out.begin(), out.end());
    return out;
}

BigInt brute_isotropic_sum_p2(const QuadraticForm& q, int d, const IntVec& K, i64 p)
{
    check_p2_preconditions(q, d, K, p);
    const int m = q.m;
    const i64 p2 = p * p;
    bool k_zero2 = std::all_of(K.begin(), K.end(), [&](i64 x) { return x % p2 == 0; });
    std::vector<Frame> frames = isotropic_frames(q, d, p);
    std::vector<i64> counts(frames.size(), 0);
    parallel_for(frames.size(), [&](std::size_t fi) {
        const Frame& fr = frames[fi];
        i64 c = 0;
        for_each_lift(fr.X, fr.nony, p, [&](const std::vector<IntVec>& U) {
            if (!lift_is_isotropic(q.gram, U, p2)) return;
            if (!k_zero2) {
                // K = sum c_i U_i + p w with w in Y
                IntVec w = K;
                for (int i = 0; i < d; ++i) {
                    i64 ci = md(K[fr.xpiv[i]], p);
                    for (int j = 0; j < m; ++j) w[j] -= ci * U[i][j];
                }
                for (auto& x : w) {
                    if (md(x, p) != 0) return;
                    x /= p;
                }
                if (!in_span_mod_p(fr.Y, fr.ypiv, w, p)) return;
            }
            ++c;
        });
        counts[fi] = c;
    });
    BigInt total = 0;
    for (i64 c : counts) total += static_cast<long>(c);
    return total;
}

BigInt brute_isotropic_sum_p2_unpruned(const QuadraticForm& q, int d, const IntVec& K, i64 p)
{
    check_p2_preconditions(q, d, K, p);
    const i64 p2 = p * p;
    BigInt total = 0;
    for_each_coset(profile_type(q.m, odd_profile(q.m, d, p), p), [&](const SmallMatrix& M) {
        if (!is_zero_mod(congruent(q.gram, M), p2)) return;
        if (!lattice_contains(M, K)) return;
        ++total;
    });
    return total;
}

static bool all_divisible(const IntVec& K, i64 n)
{
    return std::all_of(K.begin(), K.end(), [&](i64 x) { return x % n == 0; });
}

Rational formula_isotropic_sum_p2(const QuadraticForm& q, int d, const IntVec& K, i64 p)
{
    check_p2_preconditions(q, d, K, p);
    const int m = q.m, k = (m - 1) / 2;
    AlphaKappa ak = alpha_kappa(m, d, p);
    Rational braces = 1;
    if (all_divisible(K, p)) {
        IntVec Kp(K.size());
        for (std::size_t i = 0; i < K.size(); ++i) Kp[i] = K[i] / p;
        int eps = epsilon(evaluate(q, to_big(Kp)), p);
        braces += eps * character(q, p) * Rational(ipow(BigInt(static_cast<long>(p)), k - 1)) + ak.kappa;
    }
    if (all_divisible(K, p * p)) braces += Rational(ipow(BigInt(static_cast<long>(p)), m - 2));
    return ak.alpha * braces;
}

Rational summed_isotropic_p2(const QuadraticForm& q, const IntVec& K, i64 p)
{
    check_p2_preconditions(q, 1, K, p);
    const int m = q.m, k = (m - 1) / 2;
    LocalConstants lc = local_constants(q, p);
    Rational braces = 1;
    if (all_divisible(K, p)) {
        IntVec Kp(K.size());
        for (std::size_t i = 0; i < K.size(); ++i) Kp[i] = K[i] / p;
        int eps = epsilon(evaluate(q, to_big(Kp)), p);
        braces += eps * lc.chi * Rational(ipow(BigInt(static_cast<long>(p)), k - 1)) + *lc.beta_p / lc.c_p;
    }
    if (all_divisible(K, p * p)) braces += Rational(ipow(BigInt(static_cast<long>(p)), m - 2));
    return lc.c_p * braces;
}

IsotropicSumReport compare_isotropic_sum(const QuadraticForm& q, int d, const IntVec& K, i64 p)
{
    IsotropicSumReport r;
    r.q_key = q.key();
    r.p = p;
    r.d = d;
    r.K = K;
    r.brute = brute_isotropic_sum_p2(q, d, K, p);
    Rational f = formula_isotropic_sum_p2(q, d, K, p);
    if (f.get_den() != 1) throw std::logic_error("isotropic sum formula is not integral");
    r.formula = f.get_num();
    r.agree = r.brute == r.formula;
    return r;
}

BigInt brute_isotropic_sum_p(const QuadraticForm& n, const SmallMatrix& A, i64 p)
{
    if (n.m != 4) throw std::invalid_argument("quaternary form required");
    if (divides(BigInt(static_cast<long>(p)), n.det_q)) throw std::domain_error("singular prime");
    const SmallMatrix& N = n.gram;
    std::vector<IntVec> cols;
    for (std::size_t j = 0; j < A.cols(); ++j) cols.push_back(A.col(j));
    BigInt count = 0;
    for_each_subspace(4, 2, p, [&](const std::vector<IntVec>& V, const std::vector<int>& piv) {
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j)
                if (md(bilinear(N, V[i], V[j]), p) != 0) return;
        for (auto& c : cols)
            if (!in_span_mod_p(V, piv, c, p)) return;
        ++count;
    });
    return count;
}

BigInt formula_isotropic_sum_p(const QuadraticForm& n, const SmallMatrix& A, i64 p)
{
    int chi = character(n, p);
    int r = rank_mod_p(A, p);
    if (r == 2) return 1;
    if (r == 1) return 1 + chi;
    if (r == 0) return BigInt((1 + chi) * (p + 1));
    throw std::invalid_argument("column space too large for an isotropic plane");
}

std::vector<std::pair<std::string, IntVec>> stratum_samples(const QuadraticForm& q, i64 p)
{
    if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
    const int m = q.m;
    std::vector<std::pair<std::string, IntVec>> out;
    // first vector of the box [0, bound)^m, coordinate 0 fastest, accepted by pred
    auto search = [&](i64 bound, const std::function<bool(const IntVec&)>& pred) -> std::optional<IntVec> {
        IntVec x(m, 0);
        for (;;) {
            int k = 0;
            while (k < m && ++x[k] == bound) x[k++] = 0;
            if (k == m) return std::nullopt;
            if (pred(x)) return x;
        }
    };
    auto nonzero_mod_p = [&](const IntVec& x) {
        for (i64 c : x)
            if (md(c, p) != 0) return true;
        return false;
    };
    if (auto K = search(p * p, [&](const IntVec& x) { return nonzero_mod_p(x) && md(evaluate(q, x), p * p) == 0; }))
        out.emplace_back("unit", *K);
    for (int eps : {1, -1, 0}) {
        auto K = search(p, [&](const IntVec& x) {
            if (!nonzero_mod_p(x)) return false;
            return legendre(BigInt(2 * evaluate(q, x)), p) == eps;
        });
        if (!K) continue;
        for (auto& c : *K) c *= p;
        out.emplace_back(eps == 1 ? "p,eps=+1" : eps == -1 ? "p,eps=-1" : "p,eps=0", *K);
    }
    out.emplace_back("p^2", IntVec(m, 0));
    IntVec K(m, 0);
    K[0] = p * p;
    out.emplace_back("p^2", K);
    return out;
}

}  // namespace automorph
