#include "automorph/classes.hpp"

#include "automorph/isosum.hpp"

namespace automorph {

ReducedForm reduce_form(const QuadraticForm& q)
{
    const int m = q.m;
    SmallMatrix G = q.gram, U = SmallMatrix::identity(m);
    auto apply = [&](int i, int j, i64 c) {  // e_i -= c e_j
        for (int r = 0; r < m; ++r) U(r, i) -= c * U(r, j);
        for (int r = 0; r < m; ++r) G(r, i) -= c * G(r, j);
        for (int r = 0; r < m; ++r) G(i, r) -= c * G(j, r);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                if (i == j || G(j, j) == 0) continue;
                // nearest integer to G_ij / G_jj, ties toward zero
                i64 num = G(i, j), den = G(j, j);
                i64 c = floor_div(2 * num + den, 2 * den);
                if (2 * std::abs(num) == den) c = 0;
                if (c == 0) continue;
                i64 before = G(i, i);
                i64 after = before - 2 * c * G(i, j) + c * c * G(j, j);
                if (after >= before) continue;
                apply(i, j, c);
                changed = true;
            }
    }
    // sort by norm, then make off-diagonal entries of the first row nonpositive
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return G(x, x) < G(y, y); });
    SmallMatrix P(m, m);
    for (int c = 0; c < m; ++c) P(order[c], c) = 1;
    U = U * P;
    G = congruent(G, P);
    for (int c = 1; c < m; ++c)
        if (G(0, c) > 0) {
            for (int r = 0; r < m; ++r) U(r, c) = -U(r, c);
            for (int r = 0; r < m; ++r) {
                G(r, c) = -G(r, c);
                G(c, r) = -G(c, r);
            }
        }
    return {form_from_gram(G), U};
}

static std::vector<i64> theta_signature(const QuadraticForm& q)
{
    i64 n = 0;
    for (int i = 0; i < q.m; ++i) n = std::max(n, q.gram(i, i) / 2);
    return representation_counts(q, std::min<i64>(n, 64));
}

std::optional<SmallMatrix> is_equivalent(const QuadraticForm& q, const QuadraticForm& q2)
{
    require_positive_definite(q);
    require_positive_definite(q2);
    if (q.m != q2.m || q.det_q != q2.det_q) return std::nullopt;
    return find_automorph(q, q2, 1);
}

std::vector<i64> default_primes(const QuadraticForm& q, int count)
{
    std::vector<i64> out;
    for (i64 p = 3; static_cast<int>(out.size()) < count; p += 2)
        if (is_prime(p) && !divides(BigInt(static_cast<long>(p)), q.det_q)) out.push_back(p);
    return out;
}

int iota_for(int m) { return m % 2 ? 2 : 1; }

std::vector<QuadraticForm> neighbours(const QuadraticForm& q, i64 p)
{
    std::vector<SmallMatrix> cosets;
    if (q.m % 2) {
        for (int d = 1; d <= (q.m - 1) / 2; ++d) {
            auto c = isotropic_cosets_p2(q, d, p);
            cosets.insert(cosets.end(), c.begin(), c.end());
        }
    } else {
        cosets = isotropic_cosets_p(q, p);
    }
    const i64 div = q.m % 2 ? p * p : p;
    std::vector<QuadraticForm> out;
    for (const auto& M : cosets) {
        SmallMatrix G = congruent(q.gram, M);
        for (std::size_t r = 0; r < G.rows(); ++r)
            for (std::size_t c = 0; c < G.cols(); ++c) G(r, c) /= div;
        out.push_back(reduce_form(form_from_gram(G)).form);
    }
    return out;
}

namespace {
struct ClosureState {
    SimilaritySystem sys;
    std::vector<std::vector<i64>> signatures;

    std::optional<std::size_t> find(const QuadraticForm& q, const std::vector<i64>& sig) const
    {
        for (std::size_t i = 0; i < sys.forms.size(); ++i) {
            if (sys.forms[i]->det_q != q.det_q) continue;
            const auto& s = signatures[i];
            std::size_t n = std::min(s.size(), sig.size());
            if (!std::equal(s.begin(), s.begin() + n, sig.begin())) continue;
            if (is_equivalent(*sys.forms[i], q)) return i;
        }
        return std::nullopt;
    }
    bool add(const QuadraticForm& q)
    {
        auto sig = theta_signature(q);
        if (find(q, sig)) return false;
        sys.forms.push_back(std::make_shared<QuadraticForm>(q));
        sys.unit_orders.push_back(static_cast<i64>(unit_group(q).order()));
        signatures.push_back(std::move(sig));
        return true;
    }
};
}  // namespace

SimilaritySystem similarity_system_seeded(const std::vector<QuadraticForm>& seeds, const std::vector<i64>& primes_in)
{
    if (seeds.empty()) throw std::invalid_argument("no seed form");
    const QuadraticForm& q = seeds.front();
    for (const auto& s : seeds) require_positive_definite(s);
    std::vector<i64> primes = primes_in.empty() ? default_primes(q) : primes_in;
    for (i64 p : primes) {
        if (p == 2 || !is_prime(p)) throw std::domain_error("even prime unsupported");
        if (divides(BigInt(static_cast<long>(p)), q.det_q)) throw std::domain_error("singular prime");
    }
    ClosureState st;
    st.sys.seed = std::make_shared<QuadraticForm>(q);
    st.sys.primes_used = primes;
    for (const auto& s : seeds) st.add(s);
    for (std::size_t i = 0; i < st.sys.forms.size(); ++i) {
        QuadraticForm cur = *st.sys.forms[i];
        for (i64 p : primes)
            for (const auto& nb : neighbours(cur, p)) st.add(nb);
    }
    st.sys.seed_index = 0;
    return st.sys;
}

SimilaritySystem similarity_system(const QuadraticForm& q, const std::vector<i64>& primes)
{
    return similarity_system_seeded({q}, primes);
}

std::optional<ClassMatch> locate_class(const SimilaritySystem& sys, const QuadraticForm& q)
{
    for (std::size_t i = 0; i < sys.forms.size(); ++i) {
        if (sys.forms[i]->det_q != q.det_q) continue;
        if (auto U = is_equivalent(*sys.forms[i], q)) return ClassMatch{i, *U};
    }
    return std::nullopt;
}

AnzahlMatrix anzahl_matrix(const SimilaritySystem& sys, i64 p, int iota)
{
    if (sys.forms.empty()) throw std::invalid_argument("empty system");
    const int m = sys.forms[0]->m;
    if (iota != iota_for(m)) throw std::invalid_argument("iota does not match the parity of m");
    if (divides(BigInt(static_cast<long>(p)), sys.forms[0]->det_q)) throw std::domain_error("singular prime");
    const std::size_t h = sys.h();
    const i64 a = ipow(p, static_cast<unsigned>(iota));
    AnzahlMatrix A{p, iota, RatMatrix(h, h)};
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < h; ++j) {
            auto split = primitive_filter(automorph_matrices(*sys.forms[i], *sys.forms[j], a));
            A.entries(i, j) = ratio(static_cast<long>(split.primitive.size()), static_cast<long>(sys.unit_orders[i]));
        }
    return A;
}

}  // namespace automorph
