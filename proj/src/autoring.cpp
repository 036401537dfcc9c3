#include "automorph/autoring.hpp"

#include <stdexcept>

#include "automorph/theta.hpp"

namespace automorph {

namespace {

void bump(std::map<SmallMatrix, i64>& terms, const SmallMatrix& key, i64 c)
{
    i64& v = terms[key];
    v = checked_add(v, c);
    if (v == 0) terms.erase(key);
}

void bump(std::map<IntVec, Rational>& terms, const IntVec& key, const Rational& c)
{
    Rational& v = terms[key];
    v += c;
    if (sgn(v) == 0) terms.erase(key);
}

void require_size(const SimilaritySystem& sys, std::size_t h)
{
    if (sys.h() != h) throw std::invalid_argument("class count mismatch");
}

}  // namespace

CosetSum coset_sum(const SimilaritySystem& sys, std::size_t i, std::size_t j, const std::vector<SmallMatrix>& ms)
{
    CosetSum s{i, j, {}};
    const UnitGroup& E = unit_group(*sys.forms[i]);
    for (const auto& A : ms) bump(s.terms, canonical_left(E, A), 1);
    return s;
}

CosetSum add(const CosetSum& x, const CosetSum& y)
{
    if (x.source != y.source || x.target != y.target) throw std::invalid_argument("class index mismatch");
    CosetSum s = x;
    for (const auto& [k, c] : y.terms) bump(s.terms, k, c);
    return s;
}

CosetSum multiply(const SimilaritySystem& sys, const CosetSum& x, const CosetSum& y)
{
    if (x.target != y.source) throw std::invalid_argument("class index mismatch");
    CosetSum s{x.source, y.target, {}};
    const UnitGroup& E = unit_group(*sys.forms[x.source]);
    for (const auto& [A, a] : x.terms)
        for (const auto& [B, b] : y.terms) bump(s.terms, canonical_left(E, A * B), checked_mul(a, b));
    return s;
}

RingElement zero_element(const SimilaritySystem& sys)
{
    RingElement x{sys.h(), {}};
    for (std::size_t i = 0; i < sys.h(); ++i)
        for (std::size_t j = 0; j < sys.h(); ++j) x.entries.push_back(CosetSum{i, j, {}});
    return x;
}

RingElement scalar_element(const SimilaritySystem& sys, i64 n)
{
    RingElement x = zero_element(sys);
    for (std::size_t i = 0; i < sys.h(); ++i) {
        const int m = sys.forms[i]->m;
        SmallMatrix D = SmallMatrix::identity(m);
        for (int k = 0; k < m; ++k) D(k, k) = n;
        x.at(i, i) = coset_sum(sys, i, i, {D});
    }
    return x;
}

RingElement identity_element(const SimilaritySystem& sys) { return scalar_element(sys, 1); }

RingElement add(const RingElement& x, const RingElement& y)
{
    if (x.h != y.h) throw std::invalid_argument("class count mismatch");
    RingElement z = x;
    for (std::size_t k = 0; k < z.entries.size(); ++k) z.entries[k] = add(x.entries[k], y.entries[k]);
    return z;
}

RingElement multiply(const SimilaritySystem& sys, const RingElement& x, const RingElement& y)
{
    if (x.h != y.h) throw std::invalid_argument("class count mismatch");
    require_size(sys, x.h);
    RingElement z = zero_element(sys);
    for (std::size_t i = 0; i < x.h; ++i)
        for (std::size_t k = 0; k < x.h; ++k)
            for (std::size_t j = 0; j < x.h; ++j) z.at(i, k) = add(z.at(i, k), multiply(sys, x.at(i, j), y.at(j, k)));
    return z;
}

RingElement T_star(const SimilaritySystem& sys, i64 p, int iota)
{
    if (sys.forms.empty()) throw std::invalid_argument("empty system");
    if (divides(BigInt(static_cast<long>(p)), sys.forms[0]->det_q)) throw std::domain_error("singular prime");
    const i64 a = ipow(p, static_cast<unsigned>(iota));
    RingElement x = zero_element(sys);
    for (std::size_t i = 0; i < sys.h(); ++i)
        for (std::size_t j = 0; j < sys.h(); ++j)
        {
            auto ms = primitive_filter(automorph_matrices(*sys.forms[i], *sys.forms[j], a)).primitive;
            x.at(i, j) = coset_sum(sys, i, j, coset_decompose(ms, unit_group(*sys.forms[i]), CosetSide::Left).representatives);
        }
    return x;
}

RepVector zero_rep(const SimilaritySystem& sys)
{
    RepVector v;
    v.parts.resize(sys.h());
    return v;
}

RepVector rep_vector(const SimilaritySystem& sys, i64 a)
{
    RepVector v = zero_rep(sys);
    if (a <= 0) return v;
    for (std::size_t j = 0; j < sys.h(); ++j) {
        const auto& q = *sys.forms[j];
        require_positive_definite(q);
        const UnitGroup& E = unit_group(q);
        for (const auto& L : representations(q, a)) {
            IntVec key = canonical_orbit_vector(E, L);
            if (key != L) continue;  // one representative per orbit
            v.parts[j][key] = Rational(1, static_cast<long>(stabilizer_order(q, key)));
        }
    }
    return v;
}

RepVector add(const RepVector& x, const RepVector& y)
{
    if (x.parts.size() != y.parts.size()) throw std::invalid_argument("class count mismatch");
    RepVector z = x;
    for (std::size_t j = 0; j < y.parts.size(); ++j)
        for (const auto& [L, c] : y.parts[j]) bump(z.parts[j], L, c);
    return z;
}

RepVector scale(const RepVector& x, const Rational& s)
{
    RepVector z;
    z.parts.resize(x.parts.size());
    if (sgn(s) == 0) return z;
    for (std::size_t j = 0; j < x.parts.size(); ++j)
        for (const auto& [L, c] : x.parts[j]) z.parts[j][L] = c * s;
    return z;
}

RepVector act(const SimilaritySystem& sys, const RingElement& x, const RepVector& v)
{
    require_size(sys, x.h);
    if (v.parts.size() != x.h) throw std::invalid_argument("class count mismatch");
    RepVector z = zero_rep(sys);
    for (std::size_t i = 0; i < x.h; ++i) {
        require_positive_definite(*sys.forms[i]);
        const UnitGroup& E = unit_group(*sys.forms[i]);
        for (std::size_t j = 0; j < x.h; ++j)
            for (const auto& [A, a] : x.at(i, j).terms)
                for (const auto& [L, c] : v.parts[j])
                    bump(z.parts[i], canonical_orbit_vector(E, mat_vec(A, L)), c * static_cast<long>(a));
    }
    return z;
}

i64 pi(const CosetSum& x)
{
    i64 s = 0;
    for (const auto& [k, c] : x.terms) s = checked_add(s, c);
    return s;
}

SmallMatrix pi(const RingElement& x)
{
    SmallMatrix M(x.h, x.h);
    for (std::size_t i = 0; i < x.h; ++i)
        for (std::size_t j = 0; j < x.h; ++j) M(i, j) = pi(x.at(i, j));
    return M;
}

std::vector<Rational> pi(const RepVector& v)
{
    std::vector<Rational> s(v.parts.size(), Rational(0));
    for (std::size_t j = 0; j < v.parts.size(); ++j)
        for (const auto& [L, c] : v.parts[j]) s[j] += c;
    return s;
}

CommutationReport verify_commutation(const SimilaritySystem& sys, i64 p, i64 a_max)
{
    if (sys.forms.empty()) throw std::invalid_argument("empty system");
    const auto& q = *sys.forms[0];
    require_positive_definite(q);
    const LocalConstants lc = local_constants(q, p);
    const int m = q.m, iota = iota_for(m), k = m / 2;
    const i64 pi_ = ipow(p, static_cast<unsigned>(iota));
    const std::size_t h = sys.h();

    CommutationReport rep{p, m, {}, true};
    const RingElement T = T_star(sys, p, iota);
    const RingElement Pp = scalar_element(sys, p), Pp2 = scalar_element(sys, p * p);
    const Rational c_inv = 1 / lc.c_p;
    const Rational beta = lc.beta_p.value_or(Rational(0));
    const Rational chi_pk = Rational(lc.chi) * Rational(ipow(BigInt(static_cast<long>(p)), static_cast<unsigned>(k - 1)));

    const ThetaTable table = theta_table(sys, pi_ * a_max);
    const RatMatrix anz = anzahl_matrix(sys, p, iota).entries;

    for (i64 a = 1; a <= a_max; ++a) {
        const RepVector Ra = rep_vector(sys, a);
        RepVector lhs = rep_vector(sys, pi_ * a), rhs;
        std::vector<Rational> theta_lhs = table.normalized(pi_ * a);
        const std::vector<Rational> ra = table.normalized(a);
        if (m % 2 == 1) {
            const Rational mid = chi_pk * Rational(epsilon(BigInt(static_cast<long>(a)), p));
            lhs = add(lhs, scale(act(sys, Pp, Ra), mid));
            const Rational tail(ipow(BigInt(static_cast<long>(p)), static_cast<unsigned>(m - 2)));
            const bool sq = a % (p * p) == 0;
            if (sq) lhs = add(lhs, scale(act(sys, Pp2, rep_vector(sys, a / (p * p))), tail));
            rhs = scale(add(act(sys, T, Ra), scale(act(sys, Pp, Ra), -beta)), c_inv);
            const std::vector<Rational> rs = sq ? table.normalized(a / (p * p)) : std::vector<Rational>(h, Rational(0));
            for (std::size_t j = 0; j < h; ++j) theta_lhs[j] += mid * ra[j] + tail * rs[j];
        } else {
            const bool dv = a % p == 0;
            if (dv) lhs = add(lhs, scale(act(sys, Pp, rep_vector(sys, a / p)), chi_pk));
            rhs = scale(act(sys, T, Ra), c_inv);
            if (dv) {
                const auto rs = table.normalized(a / p);
                for (std::size_t j = 0; j < h; ++j) theta_lhs[j] += chi_pk * rs[j];
            }
        }
        std::vector<Rational> anz_rhs(h, Rational(0));
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) anz_rhs[i] += anz(i, j) * ra[j];
            anz_rhs[i] = c_inv * (anz_rhs[i] - (m % 2 == 1 ? beta * ra[i] : Rational(0)));
        }
        CommutationRow row;
        row.a = a;
        row.orbit_ok = lhs == rhs;
        row.coefficient_ok = pi(lhs) == theta_lhs && pi(rhs) == anz_rhs && theta_lhs == anz_rhs;
        for (const auto& part : lhs.parts) row.lhs_orbits += part.size();
        for (const auto& part : rhs.parts) row.rhs_orbits += part.size();
        rep.ok = rep.ok && row.orbit_ok && row.coefficient_ok;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace automorph
