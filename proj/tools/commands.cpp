#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "automorph/autoring.hpp"
#include "automorph/clifford.hpp"
#include "automorph/isosum.hpp"
#include "automorph/parallel.hpp"
#include "automorph/shimlift.hpp"
#include "automorph/theta.hpp"

namespace automorph::cli {

using nlohmann::json;

namespace {

/* verification failure; the message names the statement that failed */
struct Failure {
    std::string statement;
};

json big(const BigInt& x)
{
    if (x.fits_slong_p()) return json(static_cast<long>(x.get_si()));
    return json(x.get_str());
}

json rat(const Rational& x)
{
    if (x.get_den() == 1) return big(x.get_num());
    return json(x.get_str());
}

json mat(const IntMatrix& M)
{
    json rows = json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(big(M(i, j)));
        rows.push_back(r);
    }
    return rows;
}

json mat(const SmallMatrix& M) { return mat(to_big(M)); }

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) {
        if (c == '"') r += '"';
        r += c;
    }
    return r + "\"";
}

std::string join(const IntVec& v, char sep = ',')
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? std::string(1, sep) : "") << v[i];
    return os.str();
}

std::string lower_bool(bool b) { return b ? "true" : "false"; }

IntMatrix parse_rows(const std::string& text)
{
    std::vector<std::vector<BigInt>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        std::vector<BigInt> r;
        std::stringstream rs(row);
        std::string cell;
        while (std::getline(rs, cell, ',')) {
            std::erase(cell, ' ');
            try {
                r.emplace_back(cell);
            } catch (const std::invalid_argument&) {
                throw UsageError("bad matrix entry '" + cell + "'");
            }
        }
        rows.push_back(r);
    }
    if (rows.empty()) throw UsageError("empty matrix");
    IntMatrix M(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw UsageError("ragged matrix");
        for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
    }
    return M;
}

void check_primes(const QuadraticForm& q, const std::vector<i64>& primes)
{
    if (primes.empty()) throw UsageError("at least one --prime is required");
    for (i64 p : primes) {
        if (p < 3 || !is_prime(p)) throw UsageError("primes must be odd primes, got " + std::to_string(p));
        if (divides(BigInt(static_cast<long>(p)), q.det_q))
            throw UsageError("p = " + std::to_string(p) + " divides det q = " + q.det_q.get_str() + " (singular prime)");
    }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

/* ---- subcommands ---- */

int cmd_form_info(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    json j = form_to_json(q);
    j["key"] = q.key();
    j["det"] = big(q.det_q);
    j["level"] = big(q.level);
    j["positive_definite"] = is_positive_definite(q);
    if (q.is_ternary()) j["delta"] = big(q.Delta);
    if (cfg.format == "text") {
        out << "form " << q.key() << "\nm " << q.m << "\ndet " << q.det_q << '\n';
        if (q.is_ternary()) out << "delta " << q.Delta << '\n';
        out << "level " << q.level << "\npositive_definite " << lower_bool(is_positive_definite(q)) << '\n';
    } else {
        emit(out, j);
    }
    return 0;
}

int cmd_reps(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (cfg.a.empty()) throw UsageError("at least one --a is required");
    json rows = json::array();
    if (cfg.format == "csv") out << "a,r\n";
    for (i64 a : cfg.a) {
        if (a < 0) throw UsageError("a must be nonnegative");
        auto vs = representations(q, a);
        std::sort(vs.begin(), vs.end());
        if (cfg.format == "csv") {
            out << a << ',' << vs.size() << '\n';
            continue;
        }
        json r{{"a", a}, {"r", vs.size()}};
        if (cfg.list) r["vectors"] = vs;
        rows.push_back(r);
    }
    if (cfg.format != "csv") emit(out, json{{"form", q.key()}, {"rows", rows}});
    return 0;
}

int cmd_classes(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    for (i64 p : cfg.primes) check_primes(q, {p});
    const SimilaritySystem sys = similarity_system(q, cfg.primes);
    json forms = json::array();
    for (const auto& f : sys.forms) forms.push_back(form_to_json(*f));
    emit(out, json{{"seed", form_to_json(*sys.seed)},
                   {"forms", forms},
                   {"unit_orders", sys.unit_orders},
                   {"primes_used", sys.primes_used}});
    return 0;
}

int cmd_isosum(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    check_primes(q, cfg.primes);
    if (q.m % 2 == 0 || q.m < 3) throw UsageError("isotropic sums need an odd number of variables >= 3");
    const int k = (q.m - 1) / 2;
    if (cfg.d != 0 && (cfg.d < 1 || cfg.d > k)) throw UsageError("d must lie in 1.." + std::to_string(k));
    if (!cfg.K.empty() && cfg.K.size() != static_cast<std::size_t>(q.m)) throw UsageError("K needs m entries");

    std::vector<IsotropicSumReport> rows;
    for (i64 p : cfg.primes) {
        std::vector<IntVec> Ks;
        if (!cfg.K.empty()) {
            if (!divides(BigInt(static_cast<long>(p * p)), evaluate(q, to_big(cfg.K))))
                throw UsageError("q(K) must vanish mod p^2");
            Ks.push_back(cfg.K);
        } else {
            for (auto& [label, K] : stratum_samples(q, p)) Ks.push_back(K);
        }
        for (int d = 1; d <= k; ++d) {
            if (cfg.d != 0 && d != cfg.d) continue;
            for (const auto& K : Ks) rows.push_back(compare_isotropic_sum(q, d, K, p));
        }
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.agree;
    if (cfg.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back(json{{"q-key", r.q_key}, {"p", r.p}, {"d", r.d}, {"K", r.K}, {"brute", big(r.brute)}, {"formula", big(r.formula)}, {"agree", r.agree}});
        emit(out, arr);
    } else {
        out << "q-key,p,d,K,brute,formula,agree\n";
        for (const auto& r : rows)
            out << csv_field(r.q_key) << ',' << r.p << ',' << r.d << ',' << csv_field(join(r.K)) << ',' << r.brute << ',' << r.formula << ','
                << lower_bool(r.agree) << '\n';
    }
    if (!ok) throw Failure{"isotropic sum formula"};
    return 0;
}

int cmd_theta_coeffs(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (cfg.n_max < 1) throw UsageError("--n-max must be >= 1");
    const auto r = theta_coeffs(q, cfg.n_max);
    if (cfg.format == "csv") {
        out << "n,r\n";
        for (std::size_t n = 0; n < r.size(); ++n) out << n << ',' << r[n] << '\n';
    } else {
        emit(out, json{{"form", q.key()}, {"n_max", cfg.n_max}, {"r", r}});
    }
    return 0;
}

int cmd_theta_eichler(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    check_primes(q, cfg.primes);
    if (cfg.n_max < 1) throw UsageError("--n-max must be >= 1");
    const SimilaritySystem sys = similarity_system(q);
    json arr = json::array();
    bool ok = true;
    for (i64 p : cfg.primes) {
        auto rep = verify_eichler(sys, p, cfg.n_max);
        Rational eig;
        bool gen = verify_generic_eigen(sys, p, cfg.n_max, &eig);
        ok = ok && rep.ok && gen;
        json row{{"p", p}, {"n_max", cfg.n_max}, {"h", sys.h()}, {"ok", rep.ok}, {"generic_eigenvalue", rat(eig)}, {"generic_ok", gen}};
        row["first_failure"] = rep.first_failure ? json(*rep.first_failure) : json(nullptr);
        arr.push_back(row);
    }
    emit(out, arr);
    if (!ok) throw Failure{"Eichler commutation relation"};
    return 0;
}

int cmd_theta_euler(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (cfg.n_max < 1) throw UsageError("--n-max must be >= 1");
    if (cfg.a.empty()) throw UsageError("at least one --a is required");
    const SimilaritySystem sys = similarity_system(q);
    const i64 p_limit = cfg.p_limit > 0 ? cfg.p_limit : cfg.n_max;
    i64 a_top = *std::max_element(cfg.a.begin(), cfg.a.end());
    const bool odd = q.m % 2 == 1;
    const ThetaTable table = theta_table(sys, odd ? cfg.n_max * cfg.n_max * a_top : cfg.n_max * a_top);
    json arr = json::array();
    bool ok = true;
    if (cfg.format == "csv") out << "a,n,predicted,enumerated,agree\n";
    for (i64 a : cfg.a) {
        if (a < 1) throw UsageError("a must be positive");
        const DirichletTable t = euler_expand(sys, a, p_limit, cfg.n_max);
        for (const auto& [n, v] : t.coeffs) {
            const RatVec e = table.normalized(odd ? n * n * a : n * a);
            const bool agree = v == e;
            ok = ok && agree;
            json pv = json::array(), ev = json::array();
            for (const auto& x : v) pv.push_back(rat(x));
            for (const auto& x : e) ev.push_back(rat(x));
            if (cfg.format == "csv") {
                out << a << ',' << n << ',' << csv_field(pv.dump()) << ',' << csv_field(ev.dump()) << ',' << lower_bool(agree) << '\n';
            } else {
                arr.push_back(json{{"a", a}, {"n", n}, {"predicted", pv}, {"enumerated", ev}, {"agree", agree}});
            }
        }
    }
    if (cfg.format != "csv") emit(out, arr);
    if (!ok) throw Failure{"Euler product expansion"};
    return 0;
}

int cmd_theta_shimura(const RunConfig& cfg, std::ostream& out)
{
    const i64 m_max = cfg.m_max > 0 ? cfg.m_max : 99;
    const std::vector<i64> as = cfg.a.empty() ? std::vector<i64>{1, 2, 3, 5, 6} : cfg.a;
    const ShimuraSumReport rep = shimura_sum_check(m_max, as);
    json rows = json::array();
    for (const auto& r : rep.rows) rows.push_back(json{{"m", r.m}, {"a", r.a}, {"lhs", rat(r.lhs)}, {"rhs", rat(r.rhs)}, {"agree", r.agree}});
    emit(out, json{{"kappa", rat(rep.kappa)}, {"ok", rep.ok}, {"rows", rows}});
    if (!rep.ok) throw Failure{"Shimura lift identity for three squares"};
    return 0;
}

int cmd_clifford_check(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (!q.is_ternary()) throw UsageError("Clifford checks need a ternary form");
    json j{{"form", q.key()}, {"delta", big(q.Delta)}};
    bool ok = true;
    auto record = [&](const char* name, bool v) {
        j[name] = v;
        ok = ok && v;
    };
    bool t_ok = true;
    try {
        (void)special_t(q);
    } catch (const std::logic_error&) {
        t_ok = false;
    }
    record("t_central_square", t_ok);
    const EvenNormForm nf = even_norm_form(q);
    record("det_N", det(nf.N) == q.Delta * q.Delta);
    record("N_inverse", to_rational(nf.N) * nf.N_inv == RatMatrix::identity(4));
    const IntMatrix T = et_embedding(q);
    record("N_of_T", congruent(nf.N, T) == scale(q.Q, q.Delta));

    // norm multiplicativity and the quadratic relation on random even elements
    auto alg = clifford_algebra(q);
    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    std::uniform_int_distribution<int> dist(-5, 5);
    const i64 samples = cfg.count > 0 ? cfg.count : 50;
    bool mult = true, quad = true;
    for (i64 s = 0; s < samples; ++s) {
        std::vector<BigInt> a(4), b(4);
        for (auto& x : a) x = dist(rng);
        for (auto& x : b) x = dist(rng);
        CliffordEven x = CliffordEven::from_coords(alg, a), y = CliffordEven::from_coords(alg, b);
        NormTrace nx = norm_trace(x), ny = norm_trace(y), nxy = norm_trace(even_multiply(x, y));
        mult = mult && nxy.norm == nx.norm * ny.norm;
        CliffordElement xf = x.full();
        CliffordElement rel = clifford_multiply(xf, xf) - nx.trace * xf + nx.norm * CliffordElement::basis(alg, 0);
        quad = quad && rel == CliffordElement::zero(alg);
    }
    record("norm_multiplicative", mult);
    record("quadratic_relation", quad);
    j["samples"] = samples;
    j["ok"] = ok;
    j["N"] = mat(nf.N);
    emit(out, j);
    if (!ok) throw Failure{"Clifford algebra identities for the special element and the norm form"};
    return 0;
}

int cmd_clifford_lift(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (!q.is_ternary()) throw UsageError("Clifford lifts need a ternary form");
    if (cfg.A.empty()) throw UsageError("--A is required");
    const IntMatrix A = parse_rows(cfg.A);
    if (A.rows() != 3 || A.cols() != 3) throw UsageError("A must be 3x3");
    if (is_zero(det(A))) throw UsageError("A must be nonsingular");
    json j{{"A", mat(A)}};
    bool ok = true;
    if (cfg.primes.empty()) {
        const QuadraticForm q2 = image_form(q, A);
        const LiftMatrix L = phi_lift(q, A);
        j["target"] = form_to_json(q2);
        j["phi"] = mat(L.phi);
        const bool iso = congruent(even_norm_form(q).N, L.phi) == even_norm_form(q2).N;
        j["isometry"] = iso;
        ok = iso;
    } else {
        if (cfg.primes.size() != 1) throw UsageError("exactly one --prime for a lift");
        const i64 p = cfg.primes[0];
        check_primes(q, {p});
        const LiftMatrix L = psi_lift(q, A, p);
        const QuadraticForm q2 = automorph_target(q, A, p * p);
        j["p"] = p;
        j["target"] = form_to_json(q2);
        j["phi"] = mat(L.phi);
        j["psi"] = mat(*L.psi);
        j["z"] = mat(L.z);
        const BigInt P(static_cast<long>(p));
        const bool iso = congruent(even_norm_form(q).N, *L.psi) == scale(even_norm_form(q2).N, BigInt(P * P));
        const bool z0 = is_zero_mod(L.z, P);
        j["isometry"] = iso;
        j["z_vanishes_mod_p"] = z0;
        j["rank_mod_p"] = rank_mod_p(to_small(*L.psi), p);
        ok = iso && z0;
    }
    emit(out, j);
    if (!ok) throw Failure{"lift of the automorph to the even Clifford algebra"};
    return 0;
}

int cmd_shimura_verify(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    if (!q.is_ternary()) throw UsageError("shimura verify needs a ternary form");
    check_primes(q, cfg.primes);
    const SimilaritySystem tern = similarity_system(q);
    const SimilaritySystem quat = norm_system(tern);
    json arr = json::array();
    std::string failed;
    for (i64 p : cfg.primes) {
        const ClassCountReport cc = verify_class_count(tern, quat, p);
        const CoveringReport cov = verify_covering(tern, quat, p);
        json fibers = json::object();
        for (const auto& [k, v] : cov.fibers) fibers[k] = v;
        arr.push_back(json{{"p", p},
                           {"chi", cc.chi},
                           {"lhs", rat(cc.lhs)},
                           {"rhs", rat(cc.rhs)},
                           {"equal", cc.ok},
                           {"lhs_count", big(cc.lhs_count)},
                           {"rhs_count", big(cc.rhs_count)},
                           {"h", tern.h()},
                           {"H", quat.h()},
                           {"fibers", fibers},
                           {"fiber_sizes", cov.fiber_sizes_ok},
                           {"disjoint", cov.disjoint},
                           {"exhaustive", cov.exhaustive},
                           {"rank_checks", cov.rank_ok}});
        if (!cc.ok && failed.empty()) failed = "class count identity between ternary and quaternary automorphs";
        if (!cov.ok() && failed.empty()) failed = "two-fold covering of ternary classes by quaternary classes";
    }
    emit(out, arr.size() == 1 ? arr[0] : arr);
    if (!failed.empty()) throw Failure{failed};
    return 0;
}

int cmd_autoring_verify(const RunConfig& cfg, std::ostream& out)
{
    const QuadraticForm q = resolve_form(cfg);
    check_primes(q, cfg.primes);
    const i64 a_max = cfg.a_max > 0 ? cfg.a_max : 10;
    const SimilaritySystem sys = similarity_system(q);
    json arr = json::array();
    bool ok = true;
    if (cfg.format == "csv") out << "p,a,orbit,coefficient,pass\n";
    for (i64 p : cfg.primes) {
        const CommutationReport rep = verify_commutation(sys, p, a_max);
        ok = ok && rep.ok;
        for (const auto& r : rep.rows) {
            const bool pass = r.orbit_ok && r.coefficient_ok;
            if (cfg.format == "csv") {
                out << p << ',' << r.a << ',' << lower_bool(r.orbit_ok) << ',' << lower_bool(r.coefficient_ok) << ',' << (pass ? "pass" : "fail") << '\n';
            } else {
                arr.push_back(json{{"p", p},
                                   {"a", r.a},
                                   {"orbit", r.orbit_ok},
                                   {"coefficient", r.coefficient_ok},
                                   {"lhs_orbits", r.lhs_orbits},
                                   {"rhs_orbits", r.rhs_orbits},
                                   {"result", pass ? "pass" : "fail"}});
            }
        }
    }
    if (cfg.format != "csv") emit(out, arr);
    if (!ok) throw Failure{"orbit commutation relation in the automorph class ring"};
    return 0;
}

/* fill options the user did not pass from the JSON config */
void apply_config(CLI::App& leaf, RunConfig& cfg)
{
    if (cfg.config.empty()) return;
    std::ifstream in(cfg.config);
    if (!in) throw UsageError("cannot read config " + cfg.config);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    auto unset = [&](const std::string& name) {
        auto* opt = leaf.get_option_no_throw("--" + name);
        return opt != nullptr && opt->count() == 0;
    };
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            const json& v = it.value();
            if (!unset(key)) continue;
            if (key == "form") cfg.form = v.is_string() ? v.get<std::string>() : v.dump();
            else if (key == "q0") cfg.q0 = v.get<std::string>();
            else if (key == "format") cfg.format = v.get<std::string>();
            else if (key == "prime") cfg.primes = v.is_array() ? v.get<std::vector<i64>>() : std::vector<i64>{v.get<i64>()};
            else if (key == "a") cfg.a = v.is_array() ? v.get<std::vector<i64>>() : std::vector<i64>{v.get<i64>()};
            else if (key == "K") cfg.K = v.get<std::vector<i64>>();
            else if (key == "n-max") cfg.n_max = v.get<i64>();
            else if (key == "a-max") cfg.a_max = v.get<i64>();
            else if (key == "m-max") cfg.m_max = v.get<i64>();
            else if (key == "p-limit") cfg.p_limit = v.get<i64>();
            else if (key == "d") cfg.d = v.get<int>();
            else if (key == "threads") cfg.threads = v.get<int>();
            else if (key == "count") cfg.count = v.get<i64>();
            else if (key == "seed") cfg.seed = v.get<i64>();
            else if (key == "A") cfg.A = v.get<std::string>();
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
}

}  // namespace

json form_to_json(const QuadraticForm& q) { return json{{"m", q.m}, {"q0", mat(q.q0)}}; }

QuadraticForm form_from_json(const json& j)
{
    if (!j.is_object() || !j.contains("m") || !j.contains("q0")) throw UsageError("form descriptor needs m and q0");
    const int m = j.at("m").get<int>();
    const json& rows = j.at("q0");
    if (m < 1 || !rows.is_array() || rows.size() != static_cast<std::size_t>(m)) throw UsageError("q0 must have m rows");
    IntMatrix q0(m, m);
    for (int i = 0; i < m; ++i) {
        const json& r = rows[i];
        // full rows or the upper triangle only
        if (r.size() == static_cast<std::size_t>(m)) {
            for (int k = 0; k < m; ++k) {
                i64 v = r[k].get<i64>();
                if (k < i && v != 0) throw UsageError("q0 must be upper triangular");
                q0(i, k) = static_cast<long>(v);
            }
        } else if (r.size() == static_cast<std::size_t>(m - i)) {
            for (int k = i; k < m; ++k) q0(i, k) = static_cast<long>(r[k - i].get<i64>());
        } else {
            throw UsageError("q0 row " + std::to_string(i) + " has the wrong length");
        }
    }
    return make_form(q0);
}

QuadraticForm resolve_form(const RunConfig& cfg)
{
    if (!cfg.q0.empty() && !cfg.form.empty()) throw UsageError("give either --form or --q0");
    if (!cfg.q0.empty()) {
        try {
            return parse_upper_triangle(cfg.q0);
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(std::string("bad --q0: ") + e.what());
        }
    }
    if (cfg.form.empty()) throw UsageError("a form is required (--form or --q0)");
    const std::string& f = cfg.form;
    try {
        if (std::filesystem::is_regular_file(f)) {
            std::ifstream in(f);
            return form_from_json(json::parse(in));
        }
        if (f.front() == '{') return form_from_json(json::parse(f));
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad form descriptor: ") + e.what());
    }
    std::string name = std::filesystem::path(f).filename().string();
    if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
    if (name == "3squares") return diagonal_form({1, 1, 1});
    if (name == "4squares-norm") return diagonal_form({1, 1, 1, 1});
    throw UsageError("unknown form '" + f + "' (built-ins: 3squares, 4squares-norm)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"automorphs, theta series and Clifford lifts of integral quadratic forms", "automorph"};
    app.require_subcommand(1);
    std::function<int()> action;
    CLI::App* leaf = nullptr;

    auto common = [&](CLI::App* sub, std::function<int()> fn) {
        sub->add_option("--form", cfg.form, "built-in name, JSON file or inline JSON");
        sub->add_option("--q0", cfg.q0, "upper triangle rows, e.g. \"1,0,0;1,0;1\"");
        sub->add_option("--config", cfg.config, "JSON config; flags win");
        sub->add_option("--threads", cfg.threads, "parallelism degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->callback([&, sub, fn] {
            leaf = sub;
            action = fn;
        });
        return sub;
    };
    auto primes = [&](CLI::App* sub) { sub->add_option("--prime", cfg.primes, "odd primes not dividing det q"); };

    auto* form = app.add_subcommand("form", "form data");
    form->require_subcommand(1);
    common(form->add_subcommand("info", "determinant, Delta and level"), [&] { return cmd_form_info(cfg, out); });

    auto* reps = common(app.add_subcommand("reps", "representations of integers"), [&] { return cmd_reps(cfg, out); });
    reps->add_option("--a", cfg.a, "integers to represent");
    reps->add_flag("--list", cfg.list, "print the vectors");

    auto* classes = common(app.add_subcommand("classes", "classes in the similarity class"), [&] { return cmd_classes(cfg, out); });
    primes(classes);

    auto* iso = app.add_subcommand("isosum", "isotropic sums");
    iso->require_subcommand(1);
    auto* cmp = common(iso->add_subcommand("compare", "brute force against the closed formula"), [&] { return cmd_isosum(cfg, out); });
    primes(cmp);
    cmp->add_option("--d", cfg.d, "elementary divisor type (default: all)");
    cmp->add_option("--K", cfg.K, "fixed column (default: one per stratum)")->delimiter(',');

    auto* theta = app.add_subcommand("theta", "theta series and Hecke operators");
    theta->require_subcommand(1);
    common(theta->add_subcommand("coeffs", "r(q, n) for n <= n_max"), [&] { return cmd_theta_coeffs(cfg, out); })->add_option("--n-max", cfg.n_max);
    auto* eich = common(theta->add_subcommand("eichler", "Hecke action against the Anzahl matrix"), [&] { return cmd_theta_eichler(cfg, out); });
    primes(eich);
    eich->add_option("--n-max", cfg.n_max);
    auto* euler = common(theta->add_subcommand("euler", "Euler product predictions against enumeration"), [&] { return cmd_theta_euler(cfg, out); });
    euler->add_option("--a", cfg.a);
    euler->add_option("--n-max", cfg.n_max);
    euler->add_option("--p-limit", cfg.p_limit);
    auto* shim = common(theta->add_subcommand("shimura", "Dirichlet coefficient identity for three squares"), [&] { return cmd_theta_shimura(cfg, out); });
    shim->add_option("--m-max", cfg.m_max);
    shim->add_option("--a", cfg.a);

    auto* cl = app.add_subcommand("clifford", "Clifford algebra of a ternary form");
    cl->require_subcommand(1);
    auto* chk = common(cl->add_subcommand("check", "identities of t and the norm form"), [&] { return cmd_clifford_check(cfg, out); });
    chk->add_option("--count", cfg.count, "random samples");
    chk->add_option("--seed", cfg.seed);
    auto* lift = common(cl->add_subcommand("lift", "Phi_A, or Psi_A with --prime"), [&] { return cmd_clifford_lift(cfg, out); });
    lift->add_option("--A", cfg.A, "rows, e.g. \"1,0,0;0,1,0;0,0,1\"");
    primes(lift);

    auto* sh = app.add_subcommand("shimura", "ternary and quaternary automorph classes");
    sh->require_subcommand(1);
    primes(common(sh->add_subcommand("verify", "class counts and the two-fold covering"), [&] { return cmd_shimura_verify(cfg, out); }));

    auto* ar = app.add_subcommand("autoring", "automorph class ring");
    ar->require_subcommand(1);
    auto* arv = common(ar->add_subcommand("verify", "orbit commutation relations"), [&] { return cmd_autoring_verify(cfg, out); });
    primes(arv);
    arv->add_option("--a-max", cfg.a_max);

    // isosum defaults to CSV, everything else to JSON
    cfg.format = "";
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        if (!action) throw UsageError("no subcommand");
        apply_config(*leaf, cfg);
        if (cfg.format.empty()) cfg.format = leaf == cmp ? "csv" : "json";
        if (cfg.threads > 0) set_parallelism(cfg.threads);
        return action();
    } catch (const Failure& f) {
        err << "verification failed: " << f.statement << '\n';
        return 1;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        const std::string w = e.what();
        err << "error: " << (w == "singular prime" ? "p must not divide det q (singular prime)" : w) << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace automorph::cli
