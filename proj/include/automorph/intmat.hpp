#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace automorph {

using BigInt = mpz_class;
using Rational = mpq_class;
using i64 = std::int64_t;

/* {{{ scalar helpers shared by the 64-bit and the multiprecision kernels */
inline i64 checked_add(i64 a, i64 b)
{
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}
inline i64 checked_sub(i64 a, i64 b)
{
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}
inline i64 checked_mul(i64 a, i64 b)
{
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}
inline BigInt checked_add(const BigInt& a, const BigInt& b) { return BigInt(a + b); }
inline BigInt checked_sub(const BigInt& a, const BigInt& b) { return BigInt(a - b); }
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return BigInt(a * b); }
inline Rational checked_add(const Rational& a, const Rational& b) { return Rational(a + b); }
inline Rational checked_sub(const Rational& a, const Rational& b) { return Rational(a - b); }
inline Rational checked_mul(const Rational& a, const Rational& b) { return Rational(a * b); }

inline i64 abs_val(i64 a) { return a < 0 ? checked_sub(0, a) : a; }
inline BigInt abs_val(const BigInt& a) { return BigInt(abs(a)); }
inline int sign_of(i64 a) { return (a > 0) - (a < 0); }
inline int sign_of(const BigInt& a) { return sgn(a); }
inline bool is_zero(i64 a) { return a == 0; }
inline bool is_zero(const BigInt& a) { return sgn(a) == 0; }

inline i64 floor_div(i64 a, i64 b)
{
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline BigInt floor_div(const BigInt& a, const BigInt& b)
{
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
inline i64 mod_floor(i64 a, i64 m)
{
    i64 r = a % m;
    return r < 0 ? r + (m < 0 ? -m : m) : r;
}
inline BigInt mod_floor(const BigInt& a, const BigInt& m)
{
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (sgn(r) < 0) r += abs(m);
    return r;
}
inline bool divides(i64 d, i64 a) { return d != 0 ? a % d == 0 : a == 0; }
inline bool divides(const BigInt& d, const BigInt& a)
{
    return sgn(d) != 0 ? mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0 : sgn(a) == 0;
}
inline i64 gcd_val(i64 a, i64 b)
{
    a = abs_val(a);
    b = abs_val(b);
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}
inline BigInt gcd_val(const BigInt& a, const BigInt& b) { return BigInt(gcd(a, b)); }

/* g = x*a + y*b, g >= 0, canonical output of the iterative Euclid recursion */
template <class T>
struct ExtGcd {
    T g, x, y;
};
template <class T>
ExtGcd<T> ext_gcd(const T& a, const T& b)
{
    T old_r = abs_val(a), r = abs_val(b);
    T old_s = 1, s = 0, old_t = 0, t = 1;
    while (!is_zero(r)) {
        T q = floor_div(old_r, r);
        T tmp = checked_sub(old_r, checked_mul(q, r));
        old_r = r;
        r = tmp;
        tmp = checked_sub(old_s, checked_mul(q, s));
        old_s = s;
        s = tmp;
        tmp = checked_sub(old_t, checked_mul(q, t));
        old_t = t;
        t = tmp;
    }
    if (sign_of(a) < 0) old_s = checked_sub(T(0), old_s);
    if (sign_of(b) < 0) old_t = checked_sub(T(0), old_t);
    return {old_r, old_s, old_t};
}

i64 to_i64(const BigInt& a);
inline Rational ratio(const BigInt& num, const BigInt& den)
{
    Rational r(num, den);
    r.canonicalize();
    return r;
}
/* }}} */

/* Dense row-major integer (or rational) matrix with value semantics. */
template <class T>
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols, T(0)) {}
    Mat(std::size_t rows, std::size_t cols, std::vector<T> entries)
        : r_(rows), c_(cols), a_(std::move(entries))
    {
        if (a_.size() != r_ * c_) throw std::invalid_argument("matrix entry count mismatch");
    }

    static Mat identity(std::size_t n)
    {
        Mat I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = T(1);
        return I;
    }
    static Mat scalar(std::size_t n, const T& s)
    {
        Mat I(n, n);
        for (std::size_t i = 0; i < n; ++i) I(i, i) = s;
        return I;
    }
    static Mat diagonal(const std::vector<T>& d)
    {
        Mat D(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
        return D;
    }
    static Mat from_rows(const std::vector<std::vector<T>>& rows)
    {
        if (rows.empty()) return Mat();
        Mat M(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != M.c_) throw std::invalid_argument("ragged matrix rows");
            for (std::size_t j = 0; j < M.c_; ++j) M(i, j) = rows[i][j];
        }
        return M;
    }
    static Mat from_columns(const std::vector<std::vector<T>>& cols)
    {
        if (cols.empty()) return Mat();
        Mat M(cols[0].size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) M.set_col(j, cols[j]);
        return M;
    }
    static Mat column(const std::vector<T>& v) { return from_columns({v}); }

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    bool is_square() const { return r_ == c_; }
    T& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }
    const std::vector<T>& data() const { return a_; }

    std::vector<T> col(std::size_t j) const
    {
        std::vector<T> v(r_);
        for (std::size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
        return v;
    }
    std::vector<T> row(std::size_t i) const
    {
        return std::vector<T>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
    }
    void set_col(std::size_t j, const std::vector<T>& v)
    {
        if (v.size() != r_) throw std::invalid_argument("column length mismatch");
        for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
    }
    Mat transpose() const
    {
        Mat t(c_, r_);
        for (std::size_t i = 0; i < r_; ++i)
            for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }
    Mat block(std::size_t i0, std::size_t j0, std::size_t nr, std::size_t nc) const
    {
        Mat b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }
    bool is_zero() const
    {
        return std::all_of(a_.begin(), a_.end(), [](const T& x) { return automorph::is_zero(x); });
    }

    friend bool operator==(const Mat& x, const Mat& y) { return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_; }
    friend bool operator!=(const Mat& x, const Mat& y) { return !(x == y); }
    /* lexicographic on row-major entries; dimensions compared first */
    friend bool operator<(const Mat& x, const Mat& y)
    {
        if (x.r_ != y.r_) return x.r_ < y.r_;
        if (x.c_ != y.c_) return x.c_ < y.c_;
        return std::lexicographical_compare(x.a_.begin(), x.a_.end(), y.a_.begin(), y.a_.end());
    }

  private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Mat<BigInt>;
using SmallMatrix = Mat<i64>;
using RatMatrix = Mat<Rational>;
using IntVec = std::vector<i64>;

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y)
{
    if (x.cols() != y.rows()) throw std::invalid_argument("matrix product dimension mismatch");
    Mat<T> z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k) {
            const T& xik = x(i, k);
            if (is_zero(xik)) continue;
            for (std::size_t j = 0; j < y.cols(); ++j)
                z(i, j) = checked_add(z(i, j), checked_mul(xik, y(k, j)));
        }
    return z;
}
inline RatMatrix operator*(const RatMatrix& x, const RatMatrix& y)
{
    if (x.cols() != y.rows()) throw std::invalid_argument("matrix product dimension mismatch");
    RatMatrix z(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t k = 0; k < x.cols(); ++k)
            for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += x(i, k) * y(k, j);
    return z;
}
template <class T>
Mat<T> operator+(const Mat<T>& x, const Mat<T>& y)
{
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
    Mat<T> z(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) = checked_add(x(i, j), y(i, j));
    return z;
}
template <class T>
Mat<T> operator-(const Mat<T>& x, const Mat<T>& y)
{
    if (x.rows() != y.rows() || x.cols() != y.cols()) throw std::invalid_argument("matrix difference dimension mismatch");
    Mat<T> z(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) = checked_sub(x(i, j), y(i, j));
    return z;
}
template <class T>
Mat<T> scale(const Mat<T>& x, const T& s)
{
    Mat<T> z(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) z(i, j) = checked_mul(x(i, j), s);
    return z;
}
/* Q[A] = tA Q A */
template <class T>
Mat<T> congruent(const Mat<T>& Q, const Mat<T>& A)
{
    return A.transpose() * Q * A;
}
template <class T>
std::vector<T> mat_vec(const Mat<T>& M, const std::vector<T>& v)
{
    if (M.cols() != v.size()) throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<T> w(M.rows(), T(0));
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) w[i] = checked_add(w[i], checked_mul(M(i, j), v[j]));
    return w;
}
/* tX Q Y */
template <class T>
T bilinear(const Mat<T>& Q, const std::vector<T>& x, const std::vector<T>& y)
{
    T s(0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_zero(x[i])) continue;
        for (std::size_t j = 0; j < y.size(); ++j) s = checked_add(s, checked_mul(checked_mul(x[i], Q(i, j)), y[j]));
    }
    return s;
}

IntMatrix to_big(const SmallMatrix& M);
SmallMatrix to_small(const IntMatrix& M);
RatMatrix to_rational(const IntMatrix& M);
std::vector<BigInt> to_big(const IntVec& v);
IntVec to_small(const std::vector<BigInt>& v);

/* exact algorithms; instantiated for i64 and BigInt */
template <class T> T det(const Mat<T>& M);
template <class T> Mat<T> adjoint(const Mat<T>& M);
template <class T> T content(const Mat<T>& M);
template <class T> Mat<T> hnf(const Mat<T>& generators);
template <class T> std::vector<T> smith_diagonal(const Mat<T>& M);
template <class T> bool is_primitive(const Mat<T>& M);
template <class T> Mat<T> complete_to_unimodular(const Mat<T>& M);
template <class T> bool is_integral_left_quotient(const Mat<T>& M, const Mat<T>& X);
template <class T> std::optional<Mat<T>> left_quotient(const Mat<T>& M, const Mat<T>& X);
template <class T> std::optional<Mat<T>> right_quotient(const Mat<T>& X, const Mat<T>& M);
template <class T> bool lattice_contains(const Mat<T>& H, const std::vector<T>& v);
template <class T> bool is_zero_mod(const Mat<T>& M, const T& m);
template <class T> Mat<T> reduce_mod(const Mat<T>& M, const T& m);
int rank_mod_p(const SmallMatrix& M, i64 p);
int rank_mod_p(const IntMatrix& M, i64 p);

RatMatrix inverse(const IntMatrix& M);
RatMatrix inverse(const RatMatrix& M);
Rational det(const RatMatrix& M);
bool is_integral(const RatMatrix& M);
IntMatrix to_integral(const RatMatrix& M);

/* Smith-form diagonal d_1 | d_2 | ... of a nonsingular square matrix */
struct ElementaryDivisorProfile {
    std::vector<BigInt> divisors;
    bool operator==(const ElementaryDivisorProfile& o) const { return divisors == o.divisors; }
};
ElementaryDivisorProfile elementary_divisors(const IntMatrix& M);
ElementaryDivisorProfile elementary_divisors(const SmallMatrix& M);

std::string to_string(const IntMatrix& M);
std::string to_string(const SmallMatrix& M);
std::ostream& operator<<(std::ostream& os, const IntMatrix& M);
std::ostream& operator<<(std::ostream& os, const SmallMatrix& M);

struct SmallMatrixHash {
    std::size_t operator()(const SmallMatrix& M) const
    {
        std::size_t h = M.rows() * 1315423911u + M.cols();
        for (i64 x : M.data()) h ^= std::hash<i64>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};
struct IntVecHash {
    std::size_t operator()(const IntVec& v) const
    {
        std::size_t h = v.size();
        for (i64 x : v) h ^= std::hash<i64>()(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace automorph
