#pragma once

// Exact elements of Z[zeta_N], stored in the power basis 1, zeta, ...,
// zeta^{phi(N)-1} after reduction modulo the N-th cyclotomic polynomial.

#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"

namespace parahoric {

namespace detail {

using IntPoly = std::vector<std::int64_t>;

inline IntPoly int_poly_divexact(IntPoly num, const IntPoly& den) {
    // den is monic.
    const int dn = static_cast<int>(den.size()) - 1;
    const int nn = static_cast<int>(num.size()) - 1;
    IntPoly quot(nn - dn + 1, 0);
    for (int i = nn - dn; i >= 0; --i) {
        const std::int64_t c = num[i + dn];
        quot[i] = c;
        for (int j = 0; j <= dn; ++j) num[i + j] -= c * den[j];
    }
    return quot;
}

inline const IntPoly& cyclotomic_poly_unlocked(int n, std::map<int, IntPoly>& cache) {
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    IntPoly num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        num = int_poly_divexact(num, cyclotomic_poly_unlocked(d, cache));
        while (num.size() > 1 && num.back() == 0) num.pop_back();
    }
    return cache.emplace(n, num).first->second;
}

inline const IntPoly& cyclotomic_poly(int n) {
    static std::mutex mu;
    static std::map<int, IntPoly> cache;  // node-based: references stay valid
    std::lock_guard<std::mutex> lock(mu);
    return cyclotomic_poly_unlocked(n, cache);
}

}  // namespace detail

/// Element of the cyclotomic integers Z[zeta_N].
class CycValue {
public:
    CycValue() : conductor_(1), coeffs_{0} {}
    explicit CycValue(std::int64_t integer) : conductor_(1), coeffs_{integer} {}

    /// sum_k exps[k] * zeta_N^k for k in [0, N).
    static CycValue from_exponent_vector(int N, const std::vector<std::int64_t>& exps) {
        CycValue v;
        v.conductor_ = N;
        v.coeffs_ = reduce(N, exps);
        return v;
    }
    /// zeta_N^k.
    static CycValue root_of_unity(int N, int k) {
        std::vector<std::int64_t> e(N, 0);
        e[((k % N) + N) % N] = 1;
        return from_exponent_vector(N, e);
    }

    int conductor() const { return conductor_; }
    const std::vector<std::int64_t>& coeffs() const { return coeffs_; }

    /// Re-express in Z[zeta_L] for a multiple L of the conductor.
    CycValue lift(int L) const {
        if (L % conductor_ != 0) throw InvariantError("lift target is not a multiple of the conductor");
        if (L == conductor_) return *this;
        const int s = L / conductor_;
        std::vector<std::int64_t> e(L, 0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) e[i * s] += coeffs_[i];
        return from_exponent_vector(L, e);
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < coeffs_.size(); ++i)
            if (coeffs_[i] != 0) return false;
        return true;
    }
    std::int64_t rational_value() const {
        if (!is_rational()) throw InvariantError("cyclotomic value is not rational: " + to_string());
        return coeffs_.empty() ? 0 : coeffs_[0];
    }
    bool is_zero() const {
        for (auto c : coeffs_)
            if (c != 0) return false;
        return true;
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    CycValue conj() const {
        std::vector<std::int64_t> e(conductor_, 0);
        for (std::size_t i = 0; i < coeffs_.size(); ++i) e[(conductor_ - static_cast<int>(i)) % conductor_] += coeffs_[i];
        return from_exponent_vector(conductor_, e);
    }

    friend CycValue operator+(const CycValue& a, const CycValue& b) {
        const int L = std::lcm(a.conductor_, b.conductor_);
        CycValue x = a.lift(L), y = b.lift(L);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
        return x;
    }
    friend CycValue operator-(const CycValue& a, const CycValue& b) { return a + b * CycValue(-1); }
    friend CycValue operator*(const CycValue& a, const CycValue& b) {
        const int L = std::lcm(a.conductor_, b.conductor_);
        const CycValue x = a.lift(L), y = b.lift(L);
        std::vector<std::int64_t> e(L, 0);
        for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
            if (x.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < y.coeffs_.size(); ++j) e[(i + j) % L] += x.coeffs_[i] * y.coeffs_[j];
        }
        return from_exponent_vector(L, e);
    }
    CycValue& operator+=(const CycValue& b) { return *this = *this + b; }
    CycValue& operator-=(const CycValue& b) { return *this = *this - b; }
    CycValue& operator*=(const CycValue& b) { return *this = *this * b; }

    /// Exact division by a nonzero integer; throws when some coefficient is
    /// not divisible.
    CycValue divide_exact(std::int64_t d) const {
        if (d == 0) throw InvariantError("division by zero");
        CycValue r = *this;
        for (auto& c : r.coeffs_) {
            if (c % d != 0) throw InvariantError("cyclotomic value " + to_string() + " not divisible by " + std::to_string(d));
            c /= d;
        }
        return r;
    }

    /// Deterministic total order: compare coefficient vectors after lifting
    /// to a common conductor.
    friend bool lex_less(const CycValue& a, const CycValue& b) {
        const int L = std::lcm(a.conductor_, b.conductor_);
        return a.lift(L).coeffs_ < b.lift(L).coeffs_;
    }

    /// Equality as algebraic numbers (conductors may differ).
    friend bool operator==(const CycValue& a, const CycValue& b) {
        const int L = std::lcm(a.conductor_, b.conductor_);
        return a.lift(L).coeffs_ == b.lift(L).coeffs_;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            if (!first) os << (coeffs_[i] > 0 ? "+" : "");
            if (i == 0) {
                os << coeffs_[i];
            } else {
                if (coeffs_[i] == -1) os << "-";
                else if (coeffs_[i] != 1) os << coeffs_[i] << "*";
                os << "z" << conductor_;
                if (i > 1) os << "^" << i;
            }
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    static std::vector<std::int64_t> reduce(int N, std::vector<std::int64_t> e) {
        const auto& phi = detail::cyclotomic_poly(N);
        const int d = static_cast<int>(phi.size()) - 1;
        for (int i = static_cast<int>(e.size()) - 1; i >= d; --i) {
            const std::int64_t c = e[i];
            if (c == 0) continue;
            for (int j = 0; j <= d; ++j) e[i - d + j] -= c * phi[j];
        }
        e.resize(d, 0);
        return e;
    }

    int conductor_;
    std::vector<std::int64_t> coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const CycValue& v) { return os << v.to_string(); }

}  // namespace parahoric
