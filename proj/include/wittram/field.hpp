#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace wittram {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

/******** Rationals (exact, arbitrary precision) ********/

class Rat {
  public:
    Rat() : v_(0) {}
    explicit Rat(long long n) : v_(n) {}
    explicit Rat(const BigRat& v) : v_(v) {}
    Rat(const BigInt& num, const BigInt& den) : v_(BigRat(num, den))
    {
        check(den != 0, errc::division_by_zero, "rational with zero denominator");
    }

    static unsigned characteristic() { return 0; }

    Rat zero() const { return Rat(); }
    Rat one() const { return Rat(1); }
    Rat scalar(long long n) const { return Rat(n); }
    Rat scalar_big(const BigInt& n) const { return Rat(BigRat(n)); }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rat operator+(const Rat& o) const { return Rat(BigRat(v_ + o.v_)); }
    Rat operator-(const Rat& o) const { return Rat(BigRat(v_ - o.v_)); }
    Rat operator-() const { return Rat(BigRat(-v_)); }
    Rat operator*(const Rat& o) const { return Rat(BigRat(v_ * o.v_)); }
    Rat operator/(const Rat& o) const
    {
        check(!o.is_zero(), errc::division_by_zero, "rational division by zero");
        return Rat(BigRat(v_ / o.v_));
    }
    Rat inv() const
    {
        check(!is_zero(), errc::division_by_zero, "inverse of zero");
        return Rat(BigRat(1) / v_);
    }
    bool operator==(const Rat& o) const { return v_ == o.v_; }
    bool operator!=(const Rat& o) const { return v_ != o.v_; }

    std::optional<Rat> pth_root() const { return std::nullopt; }

    const BigRat& value() const { return v_; }
    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }
    bool is_integer() const { return denominator() == 1; }

    std::string str() const { return v_.str(); }

  private:
    BigRat v_;
};

/******** GF(p^d), runtime prime p, degree d <= 4 ********/

inline constexpr unsigned kMaxFqDegree = 4;

struct FqCtx {
    uint32_t p = 0;
    uint32_t d = 1;
    // monic modulus x^d + mod[d-1] x^(d-1) + ... + mod[0]; unused for d = 1
    std::array<uint64_t, kMaxFqDegree> mod{};
};

namespace detail {

inline uint64_t mod_pow(uint64_t b, uint64_t e, uint64_t m)
{
    uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

// dense univariate arithmetic over F_p, used only for modulus search
using UPoly = std::vector<uint64_t>;

inline UPoly up_trim(UPoly a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline UPoly up_mulmod(const UPoly& a, const UPoly& b, const UPoly& f, uint64_t p)
{
    UPoly r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    // reduce mod monic f
    size_t df = f.size() - 1;
    for (size_t k = r.size(); k-- > df + 1;) {
        if (!r[k]) continue;
        uint64_t c = r[k];
        r[k] = 0;
        for (size_t j = 0; j < df; ++j) r[k - df + j] = (r[k - df + j] + c * (p - f[j] % p)) % p;
    }
    r.resize(df + 1);
    return up_trim(r);
}

inline UPoly up_powmod(UPoly base, BigInt e, const UPoly& f, uint64_t p)
{
    UPoly r{1};
    while (e > 0) {
        if ((e & 1) != 0) r = up_mulmod(r, base, f, p);
        base = up_mulmod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

inline UPoly up_gcd(UPoly a, UPoly b, uint64_t p)
{
    a = up_trim(a);
    b = up_trim(b);
    while (!b.empty()) {
        // a mod b, b monic-ized on the fly
        uint64_t lead = b.back();
        uint64_t il = mod_pow(lead, p - 2, p);
        for (auto& c : b) c = (c * il) % p;
        while (a.size() >= b.size() && !a.empty()) {
            uint64_t c = a.back();
            size_t shift = a.size() - b.size();
            for (size_t j = 0; j < b.size(); ++j)
                a[shift + j] = (a[shift + j] + c * (p - b[j] % p)) % p;
            a = up_trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

inline bool up_irreducible(const UPoly& f, uint64_t p)
{
    size_t d = f.size() - 1;
    if (d == 1) return true;
    // x^(p^d) == x mod f, and gcd(x^(p^(d/l)) - x, f) = 1 for prime l | d
    UPoly x{0, 1};
    BigInt q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d));
    UPoly xq = up_powmod(x, q, f, p);
    UPoly diff = xq;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    if (!up_trim(diff).empty()) return false;
    for (size_t l = 2; l <= d; ++l) {
        if (d % l != 0) continue;
        bool prime = true;
        for (size_t q2 = 2; q2 * q2 <= l; ++q2)
            if (l % q2 == 0) prime = false;
        if (!prime) continue;
        BigInt e = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d / l));
        UPoly xe = up_powmod(x, e, f, p);
        UPoly g = xe;
        g.resize(std::max<size_t>(g.size(), 2), 0);
        g[1] = (g[1] + p - 1) % p;
        if (up_gcd(up_trim(g), f, p).size() > 1) return false;
    }
    return true;
}

} // namespace detail

inline const FqCtx* fq_context(uint32_t p, uint32_t d = 1)
{
    check(p >= 2, errc::shape_mismatch, "characteristic must be a prime >= 2");
    check(d >= 1 && d <= kMaxFqDegree, errc::unsupported, "GF(p^d) supports d <= 4");
    static std::map<std::pair<uint32_t, uint32_t>, FqCtx> registry;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find({p, d});
    if (it != registry.end()) return &it->second;

    FqCtx ctx;
    ctx.p = p;
    ctx.d = d;
    if (d > 1) {
        // smallest monic irreducible of degree d in lex order of low coefficients
        std::vector<uint64_t> a(d, 0);
        bool found = false;
        while (!found) {
            detail::UPoly f(a.begin(), a.end());
            f.push_back(1);
            if (detail::up_irreducible(f, p)) {
                for (uint32_t i = 0; i < d; ++i) ctx.mod[i] = a[i];
                found = true;
                break;
            }
            size_t k = 0;
            while (k < d && ++a[k] == p) a[k++] = 0;
            check(k < d, errc::internal_check, "no irreducible modulus found");
        }
    }
    auto [pos, _] = registry.emplace(std::make_pair(p, d), ctx);
    return &pos->second;
}

class Fq {
  public:
    Fq() : ctx_(nullptr) { c_.fill(0); }
    explicit Fq(const FqCtx* ctx) : ctx_(ctx) { c_.fill(0); }
    Fq(const FqCtx* ctx, long long n) : ctx_(ctx)
    {
        c_.fill(0);
        long long r = n % static_cast<long long>(ctx->p);
        if (r < 0) r += ctx->p;
        c_[0] = static_cast<uint64_t>(r);
    }

    static Fq generator(const FqCtx* ctx)
    {
        Fq g(ctx);
        if (ctx->d == 1)
            g.c_[0] = 1;
        else
            g.c_[1] = 1;
        return g;
    }

    unsigned characteristic() const { return ctx_->p; }
    const FqCtx* context() const { return ctx_; }

    Fq zero() const { return Fq(ctx_); }
    Fq one() const { return Fq(ctx_, 1); }
    Fq scalar(long long n) const { return Fq(ctx_, n); }
    Fq scalar_big(const BigInt& n) const
    {
        BigInt r = n % ctx_->p;
        if (r < 0) r += ctx_->p;
        return Fq(ctx_, static_cast<long long>(r));
    }

    bool is_zero() const
    {
        for (uint32_t i = 0; i < ctx_->d; ++i)
            if (c_[i]) return false;
        return true;
    }
    bool is_one() const
    {
        if (c_[0] != 1) return false;
        for (uint32_t i = 1; i < ctx_->d; ++i)
            if (c_[i]) return false;
        return true;
    }

    Fq operator+(const Fq& o) const
    {
        match(o);
        Fq r(ctx_);
        for (uint32_t i = 0; i < ctx_->d; ++i) r.c_[i] = (c_[i] + o.c_[i]) % ctx_->p;
        return r;
    }
    Fq operator-(const Fq& o) const
    {
        match(o);
        Fq r(ctx_);
        for (uint32_t i = 0; i < ctx_->d; ++i) r.c_[i] = (c_[i] + ctx_->p - o.c_[i]) % ctx_->p;
        return r;
    }
    Fq operator-() const
    {
        Fq r(ctx_);
        for (uint32_t i = 0; i < ctx_->d; ++i) r.c_[i] = (ctx_->p - c_[i]) % ctx_->p;
        return r;
    }
    Fq operator*(const Fq& o) const
    {
        match(o);
        const uint32_t p = ctx_->p, d = ctx_->d;
        if (d == 1) {
            Fq r(ctx_);
            r.c_[0] = (c_[0] * o.c_[0]) % p;
            return r;
        }
        std::array<uint64_t, 2 * kMaxFqDegree> prod{};
        for (uint32_t i = 0; i < d; ++i) {
            if (!c_[i]) continue;
            for (uint32_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + c_[i] * o.c_[j]) % p;
        }
        for (uint32_t k = 2 * d - 2; k >= d && k < 2 * kMaxFqDegree; --k) {
            if (!prod[k]) continue;
            uint64_t coef = prod[k];
            prod[k] = 0;
            for (uint32_t j = 0; j < d; ++j)
                prod[k - d + j] = (prod[k - d + j] + coef * ((p - ctx_->mod[j] % p) % p)) % p;
        }
        Fq r(ctx_);
        for (uint32_t i = 0; i < d; ++i) r.c_[i] = prod[i];
        return r;
    }
    Fq pow_u(BigInt e) const
    {
        Fq r = one(), b = *this;
        while (e > 0) {
            if ((e & 1) != 0) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    Fq inv() const
    {
        check(!is_zero(), errc::division_by_zero, "inverse of zero in GF(q)");
        BigInt q = boost::multiprecision::pow(BigInt(ctx_->p), ctx_->d);
        return pow_u(q - 2);
    }
    Fq operator/(const Fq& o) const { return *this * o.inv(); }

    bool operator==(const Fq& o) const
    {
        match(o);
        for (uint32_t i = 0; i < ctx_->d; ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const Fq& o) const { return !(*this == o); }

    // every element of a finite field has a unique p-th root: c^(p^(d-1))
    std::optional<Fq> pth_root() const
    {
        BigInt e = boost::multiprecision::pow(BigInt(ctx_->p), ctx_->d - 1);
        return pow_u(e);
    }

    uint64_t coeff(uint32_t i) const { return c_[i]; }
    uint64_t residue() const { return c_[0]; }

    std::string str() const
    {
        if (ctx_->d == 1) return std::to_string(c_[0]);
        std::string s = "(";
        for (uint32_t i = 0; i < ctx_->d; ++i) {
            if (i) s += ",";
            s += std::to_string(c_[i]);
        }
        return s + ")";
    }

  private:
    void match(const Fq& o) const
    {
        check(ctx_ == o.ctx_, errc::shape_mismatch, "mixed GF(q) contexts");
    }

    const FqCtx* ctx_;
    std::array<uint64_t, kMaxFqDegree> c_;
};

} // namespace wittram
