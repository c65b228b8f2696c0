#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>

#include "error.hpp"
#include "poly.hpp"

namespace wittram {

inline constexpr int64_t kExactPrec = std::numeric_limits<int64_t>::max();

inline int64_t prec_add(int64_t p, int64_t d)
{
    if (p == kExactPrec) return kExactPrec;
    return p + d;
}

// Laurent series in t with rational-function coefficients (t-free).
// prec: all terms with exponent < prec are known; kExactPrec means the stored
// terms are the whole element.
template <class F>
class LaurentElem {
  public:
    using Coeff = RatFunc<F>;
    using Terms = std::map<int64_t, Coeff>;

    LaurentElem() = default;
    LaurentElem(uint32_t nvars, const F& proto, int64_t prec = kExactPrec)
        : nvars_(nvars), proto_(proto.zero()), prec_(prec)
    {
    }

    static LaurentElem constant(uint32_t nvars, const Coeff& c)
    {
        LaurentElem r(nvars, c.proto());
        r.set(0, c);
        return r;
    }
    static LaurentElem monomial(uint32_t nvars, const Coeff& c, int64_t k)
    {
        LaurentElem r(nvars, c.proto());
        r.set(k, c);
        return r;
    }

    uint32_t nvars() const { return nvars_; }
    const F& proto() const { return proto_; }
    Coeff coeff_proto() const { return Coeff::constant(nvars_, proto_); }
    unsigned characteristic() const { return proto_.characteristic(); }

    LaurentElem zero() const { return LaurentElem(nvars_, proto_); }
    LaurentElem one() const { return constant(nvars_, coeff_proto().one()); }
    LaurentElem scalar(long long n) const { return constant(nvars_, coeff_proto().scalar(n)); }
    LaurentElem scalar_big(const BigInt& n) const
    {
        return constant(nvars_, coeff_proto().scalar_big(n));
    }
    int64_t prec() const { return prec_; }
    bool exact() const { return prec_ == kExactPrec; }
    const Terms& terms() const { return t_; }

    bool is_zero() const { return t_.empty() && exact(); }
    bool known_zero() const { return t_.empty(); } // zero to working precision
    bool is_one() const
    {
        return exact() && t_.size() == 1 && t_.begin()->first == 0 && t_.begin()->second.is_one();
    }

    // valuation; nullopt for exact zero; error when unknown at this precision
    std::optional<int64_t> valuation() const
    {
        if (!t_.empty()) return t_.begin()->first;
        if (exact()) return std::nullopt;
        fail(errc::insufficient_precision, "valuation unknown: series is zero to working precision");
    }
    // valuation floor usable in precision bookkeeping: min term exponent, or prec if none
    int64_t vfloor() const { return t_.empty() ? prec_ : t_.begin()->first; }

    Coeff coeff(int64_t k) const
    {
        if (prec_ != kExactPrec && k >= prec_)
            fail(errc::insufficient_precision, "coefficient beyond working precision");
        auto it = t_.find(k);
        return it == t_.end() ? coeff_proto().zero() : it->second;
    }

    void set(int64_t k, const Coeff& c)
    {
        if (prec_ != kExactPrec && k >= prec_) return;
        if (c.is_zero())
            t_.erase(k);
        else
            t_.insert_or_assign(k, c);
    }

    LaurentElem truncated(int64_t newprec) const
    {
        if (newprec >= prec_) return *this;
        LaurentElem r(nvars_, proto_, newprec);
        for (auto& [k, c] : t_) {
            if (k >= newprec) break;
            r.t_.emplace(k, c);
        }
        return r;
    }

    LaurentElem operator-() const
    {
        LaurentElem r(nvars_, proto_, prec_);
        for (auto& [k, c] : t_) r.t_.emplace(k, -c);
        return r;
    }
    LaurentElem operator+(const LaurentElem& o) const
    {
        match(o);
        LaurentElem r(nvars_, proto_, std::min(prec_, o.prec_));
        for (auto& [k, c] : t_) r.add_term(k, c);
        for (auto& [k, c] : o.t_) r.add_term(k, c);
        return r;
    }
    LaurentElem operator-(const LaurentElem& o) const { return *this + (-o); }
    LaurentElem operator*(const LaurentElem& o) const
    {
        match(o);
        int64_t p;
        if (t_.empty() && exact()) return LaurentElem(nvars_, proto_);
        if (o.t_.empty() && o.exact()) return LaurentElem(nvars_, proto_);
        p = std::min(prec_add(prec_, o.vfloor()), prec_add(o.prec_, vfloor()));
        LaurentElem r(nvars_, proto_, p);
        for (auto& [ka, ca] : t_)
            for (auto& [kb, cb] : o.t_) {
                if (p != kExactPrec && ka + kb >= p) continue;
                Coeff c = ca * cb;
                if (!c.is_zero()) r.add_term(ka + kb, c);
            }
        return r;
    }
    LaurentElem scaled(const Coeff& c) const
    {
        LaurentElem r(nvars_, proto_, prec_);
        if (c.is_zero()) return r;
        for (auto& [k, cc] : t_) {
            Coeff v = cc * c;
            if (!v.is_zero()) r.t_.emplace(k, v);
        }
        return r;
    }
    LaurentElem shifted(int64_t d) const // multiply by t^d
    {
        LaurentElem r(nvars_, proto_, prec_add(prec_, d));
        for (auto& [k, c] : t_) r.t_.emplace(k + d, c);
        return r;
    }
    LaurentElem t_derivative() const // d/dt, termwise
    {
        LaurentElem r(nvars_, proto_, prec_add(prec_, -1));
        for (auto& [k, c] : t_) {
            Coeff v = c * coeff_proto().scalar_big(BigInt(k));
            if (!v.is_zero()) r.t_.emplace(k - 1, v);
        }
        return r;
    }

    LaurentElem pow(uint64_t k) const
    {
        LaurentElem r = LaurentElem::constant(nvars_, coeff_proto().one());
        LaurentElem b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    // multiplicative inverse to absolute precision prec_out (finite)
    LaurentElem inverted(int64_t prec_out) const
    {
        check(prec_out != kExactPrec, errc::unsupported, "series inverse needs a finite target precision");
        if (t_.empty()) {
            if (exact()) fail(errc::division_by_zero, "inverse of zero series");
            fail(errc::insufficient_precision, "inverse of series with no known terms");
        }
        int64_t v = t_.begin()->first;
        int64_t p = prec_out;
        if (prec_ != kExactPrec) p = std::min(p, prec_ - 2 * v);
        Coeff linv = t_.begin()->second.inv();
        // f = l t^v (1 - u), v(u) >= 1; f^-1 = l^-1 t^-v sum u^k
        LaurentElem base = LaurentElem::monomial(nvars_, linv, -v);
        LaurentElem u = LaurentElem::constant(nvars_, coeff_proto().one()) - (*this * base);
        u = u.truncated(p + v + std::max<int64_t>(0, -v) + 1);
        LaurentElem result = base.truncated(p);
        LaurentElem g = u;
        while (!g.t_.empty() && g.t_.begin()->first - v < p) {
            result = result + (base * g).truncated(p);
            g = (g * u).truncated(p + v + 1);
        }
        return result.truncated(p);
    }

    std::optional<LaurentElem> pth_root() const
    {
        unsigned p = proto_.characteristic();
        check(p > 0, errc::unsupported, "pth_root requires positive characteristic");
        int64_t pr = prec_;
        if (pr != kExactPrec) {
            // g known at exponent e iff p*e < prec
            pr = (prec_ >= 0) ? (prec_ + static_cast<int64_t>(p) - 1) / p
                              : -((-prec_) / static_cast<int64_t>(p));
        }
        LaurentElem r(nvars_, proto_, pr);
        for (auto& [k, c] : t_) {
            if (k % p) return std::nullopt;
            auto rc = c.pth_root();
            if (!rc) return std::nullopt;
            r.set(k / p, *rc);
        }
        return r;
    }

    LaurentElem polar_part() const
    {
        LaurentElem r(nvars_, proto_); // exact by construction
        for (auto& [k, c] : t_) {
            if (k >= 0) break;
            r.t_.emplace(k, c);
        }
        return r;
    }

    bool operator==(const LaurentElem& o) const
    {
        return nvars_ == o.nvars_ && prec_ == o.prec_ && t_ == o.t_;
    }
    bool operator!=(const LaurentElem& o) const { return !(*this == o); }

    bool agrees_with(const LaurentElem& o) const // equal through shared precision
    {
        int64_t p = std::min(prec_, o.prec_);
        return truncated(p).t_ == o.truncated(p).t_;
    }

    // substitute series for the coefficient variables (t itself untouched);
    // prec_out bounds the output when denominators force an infinite expansion
    LaurentElem substituted(const std::vector<LaurentElem>& vars, int64_t prec_out) const
    {
        check(vars.size() == nvars_, errc::shape_mismatch, "substitution arity mismatch");
        int64_t prec_eff = std::min(prec_out, prec_);
        LaurentElem protoZ(nvars_, proto_);
        auto embed = [&](const F& c) {
            return LaurentElem::constant(nvars_, Coeff::constant(nvars_, c));
        };
        LaurentElem sum(nvars_, proto_, prec_eff);
        for (auto& [k, c] : t_) {
            LaurentElem num = c.num().evaluate(vars, protoZ, embed);
            LaurentElem val = num;
            if (!c.den().is_one()) {
                LaurentElem den = c.den().evaluate(vars, protoZ, embed);
                if (prec_eff == kExactPrec) {
                    auto vd = den.valuation();
                    check(vd && den.terms().size() == 1, errc::unsupported,
                          "exact substitution through a non-monomial denominator");
                    val = num * LaurentElem::monomial(nvars_, den.terms().begin()->second.inv(), -*vd);
                } else {
                    val = num * den.inverted(prec_eff - k - num.vfloor() + 1);
                }
            }
            sum = sum + val.shifted(k);
        }
        return sum.truncated(prec_eff);
    }

    std::string str(const std::function<std::string(uint32_t)>& varname) const
    {
        std::string s;
        for (auto& [k, c] : t_) {
            if (!s.empty()) s += " + ";
            std::string cs = c.str(varname);
            if (c.num().is_constant() || c.is_poly() == false) cs = "(" + cs + ")";
            if (k == 0)
                s += cs;
            else
                s += cs + "*t^" + std::to_string(k);
        }
        if (s.empty()) s = "0";
        if (!exact()) s += " + O(t^" + std::to_string(prec_) + ")";
        return s;
    }

  private:
    void match(const LaurentElem& o) const
    {
        check(nvars_ == o.nvars_, errc::shape_mismatch, "mixed series arities");
    }
    void add_term(int64_t k, const Coeff& c)
    {
        if (prec_ != kExactPrec && k >= prec_) return;
        auto it = t_.find(k);
        if (it == t_.end()) {
            if (!c.is_zero()) t_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    uint32_t nvars_ = 0;
    F proto_{};
    int64_t prec_ = kExactPrec;
    Terms t_;
};

// expand a rational function that may involve t into a Laurent series:
// num/den = t^(a-b) * N/D with N, D having unit constant term
template <class F>
LaurentElem<F> laurent_expand(const RatFunc<F>& f, uint32_t tvar, int64_t prec)
{
    using L = LaurentElem<F>;
    uint32_t nv = f.nvars();
    auto split = [&](const MultiPoly<F>& g) {
        // g = t^v * G, returns (v, G as exact Laurent polynomial with t cleared)
        int64_t v = std::numeric_limits<int64_t>::max();
        for (auto& [e, c] : g.terms()) v = std::min<int64_t>(v, e[tvar]);
        L out(nv, f.proto());
        for (auto& [e, c] : g.terms()) {
            ExpVec e2 = e;
            int64_t k = e[tvar];
            e2[tvar] = 0;
            MultiPoly<F> mono(nv, f.proto());
            mono.set_coeff(e2, c);
            auto cur = out.coeff(k);
            out.set(k, cur + RatFunc<F>(mono));
        }
        return out;
    };
    if (f.is_zero()) return L(nv, f.proto());
    L num = split(f.num());
    if (f.den().is_one()) return num;
    L den = split(f.den());
    int64_t vd = *den.valuation();
    return num * den.inverted(prec - (num.vfloor() - vd) + 1 - vd);
}

} // namespace wittram
