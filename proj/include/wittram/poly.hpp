#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "field.hpp"

namespace wittram {

using ExpVec = std::vector<uint32_t>;

// graded lexicographic order: total degree first, then lex on exponents
struct GrlexLess {
    bool operator()(const ExpVec& a, const ExpVec& b) const
    {
        uint64_t da = 0, db = 0;
        for (auto e : a) da += e;
        for (auto e : b) db += e;
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

// variable slots: z1..zm, x, y1..ym, t
struct VarLayout {
    uint32_t m = 0;
    uint32_t nvars() const { return 2 * m + 2; }
    uint32_t z(uint32_t i) const { return i; } // 0-based: z(0) is z1
    uint32_t x() const { return m; }
    uint32_t y(uint32_t i) const { return m + 1 + i; }
    uint32_t t() const { return 2 * m + 1; }
    std::string name(uint32_t v) const
    {
        if (v < m) return "z" + std::to_string(v + 1);
        if (v == m) return "x";
        if (v < 2 * m + 1) return "y" + std::to_string(v - m);
        return "t";
    }
};

template <class F>
class MultiPoly {
  public:
    using Terms = std::map<ExpVec, F, GrlexLess>;

    MultiPoly() : nvars_(0), proto_() {}
    MultiPoly(uint32_t nvars, const F& proto) : nvars_(nvars), proto_(proto.zero()) {}

    static MultiPoly constant(uint32_t nvars, const F& c)
    {
        MultiPoly r(nvars, c);
        if (!c.is_zero()) r.t_.emplace(ExpVec(nvars, 0), c);
        return r;
    }
    static MultiPoly variable(uint32_t nvars, const F& proto, uint32_t var, uint32_t exp = 1)
    {
        check(var < nvars, errc::shape_mismatch, "variable index out of range");
        MultiPoly r(nvars, proto);
        if (exp == 0) return constant(nvars, proto.one());
        ExpVec e(nvars, 0);
        e[var] = exp;
        r.t_.emplace(std::move(e), proto.one());
        return r;
    }

    uint32_t nvars() const { return nvars_; }
    const F& proto() const { return proto_; }
    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool is_one() const { return is_constant() && !t_.empty() && t_.begin()->second.is_one(); }
    bool is_constant() const
    {
        if (t_.empty()) return true;
        if (t_.size() > 1) return false;
        for (auto e : t_.begin()->first)
            if (e) return false;
        return true;
    }
    F constant_value() const
    {
        if (t_.empty()) return proto_.zero();
        check(is_constant(), errc::shape_mismatch, "not a constant polynomial");
        return t_.begin()->second;
    }

    uint64_t total_degree() const
    {
        uint64_t d = 0;
        for (auto& [e, c] : t_) {
            uint64_t s = 0;
            for (auto v : e) s += v;
            d = std::max(d, s);
        }
        return d;
    }
    uint32_t degree_in(uint32_t var) const
    {
        uint32_t d = 0;
        for (auto& [e, c] : t_) d = std::max(d, e[var]);
        return d;
    }
    bool involves(uint32_t var) const
    {
        for (auto& [e, c] : t_)
            if (e[var]) return true;
        return false;
    }

    void set_coeff(const ExpVec& e, const F& c)
    {
        if (c.is_zero())
            t_.erase(e);
        else
            t_.insert_or_assign(e, c);
    }
    F coeff(const ExpVec& e) const
    {
        auto it = t_.find(e);
        return it == t_.end() ? proto_.zero() : it->second;
    }

    // leading term under grlex
    std::pair<ExpVec, F> leading() const
    {
        check(!t_.empty(), errc::zero_input, "leading term of zero polynomial");
        auto it = std::prev(t_.end());
        return {it->first, it->second};
    }

    MultiPoly operator-() const
    {
        MultiPoly r(nvars_, proto_);
        for (auto& [e, c] : t_) r.t_.emplace(e, -c);
        return r;
    }
    MultiPoly operator+(const MultiPoly& o) const
    {
        match(o);
        MultiPoly r = *this;
        for (auto& [e, c] : o.t_) {
            auto it = r.t_.find(e);
            if (it == r.t_.end())
                r.t_.emplace(e, c);
            else {
                it->second = it->second + c;
                if (it->second.is_zero()) r.t_.erase(it);
            }
        }
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }
    MultiPoly operator*(const MultiPoly& o) const
    {
        match(o);
        MultiPoly r(nvars_, proto_);
        for (auto& [ea, ca] : t_)
            for (auto& [eb, cb] : o.t_) {
                F c = ca * cb;
                if (c.is_zero()) continue;
                ExpVec e(nvars_);
                for (uint32_t i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
                auto it = r.t_.find(e);
                if (it == r.t_.end())
                    r.t_.emplace(std::move(e), c);
                else {
                    it->second = it->second + c;
                    if (it->second.is_zero()) r.t_.erase(it);
                }
            }
        return r;
    }
    MultiPoly scaled(const F& c) const
    {
        MultiPoly r(nvars_, proto_);
        if (c.is_zero()) return r;
        for (auto& [e, cc] : t_) {
            F v = cc * c;
            if (!v.is_zero()) r.t_.emplace(e, v);
        }
        return r;
    }
    MultiPoly pow(uint64_t k) const
    {
        MultiPoly r = constant(nvars_, proto_.one());
        MultiPoly b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    bool operator==(const MultiPoly& o) const { return nvars_ == o.nvars_ && t_ == o.t_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }

    // exact division; nullopt if not divisible
    std::optional<MultiPoly> divided_by(const MultiPoly& d) const
    {
        match(d);
        check(!d.is_zero(), errc::division_by_zero, "polynomial division by zero");
        MultiPoly q(nvars_, proto_);
        MultiPoly rem = *this;
        auto [de, dc] = d.leading();
        F dinv = dc.inv();
        while (!rem.is_zero()) {
            auto [re, rc] = rem.leading();
            ExpVec qe(nvars_);
            for (uint32_t i = 0; i < nvars_; ++i) {
                if (re[i] < de[i]) return std::nullopt;
                qe[i] = re[i] - de[i];
            }
            F qc = rc * dinv;
            MultiPoly mono(nvars_, proto_);
            mono.t_.emplace(qe, qc);
            q = q + mono;
            rem = rem - mono * d;
        }
        return q;
    }

    // coefficient of var^k, as a polynomial with var-exponent zeroed
    MultiPoly coeff_of(uint32_t var, uint32_t k) const
    {
        MultiPoly r(nvars_, proto_);
        for (auto& [e, c] : t_) {
            if (e[var] != k) continue;
            ExpVec e2 = e;
            e2[var] = 0;
            r.t_.emplace(std::move(e2), c);
        }
        return r;
    }

    MultiPoly mul_var(uint32_t var, uint32_t exp) const
    {
        MultiPoly r(nvars_, proto_);
        for (auto& [e, c] : t_) {
            ExpVec e2 = e;
            e2[var] += exp;
            r.t_.emplace(std::move(e2), c);
        }
        return r;
    }

    // re-embed into a different arity: variable i becomes varmap[i]
    MultiPoly reindexed(uint32_t new_nvars, const std::vector<uint32_t>& varmap) const
    {
        check(varmap.size() == nvars_, errc::shape_mismatch, "reindex map arity mismatch");
        MultiPoly r(new_nvars, proto_);
        for (auto& [e, c] : t_) {
            ExpVec e2(new_nvars, 0);
            for (uint32_t i = 0; i < nvars_; ++i) {
                if (!e[i]) continue;
                check(varmap[i] < new_nvars, errc::shape_mismatch, "reindex target out of range");
                e2[varmap[i]] += e[i];
            }
            r.t_.emplace(std::move(e2), c);
        }
        return r;
    }

    MultiPoly derivative(uint32_t var) const
    {
        MultiPoly r(nvars_, proto_);
        for (auto& [e, c] : t_) {
            if (!e[var]) continue;
            F nc = c * proto_.scalar(static_cast<long long>(e[var]));
            if (nc.is_zero()) continue;
            ExpVec e2 = e;
            e2[var] -= 1;
            r.t_.emplace(std::move(e2), nc);
        }
        return r;
    }

    // generic evaluation: vars[i] substituted for variable i; embed maps F into R
    template <class R, class Embed>
    R evaluate(const std::vector<R>& vars, const R& protoR, Embed&& embed) const
    {
        check(vars.size() == nvars_, errc::shape_mismatch, "evaluation arity mismatch");
        std::map<std::pair<uint32_t, uint32_t>, R> powcache;
        auto power = [&](uint32_t v, uint32_t e) -> const R& {
            auto key = std::make_pair(v, e);
            auto it = powcache.find(key);
            if (it != powcache.end()) return it->second;
            R acc = protoR.one();
            R base = vars[v];
            uint32_t k = e;
            while (k) {
                if (k & 1) acc = acc * base;
                base = base * base;
                k >>= 1;
            }
            return powcache.emplace(key, std::move(acc)).first->second;
        };
        R sum = protoR.zero();
        for (auto& [e, c] : t_) {
            R term = embed(c);
            for (uint32_t v = 0; v < nvars_; ++v)
                if (e[v]) term = term * power(v, e[v]);
            sum = sum + term;
        }
        return sum;
    }

    std::optional<MultiPoly> pth_root() const
    {
        unsigned p = proto_.characteristic();
        check(p > 0, errc::unsupported, "pth_root requires positive characteristic");
        MultiPoly r(nvars_, proto_);
        for (auto& [e, c] : t_) {
            ExpVec e2(nvars_);
            for (uint32_t i = 0; i < nvars_; ++i) {
                if (e[i] % p) return std::nullopt;
                e2[i] = e[i] / p;
            }
            auto rc = c.pth_root();
            if (!rc) return std::nullopt;
            r.t_.emplace(std::move(e2), *rc);
        }
        return r;
    }

    std::string str(const std::function<std::string(uint32_t)>& varname) const
    {
        if (t_.empty()) return "0";
        std::string s;
        bool first = true;
        for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
            if (!first) s += " + ";
            first = false;
            const auto& [e, c] = *it;
            bool allzero = true;
            for (auto v : e) allzero &= (v == 0);
            std::string mono;
            for (uint32_t v = 0; v < nvars_; ++v) {
                if (!e[v]) continue;
                if (!mono.empty()) mono += "*";
                mono += varname(v);
                if (e[v] > 1) mono += "^" + std::to_string(e[v]);
            }
            if (allzero)
                s += c.str();
            else if (c.is_one())
                s += mono;
            else
                s += c.str() + "*" + mono;
        }
        return s;
    }

  private:
    void match(const MultiPoly& o) const
    {
        check(nvars_ == o.nvars_, errc::shape_mismatch, "mixed polynomial arities");
    }

    uint32_t nvars_;
    F proto_;
    Terms t_;
};

/******** multivariate gcd (primitive PRS) ********/

namespace detail {

template <class F>
std::vector<uint32_t> variables_of(const MultiPoly<F>& f)
{
    std::vector<uint32_t> out;
    for (uint32_t v = 0; v < f.nvars(); ++v)
        if (f.involves(v)) out.push_back(v);
    return out;
}

template <class F>
MultiPoly<F> poly_gcd(const MultiPoly<F>& a, const MultiPoly<F>& b);

// both arguments nonzero and involving only the variable v
template <class F>
MultiPoly<F> gcd_univariate(const MultiPoly<F>& a, const MultiPoly<F>& b, uint32_t v)
{
    auto tovec = [&](const MultiPoly<F>& f) {
        std::vector<F> c(f.degree_in(v) + 1, f.proto().zero());
        for (auto& [e, cf] : f.terms()) c[e[v]] = cf;
        return c;
    };
    auto trim = [](std::vector<F>& c) {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    };
    std::vector<F> A = tovec(a), B = tovec(b);
    while (!B.empty()) {
        F binv = B.back().inv();
        while (A.size() >= B.size()) {
            F q = A.back() * binv;
            size_t off = A.size() - B.size();
            for (size_t i = 0; i + 1 < B.size(); ++i) A[off + i] = A[off + i] - q * B[i];
            A.pop_back();
            trim(A);
            if (A.empty()) break;
        }
        std::swap(A, B);
    }
    MultiPoly<F> r(a.nvars(), a.proto());
    F lead = A.back().inv();
    for (size_t i = 0; i < A.size(); ++i) {
        if (A[i].is_zero()) continue;
        ExpVec e(a.nvars(), 0);
        e[v] = static_cast<uint32_t>(i);
        r.set_coeff(e, A[i] * lead);
    }
    return r;
}

// gcd of all coefficients of f viewed as univariate in var
template <class F>
MultiPoly<F> poly_content(const MultiPoly<F>& f, uint32_t var)
{
    MultiPoly<F> g(f.nvars(), f.proto());
    for (uint32_t k = 0; k <= f.degree_in(var); ++k) {
        MultiPoly<F> c = f.coeff_of(var, k);
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_one()) break;
    }
    return g;
}

// pseudo-remainder of f by g in the variable var (g nonzero in var)
template <class F>
MultiPoly<F> poly_prem(MultiPoly<F> f, const MultiPoly<F>& g, uint32_t var)
{
    uint32_t dg = g.degree_in(var);
    MultiPoly<F> lg = g.coeff_of(var, dg);
    while (!f.is_zero() && f.degree_in(var) >= dg) {
        uint32_t df = f.degree_in(var);
        MultiPoly<F> lf = f.coeff_of(var, df);
        f = f * lg - (lf.mul_var(var, df - dg)) * g;
        check(f.is_zero() || f.degree_in(var) < df, errc::internal_check, "prem did not reduce");
    }
    return f;
}

// u nonzero and involving only v: gcd(f, u) reduces to univariate gcds, since a
// divisor from F[v] must divide every F[v]-coefficient of f
template <class F>
MultiPoly<F> univariate_side_gcd(const MultiPoly<F>& f, const MultiPoly<F>& u, uint32_t v)
{
    std::map<ExpVec, MultiPoly<F>, GrlexLess> groups;
    for (auto& [e, c] : f.terms()) {
        ExpVec key = e;
        uint32_t ev = key[v];
        key[v] = 0;
        auto it = groups.find(key);
        if (it == groups.end())
            it = groups.emplace(key, MultiPoly<F>(f.nvars(), f.proto())).first;
        ExpVec mono(f.nvars(), 0);
        mono[v] = ev;
        it->second.set_coeff(mono, c);
    }
    MultiPoly<F> g = u;
    auto [le, lc] = g.leading();
    g = g.scaled(lc.inv());
    for (auto& [key, part] : groups) {
        if (g.is_constant()) break;
        g = gcd_univariate(g, part, v);
    }
    return g;
}

template <class F>
MultiPoly<F> poly_gcd(const MultiPoly<F>& a, const MultiPoly<F>& b)
{
    auto monic = [](MultiPoly<F> f) {
        if (f.is_zero()) return f;
        auto [e, c] = f.leading();
        return f.scaled(c.inv());
    };
    auto one = [&] { return MultiPoly<F>::constant(a.nvars(), a.proto().one()); };
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a == b) return monic(a);
    auto vas = variables_of(a), vbs = variables_of(b);
    if (vas.empty() || vbs.empty()) return one(); // a unit divides everything
    std::vector<uint32_t> shared;
    std::set_intersection(vas.begin(), vas.end(), vbs.begin(), vbs.end(),
                          std::back_inserter(shared));
    if (shared.empty()) return one(); // no common variable: only constant divisors
    if (vas.size() == 1) return univariate_side_gcd(b, a, vas[0]);
    if (vbs.size() == 1) return univariate_side_gcd(a, b, vbs[0]);
    // main variable: a shared one with the least combined degree
    uint32_t var = shared[0];
    uint32_t best = a.degree_in(var) + b.degree_in(var);
    for (uint32_t v : shared) {
        uint32_t d = a.degree_in(v) + b.degree_in(v);
        if (d < best) {
            best = d;
            var = v;
        }
    }
    MultiPoly<F> ca = poly_content(a, var), cb = poly_content(b, var);
    auto fa = a.divided_by(ca), fb = b.divided_by(cb);
    check(fa && fb, errc::internal_check, "content division failed");
    MultiPoly<F> f = *fa, g = *fb;
    if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
    while (!g.is_zero()) {
        MultiPoly<F> r = poly_prem(f, g, var);
        f = g;
        if (r.is_zero()) {
            g = r;
        } else {
            MultiPoly<F> cr = poly_content(r, var);
            auto rr = r.divided_by(cr);
            check(rr.has_value(), errc::internal_check, "content division failed");
            g = *rr;
        }
    }
    MultiPoly<F> cont = poly_gcd(ca, cb);
    return monic(cont * f);
}

} // namespace detail

template <class F>
MultiPoly<F> gcd(const MultiPoly<F>& a, const MultiPoly<F>& b)
{
    return detail::poly_gcd(a, b);
}

/******** rational functions, kept reduced with grlex-monic denominator ********/

template <class F>
class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(const MultiPoly<F>& num)
        : num_(num), den_(MultiPoly<F>::constant(num.nvars(), num.proto().one()))
    {
    }
    RatFunc(const MultiPoly<F>& num, const MultiPoly<F>& den) : num_(num), den_(den)
    {
        check(!den_.is_zero(), errc::division_by_zero, "rational function with zero denominator");
        reduce();
    }

    static RatFunc constant(uint32_t nvars, const F& c)
    {
        return RatFunc(MultiPoly<F>::constant(nvars, c));
    }
    static RatFunc variable(uint32_t nvars, const F& proto, uint32_t var, uint32_t exp = 1)
    {
        return RatFunc(MultiPoly<F>::variable(nvars, proto, var, exp));
    }

    const MultiPoly<F>& num() const { return num_; }
    const MultiPoly<F>& den() const { return den_; }
    uint32_t nvars() const { return num_.nvars(); }
    const F& proto() const { return num_.proto(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_poly() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    F constant_value() const
    {
        check(is_constant(), errc::shape_mismatch, "not a constant");
        if (num_.is_zero()) return proto().zero();
        return num_.constant_value() / den_.constant_value();
    }

    RatFunc zero() const { return constant(nvars(), proto().zero()); }
    RatFunc one() const { return constant(nvars(), proto().one()); }
    RatFunc scalar(long long n) const { return constant(nvars(), proto().scalar(n)); }
    RatFunc scalar_big(const BigInt& n) const { return constant(nvars(), proto().scalar_big(n)); }
    unsigned characteristic() const { return proto().characteristic(); }

    RatFunc operator-() const
    {
        RatFunc r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    RatFunc operator+(const RatFunc& o) const
    {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        RatFunc r;
        if (den_.is_one() && o.den_.is_one()) {
            r.num_ = num_ + o.num_;
            r.den_ = den_;
            return r;
        }
        if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
        MultiPoly<F> g = gcd(den_, o.den_);
        MultiPoly<F> b1 = exact_div(den_, g), d1 = exact_div(o.den_, g);
        MultiPoly<F> n = num_ * d1 + o.num_ * b1;
        MultiPoly<F> d = g * b1 * d1;
        if (n.is_zero()) return zero();
        MultiPoly<F> g2 = gcd(n, g);
        if (!g2.is_one()) {
            n = exact_div(n, g2);
            d = exact_div(d, g2);
        }
        r.num_ = n;
        r.den_ = d;
        r.make_monic();
        return r;
    }
    RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
    RatFunc operator*(const RatFunc& o) const
    {
        if (is_zero() || o.is_zero()) return zero();
        RatFunc r;
        if (den_.is_one() && o.den_.is_one()) {
            r.num_ = num_ * o.num_;
            r.den_ = den_;
            return r;
        }
        MultiPoly<F> g1 = gcd(num_, o.den_);
        MultiPoly<F> g2 = gcd(o.num_, den_);
        r.num_ = exact_div(num_, g1) * exact_div(o.num_, g2);
        r.den_ = exact_div(den_, g2) * exact_div(o.den_, g1);
        r.make_monic();
        return r;
    }
    RatFunc inv() const
    {
        check(!is_zero(), errc::division_by_zero, "inverse of zero rational function");
        RatFunc r;
        r.num_ = den_;
        r.den_ = num_;
        r.make_monic();
        return r;
    }
    RatFunc operator/(const RatFunc& o) const { return *this * o.inv(); }
    RatFunc pow(uint64_t k) const
    {
        RatFunc r = one(), b = *this;
        while (k) {
            if (k & 1) r = r * b;
            b = b * b;
            k >>= 1;
        }
        return r;
    }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    std::optional<RatFunc> pth_root() const
    {
        auto rn = num_.pth_root();
        if (!rn) return std::nullopt;
        auto rd = den_.pth_root();
        if (!rd) return std::nullopt;
        RatFunc r;
        r.num_ = *rn;
        r.den_ = *rd;
        return r;
    }

    RatFunc derivative(uint32_t var) const
    {
        RatFunc r;
        if (den_.is_one()) {
            r.num_ = num_.derivative(var);
            r.den_ = den_;
            return r;
        }
        return RatFunc(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
    }

    template <class R, class Embed>
    R evaluate(const std::vector<R>& vars, const R& protoR, Embed&& embed) const
    {
        R n = num_.evaluate(vars, protoR, embed);
        R d = den_.evaluate(vars, protoR, embed);
        return n / d;
    }

    bool involves(uint32_t var) const { return num_.involves(var) || den_.involves(var); }

    std::string str(const std::function<std::string(uint32_t)>& varname) const
    {
        if (den_.is_one()) return num_.str(varname);
        return "(" + num_.str(varname) + ")/(" + den_.str(varname) + ")";
    }

  private:
    static MultiPoly<F> exact_div(const MultiPoly<F>& f, const MultiPoly<F>& g)
    {
        if (g.is_one()) return f;
        auto q = f.divided_by(g);
        check(q.has_value(), errc::internal_check, "gcd produced a non-divisor");
        return *q;
    }
    void reduce()
    {
        if (num_.is_zero()) {
            den_ = MultiPoly<F>::constant(num_.nvars(), num_.proto().one());
            return;
        }
        if (!den_.is_one()) {
            MultiPoly<F> g = gcd(num_, den_);
            if (!g.is_one()) {
                num_ = exact_div(num_, g);
                den_ = exact_div(den_, g);
            }
        }
        make_monic();
    }
    void make_monic()
    {
        if (den_.is_one() || den_.is_zero()) return;
        auto [e, c] = den_.leading();
        if (c.is_one()) return;
        F ic = c.inv();
        num_ = num_.scaled(ic);
        den_ = den_.scaled(ic);
    }

    MultiPoly<F> num_;
    MultiPoly<F> den_;
};

} // namespace wittram
