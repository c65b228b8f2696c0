#pragma once

#include <map>
#include <mutex>
#include <vector>

#include "laurent.hpp"

namespace wittram {

template <class E>
E ring_pow(E b, uint64_t k)
{
    E r = b.one();
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

namespace detail {

inline BigInt bigpow(uint32_t b, uint32_t e)
{
    return boost::multiprecision::pow(BigInt(b), e);
}
inline uint64_t u64pow(uint32_t b, uint32_t e)
{
    uint64_t r = 1;
    while (e--) {
        check(r <= std::numeric_limits<uint64_t>::max() / b, errc::unsupported, "power overflow");
        r *= b;
    }
    return r;
}
inline int64_t mod_inverse(int64_t a, int64_t m)
{
    int64_t r0 = m, r1 = ((a % m) + m) % m;
    int64_t s0 = 0, s1 = 1;
    while (r1) {
        int64_t q = r0 / r1;
        int64_t r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        int64_t s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    check(r0 == 1, errc::shape_mismatch, "not invertible in Z/m");
    return ((s0 % m) + m) % m;
}

/******** universal structure polynomials via the ghost recursion ********/

// sum_{u<=i} p^u X_{base+u}^{p^(i-u)}
inline MultiPoly<Rat> ghost_poly(uint32_t p, uint32_t i, uint32_t nvars, uint32_t base)
{
    Rat proto;
    MultiPoly<Rat> g(nvars, proto);
    for (uint32_t u = 0; u <= i; ++u) {
        auto v = MultiPoly<Rat>::variable(nvars, proto, base + u,
                                          static_cast<uint32_t>(u64pow(p, i - u)));
        g = g + v.scaled(Rat(bigpow(p, u), BigInt(1)));
    }
    return g;
}

struct WittUniv {
    // level i: sum/prod in X_0..X_i,Y_0..Y_i (arity 2(i+1)), neg in X_0..X_i
    std::vector<MultiPoly<Rat>> sum, prod, neg;
    std::vector<MultiPoly<Fq>> sum_p, prod_p, neg_p; // coefficients reduced mod p
};

inline const WittUniv& witt_univ(uint32_t p, uint32_t levels)
{
    static std::map<uint32_t, WittUniv> registry;
    static std::mutex mu;
    std::lock_guard<std::mutex> lk(mu);
    WittUniv& U = registry[p];
    Fq fproto(fq_context(p, 1));
    auto reduce = [&](const MultiPoly<Rat>& q) {
        MultiPoly<Fq> r(q.nvars(), fproto);
        for (auto& [e, c] : q.terms()) {
            check(c.is_integer(), errc::internal_check, "universal polynomial not integral");
            Fq v = fproto.scalar_big(c.numerator());
            if (!v.is_zero()) r.set_coeff(e, v);
        }
        return r;
    };
    // C_i = (G_i - sum_{u<i} p^u C_u^{p^(i-u)}) / p^i, exact over Z
    auto finish = [&](uint32_t i, MultiPoly<Rat> acc, const std::vector<MultiPoly<Rat>>& prev,
                      uint32_t nv, bool binary) {
        for (uint32_t u = 0; u < i; ++u) {
            std::vector<uint32_t> vm(binary ? 2 * (u + 1) : (u + 1));
            for (uint32_t j = 0; j <= u; ++j) {
                vm[j] = j;
                if (binary) vm[u + 1 + j] = (i + 1) + j;
            }
            MultiPoly<Rat> cu = prev[u].reindexed(nv, vm);
            acc = acc - cu.pow(u64pow(p, i - u)).scaled(Rat(bigpow(p, u), BigInt(1)));
        }
        MultiPoly<Rat> ci = acc.scaled(Rat(BigInt(1), bigpow(p, i)));
        for (auto& [e, c] : ci.terms())
            check(c.is_integer(), errc::internal_check, "ghost recursion not integral");
        return ci;
    };
    while (U.sum.size() < levels) {
        uint32_t i = static_cast<uint32_t>(U.sum.size());
        uint32_t nv2 = 2 * (i + 1), nv1 = i + 1;
        MultiPoly<Rat> wx = ghost_poly(p, i, nv2, 0);
        MultiPoly<Rat> wy = ghost_poly(p, i, nv2, i + 1);
        U.sum.push_back(finish(i, wx + wy, U.sum, nv2, true));
        U.prod.push_back(finish(i, wx * wy, U.prod, nv2, true));
        U.neg.push_back(finish(i, -ghost_poly(p, i, nv1, 0), U.neg, nv1, false));
        U.sum_p.push_back(reduce(U.sum[i]));
        U.prod_p.push_back(reduce(U.prod[i]));
        U.neg_p.push_back(reduce(U.neg[i]));
    }
    return U;
}

template <class E>
E univ_eval(const MultiPoly<Rat>& q, const MultiPoly<Fq>& qp, const std::vector<E>& vars,
            const E& z)
{
    if (z.characteristic() == 0)
        return q.evaluate(vars, z, [&](const Rat& c) { return z.scalar_big(c.numerator()); });
    return qp.evaluate(vars, z,
                       [&](const Fq& c) { return z.scalar(static_cast<long long>(c.residue())); });
}

} // namespace detail

/******** truncated p-typical Witt vectors over a component ring ********/

template <class E>
class WittVec {
  public:
    WittVec() = default;
    WittVec(uint32_t p, uint32_t n, const E& proto) : p_(p), proto_(proto.zero()), a_(n, proto.zero())
    {
        check(n >= 1, errc::shape_mismatch, "Witt length must be positive");
        unsigned c = proto.characteristic();
        check(c == 0 || c == p, errc::shape_mismatch, "component characteristic does not match p");
    }

    static WittVec teich(uint32_t p, uint32_t n, const E& x)
    {
        WittVec w(p, n, x);
        w.a_[0] = x;
        return w;
    }

    uint32_t p() const { return p_; }
    uint32_t n() const { return static_cast<uint32_t>(a_.size()); }
    const E& proto() const { return proto_; }
    const E& comp(uint32_t i) const { return a_.at(i); }
    void set(uint32_t i, const E& v) { a_.at(i) = v; }

    bool is_zero() const
    {
        for (auto& c : a_)
            if (!c.is_zero()) return false;
        return true;
    }
    bool operator==(const WittVec& o) const { return p_ == o.p_ && a_ == o.a_; }
    bool operator!=(const WittVec& o) const { return !(*this == o); }

    WittVec operator-() const
    {
        const auto& U = detail::witt_univ(p_, n());
        WittVec r(p_, n(), proto_);
        std::vector<E> vars;
        for (uint32_t i = 0; i < n(); ++i) {
            vars.push_back(a_[i]);
            r.a_[i] = detail::univ_eval(U.neg[i], U.neg_p[i], vars, proto_);
        }
        return r;
    }
    WittVec operator+(const WittVec& o) const
    {
        match(o);
        if (disjoint_support(o)) {
            WittVec r(p_, n(), proto_);
            for (uint32_t i = 0; i < n(); ++i) r.a_[i] = a_[i].is_zero() ? o.a_[i] : a_[i];
            return r;
        }
        const auto& U = detail::witt_univ(p_, n());
        WittVec r(p_, n(), proto_);
        for (uint32_t i = 0; i < n(); ++i) {
            std::vector<E> vars;
            vars.reserve(2 * (i + 1));
            for (uint32_t u = 0; u <= i; ++u) vars.push_back(a_[u]);
            for (uint32_t u = 0; u <= i; ++u) vars.push_back(o.a_[u]);
            r.a_[i] = detail::univ_eval(U.sum[i], U.sum_p[i], vars, proto_);
        }
        return r;
    }
    WittVec operator-(const WittVec& o) const { return *this + (-o); }
    WittVec operator*(const WittVec& o) const
    {
        match(o);
        if (is_zero() || o.is_zero()) return WittVec(p_, n(), proto_);
        if (o.is_teich()) return twisted_by(o.a_[0]);
        if (is_teich()) return o.twisted_by(a_[0]);
        const auto& U = detail::witt_univ(p_, n());
        WittVec r(p_, n(), proto_);
        for (uint32_t i = 0; i < n(); ++i) {
            std::vector<E> vars;
            vars.reserve(2 * (i + 1));
            for (uint32_t u = 0; u <= i; ++u) vars.push_back(a_[u]);
            for (uint32_t u = 0; u <= i; ++u) vars.push_back(o.a_[u]);
            r.a_[i] = detail::univ_eval(U.prod[i], U.prod_p[i], vars, proto_);
        }
        return r;
    }

    // [x] * w = (x w_0, x^p w_1, x^{p^2} w_2, ...)
    WittVec twisted_by(const E& x) const
    {
        WittVec r(p_, n(), proto_);
        E xp = x;
        for (uint32_t i = 0; i < n(); ++i) {
            r.a_[i] = xp * a_[i];
            if (i + 1 < n()) xp = ring_pow(xp, p_);
        }
        return r;
    }

    // componentwise p-th power: the Frobenius endomorphism of W_n in characteristic p
    WittVec frob() const
    {
        check(proto_.characteristic() == p_, errc::unsupported,
              "componentwise Frobenius needs characteristic p");
        WittVec r(p_, n(), proto_);
        for (uint32_t i = 0; i < n(); ++i) r.a_[i] = ring_pow(a_[i], p_);
        return r;
    }

    // structural Frobenius W_{n} -> W_{n-1}; in characteristic p this is
    // truncation composed with the componentwise p-th power
    WittVec frobenius_shift() const
    {
        check(proto_.characteristic() == p_, errc::unsupported,
              "frobenius_shift implemented for characteristic p only");
        check(n() >= 2, errc::shape_mismatch, "frobenius_shift needs length >= 2");
        WittVec r(p_, n() - 1, proto_);
        for (uint32_t i = 0; i + 1 < n(); ++i) r.a_[i] = ring_pow(a_[i], p_);
        return r;
    }

    WittVec vshift(uint32_t u) const // V^u within fixed length (drops overflow)
    {
        WittVec r(p_, n(), proto_);
        for (uint32_t i = 0; i + u < n(); ++i) r.a_[i + u] = a_[i];
        return r;
    }
    WittVec restricted(uint32_t m) const
    {
        check(m >= 1 && m <= n(), errc::shape_mismatch, "bad restriction length");
        WittVec r(p_, m, proto_);
        for (uint32_t i = 0; i < m; ++i) r.a_[i] = a_[i];
        return r;
    }
    WittVec padded(uint32_t m) const // a lift of *this to W_m, m >= n, top filled with zeros
    {
        check(m >= n(), errc::shape_mismatch, "bad padding length");
        WittVec r(p_, m, proto_);
        for (uint32_t i = 0; i < n(); ++i) r.a_[i] = a_[i];
        return r;
    }

    WittVec scaled_int(BigInt k) const
    {
        if (proto_.characteristic() == p_) {
            BigInt m = detail::bigpow(p_, n());
            k %= m;
            if (k < 0) k += m;
        }
        if (k < 0) return (-*this).scaled_int(-k);
        WittVec acc(p_, n(), proto_);
        WittVec base = *this;
        while (k > 0) {
            if ((k & 1) != 0) acc = acc + base;
            k >>= 1;
            if (k > 0) base = base + base;
        }
        return acc;
    }

    std::vector<E> ghost() const
    {
        check(proto_.characteristic() == 0, errc::unsupported, "ghost needs characteristic zero");
        std::vector<E> g;
        for (uint32_t i = 0; i < n(); ++i) {
            E s = proto_.zero();
            for (uint32_t u = 0; u <= i; ++u)
                s = s + ring_pow(a_[u], detail::u64pow(p_, i - u)) *
                            proto_.scalar_big(detail::bigpow(p_, u));
            g.push_back(s);
        }
        return g;
    }
    static WittVec unghost(uint32_t p, const std::vector<E>& g, const E& proto)
    {
        check(proto.characteristic() == 0, errc::unsupported, "unghost needs characteristic zero");
        uint32_t n = static_cast<uint32_t>(g.size());
        WittVec w(p, n, proto);
        for (uint32_t i = 0; i < n; ++i) {
            E s = g[i];
            for (uint32_t u = 0; u < i; ++u)
                s = s - ring_pow(w.a_[u], detail::u64pow(p, i - u)) *
                            proto.scalar_big(detail::bigpow(p, u));
            w.a_[i] = s * proto.scalar_big(detail::bigpow(p, i)).inv();
        }
        return w;
    }

  private:
    bool is_teich() const
    {
        for (uint32_t i = 1; i < n(); ++i)
            if (!a_[i].is_zero()) return false;
        return true;
    }
    bool disjoint_support(const WittVec& o) const
    {
        for (uint32_t i = 0; i < n(); ++i)
            if (!a_[i].is_zero() && !o.a_[i].is_zero()) return false;
        return true;
    }
    void match(const WittVec& o) const
    {
        check(p_ == o.p_ && n() == o.n(), errc::shape_mismatch, "mixed Witt shapes");
    }

    uint32_t p_ = 0;
    E proto_{};
    std::vector<E> a_;
};

/******** V-adic monomial decomposition ********/

// V^s([a] [t]^i) with a in the coefficient field
template <class F>
struct TeichMono {
    uint32_t s = 0;
    RatFunc<F> a;
    int64_t i = 0;
};

// V^s(b * [t]^j) with b a Witt vector over the coefficient field
template <class F>
struct VTerm {
    uint32_t s = 0;
    WittVec<RatFunc<F>> b;
    int64_t j = 0;
};

// exact: V^s(b [t]^j) has component s+u equal to b_u t^{j p^u}, no carries
template <class F>
WittVec<LaurentElem<F>> recompose(const VTerm<F>& term, uint32_t n)
{
    uint32_t nv = term.b.proto().nvars();
    const F fp = term.b.proto().proto();
    WittVec<LaurentElem<F>> w(term.b.p(), n, LaurentElem<F>(nv, fp));
    check(term.s + term.b.n() == n, errc::shape_mismatch, "V-term shape does not match length");
    for (uint32_t u = 0; u < term.b.n(); ++u) {
        if (term.b.comp(u).is_zero()) continue;
        int64_t e = term.j * static_cast<int64_t>(detail::u64pow(term.b.p(), u));
        w.set(term.s + u, LaurentElem<F>::monomial(nv, term.b.comp(u), e));
    }
    return w;
}

// decomposition w = sum of V^s([a][t]^i); peels level by level, the leftover
// carries land strictly higher and are absorbed by later levels.  Truncated
// slots are peeled through their known window; the caller is responsible for
// choosing a window wide enough for its purpose.
template <class F>
std::vector<TeichMono<F>> to_teich_monomials(WittVec<LaurentElem<F>> w)
{
    std::vector<TeichMono<F>> out;
    const uint32_t n = w.n();
    const uint32_t nv = w.proto().nvars();
    for (uint32_t u = 0; u < n; ++u) {
        LaurentElem<F> cur = w.comp(u);
        if (cur.known_zero()) continue;
        WittVec<LaurentElem<F>> acc(w.p(), n, w.proto());
        for (auto& [k, c] : cur.terms()) {
            out.push_back(TeichMono<F>{u, c, k});
            WittVec<LaurentElem<F>> mono(w.p(), n, w.proto());
            mono.set(u, LaurentElem<F>::monomial(nv, c, k));
            acc = acc + mono;
        }
        w = w - acc;
        check(w.comp(u).known_zero(), errc::internal_check, "level peel left a residue");
    }
    for (uint32_t u = 0; u < n; ++u)
        check(w.comp(u).known_zero(), errc::internal_check, "monomial decomposition incomplete");
    return out;
}

/******** truncated power series in an auxiliary variable T ********/

template <class E>
class PSeries {
  public:
    PSeries(uint32_t cap, const E& proto) : proto_(proto.zero()), c_(cap, proto.zero()) {}
    static PSeries unit(uint32_t cap, const E& proto)
    {
        PSeries s(cap, proto);
        s.c_[0] = proto.one();
        return s;
    }

    uint32_t cap() const { return static_cast<uint32_t>(c_.size()); }
    const E& coeff(uint32_t k) const { return c_.at(k); }
    void set(uint32_t k, const E& v) { c_.at(k) = v; }

    PSeries operator+(const PSeries& o) const
    {
        PSeries r = *this;
        for (uint32_t k = 0; k < cap(); ++k) r.c_[k] = r.c_[k] + o.c_.at(k);
        return r;
    }
    PSeries operator-(const PSeries& o) const
    {
        PSeries r = *this;
        for (uint32_t k = 0; k < cap(); ++k) r.c_[k] = r.c_[k] - o.c_.at(k);
        return r;
    }
    PSeries operator*(const PSeries& o) const
    {
        PSeries r(cap(), proto());
        for (uint32_t i = 0; i < cap(); ++i) {
            if (c_[i].is_zero()) continue;
            for (uint32_t j = 0; i + j < cap(); ++j) {
                if (o.c_[j].is_zero()) continue;
                r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
            }
        }
        return r;
    }
    // multiply by (1 - a T^m)
    PSeries times_one_minus(const E& a, uint32_t m) const
    {
        PSeries r = *this;
        for (uint32_t k = cap(); k-- > m;) r.c_[k] = r.c_[k] - a * c_[k - m];
        return r;
    }
    // multiply by (1 - a T^m)^{-1} = sum_k a^k T^{mk}
    PSeries over_one_minus(const E& a, uint32_t m) const
    {
        check(m >= 1, errc::shape_mismatch, "factor exponent must be positive");
        PSeries r = *this;
        for (uint32_t k = m; k < cap(); ++k) r.c_[k] = r.c_[k] + a * r.c_[k - m];
        return r;
    }
    PSeries inverted() const
    {
        check(!c_[0].is_zero(), errc::division_by_zero, "series inverse needs a unit constant term");
        E v = c_[0].inv();
        PSeries r(cap(), proto());
        r.c_[0] = v;
        for (uint32_t k = 1; k < cap(); ++k) {
            E s = proto().zero();
            for (uint32_t j = 0; j < k; ++j) s = s + r.c_[j] * c_[k - j];
            r.c_[k] = -(s * v);
        }
        return r;
    }
    // -T dlog(s) = -T s'/s, as a series
    PSeries neg_t_dlog() const
    {
        PSeries d(cap(), proto());
        for (uint32_t k = 1; k < cap(); ++k) d.c_[k] = -(c_[k] * proto().scalar(k));
        return d * inverted();
    }
    bool is_unit_one() const
    {
        if (!c_[0].is_one()) return false;
        for (uint32_t k = 1; k < cap(); ++k)
            if (!c_[k].is_zero()) return false;
        return true;
    }

    const E& proto() const { return proto_; }

  private:
    E proto_{};
    std::vector<E> c_;
};

/******** unit-series encoding of Witt vectors ********/

// a |-> prod_i (1 - a_i T^{p^i}), truncated at cap (p^{n-1}+1 suffices)
template <class E>
PSeries<E> ps_encode(const WittVec<E>& w, uint32_t cap)
{
    PSeries<E> s = PSeries<E>::unit(cap, w.proto());
    for (uint32_t i = 0; i < w.n(); ++i) {
        uint64_t m = detail::u64pow(w.p(), i);
        if (m >= cap) break;
        if (!w.comp(i).is_zero()) s = s.times_one_minus(w.comp(i), static_cast<uint32_t>(m));
    }
    return s;
}

// greedy factorization of a 1-unit as prod_{m>=1} (1 - c_m T^m); returns the
// nonzero c_m
template <class E>
std::map<uint32_t, E> ps_normal_form(PSeries<E> s)
{
    check(s.coeff(0).is_one(), errc::shape_mismatch, "normal form needs a 1-unit");
    std::map<uint32_t, E> out;
    for (uint32_t m = 1; m < s.cap(); ++m) {
        E a = s.coeff(m);
        if (a.is_zero()) continue;
        E cm = -a;
        out.emplace(m, cm);
        s = s.over_one_minus(cm, m); // strip the factor (1 - c_m T^m)
    }
    check(s.is_unit_one(), errc::internal_check, "greedy factorization left a residue");
    return out;
}

// read the p-power slots of a normal form back into a Witt vector
template <class E>
WittVec<E> ps_decode(uint32_t p, uint32_t n, const std::map<uint32_t, E>& nf, const E& proto)
{
    WittVec<E> w(p, n, proto);
    for (uint32_t i = 0; i < n; ++i) {
        uint64_t m = detail::u64pow(p, i);
        auto it = nf.find(static_cast<uint32_t>(m));
        if (it != nf.end()) w.set(i, it->second);
    }
    return w;
}

} // namespace wittram
