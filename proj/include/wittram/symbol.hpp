#pragma once
/******** residue calculus and local symbols over K((t)) ********/
// One-forms are finite sums  mult * V^r([a][t]^i) dV^s([b][t]^j)  with a, b in
// the coefficient field; the t-residue of a single summand has a closed form.
// The pairing <w, f> = Res_t(w dlog f) is assembled by factoring the unit part
// of f into 1-units (1 - c t^m) and matching every Teichmueller monomial of w
// against the finitely many expansion terms that can meet the support
// condition, so no series is ever expanded to a guessed precision.

#include <numeric>

#include "wittram/filtration.hpp"

namespace wittram {

/******** one-form terms and their residues ********/

template <class F>
struct OneFormTerm {
    uint32_t r = 0;
    int64_t i = 0;
    RatFunc<F> a; // V^r([a][t]^i)
    uint32_t s = 0;
    int64_t j = 0;
    RatFunc<F> b; // d V^s([b][t]^j)
    int64_t mult = 1;
};

// Res_t(V^r([a][t]^i) dV^s([b][t]^j)) vanishes unless j p^r + i p^s = 0, where
// it equals sgn(j) gcd(i,j) V^{r+s-c}([a^{p^{s-c}} b^{p^{r-c}}]), c = min(r,s)
template <class F>
WittVec<RatFunc<F>> residue_term(const OneFormTerm<F>& om, uint32_t p, uint32_t n)
{
    WittVec<RatFunc<F>> zero(p, n, om.a.zero());
    if (om.mult == 0 || om.j == 0) return zero;
    const int64_t pr = static_cast<int64_t>(detail::u64pow(p, om.r));
    const int64_t ps = static_cast<int64_t>(detail::u64pow(p, om.s));
    if (om.j * pr + om.i * ps != 0) return zero;
    const uint32_t c = std::min(om.r, om.s);
    RatFunc<F> x = om.a.pow(detail::u64pow(p, om.s - c)) * om.b.pow(detail::u64pow(p, om.r - c));
    BigInt m = BigInt(om.mult) * (om.j > 0 ? 1 : -1)
             * BigInt(std::gcd(std::abs(om.i), std::abs(om.j)));
    return WittVec<RatFunc<F>>::teich(p, n, x).vshift(om.r + om.s - c).scaled_int(m);
}

/******** greedy 1-unit factorization ********/

template <class F>
struct UnitFactorization {
    int64_t val = 0; // v_t(f)
    RatFunc<F> lead; // leading coefficient
    std::vector<std::pair<int64_t, RatFunc<F>>> factors; // f ~ lead t^val prod (1 - c t^m)
};

template <class F>
UnitFactorization<F> unit_factorization(const LaurentElem<F>& f, int64_t cap)
{
    check(!f.known_zero(), errc::zero_input, "cannot factor zero");
    int64_t val = *f.valuation();
    check(f.exact() || f.prec() > val + cap, errc::insufficient_precision,
          "factorization window exceeds the known precision");
    UnitFactorization<F> out;
    out.val = val;
    out.lead = f.coeff(val);
    RatFunc<F> linv = out.lead.inv();
    std::vector<RatFunc<F>> u(static_cast<size_t>(cap) + 1, out.lead.zero());
    for (const auto& [k, c] : f.terms())
        if (k - val <= cap) u[static_cast<size_t>(k - val)] = c * linv;
    for (int64_t m = 1; m <= cap; ++m) {
        RatFunc<F> cm = -u[static_cast<size_t>(m)];
        if (cm.is_zero()) continue;
        out.factors.emplace_back(m, cm);
        // divide by (1 - cm t^m): u[k] += cm u[k-m], ascending
        for (int64_t k = m; k <= cap; ++k)
            u[static_cast<size_t>(k)] = u[static_cast<size_t>(k)] + cm * u[static_cast<size_t>(k - m)];
    }
    return out;
}

/******** the local symbol ********/

// <w, f> = Res_t(w dlog f) in W_n(K).  With f = c_0 t^k prod_m (1 - c_m t^m),
//   dlog f = k dlog[t]
//          - sum_m sum_{i>=0} [c_m t^m]^i d[c_m t^m]
//          - sum_m sum_{0<s<n} sum_{j>=1, p∤j} j^{-1} dV^s([c_m^j t^{mj}]),
// and pairing V^rho([alpha][t]^kappa) against a term forces for kappa < 0
//   family A:  i + 1 = -kappa / (m p^rho),
//   family B:  j = -kappa p^s / (m p^rho) prime to p,
// while kappa = 0 pairs only against k dlog[t] and kappa > 0 dies.
template <class F>
WittVec<RatFunc<F>> local_symbol(const WittLaurent<F>& w, const LaurentElem<F>& f)
{
    const uint32_t p = w.p(), n = w.n();
    WittVec<RatFunc<F>> total(p, n, w.proto().coeff_proto());

    int64_t depth = 0;
    for (uint32_t u = 0; u < n; ++u) {
        const auto& sl = w.comp(u);
        if (!sl.exact())
            check(sl.prec() >= 1, errc::insufficient_precision,
                  "symbol needs the polar window and the constant terms");
        if (!sl.known_zero()) depth = std::max(depth, -sl.vfloor());
    }
    std::vector<int64_t> pw(n + 1);
    for (uint32_t k = 0; k <= n; ++k) pw[k] = static_cast<int64_t>(detail::u64pow(p, k));
    const int64_t pn = pw[n];
    const int64_t cap = depth * pw[n - 1] + 1;
    auto fac = unit_factorization(f, cap);

    for (const auto& mo : to_teich_monomials(w)) { // V^rho([alpha][t]^kappa)
        const uint32_t rho = mo.s;
        const int64_t kappa = mo.i;
        const int64_t prho = pw[rho];
        if (kappa > 0) continue;
        if (kappa == 0) {
            if (fac.val != 0)
                total = total + WittVec<RatFunc<F>>::teich(p, n, mo.a)
                                    .vshift(rho)
                                    .scaled_int(BigInt(fac.val));
            continue;
        }
        for (const auto& [m, cm] : fac.factors) {
            if ((-kappa) % (m * prho) == 0) { // family A
                int64_t i = (-kappa) / (m * prho) - 1;
                OneFormTerm<F> om;
                om.r = rho;
                om.a = mo.a * cm.pow(static_cast<uint64_t>(i) * static_cast<uint64_t>(prho));
                om.i = kappa + m * i * prho;
                om.s = 0;
                om.j = m;
                om.b = cm;
                om.mult = -1;
                total = total + residue_term(om, p, n);
            }
            for (uint32_t s = 1; s < n; ++s) { // family B
                if ((-kappa * pw[s]) % (m * prho) != 0) continue;
                int64_t j = (-kappa * pw[s]) / (m * prho);
                if (j % p == 0) continue;
                OneFormTerm<F> om;
                om.r = rho;
                om.i = kappa;
                om.a = mo.a;
                om.s = s;
                om.j = m * j;
                om.b = cm.pow(static_cast<uint64_t>(j));
                om.mult = -detail::mod_inverse(j % pn, pn);
                total = total + residue_term(om, p, n);
            }
        }
    }
    return total;
}

/******** coefficient-field twists ********/

// substitute z <- z (1 + z^{p^e} t)^{-1} for each listed variable and
// re-expand every slot through the given precision
template <class F>
WittLaurent<F> sigma_twist(const WittLaurent<F>& w, const std::vector<uint32_t>& zvars,
                           uint32_t e, int64_t prec)
{
    const uint32_t nv = w.proto().nvars();
    const F fp = w.proto().proto();
    const uint64_t q = detail::u64pow(w.p(), e);
    std::vector<LaurentElem<F>> images;
    images.reserve(nv);
    for (uint32_t v = 0; v < nv; ++v)
        images.push_back(LaurentElem<F>::constant(nv, RatFunc<F>::variable(nv, fp, v)));
    for (uint32_t zv : zvars) {
        LaurentElem<F> zc = LaurentElem<F>::constant(nv, RatFunc<F>::variable(nv, fp, zv));
        LaurentElem<F> unit = zc.one() +
            LaurentElem<F>::monomial(nv, RatFunc<F>::variable(nv, fp, zv, static_cast<uint32_t>(q)), 1);
        images[zv] = zc * unit.inverted(prec);
    }
    WittLaurent<F> out(w.p(), w.n(), w.proto());
    for (uint32_t u = 0; u < w.n(); ++u) out.set(u, w.comp(u).substituted(images, prec));
    return out;
}

// the symbol against a twisted vector, validated by recomputing at doubled
// precision; the working window derives from the polar depth of w
template <class F>
WittVec<RatFunc<F>> twisted_symbol(const WittLaurent<F>& w, const std::vector<uint32_t>& zvars,
                                   uint32_t e, const LaurentElem<F>& f)
{
    int64_t depth = 1;
    for (uint32_t u = 0; u < w.n(); ++u)
        if (!w.comp(u).known_zero()) depth = std::max(depth, -w.comp(u).vfloor());
    // the peel below the symbol erodes precision by at most depth * p^{n-1}
    // per level; the doubling gate then certifies the window was wide enough
    const int64_t base = static_cast<int64_t>(w.n()) * (depth + 1)
                       * static_cast<int64_t>(detail::u64pow(w.p(), w.n() - 1)) + 2;
    auto once = [&](int64_t prec) {
        return local_symbol(sigma_twist(w, zvars, e, prec), f);
    };
    WittVec<RatFunc<F>> lo = once(base), hi = once(2 * base + 4);
    check(lo == hi, errc::insufficient_precision,
          "twisted symbol did not stabilize under precision doubling");
    return lo;
}

/******** reciprocity over the projective line ********/

// multiplicity of x = lambda as a root of h
template <class F>
uint32_t root_multiplicity(MultiPoly<F> h, uint32_t xvar, const F& lambda)
{
    check(!h.is_zero(), errc::zero_input, "root multiplicity of the zero polynomial");
    MultiPoly<F> lin = MultiPoly<F>::variable(h.nvars(), lambda, xvar)
                     - MultiPoly<F>::constant(h.nvars(), lambda);
    uint32_t k = 0;
    while (true) {
        auto q = h.divided_by(lin);
        if (!q) return k;
        h = *q;
        ++k;
    }
}

template <class F>
struct PlaceSymbol {
    bool at_infinity = false;
    F lambda;                  // meaningful when finite
    WittVec<RatFunc<F>> value; // local symbol there
};

namespace detail {

template <class F>
std::vector<F> all_field_elements(const FqCtx* ctx)
{
    Fq g = Fq::generator(ctx);
    std::vector<F> out;
    std::vector<long long> digits(ctx->d, 0);
    while (true) {
        Fq v(ctx, 0);
        Fq pw(ctx, 1);
        for (uint32_t i = 0; i < ctx->d; ++i) {
            v = v + Fq(ctx, digits[i]) * pw;
            pw = pw * g;
        }
        out.push_back(v);
        uint32_t i = 0;
        for (; i < ctx->d; ++i) {
            if (++digits[i] < ctx->p) break;
            digits[i] = 0;
        }
        if (i == ctx->d) break;
    }
    return out;
}

} // namespace detail

// Local symbols of (a, f] over the completions of K(x) at x = lambda in the
// residue field and at infinity.  Any zero or pole escaping those places
// raises non_rational_place.
template <class Fd>
std::vector<PlaceSymbol<Fd>> place_symbols(const WittVec<RatFunc<Fd>>& a, const RatFunc<Fd>& f,
                                           const FqCtx* ctx, uint32_t xvar, uint32_t tvar)
{
    static_assert(std::is_same_v<Fd, Fq>, "places are enumerated over a finite residue field");
    const uint32_t p = a.p(), n = a.n();
    const uint32_t nv = f.num().nvars();
    const Fd fp = Fd(ctx, 0);
    check(!f.num().is_zero(), errc::zero_input, "reciprocity needs a nonzero function");

    // degree bookkeeping: every x-dependence of the tracked polynomials must
    // be exhausted by roots in the residue field
    std::vector<const MultiPoly<Fd>*> tracked{&f.num(), &f.den()};
    for (uint32_t u = 0; u < n; ++u) tracked.push_back(&a.comp(u).den());
    std::vector<Fd> lams = detail::all_field_elements<Fd>(ctx);
    for (const MultiPoly<Fd>* h : tracked) {
        uint32_t total = 0;
        for (const Fd& lam : lams) total += root_multiplicity(*h, xvar, lam);
        check(total == h->degree_in(xvar), errc::non_rational_place,
              "zeros or poles over a place not rational over the residue field");
    }

    auto symbol_at = [&](const std::vector<RatFunc<Fd>>& images, int64_t depth,
                         int64_t fshift) -> WittVec<RatFunc<Fd>> {
        auto once = [&](int64_t margin) {
            const int64_t cap = (depth + 1) * static_cast<int64_t>(detail::u64pow(p, n - 1)) + 1;
            const int64_t wprec = static_cast<int64_t>(n) * cap + 2 + margin;
            const int64_t fprec = fshift + cap + 2 + margin;
            WittLaurent<Fd> w(p, n, LaurentElem<Fd>(nv, fp));
            for (uint32_t u = 0; u < n; ++u) {
                RatFunc<Fd> g = a.comp(u).num().evaluate(images, images[0], [&](const Fd& c) {
                    return RatFunc<Fd>::constant(nv, c);
                });
                RatFunc<Fd> h = a.comp(u).den().evaluate(images, images[0], [&](const Fd& c) {
                    return RatFunc<Fd>::constant(nv, c);
                });
                w.set(u, laurent_expand(g * h.inv(), tvar, wprec));
            }
            RatFunc<Fd> fn = f.num().evaluate(images, images[0], [&](const Fd& c) {
                return RatFunc<Fd>::constant(nv, c);
            });
            RatFunc<Fd> fd = f.den().evaluate(images, images[0], [&](const Fd& c) {
                return RatFunc<Fd>::constant(nv, c);
            });
            return local_symbol(w, laurent_expand(fn * fd.inv(), tvar, fprec));
        };
        const int64_t big = static_cast<int64_t>(n) * (depth + 2)
                          * static_cast<int64_t>(detail::u64pow(p, n - 1)) + 4;
        auto lo = once(0), hi = once(big);
        check(lo == hi, errc::insufficient_precision,
              "place symbol did not stabilize under precision doubling");
        return lo;
    };

    std::vector<PlaceSymbol<Fd>> out;
    for (const Fd& lam : lams) {
        uint32_t interest = root_multiplicity(f.num(), xvar, lam) +
                            root_multiplicity(f.den(), xvar, lam);
        int64_t depth = 0;
        for (uint32_t u = 0; u < n; ++u)
            depth = std::max<int64_t>(depth, root_multiplicity(a.comp(u).den(), xvar, lam));
        if (interest == 0 && depth == 0) continue;
        // x <- lambda + t
        std::vector<RatFunc<Fd>> images;
        for (uint32_t v = 0; v < nv; ++v) images.push_back(RatFunc<Fd>::variable(nv, fp, v));
        images[xvar] = RatFunc<Fd>::constant(nv, lam) + RatFunc<Fd>::variable(nv, fp, tvar);
        out.push_back(PlaceSymbol<Fd>{false, lam, symbol_at(images, depth, interest)});
    }
    {
        // x <- 1/t
        int64_t vinf_f = static_cast<int64_t>(f.den().degree_in(xvar)) -
                         static_cast<int64_t>(f.num().degree_in(xvar));
        int64_t depth = 0;
        for (uint32_t u = 0; u < n; ++u)
            depth = std::max<int64_t>(depth,
                static_cast<int64_t>(a.comp(u).num().degree_in(xvar)) -
                static_cast<int64_t>(a.comp(u).den().degree_in(xvar)));
        if (vinf_f != 0 || depth > 0) {
            std::vector<RatFunc<Fd>> images;
            for (uint32_t v = 0; v < nv; ++v) images.push_back(RatFunc<Fd>::variable(nv, fp, v));
            images[xvar] = RatFunc<Fd>::variable(nv, fp, tvar).inv();
            out.push_back(PlaceSymbol<Fd>{true, fp,
                symbol_at(images, std::max<int64_t>(depth, 0), std::abs(vinf_f))});
        }
    }
    return out;
}

template <class Fd>
WittVec<RatFunc<Fd>> reciprocity_sum(const WittVec<RatFunc<Fd>>& a, const RatFunc<Fd>& f,
                                     const FqCtx* ctx, uint32_t xvar, uint32_t tvar)
{
    WittVec<RatFunc<Fd>> total(a.p(), a.n(), a.proto());
    for (const auto& ps : place_symbols(a, f, ctx, xvar, tvar)) total = total + ps.value;
    return total;
}

} // namespace wittram
