#pragma once
/******** independent residue oracle through ghost coordinates ********/
// Over a prime residue field every datum lifts coefficient-wise to
// characteristic zero, and the k-th ghost component of Res_t(w dlog f) is the
// classical residue Res_t(w_k(w~) df~/f~).  Computing those residues with
// plain Laurent arithmetic, descending through unghost, and reducing mod p
// checks the symbolic machinery along a path that shares none of its formulas.

#include "wittram/symbol.hpp"

namespace wittram {

/******** coefficient-wise lifts F_p -> Q ********/

inline Rat lift_scalar(const Fq& c)
{
    check(c.context()->d == 1, errc::unsupported, "ghost oracle lifts prime fields only");
    return Rat{}.scalar_big(BigInt(c.residue()));
}

inline MultiPoly<Rat> lift_poly(const MultiPoly<Fq>& f)
{
    MultiPoly<Rat> r(f.nvars(), Rat{});
    for (const auto& [e, c] : f.terms()) r.set_coeff(e, lift_scalar(c));
    return r;
}

inline RatFunc<Rat> lift_ratfunc(const RatFunc<Fq>& f)
{
    return RatFunc<Rat>(lift_poly(f.num()), lift_poly(f.den()));
}

inline LaurentElem<Rat> lift_laurent(const LaurentElem<Fq>& a)
{
    LaurentElem<Rat> r(a.nvars(), Rat{}, a.prec());
    for (const auto& [k, c] : a.terms()) r.set(k, lift_ratfunc(c));
    return r;
}

/******** reductions Q -> F_p ********/

inline Fq reduce_scalar(const Rat& c, const FqCtx* ctx)
{
    Fq proto(ctx);
    Fq den = proto.scalar_big(c.denominator());
    check(!den.is_zero(), errc::internal_check, "reduction hits a p in a denominator");
    return proto.scalar_big(c.numerator()) * den.inv();
}

inline MultiPoly<Fq> reduce_poly(const MultiPoly<Rat>& f, const FqCtx* ctx)
{
    MultiPoly<Fq> r(f.nvars(), Fq(ctx));
    for (const auto& [e, c] : f.terms()) {
        Fq v = reduce_scalar(c, ctx);
        if (!v.is_zero()) r.set_coeff(e, v);
    }
    return r;
}

// rescale so the denominator has coprime integer coefficients, then reduce
inline RatFunc<Fq> reduce_ratfunc(const RatFunc<Rat>& f, const FqCtx* ctx)
{
    BigInt lcm = 1, gcd = 0;
    for (const auto& [e, c] : f.den().terms())
        lcm = boost::multiprecision::lcm(lcm, c.denominator());
    for (const auto& [e, c] : f.den().terms())
        gcd = boost::multiprecision::gcd(gcd, BigInt(c.numerator() * (lcm / c.denominator())));
    check(gcd != 0, errc::division_by_zero, "reduction of a zero denominator");
    Rat scale{BigRat(lcm, gcd)};
    MultiPoly<Rat> num = f.num().scaled(scale), den = f.den().scaled(scale);
    MultiPoly<Fq> denp = reduce_poly(den, ctx);
    check(!denp.is_zero(), errc::internal_check, "denominator vanishes mod p after normalization");
    return RatFunc<Fq>(reduce_poly(num, ctx), denp);
}

inline WittVec<RatFunc<Fq>> reduce_witt(const WittVec<RatFunc<Rat>>& w, const FqCtx* ctx)
{
    uint32_t nv = w.proto().nvars();
    WittVec<RatFunc<Fq>> r(w.p(), w.n(), RatFunc<Fq>::constant(nv, Fq(ctx)));
    for (uint32_t i = 0; i < w.n(); ++i) r.set(i, reduce_ratfunc(w.comp(i), ctx));
    return r;
}

/******** classical residues of lifted forms ********/

// Res_t(g dlog f) for characteristic-zero Laurent data, by series expansion
inline RatFunc<Rat> classical_residue_dlog(const LaurentElem<Rat>& g, const LaurentElem<Rat>& f)
{
    const uint32_t nv = g.nvars();
    if (g.known_zero()) return RatFunc<Rat>::constant(nv, Rat{});
    // dlog f needs exponents through -1 - vfloor(g), shifted by v(f)
    int64_t need = -g.vfloor() - *f.valuation() + 2;
    LaurentElem<Rat> dl = f.t_derivative() * f.inverted(need);
    LaurentElem<Rat> prod = g * dl;
    check(prod.prec() > -1, errc::insufficient_precision, "residue window not determined");
    return prod.coeff(-1);
}

// ghost residue of mult * V^r([a][t]^i) dV^s([b][t]^j), sidestepping the
// closed-form residue rule: the k-th ghost of each factor is an explicit
// Laurent monomial; they are differentiated and multiplied as series
inline WittVec<RatFunc<Fq>> ghost_residue_term(const OneFormTerm<Fq>& om, uint32_t p, uint32_t n,
                                               const FqCtx* ctx)
{
    const uint32_t nv = om.a.nvars();
    const RatFunc<Rat> zero = RatFunc<Rat>::constant(nv, Rat{});
    RatFunc<Rat> a = lift_ratfunc(om.a), b = lift_ratfunc(om.b);
    std::vector<RatFunc<Rat>> ghosts;
    for (uint32_t k = 0; k < n; ++k) {
        if (k < std::max(om.r, om.s)) {
            ghosts.push_back(zero);
            continue;
        }
        uint64_t er = detail::u64pow(p, k - om.r), es = detail::u64pow(p, k - om.s);
        auto cpow = [&](uint32_t u) {
            return RatFunc<Rat>::constant(nv, Rat{}.scalar_big(detail::bigpow(p, u)));
        };
        LaurentElem<Rat> xpart = LaurentElem<Rat>::monomial(
            nv, a.pow(er) * cpow(om.r), om.i * static_cast<int64_t>(er));
        LaurentElem<Rat> ypart = LaurentElem<Rat>::monomial(
            nv, b.pow(es) * cpow(om.s), om.j * static_cast<int64_t>(es));
        LaurentElem<Rat> eta = xpart * ypart.t_derivative();
        RatFunc<Rat> scale = RatFunc<Rat>::constant(
            nv, Rat{}.scalar_big(BigInt(om.mult)) * Rat{}.scalar_big(detail::bigpow(p, k)).inv());
        ghosts.push_back(eta.coeff(-1) * scale);
    }
    auto w = WittVec<RatFunc<Rat>>::unghost(p, ghosts, zero);
    return reduce_witt(w, ctx);
}

// ghost oracle for the full pairing <w, f> = Res_t(w dlog f)
inline WittVec<RatFunc<Fq>> ghost_symbol(const WittLaurent<Fq>& w, const LaurentElem<Fq>& f,
                                         const FqCtx* ctx)
{
    const uint32_t p = w.p(), n = w.n();
    const uint32_t nv = w.proto().nvars();
    WittVec<LaurentElem<Rat>> lifted(p, n, LaurentElem<Rat>(nv, Rat{}));
    for (uint32_t u = 0; u < n; ++u) {
        check(w.comp(u).exact(), errc::insufficient_precision, "ghost oracle needs exact input");
        lifted.set(u, lift_laurent(w.comp(u)));
    }
    LaurentElem<Rat> fl = lift_laurent(f);
    std::vector<RatFunc<Rat>> ghosts;
    for (const auto& g : lifted.ghost()) ghosts.push_back(classical_residue_dlog(g, fl));
    auto res = WittVec<RatFunc<Rat>>::unghost(p, ghosts, RatFunc<Rat>::constant(nv, Rat{}));
    return reduce_witt(res, ctx);
}

} // namespace wittram
