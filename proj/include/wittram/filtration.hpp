#pragma once
/******** ramification filtrations on Witt vectors over K((t)) ********/
// Vectors in W_n(K((t))) carry descending integer filtrations measured through
// the t-adic valuation.  The logarithmic level of w = (a_0, ..., a_{n-1}) is
//   max_i max(0, -p^{n-1-i} v(a_i)),
// and the refined level additionally demands strict inequality in the single
// slot whose weight divides the bound.  Both are decided slot by slot.  The
// graded pieces of the log filtration are represented by V-terms with monomial
// slots, which yields an exact canonical form: read off the leading V-term,
// subtract it, and recurse at strictly smaller level.

#include "wittram/witt.hpp"

namespace wittram {

template <class F>
using WittLaurent = WittVec<LaurentElem<F>>;

/******** slot depth ********/

// max(0, -wt * v(a)); a finite-precision slot must at least pin its polar part
template <class F>
int64_t slot_depth(const LaurentElem<F>& a, int64_t wt)
{
    if (!a.exact())
        check(a.prec() >= 0, errc::insufficient_precision,
              "slot depth unknown: polar part not determined at this precision");
    if (a.known_zero()) return 0;
    return std::max<int64_t>(0, -wt * a.vfloor());
}

template <class F>
int64_t slot_weight(const WittLaurent<F>& w, uint32_t i)
{
    return static_cast<int64_t>(detail::u64pow(w.p(), w.n() - 1 - i));
}

/******** log filtration ********/

template <class F>
int64_t log_level(const WittLaurent<F>& w)
{
    int64_t lvl = 0;
    for (uint32_t i = 0; i < w.n(); ++i)
        lvl = std::max(lvl, slot_depth(w.comp(i), slot_weight(w, i)));
    return lvl;
}

template <class F>
bool log_member(const WittLaurent<F>& w, int64_t j)
{
    return j >= 0 && log_level(w) <= j;
}

template <class F>
bool is_integral(const WittLaurent<F>& w)
{
    return log_level(w) == 0;
}

/******** refined filtration ********/

// membership at level m: every slot depth is at most m, and when ord_p(m) < n
// the slot n-1-ord_p(m), the only one whose weight can reach the bound,
// stays strictly below it
template <class F>
bool matsuda_member(const WittLaurent<F>& w, int64_t m)
{
    if (m < 0) return false;
    const uint32_t n = w.n();
    const int64_t p = w.p();
    for (uint32_t i = 0; i < n; ++i)
        if (slot_depth(w.comp(i), slot_weight(w, i)) > m) return false;
    if (m == 0) return true;
    int64_t m0 = m;
    uint32_t e = 0;
    while (m0 % p == 0 && e < n) { m0 /= p; ++e; }
    if (e >= n) return true;
    uint32_t istar = n - 1 - e;
    return slot_depth(w.comp(istar), slot_weight(w, istar)) < m;
}

template <class F>
int64_t matsuda_level(const WittLaurent<F>& w)
{
    int64_t r = log_level(w);
    if (r == 0) return 0;
    return matsuda_member(w, r) ? r : r + 1;
}

/******** leading V-term of the log grading ********/

// At level r = p^e r_0 (p not dividing r_0) only slots i with p^{n-1-i} | r
// can meet the bound; their leading exponents form the orbit j, jp, jp^2, ...
// of a single V-term V^s(b [t]^j):
//   e <= n-2:  s = n-1-e, j = -r_0,            b in W_{e+1}(K)
//   e >= n-1:  s = 0,     j = -p^{e-n+1} r_0,  b in W_n(K)
template <class F>
struct LeadingTerm {
    int64_t level = 0; // log level r >= 1
    uint32_t e = 0;    // ord_p(r)
    int64_t r0 = 0;    // r / p^e
    VTerm<F> term;
};

template <class F>
LeadingTerm<F> leading_term(const WittLaurent<F>& w)
{
    const uint32_t n = w.n();
    const uint32_t p = w.p();
    const int64_t r = log_level(w);
    check(r >= 1, errc::zero_input, "leading term needs a vector of positive level");

    LeadingTerm<F> out;
    out.level = r;
    out.r0 = r;
    while (out.r0 % p == 0) { out.r0 /= p; ++out.e; }

    const uint32_t s = out.e + 1 >= n ? 0 : n - 1 - out.e;
    const int64_t j = out.e + 1 >= n
        ? -out.r0 * static_cast<int64_t>(detail::u64pow(p, out.e - (n - 1)))
        : -out.r0;

    WittVec<RatFunc<F>> b(p, n - s, w.proto().coeff_proto());
    for (uint32_t u = 0; u < n - s; ++u) {
        int64_t k = j * static_cast<int64_t>(detail::u64pow(p, u));
        b.set(u, w.comp(s + u).coeff(k));
    }
    check(!b.is_zero(), errc::internal_check, "level is not attained at its designated slots");
    out.term = VTerm<F>{s, std::move(b), j};
    return out;
}

/******** canonical form ********/

// w = sum of V-terms at strictly decreasing levels, plus an integral remainder
template <class F>
struct CanonicalForm {
    std::vector<LeadingTerm<F>> terms;
    WittLaurent<F> integral;
};

template <class F>
CanonicalForm<F> canonical_form(WittLaurent<F> w)
{
    for (uint32_t i = 0; i < w.n(); ++i)
        check(w.comp(i).exact(), errc::insufficient_precision, "canonical form needs exact input");
    CanonicalForm<F> out{{}, w};
    int64_t r;
    while ((r = log_level(w)) > 0) {
        LeadingTerm<F> lt = leading_term(w);
        w = w - recompose(lt.term, w.n());
        check(log_level(w) < r, errc::internal_check, "leading-term peel did not lower the level");
        out.terms.push_back(std::move(lt));
    }
    out.integral = std::move(w);
    return out;
}

template <class F>
WittLaurent<F> assemble(const CanonicalForm<F>& cf, uint32_t n)
{
    WittLaurent<F> w = cf.integral;
    for (const auto& lt : cf.terms) w = w + recompose(lt.term, n);
    return w;
}

} // namespace wittram
