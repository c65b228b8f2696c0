#pragma once

#include <random>

#include "wittram/laurent.hpp"
#include "wittram/witt.hpp"

namespace wt = wittram;

inline wt::Fq rand_fq(const wt::FqCtx* ctx, std::mt19937_64& rng)
{
    wt::Fq g = wt::Fq::generator(ctx);
    wt::Fq v(ctx);
    for (uint32_t i = 0; i < ctx->d; ++i) {
        v = v * g + wt::Fq(ctx, static_cast<long long>(rng() % ctx->p));
    }
    return v;
}

inline wt::Fq rand_fq_nonzero(const wt::FqCtx* ctx, std::mt19937_64& rng)
{
    for (;;) {
        wt::Fq v = rand_fq(ctx, rng);
        if (!v.is_zero()) return v;
    }
}

template <class F>
wt::MultiPoly<F> rand_poly(uint32_t nvars, const F& proto, std::mt19937_64& rng,
                           uint32_t max_terms = 3, uint32_t max_exp = 2)
{
    wt::MultiPoly<F> f(nvars, proto);
    uint32_t terms = 1 + rng() % max_terms;
    for (uint32_t k = 0; k < terms; ++k) {
        wt::ExpVec e(nvars, 0);
        for (auto& x : e) x = rng() % (max_exp + 1);
        long long c = static_cast<long long>(rng() % 7) - 3;
        f.set_coeff(e, f.coeff(e) + proto.scalar(c));
    }
    return f;
}

template <class F>
wt::MultiPoly<F> rand_poly_nonzero(uint32_t nvars, const F& proto, std::mt19937_64& rng,
                                   uint32_t max_terms = 3, uint32_t max_exp = 2)
{
    for (;;) {
        auto f = rand_poly(nvars, proto, rng, max_terms, max_exp);
        if (!f.is_zero()) return f;
    }
}

template <class F>
wt::RatFunc<F> rand_ratfunc(uint32_t nvars, const F& proto, std::mt19937_64& rng)
{
    return wt::RatFunc<F>(rand_poly(nvars, proto, rng), rand_poly_nonzero(nvars, proto, rng));
}
