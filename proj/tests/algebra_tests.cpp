#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

using namespace wittram;

/******** finite fields ********/

namespace {

std::vector<Fq> all_elements(const FqCtx* ctx)
{
    std::vector<Fq> out;
    uint64_t q = 1;
    for (uint32_t i = 0; i < ctx->d; ++i) q *= ctx->p;
    Fq g = Fq::generator(ctx);
    for (uint64_t code = 0; code < q; ++code) {
        Fq v(ctx);
        uint64_t c = code;
        Fq pw = v.one();
        for (uint32_t i = 0; i < ctx->d; ++i) {
            v = v + pw * Fq(ctx, static_cast<long long>(c % ctx->p));
            c /= ctx->p;
            pw = pw * g;
        }
        out.push_back(v);
    }
    return out;
}

} // namespace

TEST_CASE("prime field arithmetic", "[field]")
{
    for (uint32_t p : {2u, 3u, 5u, 7u}) {
        const FqCtx* ctx = fq_context(p, 1);
        auto elems = all_elements(ctx);
        REQUIRE(elems.size() == p);
        for (auto& a : elems) {
            if (!a.is_zero()) {
                REQUIRE((a * a.inv()).is_one());
                REQUIRE(*a.pth_root() == a.pow_u(BigInt(1))); // x^(p^0) = x in F_p... root is x itself only when d=1
            }
            for (auto& b : elems) {
                REQUIRE(ring_pow(a + b, p) == ring_pow(a, p) + ring_pow(b, p));
                REQUIRE(a * b == b * a);
            }
        }
    }
}

TEST_CASE("extension field arithmetic", "[field]")
{
    for (auto [p, d] : std::vector<std::pair<uint32_t, uint32_t>>{{2, 2}, {2, 3}, {3, 2}, {5, 2}}) {
        const FqCtx* ctx = fq_context(p, d);
        auto elems = all_elements(ctx);
        uint64_t q = 1;
        for (uint32_t i = 0; i < d; ++i) q *= p;
        REQUIRE(elems.size() == q);
        // distinctness
        for (size_t i = 0; i < elems.size(); ++i)
            for (size_t j = i + 1; j < elems.size(); ++j) REQUIRE(elems[i] != elems[j]);
        for (auto& a : elems) {
            if (!a.is_zero()) {
                REQUIRE((a * a.inv()).is_one());
                REQUIRE(ring_pow(a, q - 1).is_one());
            }
            REQUIRE(ring_pow(*a.pth_root(), p) == a);
            for (auto& b : elems) REQUIRE(ring_pow(a + b, p) == ring_pow(a, p) + ring_pow(b, p));
        }
        // generator has full multiplicative structure only if primitive; just sanity: g notin F_p for d>1
        Fq g = Fq::generator(ctx);
        REQUIRE(ring_pow(g, q) == g);
    }
}

TEST_CASE("rationals", "[field]")
{
    Rat a(3), b(-7);
    REQUIRE((a / b * b) == a);
    REQUIRE((a - a).is_zero());
    REQUIRE(Rat(BigInt(1), BigInt(3)).inv() == Rat(3));
    REQUIRE(Rat(6).scalar_big(BigInt(10)) == Rat(10));
    REQUIRE_THROWS_AS(Rat(1).inv() / Rat(0), error);
}

/******** polynomials ********/

TEST_CASE("polynomial ring identities", "[poly]")
{
    std::mt19937_64 rng(1001);
    const FqCtx* f9 = fq_context(3, 2);
    Fq protoF(f9);
    Rat protoQ;
    for (int rep = 0; rep < 40; ++rep) {
        auto f = rand_poly(3, protoF, rng);
        auto g = rand_poly(3, protoF, rng);
        auto h = rand_poly(3, protoF, rng);
        REQUIRE((f + g) * h == f * h + g * h);
        REQUIRE(f * g == g * f);
        REQUIRE((f - f).is_zero());
        auto fq2 = rand_poly(3, protoQ, rng);
        auto gq = rand_poly(3, protoQ, rng);
        REQUIRE((fq2 + gq) * (fq2 - gq) == fq2 * fq2 - gq * gq);
    }
}

TEST_CASE("exact division and gcd", "[poly]")
{
    std::mt19937_64 rng(1002);
    const FqCtx* f5 = fq_context(5, 1);
    Fq protoF(f5);
    for (int rep = 0; rep < 25; ++rep) {
        auto a = rand_poly_nonzero(3, protoF, rng);
        auto b = rand_poly_nonzero(3, protoF, rng);
        auto prod = a * b;
        auto q = prod.divided_by(b);
        REQUIRE(q.has_value());
        REQUIRE(*q == a);

        auto g = gcd(prod, b);
        REQUIRE(prod.divided_by(g).has_value());
        REQUIRE(b.divided_by(g).has_value());
        // g is divisible by b up to the monic normalization
        auto [eb, cb] = b.leading();
        REQUIRE(g.divided_by(b.scaled(cb.inv())).has_value());
    }
    // gcd(fh, gh) = gcd(f,g) * h for coprime-ish random f, g
    Rat protoQ;
    for (int rep = 0; rep < 10; ++rep) {
        auto f = rand_poly_nonzero(2, protoQ, rng);
        auto g = rand_poly_nonzero(2, protoQ, rng);
        auto h = rand_poly_nonzero(2, protoQ, rng);
        auto d0 = gcd(f, g);
        auto d1 = gcd(f * h, g * h);
        auto quot = d1.divided_by(d0);
        REQUIRE(quot.has_value());
        // quotient is h up to scalar
        auto [eh, ch] = h.leading();
        auto [eq, cq] = quot->leading();
        REQUIRE(*quot == h.scaled(ch.inv()).scaled(cq));
    }
}

TEST_CASE("polynomial pth root, derivative, reindex, evaluate", "[poly]")
{
    std::mt19937_64 rng(1003);
    const FqCtx* f4 = fq_context(2, 2);
    Fq protoF(f4);
    for (int rep = 0; rep < 20; ++rep) {
        auto f = rand_poly(3, protoF, rng);
        auto fp = f.pow(2);
        auto r = fp.pth_root();
        REQUIRE(r.has_value());
        REQUIRE(*r == f);
    }
    Rat protoQ;
    auto x = MultiPoly<Rat>::variable(2, protoQ, 0);
    auto y = MultiPoly<Rat>::variable(2, protoQ, 1);
    auto f = x * x * y + x.scaled(Rat(3));
    REQUIRE(f.derivative(0) == x * y.scaled(Rat(2)) + MultiPoly<Rat>::constant(2, Rat(3)));
    REQUIRE(f.derivative(1) == x * x);

    // reindex into a larger arity and evaluate both ways
    std::vector<uint32_t> vm{2, 0};
    auto g = f.reindexed(3, vm);
    std::vector<Rat> vals{Rat(5), Rat(7), Rat(11)};
    std::vector<Rat> vals2{Rat(11), Rat(0), Rat(5)}; // var0 -> slot2, var1 -> slot0
    auto emb = [](const Rat& c) { return c; };
    REQUIRE(f.evaluate(std::vector<Rat>{Rat(5), Rat(11)}, protoQ, emb) ==
            g.evaluate(vals2, protoQ, emb));
}

TEST_CASE("rational function field axioms", "[poly]")
{
    std::mt19937_64 rng(1004);
    const FqCtx* f9 = fq_context(3, 2);
    Fq protoF(f9);
    for (int rep = 0; rep < 15; ++rep) {
        auto a = rand_ratfunc(2, protoF, rng);
        auto b = rand_ratfunc(2, protoF, rng);
        auto c = rand_ratfunc(2, protoF, rng);
        REQUIRE((a + b) + c == a + (b + c));
        REQUIRE(a * (b + c) == a * b + a * c);
        if (!a.is_zero()) {
            REQUIRE((a * a.inv()).is_one());
            REQUIRE(a / a == a.one());
        }
        auto p3 = a.pow(3);
        auto r = p3.pth_root();
        REQUIRE(r.has_value());
        REQUIRE(*r == a);
    }
    // explicit: 1/x + 1/y = (x+y)/(xy)
    Rat q;
    auto X = RatFunc<Rat>::variable(2, q, 0);
    auto Y = RatFunc<Rat>::variable(2, q, 1);
    REQUIRE(X.inv() + Y.inv() == (X + Y) / (X * Y));
}

/******** Laurent series ********/

TEST_CASE("series inversion and precision", "[laurent]")
{
    const FqCtx* f5 = fq_context(5, 1);
    Fq protoF(f5);
    uint32_t nv = 2; // x, t
    using L = LaurentElem<Fq>;
    using C = RatFunc<Fq>;

    // (1 - t)^-1 = sum t^k
    L one_minus_t(nv, protoF);
    one_minus_t.set(0, C::constant(nv, protoF.one()));
    one_minus_t.set(1, C::constant(nv, -protoF.one()));
    L inv = one_minus_t.inverted(12);
    for (int k = 0; k < 12; ++k) REQUIRE(inv.coeff(k) == C::constant(nv, protoF.one()));
    L prod = one_minus_t * inv;
    REQUIRE(prod.coeff(0).is_one());
    for (int k = 1; k < 11; ++k) REQUIRE(prod.coeff(k).is_zero());

    // deep pole: f = t^-3 (1 + 2 t); f * f^-1 = 1
    L f(nv, protoF);
    f.set(-3, C::constant(nv, protoF.one()));
    f.set(-2, C::constant(nv, protoF.scalar(2)));
    L fi = f.inverted(9);
    L p2 = f * fi;
    REQUIRE(p2.coeff(0).is_one());
    for (int k = 1; k < 5; ++k) REQUIRE(p2.coeff(k).is_zero());

    // precision of a product
    L g = f.truncated(4);
    REQUIRE(g.prec() == 4);
    L h = g * g;
    REQUIRE(h.prec() == 1); // 4 + (-3)
    REQUIRE(h.coeff(-6).is_one());
}

TEST_CASE("expansion of rational functions of t", "[laurent]")
{
    Rat proto;
    uint32_t nv = 4; // z1, x, y1, t
    VarLayout L1{1};
    using P = MultiPoly<Rat>;
    auto T = P::variable(nv, proto, L1.t());
    auto Z = P::variable(nv, proto, L1.z(0));
    auto one = P::constant(nv, proto.one());
    // f = (1 + t + z t^3) / (t^2 (1 - z t))
    auto num = one + T + Z * T.pow(3);
    auto den = T.pow(2) * (one - Z * T);
    RatFunc<Rat> f(num, den);
    auto s = laurent_expand(f, L1.t(), 10);
    REQUIRE(s.prec() >= 10);
    REQUIRE(*s.valuation() == -2);
    // multiply back
    auto dens = laurent_expand(RatFunc<Rat>(den), L1.t(), 12);
    auto nums = laurent_expand(RatFunc<Rat>(num), L1.t(), 12);
    auto back = s * dens;
    REQUIRE(back.agrees_with(nums));
    // spot coefficients: t^-2 coefficient is 1, t^-1 is 1 + z... wait: (1+t+z t^3) * sum_k z^k t^k, shifted by -2
    REQUIRE(s.coeff(-2).is_one());
}

TEST_CASE("series pth root and substitution", "[laurent]")
{
    const FqCtx* f3 = fq_context(3, 1);
    Fq protoF(f3);
    uint32_t nv = 4;
    VarLayout lay{1};
    using L = LaurentElem<Fq>;
    using C = RatFunc<Fq>;
    auto zc = C::variable(nv, protoF, lay.z(0));

    // (1 + z t)^3 = 1 + z^3 t^3 in char 3
    L u(nv, protoF);
    u.set(0, C::constant(nv, protoF.one()));
    u.set(1, zc);
    L u3 = u.pow(3);
    auto r = u3.pth_root();
    REQUIRE(r.has_value());
    REQUIRE(*r == u);

    // substitution z -> t + t^2 in z t^-1 gives 1 + t
    L zt(nv, protoF);
    zt.set(-1, zc);
    std::vector<L> vars(nv, L(nv, protoF));
    L sub(nv, protoF);
    sub.set(1, C::constant(nv, protoF.one()));
    sub.set(2, C::constant(nv, protoF.one()));
    vars[lay.z(0)] = sub;
    L res = zt.substituted(vars, kExactPrec);
    L expect(nv, protoF);
    expect.set(0, C::constant(nv, protoF.one()));
    expect.set(1, C::constant(nv, protoF.one()));
    REQUIRE(res == expect);

    // substitution through a denominator: 1/(1+z), z -> t
    L zinv(nv, protoF);
    zinv.set(0, C::constant(nv, protoF.one()) / (C::constant(nv, protoF.one()) + zc));
    std::vector<L> vars2(nv, L(nv, protoF));
    L tser(nv, protoF);
    tser.set(1, C::constant(nv, protoF.one()));
    vars2[lay.z(0)] = tser;
    L res2 = zinv.substituted(vars2, 6);
    // 1/(1+t) = 1 - t + t^2 - ...
    for (int k = 0; k < 6; ++k) {
        Fq want = (k % 2 == 0) ? protoF.one() : -protoF.one();
        REQUIRE(res2.coeff(k) == C::constant(nv, want));
    }
}
