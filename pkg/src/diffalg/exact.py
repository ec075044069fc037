"""Sparse exact polynomial arithmetic: multivariate polynomials, rational
functions, single-divisor exact division, and a bounded Buchberger engine.

Coefficients default to `fractions.Fraction`, but every algorithm here uses
only field operations (+, -, *, /, ==, truthiness), so polynomials whose
coefficients live in another exact field (e.g. a rational-function field)
work unchanged.

Monomials are stored sparsely as sorted tuples of (variable_index, exponent)
pairs with positive exponents; the empty tuple is the unit monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd

Monomial = tuple
MONO_ONE: Monomial = ()


def mono_from_pairs(pairs):
    return tuple(sorted((i, e) for i, e in pairs if e))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return mono_from_pairs(d.items())


def mono_degree(a: Monomial) -> int:
    return sum(e for _, e in a)


def mono_divides(a: Monomial, b: Monomial) -> bool:
    d = dict(b)
    return all(d.get(i, 0) >= e for i, e in a)


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """b / a, assuming mono_divides(a, b)."""
    d = dict(b)
    for i, e in a:
        d[i] -= e
    return mono_from_pairs(d.items())


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for i, e in b:
        d[i] = max(d.get(i, 0), e)
    return mono_from_pairs(d.items())


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    vs = {i for i, _ in a}
    return not any(i in vs for i, _ in b)


@dataclass(frozen=True)
class MonomialOrder:
    """Total, multiplicative, well-founded order on exponent vectors.

    kind is "degrevlex" or "lex"; priority optionally permutes the variables
    (a tuple of variable indices, most significant first).
    """

    kind: str = "degrevlex"
    priority: tuple | None = None

    def key(self, mono: Monomial, nvars: int):
        """Sort key; larger key means larger monomial."""
        perm = self.priority if self.priority is not None else range(nvars)
        d = dict(mono)
        dense = tuple(d.get(i, 0) for i in perm)
        if self.kind == "lex":
            return dense
        if self.kind == "degrevlex":
            return (sum(dense), tuple(-e for e in reversed(dense)))
        raise ValueError(f"unknown monomial order kind {self.kind!r}")


DEGREVLEX = MonomialOrder("degrevlex")
LEX = MonomialOrder("lex")


class MultiPoly:
    """Sparse multivariate polynomial over an ordered variable registry.

    Two polynomials over the same registry compare equal iff their term maps
    are equal; no zero coefficients are ever stored.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars, terms=None):
        self.vars = tuple(vars)
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, vars):
        return cls(vars)

    @classmethod
    def constant(cls, vars, c):
        return cls(vars, {MONO_ONE: c})

    @classmethod
    def variable(cls, vars, index, coeff=Fraction(1)):
        return cls(vars, {((index, 1),): coeff})

    # -- structure ---------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return all(m == MONO_ONE for m in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self.terms[MONO_ONE]

    def degree(self):
        return max((mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, index):
        return max((dict(m).get(index, 0) for m in self.terms), default=0)

    def support_vars(self):
        out = set()
        for m in self.terms:
            out.update(i for i, _ in m)
        return out

    def leading(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        n = len(self.vars)
        m = max(self.terms, key=lambda mo: order.key(mo, n))
        return m, self.terms[m]

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("mixed variable registries")

    # -- arithmetic --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            elif m in terms:
                del terms[m]
        out = MultiPoly(self.vars)
        out.terms = terms
        return out

    def __neg__(self):
        out = MultiPoly(self.vars)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                elif m in terms:
                    del terms[m]
        out = MultiPoly(self.vars)
        out.terms = terms
        return out

    def scale(self, c):
        if not c:
            return MultiPoly(self.vars)
        out = MultiPoly(self.vars)
        out.terms = {m: co * c for m, co in self.terms.items()}
        return out

    def mul_term(self, mono, coeff):
        if not coeff:
            return MultiPoly(self.vars)
        out = MultiPoly(self.vars)
        out.terms = {mono_mul(m, mono): c * coeff for m, c in self.terms.items()}
        return out

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MultiPoly.constant(self.vars, Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def partial(self, index):
        """Formal partial derivative with respect to variable `index`."""
        terms = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(index, 0)
            if not e:
                continue
            d[index] = e - 1
            terms[mono_from_pairs(d.items())] = c * e
        out = MultiPoly(self.vars)
        out.terms = terms
        return out

    # -- printing ----------------------------------------------------------

    def sorted_terms(self):
        """Terms in the deterministic print order: ascending total degree,
        then ascending dense exponent vector."""
        n = len(self.vars)

        def k(item):
            m, _ = item
            d = dict(m)
            return (mono_degree(m), tuple(d.get(i, 0) for i in range(n)))

        return sorted(self.terms.items(), key=k)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            body = "*".join(
                f"{self.vars[i]}^{e}" if e > 1 else self.vars[i] for i, e in m
            )
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts)


# -- division and Groebner machinery ----------------------------------------


class DivisionFails(Exception):
    """Exact division failed; carries the nonzero division remainder."""

    def __init__(self, remainder: MultiPoly):
        super().__init__("exact division failed with nonzero remainder")
        self.remainder = remainder


class LimitExceeded(Exception):
    """A Buchberger step or degree cap was hit; the answer is inconclusive."""


class Membership(Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Limits:
    steps: int = 2000
    degree: int = 60


def division(f: MultiPoly, divisors, order: MonomialOrder = DEGREVLEX):
    """Multivariate division: returns (quotients, remainder) with
    f = sum(q_i * divisors_i) + remainder and no remainder term divisible by
    any divisor's leading monomial."""
    n = len(f.vars)
    leads = [g.leading(order) for g in divisors]
    quotients = [MultiPoly.zero(f.vars) for _ in divisors]
    remainder = MultiPoly.zero(f.vars)
    work = f
    while work:
        m, c = work.leading(order)
        for i, (lm, lc) in enumerate(leads):
            if mono_divides(lm, m):
                t = mono_div(m, lm)
                q = c / lc
                quotients[i] += MultiPoly(f.vars, {t: q})
                work = work - divisors[i].mul_term(t, q)
                break
        else:
            remainder += MultiPoly(f.vars, {m: c})
            work = work - MultiPoly(f.vars, {m: c})
    return quotients, remainder


def normal_form(f: MultiPoly, basis, order: MonomialOrder = DEGREVLEX) -> MultiPoly:
    basis = [g for g in basis if g]
    if not basis:
        return f
    _, r = division(f, basis, order)
    return r


def poly_divide_exact(g: MultiPoly, f: MultiPoly, order: MonomialOrder = DEGREVLEX) -> MultiPoly:
    """Exact quotient g/f, or raise DivisionFails carrying the remainder.

    A singleton {f} is a Groebner basis of the principal ideal it generates,
    so a nonzero remainder certifies that g is not a multiple of f.
    """
    if not f:
        raise ZeroDivisionError("division by the zero polynomial")
    quotients, remainder = division(g, [f], order)
    if remainder:
        raise DivisionFails(remainder)
    return quotients[0]


def s_polynomial(f, g, order):
    (mf, cf) = f.leading(order)
    (mg, cg) = g.leading(order)
    l = mono_lcm(mf, mg)
    return f.mul_term(mono_div(l, mf), 1 / cf) - g.mul_term(mono_div(l, mg), 1 / cg)


def groebner_basis(gens, order: MonomialOrder = DEGREVLEX, limits: Limits = Limits()):
    """Bounded Buchberger. Returns an autoreduced, monic Groebner basis, or
    raises LimitExceeded when a step/degree cap is hit (inconclusive, never
    wrong).

    Uses Buchberger's first (coprime leads) and second (chain) criteria and a
    degree-capped S-pair queue.
    """
    if not gens:
        raise ValueError("empty generator list")
    basis = [g for g in gens if g]
    if not basis:
        return []
    if limits.steps <= 0:
        raise LimitExceeded("step budget exhausted")
    n = len(basis[0].vars)

    def lead(i):
        return basis[i].leading(order)[0]

    pairs = {(i, j) for i, j in combinations(range(len(basis)), 2)}
    steps = 0
    while pairs:
        i, j = min(pairs, key=lambda p: (mono_degree(mono_lcm(lead(p[0]), lead(p[1]))), p))
        pairs.discard((i, j))
        if mono_coprime(lead(i), lead(j)):
            continue
        l = mono_lcm(lead(i), lead(j))
        if any(
            k != i and k != j
            and mono_divides(lead(k), l)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(basis))
        ):
            continue
        if mono_degree(l) > limits.degree:
            raise LimitExceeded(f"S-pair degree {mono_degree(l)} exceeds cap")
        steps += 1
        if steps > limits.steps:
            raise LimitExceeded("step budget exhausted")
        r = normal_form(s_polynomial(basis[i], basis[j], order), basis, order)
        if r:
            basis.append(r)
            k = len(basis) - 1
            pairs.update((min(i2, k), max(i2, k)) for i2 in range(k))
    return _autoreduce(basis, order)


def _autoreduce(basis, order):
    reduced = []
    for i, g in enumerate(basis):
        others = basis[:i] + basis[i + 1:]
        r = normal_form(g, others, order)
        if r:
            reduced.append(r)
    out = []
    for g in reduced:
        _, lc = g.leading(order)
        out.append(g.scale(1 / lc))
    n = len(basis[0].vars)
    out.sort(key=lambda g: order.key(g.leading(order)[0], n))
    return out


def ideal_member(f: MultiPoly, gens, order: MonomialOrder = DEGREVLEX,
                 limits: Limits = Limits()) -> Membership:
    """Is f in the algebraic ideal generated by gens? Inconclusive when the
    bounded Buchberger run hits a cap."""
    try:
        basis = groebner_basis(gens, order, limits)
    except LimitExceeded:
        return Membership.INCONCLUSIVE
    if not basis:
        return Membership.YES if not f else Membership.NO
    return Membership.YES if not normal_form(f, basis, order) else Membership.NO


# -- gcd machinery for rational-function reduction ---------------------------


def _int_content(p: MultiPoly) -> Fraction:
    """Positive rational c such that p/c has coprime integer coefficients."""
    num = 0
    den = 1
    for c in p.terms.values():
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den) if num else Fraction(1)


def _as_univariate(p: MultiPoly, v: int):
    """Coefficients of p viewed as a univariate polynomial in variable v."""
    coeffs = {}
    for m, c in p.terms.items():
        d = dict(m)
        e = d.pop(v, 0)
        rest = mono_from_pairs(d.items())
        cur = coeffs.setdefault(e, MultiPoly.zero(p.vars))
        coeffs[e] = cur + MultiPoly(p.vars, {rest: c})
    return {e: q for e, q in coeffs.items() if q}


def _from_univariate(vars, v, coeffs):
    out = MultiPoly.zero(vars)
    for e, q in coeffs.items():
        out += q.mul_term(((v, e),) if e else MONO_ONE, Fraction(1))
    return out


def _pseudo_rem(a: MultiPoly, b: MultiPoly, v: int) -> MultiPoly:
    """Pseudo-remainder of a by b with respect to variable v."""
    da, db = a.degree_in(v), b.degree_in(v)
    bu = _as_univariate(b, v)
    lb = bu[db]
    work = a
    while work and work.degree_in(v) >= db:
        wu = _as_univariate(work, v)
        dw = work.degree_in(v)
        lw = wu[dw]
        # lb * work - lw * x^(dw-db) * b
        shift = ((v, dw - db),) if dw > db else MONO_ONE
        work = work * lb - b.mul_term(shift, Fraction(1)) * lw
    return work


def _content_in(p: MultiPoly, v: int) -> MultiPoly:
    coeffs = list(_as_univariate(p, v).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = poly_gcd(g, c)
    return g


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """GCD of two polynomials with Fraction coefficients, computed by the
    primitive pseudo-remainder sequence, normalized to positive integer
    content. Desk-scale inputs only."""
    def primitive(p):
        p = p.scale(1 / _int_content(p))
        if p.leading(DEGREVLEX)[1] < 0:
            p = p.scale(Fraction(-1))
        return p

    if not a and not b:
        return MultiPoly.zero(a.vars)
    if not a:
        return primitive(b)
    if not b:
        return primitive(a)
    common = a.support_vars() & b.support_vars()
    if not common:
        return MultiPoly.constant(a.vars, Fraction(1))
    v = max(common)
    ca, cb = _content_in(a, v), _content_in(b, v)
    pa = poly_divide_exact(a, ca)
    pb = poly_divide_exact(b, cb)
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while pb:
        r = _pseudo_rem(pa, pb, v)
        if r:
            r = poly_divide_exact(r, _content_in(r, v))
            r = r.scale(1 / _int_content(r))
        pa, pb = pb, r
    g = pa * poly_gcd(ca, cb)
    g = g.scale(1 / _int_content(g))
    lead_c = g.leading(DEGREVLEX)[1]
    if lead_c < 0:
        g = g.scale(Fraction(-1))
    return g


# -- rational functions ------------------------------------------------------


class RationalFunction:
    """Quotient of two MultiPolys over the same registry, den != 0.

    Equality is decided by cross-multiplication; gcd reduction is applied
    only when the term-count product crosses REDUCE_THRESHOLD, plus a cheap
    monomial/integer content normalization always. The denominator is kept
    with positive leading coefficient and coprime integer coefficients, so
    the representation (hence printing) is deterministic.
    """

    __slots__ = ("num", "den")
    REDUCE_THRESHOLD = 12

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.constant(num.vars, Fraction(1))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = MultiPoly.constant(num.vars, Fraction(1))
        else:
            num, den = self._normalize(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def _normalize(num, den):
        # common monomial content
        def mono_content(p):
            its = iter(p.terms)
            first = dict(next(its))
            for m in its:
                d = dict(m)
                for i in list(first):
                    e = min(first[i], d.get(i, 0))
                    if e:
                        first[i] = e
                    else:
                        del first[i]
                if not first:
                    break
            return mono_from_pairs(first.items())

        cn = dict(mono_content(num))
        cd = dict(mono_content(den))
        cm = mono_from_pairs((i, min(e, cd[i])) for i, e in cn.items() if i in cd)
        if cm:
            num = MultiPoly(num.vars, {mono_div(m, cm): c for m, c in num.terms.items()})
            den = MultiPoly(den.vars, {mono_div(m, cm): c for m, c in den.terms.items()})
        if len(num.terms) * len(den.terms) >= RationalFunction.REDUCE_THRESHOLD:
            g = poly_gcd(num, den)
            if g and not g.is_constant():
                num = poly_divide_exact(num, g)
                den = poly_divide_exact(den, g)
        c = _int_content(den)
        if den.leading(DEGREVLEX)[1] < 0:
            c = -c
        num = num.scale(1 / c)
        den = den.scale(1 / c)
        return num, den

    @classmethod
    def const(cls, vars, q):
        return cls(MultiPoly.constant(vars, Fraction(q)))

    @classmethod
    def gen(cls, vars, index):
        return cls(MultiPoly.variable(vars, index))

    @property
    def vars(self):
        return self.num.vars

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self):
        return self.den.is_constant() and self.den.constant_value() == 1

    def _check(self, other):
        if self.vars != other.vars:
            raise ValueError("mixed variable registries")

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RationalFunction.const(self.vars, other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        self._check(other)
        return self.num * other.den == other.num * self.den

    __hash__ = None

    def __add__(self, other):
        self._check(other)
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    def __truediv__(self, other):
        self._check(other)
        if not other.num:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def scale(self, q):
        return RationalFunction(self.num.scale(Fraction(q)), self.den)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = RationalFunction.const(self.vars, 1)
        for _ in range(k):
            out = out * self
        return out

    def partial(self, index):
        """Formal partial derivative with respect to a registry variable."""
        n = self.num.partial(index) * self.den - self.num * self.den.partial(index)
        return RationalFunction(n, self.den * self.den)

    def reduced(self):
        """Fully gcd-reduced copy (used by printing of small values)."""
        if not self.num or self.is_polynomial():
            return self
        g = poly_gcd(self.num, self.den)
        if g and not g.is_constant():
            return RationalFunction(poly_divide_exact(self.num, g),
                                    poly_divide_exact(self.den, g))
        return self

    def __repr__(self):
        if self.is_polynomial():
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"
