"""Seeded random instance generation for the randomized identity checks.

Commuting derivation tables are built from families that commute by
construction (partials and generator-scaling derivations on disjoint
generators) recombined by random rational constant matrices; the commutator
check still runs on every sampled field, so a construction bug cannot slip
through. All sampling is driven by an explicit random.Random, never global
state, so runs are reproducible from a seed.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .deltaring import Context, DeltaPoly, DerivOp
from .exact import MultiPoly, RationalFunction
from .fields import BaseFieldSpec, base_field
from .transform import RationalMatrix


def sample_fraction(rng: Random, bound: int = 4, allow_zero: bool = True) -> Fraction:
    num = rng.randint(-bound, bound)
    if not allow_zero:
        while num == 0:
            num = rng.randint(-bound, bound)
    den = rng.choice((1, 1, 1, 2, 3))
    return Fraction(num, den)


def sample_field(rng: Random, num_derivations: int, max_gens: int = 2,
                 min_gens: int = 0) -> BaseFieldSpec:
    """A random base field with the requested number of commuting derivations
    (the last one is the designated D)."""
    p = rng.randint(min_gens, max_gens)
    gens = tuple(f"t{i + 1}" for i in range(p))
    if p == 0:
        return base_field(gens, [[] for _ in range(num_derivations)])
    # primitive commuting rows: for each generator either d/dg or g*d/dg
    euler = [rng.random() < 0.3 for _ in range(p)]
    primitive = []
    for j in range(p):
        row = [RationalFunction.const(gens, 0) for _ in range(p)]
        row[j] = (RationalFunction.gen(gens, j) if euler[j]
                  else RationalFunction.const(gens, 1))
        primitive.append(row)
    # random constant recombinations stay commuting
    rows = []
    for _ in range(num_derivations):
        row = [RationalFunction.const(gens, 0) for _ in range(p)]
        for j in range(p):
            c = sample_fraction(rng, 2)
            if c:
                row = [a + b.scale(c) for a, b in zip(row, primitive[j])]
        rows.append(row)
    return base_field(gens, rows)


def sample_scalar(rng: Random, field: BaseFieldSpec, degree: int = 2,
                  allow_zero: bool = True, denominators: bool = False):
    """A random base-field element: a small polynomial in the generators,
    optionally over a small nonzero denominator."""
    gens = field.generators
    num = MultiPoly.zero(gens)
    terms = rng.randint(0 if allow_zero else 1, 3)
    for _ in range(terms):
        mono = []
        for j in range(len(gens)):
            e = rng.randint(0, degree)
            if e:
                mono.append((j, e))
        c = sample_fraction(rng, 4, allow_zero=False)
        num += MultiPoly(gens, {tuple(sorted(mono)): c})
    if not num and not allow_zero:
        num = MultiPoly.constant(gens, Fraction(1))
    rf = RationalFunction(num)
    if denominators and gens and rng.random() < 0.4:
        j = rng.randrange(len(gens))
        den = RationalFunction(
            MultiPoly.variable(gens, j) + MultiPoly.constant(gens, Fraction(rng.randint(1, 3)))
        )
        rf = rf / den
    return field.element(rf)


def sample_op(rng: Random, width: int, max_order: int = 2) -> DerivOp:
    exps = [0] * width
    for _ in range(rng.randint(0, max_order)):
        if width:
            exps[rng.randrange(width)] += 1
    return DerivOp(tuple(exps))


def sample_poly(rng: Random, ctx: Context, max_terms: int = 4, max_order: int = 2,
                max_power: int = 2, coeff_degree: int = 2,
                denominators: bool = False) -> DeltaPoly:
    """A random block-1 differential polynomial in the context."""
    out = ctx.zero()
    for _ in range(rng.randint(1, max_terms)):
        factors = ctx.one()
        for _ in range(rng.randint(0, 2)):
            jet = ctx.jet_poly(
                rng.randrange(ctx.n), sample_op(rng, ctx.num_ops, max_order)
            )
            factors = factors * jet ** rng.randint(1, max_power)
        c = sample_scalar(rng, ctx.field, coeff_degree, allow_zero=False,
                          denominators=denominators)
        out = out + factors.scale(c)
    return out


def sample_point(rng: Random, ctx: Context, degree: int = 2):
    return tuple(
        sample_scalar(rng, ctx.field, degree) for _ in range(ctx.n)
    )


def sample_invertible_matrix(rng: Random, size: int, bound: int = 3) -> RationalMatrix:
    while True:
        m = RationalMatrix(tuple(
            tuple(Fraction(rng.randint(-bound, bound)) for _ in range(size))
            for _ in range(size)
        ))
        if m.det():
            return m


def sample_context(rng: Random, max_m: int = 2, max_n: int = 2,
                   max_gens: int = 2) -> Context:
    m = rng.randint(0, max_m)
    n = rng.randint(1, max_n)
    field = sample_field(rng, m + 1, max_gens)
    return Context.standard(field, n)
