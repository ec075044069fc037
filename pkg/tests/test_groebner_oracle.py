"""Cross-validate the Buchberger engine against sympy on random small ideals.

sympy is an optional test dependency: the module is skipped when it is not
installed. The comparison is decisive for what the kernel uses Groebner bases
for: ideal membership via normal forms.
"""

from fractions import Fraction
from random import Random

import pytest

sympy = pytest.importorskip("sympy")

from diffalg.exact import (  # noqa: E402
    DEGREVLEX,
    MultiPoly,
    groebner_basis,
    normal_form,
)

VARS = ("a", "b", "c")
SYMS = sympy.symbols("a b c")


def to_sympy(p: MultiPoly):
    expr = sympy.Integer(0)
    for mono, coeff in p.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for i, e in mono:
            term *= SYMS[i] ** e
        expr += term
    return expr


def random_poly(rng: Random, max_terms=3, max_exp=2):
    out = MultiPoly.zero(VARS)
    for _ in range(rng.randint(1, max_terms)):
        mono = []
        for i in range(len(VARS)):
            e = rng.randint(0, max_exp)
            if e:
                mono.append((i, e))
        c = Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2)))
        out += MultiPoly(VARS, {tuple(mono): c})
    return out


def test_membership_agrees_with_sympy():
    rng = Random(113)
    checked = 0
    for _ in range(25):
        gens = [g for g in (random_poly(rng) for _ in range(2)) if g]
        if not gens:
            continue
        basis = groebner_basis(gens, DEGREVLEX)
        sgens = [to_sympy(g) for g in gens]
        sbasis = sympy.groebner(sgens, *SYMS, order="grevlex", domain=sympy.QQ)
        for _ in range(4):
            f = random_poly(rng)
            mine = not normal_form(f, basis, DEGREVLEX)
            theirs = sbasis.reduce(to_sympy(f))[1] == 0
            assert mine == theirs
            checked += 1
    assert checked > 50


def test_leading_ideals_agree():
    rng = Random(127)
    for _ in range(15):
        gens = [g for g in (random_poly(rng) for _ in range(2)) if g]
        if not gens:
            continue
        basis = groebner_basis(gens, DEGREVLEX)
        sbasis = sympy.groebner([to_sympy(g) for g in gens], *SYMS, order="grevlex",
                                domain=sympy.QQ)
        mine = {to_sympy(MultiPoly(VARS, {g.leading(DEGREVLEX)[0]: Fraction(1)}))
                for g in basis}
        theirs = {sympy.LM(p, order="grevlex") for p in sbasis.exprs}
        assert mine == theirs
