#!/usr/bin/env python3
"""Worked example: the whole kernel on one concrete model.

The base field is Q(t, u) with delta1 = d/dt and a designated derivation D
acting by D(u) = u (so u behaves like an exponential for D, and t is a
D-constant). The walkthrough prints prolongations, tangent systems, fibres, a
derivation extension, iterated prolongation cofactors, and a derivation-basis
change. Output is deterministic.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from diffalg import (  # noqa: E402
    Context,
    RationalMatrix,
    VarietySystem,
    base_field,
    derive_base,
    extend_derivation,
    fiber_system,
    full_jet_context,
    kolchin_matrix,
    print_poly,
    prolongation_system,
    rewrite_jets,
    scalar_text,
    section_contains,
    tangent_system,
    tau_power_cofactor,
    parse_poly,
)


def show(label, value):
    print(f"{label}: {value}")


def main():
    K = base_field(["t", "u"], [[1, 0], [0, "u"]])
    ctx = Context.standard(K, 1)
    t, u = K.gen("t"), K.gen("u")

    print("== base field ==")
    show("delta1 t", scalar_text(derive_base(t, 0)))
    show("D u", scalar_text(derive_base(u, 1)))

    print()
    print("== prolongation of V(u*x1 - t) ==")
    f = parse_poly("u*x1 - t", ctx)
    V = VarietySystem((f,))
    system = prolongation_system(V)
    show("generator", print_poly(f))
    show("tau part", print_poly(system.pairs[0][1]))
    show("tangent part", print_poly(tangent_system(V).pairs[0][1]))

    a = (t / u,)
    show("point on V", scalar_text(a[0]))
    show("section (a, Da) in tau V", section_contains(V, a))
    for i, p in enumerate(fiber_system(V, a), 1):
        show(f"fibre equation {i}", print_poly(p))

    print()
    print("== extending D through a new point ==")
    # free extension: no relations, send x1 |-> u + t with companion 1
    ext = extend_derivation([], (u + t,), (K.one(),), ctx=ctx)
    g = parse_poly("x1^2 + t*x1", ctx)
    show("D'(g(a))", scalar_text(ext(g)))

    print()
    print("== iterated prolongation cofactors ==")
    x = ctx.x(0)
    for k in (1, 2, 3):
        p = tau_power_cofactor(x * x + ctx.const(u), k)
        show(f"cofactor k={k}", print_poly(p))

    print()
    print("== derivation basis change ==")
    M = kolchin_matrix(RationalMatrix(((1, 1), (0, 1))), 1, 1,
                       RationalMatrix.identity(2))
    show("matrix rows", M.rows)
    full = full_jet_context(K, 1, M)
    jet = parse_poly("d1^2 x1", full)
    show("primed jet", print_poly(jet))
    show("unprimed expansion", print_poly(rewrite_jets(jet, M)))


if __name__ == "__main__":
    main()
