from __future__ import annotations

import random

from siegeldual.exact import QQ, FiniteField, RationalFunctionField

FIELDS = {
    "Q": QQ,
    "F5": FiniteField(5),
    "F9": FiniteField(3, 2),
    "Qt": RationalFunctionField(QQ),
    "F13t": RationalFunctionField(FiniteField(13)),
}

THETA_FIELD = RationalFunctionField(QQ, "theta")
T_FIELD = RationalFunctionField(THETA_FIELD, "T")


def random_T_function(rng: random.Random, degree: int = 3, bound: int = 3):
    """Random element of Q(theta)(T) whose T-coefficients are integer linear forms in theta."""
    def poly():
        terms = [f"({rng.randint(-bound, bound)} + {rng.randint(-bound, bound)}*theta)*T^{i}"
                 for i in range(rng.randint(0, degree) + 1)]
        return T_FIELD(" + ".join(terms))

    while True:
        den = poly()
        if not den.is_zero():
            return poly() / den


def symbolic_siegel(m: int):
    """Siegel object with all k_i = 1 whose entries are independent symbols.

    Each entry S_{uvyz} is the generator ``s<u><v><y><z>`` of a nested tower
    Q(s...)(s...)... of rational function fields.
    """
    from siegeldual.linalg import Mat
    from siegeldual.siegel import SiegelObject, tetra_indices

    F = QQ
    names = {}
    for u, y, z in tetra_indices(m):
        name = f"s{u}{u - 1}{y}{z}"
        F = RationalFunctionField(F, name)
        names[u, y, z] = name
    entries = {idx: Mat(F, 1, 1, ((F.generators()[name],),)) for idx, name in names.items()}
    gens = {name: F.gen(name) for name in names.values()}
    return SiegelObject(F, (1,) * (m + 1), entries), gens


def substitution_P(S, u: int, v: int):
    """Coefficients of N^v l_u in the basis N^z l_y (y >= z + 2), by repeated substitution.

    Any term N^a l_y with y <= a + 1 is rewritten through the defining relation
    of l_y, and terms with a >= m vanish.  Returns {(y, z): P_{uvyz}}.
    """
    from siegeldual.linalg import Mat

    m, k, f = S.m, S.k, S.field
    state = {(v, u): Mat.identity(f, k[u - 1])}
    while True:
        todo = [key for key in state if key[1] <= key[0] + 1]
        if not todo:
            break
        a, y = min(todo)
        M = state.pop((a, y))
        if a >= m or M.is_zero():
            continue
        shift = a - (y - 1)
        for z in range(y - 1, m):
            for y2 in range(z + 2, m + 2):
                exp = z + shift
                if exp >= m:
                    continue
                term = -(M @ S[y, y - 1, y2, z])
                state[exp, y2] = state[exp, y2] + term if (exp, y2) in state else term
    out = {}
    for z in range(v, m):
        for y in range(z + 2, m + 2):
            C = state.get((z, y), Mat.zero(f, k[u - 1], k[y - 1]))
            out[y, z] = -C
    return out
