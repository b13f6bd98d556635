"""Independent reference computations used by the tests.

Nothing here imports the arithmetic under test: elements of k are modelled as
2x2 rational matrices (multiplication by a + bX on the basis 1, X), residue
rings as plain integer tuples, and algebraic checks go through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy

# --- k as a matrix algebra ----------------------------------------------------


def mat_of(a, b):
    """Multiplication by a + bX: 1 -> a + bX, X -> b + (a + b)X."""
    a, b = Fraction(a), Fraction(b)
    return ((a, b), (b, a + b))


def mat_mul(p, q):
    return tuple(tuple(sum(p[i][k] * q[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def mat_add(p, q):
    return tuple(tuple(p[i][j] + q[i][j] for j in range(2)) for i in range(2))


def mat_pair(m):
    """Image of 1 under the multiplication matrix, i.e. (a, b)."""
    return m[0][0], m[0][1]


def mat_det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


# --- sympy view of k -----------------------------------------------------------

PHI = (1 + sympy.sqrt(5)) / 2


def to_sympy(x) -> sympy.Expr:
    a, b = x
    return sympy.Rational(a.numerator, a.denominator) + sympy.Rational(b.numerator, b.denominator) * PHI


# --- residue rings O/4, O/p5 as integer tuples --------------------------------


def o4_mul(x, y):
    a, b = x
    c, d = y
    # (a + bX)(c + dX) = ac + bd + (ad + bc + bd)X
    return ((a * c + b * d) % 4, (a * d + b * c + b * d) % 4)


def o4_add(x, y):
    return ((x[0] + y[0]) % 4, (x[1] + y[1]) % 4)


def o4_mat_mul(p, q):
    a, b, c, d = p
    e, f, g, h = q
    return (
        o4_add(o4_mul(a, e), o4_mul(b, g)),
        o4_add(o4_mul(a, f), o4_mul(b, h)),
        o4_add(o4_mul(c, e), o4_mul(d, g)),
        o4_add(o4_mul(c, f), o4_mul(d, h)),
    )


def count_sl2_o4() -> int:
    elts = [(a, b) for a in range(4) for b in range(4)]
    one = (1, 0)
    n = 0
    for a, b, c, d in product(elts, repeat=4):
        ad, bc = o4_mul(a, d), o4_mul(b, c)
        if ((ad[0] - bc[0]) % 4, (ad[1] - bc[1]) % 4) == one:
            n += 1
    return n


def count_sl2_f4() -> int:
    # F4 = {0, 1, w, w + 1} as bit pairs with w^2 = w + 1
    def mul(x, y):
        a, b = x
        c, d = y
        return ((a * c + b * d) % 2, (a * d + b * c + b * d) % 2)

    elts = [(a, b) for a in range(2) for b in range(2)]
    n = 0
    for a, b, c, d in product(elts, repeat=4):
        ad, bc = mul(a, d), mul(b, c)
        if ((ad[0] + bc[0]) % 2, (ad[1] + bc[1]) % 2) == (1, 0):
            n += 1
    return n


def reduce_o4p5(entries):
    """Integral a + bX entries to ((a mod 4, b mod 4), (a + 3b) mod 5); X = 3 in O/p5."""
    out4, out5 = [], []
    for a, b in entries:
        out4.append((int(a) % 4, int(b) % 4))
        out5.append((int(a) + 3 * int(b)) % 5)
    return tuple(out4), tuple(out5)


def bfs_group(gens):
    """Closure of integer-tuple matrices over O/4 x F5."""

    def mul(x, y):
        (p4, p5), (q4, q5) = x, y
        a, b, c, d = p5
        e, f, g, h = q5
        m5 = ((a * e + b * g) % 5, (a * f + b * h) % 5, (c * e + d * g) % 5, (c * f + d * h) % 5)
        return (o4_mat_mul(p4, q4), m5)

    ident = (((1, 0), (0, 0), (0, 0), (1, 0)), (1, 0, 0, 1))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# --- plane geometry ------------------------------------------------------------

Z1, Z2, Z3 = sympy.symbols("z1 z2 z3")
K_DOMAIN = sympy.QQ.algebraic_field(sympy.sqrt(5))


def cubic_expr(terms: dict) -> sympy.Expr:
    """sympy polynomial from {"z1^2*z2": (a, b)} with coefficient a + b*phi."""
    expr = sympy.Integer(0)
    for mono, c in terms.items():
        m = sympy.Integer(1)
        for part in mono.split("*"):
            v, _, e = part.partition("^")
            m *= {"z1": Z1, "z2": Z2, "z3": Z3}[v] ** int(e or 1)
        expr += to_sympy(c) * m
    return sympy.expand(expr)


def is_singular_groebner(expr: sympy.Expr) -> bool:
    """Singular iff the partials have a common zero in some affine chart."""
    grads = [sympy.diff(expr, v) for v in (Z1, Z2, Z3)]
    for v in (Z1, Z2, Z3):
        rest = [w for w in (Z1, Z2, Z3) if w != v]
        sys_ = [sympy.expand(g.subs(v, 1)) for g in grads]
        sys_ = [g for g in sys_ if g != 0]
        if not sys_:
            return True
        gb = sympy.groebner(sys_, *rest, order="grevlex", domain=K_DOMAIN)
        if list(gb.exprs) != [1]:
            return True
    return False


def det3_sympy(rows) -> sympy.Expr:
    return sympy.simplify(sympy.Matrix(rows).det())
