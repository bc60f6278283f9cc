"""Example instances: pair algebroid, crossed product, group algebra and the Sweedler algebra."""

from __future__ import annotations

from dqg.algebroid import Algebroid, crossed_product_algebroid
from dqg.base import Base, Group, InvalidInstance, cyclic_group, require_sqrt
from dqg.exactlin import ONE, ZERO, Q, gq
from dqg.hopf import HopfData
from dqg.instance import Instance
from dqg.integrals import IntegralData


def _weights(weight, n):
    if weight is None:
        return tuple(Q(1) for _ in range(n))
    w = tuple(gq(v).re for v in weight)
    if len(w) != n:
        raise InvalidInstance("weight has the wrong length")
    return w


def example_pair(points=("1", "2"), weight=None) -> Instance:
    """B (x) B with pointwise product, Delta(e_uv) = sum_z e_uz (x) e_zv, h = Id."""
    points = tuple(str(p) for p in points)
    n = len(points)
    if n < 1:
        raise InvalidInstance("need at least one point")
    G = cyclic_group(1)
    base = Base(points, G, ((tuple(range(n))),), _weights(weight, n)).validate()

    def idx(a, b):
        return a * n + b

    labels = tuple(f"{points[a]}|{points[b]}" for a in range(n) for b in range(n))
    grading = tuple((0, 0) for _ in labels)
    mult = {(i, i): {i: ONE} for i in range(n * n)}
    star_img = tuple({i: ONE} for i in range(n * n))
    r_img = tuple({idx(x, b): ONE for b in range(n)} for x in range(n))
    s_img = tuple({idx(a, x): ONE for a in range(n)} for x in range(n))
    A = Algebroid(base, labels, grading, mult, star_img, r_img, s_img, name="T").validate()
    delta = tuple({(idx(u, z), idx(z, v)): ONE for z in range(n)} for u in range(n) for v in range(n))
    counit = tuple({u: ONE} if u == v else {} for u in range(n) for v in range(n))
    antipode = tuple({idx(v, u): ONE} for u in range(n) for v in range(n))
    H = HopfData(A, delta, counit, antipode)
    w = base.weight
    phi = tuple({a: gq(w[b])} for a in range(n) for b in range(n))
    psi = tuple({b: gq(w[a])} for a in range(n) for b in range(n))
    h = tuple({(a, b): ONE} for a in range(n) for b in range(n))
    I = IntegralData(H, phi, psi, h)
    return Instance(base, A, H, I, name="pair", description=f"pair algebroid on {n} points")


def example_crossed(points=("1", "2", "3"), group: Group | None = None, action=None, weight=("1", "4", "1"),
                    require_square_root: bool = True) -> Instance:
    """B x| G with Delta(b g) = b g (x)~ g, eps = Id, S(delta_x g) = delta_{g^-1 x} g^-1."""
    points = tuple(str(p) for p in points)
    n = len(points)
    G = group or cyclic_group(2)
    if action is None:
        swap = tuple([1, 0] + list(range(2, n))) if n >= 2 else (0,)
        action = (tuple(range(n)), swap)
    action = tuple(tuple(int(v) for v in row) for row in action)
    base = Base(points, G, action, _weights(weight, n)).validate()
    if require_square_root:
        require_sqrt(base)
    A = crossed_product_algebroid(base)
    A = A.with_tables(name="C").validate()
    e = G.identity
    m = len(G)

    def idx(x, g):
        return g * n + x

    delta, antipode, phi = [], [], []
    for g in range(m):
        for x in range(n):
            delta.append({(idx(x, g), idx(y, g)): ONE for y in range(n)})
            gi = G.inv(g)
            antipode.append({idx(base.action[gi][x], gi): ONE})
            phi.append({x: ONE} if g == e else {})
    counit = tuple({i: ONE} for i in range(n * m))
    H = HopfData(A, tuple(delta), counit, tuple(antipode))
    phi = tuple(phi)
    psi = tuple(_compose_b(phi, antipode))
    # r = s here, so r(b)s(b') = bb' and no normalized bi-integral exists
    I = IntegralData(H, phi, psi, None)
    return Instance(base, A, H, I, name="crossed", description=f"crossed product on {n} points by a group of order {m}")


def _compose_b(table, lin) -> list:
    out = []
    for img in lin:
        v: dict = {}
        for k, c in img.items():
            for x, y in table[k].items():
                v[x] = v.get(x, ZERO) + c * y
        out.append({x: y for x, y in v.items() if y})
    return out


def _point_base() -> Base:
    return Base(("*",), cyclic_group(1), ((0,),), (Q(1),)).validate()


def example_group_algebra(group: Group | None = None) -> Instance:
    """C[G] over a one-point base: Delta(g) = g (x) g, eps(g) = 1, S(g) = g^-1, phi(g) = [g = e]."""
    G = group or cyclic_group(2)
    base = _point_base()
    m = len(G)
    e = G.identity
    labels = tuple(str(x) for x in G.elements)
    grading = tuple((0, 0) for _ in range(m))
    mult = {(g, h): {G.mul(g, h): ONE} for g in range(m) for h in range(m)}
    star_img = tuple({G.inv(g): ONE} for g in range(m))
    unit = ({e: ONE},)
    A = Algebroid(base, labels, grading, mult, star_img, unit, unit, name="G").validate()
    delta = tuple({(g, g): ONE} for g in range(m))
    counit = tuple({0: ONE} for _ in range(m))
    antipode = tuple({G.inv(g): ONE} for g in range(m))
    H = HopfData(A, delta, counit, antipode)
    phi = tuple({0: ONE} if g == e else {} for g in range(m))
    h = tuple({(0, 0): ONE} if g == e else {} for g in range(m))
    I = IntegralData(H, phi, phi, h)
    return Instance(base, A, H, I, name="group", description=f"group algebra of a group of order {m}")


def example_sweedler() -> Instance:
    """The four-dimensional Sweedler algebra over a one-point base; S^2 != Id.

    Basis 1, g, x, gx with g^2 = 1, x^2 = 0, xg = -gx, Delta(x) = x (x) 1 + g (x) x,
    g* = g, x* = x.  phi = coefficient of gx is a left integral, psi = phi o S.
    The integrals differ, so the instance is algebraic only: it is not measured.
    """
    base = _point_base()
    labels = ("1", "g", "x", "gx")
    # basis index = 2 * b + a for g^a x^b
    def idx(a, b):
        return 2 * b + a

    mult = {}
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    if b + d >= 2:
                        continue
                    sign = -1 if b * c else 1
                    mult[(idx(a, b), idx(c, d))] = {idx((a + c) % 2, b + d): gq(sign)}
    star_img = ({0: ONE}, {1: ONE}, {2: ONE}, {3: gq(-1)})
    unit = ({0: ONE},)
    A = Algebroid(base, labels, ((0, 0),) * 4, mult, star_img, unit, unit, name="Sw").validate()
    one, g, x, gx = range(4)
    delta = (
        {(one, one): ONE},
        {(g, g): ONE},
        {(x, one): ONE, (g, x): ONE},
        {(gx, g): ONE, (one, gx): ONE},
    )
    counit = ({0: ONE}, {0: ONE}, {}, {})
    antipode = ({one: ONE}, {g: ONE}, {gx: gq(-1)}, {x: ONE})
    H = HopfData(A, delta, counit, antipode)
    phi = ({}, {}, {}, {0: ONE})
    psi = tuple(_compose_b(phi, antipode))
    I = IntegralData(H, phi, psi, None)
    return Instance(base, A, H, I, name="sweedler", description="Sweedler algebra, S^2 != Id, not measured")
