"""The base (B, Gamma): functions on a finite set, a group action and a weight.

B-elements are sparse dicts {point index: GaussianRational}; delta_x is {x: 1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import isqrt

from dqg.exactlin import ONE, ZERO, GramMap, GramSpace, Q, acc, gq


class InvalidInstance(ValueError):
    """Raised when input tables violate a structural axiom."""

    def __init__(self, problems):
        self.problems = list(problems) if not isinstance(problems, str) else [problems]
        super().__init__("; ".join(self.problems))


class NotApplicable(Exception):
    """Raised by a check whose hypotheses the instance does not meet."""


@dataclass(frozen=True)
class Group:
    elements: tuple
    table: tuple  # table[g][h] = index of g*h

    @cached_property
    def identity(self) -> int:
        for e in range(len(self.elements)):
            if all(self.table[e][g] == g and self.table[g][e] == g for g in range(len(self.elements))):
                return e
        raise InvalidInstance("group table has no identity")

    @cached_property
    def inverses(self) -> tuple:
        e = self.identity
        out = []
        for g in range(len(self.elements)):
            inv = [h for h in range(len(self.elements)) if self.table[g][h] == e]
            if len(inv) != 1 or self.table[inv[0]][g] != e:
                raise InvalidInstance(f"element {self.elements[g]} has no two-sided inverse")
            out.append(inv[0])
        return tuple(out)

    def mul(self, g: int, h: int) -> int:
        return self.table[g][h]

    def inv(self, g: int) -> int:
        return self.inverses[g]

    def __len__(self):
        return len(self.elements)

    def problems(self) -> list:
        n = len(self.elements)
        out = []
        if any(len(row) != n or any(not 0 <= x < n for x in row) for row in self.table) or len(self.table) != n:
            return ["group table is not a square table over the elements"]
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        return [f"group table not associative at {(self.elements[a], self.elements[b], self.elements[c])}"]
        try:
            self.inverses
        except InvalidInstance as exc:
            out.extend(exc.problems)
        return out


def cyclic_group(n: int) -> Group:
    """Z/n with elements e, g, g2, ..."""
    names = tuple("e" if k == 0 else "g" if k == 1 else f"g{k}" for k in range(n))
    return Group(names,
                 tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def symmetric_group_3() -> Group:
    from itertools import permutations

    perms = list(permutations(range(3)))
    # identity first
    perms.sort(key=lambda p: p != (0, 1, 2))
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[q[i]] for i in range(3))

    names = ["".join(str(x + 1) for x in p) for p in perms]
    names[0] = "e"
    return Group(tuple(names), tuple(tuple(index[compose(p, q)] for q in perms) for p in perms))


@dataclass(frozen=True)
class Base:
    points: tuple
    group: Group
    action: tuple  # action[g][x] = index of g.x
    weight: tuple  # positive rationals w(x)
    sqrt_override: tuple | None = None  # optional d_half table [g][x]

    # B arithmetic ---------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.points)

    def delta(self, x: int) -> dict:
        return {x: ONE}

    def one(self) -> dict:
        return {x: ONE for x in range(self.n)}

    def from_values(self, values) -> dict:
        return {x: gq(v) for x, v in enumerate(values) if gq(v)}

    def mul(self, b: dict, c: dict) -> dict:
        return {x: b[x] * c[x] for x in b if x in c and b[x] * c[x]}

    def star(self, b: dict) -> dict:
        return {x: v.conj() for x, v in b.items()}

    def act(self, g: int, b: dict) -> dict:
        """(g b)(x) = b(g^-1 x), so g(delta_x) = delta_{g x}."""
        return {self.action[g][x]: v for x, v in b.items()}

    def mu(self, b: dict):
        return sum((self.weight[x] * v for x, v in b.items()), ZERO)

    def problems(self) -> list:
        out = self.group.problems()
        if out:
            return out
        G, n = self.group, self.n
        if len(self.action) != len(G) or any(len(row) != n for row in self.action):
            return ["action table has the wrong shape"]
        e = G.identity
        if any(self.action[e][x] != x for x in range(n)):
            out.append("not an action: identity moves a point")
        for g in range(len(G)):
            if sorted(self.action[g]) != list(range(n)):
                out.append(f"not an action: {G.elements[g]} is not a permutation")
                continue
            for h in range(len(G)):
                for x in range(n):
                    if self.action[g][self.action[h][x]] != self.action[G.mul(g, h)][x]:
                        out.append(f"not an action at {(G.elements[g], G.elements[h], self.points[x])}")
                        break
        if len(self.weight) != n:
            out.append("weight has the wrong length")
        elif any(not w > 0 for w in self.weight):
            out.append("weight must be strictly positive")
        return out

    def validate(self) -> "Base":
        problems = self.problems()
        if problems:
            raise InvalidInstance(problems)
        return self

    # cocycle ----------------------------------------------------------
    @cached_property
    def cocycle(self) -> "Cocycle":
        return cocycle(self)


def build_base(section: dict) -> Base:
    """Validated Base from raw tables: points, group{elements, table}, action, weight."""
    points = tuple(section["points"])
    grp = section["group"]
    group = Group(tuple(grp["elements"]), tuple(tuple(int(x) for x in row) for row in grp["table"]))
    action = tuple(tuple(int(x) for x in row) for row in section["action"])
    weight_tab = section["weight"]
    if isinstance(weight_tab, dict):
        weight = tuple(_as_rational(weight_tab[str(p)]) for p in points)
    else:
        weight = tuple(_as_rational(w) for w in weight_tab)
    override = None
    if section.get("sqrt_cocycle") is not None:
        sq = section["sqrt_cocycle"]
        override = tuple(tuple(_as_rational(sq[str(g)][str(p)]) for p in points) for g in group.elements)
    return Base(points, group, action, weight, override).validate()


def _as_rational(x):
    g = gq(x)
    if g.im:
        raise InvalidInstance(f"weight entry {x!r} is not real")
    return g.re


def rational_sqrt(q):
    """Exact square root of a nonnegative rational, or None."""
    q = Q(q)
    if q < 0:
        return None
    num, den = int(q.numerator), int(q.denominator)
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Q(rn, rd)
    return None


@dataclass(frozen=True)
class Cocycle:
    d: tuple  # d[g][x]
    d_half: tuple | None

    def as_b(self, g: int, table=None) -> dict:
        vals = (table or self.d)[g]
        return {x: gq(v) for x, v in enumerate(vals) if v}

    def half(self, g: int) -> dict:
        if self.d_half is None:
            raise InvalidInstance("no rational square-root cocycle")
        return {x: gq(v) for x, v in enumerate(self.d_half[g]) if v}

    def half_inv(self, g: int) -> dict:
        if self.d_half is None:
            raise InvalidInstance("no rational square-root cocycle")
        return {x: gq(1 / v) for x, v in enumerate(self.d_half[g])}

    def inv(self, g: int) -> dict:
        return {x: gq(1 / v) for x, v in enumerate(self.d[g])}


def cocycle(base: Base) -> Cocycle:
    """Solve mu(g(b D_g)) = mu(b) on indicator functions and take exact square roots.

    For b = delta_x the equation reads w(g x) D_g(x) = w(x).
    """
    G, n = base.group, base.n
    d = tuple(tuple(base.weight[x] / base.weight[base.action[g][x]] for x in range(n)) for g in range(len(G)))
    if base.sqrt_override is not None:
        return Cocycle(d, base.sqrt_override)
    half = []
    for g in range(len(G)):
        row = []
        for x in range(n):
            r = rational_sqrt(d[g][x])
            if r is None:
                return Cocycle(d, None)
            row.append(r)
        half.append(tuple(row))
    return Cocycle(d, tuple(half))


def require_sqrt(base: Base) -> Cocycle:
    c = base.cocycle
    if c.d_half is None:
        raise InvalidInstance("no rational square-root cocycle: a ratio w(x)/w(gx) is not a rational square")
    return c


# checks on the base ---------------------------------------------------------

def cocycle_defect(base: Base):
    """Witness (g, x) where mu(g(delta_x D_g)) != mu(delta_x), or None."""
    c = base.cocycle
    for g in range(len(base.group)):
        for x in range(base.n):
            lhs = base.mu(base.act(g, base.mul(base.delta(x), c.as_b(g))))
            if lhs != base.mu(base.delta(x)):
                return (base.group.elements[g], base.points[x])
    return None


def cocycle_law_defect(base: Base, table=None):
    """Witness for D_{gh} = h^-1(D_g) D_h or 1 = g^-1(D_{g^-1}) D_g."""
    c = base.cocycle
    G = base.group
    tab = table if table is not None else c.d

    def val(g):
        return {x: gq(v) for x, v in enumerate(tab[g])}

    for g in range(len(G)):
        for h in range(len(G)):
            rhs = base.mul(base.act(G.inv(h), val(g)), val(h))
            if rhs != {x: v for x, v in val(G.mul(g, h)).items() if v}:
                return ("product", G.elements[g], G.elements[h])
        if table is None:
            one = base.mul(base.act(G.inv(g), val(G.inv(g))), val(g))
            if one != base.one():
                return ("inverse", G.elements[g])
    return None


def sqrt_conditions_defect(base: Base):
    """Check the five square-root conditions: unit, real, squares to D, cocycle, positive."""
    c = base.cocycle
    G = base.group
    if c.d_half is None:
        return "no rational square-root cocycle"
    e = G.identity
    if any(v != 1 for v in c.d_half[e]):
        return ("unit", G.elements[e])
    for g in range(len(G)):
        for x in range(base.n):
            if c.d_half[g][x] * c.d_half[g][x] != c.d[g][x]:
                return ("square", G.elements[g], base.points[x])
            # mu(c* D^1/2 c) for c = delta_x
            if base.weight[x] * c.d_half[g][x] < 0:
                return ("positive", G.elements[g], base.points[x])
    w = cocycle_law_defect(base, c.d_half)
    if w is not None:
        return ("cocycle",) + tuple(w[1:])
    return None


def quasi_invariance_defect(base: Base):
    """mu(g^-1(b) c) = mu(b g(c D_g)) on all indicator pairs."""
    c = base.cocycle
    G = base.group
    for g in range(len(G)):
        for x in range(base.n):
            for y in range(base.n):
                b, cc = base.delta(x), base.delta(y)
                lhs = base.mu(base.mul(base.act(G.inv(g), b), cc))
                rhs = base.mu(base.mul(b, base.act(g, base.mul(cc, c.as_b(g)))))
                if lhs != rhs:
                    return (G.elements[g], base.points[x], base.points[y])
    return None


class KSpace:
    """The GNS space of (B, mu) with pi_mu, J_mu and the unitaries U_g."""

    def __init__(self, base: Base):
        self.base = base
        n = base.n
        self.space = GramSpace([[gq(base.weight[i]) if i == j else ZERO for j in range(n)] for i in range(n)],
                               labels=list(base.points), name="K")

    def pi(self, b: dict) -> GramMap:
        return GramMap(self.space, self.space, [{x: b[x]} if x in b else {} for x in range(self.base.n)])

    def u(self, g: int) -> GramMap:
        """U_g Lambda(c) = Lambda(g(c D_g^1/2))."""
        c = require_sqrt(self.base)
        cols = []
        for x in range(self.base.n):
            cols.append(self.base.act(g, self.base.mul(self.base.delta(x), c.half(g))))
        return GramMap(self.space, self.space, cols, f"U_{self.base.group.elements[g]}")

    def j_columns(self) -> list:
        """J_mu Lambda(b) = Lambda(b*), antilinear: J(sum c_x delta_x) = sum conj(c_x) delta_x."""
        return [{x: ONE} for x in range(self.base.n)]

    def to_b(self, op: GramMap):
        """Recover b from an operator equal to pi_mu(b); returns None if op is not diagonal."""
        b: dict = {}
        for x, col in enumerate(op.columns):
            for y, v in col.items():
                if y != x:
                    return None
                acc(b, x, v)
        return b


def k_space_defects(base: Base) -> dict:
    """Exact checks on K: pi_mu is a *-representation, J_mu antiunitary, U covariance."""
    K = KSpace(base)
    G = base.group
    out = {}
    n = base.n

    def op_eq(a: GramMap, b: GramMap):
        return a.equals(b)

    w = None
    for x in range(n):
        p = K.pi(base.delta(x))
        if not op_eq(p.adjoint(), K.pi(base.star(base.delta(x)))):
            w = ("adjoint", base.points[x])
            break
        for y in range(n):
            if not op_eq(p.compose(K.pi(base.delta(y))), K.pi(base.mul(base.delta(x), base.delta(y)))):
                w = ("product", base.points[x], base.points[y])
                break
        if w:
            break
    out["pi_mu"] = w

    w = None
    for i in range(n):
        for j in range(n):
            if K.space.gram[i][j].conj() != K.space.inner(K.j_columns()[i], K.j_columns()[j]):
                w = (base.points[i], base.points[j])
    out["J_mu"] = w

    if base.cocycle.d_half is None:
        out["U"] = "no rational square-root cocycle"
        return out
    w = None
    for g in range(len(G)):
        U = K.u(g)
        if not U.is_unitary():
            w = ("unitary", G.elements[g])
            break
        for x in range(n):
            lhs = U.compose(K.pi(base.delta(x))).compose(U.adjoint())
            if not op_eq(lhs, K.pi(base.act(g, base.delta(x)))):
                w = ("covariance", G.elements[g], base.points[x])
                break
        for h in range(len(G)):
            if not op_eq(U.compose(K.u(h)), K.u(G.mul(g, h))):
                w = ("homomorphism", G.elements[g], G.elements[h])
                break
        if w:
            break
    out["U"] = w
    return out
