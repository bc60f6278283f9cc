"""Bigraded *-algebras over a base, fiber products and balanced tensor products.

Elements of A are sparse dicts {basis index: coefficient}.  Elements of a
tensor power are sparse dicts keyed by index tuples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from dqg.base import Base, InvalidInstance
from dqg.exactlin import ONE, SubspaceReducer, acc, rank_of_vectors, vsub


@dataclass(frozen=True, eq=False)
class Algebroid:
    base: Base
    labels: tuple
    grading: tuple  # grading[i] = (d, dbar) as group indices
    mult: dict  # (i, j) -> {k: coef}
    star_img: tuple  # star(e_i)
    r_img: tuple  # r(delta_x)
    s_img: tuple  # s(delta_x)
    name: str = field(default="A")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis(self, i: int) -> dict:
        return {i: ONE}

    # arithmetic --------------------------------------------------------
    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, ca in a.items():
            for j, cb in b.items():
                prod_ij = self.mult.get((i, j))
                if prod_ij:
                    c = ca * cb
                    for k, x in prod_ij.items():
                        acc(out, k, c * x)
        return out

    def mul_all(self, *elems) -> dict:
        out = elems[0]
        for e in elems[1:]:
            out = self.mul(out, e)
        return out

    def star(self, a: dict) -> dict:
        out: dict = {}
        for i, c in a.items():
            cc = c.conj()
            for k, x in self.star_img[i].items():
                acc(out, k, cc * x)
        return out

    def _embed(self, images, b: dict) -> dict:
        out: dict = {}
        for x, c in b.items():
            for k, v in images[x].items():
                acc(out, k, c * v)
        return out

    def r(self, b: dict) -> dict:
        return self._embed(self.r_img, b)

    def s(self, b: dict) -> dict:
        return self._embed(self.s_img, b)

    @cached_property
    def unit(self) -> dict:
        return self.r(self.base.one())

    # grading -------------------------------------------------------------
    def d(self, i: int) -> int:
        return self.grading[i][0]

    def dbar(self, i: int) -> int:
        return self.grading[i][1]

    def component(self, a: dict, g: int, h: int) -> dict:
        return {i: c for i, c in a.items() if self.grading[i] == (g, h)}

    def degrees(self, a: dict) -> set:
        return {self.grading[i] for i in a}

    def homogeneous_parts(self, a: dict) -> dict:
        parts: dict = {}
        for i, c in a.items():
            parts.setdefault(self.grading[i], {})[i] = c
        return parts

    # validation ----------------------------------------------------------
    def problems(self) -> list:
        """All violated axioms, each with a basis witness."""
        out = []
        n, base, G = self.dim, self.base, self.base.group
        lab = self.labels
        e = [self.basis(i) for i in range(n)]
        for i, j, k in product(range(n), repeat=3):
            if self.mul(self.mul(e[i], e[j]), e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                out.append(f"associativity fails at ({lab[i]}, {lab[j]}, {lab[k]})")
                break
        for i in range(n):
            if self.star(self.star(e[i])) != e[i]:
                out.append(f"star is not involutive at {lab[i]}")
                break
        for i, j in product(range(n), repeat=2):
            if self.star(self.mul(e[i], e[j])) != self.mul(self.star(e[j]), self.star(e[i])):
                out.append(f"star is not anti-multiplicative at ({lab[i]}, {lab[j]})")
                break
        for i, j in product(range(n), repeat=2):
            want = (G.mul(self.d(i), self.d(j)), G.mul(self.dbar(i), self.dbar(j)))
            if any(self.grading[k] != want for k in self.mul(e[i], e[j])):
                out.append(f"grading not multiplicative at ({lab[i]}, {lab[j]})")
                break
        for i in range(n):
            want = (G.inv(self.d(i)), G.inv(self.dbar(i)))
            if any(self.grading[k] != want for k in self.star(e[i])):
                out.append(f"star does not invert the grading at {lab[i]}")
                break
        one = self.unit
        if self.s(base.one()) != one:
            out.append("r(1) != s(1)")
        for i in range(n):
            if self.mul(one, e[i]) != e[i] or self.mul(e[i], one) != e[i]:
                out.append(f"r(1) is not a unit at {lab[i]}")
                break
        for emb, name in ((self.r, "r"), (self.s, "s")):
            for x, y in product(range(base.n), repeat=2):
                dx, dy = base.delta(x), base.delta(y)
                if self.mul(emb(dx), emb(dy)) != emb(base.mul(dx, dy)):
                    out.append(f"{name} is not multiplicative at ({base.points[x]}, {base.points[y]})")
                    break
                if self.star(emb(dx)) != emb(base.star(dx)):
                    out.append(f"{name} is not a *-map at {base.points[x]}")
                    break
            for x in range(base.n):
                if any(self.grading[k] != (G.identity, G.identity) for k in emb(base.delta(x))):
                    out.append(f"{name}(B) is not in degree (e, e) at {base.points[x]}")
                    break
        for x, y in product(range(base.n), repeat=2):
            a, b = self.r(base.delta(x)), self.s(base.delta(y))
            if self.mul(a, b) != self.mul(b, a):
                out.append(f"r and s do not commute at ({base.points[x]}, {base.points[y]})")
                break
        w = self.twist_defect()
        if w:
            out.append(f"twist law fails: {w}")
        return out

    def twist_defect(self):
        """a r(b) = r(d_a(b)) a and a s(b) = s(dbar_a(b)) a for homogeneous basis a."""
        base = self.base
        for i in range(self.dim):
            a = self.basis(i)
            for x in range(base.n):
                b = base.delta(x)
                if self.mul(a, self.r(b)) != self.mul(self.r(base.act(self.d(i), b)), a):
                    return ("r", self.labels[i], base.points[x])
                if self.mul(a, self.s(b)) != self.mul(self.s(base.act(self.dbar(i), b)), a):
                    return ("s", self.labels[i], base.points[x])
        return None

    def validate(self) -> "Algebroid":
        problems = self.problems()
        if problems:
            raise InvalidInstance(problems)
        return self

    def first_problem(self):
        p = self.problems()
        return p[0] if p else None

    # derived algebroids -------------------------------------------------
    def with_tables(self, **changes) -> "Algebroid":
        data = dict(base=self.base, labels=self.labels, grading=self.grading, mult=self.mult,
                    star_img=self.star_img, r_img=self.r_img, s_img=self.s_img, name=self.name)
        data.update(changes)
        return Algebroid(**data)

    def same_tables(self, other: "Algebroid") -> bool:
        return (self.grading == other.grading and _clean(self.mult) == _clean(other.mult)
                and self.star_img == other.star_img and self.r_img == other.r_img and self.s_img == other.s_img)


def _clean(mult: dict) -> dict:
    return {k: v for k, v in mult.items() if v}


def opposite(A: Algebroid) -> Algebroid:
    """Reversed multiplication, grading (g^-1, g'^-1), same r and s."""
    G = A.base.group
    grading = tuple((G.inv(g), G.inv(h)) for g, h in A.grading)
    mult = {(i, j): A.mult[(j, i)] for (j, i) in A.mult}
    return A.with_tables(grading=grading, mult=mult, name=A.name + "^op")


def coopposite(A: Algebroid) -> Algebroid:
    """Swapped grading (g', g) and swapped embeddings r <-> s."""
    grading = tuple((h, g) for g, h in A.grading)
    return A.with_tables(grading=grading, r_img=A.s_img, s_img=A.r_img, name=A.name + "^co")


def crossed_product_algebroid(base: Base) -> Algebroid:
    """B x| Gamma with basis delta_x g, (b g)(b' g') = b g(b') g g', (b g)* = g^-1 b*."""
    G = base.group
    n = base.n
    idx = {(x, g): g * n + x for g in range(len(G)) for x in range(n)}
    labels = tuple(f"d{base.points[x]}.{G.elements[g]}" for g in range(len(G)) for x in range(n))
    grading = tuple((g, g) for g in range(len(G)) for x in range(n))
    mult = {}
    for (x, g), i in idx.items():
        for (y, h), j in idx.items():
            if base.action[g][y] == x:
                mult[(i, j)] = {idx[(x, G.mul(g, h))]: ONE}
    star_img = tuple({idx[(base.action[G.inv(g)][x], G.inv(g))]: ONE} for g in range(len(G)) for x in range(n))
    e = G.identity
    r_img = tuple({idx[(x, e)]: ONE} for x in range(n))
    return Algebroid(base, labels, grading, mult, star_img, r_img, r_img, name="BxG")


# tensor quotients -------------------------------------------------------------

class TensorQuotient:
    """A subspace of a tensor power (given by allowed keys) modulo relation vectors."""

    def __init__(self, keys, relations, name: str = ""):
        self.keys = list(keys)
        self.key_set = set(self.keys)
        self.reducer = SubspaceReducer(relations)
        self.name = name
        pivots = set(self.reducer.pivots)
        self.basis = [k for k in self.keys if k not in pivots]
        self.index = {k: n for n, k in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, v: dict) -> dict:
        """Normal form modulo relations (supported on the quotient basis)."""
        return self.reducer.reduce(v)

    def coords(self, v: dict) -> dict:
        nf = self.project(v)
        return {self.index[k]: c for k, c in nf.items()}

    def is_zero(self, v: dict) -> bool:
        return not self.project(v)

    def equal(self, u: dict, v: dict) -> bool:
        return not self.project(vsub(u, v))

    def outside(self, v: dict):
        """A key of v outside the allowed subspace, or None."""
        for k in v:
            if k not in self.key_set:
                return k
        return None


def tensor(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            acc(out, _cat(i, j), x * y)
    return out


def _cat(i, j) -> tuple:
    left = i if isinstance(i, tuple) else (i,)
    right = j if isinstance(j, tuple) else (j,)
    return left + right


def tensor_map(maps, v: dict) -> dict:
    """Apply one linear map per leg (maps[k]: index -> element) to a tensor."""
    out: dict = {}
    for key, c in v.items():
        acc_t = {(): c}
        for leg, idx in enumerate(key):
            img = maps[leg](idx) if maps[leg] is not None else {idx: ONE}
            nxt: dict = {}
            for k0, c0 in acc_t.items():
                for k1, c1 in img.items():
                    acc(nxt, _cat(k0, k1), c0 * c1)
            acc_t = nxt
        for k, x in acc_t.items():
            acc(out, k, x)
    return out


def legwise_product(A: Algebroid, u: dict, v: dict) -> dict:
    """(x1 (x) x2 ...)(y1 (x) y2 ...) = x1 y1 (x) x2 y2 ... on tensors over A."""
    out: dict = {}
    for ku, cu in u.items():
        for kv, cv in v.items():
            acc_t = {(): cu * cv}
            for a, b in zip(ku, kv):
                prod_ab = A.mult.get((a, b))
                if not prod_ab:
                    acc_t = {}
                    break
                nxt: dict = {}
                for k0, c0 in acc_t.items():
                    for k1, c1 in prod_ab.items():
                        acc(nxt, k0 + (k1,), c0 * c1)
                acc_t = nxt
            for k, x in acc_t.items():
                acc(out, k, x)
    return out


class FiberProduct(TensorQuotient):
    """A (x)~ C: graded pairs with dbar(x) = d(y), modulo s(b) (x) 1 - 1 (x) r(b)."""

    def __init__(self, A: Algebroid, C: Algebroid | None = None):
        C = C or A
        self.A, self.C = A, C
        base = A.base
        keys = [(i, j) for i in range(A.dim) for j in range(C.dim) if A.dbar(i) == C.d(j)]
        rels = []
        for (i, j) in keys:
            x, y = A.basis(i), C.basis(j)
            for z in range(base.n):
                dz = base.delta(z)
                rels.append(vsub(tensor(A.mul(x, A.s(dz)), y), tensor(x, C.mul(y, C.r(dz)))))
                rels.append(vsub(tensor(A.mul(A.s(dz), x), y), tensor(x, C.mul(C.r(dz), y))))
        super().__init__(keys, rels, name=f"{A.name}(x)~{C.name}")
        self._rels = rels

    def mul(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for (i, j), cu in u.items():
            for (k, l), cv in v.items():
                left = self.A.mult.get((i, k))
                right = self.C.mult.get((j, l))
                if left and right:
                    for a, ca in left.items():
                        for b, cb in right.items():
                            acc(out, (a, b), cu * cv * ca * cb)
        return self.project(out)

    def ideal_defect(self):
        """A relation generator r and graded pair p with r p or p r outside the ideal."""
        for n, rel in enumerate(self._rels):
            for key in self.keys:
                p = {key: ONE}
                if self.project(self.mul_raw(rel, p)) or self.project(self.mul_raw(p, rel)):
                    return (n, key)
        return None

    def mul_raw(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for (i, j), cu in u.items():
            for (k, l), cv in v.items():
                left = self.A.mult.get((i, k))
                right = self.C.mult.get((j, l))
                if left and right:
                    for a, ca in left.items():
                        for b, cb in right.items():
                            acc(out, (a, b), cu * cv * ca * cb)
        return out

    def as_algebroid(self) -> Algebroid:
        """The quotient with induced product, star, grading and r (x) s structure."""
        A, C, base = self.A, self.C, self.A.base
        basis = self.basis
        idx = self.index
        grading = tuple((A.d(i), C.dbar(j)) for i, j in basis)
        mult = {}
        for p, (i, j) in enumerate(basis):
            for q, (k, l) in enumerate(basis):
                prod_pq = self.mul({(i, j): ONE}, {(k, l): ONE})
                if prod_pq:
                    mult[(p, q)] = {idx[key]: c for key, c in prod_pq.items()}
        star_img = tuple(self.coords(tensor(A.star(A.basis(i)), C.star(C.basis(j)))) for i, j in basis)
        r_img = tuple(self.coords(tensor(A.r(base.delta(x)), C.unit)) for x in range(base.n))
        s_img = tuple(self.coords(tensor(A.unit, C.s(base.delta(x)))) for x in range(base.n))
        labels = tuple(f"{A.labels[i]}|{C.labels[j]}" for i, j in basis)
        return Algebroid(base, labels, grading, mult, star_img, r_img, s_img, name=self.name)

    def lift(self, coords: dict) -> dict:
        return {self.basis[p]: c for p, c in coords.items()}


class TripleFiber(TensorQuotient):
    """A (x)~ A (x)~ A realised directly on graded triples."""

    def __init__(self, A: Algebroid):
        self.A = A
        base = A.base
        keys = [(i, j, k) for i in range(A.dim) for j in range(A.dim) for k in range(A.dim)
                if A.dbar(i) == A.d(j) and A.dbar(j) == A.d(k)]
        rels = []
        for (i, j, k) in keys:
            x, y, w = A.basis(i), A.basis(j), A.basis(k)
            for z in range(base.n):
                dz = base.delta(z)
                rels.append(vsub(tensor(tensor(A.mul(x, A.s(dz)), y), w), tensor(tensor(x, A.mul(y, A.r(dz))), w)))
                rels.append(vsub(tensor(tensor(x, A.mul(y, A.s(dz))), w), tensor(tensor(x, y), A.mul(w, A.r(dz)))))
        super().__init__(keys, rels, name=f"{A.name}(x)~3")


BALANCE_TAGS = ("sA", "As", "rA", "Ar")


class BalancedTensor(TensorQuotient):
    """M (x)_B N for A with module structures given by tags such as 'sA' or 'Ar'.

    'sA' means b acts by left multiplication with s(b), 'Ar' by right
    multiplication with r(b), and so on.  Relations are x.b (x) y - x (x) b.y.
    """

    def __init__(self, A: Algebroid, left: str, right: str):
        if left not in BALANCE_TAGS or right not in BALANCE_TAGS:
            raise ValueError(f"unknown module tags {left!r}, {right!r}")
        self.A = A
        self.tags = (left, right)
        base = A.base
        keys = [(i, j) for i in range(A.dim) for j in range(A.dim)]
        rels = []
        for i, j in keys:
            x, y = A.basis(i), A.basis(j)
            for z in range(base.n):
                dz = base.delta(z)
                rels.append(vsub(tensor(module_action(A, left, x, dz), y), tensor(x, module_action(A, right, y, dz))))
        super().__init__(keys, rels, name=f"{left}(x)_B {right}")


def module_action(A: Algebroid, tag: str, a: dict, b: dict) -> dict:
    emb = A.s(b) if tag[0] == "s" or tag[1] == "s" else A.r(b)
    if tag[0] in "rs":
        return A.mul(emb, a)
    return A.mul(a, emb)


# checks -----------------------------------------------------------------------

def unit_iso_defect(A: Algebroid):
    """(B x| G) (x)~ A -> A, b g (x) a |-> r(b) a and A (x)~ (B x| G) -> A, a (x) b g |-> s(b) a."""
    base = A.base
    Bx = crossed_product_algebroid(base)
    n = base.n
    for side in ("left", "right"):
        F = FiberProduct(Bx, A) if side == "left" else FiberProduct(A, Bx)

        def image(key):
            if side == "left":
                p, j = key
                return A.mul(A.r(base.delta(p % n)), A.basis(j))
            j, p = key
            return A.mul(A.s(base.delta(p % n)), A.basis(j))

        def image_vec(v):
            out: dict = {}
            for key, c in v.items():
                for k, x in image(key).items():
                    acc(out, k, c * x)
            return out

        for rel in F._rels:
            if image_vec(rel):
                return (side, "not well defined")
        if F.dim != A.dim:
            return (side, f"dimension {F.dim} != {A.dim}")
        if rank_of_vectors([image(k) for k in F.basis]) != A.dim:
            return (side, "not bijective")
        for k1 in F.basis:
            for k2 in F.basis:
                lhs = image_vec(F.mul({k1: ONE}, {k2: ONE}))
                if lhs != A.mul(image(k1), image(k2)):
                    return (side, "not multiplicative", k1, k2)
    return None


def associativity_iso_defect(A: Algebroid):
    """(A (x)~ A) (x)~ A and A (x)~ (A (x)~ A) agree with the triple fiber product."""
    F = FiberProduct(A)
    AA = F.as_algebroid()
    T = TripleFiber(A)
    for side, Fs in (("left", FiberProduct(AA, A)), ("right", FiberProduct(A, AA))):
        if Fs.dim != T.dim:
            return (side, f"dimension {Fs.dim} != {T.dim}")

        def to_triple(key):
            if side == "left":
                p, k = key
                i, j = F.basis[p]
                return {(i, j, k): ONE}
            i, p = key
            j, k = F.basis[p]
            return {(i, j, k): ONE}

        for rel in Fs._rels:
            img: dict = {}
            for key, c in rel.items():
                for t, x in to_triple(key).items():
                    acc(img, t, c * x)
            if not T.is_zero(img):
                return (side, "not well defined")
        images = [T.project(to_triple(k)) for k in Fs.basis]
        if rank_of_vectors(images) != T.dim:
            return (side, "not bijective")
    return None


def flip_defect(A: Algebroid):
    """(A (x)~ A)^co = A^co (x)~ A^co through a (x) c |-> c (x) a, multiplicatively."""
    F = FiberProduct(A)
    Aco = coopposite(A)
    Fco = FiberProduct(Aco)
    if F.dim != Fco.dim:
        return ("dimension", F.dim, Fco.dim)
    for rel in F._rels:
        if not Fco.is_zero({(j, i): c for (i, j), c in rel.items()}):
            return ("relation", rel and min(rel))
    for k1 in F.basis:
        for k2 in F.basis:
            lhs = {(j, i): c for (i, j), c in F.mul({k1: ONE}, {k2: ONE}).items()}
            rhs = Fco.mul({(k1[1], k1[0]): ONE}, {(k2[1], k2[0]): ONE})
            if not Fco.equal(lhs, rhs):
                return ("product", k1, k2)
    return None


def op_co_defect(A: Algebroid):
    """op and co are involutions, commute, and yield valid algebroids."""
    if not opposite(opposite(A)).same_tables(A):
        return "op is not an involution"
    if not coopposite(coopposite(A)).same_tables(A):
        return "co is not an involution"
    if not opposite(coopposite(A)).same_tables(coopposite(opposite(A))):
        return "op and co do not commute"
    for B in (opposite(A), coopposite(A)):
        p = B.first_problem()
        if p:
            return f"{B.name}: {p}"
    return None
