"""Comultiplication, counit and antipode with their axioms and the Galois maps."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product

from dqg.algebroid import (
    Algebroid, BalancedTensor, FiberProduct, TripleFiber, coopposite, crossed_product_algebroid,
    opposite, tensor,
)
from dqg.base import InvalidInstance
from dqg.exactlin import ONE, ZERO, acc, inverse, nullspace, rank, solve, vsub


@dataclass(frozen=True, eq=False)
class HopfData:
    algebra: Algebroid
    delta: tuple  # delta[i] = lift {(k, l): c} of Delta(e_i)
    counit: tuple  # counit[i] = element of B x| G over crossed-product indices g * |X| + x
    antipode: tuple  # antipode[i] = S(e_i)

    @property
    def A(self) -> Algebroid:
        return self.algebra

    @cached_property
    def crossed(self) -> Algebroid:
        return crossed_product_algebroid(self.algebra.base)

    @cached_property
    def fiber(self) -> FiberProduct:
        return FiberProduct(self.algebra)

    @cached_property
    def triple(self) -> TripleFiber:
        return TripleFiber(self.algebra)

    # structure maps -----------------------------------------------------
    def Delta(self, a: dict) -> dict:
        out: dict = {}
        for i, c in a.items():
            for key, x in self.delta[i].items():
                acc(out, key, c * x)
        return out

    def terms(self, a: dict):
        """Sweedler terms (a1 index, a2 index, coefficient) of the stored lift."""
        for key, c in self.Delta(a).items():
            yield key[0], key[1], c

    def Delta2(self, a: dict) -> dict:
        """(Delta (x) Id) Delta on lifts."""
        out: dict = {}
        for k, l, c in self.terms(a):
            for (p, q), x in self.delta[k].items():
                acc(out, (p, q, l), c * x)
        return out

    def _linear(self, table, a: dict) -> dict:
        out: dict = {}
        for i, c in a.items():
            for k, x in table[i].items():
                acc(out, k, c * x)
        return out

    def S(self, a: dict) -> dict:
        return self._linear(self.antipode, a)

    @cached_property
    def antipode_inverse(self) -> tuple:
        n = self.algebra.dim
        m = [[self.antipode[j].get(i, ZERO) for j in range(n)] for i in range(n)]
        try:
            inv = inverse(m)
        except ZeroDivisionError as exc:
            raise InvalidInstance("antipode is not invertible") from exc
        return tuple({i: inv[i][j] for i in range(n) if inv[i][j]} for j in range(n))

    def S_inv(self, a: dict) -> dict:
        return self._linear(self.antipode_inverse, a)

    def eps(self, a: dict) -> dict:
        return self._linear(self.counit, a)

    def sharp(self, u: dict) -> dict:
        """sum_g b_g g |-> sum_g b_g on B x| G."""
        n = self.algebra.base.n
        out: dict = {}
        for p, c in u.items():
            acc(out, p % n, c)
        return out

    def flat(self, u: dict) -> dict:
        """sum_g g b_g |-> sum_g b_g; delta_x g = g delta_{g^-1 x}."""
        base = self.algebra.base
        n = base.n
        out: dict = {}
        for p, c in u.items():
            g, x = divmod(p, n)
            acc(out, base.action[base.group.inv(g)][x], c)
        return out

    def eps_sharp(self, a: dict) -> dict:
        return self.sharp(self.eps(a))

    def eps_flat(self, a: dict) -> dict:
        return self.flat(self.eps(a))

    def with_tables(self, **changes) -> "HopfData":
        data = dict(algebra=self.algebra, delta=self.delta, counit=self.counit, antipode=self.antipode)
        data.update(changes)
        return HopfData(**data)


# helpers ---------------------------------------------------------------------

def _lab(H: HopfData, *idx):
    return tuple(H.algebra.labels[i] for i in idx)


def _bilinear(f, v: dict) -> dict:
    out: dict = {}
    for (i, j), c in v.items():
        for k, x in f(i, j).items():
            acc(out, k, c * x)
    return out


def _legwise_star(A: Algebroid, v: dict) -> dict:
    out: dict = {}
    for (i, j), c in v.items():
        for k, x in tensor(A.star(A.basis(i)), A.star(A.basis(j))).items():
            acc(out, k, c.conj() * x)
    return out


# comultiplication --------------------------------------------------------------

def delta_morphism_defect(H: HopfData):
    """Delta is a grading-compatible *-homomorphism with Delta(r(b)s(b')) = r(b) (x) s(b')."""
    A, F, base = H.algebra, H.fiber, H.algebra.base
    for i in range(A.dim):
        lift = H.delta[i]
        bad = F.outside(lift)
        if bad is not None:
            return ("not in the graded tensor product",) + _lab(H, i)
        if any(A.d(k) != A.d(i) or A.dbar(l) != A.dbar(i) for k, l in lift):
            return ("degree",) + _lab(H, i)
    for i, j in product(range(A.dim), repeat=2):
        lhs = H.Delta(A.mul(A.basis(i), A.basis(j)))
        rhs = F.mul(H.delta[i], H.delta[j])
        if not F.equal(lhs, rhs):
            return ("multiplicative",) + _lab(H, i, j)
    for i in range(A.dim):
        if not F.equal(H.Delta(A.star(A.basis(i))), _legwise_star(A, H.delta[i])):
            return ("star",) + _lab(H, i)
    for x in range(base.n):
        dx = base.delta(x)
        if not F.equal(H.Delta(A.r(dx)), tensor(A.r(dx), A.unit)):
            return ("r", base.points[x])
        if not F.equal(H.Delta(A.s(dx)), tensor(A.unit, A.s(dx))):
            return ("s", base.points[x])
    return None


def coassociativity_defect(H: HopfData):
    A, T = H.algebra, H.triple
    for i in range(A.dim):
        lhs = H.Delta2(A.basis(i))
        rhs: dict = {}
        for k, l, c in H.terms(A.basis(i)):
            for (p, q), x in H.delta[l].items():
                acc(rhs, (k, p, q), c * x)
        if not T.equal(lhs, rhs):
            return _lab(H, i)
    return None


# counit --------------------------------------------------------------------------

def counit_morphism_defect(H: HopfData):
    A, Bx, base = H.algebra, H.crossed, H.algebra.base
    n = base.n
    for i in range(A.dim):
        for p in H.counit[i]:
            g = p // n
            if not (A.d(i) == A.dbar(i) == g):
                return ("grading",) + _lab(H, i)
    for i, j in product(range(A.dim), repeat=2):
        if H.eps(A.mul(A.basis(i), A.basis(j))) != Bx.mul(H.counit[i], H.counit[j]):
            return ("multiplicative",) + _lab(H, i, j)
    for i in range(A.dim):
        if H.eps(A.star(A.basis(i))) != Bx.star(H.counit[i]):
            return ("star",) + _lab(H, i)
    for x in range(base.n):
        dx = base.delta(x)
        if H.eps(A.r(dx)) != Bx.r(dx) or H.eps(A.s(dx)) != Bx.s(dx):
            return ("base", base.points[x])
    return None


def counit_relations(H: HopfData, x: dict, y: dict):
    """The four Sweedler forms of (eps (x)~ Id) Delta = Id = (Id (x)~ eps) Delta, each minus xy."""
    A = H.algebra
    xy = A.mul(x, y)
    one: dict = {}
    for k, l, c in H.terms(x):
        for key, v in A.mul_all(A.r(H.eps_sharp(A.basis(k))), A.basis(l), y).items():
            acc(one, key, c * v)
    two: dict = {}
    for k, l, c in H.terms(y):
        for key, v in A.mul_all(x, A.basis(k), A.s(H.eps_flat(A.basis(l)))).items():
            acc(two, key, c * v)
    three: dict = {}
    for k, l, c in H.terms(y):
        for key, v in A.mul_all(x, A.basis(l), A.r(H.eps_flat(A.basis(k)))).items():
            acc(three, key, c * v)
    four: dict = {}
    for k, l, c in H.terms(x):
        for key, v in A.mul_all(A.s(H.eps_sharp(A.basis(l))), A.basis(k), y).items():
            acc(four, key, c * v)
    return [vsub(e, xy) for e in (one, two, three, four)]


def counit_defect(H: HopfData):
    A = H.algebra
    for i, j in product(range(A.dim), repeat=2):
        for num, diff in enumerate(counit_relations(H, A.basis(i), A.basis(j)), start=1):
            if diff:
                return (f"relation {num}",) + _lab(H, i, j)
    return None


class _LinearSystem:
    """Equations sum coef * unknown = target, collected per output coordinate."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows, self.rhs = [], []

    def add(self, eq: dict, target: dict | None = None):
        """eq maps (output key, unknown column) to a coefficient; target maps output key to a value."""
        target = target or {}
        by_out: dict = {}
        for (key, u), v in eq.items():
            by_out.setdefault(key, {})
            acc(by_out[key], u, v)
        for key in set(by_out) | set(target):
            row = [ZERO] * self.ncols
            for u, v in by_out.get(key, {}).items():
                row[u] = v
            self.rows.append(row)
            self.rhs.append(target.get(key, ZERO))

    def fix_zero(self, u: int):
        self.add({(("zero", u), u): ONE})

    def unique_solution(self):
        """(solution, None) or (None, reason)."""
        sol = solve(self.rows, self.rhs)
        if sol is None:
            return None, "no solution"
        if nullspace(self.rows):
            return None, "not unique"
        return sol, None


def _image_eq(images: dict, col, values) -> dict:
    """Linear expression sum_k c_k f(e_k) for an unknown map f with f(e_k) = sum_p col[(k, p)] e_p."""
    out: dict = {}
    for k, c in images.items():
        for p in values:
            acc(out, (p, col[(k, p)]), c)
    return out


def counit_uniqueness_defect(H: HopfData):
    """Among graded B-bimodule maps eps': A -> B x| G, the counit relations have the single solution eps."""
    A, base, Bx = H.algebra, H.algebra.base, H.crossed
    n, m = A.dim, Bx.dim
    unknowns = [(i, p) for i in range(n) for p in range(m)]
    col = {u: c for c, u in enumerate(unknowns)}
    system = _LinearSystem(len(unknowns))
    for i, p in unknowns:
        if A.grading[i] != Bx.grading[p]:
            system.fix_zero(col[(i, p)])
    for i in range(n):
        for x in range(base.n):
            dx = base.delta(x)
            for emb, bemb in ((A.r, Bx.r), (A.s, Bx.s)):
                lhs = _image_eq(A.mul(emb(dx), A.basis(i)), col, range(m))
                rhs: dict = {}
                for p in range(m):
                    for q, v in Bx.mul(bemb(dx), {p: ONE}).items():
                        acc(rhs, (q, col[(i, p)]), -v)
                system.add(_merge(lhs, rhs))
                lhs = _image_eq(A.mul(A.basis(i), emb(dx)), col, range(m))
                rhs = {}
                for p in range(m):
                    for q, v in Bx.mul({p: ONE}, bemb(dx)).items():
                        acc(rhs, (q, col[(i, p)]), -v)
                system.add(_merge(lhs, rhs))
    for i, j in product(range(n), repeat=2):
        x, y = A.basis(i), A.basis(j)
        xy = A.mul(x, y)
        eqs = [dict() for _ in range(4)]  # (output basis, unknown) -> coef
        for k, l, c in H.terms(x):
            for p in range(m):
                z = p % base.n
                for key, v in A.mul_all(A.r(base.delta(z)), A.basis(l), y).items():
                    acc(eqs[0], (key, col[(k, p)]), c * v)
                for key, v in A.mul_all(A.s(base.delta(z)), A.basis(k), y).items():
                    acc(eqs[3], (key, col[(l, p)]), c * v)
        for k, l, c in H.terms(y):
            for p in range(m):
                g, z = divmod(p, base.n)
                zf = base.action[base.group.inv(g)][z]
                for key, v in A.mul_all(x, A.basis(k), A.s(base.delta(zf))).items():
                    acc(eqs[1], (key, col[(l, p)]), c * v)
                for key, v in A.mul_all(x, A.basis(l), A.r(base.delta(zf))).items():
                    acc(eqs[2], (key, col[(k, p)]), c * v)
        for eq in eqs:
            system.add(eq, xy)
    sol, why = system.unique_solution()
    if why:
        return f"counit relations: {why}"
    for (i, p), v in zip(unknowns, sol):
        if H.counit[i].get(p, ZERO) != v:
            return ("solution differs",) + _lab(H, i)
    return None


def _merge(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        acc(out, k, c)
    return out


# antipode ------------------------------------------------------------------------

def antipode_morphism_defect(H: HopfData):
    """S: A -> A^{co,op}: anti-multiplicative, swaps r and s, maps A_{g,h} to A_{h^-1,g^-1}."""
    A, base, G = H.algebra, H.algebra.base, H.algebra.base.group
    try:
        H.antipode_inverse
    except InvalidInstance:
        return "not invertible"
    for i, j in product(range(A.dim), repeat=2):
        if H.S(A.mul(A.basis(i), A.basis(j))) != A.mul(H.antipode[j], H.antipode[i]):
            return ("anti-multiplicative",) + _lab(H, i, j)
    for x in range(base.n):
        dx = base.delta(x)
        if H.S(A.r(dx)) != A.s(dx) or H.S(A.s(dx)) != A.r(dx):
            return ("base", base.points[x])
    for i in range(A.dim):
        want = (G.inv(A.dbar(i)), G.inv(A.d(i)))
        if any(A.grading[k] != want for k in H.antipode[i]):
            return ("grading",) + _lab(H, i)
        if A.star(H.S(A.star(H.S(A.basis(i))))) != A.basis(i):
            return ("star o S not involutive",) + _lab(H, i)
    return None


def antipode_relations(H: HopfData, x: dict, y: dict):
    """sum S(x1) x2 y - s(eps_flat(x)) y and sum x y1 S(y2) - x r(eps_sharp(y))."""
    A = H.algebra
    one: dict = {}
    for k, l, c in H.terms(x):
        for key, v in A.mul_all(H.antipode[k], A.basis(l), y).items():
            acc(one, key, c * v)
    two: dict = {}
    for k, l, c in H.terms(y):
        for key, v in A.mul_all(x, A.basis(k), H.antipode[l]).items():
            acc(two, key, c * v)
    return [vsub(one, A.mul(A.s(H.eps_flat(x)), y)), vsub(two, A.mul(x, A.r(H.eps_sharp(y))))]


def antipode_defect(H: HopfData):
    A = H.algebra
    for i, j in product(range(A.dim), repeat=2):
        for num, diff in enumerate(antipode_relations(H, A.basis(i), A.basis(j)), start=1):
            if diff:
                return (f"diagram {num}",) + _lab(H, i, j)
    return None


def antipode_diagram_defect(H: HopfData, num: int):
    """One of the two antipode diagrams, with the first failing basis pair."""
    A = H.algebra
    for i, j in product(range(A.dim), repeat=2):
        if antipode_relations(H, A.basis(i), A.basis(j))[num - 1]:
            return _lab(H, i, j)
    return None


def antipode_sigma_defect(H: HopfData):
    """sum S(x1) (x)~ S(x2) = sum S(x)_2 (x)~ S(x)_1 in A^{co,op} (x)~ A^{co,op}."""
    A = H.algebra
    Fco = FiberProduct(coopposite(opposite(A)))
    for i in range(A.dim):
        lhs: dict = {}
        for k, l, c in H.terms(A.basis(i)):
            for key, v in tensor(H.antipode[k], H.antipode[l]).items():
                acc(lhs, key, c * v)
        rhs = {(l, k): c for (k, l), c in H.Delta(H.antipode[i]).items()}
        if not Fco.equal(lhs, rhs):
            return _lab(H, i)
    return None


def antipode_uniqueness_defect(H: HopfData):
    """Among maps A -> A^{co,op} compatible with grading and base embeddings, the antipode diagrams force S' = S."""
    A, base, G = H.algebra, H.algebra.base, H.algebra.base.group
    n = A.dim
    col = {(i, k): i * n + k for i in range(n) for k in range(n)}  # coefficient of e_k in S'(e_i)
    system = _LinearSystem(n * n)
    for i in range(n):
        want = (G.inv(A.dbar(i)), G.inv(A.d(i)))
        for k in range(n):
            if A.grading[k] != want:
                system.fix_zero(col[(i, k)])
    for i in range(n):
        for x in range(base.n):
            dx = base.delta(x)
            # S'(r(b) a) = S'(a) s(b), S'(s(b) a) = S'(a) r(b), S'(a r(b)) = s(b) S'(a), S'(a s(b)) = r(b) S'(a)
            for left, emb, other in ((True, A.r, A.s), (True, A.s, A.r), (False, A.r, A.s), (False, A.s, A.r)):
                prod_ = A.mul(emb(dx), A.basis(i)) if left else A.mul(A.basis(i), emb(dx))
                lhs = _image_eq(prod_, col, range(n))
                rhs: dict = {}
                for k in range(n):
                    img = A.mul(A.basis(k), other(dx)) if left else A.mul(other(dx), A.basis(k))
                    for q, v in img.items():
                        acc(rhs, (q, col[(i, k)]), -v)
                system.add(_merge(lhs, rhs))
    for i, j in product(range(n), repeat=2):
        x, y = A.basis(i), A.basis(j)
        eq1: dict = {}
        for k, l, c in H.terms(x):
            for t in range(n):
                for key, v in A.mul_all(A.basis(t), A.basis(l), y).items():
                    acc(eq1, (key, col[(k, t)]), c * v)
        eq2: dict = {}
        for k, l, c in H.terms(y):
            for t in range(n):
                for key, v in A.mul_all(x, A.basis(k), A.basis(t)).items():
                    acc(eq2, (key, col[(l, t)]), c * v)
        system.add(eq1, A.mul(A.s(H.eps_flat(x)), y))
        system.add(eq2, A.mul(x, A.r(H.eps_sharp(y))))
    sol, why = system.unique_solution()
    if why:
        return f"antipode diagrams: {why}"
    for (i, k), c in col.items():
        if H.antipode[i].get(k, ZERO) != sol[c]:
            return ("solution differs",) + _lab(H, i)
    return None


# Galois maps ---------------------------------------------------------------------

GALOIS_SPACES = {
    1: (("As", "sA"), ("sA", "rA")),
    2: (("Ar", "rA"), ("As", "Ar")),
    3: (("sA", "As"), ("As", "Ar")),
    4: (("rA", "Ar"), ("sA", "rA")),
}


def galois_pair(H: HopfData, k: int, i: int, j: int) -> dict:
    """T_k(e_i (x) e_j) on representatives."""
    A = H.algebra
    x, y = A.basis(i), A.basis(j)
    out: dict = {}
    if k == 1:
        for a, b, c in H.terms(x):
            for key, v in tensor(A.basis(a), A.mul(A.basis(b), y)).items():
                acc(out, key, c * v)
    elif k == 2:
        for a, b, c in H.terms(y):
            for key, v in tensor(A.mul(x, A.basis(a)), A.basis(b)).items():
                acc(out, key, c * v)
    elif k == 3:
        for a, b, c in H.terms(x):
            for key, v in tensor(A.basis(a), A.mul(y, A.basis(b))).items():
                acc(out, key, c * v)
    elif k == 4:
        for a, b, c in H.terms(y):
            for key, v in tensor(A.mul(A.basis(a), x), A.basis(b)).items():
                acc(out, key, c * v)
    else:
        raise ValueError(f"no Galois map T{k}")
    return out


def galois_inverse_pair(H: HopfData, k: int, i: int, j: int) -> dict:
    """The closed-form inverse of T_k on e_i (x) e_j."""
    A = H.algebra
    x, y = A.basis(i), A.basis(j)
    out: dict = {}
    if k == 1:
        for a, b, c in H.terms(x):
            for key, v in tensor(A.basis(a), H.S(A.mul(H.S_inv(y), A.basis(b)))).items():
                acc(out, key, c * v)
    elif k == 2:
        for a, b, c in H.terms(y):
            for key, v in tensor(H.S(A.mul(A.basis(a), H.S_inv(x))), A.basis(b)).items():
                acc(out, key, c * v)
    elif k == 3:
        for a, b, c in H.terms(x):
            for key, v in tensor(A.basis(a), H.S_inv(A.mul(A.basis(b), H.S(y)))).items():
                acc(out, key, c * v)
    elif k == 4:
        for a, b, c in H.terms(y):
            for key, v in tensor(H.S_inv(A.mul(H.S(x), A.basis(a))), A.basis(b)).items():
                acc(out, key, c * v)
    else:
        raise ValueError(f"no Galois map T{k}")
    return out


class GaloisMap:
    def __init__(self, H: HopfData, k: int):
        self.H, self.k = H, k
        (dl, dr), (cl, cr) = GALOIS_SPACES[k]
        self.domain = BalancedTensor(H.algebra, dl, dr)
        self.codomain = BalancedTensor(H.algebra, cl, cr)

    def __call__(self, u: dict) -> dict:
        return self.codomain.project(_bilinear(lambda i, j: galois_pair(self.H, self.k, i, j), u))

    def inverse(self, u: dict) -> dict:
        return self.domain.project(_bilinear(lambda i, j: galois_inverse_pair(self.H, self.k, i, j), u))

    def matrix(self) -> list:
        cod = self.codomain
        cols = [cod.coords(self({key: ONE})) for key in self.domain.basis]
        return [[col.get(r, ZERO) for col in cols] for r in range(cod.dim)]

    def defect(self):
        dom, cod = self.domain, self.codomain
        for rel in dom.reducer.basis:
            if self(rel):
                return ("T not well defined", min(rel))
        for rel in cod.reducer.basis:
            if self.inverse(rel):
                return ("inverse not well defined", min(rel))
        if dom.dim != cod.dim:
            return ("dimension", dom.dim, cod.dim)
        for key in dom.basis:
            if not dom.equal(self.inverse(self({key: ONE})), {key: ONE}):
                return ("inverse after T", _lab(self.H, *key))
        for key in cod.basis:
            if not cod.equal(self(self.inverse({key: ONE})), {key: ONE}):
                return ("T after inverse", _lab(self.H, *key))
        if dom.dim and rank(self.matrix()) != cod.dim:
            return ("rank",)
        return None


def galois(H: HopfData, k: int, u: dict) -> dict:
    return GaloisMap(H, k)(u)


def galois_inv(H: HopfData, k: int, u: dict) -> dict:
    return GaloisMap(H, k).inverse(u)


def galois_defect(H: HopfData):
    for k in (1, 2, 3, 4):
        w = GaloisMap(H, k).defect()
        if w:
            return (f"T{k}",) + tuple(w)
    return None


def alternate_lift(H: HopfData) -> HopfData:
    """Same comultiplication with every lift shifted by a fiber-product relation."""
    F = H.fiber
    rels = F.reducer.basis
    if not rels:
        return H
    A = H.algebra
    delta = []
    for i in range(A.dim):
        want = (A.d(i), A.dbar(i))
        shift = next((r for r in rels if all((A.d(k), A.dbar(l)) == want for k, l in r)), None)
        delta.append(H.delta[i] if shift is None else {k: v for k, v in _add(H.delta[i], shift).items()})
    return H.with_tables(delta=tuple(delta))


def _add(u: dict, v: dict) -> dict:
    out = dict(u)
    for k, c in v.items():
        acc(out, k, c)
    return out


def lift_independence_defect(H: HopfData):
    """Counit, antipode and Galois computations agree for two lifts of Delta."""
    H2 = alternate_lift(H)
    if H2 is H:
        return None
    A = H.algebra
    for i, j in product(range(A.dim), repeat=2):
        x, y = A.basis(i), A.basis(j)
        if counit_relations(H, x, y) != counit_relations(H2, x, y):
            return ("counit",) + _lab(H, i, j)
        if antipode_relations(H, x, y) != antipode_relations(H2, x, y):
            return ("antipode",) + _lab(H, i, j)
    for k in (1, 2, 3, 4):
        g1, g2 = GaloisMap(H, k), GaloisMap(H2, k)
        for key in g1.domain.basis:
            if not g1.codomain.equal(g1({key: ONE}), g2({key: ONE})):
                return (f"T{k}",) + _lab(H, *key)
    return None
