"""Exact linear algebra over the Gaussian rationals Q(i).

Dense matrices are lists of rows.  Sparse vectors are dicts mapping an index
to a nonzero GaussianRational; zero entries are never stored.  Degenerate
inner-product spaces are handled as Gram quotients (GramSpace) instead of
orthonormal bases, so that no square roots are needed.
"""

from __future__ import annotations

from contextlib import contextmanager
from functools import cached_property

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

_QZERO = Q(0)


class GaussianRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mk(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mk(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _mk(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return _mk(-self.re, -self.im)

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return _mk(self.re * o.re, _QZERO)
        return _mk(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        if not o.im:
            if not o.re:
                raise ZeroDivisionError("division by zero in Q(i)")
            return _mk(self.re / o.re, self.im / o.re)
        d = o.re * o.re + o.im * o.im
        return _mk((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else ONE / self
        out = ONE
        for _ in range(abs(n)):
            out = out * base
        return out

    def conj(self):
        return _mk(self.re, -self.im)

    def abs2(self):
        """|z|^2 as a rational."""
        return self.re * self.re + self.im * self.im

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return not self.im

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"gq({str(self)!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"

    def to_json(self):
        if not self.im:
            return rational_str(self.re)
        return {"re": rational_str(self.re), "im": rational_str(self.im)}


def _mk(re, im) -> GaussianRational:
    z = object.__new__(GaussianRational)
    z.re = re
    z.im = im
    return z


def _coerce(value):
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, type(_QZERO))) or hasattr(value, "denominator"):
        return _mk(Q(value), _QZERO)
    return None


def rational_str(q) -> str:
    q = Q(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text):
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Q(text)
    if not isinstance(text, str):
        raise ValueError(f"rational must be a 'p/q' string, got {text!r}")
    try:
        return Q(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def gq(value=0, im=None) -> GaussianRational:
    """Build a GaussianRational from ints, rationals, 'p/q' strings or {'re','im'} dicts."""
    if im is not None:
        return _mk(Q(value), Q(im))
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, dict):
        return _mk(parse_rational(value.get("re", 0)), parse_rational(value.get("im", 0)))
    if isinstance(value, str):
        return _mk(parse_rational(value), _QZERO)
    o = _coerce(value)
    if o is None:
        raise TypeError(f"cannot convert {value!r} to a Gaussian rational")
    return o


ZERO = gq(0)
ONE = gq(1)
I = gq(0, 1)


# sparse vectors -------------------------------------------------------------

def acc(target: dict, key, value) -> None:
    """target[key] += value, dropping the entry if it cancels."""
    if not value:
        return
    old = target.get(key)
    if old is None:
        target[key] = value
    else:
        new = old + value
        if new:
            target[key] = new
        else:
            del target[key]


def vadd(u: dict, v: dict, coef=ONE) -> dict:
    out = dict(u)
    for k, c in v.items():
        acc(out, k, coef * c)
    return out


def vsub(u: dict, v: dict) -> dict:
    return vadd(u, v, -ONE)


def vscale(v: dict, coef) -> dict:
    coef = gq(coef)
    if not coef:
        return {}
    return {k: coef * c for k, c in v.items()}


def vconj(v: dict) -> dict:
    return {k: c.conj() for k, c in v.items()}


def vsum(vectors, coefs=None) -> dict:
    out: dict = {}
    for idx, v in enumerate(vectors):
        c = ONE if coefs is None else coefs[idx]
        for k, x in v.items():
            acc(out, k, c * x)
    return out


def to_dense(v: dict, n: int) -> list:
    out = [ZERO] * n
    for k, c in v.items():
        out[k] = c
    return out


def to_sparse(v) -> dict:
    return {k: c for k, c in enumerate(v) if c}


# dense matrices -------------------------------------------------------------

def zeros(rows: int, cols: int) -> list:
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int) -> list:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def to_matrix(rows) -> list:
    return [[gq(x) for x in row] for row in rows]


def shape(m) -> tuple:
    return (len(m), len(m[0]) if m else 0)


def matmul(a, b) -> list:
    n, k = shape(a)
    k2, p = shape(b)
    if k != k2:
        raise ValueError(f"shape mismatch {n}x{k} @ {k2}x{p}")
    out = zeros(n, p)
    for i in range(n):
        row = out[i]
        for t, ait in enumerate(a[i]):
            if not ait:
                continue
            bt = b[t]
            for j in range(p):
                if bt[j]:
                    row[j] = row[j] + ait * bt[j]
    return out


def matvec(m, v: list) -> list:
    return [sum((x * y for x, y in zip(row, v) if x and y), ZERO) for row in m]


def adjoint(m) -> list:
    n, p = shape(m)
    return [[m[i][j].conj() for i in range(n)] for j in range(p)]


def transpose(m) -> list:
    n, p = shape(m)
    return [[m[i][j] for i in range(n)] for j in range(p)]


def matadd(a, b, coef=ONE) -> list:
    return [[x + coef * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matscale(m, coef) -> list:
    return [[coef * x for x in row] for row in m]


def is_hermitian(m) -> bool:
    n, p = shape(m)
    if n != p:
        return False
    return all(m[i][j] == m[j][i].conj() for i in range(n) for j in range(i, n))


def is_zero(m) -> bool:
    return not any(x for row in m for x in row)


def _echelon(rows: list, reduced: bool = True):
    """Row-reduce sparse rows in place order; returns (pivot rows, pivot columns).

    Pivot columns are chosen as the smallest available column index, so the
    result is deterministic.
    """
    basis: list = []
    pivots: list = []
    for row in rows:
        r = dict(row)
        for prow, pc in zip(basis, pivots):
            c = r.get(pc)
            if c:
                for k, x in prow.items():
                    acc(r, k, -c * x)
        if not r:
            continue
        pc = min(r)
        inv = ONE / r[pc]
        r = {k: x * inv for k, x in r.items()}
        if reduced:
            for prow in basis:
                c = prow.get(pc)
                if c:
                    for k, x in r.items():
                        acc(prow, k, -c * x)
        basis.append(r)
        pivots.append(pc)
    return basis, pivots


def rank(m) -> int:
    return len(_echelon([to_sparse(row) for row in m], reduced=False)[0])


def rank_of_vectors(vectors) -> int:
    return len(_echelon([v if isinstance(v, dict) else to_sparse(v) for v in vectors], reduced=False)[0])


def rref(m):
    n, p = shape(m)
    basis, pivots = _echelon([to_sparse(row) for row in m])
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    rows = [to_dense(basis[i], p) for i in order]
    rows += [[ZERO] * p for _ in range(n - len(rows))]
    return rows, [pivots[i] for i in order]


def nullspace(m) -> list:
    """Basis of {v : m v = 0}, one dense vector per free column."""
    n, p = shape(m)
    basis, pivots = _echelon([to_sparse(row) for row in m])
    pivot_set = set(pivots)
    out = []
    for free in range(p):
        if free in pivot_set:
            continue
        v = [ZERO] * p
        v[free] = ONE
        for prow, pc in zip(basis, pivots):
            c = prow.get(free)
            if c:
                v[pc] = -c
        out.append(v)
    return out


def solve(m, b: list):
    """One solution of m x = b, or None if inconsistent."""
    n, p = shape(m)
    rows = [to_sparse(list(row) + [b[i]]) for i, row in enumerate(m)]
    basis, pivots = _echelon(rows)
    if p in pivots:
        return None
    x = [ZERO] * p
    for prow, pc in zip(basis, pivots):
        x[pc] = prow.get(p, ZERO)
    return x


def inverse(m) -> list:
    n, p = shape(m)
    if n != p:
        raise ValueError("inverse of a non-square matrix")
    rows = []
    for i, row in enumerate(m):
        r = to_sparse(row)
        r[p + i] = ONE
        rows.append(r)
    basis, pivots = _echelon(rows)
    if len(pivots) < n or max(pivots) >= p:
        raise ZeroDivisionError("matrix is singular")
    out = zeros(n, n)
    for prow, pc in zip(basis, pivots):
        for k, x in prow.items():
            if k >= p:
                out[pc][k - p] = x
    return out


class SubspaceReducer:
    """Normal forms modulo a subspace spanned by sparse vectors."""

    def __init__(self, generators):
        self.basis, self.pivots = _echelon([dict(g) for g in generators if g])
        self._by_pivot = dict(zip(self.pivots, self.basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v: dict) -> dict:
        r = dict(v)
        for pc in sorted(set(r) & set(self._by_pivot)):
            c = r.get(pc)
            if c:
                for k, x in self._by_pivot[pc].items():
                    acc(r, k, -c * x)
        # reduced echelon rows only contain free columns besides the pivot
        return r

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)


# positivity ---------------------------------------------------------------

def ldl_pivoted(g):
    """Exact pivoted LDL^H of a Hermitian matrix.

    Returns (pivots, psd).  The pivot is the largest remaining diagonal entry,
    ties broken by lowest index.  When every remaining diagonal entry vanishes
    the remaining Schur complement must vanish too, else g is indefinite.
    """
    n = len(g)
    schur = [{j: x for j, x in enumerate(row) if x} for row in g]
    remaining = set(range(n))
    pivots = []
    while remaining:
        best, best_val = None, None
        for i in sorted(remaining):
            d = schur[i].get(i)
            if d is None:
                continue
            if d.im:
                raise ValueError("matrix is not Hermitian")
            if d.re < 0:
                return pivots, False
            if best is None or d.re > best_val:
                best, best_val = i, d.re
        if best is None:
            for i in remaining:
                if any(j in remaining for j in schur[i]):
                    return pivots, False
            return pivots, True
        p = best
        d = schur[p][p]
        pivots.append(p)
        remaining.discard(p)
        prow = {j: x for j, x in schur[p].items() if j in remaining}
        for i in list(remaining):
            sip = schur[i].get(p)
            if not sip:
                continue
            f = sip / d
            row = schur[i]
            for j, x in prow.items():
                acc(row, j, -f * x)
    return pivots, True


_gram_logs: list = []


@contextmanager
def record_grams():
    """Collect (name, gram, exact psd verdict) for every Gram matrix tested while active."""
    log: list = []
    _gram_logs.append(log)
    try:
        yield log
    finally:
        _gram_logs.remove(log)


def _record(name: str, g, psd: bool) -> None:
    for log in _gram_logs:
        log.append((name, g, psd))


def is_psd_hermitian(g, name: str = "") -> bool:
    if not is_hermitian(g):
        raise ValueError("is_psd_hermitian needs a Hermitian matrix")
    psd = ldl_pivoted(g)[1]
    _record(name, g, psd)
    return psd


def float_psd_oracle(g, threshold: float = -1e-9) -> bool:
    """Floating eigenvalue check used as an independent oracle."""
    import numpy as np

    if not g:
        return True
    eig = np.linalg.eigvalsh(to_numpy(g))
    return bool(eig.min() >= threshold)


def to_numpy(m):
    import numpy as np

    return np.array([[complex(x) for x in row] for row in m], dtype=complex)


def numeric_psd_sqrt(g, tol: float = 1e-12):
    """Floating Hermitian square root of a PSD matrix, residual checked."""
    import numpy as np

    a = g if isinstance(g, np.ndarray) else to_numpy(g)
    a = (a + a.conj().T) / 2
    vals, vecs = np.linalg.eigh(a)
    root = (vecs * np.sqrt(np.clip(vals, 0, None))) @ vecs.conj().T
    residual = float(np.max(np.abs(root @ root - a))) if a.size else 0.0
    if residual > tol * max(1.0, float(np.max(np.abs(a))) if a.size else 1.0):
        raise ArithmeticError(f"square root did not converge: residual {residual:.3e}")
    return root


# Gram spaces ----------------------------------------------------------------

class GramSpace:
    """Inner-product space presented by a spanning family and its Gram matrix.

    Vectors are sparse dicts over ambient indices.  Classes modulo the radical
    are represented in coordinates with respect to the LDL pivot vectors,
    whose Gram block is nonsingular.
    """

    def __init__(self, gram, labels=None, name: str = ""):
        self.name = name
        self.gram = gram
        self.dim_ambient = len(gram)
        self.labels = labels
        if not is_hermitian(gram):
            raise ValueError(f"Gram matrix of {name or 'space'} is not Hermitian")
        pivots, psd = ldl_pivoted(gram)
        _record(name, gram, psd)
        if not psd:
            raise ValueError(f"Gram matrix of {name or 'space'} is not positive semidefinite")
        self.pivots = sorted(pivots)
        self.quotient_dim = len(self.pivots)
        self._rows = [{j: x for j, x in enumerate(row) if x} for row in gram]
        block = [[gram[i][j] for j in self.pivots] for i in self.pivots]
        self._block_inv = inverse(block) if block else []

    @classmethod
    def from_function(cls, n: int, entry, labels=None, name: str = ""):
        return cls([[entry(i, j) for j in range(n)] for i in range(n)], labels, name)

    def gram_apply(self, v: dict) -> dict:
        out: dict = {}
        for j, c in v.items():
            col = self._rows[j]
            for i, x in col.items():
                # G is Hermitian: G[i][j] = conj(G[j][i])
                acc(out, i, x.conj() * c)
        return out

    def inner(self, u: dict, v: dict):
        gv = self.gram_apply(v)
        return sum((c.conj() * gv[k] for k, c in u.items() if k in gv), ZERO)

    def is_null(self, v: dict) -> bool:
        return not self.gram_apply(v)

    def equal(self, u: dict, v: dict) -> bool:
        return self.is_null(vsub(u, v))

    def project(self, v: dict) -> list:
        """Coordinates of the class of v in the pivot basis."""
        gv = self.gram_apply(v)
        t = [gv.get(p, ZERO) for p in self.pivots]
        return [sum((x * y for x, y in zip(row, t) if x and y), ZERO) for row in self._block_inv]

    def embed(self, coords: list) -> dict:
        return {p: c for p, c in zip(self.pivots, coords) if c}

    def normal_form(self, v: dict) -> dict:
        return self.embed(self.project(v))

    @cached_property
    def radical_basis(self) -> list:
        pivot_set = set(self.pivots)
        out = []
        for j in range(self.dim_ambient):
            if j in pivot_set:
                continue
            out.append(vsub({j: ONE}, self.normal_form({j: ONE})))
        return out

    @cached_property
    def quotient_gram(self) -> list:
        return [[self.gram[i][j] for j in self.pivots] for i in self.pivots]


class GramMap:
    """Linear map between Gram spaces, stored by the images of ambient basis vectors."""

    def __init__(self, domain: GramSpace, codomain: GramSpace, columns, name: str = ""):
        if len(columns) != domain.dim_ambient:
            raise ValueError("column count does not match the domain")
        self.domain = domain
        self.codomain = codomain
        self.columns = [dict(c) for c in columns]
        self.name = name

    @classmethod
    def from_function(cls, domain, codomain, image, name: str = ""):
        return cls(domain, codomain, [image(i) for i in range(domain.dim_ambient)], name)

    @classmethod
    def identity(cls, space: GramSpace):
        return cls(space, space, [{i: ONE} for i in range(space.dim_ambient)], "id")

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for i, c in v.items():
            for k, x in self.columns[i].items():
                acc(out, k, c * x)
        return out

    def compose(self, other: "GramMap") -> "GramMap":
        """self after other."""
        return GramMap(other.domain, self.codomain, [self.apply(c) for c in other.columns])

    def radical_witness(self):
        """A radical vector of the domain whose image is not null, or None."""
        for r in self.domain.radical_basis:
            if not self.codomain.is_null(self.apply(r)):
                return r
        return None

    def well_defined(self) -> bool:
        return self.radical_witness() is None

    def quotient_matrix(self) -> list:
        cols = [self.codomain.project(self.columns[p]) for p in self.domain.pivots]
        return transpose(cols) if cols else [[] for _ in range(self.codomain.quotient_dim)]

    def adjoint(self) -> "GramMap":
        """The form adjoint f# with <f v | w> = <v | f# w>."""
        dom, cod = self.domain, self.codomain
        gm = [cod.gram_apply(c) for c in self.columns]
        cols = []
        for m in range(cod.dim_ambient):
            t = [gm[p].get(m, ZERO).conj() for p in dom.pivots]
            coords = [sum((x * y for x, y in zip(row, t) if x and y), ZERO) for row in dom._block_inv]
            cols.append(dom.embed(coords))
        return GramMap(cod, dom, cols, (self.name + "#") if self.name else "")

    def form_defect(self):
        """First ambient pair (i, j) with <f e_i | f e_j> != <e_i | e_j>, or None."""
        cod, dom = self.codomain, self.domain
        gm = [cod.gram_apply(c) for c in self.columns]
        for i, ci in enumerate(self.columns):
            for j in range(dom.dim_ambient):
                val = sum((c.conj() * gm[j][k] for k, c in ci.items() if k in gm[j]), ZERO)
                if val != dom.gram[i][j]:
                    return (i, j)
        return None

    def preserves_form(self) -> bool:
        return self.form_defect() is None

    def is_surjective(self) -> bool:
        return rank(self.quotient_matrix()) == self.codomain.quotient_dim if self.domain.quotient_dim else self.codomain.quotient_dim == 0

    def is_unitary(self) -> bool:
        return self.well_defined() and self.preserves_form() and self.is_surjective()

    def equals(self, other: "GramMap") -> bool:
        """Equality as maps between quotients."""
        return all(self.codomain.equal(self.apply({p: ONE}), other.apply({p: ONE})) for p in self.domain.pivots)

    def first_difference(self, other: "GramMap"):
        for p in range(self.domain.dim_ambient):
            if not self.codomain.equal(self.columns[p], other.columns[p]):
                return p
        return None


def preserves_form(f: GramMap) -> bool:
    return f.preserves_form()


def gram_adjoint(f: GramMap) -> GramMap:
    return f.adjoint()


def radical_quotient(g, name: str = "") -> GramSpace:
    return GramSpace(g, name=name)


def span_equal(s1, s2) -> bool:
    """Equality of linear spans of two families of same-shape matrices."""
    shapes = {shape(m) for m in list(s1) + list(s2)}
    if len(shapes) > 1:
        raise ValueError(f"span_equal needs matrices of one shape, got {sorted(shapes)}")
    v1 = [to_sparse([x for row in m for x in row]) for m in s1]
    v2 = [to_sparse([x for row in m for x in row]) for m in s2]
    r1, r2 = rank_of_vectors(v1), rank_of_vectors(v2)
    return r1 == r2 == rank_of_vectors(v1 + v2)
