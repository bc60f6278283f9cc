"""Left, right and bi-integrals, the total integral nu, its modular automorphism and the D-twists."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from itertools import product

from dqg.algebroid import TensorQuotient, tensor
from dqg.base import NotApplicable
from dqg.exactlin import ONE, ZERO, GaussianRational, acc, gq, inverse, is_psd_hermitian, nullspace, rank, solve
from dqg.hopf import HopfData


def _lin(table, a: dict) -> dict:
    out: dict = {}
    for i, c in a.items():
        for k, x in table[i].items():
            acc(out, k, c * x)
    return out


@dataclass(frozen=True, eq=False)
class IntegralData:
    hopf: HopfData
    phi: tuple  # phi[i]: element of B
    psi: tuple
    h: tuple | None = None  # h[i]: {(x, y): c} meaning sum c delta_x (x) delta_y

    @property
    def A(self):
        return self.hopf.algebra

    @property
    def base(self):
        return self.hopf.algebra.base

    def with_tables(self, **changes) -> "IntegralData":
        data = dict(hopf=self.hopf, phi=self.phi, psi=self.psi, h=self.h)
        data.update(changes)
        return IntegralData(**data)

    # functionals ------------------------------------------------------
    def phi_of(self, a: dict) -> dict:
        return _lin(self.phi, a)

    def psi_of(self, a: dict) -> dict:
        return _lin(self.psi, a)

    def h_of(self, a: dict) -> dict:
        return _lin(self.h, a)

    def nu(self, a: dict) -> GaussianRational:
        return self.base.mu(self.phi_of(a))

    def nu_inv(self, a: dict) -> GaussianRational:
        return self.base.mu(self.psi_of(a))

    @cached_property
    def nu_basis(self) -> tuple:
        return tuple(self.nu({i: ONE}) for i in range(self.A.dim))

    def nu_fast(self, a: dict) -> GaussianRational:
        v = self.nu_basis
        return sum((c * v[i] for i, c in a.items()), ZERO)

    @cached_property
    def nu_gram(self) -> list:
        """Entries nu(e_i* e_j)."""
        A = self.A
        stars = [A.star(A.basis(i)) for i in range(A.dim)]
        return [[self.nu_fast(A.mul(stars[i], A.basis(j))) for j in range(A.dim)] for i in range(A.dim)]

    @cached_property
    def pairing(self) -> list:
        """Entries nu(e_i e_j)."""
        A = self.A
        return [[self.nu_fast(A.mult.get((i, j), {})) for j in range(A.dim)] for i in range(A.dim)]

    # modular automorphism ------------------------------------------------
    @cached_property
    def theta_table(self) -> tuple:
        """theta(e_i) from nu(e_i e_j) = nu(e_j theta(e_i)) for all j."""
        P = self.pairing
        n = len(P)
        try:
            Pinv = inverse(P)
        except ZeroDivisionError as exc:
            raise ArithmeticError("nu not faithful") from exc
        cols = []
        for i in range(n):
            rhs = [P[i][j] for j in range(n)]
            cols.append({k: v for k in range(n) if (v := sum((Pinv[k][j] * rhs[j] for j in range(n)), ZERO))})
        return tuple(cols)

    @cached_property
    def theta_inv_table(self) -> tuple:
        return _invert_table(self.theta_table, self.A.dim)

    def theta(self, a: dict) -> dict:
        return _lin(self.theta_table, a)

    def theta_inv(self, a: dict) -> dict:
        return _lin(self.theta_inv_table, a)

    # D-twists -----------------------------------------------------------
    def _twist(self, a: dict, power, bar: bool) -> dict:
        """r(D^p_{d(a)^-1}) a, or s(D^p_{dbar(a)^-1}) a when bar is set; p in {1, -1, 0.5, -0.5}."""
        A, base = self.A, self.base
        G = base.group
        cc = base.cocycle
        out: dict = {}
        for i, c in a.items():
            g = G.inv(A.dbar(i) if bar else A.d(i))
            if power in (1, -1):
                vals = cc.d[g]
            else:
                vals = cc.d_half[g] if cc.d_half is not None else None
                if vals is None:
                    raise ArithmeticError("no rational square-root cocycle")
            if power < 0:
                vals = [1 / v for v in vals]
            b = {x: gq(v) for x, v in enumerate(vals)}
            emb = A.s(b) if bar else A.r(b)
            for k, v in A.mul(emb, A.basis(i)).items():
                acc(out, k, c * v)
        return out

    def D(self, a, power=1):
        return self._twist(a, power, False)

    def Dbar(self, a, power=1):
        return self._twist(a, power, True)

    def theta_D(self, a: dict) -> dict:
        return self.theta(self.D(a, -1))

    def theta_Dbar(self, a: dict) -> dict:
        return self.theta(self.Dbar(a, -1))

    def theta_DDbar(self, a: dict) -> dict:
        return self.theta(self.D(self.Dbar(a, -1), -1))


def _invert_table(table, n) -> tuple:
    m = [[table[j].get(i, ZERO) for j in range(n)] for i in range(n)]
    inv = inverse(m)
    return tuple({i: inv[i][j] for i in range(n) if inv[i][j]} for j in range(n))


def _lab(I: IntegralData, *idx):
    return tuple(I.A.labels[i] for i in idx)


# B (x) B helpers -------------------------------------------------------------

def bb_mul(base, u: dict) -> dict:
    """m_B: b (x) b' |-> b b'."""
    out: dict = {}
    for (p, q), c in u.items():
        if p == q:
            acc(out, p, c)
    return out


def bb_flip(u: dict) -> dict:
    return {(q, p): c for (p, q), c in u.items()}


def bb_act(base, g: int, g2: int, u: dict) -> dict:
    return {(base.action[g][p], base.action[g2][q]): c for (p, q), c in u.items()}


def bb_to_a(A, u: dict) -> dict:
    """b (x) b' |-> r(b) s(b')."""
    out: dict = {}
    for (p, q), c in u.items():
        for k, v in A.mul(A.r({p: ONE}), A.s({q: ONE})).items():
            acc(out, k, c * v)
    return out


# integrals -------------------------------------------------------------------

def functional_defects(I: IntegralData):
    """Module-map properties of phi, psi, nu and the bimodule identities."""
    A, base = I.A, I.base
    G = base.group
    e = G.identity
    for i in range(A.dim):
        if A.grading[i] != (e, e):
            if I.phi[i] or I.psi[i]:
                return ("nonzero off degree (e, e)",) + _lab(I, i)
    for i in range(A.dim):
        for x in range(base.n):
            dx = base.delta(x)
            if I.phi_of(A.mul(A.r(dx), A.basis(i))) != base.mul(dx, I.phi[i]):
                return ("phi is not r-linear",) + _lab(I, i)
            if I.psi_of(A.mul(A.s(dx), A.basis(i))) != base.mul(dx, I.psi[i]):
                return ("psi is not s-linear",) + _lab(I, i)
            for y in range(base.n):
                rs = A.mul(A.r(dx), A.s(base.delta(y)))
                left, right = A.mul(rs, A.basis(i)), A.mul(A.basis(i), rs)
                if I.phi_of(left) != I.phi_of(right) or I.psi_of(left) != I.psi_of(right):
                    return ("bimodule symmetry",) + _lab(I, i)
    return None


def left_integral_defect(H: HopfData, phi: tuple):
    """sum s(phi(x2)) x1 a = r(phi(x)) a for all basis x, a."""
    A = H.algebra
    for i in range(A.dim):
        x = A.basis(i)
        lhs: dict = {}
        for k, l, c in H.terms(x):
            for key, v in A.mul(A.s(phi[l]), A.basis(k)).items():
                acc(lhs, key, c * v)
        rhs = A.r(_lin(phi, x))
        for j in range(A.dim):
            a = A.basis(j)
            if A.mul(lhs, a) != A.mul(rhs, a):
                return _lab_h(H, i, j)
    return None


def right_integral_defect(H: HopfData, psi: tuple):
    """sum a x2 r(psi(x1)) = a s(psi(x)) for all basis x, a."""
    A = H.algebra
    for i in range(A.dim):
        x = A.basis(i)
        lhs: dict = {}
        for k, l, c in H.terms(x):
            for key, v in A.mul(A.basis(l), A.r(psi[k])).items():
                acc(lhs, key, c * v)
        rhs = A.s(_lin(psi, x))
        for j in range(A.dim):
            a = A.basis(j)
            if A.mul(a, lhs) != A.mul(a, rhs):
                return _lab_h(H, i, j)
    return None


def _lab_h(H, *idx):
    return tuple(H.algebra.labels[i] for i in idx)


def measured_defect(I: IntegralData):
    """nu = mu o phi = mu o psi faithful and positive, phi(A) = B = psi(A)."""
    A, base = I.A, I.base
    for i in range(A.dim):
        if I.nu({i: ONE}) != I.nu_inv({i: ONE}):
            return ("mu o phi != mu o psi",) + _lab(I, i)
    g = I.nu_gram
    try:
        if not is_psd_hermitian(g):
            return "nu is not positive"
    except ValueError:
        return "nu is not hermitian"
    if rank(g) != A.dim:
        return "nu is not faithful"
    for name, tab in (("phi", I.phi), ("psi", I.psi)):
        m = [[tab[i].get(x, ZERO) for i in range(A.dim)] for x in range(base.n)]
        if rank(m) != base.n:
            return f"{name} is not surjective"
    return None


def star_linear_defect(I: IntegralData):
    A, base = I.A, I.base
    for i in range(A.dim):
        s = A.star(A.basis(i))
        if I.phi_of(s) != base.star(I.phi[i]):
            return ("phi",) + _lab(I, i)
        if I.psi_of(s) != base.star(I.psi[i]):
            return ("psi",) + _lab(I, i)
        if I.h is not None and I.h_of(s) != {k: c.conj() for k, c in I.h[i].items()}:
            return ("h",) + _lab(I, i)
    return None


def antipode_integral_defect(I: IntegralData):
    """phi o S = psi, nu o S = nu and phi o S is a right integral."""
    H, A = I.hopf, I.A
    phi_s = tuple(I.phi_of(H.antipode[i]) for i in range(A.dim))
    for i in range(A.dim):
        if phi_s[i] != I.psi[i]:
            return ("phi o S != psi",) + _lab(I, i)
        if I.nu(H.antipode[i]) != I.nu({i: ONE}):
            return ("nu o S != nu",) + _lab(I, i)
    w = right_integral_defect(H, phi_s)
    if w:
        return ("phi o S is not a right integral",) + w
    return None


def strong_invariance_terms(I: IntegralData, x: dict, z: dict):
    """Both sides of the two strong invariance identities."""
    H, A = I.hopf, I.A
    l1: dict = {}
    for k, l, c in H.terms(x):
        for key, v in A.mul(A.basis(k), A.s(I.phi_of(A.mul(z, A.basis(l))))).items():
            acc(l1, key, c * v)
    r1: dict = {}
    for k, l, c in H.terms(z):
        for key, v in A.mul(H.antipode[k], A.r(I.phi_of(A.mul(A.basis(l), x)))).items():
            acc(r1, key, c * v)
    l2: dict = {}
    for k, l, c in H.terms(x):
        for key, v in A.mul(A.r(I.psi_of(A.mul(A.basis(k), z))), A.basis(l)).items():
            acc(l2, key, c * v)
    r2: dict = {}
    for k, l, c in H.terms(z):
        for key, v in A.mul(A.s(I.psi_of(A.mul(x, A.basis(k)))), H.antipode[l]).items():
            acc(r2, key, c * v)
    return (l1, r1), (l2, r2)


def strong_invariance_defect(I: IntegralData):
    A = I.A
    for i, j in product(range(A.dim), repeat=2):
        for num, (lhs, rhs) in enumerate(strong_invariance_terms(I, A.basis(i), A.basis(j)), start=1):
            if lhs != rhs:
                return (f"part {num}",) + _lab(I, i, j)
    return None


# bi-integral ----------------------------------------------------------------------

def _kernel_parts(I: IntegralData) -> list:
    """Homogeneous basis of ker h."""
    A = I.A
    out = []
    for deg, idx in _by_degree(A).items():
        keys = sorted({k for i in idx for k in I.h[i]})
        if not keys:
            out.extend({i: ONE} for i in idx)
            continue
        m = [[I.h[i].get(k, ZERO) for i in idx] for k in keys]
        for vec in nullspace(m):
            out.append({idx[p]: c for p, c in enumerate(vec) if c})
    return out


def _by_degree(A) -> dict:
    out: dict = {}
    for i in range(A.dim):
        out.setdefault(A.grading[i], []).append(i)
    return out


def bi_integral_defect(I: IntegralData):
    """Kernel coideal inclusions, normalization, module symmetry, slice identities, h o S = flip o h."""
    if I.h is None:
        raise NotApplicable("no bi-integral")
    H, A, base = I.hopf, I.A, I.base
    e = base.group.identity
    for i in range(A.dim):
        if A.grading[i] != (e, e) and I.h[i]:
            return ("nonzero off degree (e, e)",) + _lab(I, i)
    for x, y in product(range(base.n), repeat=2):
        val = I.h_of(A.mul(A.r(base.delta(x)), A.s(base.delta(y))))
        if val != {(x, y): ONE}:
            return ("normalization", base.points[x], base.points[y])
    for i in range(A.dim):
        for x, y in product(range(base.n), repeat=2):
            rs = A.mul(A.r(base.delta(x)), A.s(base.delta(y)))
            want = {k: c for k, c in I.h[i].items() if k == (x, y)}
            if I.h_of(A.mul(rs, A.basis(i))) != want or I.h_of(A.mul(A.basis(i), rs)) != want:
                return ("not a bimodule map",) + _lab(I, i)
    kernel = _kernel_parts(I)
    F = H.fiber
    e_ee = [i for i in range(A.dim) if A.grading[i] == (e, e)]
    for side in ("left", "right"):
        gens = []
        for k in kernel:
            deg = A.grading[next(iter(k))]
            for j in range(A.dim):
                if side == "left" and deg[1] == A.d(j):
                    gens.append(tensor(k, A.basis(j)))
                if side == "right" and A.dbar(j) == deg[0]:
                    gens.append(tensor(A.basis(j), k))
        sub = TensorQuotient(F.keys, list(F._rels) + gens)
        for k in kernel:
            dk = H.Delta(k)
            for u in e_ee:
                one_u = tensor(A.unit, A.basis(u)) if side == "left" else tensor(A.basis(u), A.unit)
                prod_ = F.mul_raw(dk, one_u) if side == "left" else F.mul_raw(one_u, dk)
                if not sub.is_zero(prod_):
                    return (f"kernel inclusion ({side})", A.labels[next(iter(k))], A.labels[u])
    for i in range(A.dim):
        one: dict = {}
        two: dict = {}
        for k, l, c in H.terms(A.basis(i)):
            for key, v in A.mul(A.s(bb_mul(base, I.h[l])), A.basis(k)).items():
                acc(one, key, c * v)
            for key, v in A.mul(A.r(bb_mul(base, I.h[k])), A.basis(l)).items():
                acc(two, key, c * v)
        target = bb_to_a(A, I.h[i])
        if one != target:
            return ("(Id (x) m_B h) Delta != h",) + _lab(I, i)
        if two != target:
            return ("(m_B h (x) Id) Delta != h",) + _lab(I, i)
        if I.h_of(H.antipode[i]) != bb_flip(I.h[i]):
            return ("h o S != flip o h",) + _lab(I, i)
    return None


def bi_integral_uniqueness_defect(I: IntegralData):
    """The linear conditions on a normalized bi-integral h' have the single solution h."""
    if I.h is None:
        raise NotApplicable("no bi-integral")
    H, A, base = I.hopf, I.A, I.base
    n, m = A.dim, base.n
    e = base.group.identity
    pairs = [(p, q) for p in range(m) for q in range(m)]
    col = {(i, pq): c for c, (i, pq) in enumerate((i, pq) for i in range(n) for pq in pairs)}
    rows, rhs = [], []

    def row_of(entries):
        r = [ZERO] * len(col)
        for c, v in entries.items():
            r[c] = r[c] + v
        return r

    for i in range(n):
        if A.grading[i] != (e, e):
            for pq in pairs:
                rows.append(row_of({col[(i, pq)]: ONE}))
                rhs.append(ZERO)
    for x, y in product(range(m), repeat=2):
        rs = A.mul(A.r(base.delta(x)), A.s(base.delta(y)))
        for pq in pairs:
            rows.append(row_of({col[(k, pq)]: c for k, c in rs.items()}))
            rhs.append(ONE if pq == (x, y) else ZERO)
    # (Id (x) m_B h') Delta = r (x) s o h' and its mirror, coefficientwise in A
    for i in range(n):
        one: dict = {}
        two: dict = {}
        for k, l, c in H.terms(A.basis(i)):
            for p in range(m):
                for key, v in A.mul(A.s(base.delta(p)), A.basis(k)).items():
                    acc(one, (key, col[(l, (p, p))]), c * v)
                for key, v in A.mul(A.r(base.delta(p)), A.basis(l)).items():
                    acc(two, (key, col[(k, (p, p))]), c * v)
        for eq in (one, two):
            target: dict = {}
            for pq in pairs:
                for key, v in bb_to_a(A, {pq: ONE}).items():
                    acc(target, (key, col[(i, pq)]), v)
            for out in range(n):
                entries: dict = {}
                for (key, u), v in eq.items():
                    if key == out:
                        acc(entries, u, v)
                for (key, u), v in target.items():
                    if key == out:
                        acc(entries, u, -v)
                rows.append(row_of(entries))
                rhs.append(ZERO)
    sol = solve(rows, rhs)
    if sol is None:
        return "no normalized bi-integral solves the linear conditions"
    if nullspace(rows):
        return "normalized bi-integral not unique"
    for (i, pq), c in col.items():
        if I.h[i].get(pq, ZERO) != sol[c]:
            return ("solution differs",) + _lab(I, i)
    return None


def derive_integrals_from_h(I: IntegralData) -> tuple:
    """phi = (Id (x) mu) h and psi = (mu (x) Id) h."""
    if I.h is None:
        raise NotApplicable("no bi-integral")
    base = I.base
    if all(w == 0 for w in base.weight):
        raise ValueError("mu vanishes identically")
    phi, psi = [], []
    for i in range(I.A.dim):
        f: dict = {}
        g: dict = {}
        for (p, q), c in I.h[i].items():
            acc(f, p, c * gq(base.weight[q]))
            acc(g, q, c * gq(base.weight[p]))
        phi.append(f)
        psi.append(g)
    return tuple(phi), tuple(psi)


def derived_integrals_defect(I: IntegralData):
    if I.h is None:
        raise NotApplicable("no bi-integral")
    H = I.hopf
    phi, psi = derive_integrals_from_h(I)
    w = left_integral_defect(H, phi)
    if w:
        return ("derived phi is not a left integral",) + w
    w = right_integral_defect(H, psi)
    if w:
        return ("derived psi is not a right integral",) + w
    derived = I.with_tables(phi=phi, psi=psi)
    for i in range(I.A.dim):
        if derived.phi_of(H.antipode[i]) != psi[i]:
            return ("derived phi o S != derived psi",) + _lab(I, i)
        if derived.nu(H.antipode[i]) != derived.nu({i: ONE}):
            return ("derived nu o S != nu",) + _lab(I, i)
    return None


def bi_measured(I: IntegralData) -> bool:
    """True when the stored integrals are the ones induced by h."""
    if I.h is None:
        return False
    phi, psi = derive_integrals_from_h(I)
    return phi == I.phi and psi == I.psi


# modular automorphism ---------------------------------------------------------------

def theta_defect(I: IntegralData):
    """Defining relation, automorphism, module map, grading, invariance, involution law, S-relation."""
    H, A, base = I.hopf, I.A, I.base
    n = A.dim
    th = [I.theta({i: ONE}) for i in range(n)]
    for i, j in product(range(n), repeat=2):
        if I.nu_fast(A.mul(A.basis(i), A.basis(j))) != I.nu_fast(A.mul(A.basis(j), th[i])):
            return ("nu(xy) != nu(y theta(x))",) + _lab(I, i, j)
    for i, j in product(range(n), repeat=2):
        if I.theta(A.mul(A.basis(i), A.basis(j))) != A.mul(th[i], th[j]):
            return ("not multiplicative",) + _lab(I, i, j)
    for i in range(n):
        if any(A.grading[k] != A.grading[i] for k in th[i]):
            return ("grading",) + _lab(I, i)
        if I.nu_fast(th[i]) != I.nu_basis[i]:
            return ("nu o theta != nu",) + _lab(I, i)
        if I.theta(A.star(I.theta(A.star(A.basis(i))))) != A.basis(i):
            return ("theta * theta * != Id",) + _lab(I, i)
        for x, y in product(range(base.n), repeat=2):
            rs = A.mul(A.r(base.delta(x)), A.s(base.delta(y)))
            if I.theta(A.mul(rs, A.basis(i))) != A.mul(rs, th[i]):
                return ("not a left module map",) + _lab(I, i)
            if I.theta(A.mul(A.basis(i), rs)) != A.mul(th[i], rs):
                return ("not a right module map",) + _lab(I, i)
    if all(I.nu(H.antipode[i]) == I.nu_basis[i] for i in range(n)):
        for i in range(n):
            if I.theta(H.antipode[i]) != H.S(I.theta_inv(A.basis(i))):
                return ("theta S != S theta^-1",) + _lab(I, i)
    return None


def theta_closed_form_crossed(I: IntegralData) -> tuple:
    """theta(delta_x g) = w(x) / w(g^-1 x) delta_x g for the crossed product basis."""
    base = I.base
    G = base.group
    n = base.n
    out = []
    for g in range(len(G)):
        for x in range(n):
            out.append({g * n + x: gq(base.weight[x] / base.weight[base.action[G.inv(g)][x]])})
    return tuple(out)


def d_twist_defect(I: IntegralData):
    """Compatibility of D and Dbar with Delta, each other, S, * and the functionals."""
    H, A = I.hopf, I.A
    F = H.fiber
    n = A.dim
    e = [A.basis(i) for i in range(n)]

    def legs(f, g, v):
        out: dict = {}
        for (k, l), c in v.items():
            left = f({k: ONE}) if f else {k: ONE}
            right = g({l: ONE}) if g else {l: ONE}
            for key, x in tensor(left, right).items():
                acc(out, key, c * x)
        return out

    D, Db = (lambda a: I.D(a)), (lambda a: I.Dbar(a))
    for i in range(n):
        d = H.delta[i]
        if not F.equal(legs(D, None, d), H.Delta(D(e[i]))):
            return ("(D (x) Id) Delta != Delta D",) + _lab(I, i)
        if not F.equal(legs(None, Db, d), H.Delta(Db(e[i]))):
            return ("(Id (x) Dbar) Delta != Delta Dbar",) + _lab(I, i)
        if not F.equal(legs(Db, None, d), legs(None, D, d)):
            return ("(Dbar (x) Id) Delta != (Id (x) D) Delta",) + _lab(I, i)
        if D(Db(e[i])) != Db(D(e[i])):
            return ("D Dbar != Dbar D",) + _lab(I, i)
        if H.S(D(e[i])) != I.Dbar(H.antipode[i], -1):
            return ("S D != Dbar^-1 S",) + _lab(I, i)
        if H.S(Db(e[i])) != I.D(H.antipode[i], -1):
            return ("S Dbar != D^-1 S",) + _lab(I, i)
        if A.star(D(e[i])) != I.D(A.star(e[i]), -1):
            return ("* D != D^-1 *",) + _lab(I, i)
        if A.star(Db(e[i])) != I.Dbar(A.star(e[i]), -1):
            return ("* Dbar != Dbar^-1 *",) + _lab(I, i)
        if I.D(D(e[i]), -1) != e[i] or I.D(I.D(e[i], 0.5), 0.5) != D(e[i]):
            return ("D powers",) + _lab(I, i)
    for i, j in product(range(n), repeat=2):
        if D(A.mul(e[i], e[j])) != A.mul(D(e[i]), D(e[j])):
            return ("D not multiplicative",) + _lab(I, i, j)
        if Db(A.mul(e[i], e[j])) != A.mul(Db(e[i]), Db(e[j])):
            return ("Dbar not multiplicative",) + _lab(I, i, j)
        for name, f in (("phi", I.phi_of), ("psi", I.psi_of)):
            if f(A.mul(D(e[i]), e[j])) != f(A.mul(e[i], I.D(e[j], -1))):
                return (f"{name}(D(a) a') != {name}(a D^-1(a'))",) + _lab(I, i, j)
            if f(A.mul(Db(e[i]), e[j])) != f(A.mul(e[i], I.Dbar(e[j], -1))):
                return (f"{name}(Dbar(a) a') != {name}(a Dbar^-1(a'))",) + _lab(I, i, j)
    for i in range(n):
        if I.theta(e[i]) != D(I.theta_D(e[i])) or I.theta(e[i]) != I.theta_D(D(e[i])):
            return ("theta != theta_D D",) + _lab(I, i)
    return None


def modular_integrals_defect(I: IntegralData):
    A, base = I.A, I.base
    n = A.dim
    e = [A.basis(i) for i in range(n)]
    for i in range(n):
        if I.phi_of(I.theta(e[i])) != I.phi[i]:
            return ("phi o theta != phi",) + _lab(I, i)
        if I.psi_of(I.theta(e[i])) != I.psi[i]:
            return ("psi o theta != psi",) + _lab(I, i)
        if I.h is not None and I.h_of(I.theta(e[i])) != I.h[i]:
            return ("h o theta != h",) + _lab(I, i)
    for i, j in product(range(n), repeat=2):
        xy = A.mul(e[i], e[j])
        rhs = base.act(A.d(i), I.phi_of(A.mul(e[j], I.theta_D(e[i]))))
        if I.phi_of(xy) != rhs:
            return ("phi(xy) != d_x(phi(y theta_D(x)))",) + _lab(I, i, j)
        rhs = base.act(A.dbar(i), I.psi_of(A.mul(e[j], I.theta_Dbar(e[i]))))
        if I.psi_of(xy) != rhs:
            return ("psi(xy) != dbar_x(psi(y theta_Dbar(x)))",) + _lab(I, i, j)
        if I.h is not None:
            rhs = bb_act(base, A.d(i), A.dbar(i), I.h_of(A.mul(e[j], I.theta_DDbar(e[i]))))
            if I.h_of(xy) != rhs:
                return ("h(xy) != (d_x (x) dbar_x)(h(y theta_DD(x)))",) + _lab(I, i, j)
    return None


def modular_delta_defect(I: IntegralData, antipode_square=None):
    """Delta theta_D = (S^2 (x)~ theta_D) Delta, compared in the fiber product."""
    H, A = I.hopf, I.A
    F = H.fiber
    sq = antipode_square or (lambda a: H.S(H.S(a)))
    for i in range(A.dim):
        lhs = H.Delta(I.theta_D(A.basis(i)))
        rhs: dict = {}
        for k, l, c in H.terms(A.basis(i)):
            for key, v in tensor(sq({k: ONE}), I.theta_D({l: ONE})).items():
                acc(rhs, key, c * v)
        if not F.equal(lhs, rhs):
            return _lab(I, i)
    return None


def constructive_elements(I: IntegralData, c: dict, d: dict) -> tuple:
    """The pair (a, a') built from c, d by convolving with psi and phi."""
    H, A = I.hopf, I.A
    a: dict = {}
    for k, l, x in H.terms(c):
        inner = A.mul(A.s(I.psi_of(A.mul(d, H.antipode[l]))), A.basis(k))
        for key, v in I.Dbar(inner).items():
            acc(a, key, x * v)
    a2: dict = {}
    dc = I.Dbar(c)
    for k, l, x in H.terms(d):
        b = I.phi_of(A.mul(I.D(H.antipode[k]), dc))
        for key, v in A.mul(A.basis(l), A.r(b)).items():
            acc(a2, key, x * v)
    return a, a2


def random_element(A, rng: random.Random, lo: int = -3, hi: int = 3) -> dict:
    out = {}
    for i in range(A.dim):
        re = rng.randint(lo, hi)
        im = rng.randint(lo, hi) if rng.random() < 0.3 else 0
        if re or im:
            out[i] = gq(re, im)
    return out


def constructive_defect(I: IntegralData, samples: int = 20, seed: int = 0):
    """nu(z a) = nu(a' z) for all basis z, and a = theta(a'), on random (c, d)."""
    A = I.A
    rng = random.Random(seed)
    for t in range(samples):
        c, d = random_element(A, rng), random_element(A, rng)
        a, a2 = constructive_elements(I, c, d)
        for j in range(A.dim):
            z = A.basis(j)
            if I.nu_fast(A.mul(z, a)) != I.nu_fast(A.mul(a2, z)):
                return ("sample", t, A.labels[j])
        if I.theta(a2) != a:
            return ("theta(a') != a", t)
    return None


def theta_matches(I: IntegralData, table: tuple):
    for i in range(I.A.dim):
        if I.theta({i: ONE}) != table[i]:
            return _lab(I, i)
    return None
