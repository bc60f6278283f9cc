"""GNS spaces K and H, the four base representations on H and the bounded-vector calculus."""

from __future__ import annotations

from functools import cached_property

from dqg.base import KSpace
from dqg.exactlin import ONE, GramMap, GramSpace, acc, span_equal, rank

REPS = ("alpha", "beta", "alpha_hat", "beta_hat")

# which Lambda-family realizes the bounded-vector operator R^rep
R_FAMILY = {"alpha": "phi_dag", "beta": "psi_dag", "alpha_hat": "psi", "beta_hat": "phi"}


class Gns:
    """Exact GNS data of an instance.

    H has ambient basis Lambda_nu(e_i) with Gram nu(e_i* e_j); K has basis
    Lambda_mu(delta_x) with the diagonal weight Gram.  Operators are GramMaps.
    """

    def __init__(self, inst):
        self.inst = inst
        self.I = inst.integrals
        self.A = inst.algebra
        self.base = inst.base
        self.Kdata = KSpace(self.base)
        self.K = self.Kdata.space
        self.H = GramSpace(self.I.nu_gram, labels=list(self.A.labels), name="H")

    # operators on H ----------------------------------------------------
    def lmul(self, a: dict, name: str = "") -> GramMap:
        A = self.A
        return GramMap(self.H, self.H, [A.mul(a, A.basis(j)) for j in range(A.dim)], name)

    def rmul(self, a: dict, name: str = "") -> GramMap:
        A = self.A
        return GramMap(self.H, self.H, [A.mul(A.basis(j), a) for j in range(A.dim)], name)

    def pi_nu(self, a: dict) -> GramMap:
        return self.lmul(a, "pi_nu")

    def rep(self, which: str, b: dict) -> GramMap:
        A = self.A
        if which == "alpha":
            return self.lmul(A.r(b), "alpha")
        if which == "beta":
            return self.lmul(A.s(b), "beta")
        if which == "alpha_hat":
            return self.rmul(A.s(b), "alpha_hat")
        if which == "beta_hat":
            return self.rmul(A.r(b), "beta_hat")
        raise KeyError(which)

    def rep_vec(self, which: str, b: dict, v: dict) -> dict:
        """rep(b) applied to an ambient vector of H."""
        A = self.A
        if which == "alpha":
            return A.mul(A.r(b), v)
        if which == "beta":
            return A.mul(A.s(b), v)
        if which == "alpha_hat":
            return A.mul(v, A.s(b))
        if which == "beta_hat":
            return A.mul(v, A.r(b))
        raise KeyError(which)

    # Lambda-family: operators K -> H -------------------------------------
    def lam(self, family: str, x: dict) -> GramMap:
        A, n = self.A, self.base.n
        cols = []
        for z in range(n):
            dz = self.base.delta(z)
            if family == "phi":
                cols.append(A.mul(x, A.r(dz)))
            elif family == "psi":
                cols.append(A.mul(x, A.s(dz)))
            elif family == "phi_dag":
                cols.append(A.mul(A.r(dz), x))
            elif family == "psi_dag":
                cols.append(A.mul(A.s(dz), x))
            else:
                raise KeyError(family)
        return GramMap(self.K, self.H, cols, f"Lambda_{family}")

    def bounded_R(self, which: str, v: dict) -> GramMap:
        """R^{rep} of the vector v: Lambda_mu(b) |-> rep(b) v."""
        cols = [self.rep_vec(which, self.base.delta(z), v) for z in range(self.base.n)]
        return GramMap(self.K, self.H, cols, f"R^{which}")

    # B-valued inner products ----------------------------------------------
    @cached_property
    def _inner_tables(self) -> dict:
        A, I = self.A, self.I
        d = A.dim
        stars = [A.star(A.basis(i)) for i in range(d)]
        th = [I.theta(s) for s in stars]
        out = {}
        for which in REPS:
            rows = []
            for i in range(d):
                row = []
                for j in range(d):
                    if which == "alpha":
                        row.append(I.phi_of(A.mul(A.basis(j), th[i])))
                    elif which == "beta":
                        row.append(I.psi_of(A.mul(A.basis(j), th[i])))
                    elif which == "alpha_hat":
                        row.append(I.psi_of(A.mul(stars[i], A.basis(j))))
                    else:
                        row.append(I.phi_of(A.mul(stars[i], A.basis(j))))
                rows.append(row)
            out[which] = rows
        return out

    def binner(self, which: str, u: dict, v: dict) -> dict:
        """<u|v>_{rep, mu~} as an element of B, antilinear in u."""
        table = self._inner_tables[which]
        out: dict = {}
        for i, cu in u.items():
            cc = cu.conj()
            row = table[i]
            for j, cv in v.items():
                for z, x in row[j].items():
                    acc(out, z, cc * cv * x)
        return out

    def binner_via_R(self, which: str, u: dict, v: dict):
        op = self.bounded_R(which, u).adjoint().compose(self.bounded_R(which, v))
        return self.Kdata.to_b(op)

    def lambda_mu(self, b: dict) -> dict:
        return dict(b)

    def U(self, g: int) -> GramMap:
        return self.Kdata.u(g)


# checks ----------------------------------------------------------------------

def _basis(A):
    return [A.basis(i) for i in range(A.dim)]


def grams_defect(inst):
    """Both Gram matrices are PSD and nonsingular; exact and floating verdicts agree."""
    from dqg.exactlin import float_psd_oracle, is_psd_hermitian

    g = inst.gns
    for space in (g.K, g.H):
        if space.quotient_dim != space.dim_ambient:
            return (space.name, "degenerate", space.quotient_dim)
        if is_psd_hermitian(space.gram) != float_psd_oracle(space.gram):
            return (space.name, "exact and floating positivity disagree")
    return None


def pi_nu_defect(inst):
    """pi_nu is a *-representation by left multiplication."""
    g, A = inst.gns, inst.algebra
    for i, x in enumerate(_basis(A)):
        p = g.pi_nu(x)
        if not p.adjoint().equals(g.pi_nu(A.star(x))):
            return ("adjoint", A.labels[i])
        for j, y in enumerate(_basis(A)):
            if not p.compose(g.pi_nu(y)).equals(g.pi_nu(A.mul(x, y))):
                return ("product", A.labels[i], A.labels[j])
    return None


def k_space_defect(inst):
    from dqg.base import k_space_defects

    for key, w in k_space_defects(inst.base).items():
        if w is not None:
            return (key, w)
    return None


def lambda_identities_defect(inst):
    """The twelve identities of the Lambda-family on basis elements."""
    g, A, I, base = inst.gns, inst.algebra, inst.integrals, inst.base
    H, K = g.H, g.K
    basis = _basis(A)
    for i, x in enumerate(basis):
        xs = A.star(x)
        th = I.theta(xs)
        ops = {f: g.lam(f, x) for f in ("phi", "psi", "phi_dag", "psi_dag")}
        adj = {f: op.adjoint() for f, op in ops.items()}
        for z in range(base.n):
            dz = base.delta(z)
            want = {
                "phi": A.mul(x, A.r(dz)),
                "psi": A.mul(x, A.s(dz)),
                "phi_dag": A.mul(A.r(dz), x),
                "psi_dag": A.mul(A.s(dz), x),
            }
            for f, op in ops.items():
                if not H.equal(op.apply({z: ONE}), want[f]):
                    return ("action", f, A.labels[i], base.points[z])
        for j, y in enumerate(basis):
            vals = {
                "phi": I.phi_of(A.mul(xs, y)),
                "psi": I.psi_of(A.mul(xs, y)),
                "phi_dag": I.phi_of(A.mul(y, th)),
                "psi_dag": I.psi_of(A.mul(y, th)),
            }
            for f in ops:
                if not K.equal(adj[f].apply(y), vals[f]):
                    return ("adjoint on H", f, A.labels[i], A.labels[j])
                prod = adj[f].compose(g.lam(f, y))
                if not prod.equals(g.Kdata.pi(vals[f])):
                    return ("inner product", f, A.labels[i], A.labels[j])
    return None


def representations_defect(inst):
    """Formulas, *-property, multiplicativity, unit and mutual commutation of alpha, beta, alpha^, beta^."""
    g, base = inst.gns, inst.base
    n = base.n
    ident = GramMap.identity(g.H)
    for which in REPS:
        if not g.rep(which, base.one()).equals(ident):
            return ("unit", which)
        for x in range(n):
            op = g.rep(which, base.delta(x))
            if not op.adjoint().equals(g.rep(which, base.star(base.delta(x)))):
                return ("adjoint", which, base.points[x])
            for y in range(n):
                if not op.compose(g.rep(which, base.delta(y))).equals(g.rep(which, base.mul(base.delta(x), base.delta(y)))):
                    return ("product", which, base.points[x], base.points[y])
    for a_i, a in enumerate(REPS):
        for b in REPS[a_i + 1:]:
            for x in range(n):
                for y in range(n):
                    p = g.rep(a, base.delta(x))
                    q = g.rep(b, base.delta(y))
                    if not p.compose(q).equals(q.compose(p)):
                        return ("commutator", a, b, base.points[x], base.points[y])
    return None


def module_action_defect(inst):
    """rho_E(pi_mu(b)) xi = xi pi_mu(b) for xi in the Lambda-family attached to each representation."""
    g, A, base = inst.gns, inst.algebra, inst.base
    for which, family in R_FAMILY.items():
        for i, x in enumerate(_basis(A)):
            xi = g.lam(family, x)
            for z in range(base.n):
                dz = base.delta(z)
                if not g.rep(which, dz).compose(xi).equals(xi.compose(g.Kdata.pi(dz))):
                    return (which, family, A.labels[i], base.points[z])
    return None


def _family_mats(g, family):
    return [g.lam(family, x).quotient_matrix() for x in _basis(g.A)]


def c_star_module_defect(inst):
    """[E K] = H, [E pi_mu(B)] = E, [E*E] = [pi_mu(B)] for each E, and the pairwise compatibility."""
    g, base = inst.gns, inst.base
    n = base.n
    pis = [g.Kdata.pi(base.delta(z)) for z in range(n)]
    pi_mats = [p.quotient_matrix() for p in pis]
    fams = {f: [g.lam(f, x) for x in _basis(g.A)] for f in R_FAMILY.values()}
    for f, ops in fams.items():
        mats = [op.quotient_matrix() for op in ops]
        cols = [[row[k] for row in m] for m in mats for k in range(n)]
        if rank(cols) != g.H.quotient_dim:
            return ("[EK] != H", f)
        ep = [op.compose(p).quotient_matrix() for op in ops for p in pis]
        if not span_equal(ep, mats):
            return ("[E pi(B)] != E", f)
        ee = [op.adjoint().compose(op2).quotient_matrix() for op in ops for op2 in ops]
        if not span_equal(ee, pi_mats):
            return ("[E*E] != [pi(B)]", f)
    rep_of = {f: w for w, f in R_FAMILY.items()}
    for e in fams:
        for f, ops in fams.items():
            if e == f:
                continue
            moved = [g.rep(rep_of[e], base.delta(z)).compose(op).quotient_matrix() for op in ops for z in range(n)]
            if not span_equal(moved, [op.quotient_matrix() for op in ops]):
                return ("[rho_E(pi(B)) F] != F", e, f)
    return None


def bounded_vectors_defect(inst):
    """R-operators of Lambda_nu(x) per representation and the B-valued inner products both ways."""
    g, A, base = inst.gns, inst.algebra, inst.base
    basis = _basis(A)
    for which, family in R_FAMILY.items():
        for i, x in enumerate(basis):
            R = g.bounded_R(which, x)
            if not R.equals(g.lam(family, x)):
                return ("R != Lambda", which, A.labels[i])
            for j, y in enumerate(basis):
                via_r = g.binner_via_R(which, x, y)
                formula = g.binner(which, x, y)
                if via_r is None or not g.K.equal(via_r, formula):
                    return ("inner product", which, A.labels[i], A.labels[j])
                if not g.K.equal(R.adjoint().apply(y), formula):
                    return ("Lambda_mu(<x|y>) != R* y", which, A.labels[i], A.labels[j])
    # R_{T zeta} = T R_zeta for T in the commutant of the representation
    commuting = {
        "alpha_hat": lambda a: g.pi_nu(a),
        "beta_hat": lambda a: g.pi_nu(a),
        "alpha": lambda a: g.rmul(a),
        "beta": lambda a: g.rmul(a),
    }
    for which, T_of in commuting.items():
        for k, a in enumerate(basis):
            T = T_of(a)
            for i, x in enumerate(basis):
                lhs = g.bounded_R(which, T.apply(x))
                if not lhs.equals(T.compose(g.bounded_R(which, x))):
                    return ("R_{T zeta} != T R_zeta", which, A.labels[k], A.labels[i])
    return None


def half_twist_inner_defect(inst):
    """Lambda_phi(x) U_{d_x^-1} = Lambda^dag_phi(D^1/2 x), the psi analogue, and the twisted inner products."""
    g, A, I, base = inst.gns, inst.algebra, inst.integrals, inst.base
    G = base.group
    basis = _basis(A)
    for i, x in enumerate(basis):
        dx, dbx = A.d(i), A.dbar(i)
        lhs = g.lam("phi", x).compose(g.U(G.inv(dx)))
        if not lhs.equals(g.lam("phi_dag", I.D(x, 0.5))):
            return ("phi", A.labels[i])
        lhs = g.lam("psi", x).compose(g.U(G.inv(dbx)))
        if not lhs.equals(g.lam("psi_dag", I.Dbar(x, 0.5))):
            return ("psi", A.labels[i])
        for j, y in enumerate(basis):
            xy = A.mul(A.star(x), y)
            got = g.binner("alpha", I.D(x, 0.5), I.D(y, 0.5))
            if not g.K.equal(got, base.act(dx, I.phi_of(xy))):
                return ("alpha inner", A.labels[i], A.labels[j])
            got = g.binner("beta", I.Dbar(x, 0.5), I.Dbar(y, 0.5))
            if not g.K.equal(got, base.act(dbx, I.psi_of(xy))):
                return ("beta inner", A.labels[i], A.labels[j])
    return None


def rtp_identify_defect(inst):
    """xi (x) R^alpha_eta zeta and R^beta_xi zeta (x) eta carry the same three-slot form."""
    g, A, base = inst.gns, inst.algebra, inst.base
    basis = _basis(A)
    n = base.n
    Ra = [[g.rep_vec("alpha", base.delta(z), e) for z in range(n)] for e in basis]
    Rb = [[g.rep_vec("beta", base.delta(z), e) for z in range(n)] for e in basis]
    for i, xi in enumerate(basis):
        for j, xi2 in enumerate(basis):
            bxi = g.binner("beta", xi, xi2)
            for k, eta in enumerate(basis):
                for l, eta2 in enumerate(basis):
                    b_eta = g.binner("alpha", eta, eta2)
                    for z in range(n):
                        for z2 in range(n):
                            three = g.K.inner({z: ONE}, base.mul(base.mul(bxi, b_eta), {z2: ONE}))
                            left = g.H.inner(Ra[k][z], g.rep_vec("alpha", bxi, Ra[l][z2]))
                            right = g.H.inner(Rb[i][z], g.rep_vec("beta", b_eta, Rb[j][z2]))
                            if not (three == left == right):
                                return (A.labels[i], A.labels[j], A.labels[k], A.labels[l], base.points[z], base.points[z2])
    return None
