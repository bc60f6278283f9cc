"""Tomita data of the Hilbert algebra Lambda_nu(A), invariance of the extended integrals,
the measured-quantum-groupoid unitaries and the operator antipode."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from dqg.base import NotApplicable
from dqg.exactlin import ONE, ZERO, GramMap, GramSpace, inverse, matmul, nullspace, to_numpy
from dqg.fundamental import Fundamental, delta_op, slice_v_left_element


class NotMeasured(NotApplicable):
    """Raised when the Tomita data needs a modular automorphism the instance does not have."""


@dataclass
class TomitaData:
    """Exact Delta_nu on ambient coordinates of H, and a numeric J_nu in orthonormal coordinates.

    J_nu acts as u -> K conj(u) on coordinates with respect to an orthonormal basis
    obtained from the Cholesky factor L of the Gram matrix (G = L^H L).
    """

    inst: object
    delta_nu: GramMap
    delta_matrix: list
    star_matrix: np.ndarray
    chol: np.ndarray
    J_matrix: np.ndarray
    residual: float

    def to_ortho(self, op: GramMap) -> np.ndarray:
        """Matrix of a linear operator on H in the orthonormal coordinates."""
        L = self.chol
        M = to_numpy([[op.columns[j].get(i, ZERO) for j in range(len(op.columns))] for i in range(L.shape[0])])
        return L @ M @ np.linalg.inv(L)

    def conjugate_by_J(self, T: np.ndarray) -> np.ndarray:
        """J T J as a linear operator, for T linear."""
        K = self.J_matrix
        return K @ np.conj(T) @ np.conj(K)


def _sharp_matrix(A) -> list:
    """Ambient matrix of the antilinear map Lambda(a) -> Lambda(a*) (applied to conjugated coordinates)."""
    d = A.dim
    M = [[ZERO] * d for _ in range(d)]
    for j in range(d):
        for i, c in A.star(A.basis(j)).items():
            M[i][j] = c
    return M


def build_tomita(inst) -> TomitaData:
    """Delta_nu from <Lambda(x)|Delta Lambda(y)> = <S Lambda(y)|S Lambda(x)> = nu(y x*), and J_nu = S Delta^-1/2."""
    I, A = inst.integrals, inst.algebra
    d = A.dim
    G = I.nu_gram
    P = [[I.nu_fast(A.mul(A.basis(j), A.star(A.basis(i)))) for j in range(d)] for i in range(d)]
    D = matmul(inverse(G), P)
    H = inst.gns.H
    delta = GramMap(H, H, [{i: D[i][j] for i in range(d) if D[i][j]} for j in range(d)], "Delta_nu")

    Gn = to_numpy(G)
    # G = L^H L
    C = np.linalg.cholesky(Gn)  # G = C C^H
    L = C.conj().T
    Li = np.linalg.inv(L)
    Do = L @ to_numpy(D) @ Li
    Do = (Do + Do.conj().T) / 2
    evals, evecs = np.linalg.eigh(Do)
    if evals.min() <= 0:
        raise NotMeasured("Delta_nu is not positive definite")
    d_inv_half = evecs @ np.diag(evals ** -0.5) @ evecs.conj().T
    M = to_numpy(_sharp_matrix(A))
    # S(u) = L M conj(L^-1 u) = (L M conj(L^-1)) conj(u)
    S_o = L @ M @ np.conj(Li)
    K = S_o @ np.conj(d_inv_half)
    residual = float(np.abs(K @ np.conj(K) - np.eye(d)).max())
    return TomitaData(inst, delta, D, M, L, K, residual)


# checks ----------------------------------------------------------------------

def _theta_matrix(inst) -> list:
    I, A = inst.integrals, inst.algebra
    d = A.dim
    cols = [I.theta(A.basis(j)) for j in range(d)]
    return [[cols[j].get(i, ZERO) for j in range(d)] for i in range(d)]


def delta_theta_defect(inst):
    """Delta_nu Lambda(a) = Lambda(theta(a)) on the basis."""
    T = inst.tomita
    th = _theta_matrix(inst)
    for j in range(inst.algebra.dim):
        for i in range(inst.algebra.dim):
            if T.delta_matrix[i][j] != th[i][j]:
                return (inst.algebra.labels[j],)
    return None


def modular_group_defect(inst, powers=(1, 2)):
    """Delta^-n pi(a) Delta^n = pi(theta^-n(a)) for the given n.

    Returns None, or (sign, ...) when only the opposite sign convention holds.
    """
    T = inst.tomita
    I, A, g = inst.integrals, inst.algebra, inst.gns
    d = A.dim
    D = T.delta_nu
    Dinv = GramMap(g.H, g.H, [I.theta_inv(A.basis(j)) for j in range(d)])

    def power(f, n):
        out = GramMap.identity(g.H)
        for _ in range(n):
            out = out.compose(f)
        return out

    def iterate(fn, a, n):
        for _ in range(n):
            a = fn(a)
        return a

    for n in powers:
        Dn, Dmn = power(D, n), power(Dinv, n)
        for i in range(d):
            a = A.basis(i)
            lhs = Dmn.compose(g.lmul(a)).compose(Dn)
            if not lhs.equals(g.lmul(iterate(I.theta_inv, a, n))):
                if lhs.equals(g.lmul(iterate(I.theta, a, n))):
                    return ("opposite sign", n, A.labels[i])
                return (n, A.labels[i])
    return None


def j_defect(inst, tol: float = 1e-9):
    """J^2 = 1, J alpha(b)* J = beta^(b) and J beta(b)* J = alpha^(b), numerically within tol."""
    T = inst.tomita
    g = inst.gns
    if T.residual > tol:
        return ("J^2 != 1", T.residual)
    for z in range(inst.base.n):
        b = inst.base.delta(z)
        for src, dst in (("alpha", "beta_hat"), ("beta", "alpha_hat")):
            X = T.to_ortho(g.rep(src, b))
            lhs = T.conjugate_by_J(X.conj().T)
            rhs = T.to_ortho(g.rep(dst, b))
            err = float(np.abs(lhs - rhs).max())
            if err > tol:
                return (f"J {src}* J != {dst}", inst.base.points[z], err)
    return None


def j_residuals(inst) -> dict:
    T = inst.tomita
    return {"J^2 - 1": T.residual}


def fixed_algebra(inst) -> list:
    """Basis of A^theta = ker(theta - Id)."""
    A = inst.algebra
    th = _theta_matrix(inst)
    d = A.dim
    m = [[th[i][j] - (ONE if i == j else ZERO) for j in range(d)] for i in range(d)]
    return [{i: c for i, c in enumerate(v) if c} for v in nullspace(m)]


def fixed_algebra_defect(inst):
    """Delta_nu commutes with pi(x) for x in A^theta; elements r(b)s(b') of A^theta satisfy pi(a) Lambda_phi(x) = R_x Lambda_phi(a)."""
    T = inst.tomita
    I, A, g, base = inst.integrals, inst.algebra, inst.gns, inst.base
    D = T.delta_nu
    for v in fixed_algebra(inst):
        P = g.lmul(v)
        if not P.compose(D).equals(D.compose(P)):
            return ("Delta does not commute", v)
    for z in range(base.n):
        for z2 in range(base.n):
            x = A.mul(A.r(base.delta(z)), A.s(base.delta(z2)))
            if not x or I.theta(x) != x:
                continue
            Rx = g.rmul(x)
            for i in range(A.dim):
                a = A.basis(i)
                if not g.lmul(a).compose(g.lam("phi", x)).equals(Rx.compose(g.lam("phi", a))):
                    return ("right-bounded", base.points[z], base.points[z2], A.labels[i])
    return None


def _in_pi(F: Fundamental, X: GramMap):
    """The element a with X = pi(a), or None when X is not left multiplication."""
    a = X.apply(F.A.unit)
    return a if X.equals(F.pi(a)) else None


def _pi_mu(inst, b: dict) -> GramMap:
    K = inst.gns.K
    return GramMap(K, K, [{z: b[z]} if b.get(z) else {} for z in range(inst.base.n)])


def weight_invariance_defect(inst):
    """phi~((lambda_xi)# Delta(x*x) lambda_xi) = (R^beta_xi)# alpha(phi(x*x)) R^beta_xi, and the right version with psi."""
    F = inst.fundamental
    A, I, g = F.A, F.I, F.gns
    for i in range(F.d):
        x = F.e(i)
        xx = A.mul(A.star(x), x)
        Dxx = delta_op(F, F.pi(xx))
        T_L = g.rep("alpha", I.phi_of(xx))
        T_R = g.rep("beta", I.psi_of(xx))
        for k in range(F.d):
            xi = F.e(k)
            lam = F.P_ba.lam(xi)
            X = lam.adjoint().compose(Dxx).compose(lam)
            a = _in_pi(F, X)
            if a is None:
                return ("left slice not in pi(A)",) + (A.labels[i], A.labels[k])
            R = g.bounded_R("beta", xi)
            if not _pi_mu(inst, I.phi_of(a)).equals(R.adjoint().compose(T_L).compose(R)):
                return ("left",) + (A.labels[i], A.labels[k])
            rho = F.P_ba.rho_op(xi)
            Y = rho.adjoint().compose(Dxx).compose(rho)
            c = _in_pi(F, Y)
            if c is None:
                return ("right slice not in pi(A)",) + (A.labels[i], A.labels[k])
            R = g.bounded_R("alpha", xi)
            if not _pi_mu(inst, I.psi_of(c)).equals(R.adjoint().compose(T_R).compose(R)):
                return ("right",) + (A.labels[i], A.labels[k])
    return None


def flippy_defect(inst):
    """W* rho^{alpha,beta^}_{r(b)s(b')} beta(b'') = rho^{beta,alpha}_{r(b'')s(b')} alpha(b) for point triples."""
    F = inst.fundamental
    A, g, base = F.A, F.gns, inst.base
    n = base.n
    for z in range(n):
        for z1 in range(n):
            for z2 in range(n):
                b, b1, b2 = base.delta(z), base.delta(z1), base.delta(z2)
                lhs = F.W_star.compose(F.P_abh.rho_op(A.mul(A.r(b), A.s(b1)))).compose(g.rep("beta", b2))
                rhs = F.P_ba.rho_op(A.mul(A.r(b2), A.s(b1))).compose(g.rep("alpha", b))
                if not lhs.equals(rhs):
                    return tuple(base.points[k] for k in (z, z1, z2))
    return None


def mqg_unitaries_defect(inst):
    """W* and V satisfy the slice relations characterizing U_H and U'_H."""
    F = inst.fundamental
    A = F.A
    basis = [F.e(i) for i in range(F.d)]
    for ia, a in enumerate(basis):
        Da = delta_op(F, F.pi(a))
        for iw, w in enumerate(basis):
            lam_w = F.P_ba.lam(w).adjoint()
            rho_w = F.P_ba.rho_op(w).adjoint()
            for iv, v in enumerate(basis):
                lhs = lam_w.apply(F.W_star.apply(F.t2(v, a)))
                rhs = lam_w.compose(Da).compose(F.P_ba.lam(v)).apply(A.unit)
                if not F.gns.H.equal(lhs, rhs):
                    return ("U_H",) + (A.labels[ia], A.labels[iw], A.labels[iv])
                lhs = rho_w.apply(F.V.apply(F.t2(a, v)))
                rhs = rho_w.compose(Da).compose(F.P_ba.rho_op(v)).apply(A.unit)
                if not F.gns.H.equal(lhs, rhs):
                    return ("U'_H",) + (A.labels[ia], A.labels[iw], A.labels[iv])
    return None


def antipode_op_defect(inst):
    """(omega_{x,x'} * Id)(V*) = pi(D^1/2 S D^1/2 (a)) with a the closed form of the V slice."""
    F = inst.fundamental
    A, I, H = F.A, F.I, F.H
    for i in range(F.d):
        for j in range(F.d):
            x, x2 = F.e(i), F.e(j)
            a = slice_v_left_element(F, x, x2)
            sl = F.P_ahb.lam(x).adjoint().compose(F.V_star).compose(F.P_ba.lam(x2))
            if not sl.equals(F.pi(I.D(H.S(I.D(a, 0.5)), 0.5))):
                return (A.labels[i], A.labels[j])
    return None


def h_compression(inst):
    """The map iota: K (x) K -> H, delta_x (x) delta_y -> Lambda(r(delta_x) s(delta_y)), with its source space."""
    A, base, g = inst.algebra, inst.base, inst.gns
    n = base.n
    w = base.weight
    KK = GramSpace([[ONE * (w[i // n] * w[i % n]) if i == j else ZERO for j in range(n * n)] for i in range(n * n)],
                   name="K(x)K")
    cols = [A.mul(A.r(base.delta(i // n)), A.s(base.delta(i % n))) for i in range(n * n)]
    return KK, GramMap(KK, g.H, cols, "iota")


def h_compression_defect(inst):
    """iota is an isometry and iota# pi(a) iota = (pi_mu (x) pi_mu)(h(a)) for all basis a."""
    I, A = inst.integrals, inst.algebra
    if I.h is None:
        raise NotApplicable("no bi-integral")
    KK, iota = h_compression(inst)
    fd = iota.form_defect()
    if fd is not None:
        return ("not isometric", fd)
    n = inst.base.n
    adj = iota.adjoint()
    for i in range(A.dim):
        lhs = adj.compose(inst.gns.lmul(A.basis(i))).compose(iota)
        hb = I.h_of(A.basis(i))
        rhs = GramMap(KK, KK, [{k: hb[(k // n, k % n)]} if hb.get((k // n, k % n)) else {} for k in range(n * n)])
        if not lhs.equals(rhs):
            return (A.labels[i],)
    return None


def delta_nu_diagonal(inst) -> list:
    """Diagonal of Delta_nu when it is diagonal, else None."""
    D = inst.tomita.delta_matrix
    d = len(D)
    if any(D[i][j] for i in range(d) for j in range(d) if i != j):
        return None
    return [D[i][i] for i in range(d)]


__all__ = [
    "TomitaData", "NotMeasured", "build_tomita", "delta_theta_defect", "modular_group_defect", "j_defect",
    "fixed_algebra", "fixed_algebra_defect", "weight_invariance_defect", "flippy_defect", "mqg_unitaries_defect",
    "antipode_op_defect", "h_compression", "h_compression_defect", "delta_nu_diagonal", "j_residuals",
]
