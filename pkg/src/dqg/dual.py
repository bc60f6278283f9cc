"""Fourier transform x -> nu(S(x) .), right and left convolution, and the dual algebra on preimages.

Dual elements are never given their own basis: x^ is carried by its preimage x,
so the product y^ x^ is the preimage x * y^, the involution is S(x)*, and so on.
"""

from __future__ import annotations

from dqg.exactlin import acc, rank, rank_of_vectors, vsub
from dqg.integrals import IntegralData, measured_defect


class ConvolutionMismatch(ArithmeticError):
    """The three expressions for a right convolution disagree."""


def _scaled_add(out: dict, v: dict, c) -> None:
    for k, x in v.items():
        acc(out, k, c * x)


def fourier(I: IntegralData, x: dict) -> list:
    """x^ as a row of values nu(S(x) e_j)."""
    A, H = I.A, I.hopf
    sx = H.S(x)
    return [I.nu_fast(A.mul(sx, A.basis(j))) for j in range(A.dim)]


def conv_right_primary(I: IntegralData, a: dict, x: dict) -> dict:
    """sum a(2) r(psi(S(x) a(1)))."""
    A, H = I.A, I.hopf
    sx = H.S(x)
    out: dict = {}
    for k, l, c in H.terms(a):
        b = I.psi_of(A.mul(sx, A.basis(k)))
        if b:
            _scaled_add(out, A.mul(A.basis(l), A.r(b)), c)
    return out


def conv_right_theta(I: IntegralData, a: dict, x: dict) -> dict:
    """sum r(psi(a(1) theta_Dbar(S(x)))) a(2); needs the modular relation of psi, so measured only."""
    A, H = I.A, I.hopf
    tx = I.theta_Dbar(H.S(x))
    out: dict = {}
    for k, l, c in H.terms(a):
        b = I.psi_of(A.mul(A.basis(k), tx))
        if b:
            _scaled_add(out, A.mul(A.r(b), A.basis(l)), c)
    return out


def conv_right_strong(I: IntegralData, a: dict, x: dict) -> dict:
    """sum x(1) s(psi(S(x(2)) a))."""
    A, H = I.A, I.hopf
    out: dict = {}
    for k, l, c in H.terms(x):
        b = I.psi_of(A.mul(H.S(A.basis(l)), a))
        if b:
            _scaled_add(out, A.mul(A.basis(k), A.s(b)), c)
    return out


def _routes(I: IntegralData) -> tuple:
    if measured_defect(I) is None:
        return (conv_right_theta, conv_right_strong)
    return (conv_right_strong,)


def convolve_right(I: IntegralData, a: dict, x: dict, check: bool = True) -> dict:
    """a * x^, cross-checked against the alternative expressions that apply."""
    out = conv_right_primary(I, a, x)
    if check:
        for route in _routes(I):
            other = route(I, a, x)
            if vsub(out, other):
                raise ConvolutionMismatch(f"{route.__name__} disagrees")
    return out


def convolve_left(I: IntegralData, x: dict, a: dict) -> dict:
    """x^v * a = sum s(phi(a(2) S(x))) a(1)."""
    A, H = I.A, I.hopf
    sx = H.S(x)
    out: dict = {}
    for k, l, c in H.terms(a):
        b = I.phi_of(A.mul(A.basis(l), sx))
        if b:
            _scaled_add(out, A.mul(A.s(b), A.basis(k)), c)
    return out


# dual algebra on preimages ----------------------------------------------------

def dual_mul(I: IntegralData, y: dict, x: dict) -> dict:
    """Preimage of y^ x^, namely x * y^."""
    return convolve_right(I, x, y, check=False)


def dual_star(I: IntegralData, x: dict) -> dict:
    return I.A.star(I.hopf.S(x))


def r_hat_left(I, b, x):
    return I.A.mul(x, I.A.r(b))


def r_hat_right(I, x, b):
    return I.A.mul(x, I.A.s(b))


def s_hat_left(I, b, x):
    return I.A.mul(I.A.r(b), x)


def s_hat_right(I, x, b):
    return I.A.mul(I.A.s(b), x)


# checks ------------------------------------------------------------------------

def _basis(A):
    return [A.basis(i) for i in range(A.dim)]


def _lab(A, *idx):
    return tuple(A.labels[i] for i in idx)


def convolution_routes_defect(inst):
    """The expressions for a * x^ agree on all basis pairs; the theta form only on measured instances."""
    I, A = inst.integrals, inst.algebra
    theta = measured_defect(I) is None
    for i, a in enumerate(_basis(A)):
        for j, x in enumerate(_basis(A)):
            p = conv_right_primary(I, a, x)
            if theta and vsub(p, conv_right_theta(I, a, x)):
                return ("theta route",) + _lab(A, i, j)
            if vsub(p, conv_right_strong(I, a, x)):
                return ("strong invariance route",) + _lab(A, i, j)
    return None


def convolution_module_defect(inst):
    """r(b)a * x^ = a * (s(b)x)^, a r(b) * x^ = a * (x s(b))^, and the two s-laws."""
    I, A, base = inst.integrals, inst.algebra, inst.base
    for i, a in enumerate(_basis(A)):
        for j, x in enumerate(_basis(A)):
            for z in range(base.n):
                b = base.delta(z)
                conv = lambda u, v: convolve_right(I, u, v, check=False)
                pairs = [
                    ("r(b)a", conv(A.mul(A.r(b), a), x), conv(a, A.mul(A.s(b), x))),
                    ("a r(b)", conv(A.mul(a, A.r(b)), x), conv(a, A.mul(x, A.s(b)))),
                    ("s(b)a", conv(A.mul(A.s(b), a), x), A.mul(A.s(b), conv(a, x))),
                    ("a s(b)", conv(A.mul(a, A.s(b)), x), A.mul(conv(a, x), A.s(b))),
                ]
                for tag, lhs, rhs in pairs:
                    if vsub(lhs, rhs):
                        return (tag,) + _lab(A, i, j) + (base.points[z],)
    return None


def convolution_product_defect(inst):
    """(a * x^) * y^ = a * (x * y^)^ on all basis triples."""
    I, A = inst.integrals, inst.algebra
    basis = _basis(A)
    for i, a in enumerate(basis):
        for j, x in enumerate(basis):
            ax = convolve_right(I, a, x, check=False)
            for k, y in enumerate(basis):
                lhs = convolve_right(I, ax, y, check=False)
                rhs = convolve_right(I, a, convolve_right(I, x, y, check=False), check=False)
                if vsub(lhs, rhs):
                    return _lab(A, i, j, k)
    return None


def convolution_grading_defect(inst):
    """A_{g,g'} * (A_{d,d'})^ lies in A_{d,g'} and vanishes unless g = d'."""
    I, A = inst.integrals, inst.algebra
    for i, a in enumerate(_basis(A)):
        for j, x in enumerate(_basis(A)):
            out = convolve_right(I, a, x, check=False)
            if not out:
                continue
            if A.d(i) != A.dbar(j):
                return ("nonzero off the diagonal",) + _lab(A, i, j)
            if A.degrees(out) != {(A.d(j), A.dbar(i))}:
                return ("wrong degree",) + _lab(A, i, j)
    return None


def fourier_rank_defect(inst):
    """x -> x^ is injective."""
    I, A = inst.integrals, inst.algebra
    rows = [fourier(I, A.basis(i)) for i in range(A.dim)]
    r = rank(rows)
    return None if r == A.dim else ("rank", r, A.dim)


def left_convolution_defect(inst):
    """S(x)^v * S(a) = S(a * x^) when phi o S = psi; otherwise only the zero laws are checked."""
    I, A, H = inst.integrals, inst.algebra, inst.hopf
    basis = _basis(A)
    for i, x in enumerate(basis):
        if convolve_left(I, {}, x) or convolve_right(I, {}, x):
            return ("zero",) + _lab(A, i)
    phi_s = [I.phi_of(H.S(e)) for e in basis]
    if any(vsub(phi_s[i], I.psi[i]) for i in range(A.dim)):
        return None
    for i, a in enumerate(basis):
        for j, x in enumerate(basis):
            lhs = convolve_left(I, H.S(x), H.S(a))
            rhs = H.S(convolve_right(I, a, x, check=False))
            if vsub(lhs, rhs):
                return ("S-compatibility",) + _lab(A, i, j)
    return None


def left_convolution_applies(inst) -> bool:
    I, A, H = inst.integrals, inst.algebra, inst.hopf
    return all(not vsub(I.phi_of(H.S(A.basis(i))), I.psi[i]) for i in range(A.dim))


def dual_grading_dims(inst) -> dict:
    """dim of each nonzero graded piece of the dual, read off from delta_x^ = d(x), dbar_x^ = dbar(x)."""
    A = inst.algebra
    G = inst.base.group
    out: dict = {}
    for i in range(A.dim):
        key = (G.elements[A.d(i)], G.elements[A.dbar(i)])
        out[key] = out.get(key, 0) + 1
    return out


def dual_algebra_defect(inst):
    """Matrix-algebra axioms of the dual, the involution and the base multipliers."""
    I, A, base, H = inst.integrals, inst.algebra, inst.base, inst.hopf
    G = base.group
    basis = _basis(A)
    for i, x in enumerate(basis):
        gx, gx2 = A.d(i), A.dbar(i)
        xs = dual_star(I, x)
        if xs and A.degrees(xs) != {(gx2, gx)}:
            return ("involution grading",) + _lab(A, i)
        if vsub(dual_star(I, xs), x):
            return ("involution not involutive",) + _lab(A, i)
        for z in range(base.n):
            for z2 in range(base.n):
                b, b2 = base.delta(z), base.delta(z2)
                left = s_hat_left(I, b2, r_hat_left(I, b, x))
                if left and A.degrees(left) != {(gx, gx2)}:
                    return ("B (x) B action grading",) + _lab(A, i)
                # (b (x) b') x^ = (g^-1(b') (x) g(b)) x^ for x^ of left degree g
                twisted = s_hat_left(I, base.act(gx, b), r_hat_left(I, base.act(G.inv(gx), b2), x))
                if vsub(left, twisted):
                    return ("left twist",) + _lab(A, i) + (base.points[z], base.points[z2])
                right = s_hat_right(I, r_hat_right(I, x, b), b2)
                twisted = s_hat_right(I, r_hat_right(I, x, base.act(G.inv(gx2), b2)), base.act(gx2, b))
                if vsub(right, twisted):
                    return ("right twist",) + _lab(A, i) + (base.points[z], base.points[z2])
            b = base.delta(z)
            # (x^ r^(b))* = r^(b*) x^*
            if vsub(dual_star(I, r_hat_right(I, x, b)), r_hat_left(I, base.star(b), xs)):
                return ("r^ involutive",) + _lab(A, i) + (base.points[z],)
            if vsub(dual_star(I, s_hat_right(I, x, b)), s_hat_left(I, base.star(b), xs)):
                return ("s^ involutive",) + _lab(A, i) + (base.points[z],)
        for j, y in enumerate(basis):
            prod = dual_mul(I, x, y)  # x^ y^
            if prod:
                if A.dbar(i) != A.d(j):
                    return ("product off the diagonal",) + _lab(A, i, j)
                if A.degrees(prod) != {(gx, A.dbar(j))}:
                    return ("product grading",) + _lab(A, i, j)
            # (y^ x^)* = x^* y^*
            lhs = dual_star(I, dual_mul(I, y, x))
            rhs = dual_mul(I, dual_star(I, x), dual_star(I, y))
            if vsub(lhs, rhs):
                return ("involution not anti-multiplicative",) + _lab(A, i, j)
            # r^(b), s^(b) are multipliers: y^ (r^(b) x^) = (y^ r^(b)) x^
            for z in range(base.n):
                b = base.delta(z)
                if vsub(dual_mul(I, y, r_hat_left(I, b, x)), dual_mul(I, r_hat_right(I, y, b), x)):
                    return ("r^ multiplier",) + _lab(A, j, i) + (base.points[z],)
                if vsub(dual_mul(I, y, s_hat_left(I, b, x)), dual_mul(I, s_hat_right(I, y, b), x)):
                    return ("s^ multiplier",) + _lab(A, j, i) + (base.points[z],)
    return None


def dual_nondegeneracy_defect(inst):
    """<A^ee A> = A for the dual, with A^ee the degree (e, e) part.

    Fails whenever some x^ has left degree != e, since products of degree (e, e)
    elements land in left degree e; the crossed product is such a case.
    """
    I, A = inst.integrals, inst.algebra
    e = inst.base.group.identity
    basis = _basis(A)
    ee = [x for i, x in enumerate(basis) if A.d(i) == e and A.dbar(i) == e]
    r = rank_of_vectors([dual_mul(I, x, y) for x in ee for y in basis])
    return None if r == A.dim else ("rank of <A^ee A>", r, A.dim)


def dual_dimension(inst) -> int:
    """Rank of the dual multiplication span, equal to dim A when the dual is non-degenerate."""
    I, A = inst.integrals, inst.algebra
    basis = _basis(A)
    return rank_of_vectors([dual_mul(I, x, y) for x in basis for y in basis])


def convolution_zero_defect(inst):
    I, A = inst.integrals, inst.algebra
    for i, x in enumerate(_basis(A)):
        if convolve_right(I, {}, x) or convolve_right(I, x, {}):
            return _lab(A, i)
    return None

