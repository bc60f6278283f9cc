"""Registry of named checks, grouped into suites, and the runner that turns them into a report."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from dqg import algebroid as al
from dqg import base as bs
from dqg import dual as du
from dqg import fundamental as fm
from dqg import gns as gn
from dqg import hopf as hp
from dqg import integrals as ig
from dqg import modular_vn as mv
from dqg.base import NotApplicable
from dqg.exactlin import float_psd_oracle, record_grams

SUITES = ("axioms", "integrals", "dual", "gns", "fundamental", "modular")


@dataclass(frozen=True)
class Check:
    check_id: str
    suite: str
    anchor: str
    fn: Callable
    mode: str = "exact"
    # "measured": needs measured integrals and a positive total integral
    needs: tuple = ()


@dataclass
class Context:
    tol: float = 1e-9
    grams: list = field(default_factory=list)


@dataclass
class Result:
    check_id: str
    suite: str
    anchor: str
    status: str  # pass | fail | n/a
    witness: object
    mode: str
    seconds: float

    def to_json(self) -> dict:
        return {
            "check_id": self.check_id,
            "suite": self.suite,
            "anchor": self.anchor,
            "status": self.status,
            "witness": _jsonable(self.witness),
            "mode": self.mode,
            "seconds": round(self.seconds, 4),
        }


def _jsonable(w):
    if w is None or isinstance(w, (bool, int, float, str)):
        return w
    if isinstance(w, (tuple, list)):
        return [_jsonable(x) for x in w]
    if isinstance(w, dict):
        return {str(k): _jsonable(v) for k, v in w.items()}
    return str(w)


# adapters ---------------------------------------------------------------------------

def _on_base(f):
    return lambda inst, ctx: f(inst.base)


def _on_algebra(f):
    return lambda inst, ctx: f(inst.algebra)


def _on_hopf(f):
    return lambda inst, ctx: f(inst.hopf)


def _on_integrals(f):
    return lambda inst, ctx: f(inst.integrals)


def _on_inst(f):
    return lambda inst, ctx: f(inst)


def _sqrt_cocycle(inst, ctx):
    if inst.base.cocycle.d_half is None:
        raise NotApplicable("no rational square-root cocycle")
    return bs.sqrt_conditions_defect(inst.base)


def _k_space(key):
    def run(inst, ctx):
        if key == "U" and inst.base.cocycle.d_half is None:
            raise NotApplicable("no rational square-root cocycle")
        return bs.k_space_defects(inst.base)[key]
    return run


def _structure(inst, ctx):
    probs = inst.problems
    return probs[0] if probs else None


def _left_integral(inst, ctx):
    return ig.left_integral_defect(inst.hopf, inst.integrals.phi)


def _right_integral(inst, ctx):
    return ig.right_integral_defect(inst.hopf, inst.integrals.psi)


def _theta_closed_form(inst, ctx):
    """theta by linear solve equals the crossed-product closed form, where that form applies."""
    base = inst.base
    if len(base.group) == 1 or not inst.algebra.same_tables(al.crossed_product_algebroid(base)):
        raise NotApplicable("not a crossed product with nontrivial group")
    I = inst.integrals
    return ig.theta_matches(I, ig.theta_closed_form_crossed(I))


def _j(inst, ctx):
    return mv.j_defect(inst, ctx.tol)


def _instance_grams(inst) -> list:
    if ig.measured_defect(inst.integrals) is not None:
        return []
    F = inst.fundamental
    spaces = [inst.gns.H, inst.gns.K] + [P.space for P in fm._pairs(F)] + [X.space for X in F.triples.values()]
    return [(S.name, S.gram, True) for S in spaces]


def _psd_oracle(inst, ctx):
    """The exact PSD verdict agrees with floating eigenvalues on every Gram matrix built by the run."""
    for name, g, psd in ctx.grams + _instance_grams(inst):
        if float_psd_oracle(g, -ctx.tol) != psd:
            return (name or "unnamed", len(g), "exact psd" if psd else "exact not psd")
    return None


REGISTRY: tuple = (
    # base and algebra
    Check("base-cocycle", "axioms", "D_g multiplies mu(g(delta_x D_g)) back to mu(delta_x)", _on_base(bs.cocycle_defect)),
    Check("base-cocycle-law", "axioms", "D_{gh} = h^-1(D_g) D_h", _on_base(bs.cocycle_law_defect)),
    Check("base-sqrt-cocycle", "axioms", "square-root cocycle: unit, square, positivity, cocycle law", _sqrt_cocycle),
    Check("base-quasi-invariance", "axioms", "mu(g^-1(b) c) = mu(b g(c D_g))", _on_base(bs.quasi_invariance_defect)),
    Check("k-space-pi-mu", "axioms", "pi_mu is a *-representation on K", _k_space("pi_mu")),
    Check("k-space-j-mu", "axioms", "J_mu is antiunitary on K", _k_space("J_mu")),
    Check("k-space-u", "axioms", "U_g unitary, homomorphic, covariant for pi_mu", _k_space("U")),
    Check("algebra-structure", "axioms", "associative bigraded *-algebra with commuting embeddings r, s", _structure),
    Check("fiber-unit-iso", "axioms", "unit isomorphisms of the fiber product", _on_algebra(al.unit_iso_defect)),
    Check("fiber-associativity-iso", "axioms", "associativity isomorphism of the fiber product", _on_algebra(al.associativity_iso_defect)),
    Check("fiber-flip", "axioms", "flip map is an isomorphism onto the co-opposite", _on_algebra(al.flip_defect)),
    Check("op-co", "axioms", "opposite and co-opposite compatibility", _on_algebra(al.op_co_defect)),
    # Hopf structure
    Check("delta-morphism", "axioms", "Delta is a morphism into the fiber product", _on_hopf(hp.delta_morphism_defect)),
    Check("coassociativity", "axioms", "(Delta (x) Id) Delta = (Id (x) Delta) Delta", _on_hopf(hp.coassociativity_defect)),
    Check("counit-morphism", "axioms", "counit is a morphism to the crossed product", _on_hopf(hp.counit_morphism_defect)),
    Check("counit", "axioms", "counit relations in Sweedler form", _on_hopf(hp.counit_defect)),
    Check("counit-uniqueness", "axioms", "the counit relations determine the counit", _on_hopf(hp.counit_uniqueness_defect)),
    Check("antipode-morphism", "axioms", "S is an anti-morphism compatible with grading and *", _on_hopf(hp.antipode_morphism_defect)),
    Check("antipode-diagram-1", "axioms", "sum S(x1) x2 y = s(eps_flat(x)) y", lambda inst, ctx: hp.antipode_diagram_defect(inst.hopf, 1)),
    Check("antipode-diagram-2", "axioms", "sum x y1 S(y2) = x r(eps_sharp(y))", lambda inst, ctx: hp.antipode_diagram_defect(inst.hopf, 2)),
    Check("antipode-sigma", "axioms", "sum S(x1) (x) S(x2) = sum S(x)2 (x) S(x)1", _on_hopf(hp.antipode_sigma_defect)),
    Check("antipode-uniqueness", "axioms", "the antipode diagrams determine S", _on_hopf(hp.antipode_uniqueness_defect)),
    Check("galois", "axioms", "Galois maps T1..T4 are bijective with the stated inverses", _on_hopf(hp.galois_defect)),
    Check("lift-independence", "axioms", "Sweedler computations do not depend on the lift of Delta", _on_hopf(hp.lift_independence_defect)),
    # integrals
    Check("functionals", "integrals", "phi, psi are module maps supported on degree (e, e)", _on_integrals(ig.functional_defects)),
    Check("left-integral", "integrals", "phi is a left integral", _left_integral),
    Check("right-integral", "integrals", "psi is a right integral", _right_integral),
    Check("measured", "integrals", "mu o phi = mu o psi, positive and faithful", _on_integrals(ig.measured_defect)),
    Check("star-linear", "integrals", "phi(a*) = phi(a)*, psi(a*) = psi(a)*", _on_integrals(ig.star_linear_defect)),
    Check("antipode-integral", "integrals", "phi o S = psi and nu o S = nu", _on_integrals(ig.antipode_integral_defect)),
    Check("strong-invariance", "integrals", "strong invariance of the integrals", _on_integrals(ig.strong_invariance_defect)),
    Check("bi-integral", "integrals", "normalized bi-integral h with coideal kernel", _on_integrals(ig.bi_integral_defect)),
    Check("bi-integral-uniqueness", "integrals", "h is unique among normalized bi-integrals", _on_integrals(ig.bi_integral_uniqueness_defect)),
    Check("derived-integrals", "integrals", "integrals induced by h are left/right integrals", _on_integrals(ig.derived_integrals_defect)),
    Check("theta", "integrals", "nu(xy) = nu(y theta(x)) with theta an automorphism", _on_integrals(ig.theta_defect)),
    Check("theta-closed-form", "integrals", "theta(delta_x g) = w(x)/w(g^-1 x) delta_x g on crossed products", _theta_closed_form),
    Check("d-twist", "integrals", "D and D-bar twists are multiplicative and commute with theta", _on_integrals(ig.d_twist_defect)),
    Check("modular-integrals", "integrals", "phi o theta, psi o theta via the D twists", _on_integrals(ig.modular_integrals_defect)),
    Check("modular-delta", "integrals", "Delta o theta_D = (S^2 (x) theta_D) o Delta", _on_integrals(ig.modular_delta_defect)),
    Check("constructive-elements", "integrals", "nu(z a) = nu(a' z) for sampled constructive pairs", _on_integrals(ig.constructive_defect)),
    # dual
    Check("convolution-routes", "dual", "three formulas for right convolution agree", _on_inst(du.convolution_routes_defect), needs=("measured",)),
    Check("convolution-module", "dual", "convolution is a bimodule action", _on_inst(du.convolution_module_defect), needs=("measured",)),
    Check("convolution-product", "dual", "convolution product is associative", _on_inst(du.convolution_product_defect), needs=("measured",)),
    Check("convolution-grading", "dual", "convolution respects the grading", _on_inst(du.convolution_grading_defect), needs=("measured",)),
    Check("convolution-zero", "dual", "convolution by zero vanishes", _on_inst(du.convolution_zero_defect), needs=("measured",)),
    Check("fourier-rank", "dual", "the Fourier transform is injective", _on_inst(du.fourier_rank_defect), needs=("measured",)),
    Check("left-convolution", "dual", "left convolution formulas agree", _on_inst(du.left_convolution_defect), needs=("measured",)),
    Check("dual-algebra", "dual", "dual matrix-algebra axioms: grading, involution, twist laws", _on_inst(du.dual_algebra_defect), needs=("measured",)),
    Check("dual-nondegeneracy", "dual", "<A^ee A> = A for the dual", _on_inst(du.dual_nondegeneracy_defect), needs=("measured",)),
    # GNS
    Check("gns-grams", "gns", "Gram matrices of H and K are positive", _on_inst(gn.grams_defect), needs=("measured",)),
    Check("gns-pi-nu", "gns", "pi_nu is a *-representation", _on_inst(gn.pi_nu_defect), needs=("measured",)),
    Check("gns-k-space", "gns", "K and pi_mu from the base weight", _on_inst(gn.k_space_defect), needs=("measured",)),
    Check("gns-lambda", "gns", "Lambda_phi, Lambda_psi and their daggers", _on_inst(gn.lambda_identities_defect), needs=("measured",)),
    Check("gns-representations", "gns", "alpha, beta, alpha^, beta^ commute pairwise as required", _on_inst(gn.representations_defect), needs=("measured",)),
    Check("gns-module-action", "gns", "B-valued inner products are module maps", _on_inst(gn.module_action_defect), needs=("measured",)),
    Check("gns-c-star-module", "gns", "B-valued inner products are positive and Hermitian", _on_inst(gn.c_star_module_defect), needs=("measured",)),
    Check("gns-bounded-vectors", "gns", "R maps of bounded vectors give the inner products", _on_inst(gn.bounded_vectors_defect), needs=("measured",)),
    Check("gns-half-twist", "gns", "Lambda_phi(x) U = Lambda^dag_phi(D^1/2(x))", _on_inst(gn.half_twist_inner_defect), needs=("measured",)),
    Check("gns-rtp-identify", "gns", "leg operators match the R maps", _on_inst(gn.rtp_identify_defect), needs=("measured",)),
    # fundamental unitaries
    Check("rtp-forms", "fundamental", "both asymmetric forms agree; pullback forms on algebraic tensors", _on_inst(fm.rtp_forms_defect), needs=("measured",)),
    Check("rtp-dimensions", "fundamental", "quotient dimensions equal balanced tensor dimensions", _on_inst(fm.rtp_dimension_defect), needs=("measured",)),
    Check("leg-adjoints", "fundamental", "adjoints of lambda_xi and rho_eta", _on_inst(fm.leg_adjoint_defect), needs=("measured",)),
    Check("w-unitary", "fundamental", "W is unitary, W* its inverse and adjoint, two formulas each", _on_inst(fm.w_unitary_defect), needs=("measured",)),
    Check("v-unitary", "fundamental", "V is unitary, V* by formula equals the adjoint", _on_inst(fm.v_unitary_defect), needs=("measured",)),
    Check("pentagon", "fundamental", "W23 W12 = W12 W13 W23, and the closed-form adjoint", _on_inst(fm.pentagon_defect), needs=("measured",)),
    Check("intertwining", "fundamental", "six intertwining relations of W with the base representations", _on_inst(fm.intertwining_defect), needs=("measured",)),
    Check("span-equalities", "fundamental", "six span equalities for W applied to leg operators", _on_inst(fm.span_equalities_defect), needs=("measured",)),
    Check("slice-w", "fundamental", "slices of W* equal pi_nu(a) and rho(c^) for the closed forms", _on_inst(fm.slice_w_defect), needs=("measured",)),
    Check("slice-v", "fundamental", "slices of V equal pi_nu(a) and left convolution", _on_inst(fm.slice_v_defect), needs=("measured",)),
    Check("representations", "fundamental", "pi_nu and rho are *-homomorphisms", _on_inst(fm.representations_defect), needs=("measured",)),
    Check("slice-spans", "fundamental", "pi_nu(A) and rho(A^) are spanned by slices of W*, W", _on_inst(fm.slice_span_defect), needs=("measured",)),
    Check("commutants", "fundamental", "pi_nu(A) commutes with beta^, alpha^; rho(A^) with beta, alpha^", _on_inst(fm.commutant_defect), needs=("measured",)),
    Check("coproduct", "fundamental", "W*(1 (x) pi(a))W = explicit formula; compatible with alpha, beta", _on_inst(fm.coproduct_defect), needs=("measured",)),
    Check("coproduct-three-slot", "fundamental", "three-slot form with U_{d a(1)} in the middle", _on_inst(fm.three_slot_defect), needs=("measured",)),
    Check("coproduct-three-slot-contragredient", "fundamental", "three-slot form with D^-1/2 in the middle",
          lambda inst, ctx: fm.three_slot_defect(inst, True), needs=("measured",)),
    Check("coproduct-coassociativity", "fundamental", "coassociativity on the triple product, three routes", _on_inst(fm.coassociativity_defect), needs=("measured",)),
    Check("dual-coproduct", "fundamental", "W(rho(c^) (x) 1)W* = explicit formula", _on_inst(fm.dual_coproduct_defect), needs=("measured",)),
    Check("regularity", "fundamental", "regularity span equalities for W and V", _on_inst(fm.regularity_defect), needs=("measured",)),
    # modular theory
    Check("delta-nu", "modular", "Delta_nu Lambda(a) = Lambda(theta(a))", _on_inst(mv.delta_theta_defect), needs=("measured",)),
    Check("modular-group", "modular", "Delta^-n pi(a) Delta^n = pi(theta^-n(a)), n = 1, 2", _on_inst(mv.modular_group_defect), needs=("measured",)),
    Check("j-nu", "modular", "J^2 = 1, J alpha(b)* J = beta^(b), J beta(b)* J = alpha^(b)", _j, mode="numeric", needs=("measured",)),
    Check("fixed-algebra", "modular", "A^theta commutes with Delta_nu; right-bounded identity on r(B)s(B)", _on_inst(mv.fixed_algebra_defect), needs=("measured",)),
    Check("weight-invariance", "modular", "left and right invariance of the extended integrals", _on_inst(mv.weight_invariance_defect), needs=("measured",)),
    Check("flippy", "modular", "W* rho_{r(b)s(b')} beta(b'') = rho_{r(b'')s(b')} alpha(b)", _on_inst(mv.flippy_defect), needs=("measured",)),
    Check("mqg-unitaries", "modular", "W* = U_H and V = U'_H by their slice relations", _on_inst(mv.mqg_unitaries_defect), needs=("measured",)),
    Check("operator-antipode", "modular", "slice of V* equals pi(D^1/2 S D^1/2(a))", _on_inst(mv.antipode_op_defect), needs=("measured",)),
    Check("h-compression", "modular", "iota# pi(a) iota = (pi_mu (x) pi_mu)(h(a))", _on_inst(mv.h_compression_defect), needs=("measured",)),
    Check("psd-oracle", "modular", "exact PSD test agrees with floating eigenvalues on every Gram", _psd_oracle, mode="numeric"),
)

BY_ID = {c.check_id: c for c in REGISTRY}


def select(suite: str = "all") -> list:
    if suite == "all":
        return list(REGISTRY)
    if suite not in SUITES:
        raise KeyError(suite)
    return [c for c in REGISTRY if c.suite == suite]


def _blocked(inst, check: Check) -> str | None:
    """Reason a check cannot run on this instance, or None."""
    if inst.problems and not check.check_id.startswith(("algebra-structure", "base-", "k-space")):
        return "algebra is not a valid bigraded *-algebra"
    if "measured" in check.needs and ig.measured_defect(inst.integrals) is not None:
        return "instance is not measured"
    return None


def run_check(inst, check: Check, ctx: Context) -> Result:
    t = time.perf_counter()
    reason = _blocked(inst, check)
    if reason:
        return Result(check.check_id, check.suite, check.anchor, "n/a", reason, check.mode, 0.0)
    try:
        w = check.fn(inst, ctx)
        status = "pass" if w is None else "fail"
    except NotApplicable as exc:
        w, status = str(exc), "n/a"
    except (ArithmeticError, ValueError) as exc:
        # a broken hypothesis (singular form, non-PSD Gram, ...) makes the check fail
        w, status = ("error", f"{type(exc).__name__}: {exc}"), "fail"
    return Result(check.check_id, check.suite, check.anchor, status, w, check.mode, time.perf_counter() - t)


def run_suite(inst, suite: str = "all", tol: float = 1e-9, checks=None) -> list:
    """Run the selected checks in registry order; the PSD oracle sees every Gram built on the way."""
    chosen = checks if checks is not None else select(suite)
    ctx = Context(tol=tol)
    results = []
    with record_grams() as log:
        for c in chosen:
            if c.check_id == "psd-oracle":
                continue
            results.append(run_check(inst, c, ctx))
        ctx.grams = list(log)
    for c in chosen:
        if c.check_id == "psd-oracle":
            results.append(run_check(inst, c, ctx))
    return results


def passed(results) -> bool:
    return all(r.status != "fail" for r in results)
