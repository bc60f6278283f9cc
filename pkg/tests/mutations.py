"""Single-table mutations of the fixture instances, each paired with the check expected to catch it."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

from dqg import fundamental as fm
from dqg.builders import example_crossed, example_pair, example_sweedler
from dqg.exactlin import ONE, gq
from dqg.instance import Instance


@dataclass(frozen=True)
class Mutation:
    name: str
    build: Callable[[], Instance]
    suite: str
    detector: str
    origin: str = "C"  # fixture the mutation starts from


def _scaled(v: dict, c) -> dict:
    return {k: x * gq(c) for k, x in v.items()}


def delta_collapsed() -> Instance:
    c = example_crossed()
    H = c.hopf
    i = c.algebra.labels.index("d1.g")
    delta = list(H.delta)
    delta[i] = {(i, k): ONE for k in range(3)}  # d1.g (x) 1
    return c.mutate(hopf=H.with_tables(delta=tuple(delta)))


def counit_doubled() -> Instance:
    c = example_crossed()
    return c.mutate(hopf=c.hopf.with_tables(counit=tuple(_scaled(v, 2) for v in c.hopf.counit)))


def antipode_identity() -> Instance:
    c = example_crossed()
    return c.mutate(hopf=c.hopf.with_tables(antipode=tuple({i: ONE} for i in range(c.dim))))


def phi_ignores_group() -> Instance:
    c = example_crossed()
    n = c.base.n
    phi = tuple({i % n: ONE} for i in range(c.dim))
    return c.mutate(integrals=c.integrals.with_tables(phi=phi))


def h_doubled() -> Instance:
    t = example_pair()
    return t.mutate(integrals=t.integrals.with_tables(h=tuple(_scaled(v, 2) for v in t.integrals.h)))


def sweedler_antipode_inverse() -> Instance:
    s = example_sweedler()
    H = s.hopf
    inv = tuple(H.S(H.S(H.S({i: ONE}))) for i in range(s.dim))
    return s.mutate(hopf=H.with_tables(antipode=inv))


def theta_identity() -> Instance:
    c = example_crossed()
    I = c.integrals.with_tables()
    # theta is a cached table; overwrite it in place of the solved one
    I.__dict__["theta_table"] = tuple({i: ONE} for i in range(c.dim))
    return replace(c, integrals=I)


def w_half_dropped() -> Instance:
    return replace(example_crossed(), w_half_twist=False)


def w_flipped() -> Instance:
    return replace(example_crossed(), w_override=fm.flip_composed_w)


def w_only_half_dropped() -> Instance:
    return replace(example_crossed(), w_override=fm.w_without_half)


def antipode_twisted_by_theta() -> Instance:
    c = example_crossed()
    H, I = c.hopf, c.integrals
    S = tuple(H.S(I.theta({i: ONE})) for i in range(c.dim))
    return c.mutate(hopf=H.with_tables(antipode=S))


def structure_constant_negated() -> Instance:
    c = example_crossed()
    A = c.algebra
    key = min(A.mult)
    mult = dict(A.mult)
    mult[key] = {k: -x for k, x in mult[key].items()}
    return c.mutate(algebra=A.with_tables(mult=mult))


MUTATIONS = (
    Mutation("delta of d1.g collapsed to d1.g (x) 1", delta_collapsed, "axioms", "delta-morphism"),
    Mutation("counit scaled by 2", counit_doubled, "axioms", "counit"),
    Mutation("antipode replaced by the identity", antipode_identity, "axioms", "antipode-diagram-1"),
    Mutation("phi(b g) = b for every g", phi_ignores_group, "integrals", "left-integral"),
    Mutation("bi-integral h scaled by 2", h_doubled, "integrals", "bi-integral", "T"),
    Mutation("Sweedler antipode replaced by its inverse", sweedler_antipode_inverse, "integrals",
             "strong-invariance", "Sw"),
    Mutation("theta replaced by the identity", theta_identity, "integrals", "modular-integrals"),
    Mutation("D^1/2 leg dropped in W and W*", w_half_dropped, "fundamental", "pentagon"),
    Mutation("W composed with the leg flip", w_flipped, "fundamental", "regularity"),
    Mutation("D^1/2 leg dropped in W only", w_only_half_dropped, "modular", "weight-invariance"),
    Mutation("antipode composed with theta", antipode_twisted_by_theta, "modular", "operator-antipode"),
    Mutation("one structure constant negated", structure_constant_negated, "axioms", "algebra-structure"),
)
