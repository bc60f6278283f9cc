"""A complete instance: base, algebra, Hopf tables and integrals, with cached derived objects."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

from dqg.algebroid import Algebroid
from dqg.base import Base
from dqg.hopf import HopfData
from dqg.integrals import IntegralData


@dataclass(frozen=True, eq=False)
class Instance:
    base: Base
    algebra: Algebroid
    hopf: HopfData
    integrals: IntegralData
    name: str = "instance"
    description: str = ""
    # test hook: build W without its D^1/2 leg factor
    w_half_twist: bool = field(default=True)
    # test hook: replace W by w_override(genuine Fundamental)
    w_override: object = field(default=None)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @cached_property
    def problems(self) -> list:
        """Structural problems of the base and the algebra; empty for a valid instance."""
        return self.base.problems() + self.algebra.problems()

    @property
    def valid(self) -> bool:
        return not self.problems

    @cached_property
    def gns(self):
        from dqg.gns import Gns
        return Gns(self)

    @cached_property
    def fundamental(self):
        from dqg.fundamental import Fundamental
        if self.w_override is None:
            return Fundamental(self)
        return Fundamental(self, W=self.w_override(Fundamental(self)))

    @cached_property
    def tomita(self):
        from dqg.modular_vn import build_tomita
        return build_tomita(self)

    def mutate(self, *, algebra=None, hopf=None, integrals=None, **kw) -> "Instance":
        """A copy with some tables replaced; downstream tables are rebound to the new algebra."""
        A = algebra or self.algebra
        H = hopf or self.hopf
        if H.algebra is not A:
            H = H.with_tables(algebra=A)
        I = integrals or self.integrals
        if I.hopf is not H:
            I = I.with_tables(hopf=H)
        return replace(self, algebra=A, hopf=H, integrals=I, **kw)

    def same_tables(self, other: "Instance") -> bool:
        H1, H2 = self.hopf, other.hopf
        I1, I2 = self.integrals, other.integrals
        return (self.base == other.base and self.algebra.same_tables(other.algebra)
                and self.algebra.labels == other.algebra.labels
                and H1.delta == H2.delta and H1.counit == H2.counit and H1.antipode == H2.antipode
                and I1.phi == I2.phi and I1.psi == I2.psi and I1.h == I2.h)
