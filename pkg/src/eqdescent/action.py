"""Diagonal actions of finite abelian groups on projective space.

An action on P^n is a tuple of n+1 characters: the group element g sends
[x_0 : ... : x_n] to [chi_0(g) x_0 : ... : chi_n(g) x_n], where the character
values are roots of unity.  Because the action is diagonal, everything about
a point's stabilizer depends only on which coordinates are nonzero, so P^n
decomposes into 2^(n+1) - 1 coordinate-support strata on which stabilizers
and the scalar action on representative vectors are constant.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .groups import (
    AbelianGroup,
    Character,
    CharacterRestriction,
    InputError,
    Subgroup,
    equalizer_subgroup,
)

MAX_PROJECTIVE_DIM = 10
_SAMPLER_MIX = 0x9E3779B1  # 32-bit golden-ratio constant, for per-stratum seeds


def _as_fraction(x) -> Fraction:
    if isinstance(x, (int, str, Fraction)):
        return Fraction(x)
    raise InputError(f"not an exact rational coordinate: {x!r}")


@dataclass(frozen=True)
class RationalPoint:
    """Point of P^n with exact rational homogeneous coordinates."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(_as_fraction(c) for c in self.coords)
        if not any(coords):
            raise InputError("projective points need at least one nonzero coordinate")
        object.__setattr__(self, "coords", coords)

    @cached_property
    def support(self) -> tuple:
        return tuple(i for i, c in enumerate(self.coords) if c != 0)

    @property
    def dim_ambient(self) -> int:
        return len(self.coords) - 1

    def canonical(self) -> "RationalPoint":
        """Rescale so the first nonzero coordinate is 1."""
        lead = self.coords[self.support[0]]
        return RationalPoint(tuple(c / lead for c in self.coords))

    def display(self) -> str:
        return "(" + ":".join(str(c) for c in self.canonical().coords) + ")"

    def __repr__(self):
        return self.display()


@dataclass(frozen=True)
class Stratum:
    """Coordinate-support stratum: all points with exactly this support.

    ``scalar_char`` is the common restriction to the stabilizer of every
    coordinate character in the support; it is the character by which a
    stabilizing element scales any representative vector of a point here.
    """

    support: tuple
    stabilizer: Subgroup
    scalar_char: CharacterRestriction
    ambient_dim: int

    def representative(self) -> RationalPoint:
        """Canonical member: 1 on every supported coordinate."""
        coords = [Fraction(0)] * (self.ambient_dim + 1)
        for i in self.support:
            coords[i] = Fraction(1)
        return RationalPoint(tuple(coords))

    def __repr__(self):
        return f"Stratum{set(self.support)}"


@dataclass(frozen=True)
class OrbitResult:
    """Orbit of a point: a full point list when the action stays rational,
    otherwise just the size (exact=False)."""

    size: int
    exact: bool
    points: tuple | None  # canonicalized, sorted; None when exact is False


@dataclass(frozen=True)
class ProjectiveAction:
    """Diagonal action of a finite abelian group on P^dim."""

    group: AbelianGroup
    dim: int
    coord_chars: tuple  # n+1 characters of ``group``

    def __post_init__(self):
        if self.dim < 0:
            raise InputError("projective dimension must be >= 0")
        chars = tuple(self.coord_chars)
        object.__setattr__(self, "coord_chars", chars)
        if len(chars) != self.dim + 1:
            raise InputError(
                f"an action on P^{self.dim} needs {self.dim + 1} coordinate characters"
            )
        for c in chars:
            if not isinstance(c, Character) or c.group != self.group:
                raise InputError("coordinate characters must belong to the acting group")

    # -- pointwise data ----------------------------------------------------

    def check_point(self, x: RationalPoint):
        if len(x.coords) != self.dim + 1:
            raise InputError(
                f"point has {len(x.coords)} coordinates, expected {self.dim + 1}"
            )

    def stabilizer(self, x: RationalPoint) -> Subgroup:
        """Stabilizer of [x]: where all supported coordinate characters agree."""
        self.check_point(x)
        return equalizer_subgroup([self.coord_chars[i] for i in x.support])

    def stratum_of_support(self, support) -> Stratum:
        support = tuple(sorted(set(support)))
        if not support:
            raise InputError("a stratum needs a nonempty support")
        if any(i < 0 or i > self.dim for i in support):
            raise InputError(f"support {support} out of range for P^{self.dim}")
        stab = equalizer_subgroup([self.coord_chars[i] for i in support])
        scalar = self.coord_chars[support[0]].restrict(stab)
        return Stratum(support, stab, scalar, self.dim)

    def stratum_of_point(self, x: RationalPoint) -> Stratum:
        self.check_point(x)
        return self.stratum_of_support(x.support)

    def scalar_value(self, g, i: int) -> Fraction | None:
        """chi_i(g) as a rational scalar, or None when it is not +-1."""
        m = self.group.exponent
        e = self.coord_chars[i](g)
        if e == 0:
            return Fraction(1)
        if 2 * e == m:
            return Fraction(-1)
        return None

    def orbit(self, x: RationalPoint) -> OrbitResult:
        """Orbit through x; falls back to size-only when coordinates would
        leave the rationals (some chi_i(g) is a non-real root of unity)."""
        self.check_point(x)
        stab = self.stabilizer(x)
        size = self.group.order // stab.order
        support = x.support
        scalars = {}
        for g in self.group.elements:
            for i in support:
                v = self.scalar_value(g, i)
                if v is None:
                    return OrbitResult(size=size, exact=False, points=None)
                scalars[(g.coords, i)] = v
        seen = set()
        points = []
        for g in self.group.elements:
            coords = tuple(
                scalars[(g.coords, i)] * x.coords[i] if i in support else Fraction(0)
                for i in range(self.dim + 1)
            )
            p = RationalPoint(coords).canonical()
            if p.coords not in seen:
                seen.add(p.coords)
                points.append(p)
        points.sort(key=lambda p: p.coords)
        return OrbitResult(size=len(points), exact=True, points=tuple(points))

    # -- strata ------------------------------------------------------------

    def strata(self) -> tuple:
        """All 2^(n+1) - 1 coordinate-support strata, smallest supports first."""
        if self.dim > MAX_PROJECTIVE_DIM:
            raise InputError(
                f"dim {self.dim} exceeds the supported bound {MAX_PROJECTIVE_DIM} "
                "(strata enumeration is exponential in dim)"
            )
        out = []
        n = self.dim + 1
        for mask in range(1, 1 << n):
            support = tuple(i for i in range(n) if mask & (1 << i))
            out.append(self.stratum_of_support(support))
        out.sort(key=lambda s: (len(s.support), s.support))
        return tuple(out)

    def sample_points(self, stratum: Stratum, count: int, seed: int) -> tuple:
        """Deterministic sample of distinct points with the stratum's support.

        Coordinates are nonzero fractions with numerators in [-9, 9] and
        denominators in [1, 9].  A single-coordinate stratum has exactly one
        point and always yields just that point.
        """
        if count < 1:
            raise InputError("sample count must be >= 1")
        support = stratum.support
        if len(support) == 1:
            return (stratum.representative(),)
        mask = sum(1 << i for i in support)
        rng = random.Random(seed * _SAMPLER_MIX + mask)
        seen = set()
        points = []
        attempts = 0
        while len(points) < count and attempts < 50 * count:
            attempts += 1
            coords = [Fraction(0)] * (self.dim + 1)
            for i in support:
                num = rng.choice([n for n in range(-9, 10) if n != 0])
                den = rng.randint(1, 9)
                coords[i] = Fraction(num, den)
            p = RationalPoint(tuple(coords))
            key = p.canonical().coords
            if key not in seen:
                seen.add(key)
                points.append(p)
        return tuple(points)

    @property
    def is_free_in_codimension_zero(self) -> bool:
        """True when the full-support stratum has trivial stabilizer."""
        return self.stratum_of_support(tuple(range(self.dim + 1))).stabilizer.is_trivial

    def __repr__(self):
        return f"{self.group!r} acting on P^{self.dim} by {list(self.coord_chars)!r}"
