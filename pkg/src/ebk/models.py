"""Model polarized manifolds: P^1 and P^1 x P^1 with Hamiltonian actions.

Conventions
-----------
Each factor carries the Fubini-Study form normalized to total volume 1 per
unit of polarization.  For a point ``[z0:z1]`` put ``t = |z1|^2`` on the
unit-norm representative; the normalized volume pushes forward to ``dt`` on
``[0, 1]`` (Archimedes), times the uniform measure in ``arg z1``.

Torus actions rotate ``z1`` of factor ``f`` with integer weight ``W[:, f]``.
The moment map is ``sum_f a_f W[:, f] t_f - shift``, so that at level ``k``
the weight of the monomial with exponents ``i_f`` of ``z1`` is
``sum_f W[:, f] i_f - k shift``: a lattice point of ``k Phi(M)``.

SU(2) acts diagonally.  Sections transform by ``s(z) -> s(U^T z)``, which is
the pullback under the point action ``z -> conj(U) z``; this makes ``z0^d``
the highest weight vector.  The moment map sends a weight-``a`` factor onto
the sphere of radius ``a`` through the Hopf map.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ebk import groups
from ebk.groups import GroupSpec

_UNIT_TOL = 1e-12
_DIAGONAL_TOL = 1e-9


@dataclass(frozen=True)
class ModelManifold:
    """``P^1`` (one factor) or ``P^1 x P^1`` polarized by ``H^a`` or ``H^a [x] H^b``."""

    polarization: tuple

    def __post_init__(self):
        pol = tuple(int(a) for a in self.polarization)
        if len(pol) not in (1, 2):
            raise ValueError("models have one or two P^1 factors")
        if any(a < 1 for a in pol):
            raise ValueError(f"polarization weights must be >= 1, got {pol}")
        object.__setattr__(self, "polarization", pol)

    @property
    def n(self) -> int:
        """Complex dimension."""
        return len(self.polarization)

    @property
    def factors(self) -> int:
        return len(self.polarization)

    def degrees(self, k: int) -> tuple:
        return tuple(a * k for a in self.polarization)

    def label(self) -> str:
        return "P1" if self.n == 1 else "P1xP1"

    def describe(self) -> str:
        return f"{self.label()}({','.join(map(str, self.polarization))})"


def _as_fraction(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**6)
    return Fraction(x)


@dataclass(frozen=True)
class ActionSpec:
    """Group action on a model plus the linearization on the line bundle.

    ``weights`` is the integer ``rank x n`` matrix of a torus action (``None``
    for SU(2)); ``shift`` is one rational per torus generator.
    """

    group: GroupSpec
    weights: tuple | None = None
    shift: tuple = field(default=())

    def __post_init__(self):
        if self.group.kind == groups.SU2:
            if self.weights is not None or any(self.shift):
                raise ValueError("SU(2) acts diagonally; no weight matrix or shift")
            object.__setattr__(self, "shift", ())
            return
        if self.weights is None:
            raise ValueError("torus actions need a weight matrix")
        W = tuple(tuple(int(w) for w in row) for row in self.weights)
        if len(W) != self.group.rank or len({len(r) for r in W}) != 1:
            raise ValueError(f"weight matrix must be {self.group.rank} x n")
        shift = tuple(_as_fraction(b) for b in self.shift) if self.shift else (Fraction(0),) * len(W)
        if len(shift) != len(W):
            raise ValueError("need one shift per torus generator")
        object.__setattr__(self, "weights", W)
        object.__setattr__(self, "shift", shift)

    @classmethod
    def circle(cls, weights: Sequence[int], shift=0) -> "ActionSpec":
        return cls(GroupSpec.circle(), (tuple(weights),), (shift,))

    @classmethod
    def torus(cls, weights, shift=None) -> "ActionSpec":
        weights = tuple(tuple(r) for r in weights)
        return cls(GroupSpec.torus(len(weights)), weights, tuple(shift) if shift is not None else ())

    @classmethod
    def su2_diagonal(cls) -> "ActionSpec":
        return cls(GroupSpec.su2())

    @property
    def is_su2(self) -> bool:
        return self.group.kind == groups.SU2

    @property
    def shift_denominator(self) -> int:
        d = 1
        for b in self.shift:
            d = d * b.denominator // math.gcd(d, b.denominator)
        return d

    @property
    def weight_matrix(self) -> np.ndarray:
        return np.array(self.weights, dtype=np.int64)

    def describe(self) -> str:
        if self.is_su2:
            return "SU2-diagonal"
        W = ";".join(",".join(map(str, r)) for r in self.weights)
        b = ",".join(str(s) for s in self.shift)
        return f"{self.group.kind}[W={W};shift={b}]"


def check_compatible(model: ModelManifold, action: ActionSpec) -> None:
    if action.is_su2:
        return
    if len(action.weights[0]) != model.n:
        raise ValueError(f"weight matrix has {len(action.weights[0])} columns but model has {model.n} factors")


def check_level(action: ActionSpec | None, k: int) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"level must be a nonnegative integer, got {k!r}")
    k = int(k)
    if action is not None and k % action.shift_denominator:
        raise ValueError(f"level {k} not divisible by shift denominator {action.shift_denominator}")
    return k


# --- points ----------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Point:
    """A point of the model, one unit-norm homogeneous pair per factor.

    ``coords`` has shape ``(n, 2)``.  ``exact_t`` optionally records the
    rational value of ``|z1|^2`` per factor for named points.
    """

    coords: np.ndarray
    exact_t: tuple | None = None

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coords, dtype=complex))
        if c.shape[1] != 2:
            raise ValueError("each factor needs a homogeneous pair (z0, z1)")
        norms = np.linalg.norm(c, axis=1)
        if np.any(norms == 0):
            raise ValueError("homogeneous coordinates cannot all vanish")
        if np.any(np.abs(norms - 1) > _UNIT_TOL):
            c = c / norms[:, None]
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_homogeneous(cls, *pairs) -> "Point":
        return cls(np.array(pairs, dtype=complex))

    @classmethod
    def from_t(cls, *ts, phases=None) -> "Point":
        """Point with ``|z1|^2 = t`` per factor and real ``z0 >= 0``."""
        phases = phases if phases is not None else (0.0,) * len(ts)
        coords = [(math.sqrt(1 - float(t)), math.sqrt(float(t)) * np.exp(1j * ph)) for t, ph in zip(ts, phases)]
        exact = tuple(Fraction(t) for t in ts) if all(isinstance(t, (int, Fraction)) for t in ts) else None
        return cls(np.array(coords, dtype=complex), exact)

    @property
    def n(self) -> int:
        return self.coords.shape[0]

    @property
    def t(self) -> np.ndarray:
        return np.abs(self.coords[:, 1]) ** 2


def hopf(z) -> np.ndarray:
    z0, z1 = z
    w = np.conj(z0) * z1
    return np.array([2 * w.real, 2 * w.imag, abs(z0) ** 2 - abs(z1) ** 2])


_NAMED_T = {"north": Fraction(0), "south": Fraction(1)}
OFFDIAG_SAMPLE = ((0.3, 0.7), (0.8, 2.1))


def named_point(name: str, n: int) -> Point:
    """Resolve ``north``, ``south``, ``t=<value>`` (same on every factor) or
    ``offdiag-sample`` (a fixed generic point off the diagonal of P^1 x P^1)."""
    name = name.strip()
    if name == "offdiag-sample":
        if n != 2:
            raise ValueError("offdiag-sample needs a two-factor model")
        (t1, p1), (t2, p2) = OFFDIAG_SAMPLE
        return Point.from_t(t1, t2, phases=(p1, p2))
    if name in _NAMED_T:
        t = _NAMED_T[name]
    elif name.startswith("t="):
        t = Fraction(name[2:])
    else:
        raise ValueError(f"unknown point name {name!r}")
    if not 0 <= t <= 1:
        raise ValueError(f"t must lie in [0, 1], got {t}")
    return Point.from_t(*([t] * n))


def act_on_point(action: ActionSpec, g, p: Point) -> Point:
    """Point action compatible with the representation on sections."""
    if action.is_su2:
        U = np.conj(groups.quaternion_to_matrix(groups.check_su2_element(g)))
        return Point((U @ p.coords.T).T)
    theta = np.atleast_1d(np.asarray(g, dtype=float))
    phase = theta @ action.weight_matrix  # one rotation angle per factor
    c = p.coords.copy()
    c[:, 1] = c[:, 1] * np.exp(-1j * phase)
    return Point(c, p.exact_t)


def coadjoint(action: ActionSpec, g, xi) -> np.ndarray:
    """Coadjoint action on the dual Lie algebra (trivial for tori)."""
    xi = np.asarray(xi, dtype=float)
    if not action.is_su2:
        return xi.copy()
    w, x, y, z = groups.check_su2_element(g)
    # the point action goes through conj(U), whose quaternion is (w, -x, y, -z)
    return groups.so3_rotation(np.array([w, -x, y, -z])) @ xi


# --- moment maps -----------------------------------------------------------

def torus_moment_from_t(model: ModelManifold, action: ActionSpec, ts) -> list:
    """Torus moment map as a function of ``t_f = |z1_f|^2``.

    Works in exact arithmetic when the ``ts`` are Fractions.
    """
    out = []
    for row, beta in zip(action.weights, action.shift):
        val = -beta
        for a, w, t in zip(model.polarization, row, ts):
            val = val + a * w * t
        out.append(val)
    return out


def moment_map(model: ModelManifold, action: ActionSpec, p: Point) -> np.ndarray:
    check_compatible(model, action)
    if p.n != model.n:
        raise ValueError(f"point has {p.n} factors, model has {model.n}")
    if action.is_su2:
        return sum(a * hopf(z) for a, z in zip(model.polarization, p.coords))
    ts = p.exact_t if p.exact_t is not None else p.t
    return np.array([float(v) for v in torus_moment_from_t(model, action, ts)])


def scaled_moment(model: ModelManifold, action: ActionSpec, p: Point, k: int) -> np.ndarray:
    """Moment map of ``L^k``: ``k`` times :func:`moment_map`."""
    k = check_level(action, k)
    return k * moment_map(model, action, p)


ZERO_LEVEL = "zero"
RAY = "ray"
CONE = "cone"


@dataclass(frozen=True)
class Locus:
    kind: str
    weight: object = None

    @classmethod
    def zero_level(cls) -> "Locus":
        return cls(ZERO_LEVEL)

    @classmethod
    def ray(cls, omega) -> "Locus":
        return cls(RAY, omega)

    @classmethod
    def cone_over_orbit(cls, omega) -> "Locus":
        return cls(CONE, omega)


@dataclass(frozen=True)
class LocusReport:
    distance: float
    interior: bool


def _ray_distance(x: np.ndarray, direction: np.ndarray) -> float:
    u = direction / np.linalg.norm(direction)
    s = float(x @ u)
    if s <= 0:
        return float(np.linalg.norm(x))
    return float(np.linalg.norm(x - s * u))


def locus_distance(model: ModelManifold, action: ActionSpec, p: Point, locus: Locus) -> LocusReport:
    """Distance in the dual Lie algebra from ``Phi(p)`` to a closed locus.

    For SU(2) the cone over a nonzero coadjoint orbit is ``R^3 minus 0``,
    whose closure is everything: the distance is 0 and ``interior`` reports
    whether ``Phi(p) != 0``.
    """
    x = moment_map(model, action, p)
    if locus.kind == ZERO_LEVEL:
        d = float(np.linalg.norm(x))
        return LocusReport(d, d == 0.0)
    omega = groups.check_weight(action.group, locus.weight)
    direction = groups.weight_vector(action.group, omega)
    if not np.any(direction):
        raise ValueError("ray and cone need a nonzero weight")
    if locus.kind == CONE and action.is_su2:
        return LocusReport(0.0, bool(np.linalg.norm(x) > 0))
    if locus.kind not in (RAY, CONE):
        raise ValueError(f"unknown locus {locus.kind!r}")
    d = _ray_distance(x, direction)
    return LocusReport(d, d == 0.0 and bool(np.linalg.norm(x) > 0))


def is_excluded_point(model: ModelManifold, action: ActionSpec, p: Point) -> bool:
    """True on the diagonal of P^1 x P^1, the null set excluded for the
    SU(2) ladder statements."""
    if model.n != 2 or not action.is_su2:
        raise ValueError("diagonal exclusion applies to P^1 x P^1 with the SU(2) action")
    (z0, z1), (w0, w1) = p.coords
    return bool(abs(z0 * w1 - z1 * w0) < _DIAGONAL_TOL)
