"""Large-k behaviour of density and multiplicity series.

Power laws are fitted on log-log scale; the refined exponent comes from
pairwise log-log slopes on the top half of the window, extrapolated linearly
in ``1/k`` to remove the first correction term of a ``k^a (c0 + c1/k + ...)``
expansion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ebk import groups
from ebk.kernels import density
from ebk.models import (
    ActionSpec,
    Locus,
    ModelManifold,
    Point,
    check_level,
    is_excluded_point,
    locus_distance,
)
from ebk.sections import (
    build_space,
    group_action_matrix,
    isotypic_decompose,
    weight_multiplicities,
)

ZERO_THRESHOLD = 1e-300
RAPID_SPREAD = 0.10
_ON_LOCUS_TOL = 1e-9


@dataclass(frozen=True)
class SeriesSample:
    k: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        k = np.asarray(self.k, dtype=np.int64)
        v = np.asarray(self.values, dtype=float)
        if k.ndim != 1 or k.shape != v.shape:
            raise ValueError("k and values must be 1-d arrays of equal length")
        if np.any(np.diff(k) <= 0):
            raise ValueError("k must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_pairs(cls, pairs) -> "SeriesSample":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])

    def __len__(self):
        return len(self.k)

    def nonzero(self) -> "SeriesSample":
        keep = self.values >= ZERO_THRESHOLD
        return SeriesSample(self.k[keep], self.values[keep])


@dataclass(frozen=True)
class AsymptoticFit:
    exponent: float
    coefficient: float
    residual_rms: float
    window: tuple
    richardson_exponent: float


def _top_half(n: int, fraction: float = 0.5) -> slice:
    start = min(int(n * (1 - fraction)), n - 3) if n >= 3 else 0
    return slice(max(start, 0), n)


def _extrapolate_in_inverse_k(kmid: np.ndarray, slopes: np.ndarray) -> float:
    if len(slopes) == 1:
        return float(slopes[0])
    A = np.stack([np.ones_like(kmid), 1.0 / kmid], axis=1)
    coef, *_ = np.linalg.lstsq(A, slopes, rcond=None)
    return float(coef[0])


def fit_power_law(samples: SeriesSample, window_fraction: float = 0.5) -> AsymptoticFit:
    """Fit ``v_k ~ c k^a``.

    ``exponent`` is the least-squares slope of ``log v`` against ``log k``
    over all samples; ``richardson_exponent`` extrapolates successive slopes
    on the top part of the window in ``1/k``; ``coefficient`` is
    ``v / k^richardson_exponent`` at the largest ``k``.
    """
    if len(samples) < 4:
        raise ValueError("need at least 4 samples")
    if np.any(samples.values <= 0):
        raise ValueError("power-law fit needs positive values; classify decay first")
    lk = np.log(samples.k.astype(float))
    lv = np.log(samples.values)
    slope, intercept = np.polyfit(lk, lv, 1)
    resid = lv - (slope * lk + intercept)
    top = _top_half(len(samples), window_fraction)
    lk_w, lv_w = lk[top], lv[top]
    pair_slopes = np.diff(lv_w) / np.diff(lk_w)
    kmid = np.exp(0.5 * (lk_w[1:] + lk_w[:-1]))
    rich = _extrapolate_in_inverse_k(kmid, pair_slopes)
    coefficient = float(np.exp(lv[-1] - rich * lk[-1]))
    return AsymptoticFit(
        exponent=float(slope),
        coefficient=coefficient,
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        window=(int(samples.k[top][0]), int(samples.k[-1])),
        richardson_exponent=rich,
    )


RAPID = "rapid"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class DecayVerdict:
    """``kind`` is ``"rapid"`` (``value`` = log-slope per unit ``k``) or
    ``"polynomial"`` (``value`` = fitted exponent)."""

    kind: str
    value: float
    low_confidence: bool = False
    identically_zero: bool = False
    zero_levels: tuple = ()

    def __post_init__(self):
        if self.kind == RAPID and not self.value < 0:
            raise ValueError("rapid decay needs a negative log-slope")

    @property
    def is_rapid(self) -> bool:
        return self.kind == RAPID


def classify_decay(samples: SeriesSample) -> DecayVerdict:
    """Tell exponential-type decay from polynomial behaviour.

    The discrete log-derivative ``d log v / dk`` is computed on the top half
    of the window.  If it is negative throughout and its relative spread is
    below 10%, the series decays at a fixed exponential rate and the
    rate (extrapolated in ``1/k``) is reported.  Exact zeros (< 1e-300) are
    set aside; an identically-zero series counts as decayed.
    """
    if len(samples) < 6:
        raise ValueError("need at least 6 samples")
    zeros = tuple(int(k) for k in samples.k[samples.values < ZERO_THRESHOLD])
    live = samples.nonzero()
    if len(live) == 0:
        return DecayVerdict(RAPID, -math.inf, identically_zero=True, zero_levels=zeros)
    if len(live) < 6:
        return DecayVerdict(POLYNOMIAL, math.nan, low_confidence=True, zero_levels=zeros)
    k = live.k.astype(float)
    lv = np.log(live.values)
    top = _top_half(len(live))
    kt, lt = k[top], lv[top]
    per_k = np.diff(lt) / np.diff(kt)
    kmid = 0.5 * (kt[1:] + kt[:-1])
    mean = per_k.mean()
    spread = (per_k.max() - per_k.min()) / abs(mean) if mean != 0 else math.inf
    if np.all(per_k < 0) and spread < RAPID_SPREAD:
        rate = _extrapolate_in_inverse_k(kmid, per_k)
        if rate < 0:
            return DecayVerdict(RAPID, rate, zero_levels=zeros)
    loglog = np.diff(lv) / np.diff(np.log(k))
    signs = np.sign(loglog[np.abs(loglog) > 1e-12])
    oscillating = len(signs) > 1 and np.any(signs[1:] != signs[:-1])
    fit = fit_power_law(live)
    return DecayVerdict(POLYNOMIAL, fit.richardson_exponent, low_confidence=bool(oscillating), zero_levels=zeros)


# --- predictions -------------------------------------------------------------

@dataclass(frozen=True)
class Ladder:
    """Target marker: the ladder generated by ``weight``."""

    weight: object


@dataclass(frozen=True)
class Prediction:
    exponent: float
    coefficient: float | None
    statement: str


def _on_zero_level(model, action, p) -> bool:
    return locus_distance(model, action, p, Locus.zero_level()).distance < _ON_LOCUS_TOL


def _p1_circle_zero_point(model: ModelManifold, action: ActionSpec):
    """``t`` of the zero level for the weight-one circle on ``P^1(1)``, else None."""
    if model.polarization != (1,) or action.group.kind != groups.CIRCLE or action.weights != ((1,),):
        return None
    beta = action.shift[0]
    if 0 < beta < 1:
        return beta
    return None


def predict_leading(model: ModelManifold, action: ActionSpec, target, p: Point | None = None,
                    quantity: str = "density") -> Prediction:
    """Leading power of ``k`` (and, where known in closed form, the constant).

    * ``quantity="density"`` with a single weight: ``k^(n - g/2)`` on the zero
      level of the moment map.  For the weight-one circle on ``P^1`` with
      shift ``beta`` the constant is ``dim(V)^2 / sqrt(2 pi beta (1-beta))``.
    * ``quantity="density"`` with a :class:`Ladder`: ``k^n`` on the preimage of
      the cone over the coadjoint orbit.
    * ``quantity="multiplicity"``: ``dim H^0_omega ~ k^(n - g)``.
    """
    n, g = model.n, action.group.dim_g
    G = action.group
    if quantity == "multiplicity":
        groups.check_weight(G, target.weight if isinstance(target, Ladder) else target)
        return Prediction(float(n - g), None, "multiplicity")
    if quantity != "density":
        raise ValueError("quantity must be 'density' or 'multiplicity'")
    if p is None:
        raise ValueError("density predictions need a point")
    if isinstance(target, Ladder):
        omega = groups.check_weight(G, target.weight)
        rep = locus_distance(model, action, p, Locus.cone_over_orbit(omega))
        if rep.distance > _ON_LOCUS_TOL or not rep.interior:
            raise ValueError("point is off the cone locus of the ladder")
        if action.is_su2 and model.n == 2 and is_excluded_point(model, action, p):
            raise ValueError("point lies on the excluded diagonal")
        return Prediction(float(n), None, "ladder")
    omega = groups.check_weight(G, target)
    if not _on_zero_level(model, action, p):
        raise ValueError("point is off the zero level of the moment map")
    dim = groups.irrep_dim(G, omega)
    coefficient = None
    beta = _p1_circle_zero_point(model, action)
    if beta is not None:
        b = float(beta)
        coefficient = dim**2 / math.sqrt(2 * math.pi * b * (1 - b))
    return Prediction(n - g / 2, coefficient, "isotypic")


# --- multiplicities ----------------------------------------------------------

@dataclass(frozen=True)
class MultiplicitySeries:
    dims: SeriesSample
    multiplicities: tuple
    trivial_multiplicities: tuple
    ratios: tuple  # None where there is no trivial component

    def defined_ratios(self):
        return [(int(k), r) for k, r in zip(self.dims.k, self.ratios) if r is not None]


def multiplicity_series(model: ModelManifold, action: ActionSpec, omega, k_list) -> MultiplicitySeries:
    """``dim H^0(M, L^k)_omega`` over ``k_list`` with the companion ratio
    ``mu_{omega,k} / mu_{0,k}`` (``None`` where ``mu_{0,k} = 0``)."""
    G = action.group
    omega = groups.check_weight(G, omega)
    zero = groups.check_weight(G, 0 if G.kind == groups.SU2 else (0,) * G.rank)
    dims, mults, trivial, ratios = [], [], [], []
    for k in k_list:
        check_level(action, k)
        table = weight_multiplicities(build_space(model, k, action))
        mu = table.get(omega, 0)
        mu0 = table.get(zero, 0)
        mults.append(mu)
        trivial.append(mu0)
        dims.append(mu * groups.irrep_dim(G, omega))
        ratios.append(mu / mu0 if mu0 > 0 else None)
    return MultiplicitySeries(SeriesSample(list(k_list), dims), tuple(mults), tuple(trivial), tuple(ratios))


# --- finite stabilizers --------------------------------------------------------

@dataclass(frozen=True)
class SelectionRow:
    k: int
    density: float
    nonzero: bool
    pairing: complex
    predicted_nonzero: bool


@dataclass(frozen=True)
class SelectionRuleReport:
    stabilizer_order: int
    rows: tuple
    consistent: bool
    fit: AsymptoticFit | None = field(default=None)

    def surviving(self) -> SeriesSample:
        return SeriesSample([r.k for r in self.rows if r.nonzero], [r.density for r in self.rows if r.nonzero])


def stabilizer_pairing(space, omega, m0: int) -> complex:
    """``sum_{g in Z_m0} chi_omega(g) conj(alpha_p^k(g))`` on the zero level.

    ``alpha_p^k(g)`` is read off ``rho_k(g)``: on the stabilizer every
    section not vanishing at ``p`` picks up the same phase.
    """
    G = space.action.group
    total = 0j
    for j in range(m0):
        theta = np.array([2 * np.pi * j / m0])
        alpha = group_action_matrix(space, theta)[0, 0]
        total += groups.character(G, omega, theta) * np.conj(alpha)
    return complex(total)


def selection_rule_check(model: ModelManifold, action: ActionSpec, omega, k_list, p: Point) -> SelectionRuleReport:
    """Compare where the omega-density at ``p`` is nonzero with where the
    stabilizer pairing is nonzero, for a circle acting on ``P^1`` with
    coordinate weight ``m0``; fit the growth of the surviving subsequence."""
    if model.n != 1 or action.group.kind != groups.CIRCLE:
        raise ValueError("selection rule check needs a circle action on P^1")
    m0 = abs(action.weights[0][0])
    a = model.polarization[0]
    t0 = action.shift[0] / (a * action.weights[0][0]) if m0 else None
    if t0 is None or not 0 < t0 < 1:
        raise ValueError("0 is not a regular value of the moment map for this shift")
    if not _on_zero_level(model, action, p):
        raise ValueError("point is off the zero level")
    omega = groups.check_weight(action.group, omega)
    rows = []
    for k in k_list:
        space = build_space(model, k, action)
        comps = isotypic_decompose(space, weights=[omega])
        value = density(space, comps[0], p).value if comps else 0.0
        pairing = stabilizer_pairing(space, omega, m0)
        rows.append(SelectionRow(int(k), value, value >= ZERO_THRESHOLD, pairing, abs(pairing) > 1e-9))
    consistent = all(r.nonzero == r.predicted_nonzero for r in rows)
    report = SelectionRuleReport(m0, tuple(rows), consistent)
    surv = report.surviving()
    fit = fit_power_law(surv) if len(surv) >= 4 else None
    return SelectionRuleReport(m0, tuple(rows), consistent, fit)
