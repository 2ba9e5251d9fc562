"""Bergman densities and two-point kernels of isotypic subspaces.

All evaluations use the unit-norm homogeneous representative carried by
each :class:`~ebk.models.Point`, so the Hermitian norm of ``L^k`` at ``p`` is
just ``|s(z)|^2`` and no gauge factors appear.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ebk.models import Point
from ebk.sections import IsotypicComponent, SectionSpace, _factor_grid

_ZERO = 1e-300


@dataclass(frozen=True)
class DensityResult:
    point: Point
    k: int
    component: str
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("density must be nonnegative")


def describe_component(component: IsotypicComponent) -> str:
    if component.kind == "ladder":
        return f"ladder({component.weight})"
    if component.kind == "full":
        return "full"
    return f"weight({component.weight})"


def _factor_frame_values(d: int, z0, z1) -> np.ndarray:
    """``sqrt((d+1) C(d,i)) z0^(d-i) z1^i`` for ``i = 0..d``; shape ``(..., d+1)``."""
    z0 = np.asarray(z0, dtype=complex)[..., None]
    z1 = np.asarray(z1, dtype=complex)[..., None]
    i = np.arange(d + 1)
    logc = 0.5 * (np.log(d + 1.0) + gammaln(d + 1) - gammaln(i + 1) - gammaln(d - i + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        l0, l1 = np.log(np.abs(z0)), np.log(np.abs(z1))
        # 0 * log(0) contributes 1, not nan
        mag = logc + np.where(d - i > 0, (d - i) * l0, 0.0) + np.where(i > 0, i * l1, 0.0)
    phase = (d - i) * np.angle(z0) + i * np.angle(z1)
    return np.exp(mag + 1j * phase)


def frame_values(space: SectionSpace, points) -> np.ndarray:
    """Orthonormal monomials evaluated at points; shape ``(npoints, dim)``.

    ``points`` is a Point, a list of Points, or a raw ``(npoints, n, 2)``
    coordinate array of unit-norm representatives.
    """
    if isinstance(points, Point):
        coords = points.coords[None]
    elif isinstance(points, (list, tuple)) and points and isinstance(points[0], Point):
        coords = np.stack([p.coords for p in points])
    else:
        coords = np.asarray(points, dtype=complex)
    if coords.shape[1] != space.model.n:
        raise ValueError(f"points have {coords.shape[1]} factors, model has {space.model.n}")
    out = np.ones((len(coords), 1), dtype=complex)
    for f, d in enumerate(space.degrees):
        vf = _factor_frame_values(d, coords[:, f, 0], coords[:, f, 1])
        out = (out[:, :, None] * vf[:, None, :]).reshape(len(coords), -1)
    return out


def pointwise_norm_sq(space: SectionSpace, coeff_vector, p: Point) -> float:
    """``||s(p)||^2`` for the section with monomial coefficients ``coeff_vector``."""
    c = np.asarray(coeff_vector, dtype=complex)
    if c.shape != (space.dim,):
        raise ValueError(f"coefficient vector must have length {space.dim}")
    e = frame_values(space, p)[0]
    val = np.dot(c * np.exp(0.5 * space.log_gram), e)
    return float(abs(val) ** 2)


def _check_component(space: SectionSpace, component: IsotypicComponent):
    if component.space is not space and component.coeffs.shape[0] != space.dim:
        raise ValueError("component does not belong to this space")


def section_values(space: SectionSpace, component: IsotypicComponent, points) -> np.ndarray:
    """Values ``s_j(p)`` of the component's orthonormal basis, ``(npoints, ncols)``."""
    _check_component(space, component)
    e = frame_values(space, points)
    return np.asarray((component.coeffs.T @ e.T).T)


def density_values(space: SectionSpace, component: IsotypicComponent, points) -> np.ndarray:
    """Vectorized density over many points."""
    if component.ncols == 0:
        n = 1 if isinstance(points, Point) else len(points)
        return np.zeros(n)
    s = section_values(space, component, points)
    return np.sum(np.abs(s) ** 2, axis=1)


def density(space: SectionSpace, component: IsotypicComponent, p: Point) -> DensityResult:
    """``nu(p) = sum_j ||s_j(p)||^2`` over an orthonormal basis of the component."""
    value = float(density_values(space, component, p)[0])
    return DensityResult(p, space.k, describe_component(component), value)


def ladder_density(space: SectionSpace, ladder: IsotypicComponent, p: Point) -> DensityResult:
    if ladder.kind != "ladder":
        raise ValueError("expected a ladder component")
    return density(space, ladder, p)


def two_point_kernel(space: SectionSpace, component: IsotypicComponent, p: Point, q: Point) -> complex:
    """``sum_j s_j(p) conj(s_j(q))`` in the normalized frames of ``p`` and ``q``."""
    if component.ncols == 0:
        return 0j
    s = section_values(space, component, [p, q])
    return complex(np.dot(s[0], s[1].conj()))


def monomial_density_p1(k: int, i: int, t):
    """Density of the line spanned by ``z0^(k-i) z1^i`` on ``P^1`` at ``|z1|^2 = t``.

    Evaluated in log space; valid for large ``k``.
    """
    t = np.asarray(t, dtype=float)
    logc = np.log(k + 1.0) + gammaln(k + 1) - gammaln(i + 1) - gammaln(k - i + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        lt = np.where(i > 0, i * np.log(t), 0.0)
        l1 = np.where(k - i > 0, (k - i) * np.log1p(-t), 0.0)
    return np.exp(logc + lt + l1)


def grid_points(n_factors: int, order: int):
    """Product quadrature grid on the model: coordinates ``(N, n, 2)`` and
    weights summing to one (normalized volume per factor)."""
    z0, z1, w = _factor_grid(order)
    pts = np.stack([z0, z1], axis=-1)
    if n_factors == 1:
        return pts[:, None, :], w
    A = np.repeat(pts, len(pts), axis=0)
    B = np.tile(pts, (len(pts), 1))
    return np.stack([A, B], axis=1), np.outer(w, w).reshape(-1)


def density_integral(space: SectionSpace, component: IsotypicComponent, order: int | None = None,
                     chunk: int = 20000) -> float:
    """Integral of the density over M against the normalized volume.

    Equals the dimension of the component; the rule is exact once ``order``
    exceeds every factor degree.
    """
    if order is None:
        order = max(space.degrees) + 2
    pts, w = grid_points(space.model.n, order)
    total = 0.0
    for start in range(0, len(pts), chunk):
        sl = slice(start, start + chunk)
        total += float(density_values(space, component, pts[sl]) @ w[sl])
    return total


def random_points(rng: np.random.Generator, n_factors: int, size: int) -> list:
    """Points drawn from the normalized volume of each factor."""
    t = rng.uniform(size=(size, n_factors))
    ph = rng.uniform(0, 2 * np.pi, size=(size, n_factors))
    return [Point.from_t(*t[j], phases=ph[j]) for j in range(size)]


def is_zero(value: float) -> bool:
    return value < _ZERO


__all__ = [
    "DensityResult",
    "density",
    "density_integral",
    "density_values",
    "frame_values",
    "ladder_density",
    "monomial_density_p1",
    "pointwise_norm_sq",
    "random_points",
    "two_point_kernel",
]
