"""Compact groups used by the models: the circle, tori of rank g, and SU(2).

Weights are exact integers.  A torus weight is a tuple of ints of length
``rank``; an SU(2) weight is the nonnegative highest weight ``m`` of
``Sym^m``.  SU(2) elements are unit quaternions ``(w, x, y, z)`` standing for
the matrix ``[[a, -conj(b)], [b, conj(a)]]`` with ``a = w + ix``, ``b = y + iz``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

CIRCLE = "circle"
TORUS = "torus"
SU2 = "su2"

_SERIES_CUTOFF = 1e-4

Weight = Union[int, tuple]


@dataclass(frozen=True)
class GroupSpec:
    """A supported compact connected group.

    Parameters
    ----------
    kind : {"circle", "torus", "su2"}
    rank : int
        Rank of the torus.  Forced to 1 for the circle and SU(2).
    """

    kind: str
    rank: int = 1

    def __post_init__(self):
        if self.kind not in (CIRCLE, TORUS, SU2):
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind in (CIRCLE, SU2) and self.rank != 1:
            raise ValueError(f"{self.kind} has rank 1, got {self.rank}")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")

    @classmethod
    def circle(cls) -> "GroupSpec":
        return cls(CIRCLE, 1)

    @classmethod
    def torus(cls, rank: int) -> "GroupSpec":
        return cls(TORUS, int(rank))

    @classmethod
    def su2(cls) -> "GroupSpec":
        return cls(SU2, 1)

    @property
    def is_abelian(self) -> bool:
        return self.kind != SU2

    @property
    def dim_g(self) -> int:
        """Real dimension of the group."""
        return 3 if self.kind == SU2 else self.rank


def check_weight(G: GroupSpec, omega) -> Weight:
    """Normalize ``omega`` to the canonical weight label for ``G``.

    Torus weights come back as tuples of Python ints, SU(2) weights as an int.
    Raises ``ValueError`` on a kind mismatch or a non-dominant SU(2) label.
    """
    if G.kind == SU2:
        if isinstance(omega, (tuple, list, np.ndarray)):
            raise ValueError("SU(2) weight must be a single nonnegative integer")
        if int(omega) != omega:
            raise ValueError(f"weight {omega!r} is not integral")
        m = int(omega)
        if m < 0:
            raise ValueError(f"SU(2) weight must be >= 0, got {m}")
        return m
    if np.isscalar(omega):
        omega = (omega,)
    omega = tuple(omega)
    if len(omega) != G.rank:
        raise ValueError(f"torus of rank {G.rank} needs a weight of length {G.rank}, got {omega!r}")
    if any(int(w) != w for w in omega):
        raise ValueError(f"weight {omega!r} is not integral")
    return tuple(int(w) for w in omega)


def irrep_dim(G: GroupSpec, omega) -> int:
    omega = check_weight(G, omega)
    if G.kind == SU2:
        return omega + 1
    return 1


# --- SU(2) elements --------------------------------------------------------

def su2_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quaternion_to_matrix(q) -> np.ndarray:
    w, x, y, z = np.asarray(q, dtype=float)
    a, b = complex(w, x), complex(y, z)
    return np.array([[a, -b.conjugate()], [b, a.conjugate()]])


def matrix_to_quaternion(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    a, b = U[0, 0], U[1, 0]
    q = np.array([a.real, a.imag, b.real, b.imag])
    return q / np.linalg.norm(q)


def check_su2_element(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise ValueError("SU(2) element must be a quaternion of 4 reals")
    if abs(np.linalg.norm(q) - 1.0) > 1e-12:
        raise ValueError("SU(2) quaternion must have unit norm")
    return q


def quaternion_multiply(p, q) -> np.ndarray:
    """Hamilton product, matching matrix multiplication of the SU(2) images."""
    return matrix_to_quaternion(quaternion_to_matrix(p) @ quaternion_to_matrix(q))


def quaternion_inverse(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([w, -x, -y, -z])


def random_su2(rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Haar-random unit quaternions (uniform on S^3)."""
    shape = (4,) if size is None else (size, 4)
    q = rng.standard_normal(shape)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def conjugacy_angle(q) -> float:
    """Angle t in [0, pi] with eigenvalues exp(+-it)."""
    return float(np.arccos(np.clip(np.asarray(q, dtype=float)[0], -1.0, 1.0)))


def _su2_character(m: int, t):
    t = np.asarray(t, dtype=float)
    n = m + 1
    small = np.abs(t) < _SERIES_CUTOFF
    # sin(n t)/sin(t) is even in t and also singular at t = pi
    near_pi = np.abs(t - np.pi) < _SERIES_CUTOFF
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.sin(n * t) / np.sin(t)
    if np.any(small | near_pi):
        s = np.where(near_pi, np.pi - t, t) ** 2
        series = n * (1 - (n * n - 1) * s / 6 + (n * n - 1) * (3 * n * n - 7) * s * s / 360)
        sign = np.where(near_pi, (-1.0) ** m, 1.0)
        out = np.where(small | near_pi, sign * series, out)
    return out


def character(G: GroupSpec, omega, g) -> complex:
    """Character of the irreducible representation ``omega`` at ``g``."""
    omega = check_weight(G, omega)
    if G.kind == SU2:
        q = check_su2_element(g)
        return complex(_su2_character(omega, conjugacy_angle(q)))
    theta = np.atleast_1d(np.asarray(g, dtype=float))
    if theta.shape != (G.rank,):
        raise ValueError(f"torus element must be {G.rank} angles")
    return complex(np.exp(1j * np.dot(omega, theta)))


def character_array(G: GroupSpec, omega, elements: np.ndarray) -> np.ndarray:
    """Vectorized :func:`character` over a stack of elements."""
    omega = check_weight(G, omega)
    elements = np.asarray(elements, dtype=float)
    if G.kind == SU2:
        t = np.arccos(np.clip(elements[..., 0], -1.0, 1.0))
        return _su2_character(omega, t).astype(complex)
    elements = elements.reshape(-1, G.rank)
    return np.exp(1j * elements @ np.asarray(omega, dtype=float))


# --- Haar quadrature -------------------------------------------------------

def equispaced_angles(order: int) -> np.ndarray:
    return 2 * np.pi * np.arange(order) / order


@dataclass(frozen=True)
class SU2Rule:
    """Product rule in Hopf coordinates.

    ``a = sqrt(u) e^{i xi1}``, ``b = sqrt(1-u) e^{i xi2}``.  Haar measure
    pushes forward to the uniform measure in ``u`` and in both phases, so
    Gauss-Legendre in ``u`` times equispaced phases is exact on every matrix
    coefficient of ``Sym^m`` for ``m < order``.
    """

    u: np.ndarray
    u_weights: np.ndarray
    phases: np.ndarray

    def elements(self) -> tuple[np.ndarray, np.ndarray]:
        U, X1, X2 = np.meshgrid(self.u, self.phases, self.phases, indexing="ij")
        W = np.broadcast_to(self.u_weights[:, None, None], U.shape) / len(self.phases) ** 2
        ra, rb = np.sqrt(U), np.sqrt(1 - U)
        q = np.stack([ra * np.cos(X1), ra * np.sin(X1), rb * np.cos(X2), rb * np.sin(X2)], axis=-1)
        return q.reshape(-1, 4), W.reshape(-1)


def su2_rule(order: int) -> SU2Rule:
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = np.polynomial.legendre.leggauss(order)
    return SU2Rule(u=(x + 1) / 2, u_weights=w / 2, phases=equispaced_angles(order))


def haar_quadrature(G: GroupSpec, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature rule for the normalized Haar measure.

    Returns ``(elements, weights)``: an array of group elements (angle vectors
    of shape ``(N, rank)`` for tori, quaternions of shape ``(N, 4)`` for SU(2))
    and the matching weights, which sum to one.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    if G.kind == SU2:
        return su2_rule(order).elements()
    grids = np.meshgrid(*[equispaced_angles(order)] * G.rank, indexing="ij")
    elements = np.stack([g.reshape(-1) for g in grids], axis=-1)
    weights = np.full(len(elements), 1.0 / order**G.rank)
    return elements, weights


def clebsch_gordan_mult(a: int, b: int, m: int) -> int:
    """Multiplicity of ``Sym^m`` inside ``Sym^a (x) Sym^b``."""
    if abs(a - b) <= m <= a + b and (a + b - m) % 2 == 0:
        return 1
    return 0


# --- randomized check that C + H is nonsingular -------------------------

def random_symmetric_hermitian_pair(rng: np.random.Generator, size: int):
    """Draw ``C`` complex symmetric with positive-definite real part and ``H``
    Hermitian positive semidefinite, both ``size x size``."""
    A = rng.standard_normal((size, size))
    A = A @ A.T + 1e-3 * np.eye(size)
    B = rng.standard_normal((size, size))
    B = (B + B.T) * rng.uniform(0.1, 10.0)
    C = A + 1j * B
    rank = rng.integers(0, size + 1)
    Z = rng.standard_normal((size, rank)) + 1j * rng.standard_normal((size, rank))
    H = Z @ Z.conj().T * rng.uniform(0.1, 10.0)
    return C, H


def nonsingularity_margin(C: np.ndarray, H: np.ndarray) -> float:
    """Smallest singular value of ``C + H`` relative to its spectral norm."""
    s = np.linalg.svd(C + H, compute_uv=False)
    return float(s[-1] / s[0])


def sym_power_matrix(U: np.ndarray, d: int) -> np.ndarray:
    """Matrix of ``s(z) -> s(U^T z)`` on degree-``d`` binary forms.

    Basis ``z0^(d-i) z1^i``, ``i = 0..d``.  With this convention the diagonal
    element ``diag(e^{it}, e^{-it})`` acts on ``z0^(d-i) z1^i`` by
    ``e^{i(d-2i)t}``, so ``z0^d`` is the highest weight vector.
    """
    U = np.asarray(U, dtype=complex)
    # z0 -> U00 z0 + U10 z1, z1 -> U01 z0 + U11 z1; polynomials in z1 with z0 = 1
    p0 = np.array([U[0, 0], U[1, 0]])
    p1 = np.array([U[0, 1], U[1, 1]])
    pow0 = [np.ones(1, dtype=complex)]
    pow1 = [np.ones(1, dtype=complex)]
    for _ in range(d):
        pow0.append(np.convolve(pow0[-1], p0))
        pow1.append(np.convolve(pow1[-1], p1))
    R = np.empty((d + 1, d + 1), dtype=complex)
    for i in range(d + 1):
        R[:, i] = np.convolve(pow0[d - i], pow1[i])
    return R


def so3_rotation(q) -> np.ndarray:
    """Rotation ``R`` with ``u(U z) = R u(z)`` for the Hopf map
    ``u(z) = (2 Re(conj(z0) z1), 2 Im(conj(z0) z1), |z0|^2 - |z1|^2)``."""
    U = quaternion_to_matrix(q)
    sig = _PAULI
    R = np.empty((3, 3))
    for a in range(3):
        M = U.conj().T @ sig[a] @ U
        for b in range(3):
            R[a, b] = 0.5 * np.trace(M @ sig[b]).real
    # u_a(Uz) = z^H U^H s_a U z = sum_b R_ab u_b(z)
    return R


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def weight_vector(G: GroupSpec, omega: Sequence[int] | int) -> np.ndarray:
    """Embed a weight as a vector of the dual Lie algebra (ray directions)."""
    omega = check_weight(G, omega)
    if G.kind == SU2:
        return np.array([0.0, 0.0, float(omega)])
    return np.asarray(omega, dtype=float)
