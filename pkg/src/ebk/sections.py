"""Spaces of holomorphic sections H^0(M, L^k) for the model manifolds.

Sections are polynomials, multi-homogeneous of degree ``d_f = a_f k`` in the
homogeneous coordinates of each factor.  The monomial basis
``prod_f z0_f^(d_f - i_f) z1_f^(i_f)`` is listed in lexicographic order of the
exponent tuple ``(i_1, ..., i_n)``.  Monomials are orthogonal for the
Fubini-Study structure, so the Gram matrix is diagonal and is kept as a vector
of log-norms (plain floats overflow past level ~1000).

Isotypic components are stored in the *orthonormal monomial frame*
``e_i = m_i / ||m_i||``.  In that frame the sl2 triple has the familiar
``sqrt(i (d - i + 1))`` matrix elements, which keeps the null-space and
lowering computations well conditioned at every level.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.special import gammaln

from ebk import groups
from ebk.models import ActionSpec, ModelManifold, check_compatible, check_level

_LABEL_TOL = 1e-6
_CHAIN_RTOL = 1e-8
PROJECTOR_TOL = 1e-6


class NumericalBreakdown(RuntimeError):
    """Raised when a floating-point step cannot be trusted (non-PD Gram,
    broken lowering chain, non-idempotent projector)."""


class InsufficientQuadrature(NumericalBreakdown):
    pass


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


@dataclass(frozen=True, eq=False)
class SectionSpace:
    """``H^0(M, L^k)`` with its monomial basis and Fubini-Study Gram data."""

    model: ModelManifold
    action: ActionSpec | None
    k: int

    @cached_property
    def degrees(self) -> tuple:
        return self.model.degrees(self.k)

    @cached_property
    def exponents(self) -> np.ndarray:
        """``(dim, n)`` array of ``z1`` exponents, lexicographic."""
        axes = [np.arange(d + 1) for d in self.degrees]
        grid = np.meshgrid(*axes, indexing="ij")
        return np.stack([g.reshape(-1) for g in grid], axis=1)

    @property
    def dim(self) -> int:
        return math.prod(d + 1 for d in self.degrees)

    @property
    def basis(self) -> list:
        return [tuple(int(i) for i in row) for row in self.exponents]

    def factor_log_gram(self, f: int) -> np.ndarray:
        d = self.degrees[f]
        i = np.arange(d + 1)
        return -np.log(d + 1.0) - _log_binom(d, i)

    @cached_property
    def log_gram(self) -> np.ndarray:
        """Log of the diagonal Gram entries ``prod_f 1/((d_f+1) C(d_f, i_f))``."""
        out = np.zeros(self.dim)
        for f in range(self.model.n):
            out += self.factor_log_gram(f)[self.exponents[:, f]]
        return out

    @cached_property
    def torus_weights(self) -> np.ndarray:
        """Linearized weights ``(dim, rank)`` of the monomials under a torus action."""
        if self.action is None or self.action.is_su2:
            raise ValueError("torus weights need a torus action")
        W = self.action.weight_matrix
        shift = np.array([int(b * self.k) for b in self.action.shift], dtype=np.int64)
        return self.exponents @ W.T - shift

    @cached_property
    def su2_weights(self) -> np.ndarray:
        """Eigenvalue of ``H`` on each monomial: ``sum_f d_f - 2 i_f``."""
        return sum(self.degrees) - 2 * self.exponents.sum(axis=1)

    def weight_index(self) -> dict:
        """Map weight label -> indices of the monomials carrying that weight.

        Uses the diagonal torus weights, or ``H`` weights for SU(2).
        """
        if self.action is None:
            raise ValueError("no action attached")
        if self.action.is_su2:
            labels = self.su2_weights[:, None]
        else:
            labels = self.torus_weights
        uniq, inverse = np.unique(labels, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        order = np.argsort(inverse, kind="stable")
        splits = np.cumsum(np.bincount(inverse, minlength=len(uniq)))[:-1]
        out = {}
        for lab, idx in zip(uniq, np.split(order, splits)):
            key = int(lab[0]) if self.action.is_su2 else tuple(int(x) for x in lab)
            out[key] = idx
        return out


def build_space(model: ModelManifold, k: int, action: ActionSpec | None = None) -> SectionSpace:
    if action is not None:
        check_compatible(model, action)
    k = check_level(action, k)
    return SectionSpace(model, action, k)


def gram_matrix(space: SectionSpace) -> np.ndarray:
    return np.diag(np.exp(space.log_gram))


def _factor_grid(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    t = (x + 1) / 2
    phases = groups.equispaced_angles(order)
    T, P = np.meshgrid(t, phases, indexing="ij")
    W = np.broadcast_to((w / 2)[:, None] / order, T.shape)
    z0 = np.sqrt(1 - T)
    z1 = np.sqrt(T) * np.exp(1j * P)
    return z0.reshape(-1), z1.reshape(-1), W.reshape(-1)


def quadrature_gram_oracle(space: SectionSpace, grid_order: int = 64) -> np.ndarray:
    """Gram matrix by direct quadrature of pointwise inner products.

    Gauss-Legendre in ``t = |z1|^2`` times an equispaced phase rule on each
    factor; the product grid integral factorizes over factors.
    """
    if grid_order < 16:
        raise ValueError("grid_order must be >= 16")
    z0, z1, w = _factor_grid(grid_order)
    G = np.ones((1, 1), dtype=complex)
    for d in space.degrees:
        i = np.arange(d + 1)
        vals = z0[None, :] ** (d - i)[:, None] * z1[None, :] ** i[:, None]
        G = np.kron(G, (vals * w) @ vals.conj().T)
    return G


def orthonormal_basis(space_or_gram) -> np.ndarray:
    """Coefficient matrix ``B`` with ``B^H G B = I`` (``B = L^{-H}``, ``G = L L^H``)."""
    G = gram_matrix(space_or_gram) if isinstance(space_or_gram, SectionSpace) else np.asarray(space_or_gram)
    try:
        L = scipy.linalg.cholesky(G, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NumericalBreakdown("Gram matrix is not positive definite") from exc
    return scipy.linalg.solve_triangular(L.conj().T, np.eye(len(G), dtype=L.dtype), lower=False)


def _frame_scale(space: SectionSpace) -> np.ndarray:
    return np.exp(0.5 * space.log_gram)


def _kron_sum(mats: list, eye_sizes: list):
    """``sum_f I (x) ... (x) A_f (x) ... (x) I`` as a sparse matrix."""
    total = None
    for f, A in enumerate(mats):
        parts = [sparse.identity(n, dtype=A.dtype, format="csr") for n in eye_sizes]
        parts[f] = sparse.csr_matrix(A)
        term = parts[0]
        for p in parts[1:]:
            term = sparse.kron(term, p, format="csr")
        total = term if total is None else total + term
    return total.tocsr()


def _sl2_factor(generator: str, d: int, frame: bool):
    i = np.arange(d + 1)
    if generator == "H":
        return sparse.diags((d - 2 * i).astype(float if frame else np.int64))
    if frame:
        vals = np.sqrt(i[1:] * (d - i[1:] + 1.0))
    else:
        vals = i[1:].astype(np.int64)
    # E = z0 d/dz1 : m_i -> i m_{i-1}
    E = sparse.diags(vals, offsets=1, shape=(d + 1, d + 1))
    if generator == "E":
        return E
    if generator == "F":
        if frame:
            return E.T
        # F = z1 d/dz0 : m_i -> (d - i) m_{i+1}
        return sparse.diags((d - i[:-1]).astype(np.int64), offsets=-1, shape=(d + 1, d + 1))
    raise ValueError(f"unknown sl2 generator {generator!r}")


def lie_algebra_action(space: SectionSpace, generator, *, frame: bool = False):
    """Infinitesimal action on the monomial basis, as a sparse matrix.

    SU(2): ``generator`` in ``{"H", "E", "F"}`` with ``H = z0 d0 - z1 d1``,
    ``E = z0 d1``, ``F = z1 d0`` acting by the Leibniz rule; integer entries.
    Torus: ``generator`` is the index of a circle factor and the matrix is the
    diagonal of linearized weights.  ``frame=True`` returns the same operator
    in the orthonormal monomial frame (floating point).
    """
    if space.action is None:
        raise ValueError("no action attached")
    if space.action.is_su2:
        if generator not in ("H", "E", "F"):
            raise ValueError("SU(2) generators are 'H', 'E', 'F'")
        sizes = [d + 1 for d in space.degrees]
        return _kron_sum([_sl2_factor(generator, d, frame) for d in space.degrees], sizes)
    if not isinstance(generator, (int, np.integer)) or not 0 <= generator < space.action.group.rank:
        raise ValueError(f"torus generator must be an index below {space.action.group.rank}")
    diag = space.torus_weights[:, generator]
    return sparse.diags(diag.astype(float) if frame else diag).tocsr()


def group_action_matrix(space: SectionSpace, g) -> np.ndarray:
    """Matrix of ``rho_k(g)`` on the monomial basis."""
    if space.action is None:
        raise ValueError("no action attached")
    if space.action.is_su2:
        U = groups.quaternion_to_matrix(groups.check_su2_element(g))
        R = np.ones((1, 1), dtype=complex)
        for d in space.degrees:
            R = np.kron(R, groups.sym_power_matrix(U, d))
        return R
    theta = np.atleast_1d(np.asarray(g, dtype=float))
    if theta.shape != (space.action.group.rank,):
        raise ValueError("torus element has the wrong number of angles")
    return np.diag(np.exp(1j * (space.torus_weights @ theta)))


# --- isotypic decomposition -------------------------------------------------

SINGLE = "single"
LADDER = "ladder"


@dataclass(frozen=True, eq=False)
class IsotypicComponent:
    """One isotypic summand (or a ladder union of them).

    ``coeffs`` is a sparse ``dim x ncols`` matrix with orthonormal columns in
    the orthonormal monomial frame.
    """

    space: SectionSpace
    weight: object
    multiplicity: int
    irrep_dim: int
    coeffs: sparse.csc_matrix
    kind: str = SINGLE
    ladder_weights: tuple = ()

    @property
    def ncols(self) -> int:
        return self.coeffs.shape[1]

    @property
    def dim(self) -> int:
        return self.ncols

    def basis_coeffs(self) -> np.ndarray:
        """Dense coefficients in the monomial basis: ``B^H G B = I``."""
        scale = np.exp(-0.5 * self.space.log_gram)
        return scale[:, None] * self.coeffs.toarray()

    def frame_coeffs(self) -> np.ndarray:
        return self.coeffs.toarray()


def _assemble(dim: int, columns: list) -> sparse.csc_matrix:
    """Columns given as ``(row_indices, values)`` pairs."""
    if not columns:
        return sparse.csc_matrix((dim, 0))
    rows = np.concatenate([r for r, _ in columns])
    vals = np.concatenate([v for _, v in columns])
    cols = np.concatenate([np.full(len(r), j) for j, (r, _) in enumerate(columns)])
    return sparse.csc_matrix((vals, (rows, cols)), shape=(dim, len(columns)))


def full_component(space: SectionSpace) -> IsotypicComponent:
    """The whole space as one component (orthonormal monomials)."""
    cols = [(np.array([i]), np.ones(1)) for i in range(space.dim)]
    return IsotypicComponent(space, None, 1, space.dim, _assemble(space.dim, cols), kind="full")


def empty_component(space: SectionSpace, weight) -> IsotypicComponent:
    return IsotypicComponent(space, weight, 0, 0, _assemble(space.dim, []))


def weight_multiplicities(space: SectionSpace) -> dict:
    """Multiplicity of each irreducible occurring in ``space``.

    Torus: size of each weight space.  SU(2): ``dim W_m - dim W_{m+2}`` for
    ``m >= 0``, the number of highest weight vectors of weight ``m``.
    """
    action = space.action
    if action.is_su2:
        sizes = _progression_counts([-2] * space.model.n, space.degrees, sum(space.degrees))
        out = {}
        for m, size in sizes.items():
            mult = size - sizes.get(m + 2, 0) if m >= 0 else 0
            if mult:
                out[m] = mult
        return out
    if action.group.rank == 1:
        W = action.weight_matrix[0]
        base = -int(action.shift[0] * space.k)
        return {(w,): c for w, c in _progression_counts(W, space.degrees, base).items()}
    return {w: len(idx) for w, idx in space.weight_index().items()}


def _progression_counts(steps, degrees, base: int = 0) -> dict:
    """Sizes of the weight spaces when factor ``f`` contributes ``i * steps[f]``,
    ``0 <= i <= degrees[f]``; a convolution of indicator arrays."""
    hist = np.ones(1, dtype=np.int64)
    lo = base
    for s, d in zip(steps, degrees):
        s, d = int(s), int(d)
        if s == 0:
            hist = hist * (d + 1)
            continue
        h = np.zeros(abs(s) * d + 1, dtype=np.int64)
        h[:: abs(s)] = 1
        hist = np.convolve(hist, h)
        lo += min(0, s * d)
    return {lo + j: int(c) for j, c in zip(np.flatnonzero(hist), hist[hist > 0])}


def _integer_null_space(block: sparse.spmatrix) -> list:
    """Null space of an integer matrix, as integer vectors (exact)."""
    import sympy

    M = sympy.Matrix(block.toarray().astype(object))
    out = []
    for v in M.nullspace():
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in v]) if len(v) else 1
        out.append(np.array([int(x * den) for x in v], dtype=object))
    return out


def _to_frame(idx, ints, log_scale) -> np.ndarray:
    """Integer monomial coefficients -> unit vector in the orthonormal frame."""
    big = max(abs(x) for x in ints) or 1
    v = np.array([float(Fraction(int(x), int(big))) for x in ints])
    # frame coordinate = coefficient * ||m_i||, rescaled in log space
    ls = log_scale[idx]
    v = v * np.exp(ls - ls.max())
    return v / np.linalg.norm(v)


class _CasimirBlocks:
    """Eigen-decomposition of ``F E = E^T E`` (frame) on each H-weight space.

    On weight ``mu`` inside ``Sym^m`` this operator acts by
    ``(m(m+2) - mu(mu+2)) / 4``, so its eigenvectors sort the weight space
    by irreducible type.  Eigenvalue 0 is exactly the null space of ``E``.
    """

    def __init__(self, index, E_frame, F_frame):
        self.index = index
        self.E = E_frame
        self.F = F_frame
        self._cache = {}
        self._lower = {}

    def lowering(self, mu):
        """Dense block of ``F`` from weight ``mu`` to ``mu - 2``."""
        if mu not in self._lower:
            self._lower[mu] = self.F[self.index[mu - 2]][:, self.index[mu]].toarray()
        return self._lower[mu]

    def get(self, mu):
        """``{m: orthonormal columns}`` for weight ``mu``, or ``None`` if the
        eigenvalues do not round cleanly to labels."""
        if mu in self._cache:
            return self._cache[mu]
        cols = self.index[mu]
        above = self.index.get(mu + 2)
        if above is None:
            out = {mu: np.eye(len(cols))}
        else:
            B = self.E[above][:, cols].toarray()
            vals, vecs = np.linalg.eigh(B.T @ B)
            m_est = -1 + np.sqrt(np.maximum(1 + 4 * vals + mu * (mu + 2), 0))
            labels = np.rint(m_est).astype(int)
            if np.any(np.abs(m_est - labels) > _LABEL_TOL) or np.any((labels - mu) % 2):
                out = None
            else:
                out = {int(m): vecs[:, labels == m] for m in np.unique(labels)}
        self._cache[mu] = out
        return out


def _chain_float(index, m, hw, blocks):
    columns = [(index[m], hw)]
    v = hw
    for j in range(m):
        dst = index[m - 2 * j - 2]
        w = blocks.lowering(m - 2 * j) @ v
        target = blocks.get(m - 2 * j - 2)
        if target is None or m not in target:
            return None
        Q = target[m]
        w = Q @ (Q.T @ w)
        norm = np.linalg.norm(w)
        expected = math.sqrt((j + 1) * (m - j))
        if abs(norm - expected) > _CHAIN_RTOL * expected:
            raise NumericalBreakdown(f"lowering chain for m={m} lost norm at step {j}: {norm} vs {expected}")
        v = w / norm
        columns.append((dst, v))
    return columns


def _component_float(space, index, m, blocks):
    hw_block = blocks.get(m)
    if hw_block is None:
        return None
    hws = hw_block.get(m, np.zeros((len(index[m]), 0)))
    expected = len(index[m]) - len(index.get(m + 2, ()))
    if hws.shape[1] != expected:
        return None
    cols = []
    for c in range(hws.shape[1]):
        chain = _chain_float(index, m, hws[:, c], blocks)
        if chain is None:
            return None
        cols.extend(chain)
    return hws.shape[1], cols


def _component_exact(space, index, m, E_int, F_int):
    """Highest weight vectors and their lowering chains in integer arithmetic."""
    above = index.get(m + 2)
    cols_m = index[m]
    if above is None:
        hws = [np.array([int(r == c) for r in range(len(cols_m))], dtype=object) for c in range(len(cols_m))]
    else:
        hws = _integer_null_space(E_int[above][:, cols_m])
    log_scale = 0.5 * space.log_gram
    chains = []
    for hw in hws:
        chain = [hw]
        v = hw
        for j in range(m):
            src, dst = index[m - 2 * j], index[m - 2 * j - 2]
            v = F_int[dst][:, src].toarray().astype(object) @ v
            chain.append(v)
        chains.append(chain)
    # orthonormalize across copies weight by weight (frame inner product)
    cols = [[] for _ in hws]
    for j in range(m + 1):
        idx = index[m - 2 * j]
        V = np.stack([_to_frame(idx, ch[j], log_scale) for ch in chains], axis=1)
        Q, _ = np.linalg.qr(V)
        for c in range(len(hws)):
            q = Q[:, c]
            cols[c].append((idx, q * np.sign(q[np.argmax(np.abs(q))])))
    return len(hws), [col for copy in cols for col in copy]


def isotypic_decompose(space: SectionSpace, weights=None, method: str = "float") -> list:
    """Decompose ``space`` into isotypic components, sorted by weight.

    ``weights`` optionally restricts the output to those labels.  For SU(2)
    the highest weight vectors of weight ``m`` are the null space of ``E`` on
    the ``H``-eigenspace ``m``; each copy is completed by repeated ``F`` with
    the expected norms ``sqrt((j+1)(m-j))`` checked along the way.  The
    floating-point path falls back to exact integer arithmetic whenever the
    irreducible labels are ambiguous; ``method="exact"`` forces it.
    """
    if space.action is None:
        raise ValueError("no action attached")
    if method not in ("float", "exact"):
        raise ValueError("method must be 'float' or 'exact'")
    index = space.weight_index()
    G = space.action.group
    if weights is not None:
        wanted = {groups.check_weight(G, w) for w in weights}
    out = []
    if not space.action.is_su2:
        for w in sorted(index):
            if weights is not None and w not in wanted:
                continue
            idx = index[w]
            cols = [(np.array([i]), np.ones(1)) for i in idx]
            out.append(IsotypicComponent(space, w, len(idx), 1, _assemble(space.dim, cols)))
        return out

    E_frame = lie_algebra_action(space, "E", frame=True).tocsr()
    F_frame = lie_algebra_action(space, "F", frame=True).tocsr()
    blocks = _CasimirBlocks(index, E_frame, F_frame)
    E_int = F_int = None
    for m in sorted(w for w in index if w >= 0):
        if weights is not None and m not in wanted:
            continue
        if len(index[m]) == len(index.get(m + 2, ())):
            continue
        result = _component_float(space, index, m, blocks) if method == "float" else None
        if result is None:
            if E_int is None:
                E_int = lie_algebra_action(space, "E").tocsr()
                F_int = lie_algebra_action(space, "F").tocsr()
            result = _component_exact(space, index, m, E_int, F_int)
        mult, cols = result
        out.append(IsotypicComponent(space, m, mult, m + 1, _assemble(space.dim, cols)))
    return out


def ladder_subspace(space: SectionSpace, omega) -> IsotypicComponent:
    """Union of the components with weights ``l * omega`` for ``l >= 1``.

    For SU(2), ``omega = r`` keeps every ``Sym^m`` with ``m`` a positive
    multiple of ``r``.
    """
    if space.action is None:
        raise ValueError("no action attached")
    G = space.action.group
    omega = groups.check_weight(G, omega)
    vec = np.atleast_1d(omega)
    if not np.any(vec):
        raise ValueError("ladder needs a nonzero weight")
    mults = weight_multiplicities(space)

    def on_ray(w):
        w = np.atleast_1d(w)
        # w = l * omega for an integer l >= 1
        j = int(np.flatnonzero(vec)[0])
        if w[j] % vec[j]:
            return False
        ell = w[j] // vec[j]
        return ell >= 1 and np.array_equal(w, ell * vec)

    members = sorted(w for w in mults if on_ray(w))
    comps = isotypic_decompose(space, weights=members) if members else []
    if comps:
        coeffs = sparse.hstack([c.coeffs for c in comps], format="csc")
    else:
        coeffs = sparse.csc_matrix((space.dim, 0))
    return IsotypicComponent(
        space,
        omega,
        sum(c.multiplicity for c in comps),
        0,
        coeffs,
        kind=LADDER,
        ladder_weights=tuple(c.weight for c in comps),
    )


# --- projector oracle -------------------------------------------------------

def _projector_frame_torus(space, omega, order):
    lam = space.torus_weights - np.asarray(omega)
    elements, w = groups.haar_quadrature(space.action.group, order)
    diag = np.exp(1j * (elements @ lam.T)).T @ w
    return np.diag(diag)


def _projector_frame_su2(space, m, order):
    rule = groups.su2_rule(order)
    lam = space.su2_weights
    levels = np.unique(lam)
    pos = np.searchsorted(levels, lam)
    xi = rule.phases
    # phase sums over the two circle variables, for every pair of H-weights
    la, lb = np.meshgrid(levels, levels, indexing="ij")
    mode1 = (la + lb) // 2
    mode2 = (lb - la) // 2
    e2 = np.exp(1j * np.multiply.outer(mode2, xi)).mean(axis=-1)
    e1_modes = np.exp(1j * np.multiply.outer(mode1, xi))
    P = np.zeros((space.dim, space.dim), dtype=complex)
    for u, wu in zip(rule.u, rule.u_weights):
        c, s = math.sqrt(u), math.sqrt(1 - u)
        r = np.array([[c, -s], [s, c]])
        chi = groups._su2_character(m, np.arccos(np.clip(c * np.cos(xi), -1, 1)))
        S = (e1_modes @ chi) / len(xi) * e2
        R = np.ones((1, 1))
        for f, d in enumerate(space.degrees):
            sc = np.exp(0.5 * space.factor_log_gram(f))
            Rf = groups.sym_power_matrix(r, d).real
            R = np.kron(R, sc[:, None] * Rf / sc[None, :])
        P += wu * R * S[np.ix_(pos, pos)]
    return (m + 1) * P


def character_projector_oracle(space: SectionSpace, omega, order: int | None = None, *, frame: bool = False):
    """Isotypic projector by Haar quadrature of ``dim V * chi(g^-1) rho(g)``.

    Returned in the monomial basis (``frame=False``) or in the orthonormal
    monomial frame, where it is an orthogonal projector.  The default order
    makes the rule exact at this level.  Raises ``InsufficientQuadrature`` if
    the result is not idempotent to 1e-6.
    """
    if space.action is None:
        raise ValueError("no action attached")
    G = space.action.group
    omega = groups.check_weight(G, omega)
    if G.kind == groups.SU2:
        if order is None:
            order = sum(space.degrees) + omega + 1
        P = _projector_frame_su2(space, omega, order)
    else:
        if order is None:
            order = int(np.abs(space.torus_weights - np.asarray(omega)).max()) + 1
        P = _projector_frame_torus(space, omega, order)
    if np.linalg.norm(P @ P - P, 2) > PROJECTOR_TOL:
        raise InsufficientQuadrature(f"projector for {omega!r} is not idempotent at order {order}")
    if frame:
        return P
    s = _frame_scale(space)
    return P * (s[None, :] / s[:, None])


def projector_range(P_frame: np.ndarray, tol: float = 0.5) -> np.ndarray:
    """Orthonormal basis of the range of a frame projector."""
    H = 0.5 * (P_frame + P_frame.conj().T)
    vals, vecs = np.linalg.eigh(H)
    return vecs[:, vals > tol]


def principal_angles(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.shape[1] == 0 or B.shape[1] == 0:
        return np.zeros(0)
    return scipy.linalg.subspace_angles(A, B)
