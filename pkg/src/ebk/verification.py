"""End-to-end checks of the asymptotic predictions at desk scale.

Each ``check_*`` function runs one criterion at its fixed tolerance and
returns a :class:`CriterionResult`; :func:`run_all` runs the whole suite.
Independent oracles (log-gamma evaluation, lattice enumeration, weight
enumeration) live here next to the checks that use them.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import unitary_group

from ebk import asymptotics, groups, kernels, models, sections
from ebk.models import ActionSpec, ModelManifold, Point


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    time_limit: float

    @property
    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail} ({self.seconds:.2f}s / {self.time_limit:g}s)"


EXAMPLE_MODEL = ModelManifold((2, 1))
SU2_ACTION = ActionSpec.su2_diagonal()
P1 = ModelManifold((1,))
HALF_CIRCLE = ActionSpec.circle((1,), Fraction(1, 2))


def _timed(number, name, limit, fn):
    start = time.perf_counter()
    passed, detail = fn()
    elapsed = time.perf_counter() - start
    return CriterionResult(number, name, bool(passed and elapsed < limit), detail, elapsed, limit)


# --- oracles -------------------------------------------------------------------

def stirling_central_density(k: int, t: float, i: int | None = None) -> float:
    """``(k+1) C(k, i) t^i (1-t)^(k-i)`` with ``i = k/2`` by default, via lgamma."""
    i = k // 2 if i is None else i
    log = (math.log(k + 1) + math.lgamma(k + 1) - math.lgamma(i + 1) - math.lgamma(k - i + 1)
           + i * math.log(t) + (k - i) * math.log(1 - t))
    return math.exp(log)


def lattice_count(k: int, target: int) -> int:
    """``#{(i, j) in [0, k]^2 : i + j - k = target}`` by enumeration."""
    i, j = np.ogrid[: k + 1, : k + 1]
    return int(np.count_nonzero(i + j - k == target))


def weight_space_nonempty(k: int, m0: int, shift: int, omega: int) -> bool:
    """Does some ``0 <= i <= k`` have ``m0 i - k shift == omega``?"""
    return any(m0 * i - k * shift == omega for i in range(k + 1))


def example_weights(k: int) -> list:
    """The summands ``Sym^(3k-2j)``, ``0 <= j <= k``."""
    return sorted(3 * k - 2 * j for j in range(k + 1))


# --- criteria ------------------------------------------------------------------

def check_example_decomposition(k_max: int = 50):
    def run():
        bad = []
        for k in range(k_max + 1):
            space = sections.build_space(EXAMPLE_MODEL, k, SU2_ACTION)
            comps = sections.isotypic_decompose(space)
            got = [c.weight for c in comps]
            mults = {c.multiplicity for c in comps}
            dims = sum(c.ncols for c in comps)
            if got != example_weights(k) or mults != {1} or dims != (2 * k + 1) * (k + 1):
                bad.append(k)
        return not bad, f"k<= {k_max}, mismatching levels: {bad or 'none'}"

    return _timed(1, "Decomposition of Sym^2k (x) Sym^k on P1xP1(2,1)", 10.0, run)


def _density_series(model, action, omega, p, ks):
    out = []
    for k in ks:
        space = sections.build_space(model, k, action)
        comps = sections.isotypic_decompose(space, weights=[omega])
        out.append(kernels.density(space, comps[0], p).value if comps else 0.0)
    return np.array(out)


def check_isotypic_growth():
    def run():
        ks = [16 * 2**j for j in range(9)]
        p = Point.from_t(Fraction(1, 2))
        vals = _density_series(P1, HALF_CIRCLE, 0, p, ks)
        oracle = np.array([stirling_central_density(k, 0.5) for k in ks])
        agree = np.max(np.abs(vals / oracle - 1))
        fit = asymptotics.fit_power_law(asymptotics.SeriesSample(ks, vals))
        pred = asymptotics.predict_leading(P1, HALF_CIRCLE, 0, p)
        target = math.sqrt(2 / math.pi)
        ok = (abs(fit.richardson_exponent - 0.5) <= 0.02
              and abs(fit.coefficient / target - 1) <= 0.02
              and abs(pred.coefficient - target) < 1e-12 and pred.exponent == 0.5
              and agree < 1e-10)
        return ok, (f"exponent {fit.richardson_exponent:.5f} (0.5+-0.02), coefficient {fit.coefficient:.5f} "
                    f"vs sqrt(2/pi)={target:.5f} (2%), oracle agreement {agree:.1e}")

    return _timed(2, "Isotypic growth on the zero level", 5.0, run)


def check_rapid_decay():
    def run():
        ks = list(range(20, 1001, 20))
        t = 0.3
        vals = _density_series(P1, HALF_CIRCLE, 0, Point.from_t(t), ks)
        oracle = np.array([stirling_central_density(k, t) for k in ks])
        agree = np.max(np.abs(vals / oracle - 1))
        verdict = asymptotics.classify_decay(asymptotics.SeriesSample(ks, vals))
        target = 0.5 * math.log(4 * t * (1 - t))
        ok = verdict.is_rapid and abs(verdict.value / target - 1) <= 0.05 and agree < 1e-9
        return ok, f"{verdict.kind} slope {verdict.value:.5f} vs {target:.5f} (5%), oracle agreement {agree:.1e}"

    return _timed(3, "Rapid decay off the zero level", 5.0, run)


def check_ladder_growth():
    def run():
        p = models.named_point("offdiag-sample", 2)
        ks = list(range(3, 49, 3))
        vals = []
        for k in ks:
            space = sections.build_space(EXAMPLE_MODEL, k, SU2_ACTION)
            vals.append(kernels.ladder_density(space, sections.ladder_subspace(space, 3), p).value)
        fit = asymptotics.fit_power_law(asymptotics.SeriesSample(ks, vals))
        pred = asymptotics.predict_leading(EXAMPLE_MODEL, SU2_ACTION, asymptotics.Ladder(3), p)
        ok = abs(fit.richardson_exponent - 2) <= 0.05 and fit.coefficient > 0 and pred.exponent == 2
        return ok, f"exponent {fit.richardson_exponent:.5f} (2+-0.05), coefficient {fit.coefficient:.5f}"

    return _timed(4, "Ladder r=3 growth k^2 off the diagonal", 60.0, run)


DIAGONAL_CIRCLE = ActionSpec.circle((1, 1), 1)
P1P1 = ModelManifold((1, 1))


def check_multiplicity_growth():
    def run():
        ks = list(range(100, 2001, 100))
        series = asymptotics.multiplicity_series(P1P1, DIAGONAL_CIRCLE, 0, ks)
        exact = all(m == lattice_count(k, 0) for k, m in zip(ks, series.multiplicities))
        fit = asymptotics.fit_power_law(series.dims)
        ratio = series.dims.values / series.dims.k
        top = ratio[len(ratio) // 2:]
        spread = (top.max() - top.min()) / top.mean()
        big = 4 * ks[-1]
        limit = lattice_count(big, 0) / big
        pred = asymptotics.predict_leading(P1P1, DIAGONAL_CIRCLE, 0, quantity="multiplicity")
        ok = (abs(fit.richardson_exponent - 1) <= 0.02 and spread < 0.02
              and abs(ratio[-1] / limit - 1) < 0.02 and exact and pred.exponent == 1)
        return ok, (f"exponent {fit.richardson_exponent:.5f} (1+-0.02), ratio spread {spread:.2e}, "
                    f"limit {ratio[-1]:.5f} vs lattice {limit:.5f}")

    return _timed(5, "Multiplicity growth k^(n-g)", 5.0, run)


def check_multiplicity_ratio():
    def run():
        ks = list(range(2, 501, 2))
        series = asymptotics.multiplicity_series(P1, HALF_CIRCLE, 1, ks)
        circle_ok = all(r == 1 == groups.irrep_dim(HALF_CIRCLE.group, 1) for r in series.ratios)
        su2 = asymptotics.multiplicity_series(EXAMPLE_MODEL, SU2_ACTION, 1, range(1, 51))
        undefined = all(r is None for r in su2.ratios) and all(m == 0 for m in su2.trivial_multiplicities)
        rng = np.random.default_rng(6)
        norms = [np.linalg.norm(models.moment_map(EXAMPLE_MODEL, SU2_ACTION, p))
                 for p in kernels.random_points(rng, 2, 2000)]
        ok = circle_ok and undefined and min(norms) >= 1 - 1e-12
        return ok, f"circle ratio == 1 for {len(ks)} levels: {circle_ok}; SU(2) ratio undefined: {undefined}, min|Phi|={min(norms):.3f}"

    return _timed(6, "Multiplicity ratio equals dim V", 5.0, run)


def check_projector_oracle(k_max: int = 8):
    def run():
        worst = [0.0, 0.0, 0.0]
        for k in range(1, k_max + 1):
            space = sections.build_space(EXAMPLE_MODEL, k, SU2_ACTION)
            for comp in sections.isotypic_decompose(space):
                P = sections.character_projector_oracle(space, comp.weight, frame=True)
                worst[0] = max(worst[0], np.linalg.norm(P @ P - P, 2))
                worst[1] = max(worst[1], abs(np.trace(P).real - (comp.weight + 1)))
                ang = sections.principal_angles(sections.projector_range(P), comp.frame_coeffs())
                worst[2] = max(worst[2], float(ang.max()))
        ok = worst[0] < 1e-9 and worst[1] < 1e-9 and worst[2] < 1e-8
        return ok, f"max ||P^2-P|| {worst[0]:.1e}, max |tr P-(m+1)| {worst[1]:.1e}, max angle {worst[2]:.1e}"

    return _timed(7, "Character projector vs Lie-algebra decomposition", 30.0, run)


def check_basis_independence():
    def run():
        rng = np.random.default_rng(8)
        space = sections.build_space(EXAMPLE_MODEL, 12, SU2_ACTION)
        comps = sections.isotypic_decompose(space)
        points = kernels.random_points(rng, 2, 10)
        worst = 0.0
        for trial in range(100):
            comp = comps[trial % len(comps)]
            U = unitary_group.rvs(comp.ncols, random_state=rng)
            rotated = sections.IsotypicComponent(space, comp.weight, comp.multiplicity, comp.irrep_dim,
                                                 comp.coeffs @ U)
            a = kernels.density_values(space, comp, points)
            b = kernels.density_values(space, rotated, points)
            worst = max(worst, float(np.max(np.abs(a - b))))
        return worst < 1e-10, f"max density change {worst:.1e} over 100 rotations x 10 points"

    return _timed(8, "Density independent of orthonormal basis", 5.0, run)


def check_selection_rule():
    def run():
        action = ActionSpec.circle((2,), 1)
        p = Point.from_t(Fraction(1, 2))
        ks = range(1, 513)
        report = asymptotics.selection_rule_check(P1, action, 0, ks, p)
        oracle = all(r.nonzero == weight_space_nonempty(r.k, 2, 1, 0) for r in report.rows)
        pairing_ok = all(abs(r.pairing - (2 if r.predicted_nonzero else 0)) < 1e-9 for r in report.rows)
        exp = report.fit.richardson_exponent
        ok = report.consistent and oracle and pairing_ok and abs(exp - 0.5) <= 0.03
        return ok, f"density support == pairing support: {report.consistent}, oracle: {oracle}, surviving exponent {exp:.5f} (0.5+-0.03)"

    return _timed(9, "Finite-stabilizer selection rule", 5.0, run)


def check_gram_and_integral(k_max: int = 10):
    def run():
        worst_gram = 0.0
        for model in (P1, ModelManifold((2,)), P1P1, EXAMPLE_MODEL):
            for k in range(k_max + 1):
                space = sections.build_space(model, k)
                diff = sections.quadrature_gram_oracle(space, 64) - sections.gram_matrix(space)
                worst_gram = max(worst_gram, float(np.max(np.abs(diff))))
        worst_int = 0.0
        cases = [(P1, HALF_CIRCLE, 10), (P1P1, DIAGONAL_CIRCLE, 4), (EXAMPLE_MODEL, SU2_ACTION, 3)]
        for model, action, k in cases:
            space = sections.build_space(model, k, action)
            for comp in sections.isotypic_decompose(space):
                worst_int = max(worst_int, abs(kernels.density_integral(space, comp) - comp.ncols))
        ok = worst_gram < 1e-8 and worst_int < 1e-6
        return ok, f"max Gram deviation {worst_gram:.1e}, max |integral - dim| {worst_int:.1e}"

    return _timed(10, "Gram quadrature oracle and density integral", 30.0, run)


def check_nonsingular_sum(trials: int = 1000):
    def run():
        rng = np.random.default_rng(11)
        worst = math.inf
        for n in range(trials):
            C, H = groups.random_symmetric_hermitian_pair(rng, 1 + n % 8)
            worst = min(worst, groups.nonsingularity_margin(C, H))
        return worst > 1e-12, f"min sigma_min/||C+H|| over {trials} draws: {worst:.2e}"

    return _timed(11, "C+H nonsingular (symmetric + Hermitian PSD)", 2.0, run)


CHECKS = (
    check_example_decomposition,
    check_isotypic_growth,
    check_rapid_decay,
    check_ladder_growth,
    check_multiplicity_growth,
    check_multiplicity_ratio,
    check_projector_oracle,
    check_basis_independence,
    check_selection_rule,
    check_gram_and_integral,
    check_nonsingular_sum,
)


def run_all() -> list:
    return [check() for check in CHECKS]
