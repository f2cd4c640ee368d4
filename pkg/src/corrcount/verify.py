"""Cross-module identity suite over random mixtures and random models.

Backs the ``verify`` CLI command.  Every check is deterministic in the
seed and reports its worst observed deviation against the tolerance it
ships with, so a regression anywhere in the expansion/counting chain shows
up as a named FAIL line rather than a silent drift.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    CorrelationModel,
    TrailingZeroWarning,
    correlation_coefficient,
)
from .finite import count_pmf_from_joint, finite_count_pmf
from .limit import char_fn, limit_pmf
from .montecarlo import MixtureSpec, build_mixture_joint
from .ursell import (
    correlation_partition,
    correlation_recursive_expanded,
    marginalize,
    probability_from_correlations,
)

__all__ = [
    "IdentityCheck",
    "run_identity_suite",
    "random_mixture_spec",
    "random_joint",
    "random_model",
    "random_admissible_model",
    "measure_coefficients",
]


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    tolerance: float
    worst: float
    passed: bool
    detail: str = ""


def random_mixture_spec(rng: np.random.Generator, max_atoms: int = 3) -> MixtureSpec:
    n_atoms = int(rng.integers(1, max_atoms + 1))
    ps = rng.uniform(0.0, 1.0, size=n_atoms)
    ws = rng.uniform(0.1, 1.0, size=n_atoms)
    ws = ws / ws.sum()
    # nudge the last weight so the atom weights sum to one exactly
    ws[-1] = 1.0 - math.fsum(ws[:-1])
    return MixtureSpec(tuple(zip(ps.tolist(), ws.tolist())))


def random_joint(rng: np.random.Generator, n_max: int = 6, n_min: int = 2):
    n = int(rng.integers(n_min, n_max + 1))
    return build_mixture_joint(random_mixture_spec(rng), n)


def random_model(
    rng: np.random.Generator,
    l_max_cap: int = 4,
    c_scale: float = 5.0,
    n: int | None = None,
) -> CorrelationModel:
    """Arbitrary real coefficients; admissibility is not enforced."""
    l_max = int(rng.integers(1, l_max_cap + 1))
    c = rng.uniform(-c_scale, c_scale, size=l_max)
    if c[-1] == 0.0:
        c[-1] = c_scale / 2.0
    return CorrelationModel(l_max=l_max, c=tuple(c.tolist()), n=n)


def random_admissible_model(
    rng: np.random.Generator,
    l_max_cap: int = 4,
    max_tries: int = 500,
) -> CorrelationModel:
    """Rejection-sample a coefficient vector whose limiting pmf is admissible."""
    for _ in range(max_tries):
        l_max = int(rng.integers(1, l_max_cap + 1))
        c = [float(rng.uniform(0.5, 4.0))]
        for l in range(2, l_max + 1):
            c.append(float(rng.uniform(-0.6, 0.9)) / math.factorial(l - 1))
        if c[-1] == 0.0:
            c[-1] = 0.1
        model = CorrelationModel(l_max=l_max, c=tuple(c))
        if limit_pmf(model, mass_tolerance=1e-12).admissible:
            return model
    raise RuntimeError(f"no admissible model found in {max_tries} tries")


def measure_coefficients(joint, k_max: int | None = None) -> tuple[float, ...]:
    """Coefficients C_1..C_k of a joint, measured through the expansion chain."""
    k_max = joint.n if k_max is None else k_max
    p_tables = [marginalize(joint, k) for k in range(1, k_max + 1)]
    out = []
    for k in range(1, k_max + 1):
        g = correlation_partition(p_tables[:k])
        out.append(correlation_coefficient(g, joint.n))
    return tuple(out)


def _check(name, tolerance, worst, detail="") -> IdentityCheck:
    return IdentityCheck(
        name=name,
        tolerance=tolerance,
        worst=worst,
        passed=bool(worst <= tolerance),
        detail=detail,
    )


def _expanded_orders(joint, k_cap):
    """Literal-recursion expanded G_k for k = 2..min(N, k_cap)."""
    top = min(joint.n, k_cap)
    p_tables = [marginalize(joint, k) for k in range(1, top + 1)]
    out = {}
    for k in range(2, top + 1):
        out[k] = correlation_recursive_expanded(p_tables[:k])
    return p_tables, out


def run_identity_suite(n: int = 6, trials: int = 50, seed: int = 1) -> list[IdentityCheck]:
    """Run every cross-module identity; deterministic in the seed."""
    rng = np.random.default_rng(seed)
    joints = [random_joint(rng, n_max=max(2, n)) for _ in range(trials)]
    checks: list[IdentityCheck] = []

    # Correlation tables: recursion vs partition sum, symmetry, sign flip,
    # and the round trip back to probability tables.
    worst_eq = worst_sym = worst_flip = worst_round = 0.0
    for joint in joints:
        p_tables, expanded = _expanded_orders(joint, k_cap=min(6, n))
        for k, exp_g in expanded.items():
            part = correlation_partition(p_tables[:k])
            rec_compressed = [
                exp_g[(1,) * m + (0,) * (k - m)] for m in range(k + 1)
            ]
            worst_eq = max(
                worst_eq,
                max(abs(a - b) for a, b in zip(rec_compressed, part.values)),
            )
            for pattern, value in exp_g.items():
                canonical = exp_g[tuple(sorted(pattern, reverse=True))]
                worst_sym = max(worst_sym, abs(value - canonical))
                if pattern[0] == 1:
                    flipped = (0,) + pattern[1:]
                    worst_flip = max(worst_flip, abs(value + exp_g[flipped]))
        top = len(p_tables)
        g_tables = [correlation_partition(p_tables[:k]) for k in range(1, top + 1)]
        rebuilt = probability_from_correlations(g_tables)
        worst_round = max(
            worst_round,
            max(abs(a - b) for a, b in zip(rebuilt.values, p_tables[-1].values)),
        )
    checks.append(_check("g-recursive-vs-partition", 1e-12, worst_eq))
    checks.append(_check("g-permutation-symmetry", 1e-12, worst_sym))
    checks.append(_check("g-flip-antisymmetry", 1e-12, worst_flip))
    checks.append(_check("p-g-roundtrip", 1e-12, worst_round))

    # iid joints carry no genuine correlation at any order >= 2.  Dyadic
    # atom probabilities keep the joint exactly representable, so any
    # residue here is a logic error, not representation noise.
    worst_iid = 0.0
    for _ in range(max(3, trials // 10)):
        p = int(rng.integers(4, 61)) / 64.0
        joint = build_mixture_joint(MixtureSpec(((p, 1.0),)), max(2, n))
        coeffs = measure_coefficients(joint)
        worst_iid = max(worst_iid, max(abs(c) for c in coeffs[1:]))
    checks.append(_check("iid-correlation-free", 1e-10, worst_iid))

    # Measuring every coefficient of a joint and rerunning the counting
    # machinery at full order must reproduce the joint's own count pmf.
    worst_oracle = 0.0
    for joint in joints:
        if joint.n > 7:
            continue
        coeffs = measure_coefficients(joint)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TrailingZeroWarning)
            rebuilt = finite_count_pmf(
                CorrelationModel.from_coefficients(coeffs, n=joint.n)
            )
        direct = count_pmf_from_joint(joint)
        worst_oracle = max(
            worst_oracle,
            max(abs(a - b) for a, b in zip(rebuilt.values, direct.values)),
        )
    checks.append(_check("oracle-vs-finite-pmf", 1e-10, worst_oracle))

    # Normalization and mean hold for arbitrary real coefficients.  Far
    # outside admissibility the true entries oscillate at huge amplitude,
    # so each model's budget is the larger of the strict tolerance and its
    # own cancellation estimate scaled by the recurrence depth; the checks
    # report the worst error-to-budget ratio.
    worst_norm = worst_mean = 0.0
    raw_norm = raw_mean = 0.0
    n_inadmissible = 0
    lowest = 0.0
    for i in range(trials):
        model = random_model(rng, n=(10, 100, 1000)[i % 3])
        pmf = finite_count_pmf(model)
        if not pmf.admissible:
            n_inadmissible += 1
            lowest = min(lowest, pmf.most_negative()[1])
        e_norm = abs(pmf.total_mass() - 1.0)
        e_mean = abs(pmf.mean() - model.coefficient(1))
        raw_norm = max(raw_norm, e_norm)
        raw_mean = max(raw_mean, e_mean)
        worst_norm = max(worst_norm, e_norm / max(1e-9, model.n * pmf.error_estimate))
        worst_mean = max(
            worst_mean, e_mean / max(1e-8, 10.0 * model.n * pmf.error_estimate)
        )
    checks.append(
        _check(
            "finite-pmf-normalization",
            1.0,
            worst_norm,
            detail=f"error vs max(1e-9, N*err_est); raw worst {raw_norm:.3e}; "
            f"{n_inadmissible}/{trials} models inadmissible, "
            f"most negative entry {lowest:.3e}",
        )
    )
    checks.append(
        _check(
            "finite-pmf-mean-identity",
            1.0,
            worst_mean,
            detail=f"error vs max(1e-8, 10*N*err_est); raw worst {raw_mean:.3e}",
        )
    )

    # First-order models reduce to the Poisson law.
    worst_poisson = 0.0
    for lam in (0.5, 1.0, 2.0, 4.0):
        pmf = limit_pmf(CorrelationModel.from_coefficients([lam]))
        for s in range(min(41, len(pmf.values))):
            expected = math.exp(-lam) * lam ** s / math.factorial(s)
            worst_poisson = max(worst_poisson, abs(pmf.values[s] - expected))
    checks.append(_check("poisson-reduction", 1e-12, worst_poisson))

    # Fourier sum of the pmf matches the closed-form characteristic function.
    worst_cf = 0.0
    for _ in range(min(trials, 20)):
        model = random_admissible_model(rng)
        pmf = limit_pmf(model, mass_tolerance=1e-12)
        grid = np.linspace(0.0, 2.0 * math.pi, 32)
        cf = char_fn(model, grid)
        s = np.arange(len(pmf.values))
        p = np.asarray(pmf.values)
        for u, chi in zip(cf.u, cf.chi):
            series = complex(np.sum(p * np.exp(1j * u * s)))
            worst_cf = max(worst_cf, abs(series - chi))
    checks.append(_check("cf-pmf-duality", 1e-8, worst_cf))

    return checks
