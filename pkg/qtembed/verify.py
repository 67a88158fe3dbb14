"""
Numerical verification of embeddings.

Every check draws random points of the moment-angle manifold and random
torus elements from a per-trial generator seeded with ``(seed, trial)``, so
a report depends only on the configuration and not on evaluation order.
"""

from collections.abc import Sequence

import numpy as np
import structlog
from pydantic import BaseModel, Field, model_validator
from sympy import ImmutableMatrix, Rational

from .chardata import CharMatrix
from .config import Settings, get_settings
from .embed import EmbeddingDescription, evaluate_embedding
from .errors import NonInteriorPointError
from .momentangle import ZPoint, sample_zpoint
from .monomials import Monomial, evaluate_monomial
from .polytope import (
    FaceLattice,
    HPolytope,
    enumerate_faces,
    image_point,
    interior_point,
)
from .reports import Report, ReportBundle
from .toric import is_positive_definite, log_jacobian, log_modulus_map

log = structlog.get_logger(__name__)

# A torus element is rejected as "maybe in K" when every pairing with
# Lambda is this close to an integer.
LAMBDA_MARGIN = 1e-3


class VerifyConfig(BaseModel):
    """
    Sampling parameters of the verification harness.

    Attributes:
        samples: Trials per check
        seed: Seed of the per-trial random generators
        tol_eq: Deviation below which two values count as equal
        tol_sep: Distance above which two images count as separated
    """

    samples: int = Field(default=200, ge=1)
    seed: int = Field(default=0, ge=0)
    tol_eq: float = 1e-9
    tol_sep: float = 1e-6

    @model_validator(mode="after")
    def check_tolerances(self) -> "VerifyConfig":
        if not self.tol_sep > self.tol_eq > 0:
            raise ValueError("need tol_sep > tol_eq > 0")
        return self

    @classmethod
    def from_settings(
        cls, settings: Settings | None = None, **overrides
    ) -> "VerifyConfig":
        settings = settings or get_settings()
        values = {
            "samples": settings.samples,
            "seed": settings.seed,
            "tol_eq": settings.tol_eq,
            "tol_sep": settings.tol_sep,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def eval_monomial(a: Monomial | Sequence[int], z: np.ndarray) -> complex:
    """Value of the monomial with exponent vector ``a`` at ``z``."""
    exponents = a.exponents if isinstance(a, Monomial) else tuple(a)
    return evaluate_monomial(exponents, z)


class Sampler:
    """Random points of the moment-angle manifold over P."""

    def __init__(
        self, P: HPolytope, cm: CharMatrix, lattice: FaceLattice | None = None
    ):
        self.P = P
        self.cm = cm
        self.lattice = lattice or enumerate_faces(P)
        self.lam = np.array(cm.lam.tolist(), dtype=float).reshape(cm.lam.shape)
        self.c = np.array(cm.c.tolist(), dtype=float).reshape(cm.c.shape)

    def interior(self, rng: np.random.Generator) -> ZPoint:
        weights = [int(w) for w in rng.integers(1, 1000, size=self.lattice.f0)]
        total = sum(weights)
        vertices = self.lattice.vertices
        p = tuple(
            Rational(sum(w * v.coords[k] for w, v in zip(weights, vertices)), total)
            for k in range(self.P.n)
        )
        return sample_zpoint(self.P, p, rng.random(self.P.m))

    def boundary(self, rng: np.random.Generator) -> ZPoint:
        """A point over a vertex or over an edge, chosen at random."""
        if rng.random() < 0.5:
            v = self.lattice.vertices[int(rng.integers(self.lattice.f0))]
            p = v.coords
        else:
            e = self.lattice.edges[int(rng.integers(self.lattice.f1))]
            s = Rational(int(rng.integers(1, 10)), 10)
            v0, v1 = e.endpoints
            p = tuple(s * a + (1 - s) * b for a, b in zip(v0.coords, v1.coords))
        return sample_zpoint(self.P, p, rng.random(self.P.m))

    def torus(self, rng: np.random.Generator) -> np.ndarray:
        """Angles (in turns) of a random element of ``T^m``."""
        return rng.random(self.P.m)

    def kernel(self, rng: np.random.Generator) -> np.ndarray:
        """Angles of a random element of K, i.e. ``C tau``."""
        if self.cm.k == 0:
            return np.zeros(self.P.m)
        return self.c @ rng.random(self.cm.k)

    def outside_kernel(self, rng: np.random.Generator) -> np.ndarray:
        """Angles of a random element whose image under Lambda is not 1."""
        while True:
            theta = rng.random(self.P.m)
            pairing = self.lam @ theta
            if np.any(np.abs(pairing - np.round(pairing)) > LAMBDA_MARGIN):
                return theta


def _act(theta: np.ndarray, z: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * theta) * z


def _values(description: EmbeddingDescription, z: np.ndarray) -> np.ndarray:
    values = [evaluate_monomial(a, z) for a in description.coordinates]
    return np.array(values, dtype=complex)


def _distance(
    description: EmbeddingDescription, P: HPolytope, z: np.ndarray, w: np.ndarray
) -> float:
    """
    Distance of two images: Euclidean in the affine case, after aligning
    phases of the unit representatives in the projective case; the moment
    map parts are included in both.
    """
    x, u = evaluate_embedding(description, P, z)
    y, v = evaluate_embedding(description, P, w)
    if description.mode == "projective":
        s = np.vdot(v, u)
        phase = s / abs(s) if abs(s) > 0 else 1.0
        v = phase * v
    return float(np.hypot(np.linalg.norm(x - y), np.linalg.norm(u - v)))


def _rng(config: VerifyConfig, check: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, check, trial])


def check_equivariance(
    description: EmbeddingDescription, sampler: Sampler, config: VerifyConfig
) -> Report:
    """
    ``phi_a(t z) = t^a phi_a(z)`` for random t in ``T^m``, and every
    coordinate scales by the common factor ``tau^b~`` for t in K.
    """
    report = Report(check="equivariance")
    a = np.array(description.coordinates, dtype=float).reshape(-1, sampler.P.m)
    b_tilde = np.array(description.character, dtype=float)
    worst = 0.0
    for trial in range(config.samples):
        rng = _rng(config, 1, trial)
        point = sampler.interior(rng) if trial % 4 else sampler.boundary(rng)
        z = point.z
        before = _values(description, z)
        scale = np.maximum(1.0, np.abs(before))

        theta = sampler.torus(rng)
        after = _values(description, _act(theta, z))
        expected = np.exp(2j * np.pi * (a @ theta)) * before
        dev = float(np.max(np.abs(after - expected) / scale, initial=0.0))
        worst = max(worst, dev)
        if dev >= config.tol_eq:
            report.fail("torus", f"T^m equivariance off by {dev:.3g}", trial=trial)

        if sampler.cm.k:
            tau = rng.random(sampler.cm.k)
            theta = sampler.c @ tau
            factor = np.exp(2j * np.pi * float(b_tilde @ tau)) if b_tilde.size else 1.0
        else:
            theta, factor = np.zeros(sampler.P.m), 1.0
        after = _values(description, _act(theta, z))
        dev = float(np.max(np.abs(after - factor * before) / scale, initial=0.0))
        worst = max(worst, dev)
        if dev >= config.tol_eq:
            report.fail(
                "kernel",
                f"K does not act by one common factor ({dev:.3g})",
                trial=trial,
            )
    report.details["max_deviation"] = worst
    report.details["trials"] = config.samples
    return report


def check_modulus(
    description: EmbeddingDescription, sampler: Sampler, config: VerifyConfig
) -> Report:
    """``|phi_a(z)| = prod |z_k|^|a_k|``: conjugation does not change moduli."""
    report = Report(check="modulus")
    worst = 0.0
    for trial in range(config.samples):
        z = sampler.interior(_rng(config, 2, trial)).z
        for a in description.coordinates:
            value = abs(evaluate_monomial(a, z))
            expected = float(np.prod(np.abs(z) ** np.abs(np.array(a))))
            dev = abs(value - expected) / max(expected, 1e-300)
            worst = max(worst, dev)
            if dev > 1e-12:
                report.fail("modulus", f"|phi| off by {dev:.3g} relative", trial=trial)
    report.details["max_relative_deviation"] = worst
    return report


def check_nonvanishing(
    description: EmbeddingDescription, sampler: Sampler, config: VerifyConfig
) -> Report:
    """
    Some coordinate is nonzero at every sample; in projective mode, the
    certificate coordinate of every vertex of the face below z is nonzero.
    """
    report = Report(check="nonvanishing")
    certificate = {tuple(c.vertex): c.entry for c in description.certificate}
    for trial in range(config.samples):
        rng = _rng(config, 3, trial)
        point = sampler.interior(rng) if trial % 2 else sampler.boundary(rng)
        values = _values(description, point.z)
        if description.mode == "projective" and not np.any(values != 0):
            report.fail(
                "all_vanish", "every homogeneous coordinate vanishes", trial=trial
            )
            continue
        zero_facets = {k for k, zk in enumerate(point.z) if zk == 0}
        for v in sampler.lattice.vertices:
            if not zero_facets <= set(v.index_set):
                continue
            key = tuple(i + 1 for i in v.index_set)
            if key in certificate and values[certificate[key]] == 0:
                report.fail(
                    "certificate",
                    f"certificate coordinate of vertex {list(key)} vanishes",
                    vertex=list(key),
                    trial=trial,
                )
    return report


def check_separation(
    description: EmbeddingDescription, sampler: Sampler, config: VerifyConfig
) -> Report:
    """
    Orbits of K are separated and K-orbits are collapsed.

    Each trial checks that (i) two different interior base points have
    different images, (ii) ``z`` and ``t z`` with ``Lambda t != 1`` have
    different images, and (iii) ``z`` and ``k z`` with k in K have the same
    image. Boundary samples only run (iii), since the stabiliser there is
    larger than K. Distances between ``tol_eq`` and ``tol_sep`` in (i) and
    (ii) are counted as inconclusive.
    """
    report = Report(check="separation")
    P = sampler.P
    closest = np.inf
    for trial in range(config.samples):
        rng = _rng(config, 4, trial)
        interior = trial % 4 != 0
        point = sampler.interior(rng) if interior else sampler.boundary(rng)
        z = point.z

        dist = _distance(description, P, z, _act(sampler.kernel(rng), z))
        if dist >= config.tol_eq:
            report.fail("kernel_orbit", f"z and k z map {dist:.3g} apart", trial=trial)
        if not interior:
            continue

        for code, other in (
            ("base_point", sampler.interior(rng)),
            ("torus_orbit", None),
        ):
            if other is None:
                w = _act(sampler.outside_kernel(rng), z)
            elif other.base == point.base:
                continue
            else:
                w = other.z
            dist = _distance(description, P, z, w)
            closest = min(closest, dist)
            if dist <= config.tol_eq:
                report.fail(code, f"distinct orbits map {dist:.3g} apart", trial=trial)
            elif dist <= config.tol_sep:
                report.inconclusive += 1
    report.details["closest_separated"] = None if closest == np.inf else closest
    return report


def check_rank(
    P: HPolytope,
    cm: CharMatrix,
    p: Sequence,
    trivial: bool = True,
    rel_tol: float = 1e-5,
) -> Report:
    """
    Positive definiteness of the log-modulus Jacobian at an interior point.

    For toric data (``Lambda = A^T``) the analytic matrix is also compared
    with a central finite difference Jacobian of ``x -> A^T log(A x + b)``.
    Otherwise, for a trivial character, the form ``Lambda diag(1/beta)
    Lambda^T`` is checked for positive definiteness.

    Raises:
        NonInteriorPointError: If p is not strictly inside P
    """
    beta_exact = image_point(P, p)
    if any(v <= 0 for v in beta_exact):
        raise NonInteriorPointError(f"point {tuple(str(c) for c in p)} is not interior")
    beta = np.array([float(v) for v in beta_exact])
    report = Report(check="rank")

    toric = cm.lam == ImmutableMatrix(P.A.T)
    if toric:
        a = np.array(P.A.tolist(), dtype=float)
        g = log_jacobian(beta, a)
        x = np.array([float(c) for c in p])
        fd = np.zeros_like(g)
        for i in range(P.n):
            h = 1e-5 * max(1.0, abs(x[i]))
            step = np.zeros(P.n)
            step[i] = h
            forward = log_modulus_map(P, x + step)
            fd[:, i] = (forward - log_modulus_map(P, x - step)) / (2 * h)
        fd = (fd + fd.T) / 2
        error = float(np.linalg.norm(g - fd) / np.linalg.norm(g))
        report.details["fd_relative_error"] = error
        if error > rel_tol:
            report.fail(
                "finite_difference",
                f"Jacobian differs from finite differences by {error:.3g}",
            )
    elif trivial:
        lam = np.array(cm.lam.tolist(), dtype=float)
        g = log_jacobian(beta, lam.T)
    else:
        report.details["skipped"] = (
            "no certificate for nontrivial characters of non-toric data"
        )
        return report

    if not np.array_equal(g, g.T):
        report.fail("not_symmetric", "Jacobian is not exactly symmetric")
    if not is_positive_definite(g):
        report.fail("not_positive_definite", "Cholesky factorisation failed")
    report.details["condition_number"] = float(np.linalg.cond(g))
    report.details["toric"] = toric
    return report


def run_all(
    description: EmbeddingDescription,
    P: HPolytope,
    cm: CharMatrix,
    config: VerifyConfig,
    lattice: FaceLattice | None = None,
) -> ReportBundle:
    """Run every check and collect the reports."""
    sampler = Sampler(P, cm, lattice)
    p = interior_point(P, np.random.default_rng([config.seed, 5]))
    bundle = ReportBundle(
        name=P.name or "verify",
        reports=[
            check_equivariance(description, sampler, config),
            check_modulus(description, sampler, config),
            check_nonvanishing(description, sampler, config),
            check_separation(description, sampler, config),
            check_rank(P, cm, p, trivial=not any(description.character)),
        ],
    )
    log.info(
        "verify_finished",
        name=bundle.name,
        passed=bundle.passed,
        failures=sum(len(r.failures) for r in bundle.reports),
        seed=config.seed,
        samples=config.samples,
    )
    return bundle
