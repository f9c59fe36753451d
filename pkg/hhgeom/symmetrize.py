"""Schwarz symmetrization profiles, the cylinder family R_t and the volume-matching slab parameter t*."""
from dataclasses import dataclass, replace
from functools import partial
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.integrate import simpson
from scipy.special import gamma

from hhgeom.constants import DEFAULT_KNOTS, EPS_NUM
from hhgeom.marginals import Subspace, section_volume
from hhgeom.polytope import Polytope, is_symmetric, support, volume
from hhgeom.reports import PropertyReport
from hhgeom.utils import parallel_map


def ball_volume(k: int) -> float:
    """Computes the volume omega_k of the k-dimensional Euclidean unit ball."""
    return float(np.pi ** (k / 2) / gamma(k / 2 + 1))


@dataclass(frozen=True, eq=False)
class SchwarzProfile:
    """The radius function of the Schwarz symmetral sigma_u(K), sampled at knots.

    :param axis: Unit axis u.
    :param dim: Ambient dimension n.
    :param t: Sorted knots covering [-h(K, -u), h(K, u)].
    :param radius: Radii r_t with |K cap (t u + u^perp)| = r_t^(n - 1) omega_(n - 1).
    """

    axis: np.ndarray
    dim: int
    t: np.ndarray
    radius: np.ndarray

    @property
    def t_range(self) -> tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    @property
    def section_volumes(self) -> np.ndarray:
        """Get the section volumes r_t^(n - 1) omega_(n - 1) at the knots."""
        return ball_volume(self.dim - 1) * self.radius ** (self.dim - 1)


def schwarz_profile(
    K: Polytope, u: np.ndarray, knot_count: int = DEFAULT_KNOTS, jobs: int = 1
) -> SchwarzProfile:
    """Computes the Schwarz symmetrization profile of a body about the axis lin(u).

    :param K: A body in R^n, n >= 2.
    :param u: A nonzero axis direction.
    :param knot_count: Number of uniform knots over the support, at least 3.
    :param jobs: Number of worker processes for the section computations.
    :return: The profile.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    length = np.linalg.norm(u)

    if length == 0:
        raise ValueError("Symmetrization axis must be nonzero.")

    if knot_count < 3:
        raise ValueError(f"A Schwarz profile needs at least 3 knots, got {knot_count}.")

    if K.dim < 2:
        raise ValueError("Schwarz symmetrization needs dimension at least 2.")

    u = u / length
    H = Subspace.from_vectors([u])
    t = np.linspace(-support(K, -u), support(K, u), knot_count)

    volumes = np.array(parallel_map(partial(section_volume, K, H), list(t), jobs=jobs, desc="Sections"))
    radius = (volumes / ball_volume(K.dim - 1)) ** (1 / (K.dim - 1))

    return SchwarzProfile(axis=u, dim=K.dim, t=t, radius=radius)


def schwarz_volume(p: SchwarzProfile) -> float:
    """Integrates r_t^(n - 1) omega_(n - 1) over the knots by composite Simpson quadrature."""
    if len(p.t) < 3:
        raise ValueError("Schwarz volume needs at least 3 knots.")

    return float(simpson(p.section_volumes, x=p.t))


def profile_radius(p: SchwarzProfile, t: np.ndarray | float) -> np.ndarray | float:
    """Interpolates the radius r_t linearly between knots (0 outside the support)."""
    return np.interp(t, p.t, p.radius, left=0.0, right=0.0)


def save_profile_csv(p: SchwarzProfile, path: Path) -> None:
    """Saves the knots of a profile as a CSV with columns t, r_t."""
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({"t": p.t, "r_t": p.radius}).to_csv(path, index=False)


@dataclass(frozen=True, eq=False)
class CylinderFamily:
    """The cylinders R_t = (-t e + M_t') + [-t0 e, t0 e] built from the Schwarz symmetral C' of a body.

    :param base_profile: The Schwarz profile of C (that of C' = sigma_e(C)).
    :param t0: The support value h(C, e).
    :param body_volume: The volume |C'| = |C|.
    :param t: The family parameter in [0, t0].
    """

    base_profile: SchwarzProfile
    t0: float
    body_volume: float
    t: float = 0.0

    def at(self, t: float) -> "CylinderFamily":
        """Get the family member with parameter t."""
        return replace(self, t=t)


def cylinder_family(
    C: Polytope, u: np.ndarray | None = None, knot_count: int = DEFAULT_KNOTS, jobs: int = 1
) -> CylinderFamily:
    """Builds the cylinder family of a body along an axis (default e_1).

    :param C: A body, 0-symmetric for the family to sandwich its symmetral.
    :param u: Axis direction. Defaults to e_1.
    :param knot_count: Number of profile knots.
    :param jobs: Number of worker processes.
    :return: The family at t = 0.
    """
    u = np.eye(C.dim)[0] if u is None else np.asarray(u, dtype=float)
    profile = schwarz_profile(C, u, knot_count, jobs)

    return CylinderFamily(base_profile=profile, t0=support(C, profile.axis), body_volume=volume(C))


def _slice_volume(fam: CylinderFamily, t: float) -> float:
    """|R_t| = |M_t'| 2 t0."""
    n = fam.base_profile.dim

    return ball_volume(n - 1) * float(profile_radius(fam.base_profile, t)) ** (n - 1) * 2 * fam.t0


def cylinder_slice_volume(fam: CylinderFamily) -> float:
    """Computes |R_t| for the family parameter t in [0, t0]."""
    if not 0 <= fam.t <= fam.t0:
        raise ValueError(f"Cylinder parameter must lie in [0, {fam.t0}], got {fam.t}.")

    return _slice_volume(fam, fam.t)


def find_tstar(fam: CylinderFamily, tol: float = 1e-10) -> float:
    """Finds the smallest t* in [0, t0] with |R_t*| = |C'| by bisection on the nonincreasing map t -> |R_t|.

    :param fam: A cylinder family.
    :param tol: Volume tolerance, relative to |C'|.
    :return: The parameter t*.
    """
    if tol <= 0:
        raise ValueError(f"Tolerance must be positive, got {tol}.")

    target = fam.body_volume
    volume_tol = tol * max(1.0, target)
    start, end = _slice_volume(fam, 0.0), _slice_volume(fam, fam.t0)

    if target > start + volume_tol or target < end - volume_tol:
        raise ValueError(
            f"Target volume {target:.6g} lies outside [|R_t0|, |R_0|] = [{end:.6g}, {start:.6g}]; the profile is broken."
        )

    if start <= target + volume_tol:
        return 0.0

    low, high = 0.0, fam.t0
    while high - low > 1e-14 * max(1.0, fam.t0):
        middle = (low + high) / 2
        if _slice_volume(fam, middle) <= target:
            high = middle
        else:
            low = middle

    return high


def slab_membership_check(
    K: Polytope, fam: CylinderFamily, samples: int, seed: int
) -> PropertyReport:
    """Tests the inclusions R_t0 in C' in R_0 on random points.

    Only the axial coordinate s and the distance rho to the axis matter for these bodies of revolution. Points of
    R_t0 are checked against the radius of C' at s; points of C' are checked against |s| <= t0 and the radius of R_0.

    :param K: The body C whose symmetral is tested.
    :param fam: Its cylinder family.
    :param samples: Number of points drawn from each body.
    :param seed: Random seed.
    :return: A property report; a body that is not 0-symmetric typically shows violations.
    """
    profile = fam.base_profile
    n = profile.dim
    rng = np.random.default_rng(seed)
    scale = max(1.0, float(profile.radius.max()))

    # Points of R_t0: uniform axial position in [-t0, t0], uniform in the disc of radius r(t0)
    axial = rng.uniform(-fam.t0, fam.t0, size=samples)
    rho = profile_radius(profile, fam.t0) * rng.uniform(0, 1, size=samples) ** (1 / (n - 1))
    inner_margins = profile_radius(profile, axial) - rho

    # Points of C': axial density proportional to the section volume, then uniform in the disc
    weights = profile.section_volumes
    cumulative = np.concatenate([[0.0], np.cumsum((weights[1:] + weights[:-1]) / 2 * np.diff(profile.t))])
    axial = np.interp(rng.uniform(0, cumulative[-1], size=samples), cumulative, profile.t)
    rho = profile_radius(profile, axial) * rng.uniform(0, 1, size=samples) ** (1 / (n - 1))
    outer_margins = np.minimum(fam.t0 - np.abs(axial), profile_radius(profile, 0.0) - rho)

    margins = np.concatenate([inner_margins, outer_margins])
    tolerance = EPS_NUM * scale

    return PropertyReport(
        name="slab_membership",
        trials=2 * samples,
        violations=int(np.sum(margins < -tolerance)),
        worst_margin=float(margins.min()),
        tolerance=tolerance,
        seed=seed,
        details={
            "inner_violations": int(np.sum(inner_margins < -tolerance)),
            "outer_violations": int(np.sum(outer_margins < -tolerance)),
            "symmetric": is_symmetric(K),
        },
    )
