"""Checkerboard copulas: d-dimensional mass grids with uniform axis marginals.

A checkerboard copula partitions the unit cube into an axis-aligned grid of
``m_1 x ... x m_d`` cells and places a nonnegative probability mass on each
cell, with the density uniform inside every cell.  The induced CDF is the
multilinear interpolation of the cumulative cell masses, so it is exact at
grid vertices, 1-Lipschitz in each coordinate, and sits between the
Frechet-Hoeffding envelopes.  Every copula handled by this package is
represented this way; singular copulas (such as the comonotone one) appear
as grid approximations whose measures converge as the resolution grows.

Mass arrays are stored flat in row-major order (last axis fastest) and are
frozen after construction, so values are safe to share across threads.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CopulaValidationError, InvalidArgumentError

#: Validity tolerance for total mass and marginal uniformity.
VALIDITY_TOL = 1e-9


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= int(v)
    return out


@dataclass(frozen=True, eq=False, repr=False)
class CheckerboardCopula:
    """Immutable mass grid over the unit cube.

    Attributes:
        resolutions: cells per axis, one positive integer per dimension.
        mass: flat nonnegative array of length prod(resolutions), row-major
            with the last axis fastest.
    """

    resolutions: tuple[int, ...]
    mass: np.ndarray

    def __post_init__(self):
        res = tuple(int(m) for m in self.resolutions)
        if not res or any(m < 1 for m in res):
            raise InvalidArgumentError(f"resolutions must be positive, got {res}")
        mass = np.array(self.mass, dtype=np.float64, copy=True).ravel()
        if mass.size != _prod(res):
            raise InvalidArgumentError(
                f"mass length {mass.size} does not match grid size {_prod(res)}"
            )
        mass.setflags(write=False)
        object.__setattr__(self, "resolutions", res)
        object.__setattr__(self, "mass", mass)

    def __repr__(self) -> str:
        return f"CheckerboardCopula(resolutions={self.resolutions})"

    @property
    def dims(self) -> int:
        return len(self.resolutions)

    @property
    def grid(self) -> np.ndarray:
        """Read-only view of the mass array shaped as the grid."""
        return self.mass.reshape(self.resolutions)

    # ------------------------------------------------------------------
    # pointwise evaluation
    # ------------------------------------------------------------------

    def _check_point(self, point) -> np.ndarray:
        p = np.asarray(point, dtype=np.float64).ravel()
        if p.size != self.dims:
            raise InvalidArgumentError(
                f"point has {p.size} coordinates, copula has {self.dims}"
            )
        if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
            raise InvalidArgumentError(f"point {p.tolist()} outside the unit cube")
        return p

    def cdf(self, point) -> float:
        """CDF at a point of the unit cube.

        Multilinear in each coordinate: the value is the sum of cell masses
        weighted by the fraction of each cell lying below the point.
        """
        p = self._check_point(point)
        acc = self.grid
        # Contract the last remaining axis with its overlap fractions.
        for axis in range(self.dims - 1, -1, -1):
            m = self.resolutions[axis]
            w = np.clip(p[axis] * m - np.arange(m), 0.0, 1.0)
            acc = acc @ w
        return float(acc)

    def box_mass(self, box: GridBox) -> float:
        """Probability mass of an axis-aligned box.

        Computed as the signed sum of the CDF over the 2^d box vertices
        (even number of lower coordinates -> +, odd -> -).  Equals the sum
        of contained cell masses whenever the box is grid aligned.
        """
        if box.dims != self.dims:
            raise InvalidArgumentError(
                f"box has {box.dims} axes, copula has {self.dims}"
            )
        terms = []
        for picks in itertools.product((0, 1), repeat=self.dims):
            vertex = [box.lower[k] if pick else box.upper[k] for k, pick in enumerate(picks)]
            sign = 1.0 if sum(picks) % 2 == 0 else -1.0
            terms.append(sign * self.cdf(vertex))
        return max(math.fsum(terms), 0.0)

    def sub_box_mass(self, box: GridBox, tail_point) -> float:
        """Mass of {first k coordinates in ``box``} and {remaining <= tail_point}.

        ``box`` covers the leading ``k < dims`` axes; the alternating sum runs
        over its 2^k vertices only, with the tail coordinates held fixed.
        Nonnegative and nondecreasing in every tail coordinate.
        """
        k = box.dims
        if not 1 <= k < self.dims:
            raise InvalidArgumentError(
                f"box must cover 1..{self.dims - 1} leading axes, got {k}"
            )
        tail = np.asarray(tail_point, dtype=np.float64).ravel()
        if tail.size != self.dims - k:
            raise InvalidArgumentError(
                f"tail point must have {self.dims - k} coordinates, got {tail.size}"
            )
        terms = []
        for picks in itertools.product((0, 1), repeat=k):
            head = [box.lower[i] if pick else box.upper[i] for i, pick in enumerate(picks)]
            sign = 1.0 if sum(picks) % 2 == 0 else -1.0
            terms.append(sign * self.cdf(list(head) + list(tail)))
        return max(math.fsum(terms), 0.0)

    # ------------------------------------------------------------------
    # structural operations
    # ------------------------------------------------------------------

    def marginal(self, axes) -> CheckerboardCopula:
        """Marginal copula over ``axes``, kept in the given order.

        Masses over the removed axes are summed per kept cell, each kept
        cell reducing a contiguous block so the result does not depend on
        how the removed axes happen to be laid out.
        """
        kept = tuple(int(a) for a in axes)
        if not kept:
            raise InvalidArgumentError("marginal requires at least one axis")
        if len(set(kept)) != len(kept):
            raise InvalidArgumentError(f"duplicate axes in {kept}")
        if any(a < 0 or a >= self.dims for a in kept):
            raise InvalidArgumentError(f"axes {kept} out of range for {self.dims} dims")
        removed = tuple(a for a in range(self.dims) if a not in kept)
        order = kept + removed
        block = np.ascontiguousarray(np.transpose(self.grid, order))
        n_kept = _prod(self.resolutions[a] for a in kept)
        sums = block.reshape(n_kept, -1).sum(axis=1)
        return CheckerboardCopula(tuple(self.resolutions[a] for a in kept), sums)

    def permute_axes(self, permutation) -> CheckerboardCopula:
        """Relabel axes: new axis ``i`` is old axis ``permutation[i]``."""
        perm = tuple(int(a) for a in permutation)
        if sorted(perm) != list(range(self.dims)):
            raise InvalidArgumentError(
                f"{perm} is not a permutation of 0..{self.dims - 1}"
            )
        moved = np.ascontiguousarray(np.transpose(self.grid, perm))
        return CheckerboardCopula(tuple(self.resolutions[a] for a in perm), moved)

    def reverse_axis(self, axis: int) -> CheckerboardCopula:
        """Flip the cell order along one axis (a strictly decreasing remap)."""
        if not 0 <= axis < self.dims:
            raise InvalidArgumentError(f"axis {axis} out of range")
        return CheckerboardCopula(self.resolutions, np.flip(self.grid, axis))

    def validate(self) -> ValidationReport:
        """Diagnostics for nonnegativity, total mass, and marginal uniformity.

        Never raises; inspect ``passed`` or use :func:`require_valid`.
        """
        g = self.grid
        min_mass = float(self.mass.min())
        max_negative = max(0.0, -min_mass)
        negative_cell = None
        if min_mass < 0.0:
            negative_cell = tuple(
                int(i) for i in np.unravel_index(int(self.mass.argmin()), self.resolutions)
            )
        total_error = abs(float(self.mass.sum()) - 1.0)
        worst_err = 0.0
        worst_axis = None
        worst_slab = None
        for axis, m in enumerate(self.resolutions):
            others = tuple(a for a in range(self.dims) if a != axis)
            slabs = g.sum(axis=others) if others else np.array(g, copy=True)
            errs = np.abs(slabs - 1.0 / m)
            j = int(errs.argmax())
            if errs[j] > worst_err:
                worst_err = float(errs[j])
                worst_axis = axis
                worst_slab = j
        passed = (
            max_negative <= VALIDITY_TOL
            and total_error <= VALIDITY_TOL
            and worst_err <= VALIDITY_TOL
        )
        return ValidationReport(
            passed=passed,
            max_negative_mass=max_negative,
            negative_cell=negative_cell,
            total_mass_error=total_error,
            worst_marginal_error=worst_err,
            worst_marginal_axis=worst_axis,
            worst_marginal_slab=worst_slab,
        )


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    max_negative_mass: float
    negative_cell: tuple[int, ...] | None
    total_mass_error: float
    worst_marginal_error: float
    worst_marginal_axis: int | None
    worst_marginal_slab: int | None

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        loc = ""
        if self.negative_cell is not None:
            loc = f" at cell {self.negative_cell}"
        return (
            f"{status}: max negative mass {self.max_negative_mass:.3e}{loc}, "
            f"total mass error {self.total_mass_error:.3e}, "
            f"worst marginal error {self.worst_marginal_error:.3e}"
            + (
                f" (axis {self.worst_marginal_axis}, slab {self.worst_marginal_slab})"
                if self.worst_marginal_axis is not None
                else ""
            )
        )


def require_valid(copula: CheckerboardCopula, context: str = "") -> CheckerboardCopula:
    """Return the copula unchanged, or raise with the validation summary."""
    report = copula.validate()
    if not report.passed:
        prefix = f"{context}: " if context else ""
        raise CopulaValidationError(prefix + report.summary(), report=report)
    return copula


@dataclass(frozen=True)
class GridBox:
    """Axis-aligned box [lower, upper] inside the unit cube."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(x) for x in self.lower)
        hi = tuple(float(x) for x in self.upper)
        if len(lo) != len(hi) or not lo:
            raise InvalidArgumentError("lower and upper must be nonempty and equal length")
        for a, b in zip(lo, hi):
            if not (0.0 <= a <= b <= 1.0):
                raise InvalidArgumentError(
                    f"box coordinates must satisfy 0 <= lower <= upper <= 1, got [{a}, {b}]"
                )
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dims(self) -> int:
        return len(self.lower)


@dataclass(frozen=True)
class GroupSplit:
    """Partition of the axes into a conditioning block and a target block."""

    u_axes: tuple[int, ...]
    v_axes: tuple[int, ...]

    def __post_init__(self):
        u = tuple(int(a) for a in self.u_axes)
        v = tuple(int(a) for a in self.v_axes)
        if not u or not v:
            raise InvalidArgumentError("both blocks must be nonempty")
        if set(u) & set(v):
            raise InvalidArgumentError(f"blocks overlap: {sorted(set(u) & set(v))}")
        if len(set(u)) != len(u) or len(set(v)) != len(v):
            raise InvalidArgumentError("duplicate axis in split")
        if any(a < 0 for a in u + v):
            raise InvalidArgumentError("negative axis index")
        object.__setattr__(self, "u_axes", u)
        object.__setattr__(self, "v_axes", v)

    def check_covers(self, dims: int) -> None:
        if sorted(self.u_axes + self.v_axes) != list(range(dims)):
            raise InvalidArgumentError(
                f"split {self.u_axes} | {self.v_axes} does not cover axes 0..{dims - 1}"
            )


# ----------------------------------------------------------------------
# reference constructions and bound functions
# ----------------------------------------------------------------------


def independence_copula(resolutions) -> CheckerboardCopula:
    """Product copula: every cell carries the product of the axis widths."""
    res = tuple(int(m) for m in resolutions)
    if not res or any(m < 1 for m in res):
        raise InvalidArgumentError(f"resolutions must be positive, got {res}")
    n = _prod(res)
    return require_valid(
        CheckerboardCopula(res, np.full(n, 1.0 / n)), "independence_copula"
    )


def comonotone_copula(dims: int, resolution: int) -> CheckerboardCopula:
    """Grid approximation of min(u_1, ..., u_d): mass 1/m on the diagonal cells.

    The underlying copula is singular; its checkerboard version spreads each
    diagonal atom uniformly over one cell, so dependence measures computed
    from it approach their ideal values as the resolution grows.
    """
    if dims < 2:
        raise InvalidArgumentError(f"need at least 2 dims, got {dims}")
    m = int(resolution)
    if m < 1:
        raise InvalidArgumentError(f"resolution must be positive, got {m}")
    mass = np.zeros(m**dims)
    stride = (m**dims - 1) // (m - 1) if m > 1 else 1  # sum of m^k for k < dims
    mass[np.arange(m) * stride] = 1.0 / m
    return require_valid(CheckerboardCopula((m,) * dims, mass), "comonotone_copula")


def frechet_lower(point) -> float:
    """Lower Frechet-Hoeffding envelope max(sum(u) - d + 1, 0).

    A pointwise bound for every copula; not itself a copula beyond two
    dimensions, so it is exposed only as a function.
    """
    p = np.asarray(point, dtype=np.float64).ravel()
    if p.size == 0 or np.any(p < 0.0) or np.any(p > 1.0) or not np.all(np.isfinite(p)):
        raise InvalidArgumentError("point must lie in the unit cube")
    return max(float(p.sum()) - p.size + 1.0, 0.0)


def frechet_upper(point) -> float:
    """Upper Frechet-Hoeffding envelope min(u_1, ..., u_d)."""
    p = np.asarray(point, dtype=np.float64).ravel()
    if p.size == 0 or np.any(p < 0.0) or np.any(p > 1.0) or not np.all(np.isfinite(p)):
        raise InvalidArgumentError("point must lie in the unit cube")
    return float(p.min())


# ----------------------------------------------------------------------
# serialization
# ----------------------------------------------------------------------


def copula_to_dict(copula: CheckerboardCopula) -> dict:
    return {
        "dims": copula.dims,
        "resolutions": list(copula.resolutions),
        "mass": copula.mass.tolist(),
    }


def copula_from_dict(payload: dict) -> CheckerboardCopula:
    try:
        dims = int(payload["dims"])
        resolutions = tuple(int(m) for m in payload["resolutions"])
        mass = payload["mass"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidArgumentError(f"malformed copula payload: {exc}") from exc
    if dims != len(resolutions):
        raise InvalidArgumentError(
            f"dims {dims} does not match {len(resolutions)} resolutions"
        )
    copula = CheckerboardCopula(resolutions, np.asarray(mass, dtype=np.float64))
    return require_valid(copula, "copula payload")


def save_copula(copula: CheckerboardCopula, path) -> None:
    Path(path).write_text(json.dumps(copula_to_dict(copula)), encoding="utf-8")


def load_copula(path) -> CheckerboardCopula:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(f"{path} is not valid JSON: {exc}") from exc
    return copula_from_dict(payload)
