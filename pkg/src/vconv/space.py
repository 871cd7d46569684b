"""Domains with nested neighbourhood bases, codomain semidistances, functions.

A box domain carries the Chebyshev (max-coordinate) metric so that a ball
intersected with the box is again a box.  A finite-set domain carries an
explicit distance table.  Neighbourhoods of a point are the closed balls of
radius ``r0 * beta**k`` clipped to the domain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    ConfigError,
    DimensionMismatchError,
    EvaluationError,
    MemberIndexError,
    PointOutsideDomainError,
)

BOX = "box"
FINITE = "finite-set"

_CONTAIN_TOL = 1e-12


def _as_matrix(pts, d: int) -> np.ndarray:
    arr = np.asarray(pts, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1) if d == 1 else arr.reshape(1, -1)
    if arr.shape[1] != d:
        raise DimensionMismatchError(f"expected points of dimension {d}, got {arr.shape[1]}")
    return np.ascontiguousarray(arr)


@dataclass(frozen=True, eq=False)
class DomainSpec:
    kind: str
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    points: np.ndarray | None = None
    distances: np.ndarray | None = None
    r0: float | None = None
    beta: float = 0.5

    def __post_init__(self):
        if self.kind == BOX:
            lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
            hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
            if lo.shape != hi.shape or lo.ndim != 1:
                raise ConfigError("box corners must be 1-d arrays of equal length")
            if not np.all(lo < hi):
                raise ConfigError("box corners must satisfy lower < upper on every axis")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        elif self.kind == FINITE:
            pts = np.asarray(self.points, dtype=float)
            if pts.ndim == 1:
                pts = pts.reshape(-1, 1)
            if len(pts) == 0:
                raise ConfigError("finite-set domain needs at least one point")
            if len(np.unique(pts, axis=0)) != len(pts):
                raise ConfigError("finite-set points must be distinct")
            if self.distances is None:
                dist = np.max(np.abs(pts[:, None, :] - pts[None, :, :]), axis=2)
            else:
                dist = np.asarray(self.distances, dtype=float)
            _check_distance_table(dist, len(pts))
            object.__setattr__(self, "points", np.ascontiguousarray(pts))
            object.__setattr__(self, "distances", dist)
        else:
            raise ConfigError(f"unknown domain kind {self.kind!r}")
        if not 0 < self.beta < 1:
            raise ConfigError("shrink factor beta must lie in (0, 1)")
        if self.r0 is None:
            object.__setattr__(self, "r0", self.diameter / 4 if self.diameter > 0 else 1.0)
        if not self.r0 > 0:
            raise ConfigError("base radius r0 must be > 0")
        object.__setattr__(self, "r0", float(self.r0))
        object.__setattr__(self, "beta", float(self.beta))

    @classmethod
    def box(cls, lower, upper, r0=None, beta=0.5) -> "DomainSpec":
        return cls(BOX, lower=lower, upper=upper, r0=r0, beta=beta)

    @classmethod
    def interval(cls, a: float, b: float, r0=None, beta=0.5) -> "DomainSpec":
        return cls.box([a], [b], r0=r0, beta=beta)

    @classmethod
    def finite(cls, points, distances=None, r0=None, beta=0.5) -> "DomainSpec":
        return cls(FINITE, points=points, distances=distances, r0=r0, beta=beta)

    @property
    def dim(self) -> int:
        return len(self.lower) if self.kind == BOX else self.points.shape[1]

    @property
    def diameter(self) -> float:
        if self.kind == BOX:
            return float(np.max(self.upper - self.lower))
        return float(self.distances.max())

    def contains(self, pts) -> np.ndarray:
        x = _as_matrix(pts, self.dim)
        if self.kind == BOX:
            return np.all((x >= self.lower - _CONTAIN_TOL) & (x <= self.upper + _CONTAIN_TOL), axis=1)
        return np.array([self._index(row) is not None for row in x])

    def _index(self, point) -> int | None:
        hits = np.flatnonzero(np.all(self.points == point, axis=1))
        return int(hits[0]) if len(hits) else None

    def point(self, a) -> np.ndarray:
        """Validate ``a`` as a single domain point and return it as a 1-d array."""
        x = _as_matrix(a, self.dim)
        if len(x) != 1:
            raise DimensionMismatchError("expected a single point")
        if not self.contains(x)[0]:
            raise PointOutsideDomainError(x[0])
        p = x[0].copy()
        if self.kind == BOX:
            p = np.clip(p, self.lower, self.upper)
        return p

    def distance(self, a: np.ndarray, pts: np.ndarray) -> np.ndarray:
        """Distance from domain point ``a`` to every row of ``pts``."""
        if self.kind == BOX:
            return np.max(np.abs(pts - a), axis=1)
        i = self._index(a)
        if i is None:
            raise PointOutsideDomainError(a)
        idx = [self._index(row) for row in pts]
        if any(j is None for j in idx):
            bad = pts[[j is None for j in idx].index(True)]
            raise PointOutsideDomainError(bad)
        return self.distances[i, idx]

    def radius(self, k: int) -> float:
        return self.r0 * self.beta**k

    def grid(self, depth: int) -> np.ndarray:
        """Regular whole-domain sample (box) or every point (finite set)."""
        if self.kind == FINITE:
            return self.points.copy()
        axes = [np.linspace(lo, hi, 2**depth + 1) for lo, hi in zip(self.lower, self.upper)]
        return _tensor(axes)

    def to_dict(self) -> dict:
        doc: dict = {"kind": self.kind}
        if self.kind == BOX:
            doc["lower"] = self.lower.tolist()
            doc["upper"] = self.upper.tolist()
        else:
            doc["points"] = self.points.tolist()
            doc["distances"] = self.distances.tolist()
        doc["r0"] = self.r0
        doc["beta"] = self.beta
        return doc


def _check_distance_table(dist: np.ndarray, n: int) -> None:
    if dist.shape != (n, n):
        raise ConfigError("distance table must be square and match the point list")
    if np.any(dist < 0) or np.any(np.diag(dist) != 0):
        raise ConfigError("distance table must be nonnegative with zero diagonal")
    if not np.array_equal(dist, dist.T):
        raise ConfigError("distance table must be symmetric")
    through = (dist[:, :, None] + dist[None, :, :]).min(axis=1)
    if np.any(dist > through + 1e-12):
        raise ConfigError("distance table violates the triangle inequality")


def _tensor(axes: Sequence[np.ndarray]) -> np.ndarray:
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.ascontiguousarray(np.stack([m.ravel() for m in mesh], axis=1))


@dataclass(frozen=True, eq=False)
class Region:
    """Closed ball ``B(center, radius)`` intersected with the domain."""

    center: np.ndarray
    radius: float
    domain: DomainSpec
    k: int = 0

    @property
    def lower(self) -> np.ndarray:
        return np.maximum(self.center - self.radius, self.domain.lower)

    @property
    def upper(self) -> np.ndarray:
        return np.minimum(self.center + self.radius, self.domain.upper)

    def contains(self, pts, open: bool = False) -> np.ndarray:
        x = _as_matrix(pts, self.domain.dim)
        inside = self.domain.contains(x)
        out = np.zeros(len(x), dtype=bool)
        if inside.any():
            d = self.domain.distance(self.center, x[inside])
            out[inside] = d < self.radius if open else d <= self.radius
        return out

    def mesh(self, depth: int) -> float:
        if self.domain.kind == FINITE:
            return 0.0
        return self.radius / 2**depth


def neighborhood(domain: DomainSpec, a, k: int) -> Region:
    """Base neighbourhood of ``a`` at scale ``k``."""
    if k < 0:
        raise ValueError("scale index k must be >= 0")
    p = domain.point(a)
    return Region(p, domain.radius(k), domain, k)


def effective_depth(domain: DomainSpec, depth: int, max_depth: int | None) -> int:
    if max_depth is None:
        return depth
    return min(depth, max(max_depth // domain.dim, 0))


def sample_region(region: Region, depth: int, max_depth: int | None = None) -> np.ndarray:
    """Deterministic sample of ``region`` with per-axis mesh ``radius / 2**depth``.

    Box regions get a regular grid through the centre together with the
    extreme in-domain coordinates on every axis; finite-set regions are
    enumerated.  ``max_depth`` caps the total resolution (split over axes).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    dom = region.domain
    if dom.kind == FINITE:
        d = dom.distances[dom._index(region.center)]
        return dom.points[d <= region.radius].copy()
    depth = effective_depth(dom, depth, max_depth)
    lo, hi = region.lower, region.upper
    t = np.arange(-(2**depth), 2**depth + 1) / 2**depth
    axes = []
    for c, l, h in zip(region.center, lo, hi):
        if region.radius == 0:
            axes.append(np.array([c]))
            continue
        g = c + region.radius * t
        g = g[(g >= l) & (g <= h)]
        axes.append(np.unique(np.concatenate([g, [l, h, c]])))
    return _tensor(axes)


# --- codomain -------------------------------------------------------------

SUP = "sup-norm"
EUCLID = "euclidean"
PROJ = "projection"
LINEAR = "linear"
KIND_CODES = {SUP: 0, EUCLID: 1, PROJ: 2, LINEAR: 3}


@dataclass(frozen=True)
class Member:
    """One semidistance on R^m."""

    kind: str = SUP
    index: int = 0
    weights: tuple[float, ...] | None = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in KIND_CODES:
            raise ConfigError(f"unknown semidistance kind {self.kind!r}")
        if self.kind == LINEAR:
            if not self.weights:
                raise ConfigError("linear member needs weights")
            object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if self.name is None:
            label = {PROJ: f"projection({self.index})", LINEAR: f"linear{list(self.weights or ())}"}
            object.__setattr__(self, "name", label.get(self.kind, self.kind))

    def kernel_args(self, m: int) -> tuple[int, int, np.ndarray]:
        w = np.asarray(self.weights if self.weights else [0.0] * m, dtype=float)
        return KIND_CODES[self.kind], self.index, np.ascontiguousarray(w)

    @property
    def is_norm(self) -> bool:
        return self.kind in (SUP, EUCLID)

    def rows(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        diff = U - V
        if self.kind == SUP:
            return np.max(np.abs(diff), axis=-1)
        if self.kind == EUCLID:
            return np.sqrt(np.sum(diff * diff, axis=-1))
        if self.kind == PROJ:
            return np.abs(diff[..., self.index])
        return np.abs(diff @ np.asarray(self.weights))

    def to_dict(self) -> dict:
        doc = {"kind": self.kind}
        if self.kind == PROJ:
            doc["index"] = self.index
        if self.kind == LINEAR:
            doc["weights"] = list(self.weights)
        return doc


@dataclass(frozen=True)
class SemidistanceFamily:
    dim: int = 1
    members: tuple[Member, ...] = (Member(),)

    def __post_init__(self):
        if self.dim < 1:
            raise ConfigError("codomain dimension must be >= 1")
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise ConfigError("semidistance family needs at least one member")
        for m in self.members:
            if m.kind == PROJ and not 0 <= m.index < self.dim:
                raise ConfigError(f"projection index {m.index} out of range for R^{self.dim}")
            if m.kind == LINEAR and len(m.weights) != self.dim:
                raise ConfigError("linear member weights must match the codomain dimension")

    def member(self, i: int) -> Member:
        if not 0 <= i < len(self.members):
            raise MemberIndexError(f"member index {i} out of range (family has {len(self.members)})")
        return self.members[i]

    def norm_member(self) -> int:
        for i, m in enumerate(self.members):
            if m.is_norm:
                return i
        raise ConfigError("family has no norm-like member (sup-norm or euclidean)")

    def to_dict(self) -> dict:
        return {"m": self.dim, "members": [m.to_dict() for m in self.members]}


def semidistance(family: SemidistanceFamily, i: int, u, v) -> float:
    mem = family.member(i)
    u = np.atleast_1d(np.asarray(u, dtype=float))
    v = np.atleast_1d(np.asarray(v, dtype=float))
    if u.shape != (family.dim,) or v.shape != (family.dim,):
        raise DimensionMismatchError(f"values must have dimension {family.dim}")
    return float(mem.rows(u[None, :], v[None, :])[0])


# --- functions and sequences ----------------------------------------------


@dataclass(frozen=True, eq=False)
class FnObject:
    """Function E -> R^m with a vectorised evaluator.

    ``func`` maps an ``(n, d)`` array of points to ``(n, m)`` (or ``(n,)``
    when ``m == 1``).  ``lipschitz`` certifies
    ``d_i(f(x), f(y)) <= L * dist(x, y)`` for every member.
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    dim: int = 1
    lipschitz: float | None = None

    def eval_many(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        try:
            out = np.asarray(self.func(pts), dtype=float)
        except Exception as exc:  # locate the offending point
            for row in pts:
                try:
                    self.func(row[None, :])
                except Exception as inner:
                    raise EvaluationError(row, inner) from inner
            raise EvaluationError(pts[0], exc) from exc
        out = out.reshape(len(pts), self.dim)
        return np.ascontiguousarray(out)

    def __call__(self, x) -> np.ndarray:
        return self.eval_many(np.atleast_1d(np.asarray(x, dtype=float))[None, :])[0]

    @classmethod
    def pointwise(cls, name, fn, dim=1, lipschitz=None) -> "FnObject":
        """Wrap a scalar-at-a-time evaluator ``point -> value``."""

        def func(pts):
            return np.array([np.atleast_1d(fn(row if len(row) > 1 else row[0])) for row in pts])

        return cls(name, func, dim, lipschitz)

    def scaled(self, lam: float) -> "FnObject":
        L = None if self.lipschitz is None else abs(lam) * self.lipschitz
        return FnObject(f"{lam}*{self.name}", lambda p, f=self.func: lam * np.asarray(f(p), dtype=float), self.dim, L)


def constant(value, dim: int | None = None, name: str | None = None) -> FnObject:
    v = np.atleast_1d(np.asarray(value, dtype=float))
    m = dim or len(v)
    v = np.broadcast_to(v, (m,))
    return FnObject(name or f"const{v.tolist()}", lambda p: np.tile(v, (len(p), 1)), m, 0.0)


@dataclass(frozen=True, eq=False)
class FnSequence:
    """Indexed family ``n -> f_n`` for ``start <= n <= horizon``.

    ``batch(indices, pts)`` may supply all members at once as an array of
    shape ``(len(indices), npts, m)``; it must agree with the generator.
    """

    name: str
    generator: Callable[[int], FnObject]
    horizon: int
    start: int = 0
    dim: int = 1
    batch: Callable[[np.ndarray, np.ndarray], np.ndarray] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.horizon < self.start:
            raise ConfigError("sequence horizon must be >= start")

    def __getitem__(self, n: int) -> FnObject:
        if not self.start <= n <= self.horizon:
            raise IndexError(f"index {n} outside [{self.start}, {self.horizon}]")
        return self.generator(n)

    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.horizon + 1)

    def values_on(self, pts, indices: Iterable[int] | None = None) -> np.ndarray:
        pts = np.ascontiguousarray(np.asarray(pts, dtype=float))
        idx = self.indices() if indices is None else np.asarray(list(indices), dtype=int)
        if self.batch is not None:
            out = np.asarray(self.batch(idx, pts), dtype=float).reshape(len(idx), len(pts), self.dim)
            return np.ascontiguousarray(out)
        out = np.empty((len(idx), len(pts), self.dim))
        for j, n in enumerate(idx):
            out[j] = self[int(n)].eval_many(pts)
        return out

    def with_horizon(self, horizon: int) -> "FnSequence":
        return FnSequence(self.name, self.generator, horizon, self.start, self.dim, self.batch)


def partial_sums(terms: FnSequence, name: str | None = None) -> FnSequence:
    """Sequence ``S_n = sum_{start <= k <= n} f_k``."""

    def batch(idx, pts):
        top = int(idx.max())
        vals = terms.values_on(pts, range(terms.start, top + 1))
        return np.cumsum(vals, axis=0)[idx - terms.start]

    def gen(n):
        return FnObject(f"S_{n}[{terms.name}]", lambda p, n=n: batch(np.array([n]), p)[0], terms.dim)

    return FnSequence(name or f"partial-sums[{terms.name}]", gen, terms.horizon, terms.start, terms.dim, batch)


@dataclass(frozen=True, eq=False)
class ProbeSet:
    """Finite set of domain points, duplicates removed (first occurrence kept)."""

    points: np.ndarray

    @classmethod
    def of(cls, domain: DomainSpec, pts) -> "ProbeSet":
        if pts is None or (not isinstance(pts, np.ndarray) and len(pts) == 0):
            return cls(np.zeros((0, domain.dim)))
        x = _as_matrix(pts, domain.dim)
        rows = [domain.point(r) for r in x]
        seen, keep = set(), []
        for r in rows:
            key = tuple(r.tolist())
            if key not in seen:
                seen.add(key)
                keep.append(r)
        return cls(np.array(keep).reshape(len(keep), domain.dim))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def tolist(self) -> list:
        return [p.tolist() if len(p) > 1 else float(p[0]) for p in self.points]


@dataclass(frozen=True, eq=False)
class Space:
    """A domain together with the semidistance family of the codomain."""

    domain: DomainSpec
    family: SemidistanceFamily = field(default_factory=SemidistanceFamily)

    def probes(self, pts) -> ProbeSet:
        return ProbeSet.of(self.domain, pts)

    def to_dict(self) -> dict:
        doc = self.domain.to_dict()
        doc.update(self.family.to_dict())
        return doc


def load_domain(doc: dict) -> DomainSpec:
    kind = doc.get("kind", BOX)
    common = {"r0": doc.get("r0"), "beta": doc.get("beta", 0.5)}
    if kind == BOX:
        if "lower" not in doc or "upper" not in doc:
            raise ConfigError("box domain needs 'lower' and 'upper'")
        return DomainSpec.box(doc["lower"], doc["upper"], **common)
    if kind == FINITE:
        if "points" not in doc:
            raise ConfigError("finite-set domain needs 'points'")
        return DomainSpec.finite(doc["points"], doc.get("distances"), **common)
    raise ConfigError(f"unknown domain kind {kind!r}")


def load_family(doc: dict) -> SemidistanceFamily:
    m = int(doc.get("m", 1))
    raw = doc.get("members") or [{"kind": SUP}]
    members = []
    for entry in raw:
        if isinstance(entry, str):
            entry = {"kind": entry}
        members.append(Member(entry.get("kind", SUP), int(entry.get("index", 0)), entry.get("weights"), entry.get("name")))
    return SemidistanceFamily(m, tuple(members))


def load_space(source) -> Space:
    """Build a :class:`Space` from a JSON document, path, or dict."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        doc = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = dict(source)
    return Space(load_domain(doc), load_family(doc))
