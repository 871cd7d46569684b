"""Tunable knobs shared by the estimators."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Options:
    # shrinking-scale sup estimation
    k_max: int = 24
    tol_stall: float = 1e-6
    stall_span: int = 3
    base_depth: int = 4
    max_depth: int = 10
    margin: float = 1e-6
    # tail verdicts and limit estimation
    min_tail: int = 16
    window: int = 16
    limit_tol: float = 1e-4
    uniform_depth: int = 12
    # sequence Cauchy criterion
    probe_span: int = 8
    cauchy_depth: int = 6
    cauchy_n_top: int | None = None
    cauchy_min_radius: float | None = None
    # series rules and defects
    series_tol: float = 1e-3
    osc_tol: float = 1e-2
    decay_tol: float = 1e-2
    bound_growth: float = 1.25
    osc_max_depth: int = 8
    local_k: int = 2

    def __post_init__(self):
        for name in ("tol_stall", "margin", "limit_tol", "series_tol", "osc_tol", "decay_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if self.stall_span < 1 or self.min_tail < 1 or self.window < 1:
            raise ValueError("spans must be >= 1")
        if self.k_max < 0 or self.base_depth < 0 or self.max_depth < 0:
            raise ValueError("depths and k_max must be >= 0")
        if self.bound_growth < 1:
            raise ValueError("bound_growth must be >= 1")

    def with_(self, **changes) -> "Options":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, doc: dict) -> "Options":
        known = {f.name for f in fields(cls)}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown option(s): {', '.join(sorted(unknown))}")
        return cls(**doc)


DEFAULT = Options()
