"""Built-in corpus of function families.

Each entry builds a sequence (or a single function) from keyword
parameters, together with its domain and, when one is known in closed
form, its limit.  Series entries build their *terms*; Abel entries also
build the scalar weights ``eps_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownFamilyError
from .space import DomainSpec, FnObject, FnSequence, constant

SEQUENCE, SERIES, ABEL, FUNCTION = "sequence", "series", "abel", "function"


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    summary: str
    phenomena: tuple[str, ...]
    defaults: dict
    build: Callable[..., FnSequence | FnObject]
    domain: Callable[..., DomainSpec]
    limit: Callable[..., FnObject] | None = None
    weights: Callable[..., FnSequence] | None = None
    probes: tuple[float, ...] = ()

    def params(self, **overrides) -> dict:
        unknown = set(overrides) - set(self.defaults)
        if unknown:
            raise ValueError(f"{self.name}: unknown parameter(s) {sorted(unknown)}; known: {sorted(self.defaults)}")
        out = dict(self.defaults)
        for k, v in overrides.items():
            out[k] = type(self.defaults[k])(v) if self.defaults[k] is not None else v
        return out

    def sequence(self, **params) -> FnSequence:
        if self.kind == FUNCTION:
            raise TypeError(f"{self.name} is a single function, not a sequence")
        return self.build(**self.params(**params))

    def function(self, **params) -> FnObject:
        if self.kind != FUNCTION:
            raise TypeError(f"{self.name} is a sequence; use member(n)")
        return self.build(**self.params(**params))

    def member(self, n: int, **params) -> FnObject:
        return self.sequence(**params)[n]

    def limit_fn(self, **params) -> FnObject | None:
        return None if self.limit is None else self.limit(**self.params(**params))

    def weight_sequence(self, **params) -> FnSequence:
        if self.weights is None:
            raise TypeError(f"{self.name} has no weight sequence")
        return self.weights(**self.params(**params))

    def domain_spec(self, **params) -> DomainSpec:
        return self.domain(**self.params(**params))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "summary": self.summary,
            "phenomena": list(self.phenomena),
            "parameters": self.defaults,
            "probes": list(self.probes),
        }


def _unit(**_):
    return DomainSpec.interval(0.0, 1.0)


def _x(p):
    return p[:, 0]


def _seq(name, fn, lip, horizon, start=1, batch=None):
    def gen(n):
        return FnObject(f"{name}[{n}]", lambda p, n=n: fn(n, _x(p)), 1, None if lip is None else lip(n))

    if batch is None:

        def batch(idx, p):
            return np.stack([fn(int(n), _x(p)) for n in idx])

    return FnSequence(name, gen, horizon, start, 1, batch)


# --- sequences ---------------------------------------------------------------


def _power(horizon):
    return _seq("power-sequence", lambda n, x: x**n, lambda n: float(n), horizon,
                batch=lambda idx, p: _x(p)[None, :] ** idx[:, None].astype(float))


def _power_limit(**_):
    return FnObject("power-limit", lambda p: (_x(p) >= 1.0).astype(float))


def _bump_fn(n, x):
    return np.maximum(0.0, 1.0 - np.abs(x - 1.0 / n) * (2.0 * n))


def _bump(horizon):
    return _seq("moving-bump", _bump_fn, lambda n: 2.0 * n, horizon,
                batch=lambda idx, p: _bump_fn(idx[:, None].astype(float), _x(p)[None, :]))


def _indicator_fn(n, x):
    return ((x > 0) & (x < 1.0 / n)).astype(float)


def _indicator(horizon):
    return _seq("shrinking-indicator", _indicator_fn, None, horizon,
                batch=lambda idx, p: _indicator_fn(idx[:, None].astype(float), _x(p)[None, :]))


def _damped_fn(n, x):
    return np.sin(n * x) / n


def _damped(horizon):
    return _seq("damped-oscillation", _damped_fn, lambda n: 1.0, horizon,
                batch=lambda idx, p: _damped_fn(idx[:, None].astype(float), _x(p)[None, :]))


def _shifted(horizon):
    return _seq("shifted-identity", lambda n, x: x + x / n, lambda n: 1.0 + 1.0 / n, horizon)


def _zero(**_):
    return constant(0.0, 1, "zero")


def _identity(**_):
    return FnObject("identity", _x, 1, 1.0)


# --- series terms -------------------------------------------------------------


def _damped_series(horizon):
    return _seq("damped-power-series", lambda n, x: x**n / n**2, lambda n: 1.0 / n, horizon,
                batch=lambda idx, p: _x(p)[None, :] ** idx[:, None].astype(float) / idx[:, None].astype(float) ** 2)


def _geometric(horizon):
    return _seq("geometric-series", lambda n, x: x**n, lambda n: float(n), horizon,
                batch=lambda idx, p: _x(p)[None, :] ** idx[:, None].astype(float))


def _dirichlet(horizon):
    return _seq("dirichlet-kernel", lambda n, x: np.sin(n * x), lambda n: float(n), horizon,
                batch=lambda idx, p: np.sin(idx[:, None].astype(float) * _x(p)[None, :]))


def _harmonic_weights(horizon):
    return _seq("harmonic-weights", lambda n, x: np.full_like(x, 1.0 / n), lambda n: 0.0, horizon,
                batch=lambda idx, p: np.broadcast_to(1.0 / idx[:, None].astype(float), (len(idx), len(p))))


def _alternating(horizon):
    return _seq("alternating-signs", lambda n, x: np.full_like(x, (-1.0) ** n), lambda n: 0.0, horizon,
                batch=lambda idx, p: np.broadcast_to(np.where(idx % 2 == 0, 1.0, -1.0)[:, None], (len(idx), len(p))))


# --- single functions ---------------------------------------------------------


def _step(at):
    return FnObject("step", lambda p: (_x(p) <= at).astype(float))


def _regulated(at):
    return FnObject("regulated", lambda p: np.where(_x(p) < at, _x(p), _x(p) + 1.0))


def _monomial(power):
    return FnObject(f"x^{power}", lambda p: _x(p) ** power, 1, float(power))


def _sine(freq, amplitude):
    return FnObject(f"{amplitude}*sin({freq}x)", lambda p: amplitude * np.sin(freq * _x(p)), 1,
                    abs(freq * amplitude))


def _affine(slope, intercept):
    return FnObject(f"{slope}x+{intercept}", lambda p: slope * _x(p) + intercept, 1, abs(slope))


def _const(value):
    return constant(value, 1, f"const({value})")


_REGISTRY: dict[str, CorpusEntry] = {}


def _register(entry: CorpusEntry) -> None:
    _REGISTRY[entry.name] = entry


_register(CorpusEntry(
    "power-sequence", SEQUENCE, "x^n on [0,1], n >= 1",
    ("pointwise convergence to a discontinuous limit", "V-convergence fails at 1", "Cauchy criterion fails at 1"),
    {"horizon": 200}, _power, _unit, _power_limit, probes=(1.0,)))
_register(CorpusEntry(
    "moving-bump", SEQUENCE, "tent of height 1 and half-width 1/(2n) centred at 1/n",
    ("V-convergence to 0 at 0", "not locally uniform at 0", "limit interchange along 1/n"),
    {"horizon": 200}, _bump, _unit, _zero, probes=(0.0,)))
_register(CorpusEntry(
    "shrinking-indicator", SEQUENCE, "indicator of (0, 1/n)",
    ("pointwise convergence to a continuous limit", "V-convergence fails at 0"),
    {"horizon": 200}, _indicator, _unit, _zero, probes=(0.0,)))
_register(CorpusEntry(
    "damped-oscillation", SEQUENCE, "sin(nx)/n",
    ("uniform convergence to 0", "all modes hold"),
    {"horizon": 200}, _damped, _unit, _zero, probes=(0.3, 0.7)))
_register(CorpusEntry(
    "shifted-identity", SEQUENCE, "x + x/n, converging uniformly to x",
    ("continuous functions", "limit interchange along 1/n"),
    {"horizon": 200}, _shifted, _unit, _identity, probes=(0.0,)))
_register(CorpusEntry(
    "damped-power-series", SERIES, "terms x^n / n^2",
    ("normal convergence", "continuous sum"),
    {"horizon": 200}, _damped_series, _unit, probes=(0.5, 0.9, 1.0)))
_register(CorpusEntry(
    "geometric-series", SERIES, "terms x^n without damping",
    ("norm series diverges at 1",),
    {"horizon": 200}, _geometric, _unit, probes=(0.5, 0.9, 1.0)))
_register(CorpusEntry(
    "dirichlet-kernel", ABEL, "terms sin(nx) with weights 1/n on [0.5, 5.5]",
    ("bounded partial sums", "Abel summation to (pi - x)/2"),
    {"horizon": 2000}, _dirichlet, lambda **_: DomainSpec.interval(0.5, 5.5),
    lambda **_: FnObject("(pi-x)/2", lambda p: (math.pi - _x(p)) / 2, 1, 0.5), _harmonic_weights,
    probes=(1.0, 3.0, 5.0)))
_register(CorpusEntry(
    "alternating-signs", ABEL, "constant terms (-1)^n with weights 1/n",
    ("bounded partial sums", "Abel summation to -ln 2"),
    {"horizon": 2000}, _alternating, _unit, lambda **_: constant(-math.log(2.0), 1, "-ln2"), _harmonic_weights,
    probes=(0.5,)))
_register(CorpusEntry(
    "step", FUNCTION, "1 for x <= at, else 0 (upper semicontinuous)",
    ("oscillation 1 at the jump", "not in the closure of continuous functions"),
    {"at": 0.5}, _step, _unit, probes=(0.5,)))
_register(CorpusEntry(
    "regulated", FUNCTION, "x for x < at, x + 1 otherwise",
    ("one-sided limits everywhere", "locally approximable by step functions off the jump"),
    {"at": 0.5}, _regulated, _unit, probes=(0.25, 0.75)))
_register(CorpusEntry(
    "monomial", FUNCTION, "x^power", ("Lipschitz continuous",), {"power": 2}, _monomial, _unit, probes=(0.5,)))
_register(CorpusEntry(
    "sine-wave", FUNCTION, "amplitude * sin(freq * x)", ("Lipschitz continuous",),
    {"freq": 1.0, "amplitude": 1.0}, _sine, _unit, probes=(0.5,)))
_register(CorpusEntry(
    "affine", FUNCTION, "slope * x + intercept", ("Lipschitz continuous",),
    {"slope": 1.0, "intercept": 0.0}, _affine, _unit, probes=(0.5,)))
_register(CorpusEntry(
    "constant", FUNCTION, "constant value", ("Lipschitz continuous",), {"value": 0.0}, _const, _unit,
    probes=(0.5,)))


def corpus_families() -> list[CorpusEntry]:
    return [_REGISTRY[k] for k in sorted(_REGISTRY)]


def lookup(name: str) -> CorpusEntry:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise UnknownFamilyError(name, sorted(_REGISTRY)) from None
