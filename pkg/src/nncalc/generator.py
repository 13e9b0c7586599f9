"""Complement-symmetric bijections of [0,1] and their real-line extensions.

A generator is a strictly increasing bijection g of the unit interval with
g(0)=0, g(1)=1 and g(p) + g(1-p) = 1.  Equivalently g(p) = 1/2 + h(p - 1/2)
for an odd map h of [-1/2, 1/2] into itself, so every generator fixes 1/2.
Composition preserves the class, hence every integer self-composition g^k is
again a generator; the family {g^k} is the backbone of the whole package.

For arithmetic on all of R the generator is extended by unit-cell
translation, g_R(x) = floor(x) + g(x - floor(x)), which keeps g_R strictly
increasing, bijective, and fixes every integer.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DomainError, LevelRangeError

#: Default cap on |k| for integer self-composition.
LEVEL_CAP = 64

_TWO_OVER_PI = 2.0 / math.pi


@dataclass(frozen=True)
class Generator:
    """A strictly increasing bijection of [0,1] with the complement symmetry.

    ``forward`` and ``inverse`` must accept floats or numpy arrays.  Values
    are immutable after construction and safe to share across threads.
    """

    name: str
    forward: Callable
    inverse: Callable
    params: tuple = ()

    def __repr__(self):  # pragma: no cover - cosmetic
        return f"Generator({self.name!r})"


def make_sine_generator() -> Generator:
    """The trigonometric generator g(p) = sin^2(pi p / 2).

    Evaluated piecewise through the mirror symmetry: sin^2(pi p/2) below
    1/2 and 1 - sin^2(pi (1-p)/2) above, with 1/2 pinned.  This keeps the
    three fixed points 0, 1/2, 1 exact in floating point and gives full
    relative accuracy near both endpoints, where naive shifted-sine forms
    cancel catastrophically.  The inverse (2/pi) arcsin(sqrt(P)) is closed
    form, mirrored the same way.
    """

    def forward(p):
        p = np.asarray(p, dtype=float)
        lo = np.sin(0.5 * np.pi * np.minimum(p, 0.5)) ** 2
        hi = 1.0 - np.sin(0.5 * np.pi * (1.0 - np.maximum(p, 0.5))) ** 2
        return np.where(p == 0.5, 0.5, np.where(p < 0.5, lo, hi))

    def inverse(P):
        P = np.asarray(P, dtype=float)
        lo = _TWO_OVER_PI * np.arcsin(np.sqrt(np.minimum(np.maximum(P, 0.0), 0.5)))
        hi = 1.0 - _TWO_OVER_PI * np.arcsin(np.sqrt(np.maximum(1.0 - np.maximum(P, 0.5), 0.0)))
        return np.where(P == 0.5, 0.5, np.where(P < 0.5, lo, hi))

    return Generator("sine", forward, inverse)


def make_identity_generator() -> Generator:
    """The trivial generator g(p) = p (level shifts become no-ops)."""

    def identity(p):
        return np.asarray(p, dtype=float) + 0.0

    return Generator("identity", identity, identity)


def _bisect_increasing(fn: Callable, y, tol: float = 1e-14, max_iter: int = 200):
    """Solve fn(x) = y for increasing fn on [0,1], vectorized bisection."""
    y = np.asarray(y, dtype=float)
    lo = np.zeros_like(y)
    hi = np.ones_like(y)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        below = np.asarray(fn(mid)) <= y
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        if np.max(hi - lo) <= tol:
            break
    x = 0.5 * (lo + hi)
    # the endpoints are known exactly for any bijection of this class
    x = np.where(y == 0.0, 0.0, x)
    x = np.where(y == 1.0, 1.0, x)
    return x


def convex_combine(gens: Sequence[Generator], weights: Sequence[float]) -> Generator:
    """Convex combination sum_j w_j g_j, again a valid generator.

    The combination of odd parts stays odd, so the complement symmetry is
    inherited.  No closed-form inverse exists in general; the inverse is
    computed by bisection (tolerance 1e-14, at most 200 halvings), which
    monotonicity guarantees to converge.
    """
    gens = list(gens)
    weights = [float(w) for w in weights]
    if not gens:
        raise DomainError("convex_combine requires at least one generator")
    if len(gens) != len(weights):
        raise DomainError("one weight per generator required")
    if any(w < 0.0 for w in weights):
        raise DomainError("weights must be nonnegative")
    if abs(math.fsum(weights) - 1.0) > 1e-12:
        raise DomainError(f"weights must sum to 1, got {math.fsum(weights)!r}")

    gen_tuple = tuple(gens)
    w_tuple = tuple(weights)

    def forward(p):
        p = np.asarray(p, dtype=float)
        acc = w_tuple[0] * np.asarray(gen_tuple[0].forward(p))
        for g, w in zip(gen_tuple[1:], w_tuple[1:]):
            acc = acc + w * np.asarray(g.forward(p))
        return acc

    def inverse(P):
        return _bisect_increasing(forward, P)

    names = ",".join(g.name for g in gen_tuple)
    return Generator(f"convex({names})", forward, inverse, params=w_tuple)


def validate_generator(gen: Generator, grid_points: int = 10_000, tol: float = 1e-12) -> None:
    """Check the defining invariants on a uniform grid; raise DomainError on failure.

    Verified: endpoint fixing within 1 ulp, strict monotonicity, inverse
    round-trip within ``tol``, and the complement functional equation within
    ``tol``.
    """
    p = np.linspace(0.0, 1.0, grid_points)
    fp = np.asarray(gen.forward(p), dtype=float)
    if abs(float(fp[0])) > 5e-16 or abs(float(fp[-1]) - 1.0) > 5e-16:
        raise DomainError(f"{gen.name}: endpoints not fixed: g(0)={fp[0]!r}, g(1)={fp[-1]!r}")
    if not np.all(np.diff(fp) > 0.0):
        raise DomainError(f"{gen.name}: forward not strictly increasing on the grid")
    back = np.asarray(gen.inverse(fp), dtype=float)
    worst_rt = float(np.max(np.abs(back - p)))
    if worst_rt > tol:
        raise DomainError(f"{gen.name}: inverse round-trip off by {worst_rt:.3e}")
    resid = float(np.max(np.abs(fp + np.asarray(gen.forward(1.0 - p)) - 1.0)))
    if resid > tol:
        raise DomainError(f"{gen.name}: complement equation violated by {resid:.3e}")


def h_view(gen: Generator, x):
    """The odd part h(x) = g(x + 1/2) - 1/2 on [-1/2, 1/2]."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < -0.5) or np.any(arr > 0.5):
        raise DomainError("h_view argument must lie in [-1/2, 1/2]")
    out = np.asarray(gen.forward(arr + 0.5)) - 0.5
    return float(out) if out.ndim == 0 else out


class ExtendedGenerator:
    """A generator promoted to a strictly increasing bijection of the real line.

    The default extension translates the unit cell,
    ``g_R(x) = floor(x) + g(x - floor(x))``, which fixes every integer.  An
    alternate extension rule may be supplied as a pair of callables
    ``(forward_outside, inverse_outside)`` used for arguments outside [0,1];
    this exists to let tests demonstrate how results on arguments leaving the
    unit interval depend on the choice of extension.
    """

    def __init__(self, base: Generator, extension: tuple[Callable, Callable] | None = None):
        self.base = base
        self._extension = extension

    @property
    def name(self) -> str:
        return self.base.name

    def __repr__(self):  # pragma: no cover - cosmetic
        rule = "unit-periodic" if self._extension is None else "custom"
        return f"ExtendedGenerator({self.base.name!r}, extension={rule})"

    def forward(self, x):
        arr = np.asarray(x, dtype=float)
        if self._extension is None:
            n = np.floor(arr)
            out = n + np.asarray(self.base.forward(arr - n))
        else:
            inside = (arr >= 0.0) & (arr <= 1.0)
            fwd_out, _ = self._extension
            out = np.where(inside,
                           np.asarray(self.base.forward(np.clip(arr, 0.0, 1.0))),
                           np.asarray(fwd_out(arr)))
        return float(out) if out.ndim == 0 else out

    def inverse(self, y):
        arr = np.asarray(y, dtype=float)
        if self._extension is None:
            n = np.floor(arr)
            out = n + np.asarray(self.base.inverse(arr - n))
        else:
            inside = (arr >= 0.0) & (arr <= 1.0)
            _, inv_out = self._extension
            out = np.where(inside,
                           np.asarray(self.base.inverse(np.clip(arr, 0.0, 1.0))),
                           np.asarray(inv_out(arr)))
        return float(out) if out.ndim == 0 else out

    def iterate(self, x, k: int, cap: int = LEVEL_CAP):
        """k-fold self-composition g_R^k (inverse composition for k < 0)."""
        if abs(k) > cap:
            raise LevelRangeError(f"|k| = {abs(k)} exceeds the iteration cap {cap}")
        arr = np.asarray(x, dtype=float)
        if k == 0:
            out = arr + 0.0
        else:
            step = self.forward if k > 0 else self.inverse
            out = arr
            for _ in range(abs(k)):
                out = np.asarray(step(out))
        return float(out) if np.ndim(out) == 0 else out


_clamp_count = 0


def clamp_count() -> int:
    """Number of probability-domain values clamped back into [0,1] so far."""
    return _clamp_count


def reset_clamp_count() -> None:
    global _clamp_count
    _clamp_count = 0


def eval_iterate(egen: ExtendedGenerator, k: int, x, cap: int = LEVEL_CAP):
    """Evaluate g^k(x) by |k|-fold composition, g^0(x) = x exactly.

    When the input lies in [0,1] the result is clamped back into [0,1]
    after the full composition (never in between); clamp events are counted
    for diagnostics, see :func:`clamp_count`.  Saturation of large |k|
    iterates near 0 and 1 is inherent to double precision and is left as is.
    """
    global _clamp_count
    out = egen.iterate(x, k, cap=cap)
    arr = np.asarray(x, dtype=float)
    if np.all((arr >= 0.0) & (arr <= 1.0)):
        res = np.asarray(out)
        outside = int(np.count_nonzero((res < 0.0) | (res > 1.0)))
        if outside:
            _clamp_count += outside
            res = np.clip(res, 0.0, 1.0)
            out = float(res) if res.ndim == 0 else res
    return out


_SINE_EXTENDED: ExtendedGenerator | None = None


def sine_extended() -> ExtendedGenerator:
    """Shared unit-periodic extension of the sine generator (the default everywhere)."""
    global _SINE_EXTENDED
    if _SINE_EXTENDED is None:
        _SINE_EXTENDED = ExtendedGenerator(make_sine_generator())
    return _SINE_EXTENDED


@dataclass(frozen=True)
class BandReport:
    """Finite band [k_min, k_max] of levels distinguishable at a resolution."""

    k_min: int
    k_max: int
    resolution: float
    saturated: bool = False


def effective_band(egen: ExtendedGenerator, resolution: float,
                   k_cap: int = LEVEL_CAP, grid_points: int = 1001) -> BandReport:
    """Smallest band outside which successive iterates are indistinguishable.

    ``k_max`` is the smallest k >= 0 such that max_p |g^{k+1}(p) - g^k(p)|
    over a uniform grid of [0,1] drops below ``resolution``; ``k_min`` is the
    symmetric count for the inverse iterates, reported with a negative sign.
    If either scan reaches ``k_cap`` without converging the report carries a
    saturation flag.
    """
    if not (0.0 < resolution < 1.0):
        raise DomainError("resolution must lie strictly between 0 and 1")
    grid = np.linspace(0.0, 1.0, grid_points)
    saturated = False

    def scan(step_fn) -> int:
        nonlocal saturated
        cur = grid.copy()
        for k in range(k_cap + 1):
            nxt = np.asarray(step_fn(cur))
            if float(np.max(np.abs(nxt - cur))) < resolution:
                return k
            cur = nxt
        saturated = True
        return k_cap

    k_max = scan(egen.forward)
    k_min = -scan(egen.inverse)
    return BandReport(k_min=k_min, k_max=k_max, resolution=float(resolution),
                      saturated=saturated)


def generator_from_config(config) -> Generator:
    """Build a generator from a JSON-style config.

    Accepts the shorthand strings ``"sine"`` and ``"identity"`` or an object
    ``{"name": "sine" | "identity" | "convex", "components": [...],
    "weights": [...]}``.  Unknown keys are rejected.  The constructed
    generator is validated before being returned.
    """
    if isinstance(config, str):
        config = {"name": config}
    if not isinstance(config, dict):
        raise ConfigError(f"generator config must be a name or an object, got {type(config).__name__}")
    unknown = set(config) - {"name", "components", "weights"}
    if unknown:
        raise ConfigError(f"unknown generator config keys: {sorted(unknown)}")
    name = config.get("name")
    if name == "sine":
        gen = make_sine_generator()
    elif name == "identity":
        gen = make_identity_generator()
    elif name == "convex":
        if "components" not in config or "weights" not in config:
            raise ConfigError("convex generator config needs 'components' and 'weights'")
        comps = [generator_from_config(c) for c in config["components"]]
        try:
            gen = convex_combine(comps, config["weights"])
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc
    else:
        raise ConfigError(f"unknown generator name: {name!r}")
    validate_generator(gen)
    return gen


def load_generator(spec: str) -> Generator:
    """Resolve a CLI-style generator argument: a builtin name or a JSON file path."""
    if spec in ("sine", "identity"):
        return generator_from_config(spec)
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read generator config {spec!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in generator config {spec!r}: {exc}") from exc
    return generator_from_config(config)
