"""Deterministic multi-scale square crop plans.

Geometry only — pixels are cropped by the exporter that consumes the plan.
Randomness comes from splitmix64, a fixed portable 64-bit generator, with a
documented draw order so plans reproduce bit-for-bit across processes and
languages: first the crop count N, then the scales gamma_1..gamma_N, then an
(x, y) offset pair per crop. Crops are squares of side floor(gamma*min(W,H))
with gamma ~ U(alpha, beta).

Plan JSON: {"width", "height", "seed", "rects": [{"x", "y", "side"}, ...]}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DegenerateImage, FormatError

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 PRNG (Steele et al.); doubles take the top 53 bits."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_double(self) -> float:
        return (self.next_u64() >> 11) * (2.0**-53)

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * self.next_double()

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        span = hi - lo + 1
        return lo + min(int(self.next_double() * span), span - 1)


@dataclass(frozen=True)
class CropConfig:
    """Scale bounds (alpha, beta], crop-count range, and RNG seed."""

    alpha: float = 0.6
    beta: float = 1.0
    n_min: int = 60
    n_max: int = 90
    seed: int = 0

    def __post_init__(self):
        if not (0.0 < self.alpha <= self.beta <= 1.0):
            raise ValueError("need 0 < alpha <= beta <= 1")
        if not (1 <= self.n_min <= self.n_max):
            raise ValueError("need 1 <= n_min <= n_max")
        if not (0 <= self.seed <= _MASK64):
            raise ValueError("seed must fit in 64 unsigned bits")


@dataclass(frozen=True)
class CropRect:
    x: int
    y: int
    side: int


@dataclass(frozen=True)
class CropPlan:
    width: int
    height: int
    seed: int
    rects: tuple[CropRect, ...]


def sample_scales(alpha: float, beta: float, seed: int, count: int) -> list[float]:
    """Draw crop scales from U(alpha, beta) using the plan generator's PRNG."""
    rng = SplitMix64(seed)
    return [rng.uniform(alpha, beta) for _ in range(count)]


def generate_crop_plan(width: int, height: int, config: CropConfig) -> CropPlan:
    """Crop plan fully determined by (width, height, config)."""
    if width < 1 or height < 1:
        raise DegenerateImage(f"image {width}x{height} has no pixels")
    short = min(width, height)
    if int(config.alpha * short) < 1:
        raise DegenerateImage(
            f"alpha={config.alpha} on a {width}x{height} image yields sub-pixel crops"
        )
    rng = SplitMix64(config.seed)
    n = rng.randint(config.n_min, config.n_max)
    scales = [rng.uniform(config.alpha, config.beta) for _ in range(n)]
    rects = []
    for gamma in scales:
        side = int(gamma * short)
        x = rng.randint(0, width - side)
        y = rng.randint(0, height - side)
        rects.append(CropRect(x=x, y=y, side=side))
    return CropPlan(width=width, height=height, seed=config.seed, rects=tuple(rects))


def validate_plan(plan: CropPlan, config: CropConfig | None = None) -> list[str]:
    """Report invariant violations; empty list means the plan is well-formed.

    Count and scale-bound checks need the generating config and run only when
    one is supplied.
    """
    violations = []
    if plan.width < 1 or plan.height < 1:
        violations.append(f"image {plan.width}x{plan.height} is degenerate")
    short = min(plan.width, plan.height)
    for k, rect in enumerate(plan.rects):
        if rect.side < 1:
            violations.append(f"rect {k}: side {rect.side} < 1")
        if rect.x < 0 or rect.y < 0:
            violations.append(f"rect {k}: negative offset ({rect.x}, {rect.y})")
        if rect.x + rect.side > plan.width:
            violations.append(
                f"rect {k}: x+side = {rect.x + rect.side} exceeds width {plan.width}"
            )
        if rect.y + rect.side > plan.height:
            violations.append(
                f"rect {k}: y+side = {rect.y + rect.side} exceeds height {plan.height}"
            )
        if config is not None:
            lo = int(config.alpha * short)
            hi = int(config.beta * short)
            if not (lo <= rect.side <= hi):
                violations.append(
                    f"rect {k}: side {rect.side} outside scale bounds [{lo}, {hi}]"
                )
    if config is not None and not (config.n_min <= len(plan.rects) <= config.n_max):
        violations.append(
            f"crop count {len(plan.rects)} outside [{config.n_min}, {config.n_max}]"
        )
    return violations


def plan_to_dict(plan: CropPlan) -> dict:
    return {
        "width": plan.width,
        "height": plan.height,
        "seed": plan.seed,
        "rects": [{"x": r.x, "y": r.y, "side": r.side} for r in plan.rects],
    }


def plan_from_dict(doc: dict) -> CropPlan:
    try:
        rects = tuple(
            CropRect(x=int(r["x"]), y=int(r["y"]), side=int(r["side"]))
            for r in doc["rects"]
        )
        return CropPlan(
            width=int(doc["width"]),
            height=int(doc["height"]),
            seed=int(doc["seed"]),
            rects=rects,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed crop plan document: {exc}") from exc


def dump_plan(plan: CropPlan, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(plan_to_dict(plan), fh, indent=2)
        fh.write("\n")


def load_plan(path) -> CropPlan:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"crop plan is not valid JSON: {exc}") from exc
    return plan_from_dict(doc)
