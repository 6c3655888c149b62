"""Filter bases on the real line.

A base is represented as a nested, indexed chain of set descriptors with a
deterministic sampler. Each descriptor is a finite union of open intervals
plus a finite point set, minus a finite excluded set; descriptors are
canonicalized into maximal connected components so that emptiness,
membership and containment are decided exactly (float comparisons only,
no tolerances). The generated filter is never materialized: membership of
a candidate set in it is answered by searching for a contained base element.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Mapping, Sequence

__all__ = [
    "Piece", "SetDescriptor", "FilterBaseChain", "SequenceSpec", "AxiomReport",
    "punctured_base", "right_base", "left_base", "sequence_base",
    "chain_from_elements", "verify_base_axioms",
    "in_generated_filter", "generated_filter_witness",
]

_M64 = (1 << 64) - 1
# Smallest scale a geometric chain may reach; keeps stratified sampling in
# the normal float range where strata stay distinct.
_MIN_SCALE = 1e-300


@dataclass(frozen=True)
class Piece:
    """One maximal connected component of a canonicalized set: an interval
    with independently open or closed endpoints."""

    lo: float
    hi: float
    lo_closed: bool
    hi_closed: bool

    def contains(self, x: float) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True

    def covers(self, other: "Piece") -> bool:
        lower_ok = self.lo < other.lo or (
            self.lo == other.lo and (self.lo_closed or not other.lo_closed))
        upper_ok = other.hi < self.hi or (
            other.hi == self.hi and (self.hi_closed or not other.hi_closed))
        return lower_ok and upper_ok

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class SetDescriptor:
    """(union of open intervals  ∪  points) \\ excluded.

    ``intervals`` must be pairwise disjoint, each with lo < hi, and sorted by
    lo. The described set may be empty; emptiness is a *reported* axiom
    failure (see verify_base_axioms), not a construction error.
    """

    intervals: tuple[tuple[float, float], ...] = ()
    points: tuple[float, ...] = ()
    excluded: tuple[float, ...] = ()

    def __post_init__(self):
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        pts = tuple(float(p) for p in self.points)
        exc = tuple(float(x) for x in self.excluded)
        for lo, hi in ivs:
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("interval endpoints must be finite")
            if not lo < hi:
                raise ValueError(f"interval ({lo!r}, {hi!r}) needs lo < hi")
        for a, b in zip(ivs, ivs[1:]):
            if b[0] < a[1]:
                raise ValueError("intervals must be pairwise disjoint and sorted by lo")
        for v in pts + exc:
            if not math.isfinite(v):
                raise ValueError("points must be finite")
        object.__setattr__(self, "intervals", ivs)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "excluded", exc)

    @cached_property
    def _canonical(self) -> tuple[tuple[Piece, ...], tuple[float, ...]]:
        cuts = sorted({v for iv in self.intervals for v in iv}
                      | set(self.points) | set(self.excluded))
        plus = set(self.points)
        minus = set(self.excluded)

        def point_in(x: float) -> bool:
            if x in minus:
                return False
            if x in plus:
                return True
            return any(lo < x < hi for lo, hi in self.intervals)

        def gap_in(a: float, b: float) -> bool:
            return any(lo <= a and b <= hi for lo, hi in self.intervals)

        # Alternate point/gap regions over the cut points and merge maximal
        # runs of in-set regions into connected pieces.
        regions: list[tuple[str, float, float, bool]] = []
        for i, c in enumerate(cuts):
            regions.append(("pt", c, c, point_in(c)))
            if i + 1 < len(cuts):
                nxt = cuts[i + 1]
                regions.append(("gap", c, nxt, gap_in(c, nxt)))

        pieces: list[Piece] = []
        isolated: list[float] = []

        def flush(run: list[tuple[str, float, float, bool]]) -> None:
            if not run:
                return
            if len(run) == 1 and run[0][0] == "pt":
                isolated.append(run[0][1])
                return
            first, last = run[0], run[-1]
            lo = first[1]
            hi = last[2]
            pieces.append(Piece(lo, hi, first[0] == "pt", last[0] == "pt"))

        run: list[tuple[str, float, float, bool]] = []
        for reg in regions:
            if reg[3]:
                run.append(reg)
            else:
                flush(run)
                run = []
        flush(run)
        return tuple(pieces), tuple(isolated)

    @property
    def pieces(self) -> tuple[Piece, ...]:
        return self._canonical[0]

    @property
    def isolated_points(self) -> tuple[float, ...]:
        return self._canonical[1]

    @cached_property
    def _piece_los(self) -> list[float]:
        return [p.lo for p in self.pieces]

    @cached_property
    def _isolated_set(self) -> frozenset[float]:
        return frozenset(self._canonical[1])

    def is_empty(self) -> bool:
        return not self.pieces and not self.isolated_points

    def contains(self, x: float) -> bool:
        i = bisect_right(self._piece_los, x) - 1
        if i >= 0 and self.pieces[i].contains(x):
            return True
        return x in self._isolated_set

    def issubset(self, other: "SetDescriptor") -> bool:
        """Exact containment. A connected piece of self must sit inside a
        single connected component of other."""
        for p in self.pieces:
            j = bisect_right(other._piece_los, p.lo) - 1
            if j < 0 or not other.pieces[j].covers(p):
                return False
        return all(other.contains(x) for x in self.isolated_points)

    def same_set(self, other: "SetDescriptor") -> bool:
        return self._canonical == other._canonical

    def total_width(self) -> float:
        return math.fsum(p.width for p in self.pieces)


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _M64
    return x ^ (x >> 31)


def _unit_hash(seed: int, level: int, component: int, index: int) -> float:
    """Counter-based uniform in [0, 1): a fixed function of its arguments,
    identical across platforms and runs."""
    h = 0x243F6A8885A308D3
    for part in (seed, level, component, index):
        h = _splitmix64(h ^ (part & _M64))
    return (h >> 11) * 2.0 ** -53


def _allocate(widths: Sequence[float], m: int) -> list[int]:
    """Largest-remainder allocation of m sample slots proportional to width."""
    total = math.fsum(widths)
    quotas = [m * w / total for w in widths]
    counts = [int(math.floor(q)) for q in quotas]
    short = m - sum(counts)
    order = sorted(range(len(widths)), key=lambda i: (-(quotas[i] - counts[i]), i))
    for i in order[:short]:
        counts[i] += 1
    return counts


def _stratified_sample(desc: SetDescriptor, m: int, seed: int, level: int) -> list[float]:
    """m distinct members of desc: a jittered stratified grid per interval
    component (slots allocated proportionally to width), or the first m
    stored points when the set has no interval part."""
    pieces = desc.pieces
    if not pieces:
        pts = [p for p in desc.points if desc.contains(p)]
        if len(pts) < m:
            raise ValueError(
                f"level {level} has only {len(pts)} sampleable points, need {m}")
        return pts[:m]
    counts = _allocate([p.width for p in pieces], m)
    out: list[float] = []
    for ci, (piece, n) in enumerate(zip(pieces, counts)):
        for i in range(n):
            u = _unit_hash(seed, level, ci, i)
            jitter = (u - 0.5) * (1.0 - 1e-9)
            t = (i + 0.5 + jitter) / n
            x = piece.lo + piece.width * t
            if not piece.lo < x < piece.hi:
                x = piece.lo + piece.width * ((i + 0.5) / n)  # nudge to stratum center
            out.append(x)
    if len(set(out)) != m:
        raise ValueError(f"level {level} is too thin to hold {m} distinct samples")
    return out


class FilterBaseChain:
    """A filter base as a nested indexed family level -> SetDescriptor.

    Nestedness (element(k) ⊆ element(j) for j ≤ k) makes the base axioms hold
    constructively; it is a contract checked by verify_base_axioms rather
    than enforced here, so deliberately broken chains can be built for
    diagnosis. All operations are pure and deterministic given the seed.
    """

    def __init__(self, *, chain_id: str, max_level: int, punctured_at_zero: bool,
                 params: Mapping[str, object],
                 element_fn: Callable[[int], SetDescriptor],
                 scale_fn: Callable[[int], float],
                 sample_fn: Callable[[int, int, int], list[float]] | None = None):
        if max_level < 0:
            raise ValueError("max_level must be >= 0")
        self.id = chain_id
        self.max_level = max_level
        self.punctured_at_zero = punctured_at_zero
        self.params = dict(params)
        self._element_fn = element_fn
        self._scale_fn = scale_fn
        self._sample_fn = sample_fn
        self._elements: dict[int, SetDescriptor] = {}

    def __repr__(self):
        return f"FilterBaseChain({self.id!r}, max_level={self.max_level})"

    def _check_level(self, k: int) -> None:
        if not 0 <= k <= self.max_level:
            raise ValueError(f"level {k} outside 0..{self.max_level}")

    def element(self, k: int) -> SetDescriptor:
        self._check_level(k)
        found = self._elements.get(k)
        if found is None:
            found = self._element_fn(k)
            if self.punctured_at_zero and found.contains(0.0):
                raise ValueError(
                    f"chain {self.id!r} is flagged punctured_at_zero "
                    f"but element({k}) contains 0")
            self._elements[k] = found
        return found

    def scale(self, k: int) -> float:
        """Shrink scale of level k: the interval half-width for geometric
        bases, the tail start index for sequence bases."""
        self._check_level(k)
        return self._scale_fn(k)

    def sample(self, k: int, m: int, seed: int) -> list[float]:
        """m distinct members of element(k); deterministic in (k, m, seed)."""
        if m < 2:
            raise ValueError("need m >= 2 sample points")
        self._check_level(k)
        if self._sample_fn is not None:
            return self._sample_fn(k, m, seed)
        return _stratified_sample(self.element(k), m, seed, level=k)

    def subchain(self, stride: int) -> "FilterBaseChain":
        """The coarser chain k -> element(stride * k)."""
        if stride < 1:
            raise ValueError("stride must be >= 1")
        parent = self
        return FilterBaseChain(
            chain_id=f"{self.id}/stride={stride}",
            max_level=self.max_level // stride,
            punctured_at_zero=self.punctured_at_zero,
            params={**self.params, "stride": stride},
            element_fn=lambda k: parent.element(stride * k),
            scale_fn=lambda k: parent.scale(stride * k),
            sample_fn=lambda k, m, seed: parent.sample(stride * k, m, seed),
        )


def _geometric_scales(delta0: float, ratio: float, max_level: int) -> tuple[float, ...]:
    delta0 = float(delta0)
    ratio = float(ratio)
    if not (math.isfinite(delta0) and delta0 > 0.0):
        raise ValueError("delta0 must be a positive real")
    if not (math.isfinite(ratio) and 0.0 < ratio < 1.0):
        raise ValueError("ratio must lie strictly inside (0, 1)")
    if max_level < 0:
        raise ValueError("max_level must be >= 0")
    scales = [delta0]
    for _ in range(max_level):
        scales.append(scales[-1] * ratio)
    if scales[-1] < _MIN_SCALE:
        raise ValueError(
            f"delta0*ratio**{max_level} = {scales[-1]!r} is below {_MIN_SCALE}; "
            "reduce max_level")
    return tuple(scales)


def punctured_base(delta0: float, ratio: float, *, max_level: int = 64) -> FilterBaseChain:
    """Punctured symmetric neighborhoods of 0:
    element(k) = (-delta0*ratio**k, delta0*ratio**k) \\ {0}."""
    scales = _geometric_scales(delta0, ratio, max_level)

    def element(k: int) -> SetDescriptor:
        d = scales[k]
        return SetDescriptor(intervals=((-d, d),), excluded=(0.0,))

    return FilterBaseChain(
        chain_id=f"punctured:delta0={float(delta0)!r},ratio={float(ratio)!r}",
        max_level=max_level,
        punctured_at_zero=True,
        params={"kind": "punctured", "delta0": float(delta0),
                "ratio": float(ratio), "max_level": max_level},
        element_fn=element,
        scale_fn=lambda k: scales[k],
    )


def right_base(delta0: float, ratio: float, *, max_level: int = 64) -> FilterBaseChain:
    """Right-sided neighborhoods: element(k) = (0, delta0*ratio**k)."""
    scales = _geometric_scales(delta0, ratio, max_level)
    return FilterBaseChain(
        chain_id=f"right:delta0={float(delta0)!r},ratio={float(ratio)!r}",
        max_level=max_level,
        punctured_at_zero=True,
        params={"kind": "right", "delta0": float(delta0),
                "ratio": float(ratio), "max_level": max_level},
        element_fn=lambda k: SetDescriptor(intervals=((0.0, scales[k]),)),
        scale_fn=lambda k: scales[k],
    )


def left_base(delta0: float, ratio: float, *, max_level: int = 64) -> FilterBaseChain:
    """Left-sided neighborhoods: element(k) = (-delta0*ratio**k, 0)."""
    scales = _geometric_scales(delta0, ratio, max_level)
    return FilterBaseChain(
        chain_id=f"left:delta0={float(delta0)!r},ratio={float(ratio)!r}",
        max_level=max_level,
        punctured_at_zero=True,
        params={"kind": "left", "delta0": float(delta0),
                "ratio": float(ratio), "max_level": max_level},
        element_fn=lambda k: SetDescriptor(intervals=((-scales[k], 0.0),)),
        scale_fn=lambda k: scales[k],
    )


@dataclass(frozen=True)
class SequenceSpec:
    """A strictly |.|-decreasing null sequence from the closed family

    - powinv:   h_n = c * n**(-p), p > 0
    - geo:      h_n = c * q**n,    0 < |q| < 1
    - piovern:  h_n = c / (pi * n)

    with c != 0 and n >= 1.
    """

    kind: str
    c: float = 1.0
    p: float | None = None
    q: float | None = None

    def __post_init__(self):
        if self.kind not in ("powinv", "geo", "piovern"):
            raise ValueError(f"unknown sequence kind {self.kind!r} "
                             "(expected powinv, geo, or piovern)")
        if not (math.isfinite(self.c) and self.c != 0.0):
            raise ValueError("c must be a nonzero real")
        if self.kind == "powinv":
            if self.p is None or not (math.isfinite(self.p) and self.p > 0.0):
                raise ValueError("powinv requires p > 0")
        if self.kind == "geo":
            if self.q is None or not (math.isfinite(self.q) and 0.0 < abs(self.q) < 1.0):
                raise ValueError("geo requires 0 < |q| < 1")

    def describe(self) -> str:
        if self.kind == "powinv":
            return f"seq:kind=powinv,c={self.c!r},p={self.p!r}"
        if self.kind == "geo":
            return f"seq:kind=geo,c={self.c!r},q={self.q!r}"
        return f"seq:kind=piovern,c={self.c!r}"


def _sequence_terms(spec: SequenceSpec, count: int) -> tuple[float, ...]:
    vals: list[float] = []
    if spec.kind == "geo":
        h = spec.c
        for _ in range(count):
            h = h * spec.q
            vals.append(h)
    elif spec.kind == "powinv":
        vals = [spec.c * math.pow(n, -spec.p) for n in range(1, count + 1)]
    else:
        vals = [spec.c / (math.pi * n) for n in range(1, count + 1)]
    for v in vals:
        if not math.isfinite(v) or v == 0.0:
            raise ValueError("sequence term underflowed to 0 or overflowed; "
                             "shorten the tail or change parameters")
    for a, b in zip(vals, vals[1:]):
        if not abs(b) < abs(a):
            raise ValueError("sequence is not strictly decreasing in magnitude")
    return tuple(vals)


def sequence_base(spec: SequenceSpec, *, max_level: int = 64,
                  tail_points: int = 256) -> FilterBaseChain:
    """Tails-of-a-sequence base: element(k) = {h_n : n >= k+1}, truncated at a
    single global index max_level + tail_points so that the truncated tails
    nest exactly. sample() returns the first m members of the tail."""
    if tail_points < 2:
        raise ValueError("tail_points must be >= 2")
    cutoff = max_level + tail_points
    values = _sequence_terms(spec, cutoff)

    def element(k: int) -> SetDescriptor:
        return SetDescriptor(points=values[k:])

    def sample_fn(k: int, m: int, seed: int) -> list[float]:
        if m > cutoff - k:
            raise ValueError(
                f"level {k} tail truncation holds {cutoff - k} points, need {m}")
        return list(values[k:k + m])

    params: dict[str, object] = {"kind": "seq", "seq_kind": spec.kind,
                                 "c": spec.c, "max_level": max_level,
                                 "tail_points": tail_points}
    if spec.p is not None:
        params["p"] = spec.p
    if spec.q is not None:
        params["q"] = spec.q
    return FilterBaseChain(
        chain_id=spec.describe(),
        max_level=max_level,
        punctured_at_zero=True,
        params=params,
        element_fn=element,
        scale_fn=lambda k: float(k + 1),
        sample_fn=sample_fn,
    )


def chain_from_elements(chain_id: str, elements: Sequence[SetDescriptor], *,
                        punctured_at_zero: bool = False) -> FilterBaseChain:
    """Hand-built chain over an explicit element list (levels 0..len-1).
    Useful for testing broken bases against verify_base_axioms."""
    elems = tuple(elements)
    if not elems:
        raise ValueError("need at least one element")
    return FilterBaseChain(
        chain_id=chain_id,
        max_level=len(elems) - 1,
        punctured_at_zero=punctured_at_zero,
        params={"kind": "custom", "levels": len(elems)},
        element_fn=lambda k: elems[k],
        scale_fn=float,
    )


@dataclass(frozen=True)
class AxiomReport:
    """Verdicts of the two base axioms over levels 0..levels_checked.

    Axiom 1 (no empty element) fails at each level in empty_levels. Axiom 2
    (two elements contain a common element inside their intersection) is
    verified through nestedness: element(max(j,k)) ⊆ element(j) ∩ element(k)
    for every pair, which for j < k reduces to element(k) ⊆ element(j);
    each failing pair lands in nesting_failures.
    """

    base_id: str
    levels_checked: int
    empty_levels: tuple[int, ...]
    nesting_failures: tuple[tuple[int, int], ...]

    @property
    def axiom1_ok(self) -> bool:
        return not self.empty_levels

    @property
    def axiom2_ok(self) -> bool:
        return not self.nesting_failures

    @property
    def passed(self) -> bool:
        return self.axiom1_ok and self.axiom2_ok


def verify_base_axioms(b: FilterBaseChain, K: int) -> AxiomReport:
    """Check the base axioms exactly over levels 0..K (K <= b.max_level)."""
    if not 0 <= K <= b.max_level:
        raise ValueError(f"K must lie in 0..{b.max_level}")
    descs = [b.element(k) for k in range(K + 1)]
    empty = tuple(k for k, d in enumerate(descs) if d.is_empty())
    failures = tuple((j, k)
                     for j in range(K + 1)
                     for k in range(j + 1, K + 1)
                     if not descs[k].issubset(descs[j]))
    return AxiomReport(base_id=b.id, levels_checked=K,
                       empty_levels=empty, nesting_failures=failures)


def generated_filter_witness(b: FilterBaseChain, S: SetDescriptor, K: int) -> int | None:
    """Smallest level k <= K with element(k) ⊆ S, or None if no witness."""
    if not 0 <= K <= b.max_level:
        raise ValueError(f"K must lie in 0..{b.max_level}")
    for k in range(K + 1):
        if b.element(k).issubset(S):
            return k
    return None


def in_generated_filter(b: FilterBaseChain, S: SetDescriptor, K: int) -> bool:
    """True iff S contains some base element of level <= K, i.e. S is seen to
    belong to the filter generated by b. False only means "no witness up to
    level K"."""
    return generated_filter_witness(b, S, K) is not None
