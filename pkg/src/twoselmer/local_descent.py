"""Local Kummer images alpha_v(chi), their dimensions and the norm index h_v.

The image for a local twist class is generated by the 2-torsion cocycles
plus images of sampled local points; sampling stops as soon as the known
a-priori dimension is reached, so the result is certified rather than
heuristic.  Images are cached per (model, place, twist class): a twist's
local conditions depend only on its local square class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from . import gf2
from .curve import FullTwoTorsionModel
from .errors import SamplingBudgetExceeded
from .padic import (
    LocalCocycle,
    LocalSquareClass,
    Place,
    local_class,
    nonresidue,
    trivial_class,
)

DEFAULT_SAMPLING_BUDGET = 10**5


@dataclass(frozen=True)
class LocalImage:
    """F2-subspace alpha_v of the local cocycle space, with a certified basis."""

    place: Place
    basis: tuple[LocalCocycle, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def bit_rows(self) -> list[int]:
        return [c.as_int() for c in self.basis]

    def contains(self, c: LocalCocycle) -> bool:
        return gf2.in_span(c.as_int(), self.bit_rows())


def expected_local_dim(
    model: FullTwoTorsionModel, d_class: LocalSquareClass, place: Place
) -> int:
    """dim E'(Q_v)/2E'(Q_v) for any quadratic twist of a full 2-torsion model."""
    del model, d_class  # full rational 2-torsion survives every twist
    if place.is_infinite:
        return 1
    return 3 if place.p == 2 else 2


def _torsion_cocycles(roots: tuple[int, int, int], place: Place) -> list[LocalCocycle]:
    r1, r2, r3 = roots
    t1 = LocalCocycle(
        local_class((r1 - r2) * (r1 - r3), place), local_class(r1 - r2, place)
    )
    t2 = LocalCocycle(
        local_class(r2 - r1, place), local_class((r2 - r1) * (r2 - r3), place)
    )
    return [t1, t2]


def _sample_x(place: Place, roots: tuple[int, int, int]) -> Iterator[Fraction]:
    """Deterministic stream of rational x-values dense enough in Q_v."""
    if place.is_infinite:
        for j in range(7):
            q = 2**j
            for a in range(-4096, 4097):
                yield Fraction(a, q)
        return
    p = place.p
    # near-root ladder: x = r + t * p^m with t hitting both residue signs
    if p == 2:
        ts = [1, 3, 5, 7]
        depth = 9
    else:
        u = nonresidue(p)
        ts = list(range(1, 10)) + [u * s for s in range(1, 10)]
        depth = 7
    for m in range(1, depth):
        pm = p**m
        for r in roots:
            for t in ts:
                yield Fraction(r + t * pm)
                yield Fraction(r - t * pm)
    # integers covering all residues, interleaved with denominator ladders
    denoms = [p ** (2 * j) for j in range(1, 4)]
    a = 1
    while True:
        yield Fraction(a)
        yield Fraction(-a)
        for q in denoms:
            if a % p:
                yield Fraction(a, q)
                yield Fraction(-a, q)
        a += 1


_image_cache: dict[tuple, LocalImage] = {}


def kummer_image(
    model: FullTwoTorsionModel,
    d_class: LocalSquareClass,
    place: Place,
    budget: int = DEFAULT_SAMPLING_BUDGET,
    multiplied_coordinates: bool = False,
) -> LocalImage:
    """alpha_v for the local twist by d_class, in the ambient E[2] coordinates.

    ``multiplied_coordinates`` switches to the (wrong) identification that
    multiplies both cocycle coordinates by the twist class; it exists only
    so the test suites can demonstrate that convention fails.
    """
    if d_class.place != place:
        raise ValueError("class/place mismatch")
    key = (model.roots, place, d_class.bits, multiplied_coordinates)
    cached = _image_cache.get(key)
    if cached is not None:
        return cached

    # Order matters: root i of the twist corresponds to root i of the base
    # model under the canonical E[2] identification (e_i, 0) <-> (d e_i, 0).
    rep = d_class.representative()
    roots = tuple(rep * e for e in model.roots)
    target = expected_local_dim(model, d_class, place)

    span = gf2.Span()
    basis: list[LocalCocycle] = []

    def push(c: LocalCocycle) -> None:
        if multiplied_coordinates and not c.is_trivial:
            c = LocalCocycle(c.first + d_class, c.second + d_class)
        if span.add(c.as_int()):
            basis.append(c)

    for t in _torsion_cocycles(roots, place):
        push(t)
        if span.dim == target:
            break

    if span.dim < target:
        r1, r2, _ = roots
        remaining = budget
        for x in _sample_x(place, roots):
            if remaining <= 0:
                raise SamplingBudgetExceeded(
                    f"kummer image at {place} for class {d_class.bits} stuck at "
                    f"dim {span.dim} < {target}"
                )
            remaining -= 1
            if x == roots[0] or x == roots[1] or x == roots[2]:
                continue
            f = (x - roots[0]) * (x - roots[1]) * (x - roots[2])
            if not local_class(f, place).is_trivial:
                continue
            push(LocalCocycle(local_class(x - r1, place), local_class(x - r2, place)))
            if span.dim == target:
                break
        else:  # pragma: no cover - the sampler streams are infinite at finite places
            raise SamplingBudgetExceeded("sample stream exhausted")

    image = LocalImage(place, tuple(basis))
    _image_cache[key] = image
    return image


def h_v(
    model: FullTwoTorsionModel, d_class: LocalSquareClass, place: Place
) -> int:
    """Kramer's local norm index: dim alpha_v(1) - dim(alpha_v(1) ∩ alpha_v(chi))."""
    if d_class.is_trivial:
        return 0
    a1 = kummer_image(model, trivial_class(place), place)
    ax = kummer_image(model, d_class, place)
    inter = gf2.intersect(a1.bit_rows(), ax.bit_rows(), 2 * place.width)
    return a1.dim - len(inter)


def clear_image_cache() -> None:
    _image_cache.clear()
