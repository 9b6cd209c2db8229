"""Conductor data c_alpha, the depth function f, concavity, types and galleries."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import InvalidInputError
from .rootdata import BasedRootDatum, RelativeRoot


# ---------------------------------------------------------------------------
# conductor assignments
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConductorAssignment:
    """Non-negative integers c_alpha on positive indivisible relative classes.

    c is symmetric (c_alpha = c_{-alpha}); divisible classes carry no value.
    residue_char_ok records the paper's residue-characteristic hypothesis as
    per-instance metadata; it is never enforced arithmetically.
    """

    values: tuple[tuple[str, int], ...]
    residue_char_ok: bool = True

    @classmethod
    def from_dict(cls, values: dict[str, int], residue_char_ok: bool = True) -> "ConductorAssignment":
        items = tuple(sorted((str(k), int(v)) for k, v in values.items()))
        return cls(values=items, residue_char_ok=residue_char_ok)

    def __post_init__(self):
        for label, c in self.values:
            if c < 0:
                raise InvalidInputError(f"conductor c_{label} must be non-negative")

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def of(self, root: RelativeRoot | str) -> int:
        label = root if isinstance(root, str) else root.class_label
        if label.startswith("-(") and label.endswith(")"):
            label = label[2:-1]
        elif label.startswith("-"):
            label = label[1:]
        for lab, c in self.values:
            if lab == label:
                return c
        raise InvalidInputError(f"conductor assignment is missing class {label!r}")

    def validate_for(self, relroots: tuple[RelativeRoot, ...]) -> None:
        labels = {r.label for r in relroots if r.sign > 0 and not r.divisible}
        given = {lab for lab, _ in self.values}
        if labels != given:
            raise InvalidInputError(
                f"conductor classes {sorted(given)} do not match indivisible positives {sorted(labels)}"
            )

    def is_admissible(self, relroots: tuple[RelativeRoot, ...]):
        """c_{a+b} <= max(c_a, c_b) over indivisible pairs; returns (ok, witness)."""
        self.validate_for(relroots)
        indiv = [r for r in relroots if not r.divisible]
        by_vec = {r.restriction: r for r in indiv}
        for a in indiv:
            for b in indiv:
                s = tuple(x + y for x, y in zip(a.restriction, b.restriction))
                r = by_vec.get(s)
                if r is None:
                    continue
                if self.of(r) > max(self.of(a), self.of(b)):
                    return False, (a.label, b.label)
        return True, None


def sample_admissible_assignment(
    relroots: tuple[RelativeRoot, ...], rng: random.Random, bound: int
) -> ConductorAssignment:
    """Uniform c on simple classes, closed by c_{a+b} := min(existing, max(c_a, c_b))."""
    positives = [r for r in relroots if r.sign > 0 and not r.divisible]
    values: dict[str, int] = {}
    for r in sorted(positives, key=lambda r: (r.height, r.expansion)):
        if r.is_simple:
            values[r.label] = rng.randint(0, bound)
    by_vec = {r.restriction: r for r in positives}
    for r in sorted(positives, key=lambda r: (r.height, r.expansion)):
        if r.is_simple:
            continue
        best = None
        for a in positives:
            for b in positives:
                if a.label not in values or b.label not in values:
                    continue
                if tuple(x + y for x, y in zip(a.restriction, b.restriction)) == r.restriction:
                    cand = max(values[a.label], values[b.label])
                    best = cand if best is None else min(best, cand)
        if best is None:
            best = rng.randint(0, bound)
        values[r.label] = best
    out = ConductorAssignment.from_dict(values)
    ok, witness = out.is_admissible(relroots)
    if not ok:
        raise InvalidInputError(f"sampler produced an inadmissible assignment (witness {witness})")
    return out


# ---------------------------------------------------------------------------
# the depth function and concavity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConcaveFunction:
    """Integer values on every signed relative root, with f(0) = 0 implicit."""

    values: tuple[tuple[str, int], ...]

    @classmethod
    def from_dict(cls, values: dict[str, int]) -> "ConcaveFunction":
        return cls(values=tuple(sorted(values.items())))

    def as_dict(self) -> dict[str, int]:
        return dict(self.values)

    def of(self, root: RelativeRoot | str) -> int:
        label = root if isinstance(root, str) else root.label
        for lab, v in self.values:
            if lab == label:
                return v
        raise InvalidInputError(f"depth function has no value on {label!r}")

    def shifted(self, relroots, delta) -> "ConcaveFunction":
        """f + <., delta> for a callable delta(root) -> int."""
        return ConcaveFunction.from_dict({r.label: self.of(r) + delta(r) for r in relroots})


def depth_function(c: ConductorAssignment, relroots: tuple[RelativeRoot, ...]) -> ConcaveFunction:
    """The depth profile: floor(c/2) on positives, max(1, floor((c+1)/2)) on negatives.

    Positive divisible roots get 0 (excluded from the floor case by "alpha/2
    not in R").  Negative divisible roots take the negative-case floor value 1:
    assigning 0 there would break concavity on every non-reduced system
    (witness a + (-2a) = -a at depth zero), so the commutator constraint pins
    the case order.
    """
    c.validate_for(relroots)
    values = {}
    for r in relroots:
        if r.divisible:
            values[r.label] = 0 if r.sign > 0 else 1
        elif r.sign > 0:
            values[r.label] = c.of(r) // 2
        else:
            values[r.label] = max(1, (c.of(r) + 1) // 2)
    return ConcaveFunction.from_dict(values)


def is_concave(f: ConcaveFunction, relroots: tuple[RelativeRoot, ...]):
    """f(a+b) <= f(a) + f(b) for all summable pairs (sum a root or 0); returns (ok, witness)."""
    by_vec = {r.restriction: r for r in relroots}
    roots = list(relroots)
    for a in roots:
        for b in roots:
            s = tuple(x + y for x, y in zip(a.restriction, b.restriction))
            if all(x == 0 for x in s):
                if 0 > f.of(a) + f.of(b):
                    return False, (a.label, b.label)
                continue
            r = by_vec.get(s)
            if r is None:
                continue
            if f.of(r) > f.of(a) + f.of(b):
                return False, (a.label, b.label)
    return True, None


def iwahori_profile(relroots: tuple[RelativeRoot, ...]) -> ConcaveFunction:
    zero = ConductorAssignment.from_dict(
        {r.label: 0 for r in relroots if r.sign > 0 and not r.divisible}
    )
    return depth_function(zero, relroots)


# ---------------------------------------------------------------------------
# type descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeDescriptor:
    """Depth profile of the compact open subgroup attached to a conductor assignment."""

    label: str
    torus_depth: int
    root_depths: ConcaveFunction


def type_descriptor(
    c: ConductorAssignment, relroots: tuple[RelativeRoot, ...], label: str = ""
) -> TypeDescriptor:
    f = depth_function(c, relroots)
    ok, witness = is_concave(f, relroots)
    if not ok:
        raise InvalidInputError(f"depth function is not concave (witness {witness})")
    return TypeDescriptor(label=label, torus_depth=0, root_depths=f)


# ---------------------------------------------------------------------------
# gallery walks (rank <= 2, split)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GalleryWalk:
    """A gallery of apartment points linked by affine reflections.

    Points live in Y (x) Q of a split rank <= 2 datum, scaled so that every
    root pairing of every point is an integer; hyperplanes are <alpha, y> = h.
    """

    datum: BasedRootDatum
    scale: int
    points: tuple[tuple[Fraction, ...], ...]
    reflections: tuple[tuple[int, Fraction], ...]  # (positive root index, level h)

    def __post_init__(self):
        self._validate()

    def _func(self, root, point) -> Fraction:
        n = self.datum.rank
        out = Fraction(0)
        for j in range(n):
            e = tuple(int(k == j) for k in range(n))
            out += Fraction(self.datum.pair(root, e)) * point[j]
        return out

    def _validate(self):
        if self.datum.rank > 2:
            raise InvalidInputError("gallery walks are implemented for rank <= 2 apartments only")
        if len(self.points) != len(self.reflections) + 1:
            raise InvalidInputError("a walk of k steps needs k+1 points")
        seen_planes = set()
        for k, (idx, level) in enumerate(self.reflections):
            root = self.datum.roots[idx]
            coroot = self.datum.coroots[idx]
            x = self.points[k]
            coef = self._func(root, x) - level
            reflected = tuple(xj - coef * cj for xj, cj in zip(x, coroot))
            if reflected != self.points[k + 1]:
                raise InvalidInputError(f"step {k + 1} is not the stored affine reflection")
            if coef == 0:
                raise InvalidInputError(f"step {k + 1} starts on its own mirror")
            key = (root, level) if self.datum.is_positive(root) else (tuple(-v for v in root), -level)
            if key in seen_planes:
                raise InvalidInputError(f"hyperplane {key} repeats along the walk")
            seen_planes.add(key)
        for k, x in enumerate(self.points):
            if k < 2:
                continue
            for b in self.datum.base_roots:
                if self._func(b, x) > 0:
                    raise InvalidInputError(f"point {k} leaves the closed negative cone")

    def pairing_shift(self, root, i: int) -> Fraction:
        """<root, x_i - x_0>."""
        return self._func(root, self.points[i]) - self._func(root, self.points[0])


def build_negative_cone_walk(datum: BasedRootDatum, steps: int, scale: int = 6) -> GalleryWalk:
    """Ray gallery into the closed negative cone of a split rank <= 2 datum.

    The apartment is scaled by ``scale`` (walls at <alpha, y> in scale * Z), so
    interior points can be chosen with integral root pairings.  A ray from the
    base alcove crosses each affine hyperplane at most once; the gallery points
    are successive mirror images through the crossed walls, so consecutive
    points differ by one affine reflection and stay inside the cone.
    """
    n = datum.rank
    if n > 2:
        raise InvalidInputError("rank <= 2 only")
    pos = [datum.roots[i] for i in datum.positive_root_indices]

    def func(root, point):
        out = Fraction(0)
        for j in range(n):
            e = tuple(int(k == j) for k in range(n))
            out += Fraction(datum.pair(root, e)) * point[j]
        return out

    # start/direction pinned by their base-root functionals; the (-3, -7)
    # direction makes all wall-crossing times pairwise distinct (parity check
    # in the step loop guards the choice).
    start_funcs = [Fraction(-2 - i) for i in range(n)]
    dir_funcs = [Fraction(f) for f in (-3, -7)[:n]]
    rows = [
        [Fraction(datum.pair(b, tuple(int(k == j) for k in range(n)))) for j in range(n)]
        for b in datum.base_roots
    ]
    start = linalg.rat_solve([tuple(r) for r in rows], start_funcs)
    direction = linalg.rat_solve([tuple(r) for r in rows], dir_funcs)
    if start is None or direction is None:
        raise InvalidInputError("cannot place the walk in this apartment")

    points = [tuple(start)]
    reflections: list[tuple[int, Fraction]] = []
    x = tuple(start)
    t_cur = Fraction(0)
    for _ in range(steps):
        best = None
        for root in pos:
            fv0 = func(root, start)
            fd = func(root, direction)
            if fd == 0:
                continue
            cur = fv0 + t_cur * fd
            q = cur / scale
            if fd < 0:
                level = (q.numerator // q.denominator) * scale
                if Fraction(level) >= cur:
                    level -= scale
            else:
                level = -((-q.numerator) // q.denominator) * scale
                if Fraction(level) <= cur:
                    level += scale
            t = (Fraction(level) - fv0) / fd
            if t <= t_cur:
                continue
            if best is None or t < best[0]:
                best = (t, root, Fraction(level))
            elif t == best[0]:
                raise InvalidInputError("ray hits two walls simultaneously; adjust the direction")
        if best is None:
            raise InvalidInputError("ray escapes the arrangement")
        t_cur, root, level = best
        coroot = datum.coroots[datum.root_index(root)]
        coef = func(root, x) - level
        x = tuple(xj - coef * cj for xj, cj in zip(x, coroot))
        points.append(x)
        reflections.append((datum.root_index(root), level))
    return GalleryWalk(datum=datum, scale=scale, points=tuple(points), reflections=tuple(reflections))


def gallery_shifted_family(
    f: ConcaveFunction, walk: GalleryWalk, relroots: tuple[RelativeRoot, ...]
) -> tuple[ConcaveFunction, ...]:
    """The shifted depth profiles f_i(a) = f(a) + <a, x_i - x_0>, one per walk point.

    Requires relroots to be the (split) relative system of the walk's datum, so
    restriction vectors match the datum's roots.
    """
    out = []
    for i in range(len(walk.points)):
        values = {}
        for r in relroots:
            shift = walk.pairing_shift(r.restriction, i)
            if shift.denominator != 1:
                raise InvalidInputError(
                    f"pairing <{r.label}, x_{i} - x_0> = {shift} is not integral; rescale the walk"
                )
            values[r.label] = f.of(r) + int(shift)
        fi = ConcaveFunction.from_dict(values)
        ok, witness = is_concave(fi, relroots)
        if not ok:
            raise InvalidInputError(f"shifted function at step {i} is not concave (witness {witness})")
        out.append(fi)
    return tuple(out)
