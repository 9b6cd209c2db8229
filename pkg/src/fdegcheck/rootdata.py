"""Based root data, Weyl groups, diagram automorphisms and Galois actions.

All lattices are Z^n with explicit integer pairing matrices; roots live on the
character side X, coroots on the cocharacter side Y, and ``pair(x, y)`` is
x^T P y. Catalog data use root-lattice presentations (X-basis = simple roots,
pairing = Cartan matrix) so a permutation of the base determines the lattice
action of a diagram automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import CapacityError, InternalConsistencyError, InvalidInputError
from . import linalg
from .linalg import Mat, Vec

WEYL_RANK_BOUND = 6
WEYL_ORDER_BOUND = 51840
GROUP_CLOSURE_BOUND = 20000

GREEK = ("alpha", "beta", "gamma", "delta", "epsilon", "zeta")


# ---------------------------------------------------------------------------
# based root data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasedRootDatum:
    """(X, R0, Y, R0^, F0) with an explicit pairing X x Y -> Z."""

    rank: int
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]
    pairing: Mat
    base: tuple[int, ...]  # indices into roots

    def __post_init__(self):
        self._validate()

    def pair(self, x: Vec, y: Vec):
        return linalg.bilinear(x, self.pairing, y)

    @property
    def base_roots(self) -> tuple[Vec, ...]:
        return tuple(self.roots[i] for i in self.base)

    @property
    def base_coroots(self) -> tuple[Vec, ...]:
        return tuple(self.coroots[i] for i in self.base)

    def root_index(self, v: Vec) -> int:
        try:
            return self.roots.index(tuple(v))
        except ValueError:
            raise InvalidInputError(f"{v} is not a root") from None

    def expansion(self, root: Vec) -> tuple[Fraction, ...]:
        """Coordinates of a root over the base (exact, possibly fractional)."""
        rows = [[self.base_roots[j][i] for j in range(len(self.base))] for i in range(self.rank)]
        sol = linalg.rat_solve(rows, list(root))
        if sol is None:
            raise InvalidInputError(f"{root} is not in the span of the base")
        return sol

    def is_positive(self, root: Vec) -> bool:
        coeffs = self.expansion(root)
        if all(c >= 0 for c in coeffs) and any(c > 0 for c in coeffs):
            return True
        if all(c <= 0 for c in coeffs) and any(c < 0 for c in coeffs):
            return False
        raise InvalidInputError(f"root {root} has mixed-sign base expansion")

    @property
    def positive_root_indices(self) -> tuple[int, ...]:
        return tuple(i for i, r in enumerate(self.roots) if self.is_positive(r))

    def reflect_root(self, i: int, x: Vec) -> Vec:
        """s_{alpha_i-th root} acting on X: x - <x, a_i^> a_i."""
        a, av = self.roots[i], self.coroots[i]
        c = self.pair(x, av)
        return tuple(xj - c * aj for xj, aj in zip(x, a))

    def reflect_coroot(self, i: int, y: Vec) -> Vec:
        """The same reflection on Y: y - <a_i, y> a_i^."""
        a, av = self.roots[i], self.coroots[i]
        c = self.pair(a, y)
        return tuple(yj - c * avj for yj, avj in zip(y, av))

    def reflection_matrix(self, i: int) -> Mat:
        n = self.rank
        cols = [self.reflect_root(i, tuple(int(k == j) for k in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    def coreflection_matrix(self, i: int) -> Mat:
        n = self.rank
        cols = [self.reflect_coroot(i, tuple(int(k == j) for k in range(n))) for j in range(n)]
        return tuple(tuple(cols[j][r] for j in range(n)) for r in range(n))

    def _validate(self):
        if len(self.roots) != len(self.coroots):
            raise InvalidInputError("root/coroot lists differ in length")
        if len(set(self.roots)) != len(self.roots) or len(set(self.coroots)) != len(self.coroots):
            raise InvalidInputError("root/coroot correspondence is not a bijection")
        for a, av in zip(self.roots, self.coroots):
            if self.pair(a, av) != 2:
                raise InvalidInputError(f"<{a}, {av}> != 2")
        root_pos = {r: k for k, r in enumerate(self.roots)}
        for i in range(len(self.roots)):
            for k, b in enumerate(self.roots):
                sb = self.reflect_root(i, b)
                if sb not in root_pos:
                    raise InvalidInputError(f"reflection of {b} in root {i} leaves R0")
                sbv = self.reflect_coroot(i, self.coroots[k])
                if self.coroots[root_pos[sb]] != sbv:
                    raise InvalidInputError("coroot of reflected root mismatches reflected coroot")
        for i in self.base:
            if not 0 <= i < len(self.roots):
                raise InvalidInputError("base index out of range")
        for r in self.roots:
            self.is_positive(r)  # raises on mixed signs or non-span
        for r in self.roots:
            coeffs = self.expansion(r)
            if any(c.denominator != 1 for c in coeffs):
                raise InvalidInputError(f"root {r} is not an integer combination of the base")


def build_root_datum_from_cartan(cartan: Mat) -> BasedRootDatum:
    """Split root datum with X-basis the simple roots and pairing the Cartan matrix."""
    n = len(cartan)
    for i in range(n):
        if cartan[i][i] != 2:
            raise InvalidInputError("Cartan diagonal must be 2")
    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    pairs = {(simples[i], simples[i]) for i in range(n)}
    frontier = list(pairs)

    # closure under simple reflections, tracking (root, coroot) pairs
    def s_root(i, x):
        c = linalg.bilinear(x, cartan, simples[i])
        return tuple(xj - c * sj for xj, sj in zip(x, simples[i]))

    def s_coroot(i, y):
        c = linalg.bilinear(simples[i], cartan, y)
        return tuple(yj - c * sj for yj, sj in zip(y, simples[i]))

    while frontier:
        a, av = frontier.pop()
        for i in range(n):
            na, nav = s_root(i, a), s_coroot(i, av)
            if (na, nav) not in pairs:
                pairs.add((na, nav))
                frontier.append((na, nav))
    ordered = sorted(pairs, key=lambda p: (sum(p[0]) < 0, p[0]))
    roots = tuple(p[0] for p in ordered)
    coroots = tuple(p[1] for p in ordered)
    base = tuple(roots.index(s) for s in simples)
    return BasedRootDatum(rank=n, roots=roots, coroots=coroots, pairing=tuple(map(tuple, cartan)), base=base)


# ---------------------------------------------------------------------------
# Weyl elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: reduced word in base positions plus its X/Y matrices."""

    word: tuple[int, ...]
    matrix: Mat
    comatrix: Mat

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    @property
    def length(self) -> int:
        return len(self.word)

    def apply(self, x: Vec) -> Vec:
        return linalg.mat_mul_vec(self.matrix, x)

    def coapply(self, y: Vec) -> Vec:
        return linalg.mat_mul_vec(self.comatrix, y)


def _simple_matrices(datum: BasedRootDatum) -> tuple[list[Mat], list[Mat]]:
    mats = [datum.reflection_matrix(datum.base[k]) for k in range(len(datum.base))]
    comats = [datum.coreflection_matrix(datum.base[k]) for k in range(len(datum.base))]
    return mats, comats


def inversion_count(datum: BasedRootDatum, matrix: Mat) -> int:
    """Number of positive roots sent to negative roots."""
    count = 0
    for i in datum.positive_root_indices:
        img = linalg.mat_mul_vec(matrix, datum.roots[i])
        if not datum.is_positive(img):
            count += 1
    return count


@lru_cache(maxsize=None)
def enumerate_weyl_group(datum: BasedRootDatum) -> tuple[WeylElement, ...]:
    """All Weyl elements with one lexicographically-least reduced word each (BFS)."""
    if datum.rank > WEYL_RANK_BOUND:
        raise CapacityError(f"rank {datum.rank} exceeds the enumeration bound {WEYL_RANK_BOUND}")
    mats, comats = _simple_matrices(datum)
    n = datum.rank
    ident = WeylElement(word=(), matrix=linalg.mat_identity(n), comatrix=linalg.mat_identity(n))
    seen = {ident.matrix: ident}
    queue = [ident]
    while queue:
        nxt = []
        for w in queue:
            for i in range(len(mats)):
                m = linalg.mat_mul(w.matrix, mats[i])
                if m not in seen:
                    cm = linalg.mat_mul(w.comatrix, comats[i])
                    el = WeylElement(word=w.word + (i,), matrix=m, comatrix=cm)
                    seen[m] = el
                    nxt.append(el)
                    if len(seen) > WEYL_ORDER_BOUND:
                        raise CapacityError("Weyl group enumeration exceeded the order bound")
        queue = nxt
    return tuple(sorted(seen.values(), key=lambda w: (w.length, w.word)))


def weyl_lookup(datum: BasedRootDatum, matrix: Mat) -> WeylElement:
    for w in enumerate_weyl_group(datum):
        if w.matrix == matrix:
            return w
    raise InvalidInputError("matrix is not a Weyl group element")


# ---------------------------------------------------------------------------
# diagram automorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagramAutomorphism:
    """An automorphism of (R0, F0): matrices on X and Y plus the base permutation."""

    label: str
    matrix: Mat
    comatrix: Mat
    base_perm: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, DiagramAutomorphism) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def apply(self, x: Vec) -> Vec:
        return linalg.mat_mul_vec(self.matrix, x)

    def coapply(self, y: Vec) -> Vec:
        return linalg.mat_mul_vec(self.comatrix, y)

    @property
    def is_identity(self) -> bool:
        return self.matrix == linalg.mat_identity(len(self.matrix))

    def compose(self, other: "DiagramAutomorphism") -> "DiagramAutomorphism":
        perm = tuple(self.base_perm[j] for j in other.base_perm)
        label = other.label + "*" + self.label if self.label and other.label else self.label + other.label
        return DiagramAutomorphism(
            label=label.strip("*") or "id",
            matrix=linalg.mat_mul(self.matrix, other.matrix),
            comatrix=linalg.mat_mul(self.comatrix, other.comatrix),
            base_perm=perm,
        )


def identity_automorphism(datum: BasedRootDatum) -> DiagramAutomorphism:
    n = datum.rank
    return DiagramAutomorphism(
        label="id",
        matrix=linalg.mat_identity(n),
        comatrix=linalg.mat_identity(n),
        base_perm=tuple(range(len(datum.base))),
    )


def automorphism_from_base_perm(datum: BasedRootDatum, perm, label: str) -> DiagramAutomorphism:
    """Build the automorphism sending simple root k to simple root perm[k].

    Requires the base to span X (root-lattice presentations), so the matrix is
    the corresponding permutation matrix in simple-root coordinates.
    """
    perm = tuple(perm)
    k = len(datum.base)
    if sorted(perm) != list(range(k)):
        raise InvalidInputError(f"{perm} is not a permutation of the base")
    if datum.rank != k:
        raise InvalidInputError("base permutation determines the action only on root-lattice models")
    rows = []
    for i in range(k):
        rows.append(tuple(int(perm[j] == i) for j in range(k)))
    mat = tuple(rows)
    auto = DiagramAutomorphism(label=label, matrix=mat, comatrix=mat, base_perm=perm)
    validate_automorphism(datum, auto)
    return auto


def validate_automorphism(datum: BasedRootDatum, g: DiagramAutomorphism) -> None:
    root_pos = {r: k for k, r in enumerate(datum.roots)}
    for k, r in enumerate(datum.roots):
        img = g.apply(r)
        if img not in root_pos:
            raise InvalidInputError(f"{g.label} does not permute R0 (image of {r})")
        if g.coapply(datum.coroots[k]) != datum.coroots[root_pos[img]]:
            raise InvalidInputError(f"{g.label} is incompatible with the coroot bijection")
    base_set = set(datum.base_roots)
    for b in datum.base_roots:
        if g.apply(b) not in base_set:
            raise InvalidInputError(f"{g.label} does not fix F0 setwise")
    for a in datum.base_roots:
        for bv in datum.base_coroots:
            if datum.pair(g.apply(a), g.coapply(bv)) != datum.pair(a, bv):
                raise InvalidInputError(f"{g.label} does not preserve the Cartan pairing")


@dataclass(frozen=True)
class DiagramAutomorphismGroup:
    """Closure of a set of diagram automorphisms."""

    generators: tuple[DiagramAutomorphism, ...]
    elements: tuple[DiagramAutomorphism, ...]

    @classmethod
    def generate(cls, datum: BasedRootDatum, generators, cap: int = 512) -> "DiagramAutomorphismGroup":
        gens = tuple(generators)
        for g in gens:
            validate_automorphism(datum, g)
        ident = identity_automorphism(datum)
        seen = {ident.matrix: ident}
        queue = [ident]
        while queue:
            cur = queue.pop()
            for g in gens:
                nxt = g.compose(cur)
                if nxt.matrix not in seen:
                    if len(seen) >= cap:
                        raise CapacityError("diagram automorphism group exceeds the closure bound")
                    seen[nxt.matrix] = nxt
                    queue.append(nxt)
        elements = tuple(sorted(seen.values(), key=lambda a: (len(a.label), a.label)))
        return cls(generators=gens, elements=elements)

    @property
    def order(self) -> int:
        return len(self.elements)


# ---------------------------------------------------------------------------
# local field extension data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldExtensionData:
    """(e, f, lower-numbering ramification group orders d_0 >= d_1 >= ... >= 1)."""

    e: int
    f: int
    filtration: tuple[int, ...]

    def __post_init__(self):
        if self.e < 1 or self.f < 1:
            raise InvalidInputError("e and f must be positive")
        filt = self.filtration
        if not filt or filt[-1] != 1:
            raise InvalidInputError("filtration must end at 1")
        for a, b in zip(filt, filt[1:]):
            if a % b != 0 or b > a:
                raise InvalidInputError("filtration orders must be non-increasing and divide")
        if self.e == 1:
            if filt != (1,):
                raise InvalidInputError("unramified extensions must have filtration (1,)")
        elif filt[0] != self.e:
            raise InvalidInputError("d_0 must equal the ramification index")
        wild = [d for d in filt[1:] if d > 1]
        if wild:
            p = _smallest_prime_factor(wild[0])
            for d in wild:
                dd = d
                while dd % p == 0:
                    dd //= p
                if dd != 1:
                    raise InvalidInputError("wild filtration orders must be powers of one prime")

    @property
    def degree(self) -> int:
        return self.e * self.f

    def to_json(self) -> dict:
        return {"e": self.e, "f": self.f, "filtration": list(self.filtration)}

    @classmethod
    def from_json(cls, doc: dict) -> "FieldExtensionData":
        return cls(e=int(doc["e"]), f=int(doc["f"]), filtration=tuple(int(d) for d in doc["filtration"]))


UNRAMIFIED = FieldExtensionData(e=1, f=1, filtration=(1,))


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


# ---------------------------------------------------------------------------
# Galois root data and relative roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaloisRootData:
    """Absolute based root datum with a two-generator (inertia, Frobenius) action."""

    name: str
    absolute: BasedRootDatum
    inertia: DiagramAutomorphism
    frobenius: DiagramAutomorphism
    orbit_fields: tuple[tuple[str, FieldExtensionData], ...]
    torus_filtration: FieldExtensionData

    def __post_init__(self):
        validate_automorphism(self.absolute, self.inertia)
        validate_automorphism(self.absolute, self.frobenius)
        torus_d0 = self.torus_filtration.filtration[0]
        order = linalg.mat_order(self.inertia.comatrix)
        if torus_d0 % order != 0:
            raise InvalidInputError(
                f"inertia acts with order {order} on Y but torus filtration has d_0 = {torus_d0}"
            )
        _validate_orbit_fields(self)

    @property
    def galois_group(self) -> DiagramAutomorphismGroup:
        return DiagramAutomorphismGroup.generate(self.absolute, (self.inertia, self.frobenius))

    def orbit_field(self, label: str) -> FieldExtensionData:
        for lab, ext in self.orbit_fields:
            if lab == label:
                return ext
        raise InvalidInputError(f"no extension data for relative class {label!r}")


@dataclass(frozen=True)
class RelativeRoot:
    """One relative root: a restriction vector plus its fiber of absolute roots."""

    label: str
    restriction: Vec
    orbit: frozenset[int]
    sign: int
    multipliable: bool
    divisible: bool
    expansion: tuple[int, ...]  # over simple relative classes

    @property
    def is_simple(self) -> bool:
        return self.sign > 0 and sum(self.expansion) == 1 and all(c in (0, 1) for c in self.expansion)

    @property
    def class_label(self) -> str:
        """Label of the positive class (strips the sign)."""
        lab = self.label
        if lab.startswith("-(") and lab.endswith(")"):
            return lab[2:-1]
        return lab[1:] if lab.startswith("-") else lab

    @property
    def indivisible(self) -> bool:
        return not self.divisible

    @property
    def height(self) -> int:
        return sum(self.expansion)


def galois_orbits(g: GaloisRootData) -> tuple[frozenset[int], ...]:
    """Orbits of root indices under the full two-generator Galois action."""
    datum = g.absolute
    root_pos = {r: k for k, r in enumerate(datum.roots)}
    gens = [g.inertia, g.frobenius]
    seen: set[int] = set()
    orbits = []
    for i in range(len(datum.roots)):
        if i in seen:
            continue
        orb = {i}
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for gen in gens:
                k = root_pos[gen.apply(datum.roots[j])]
                if k not in orb:
                    orb.add(k)
                    frontier.append(k)
        seen |= orb
        orbits.append(frozenset(orb))
    return tuple(orbits)


def inertia_orbit_size(g: GaloisRootData, root_index: int) -> int:
    datum = g.absolute
    root_pos = {r: k for k, r in enumerate(datum.roots)}
    orb = {root_index}
    j = root_index
    while True:
        j = root_pos[g.inertia.apply(datum.roots[j])]
        if j in orb:
            break
        orb.add(j)
    return len(orb)


@lru_cache(maxsize=None)
def restriction_quotient(g: GaloisRootData):
    """Coinvariant projection X -> X_Gal (free part), as rows of a matrix."""
    group = g.galois_group
    lattice = coinvariant_lattice(tuple(a.matrix for a in group.elements))
    return lattice.quotient_rows


@lru_cache(maxsize=None)
def relative_root_system(g: GaloisRootData) -> tuple[RelativeRoot, ...]:
    """Orbit partition of R0 with restrictions and (non-)reduced structure."""
    datum = g.absolute
    q_rows = restriction_quotient(g)

    def restrict(v: Vec) -> Vec:
        return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in q_rows)

    orbits = galois_orbits(g)
    by_restriction: dict[Vec, set[int]] = {}
    for orb in orbits:
        images = {restrict(datum.roots[i]) for i in orb}
        if len(images) != 1:
            raise InvalidInputError("Galois orbit has non-constant restriction")
        (img,) = images
        if all(c == 0 for c in img):
            raise InvalidInputError("a root restricts trivially; the action is not quasi-split")
        if img in by_restriction:
            raise InvalidInputError("two Galois orbits share a restriction; fibers must be single orbits")
        by_restriction[img] = set(orb)

    restrictions = set(by_restriction)

    # simple relative classes: restrictions of the absolute base, in base order
    simple_restrictions: list[Vec] = []
    for b in datum.base_roots:
        r = restrict(b)
        if r not in simple_restrictions:
            simple_restrictions.append(r)
    if len(simple_restrictions) > len(GREEK):
        raise CapacityError("relative rank exceeds the label alphabet")

    rows = [[simple_restrictions[j][i] for j in range(len(simple_restrictions))] for i in range(len(q_rows))]

    def expand(v: Vec) -> tuple[int, ...]:
        sol = linalg.rat_solve(rows, list(v))
        if sol is None:
            raise InternalConsistencyError("restriction not in the span of simple restrictions")
        if any(c.denominator != 1 for c in sol):
            raise InternalConsistencyError("non-integral relative expansion")
        out = tuple(int(c) for c in sol)
        if not (all(c >= 0 for c in out) or all(c <= 0 for c in out)):
            raise InternalConsistencyError("mixed-sign relative expansion")
        return out

    def label_for(exp: tuple[int, ...]) -> str:
        neg = all(c <= 0 for c in exp) and any(c < 0 for c in exp)
        coeffs = [-c for c in exp] if neg else list(exp)
        parts = []
        for c, name in zip(coeffs, GREEK):
            if c == 0:
                continue
            parts.append(name if c == 1 else f"{c}{name}")
        body = "+".join(parts)
        if not neg:
            return body
        return f"-({body})" if len(parts) > 1 else f"-{body}"

    out = []
    for img, orb in by_restriction.items():
        exp = expand(img)
        double = tuple(2 * c for c in img)
        half = tuple(Fraction(c, 2) for c in img)
        half_t = tuple(int(c) for c in half) if all(c.denominator == 1 for c in half) else None
        out.append(
            RelativeRoot(
                label=label_for(exp),
                restriction=img,
                orbit=frozenset(orb),
                sign=1 if all(c >= 0 for c in exp) else -1,
                multipliable=double in restrictions,
                divisible=half_t in restrictions if half_t is not None else False,
                expansion=exp,
            )
        )
    out.sort(
        key=lambda r: (r.sign < 0, sum(abs(c) for c in r.expansion), tuple(-c for c in r.expansion))
    )
    return tuple(out)


def positive_relative_roots(g: GaloisRootData, indivisible_only: bool = False):
    rel = relative_root_system(g)
    out = [r for r in rel if r.sign > 0]
    if indivisible_only:
        out = [r for r in out if not r.divisible]
    return tuple(out)


def relative_by_label(g: GaloisRootData, label: str) -> RelativeRoot:
    for r in relative_root_system(g):
        if r.label == label:
            return r
    raise InvalidInputError(f"unknown relative root label {label!r}")


def _validate_orbit_fields(g: GaloisRootData) -> None:
    rel = relative_root_system(g)
    pos_labels = {r.label for r in rel if r.sign > 0}
    given = {lab for lab, _ in g.orbit_fields}
    if given != pos_labels:
        raise InvalidInputError(
            f"orbit_fields keys {sorted(given)} do not match positive relative classes {sorted(pos_labels)}"
        )
    for r in rel:
        if r.sign < 0:
            continue
        ext = g.orbit_field(r.label)
        rep = min(r.orbit)
        e = inertia_orbit_size(g, rep)
        if ext.e != e:
            raise InvalidInputError(f"class {r.label}: e = {ext.e} but the inertia orbit has size {e}")
        if ext.f * ext.e != len(r.orbit):
            raise InvalidInputError(
                f"class {r.label}: f = {ext.f} but the orbit has {len(r.orbit)} roots with e = {e}"
            )


# ---------------------------------------------------------------------------
# isotropy decomposition (section-2 machinery)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizerElement:
    """An element w*gamma of W0 x| Gamma acting on X."""

    matrix: Mat
    weyl_matrix: Mat
    gamma: DiagramAutomorphism

    def __eq__(self, other):
        return isinstance(other, StabilizerElement) and (self.matrix, self.gamma.matrix) == (
            other.matrix,
            other.gamma.matrix,
        )

    def __hash__(self):
        return hash((self.matrix, self.gamma.matrix))


@dataclass(frozen=True)
class IsotropyDecomposition:
    r_t: tuple[int, ...]  # root indices fixed by their reflections at t
    f_t: tuple[int, ...]  # basis of R_t (indices into roots)
    weyl_part: tuple[Mat, ...]  # W(R_t) as matrices on X
    complement: tuple[StabilizerElement, ...]  # W'_{F_t,t}
    stabilizer_order: int


def _fixes_point(datum: BasedRootDatum, matrix: Mat, t) -> bool:
    n = datum.rank
    for j in range(n):
        e = tuple(int(k == j) for k in range(n))
        if t.evaluate(linalg.mat_mul_vec(matrix, e)) != t.evaluate(e):
            return False
    return True


def isotropy_decomposition(
    datum: BasedRootDatum, gamma: DiagramAutomorphismGroup, t
) -> IsotropyDecomposition:
    """R_t, F_t, W(R_t) and the complement W'_{F_t,t} inside the stabilizer of t.

    ``t`` is any torus point object exposing ``evaluate(vec) -> (Fraction mod 1,
    Fraction)`` (see hecke.TorusPoint).
    """
    n = datum.rank
    # R_t = {alpha : s_alpha(t) = t}, tested on the X-basis
    r_t = []
    for idx, (a, av) in enumerate(zip(datum.roots, datum.coroots)):
        u, r = t.evaluate(a)
        ok = True
        for j in range(n):
            e = tuple(int(k == j) for k in range(n))
            c = datum.pair(e, av)
            if (c * u) % 1 != 0 or c * r != 0:
                ok = False
                break
        if ok:
            r_t.append(idx)
    pos_rt = [i for i in r_t if datum.is_positive(datum.roots[i])]
    pos_vecs = {datum.roots[i] for i in pos_rt}
    f_t = [
        i
        for i in pos_rt
        if not any(
            linalg.vec_sub(datum.roots[i], datum.roots[j]) in pos_vecs
            for j in pos_rt
            if j != i and linalg.vec_sub(datum.roots[i], datum.roots[j]) != tuple([0] * n)
        )
    ]
    # W(R_t): closure of the reflections in F_t
    gens = [datum.reflection_matrix(i) for i in f_t]
    ident = linalg.mat_identity(n)
    weyl = {ident}
    frontier = [ident]
    while frontier:
        m = frontier.pop()
        for s in gens:
            nm = linalg.mat_mul(m, s)
            if nm not in weyl:
                if len(weyl) > WEYL_ORDER_BOUND:
                    raise CapacityError("W(R_t) closure exceeded the order bound")
                weyl.add(nm)
                frontier.append(nm)

    stab = []
    for w in enumerate_weyl_group(datum):
        for gm in gamma.elements:
            m = linalg.mat_mul(w.matrix, gm.matrix)
            if _fixes_point(datum, m, t):
                stab.append(StabilizerElement(matrix=m, weyl_matrix=w.matrix, gamma=gm))
    f_t_vecs = {datum.roots[i] for i in f_t}
    complement = [
        s for s in stab if {tuple(linalg.mat_mul_vec(s.matrix, v)) for v in f_t_vecs} == f_t_vecs
    ]
    # the product map W(R_t) x W' -> stabilizer must be a bijection
    products = set()
    for m in weyl:
        for c in complement:
            products.add(linalg.mat_mul(m, c.matrix))
    stab_mats = {s.matrix for s in stab}
    if len(products) != len(weyl) * len(complement) or products != stab_mats:
        raise InternalConsistencyError("stabilizer does not factor as W(R_t) x| W'_{F_t,t}")
    return IsotropyDecomposition(
        r_t=tuple(r_t),
        f_t=tuple(f_t),
        weyl_part=tuple(sorted(weyl)),
        complement=tuple(complement),
        stabilizer_order=len(stab),
    )


# ---------------------------------------------------------------------------
# coinvariant lattices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoinvariantLattice:
    """Free quotient X_G (mod torsion) and the invariant lattice X^G."""

    quotient_rows: tuple[Vec, ...]  # projection matrix X -> Z^r (rows)
    torsion: tuple[int, ...]
    invariant_basis: tuple[Vec, ...]

    @property
    def rank(self) -> int:
        return len(self.quotient_rows)


@lru_cache(maxsize=None)
def coinvariant_lattice(matrices: tuple[Mat, ...]) -> CoinvariantLattice:
    """Coinvariants (via Smith normal form) and invariants of a finite action on Z^n."""
    if not matrices:
        raise InvalidInputError("need at least one matrix")
    n = len(matrices[0])
    # finiteness guard on the generated group
    ident = linalg.mat_identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        m = frontier.pop()
        for g in matrices:
            nm = linalg.mat_mul(m, g)
            if nm not in seen:
                if len(seen) > GROUP_CLOSURE_BOUND:
                    raise InvalidInputError("matrices do not generate a finite group (closure bound hit)")
                seen.add(nm)
                frontier.append(nm)

    # columns (g - 1)e_j for generators g
    cols = []
    for g in matrices:
        for j in range(n):
            e = tuple(int(k == j) for k in range(n))
            cols.append(linalg.vec_sub(linalg.mat_mul_vec(g, e), e))
    b = tuple(tuple(col[i] for col in cols) for i in range(n))  # n x (k n)
    d, u, _v = linalg.smith_normal_form(b)
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    rank = sum(1 for x in diag if x != 0)
    torsion = tuple(x for x in diag if x not in (0, 1))
    quotient_rows = tuple(tuple(u[i]) for i in range(rank, n))

    # invariants: kernel of the stacked rows (g - 1)
    stacked = []
    for g in matrices:
        for i in range(n):
            row = tuple(g[i][j] - int(i == j) for j in range(n))
            stacked.append(row)
    kern = linalg.rat_kernel_basis(stacked)
    inv_basis = []
    for v in kern:
        den = 1
        for c in v:
            den = den * c.denominator // _gcd(den, c.denominator)
        inv_basis.append(tuple(int(c * den) for c in v))
    inv_basis = _saturate_integer_basis(inv_basis, n)
    return CoinvariantLattice(
        quotient_rows=quotient_rows, torsion=torsion, invariant_basis=tuple(inv_basis)
    )


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a) if a else abs(b)


def _saturate_integer_basis(vecs, n):
    """Basis of the saturation of the integer row span inside Z^n.

    With u a v = d and u, v unimodular, the row span of a equals the row span
    of d v^{-1}; dropping the elementary divisors d_i leaves rows of v^{-1},
    a basis of the saturated sublattice.
    """
    if not vecs:
        return []
    a = tuple(tuple(v) for v in vecs)
    d, _u, v = linalg.smith_normal_form(a)
    rank = sum(1 for i in range(min(len(a), n)) if d[i][i] != 0)
    vinv = linalg.mat_inverse_int(v)
    return [tuple(vinv[i]) for i in range(rank)]
