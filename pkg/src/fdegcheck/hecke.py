"""Affine Hecke algebras with unequal parameters, crossed products, and graded degenerations.

Elements are finitely supported maps from extended affine Weyl group elements
(t_x * w * gamma) to QLaurent; multiplication peels canonical reduced words and
applies the quadratic relation of the chosen normalization.  The graded side
works in PBW form S(t*) (x) C[W0] over an exact polynomial ring whose extra
variables are the formal parameter symbols.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import InvalidInputError, UnsupportedInputError
from .linalg import Mat, Vec
from .qlaurent import QLaurent
from .rootdata import (
    BasedRootDatum,
    DiagramAutomorphism,
    DiagramAutomorphismGroup,
    WeylElement,
    enumerate_weyl_group,
    identity_automorphism,
)


# ---------------------------------------------------------------------------
# torus points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusPoint:
    """A point of T = Hom(X, C^x) in polar coordinates on the X-basis.

    unitary[j] is the Q/Z exponent of the S^1 part on basis vector j;
    real_split[j] the additive log coordinate of the R_{>0} part.
    """

    unitary: tuple[Fraction, ...]
    real_split: tuple[Fraction, ...]

    @classmethod
    def make(cls, unitary=None, real_split=None, rank=None) -> "TorusPoint":
        if rank is None:
            rank = len(unitary if unitary is not None else real_split)
        u = tuple(Fraction(x) % 1 for x in (unitary or [0] * rank))
        r = tuple(Fraction(x) for x in (real_split or [0] * rank))
        return cls(unitary=u, real_split=r)

    def evaluate(self, x: Vec) -> tuple[Fraction, Fraction]:
        """alpha(t) as (Q/Z coordinate, additive real coordinate)."""
        u = sum((Fraction(c) * uj for c, uj in zip(x, self.unitary)), Fraction(0)) % 1
        r = sum((Fraction(c) * rj for c, rj in zip(x, self.real_split)), Fraction(0))
        return u, r

    def is_unitary(self) -> bool:
        return all(r == 0 for r in self.real_split)

    def value_pm1(self, x: Vec) -> int:
        """alpha(t) as +-1; rejects other values (exact scalar model)."""
        u, r = self.evaluate(x)
        if r != 0:
            raise UnsupportedInputError("point is not unitary on this character")
        if u == 0:
            return 1
        if u == Fraction(1, 2):
            return -1
        raise UnsupportedInputError(f"alpha(u) = e^(2 pi i {u}) is not +-1")


# ---------------------------------------------------------------------------
# extended affine Weyl elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExtendedAffineWeylElement:
    """t_x * w * gamma with x in X, w in W0 (as X/Y matrices), gamma a diagram automorphism."""

    translation: Vec
    matrix: Mat
    comatrix: Mat
    twist: DiagramAutomorphism

    def __eq__(self, other):
        return isinstance(other, ExtendedAffineWeylElement) and (
            self.translation,
            self.matrix,
            self.twist.matrix,
        ) == (other.translation, other.matrix, other.twist.matrix)

    def __hash__(self):
        return hash((self.translation, self.matrix, self.twist.matrix))

    @property
    def is_identity(self) -> bool:
        n = len(self.matrix)
        return (
            all(v == 0 for v in self.translation)
            and self.matrix == linalg.mat_identity(n)
            and self.twist.is_identity
        )

    @property
    def untwisted(self) -> "ExtendedAffineWeylElement":
        return ExtendedAffineWeylElement(
            translation=self.translation,
            matrix=self.matrix,
            comatrix=self.comatrix,
            twist=_IDENTITY_TWISTS[len(self.matrix)],
        )

    def compose(self, other: "ExtendedAffineWeylElement") -> "ExtendedAffineWeylElement":
        """(x, w, g)(x', w', g') = (x + w g x', w (g w' g^-1), g g')."""
        g = self.twist
        gx = g.apply(other.translation)
        new_t = tuple(
            a + b for a, b in zip(self.translation, linalg.mat_mul_vec(self.matrix, gx))
        )
        gw = linalg.mat_mul(linalg.mat_mul(g.matrix, other.matrix), linalg.mat_inverse_int(g.matrix))
        gwc = linalg.mat_mul(
            linalg.mat_mul(g.comatrix, other.comatrix), linalg.mat_inverse_int(g.comatrix)
        )
        return ExtendedAffineWeylElement(
            translation=new_t,
            matrix=linalg.mat_mul(self.matrix, gw),
            comatrix=linalg.mat_mul(self.comatrix, gwc),
            twist=g.compose(other.twist),
        )


_IDENTITY_TWISTS: dict[int, DiagramAutomorphism] = {}


def _identity_twist(n: int) -> DiagramAutomorphism:
    if n not in _IDENTITY_TWISTS:
        _IDENTITY_TWISTS[n] = DiagramAutomorphism(
            label="id",
            matrix=linalg.mat_identity(n),
            comatrix=linalg.mat_identity(n),
            base_perm=tuple(range(n)),
        )
    return _IDENTITY_TWISTS[n]


def translation_element(x: Vec) -> ExtendedAffineWeylElement:
    n = len(x)
    return ExtendedAffineWeylElement(
        translation=tuple(x),
        matrix=linalg.mat_identity(n),
        comatrix=linalg.mat_identity(n),
        twist=_identity_twist(n),
    )


def finite_element(w: WeylElement) -> ExtendedAffineWeylElement:
    n = len(w.matrix)
    return ExtendedAffineWeylElement(
        translation=tuple([0] * n), matrix=w.matrix, comatrix=w.comatrix, twist=_identity_twist(n)
    )


def twist_element(g: DiagramAutomorphism) -> ExtendedAffineWeylElement:
    n = len(g.matrix)
    return ExtendedAffineWeylElement(
        translation=tuple([0] * n),
        matrix=linalg.mat_identity(n),
        comatrix=linalg.mat_identity(n),
        twist=g,
    )


# ---------------------------------------------------------------------------
# parameter functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ParameterFunction:
    """q(s) = q^{lambda(class)} / q(s') = q^{lambda*(class)} per simple-root class.

    Classes are keyed by a representative base position.  lambda* may differ
    from lambda only where <X, alpha^> is even (the t_alpha s_alpha reflection
    is a separate conjugacy class there).
    """

    lam: tuple[tuple[int, int], ...]  # (base position, lambda)
    lam_star: tuple[tuple[int, int], ...]

    @classmethod
    def from_dicts(cls, lam: dict[int, int], lam_star: dict[int, int]) -> "ParameterFunction":
        return cls(
            lam=tuple(sorted(lam.items())), lam_star=tuple(sorted(lam_star.items()))
        )

    @classmethod
    def equal_parameters(cls, datum: BasedRootDatum, value: int = 1) -> "ParameterFunction":
        d = {k: value for k in range(len(datum.base))}
        return cls.from_dicts(d, dict(d))

    def lam_of(self, pos: int) -> int:
        return dict(self.lam)[pos]

    def lam_star_of(self, pos: int) -> int:
        return dict(self.lam_star)[pos]


def simple_classes(datum: BasedRootDatum, gamma: DiagramAutomorphismGroup) -> dict[int, int]:
    """Map base position -> representative base position under W0 x| Gamma conjugacy."""
    weyl = enumerate_weyl_group(datum)
    reps: dict[int, int] = {}
    base_vec = {datum.base_roots[k]: k for k in range(len(datum.base))}
    for k in range(len(datum.base)):
        if k in reps:
            continue
        orbit_vecs = set()
        frontier = [datum.base_roots[k]]
        seen_vecs = {datum.base_roots[k]}
        while frontier:
            v = frontier.pop()
            imgs = [w.apply(v) for w in weyl] + [g.apply(v) for g in gamma.elements]
            imgs += [tuple(-c for c in w.apply(v)) for w in weyl]
            for img in imgs:
                if img not in seen_vecs:
                    seen_vecs.add(img)
                    frontier.append(img)
        for v in seen_vecs:
            if v in base_vec:
                reps[base_vec[v]] = k
    return reps


def coroot_is_even(datum: BasedRootDatum, coroot: Vec) -> bool:
    """True when <X, coroot> is contained in 2Z (the lambda* class exists)."""
    n = datum.rank
    for j in range(n):
        e = tuple(int(k == j) for k in range(n))
        if datum.pair(e, coroot) % 2 != 0:
            return False
    return True


def validate_parameters(
    datum: BasedRootDatum, gamma: DiagramAutomorphismGroup, params: ParameterFunction
) -> None:
    classes = simple_classes(datum, gamma)
    lam, lam_star = dict(params.lam), dict(params.lam_star)
    for k in range(len(datum.base)):
        rep = classes[k]
        if rep not in lam or rep not in lam_star:
            raise InvalidInputError(f"missing parameter for simple class {rep}")
        if lam.get(k, lam[rep]) != lam[rep] or lam_star.get(k, lam_star[rep]) != lam_star[rep]:
            raise InvalidInputError("parameters are not constant on conjugacy classes")
        if lam_star[rep] != lam[rep] and not coroot_is_even(datum, datum.base_coroots[k]):
            raise InvalidInputError(
                f"lambda* differs from lambda on class {rep} but <X, alpha^> is not even"
            )


# ---------------------------------------------------------------------------
# the algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineSimple:
    """One affine simple reflection with its parameter exponent q(s)^{1/2} = v^{exp}."""

    name: str
    element: ExtendedAffineWeylElement
    root: Vec
    coroot: Vec
    half_exponent: int


class HeckeElement:
    """Finitely supported map from extended affine Weyl elements to QLaurent."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for g, c in (terms or {}).items():
            c = c if isinstance(c, QLaurent) else QLaurent({0: c})
            if not c.is_zero():
                clean[g] = clean.get(g, QLaurent.zero()) + c
        self.terms = {g: c for g, c in clean.items() if not c.is_zero()}

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, QLaurent.zero()) + c
        return HeckeElement(out)

    def scale(self, c) -> "HeckeElement":
        return HeckeElement({g: v * c for g, v in self.terms.items()})

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*N[{_short(g)}]" for g, c in self.terms.items())


def _short(g: ExtendedAffineWeylElement) -> str:
    return f"t{g.translation}w{hash(g.matrix) % 1000}" + ("" if g.twist.is_identity else f"*{g.twist.label}")


class HeckeAlgebra:
    """H(R, q) x| Gamma with basis {N_w} and the chosen quadratic normalization."""

    def __init__(
        self,
        datum: BasedRootDatum,
        params: ParameterFunction,
        gamma: DiagramAutomorphismGroup | None = None,
        normalization: str = "standard",
    ):
        if normalization not in ("standard", "as-printed"):
            raise InvalidInputError(f"unknown normalization {normalization!r}")
        self.datum = datum
        self.gamma = gamma or DiagramAutomorphismGroup.generate(
            datum, (identity_automorphism(datum),)
        )
        validate_parameters(datum, self.gamma, params)
        self.params = params
        self.normalization = normalization
        self._classes = simple_classes(datum, self.gamma)
        self.simples = self._build_affine_simples()
        self._pos_indices = datum.positive_root_indices
        self._inv_cache: dict[Mat, Mat] = {}
        self._memo: dict = {}

    # -- structure -----------------------------------------------------------

    def _build_affine_simples(self) -> tuple[AffineSimple, ...]:
        datum = self.datum
        out = []
        for k in range(len(datum.base)):
            i = datum.base[k]
            w = WeylElement(
                word=(k,),
                matrix=datum.reflection_matrix(i),
                comatrix=datum.coreflection_matrix(i),
            )
            rep = self._classes[k]
            out.append(
                AffineSimple(
                    name=f"s{k + 1}",
                    element=finite_element(w),
                    root=datum.roots[i],
                    coroot=datum.coroots[i],
                    half_exponent=self.params.lam_of(rep),
                )
            )
        # one affine reflection t_theta s_theta per irreducible component,
        # where theta^ is the dominant coroot of the component
        for comp_index, comp in enumerate(_components(datum)):
            theta_idx = _highest_coroot_index(datum, comp)
            theta, theta_v = datum.roots[theta_idx], datum.coroots[theta_idx]
            s_theta = ExtendedAffineWeylElement(
                translation=tuple([0] * datum.rank),
                matrix=_reflection_matrix(datum, theta_idx),
                comatrix=_coreflection_matrix(datum, theta_idx),
                twist=_identity_twist(datum.rank),
            )
            elt = translation_element(theta).compose(s_theta)
            base_pos = {datum.base[k]: k for k in range(len(datum.base))}
            # q(s_0): shares the class of s_theta unless <X, theta^> is even
            theta_class = None
            for k in range(len(datum.base)):
                if _conjugate_roots(datum, self.gamma, datum.base_roots[k], theta):
                    theta_class = self._classes[k]
                    break
            if theta_class is None:
                raise InvalidInputError("highest root is not conjugate to any simple root")
            if coroot_is_even(datum, theta_v):
                half = self.params.lam_star_of(theta_class)
            else:
                half = self.params.lam_of(theta_class)
            out.append(
                AffineSimple(
                    name=f"s0.{comp_index}",
                    element=elt,
                    root=theta,
                    coroot=theta_v,
                    half_exponent=half,
                )
            )
        return tuple(out)

    def identity_element(self) -> ExtendedAffineWeylElement:
        n = self.datum.rank
        return ExtendedAffineWeylElement(
            translation=tuple([0] * n),
            matrix=linalg.mat_identity(n),
            comatrix=linalg.mat_identity(n),
            twist=_identity_twist(n),
        )

    def basis(self, g: ExtendedAffineWeylElement) -> HeckeElement:
        return HeckeElement({g: QLaurent.one()})

    def from_word(self, letters, twist: DiagramAutomorphism | None = None) -> ExtendedAffineWeylElement:
        out = self.identity_element()
        for j in letters:
            out = out.compose(self.simples[j].element)
        if twist is not None:
            out = out.compose(twist_element(twist))
        return out

    # -- length/descent ------------------------------------------------------

    def _inv(self, m: Mat) -> Mat:
        if m not in self._inv_cache:
            self._inv_cache[m] = linalg.mat_inverse_int(m)
        return self._inv_cache[m]

    def length(self, g: ExtendedAffineWeylElement) -> int:
        """l(t_x w) by the standard affine formula; twists have length 0."""
        datum = self.datum
        x = g.translation
        winv = self._inv(g.matrix)
        total = 0
        for i in self._pos_indices:
            a = datum.roots[i]
            av = datum.coroots[i]
            pre = linalg.mat_mul_vec(winv, a)
            k = datum.pair(x, av)
            if datum.is_positive(pre):
                total += abs(k)
            else:
                total += abs(k - 1)
        return total

    def left_descent(self, g: ExtendedAffineWeylElement) -> int | None:
        lg = self.length(g)
        for j, s in enumerate(self.simples):
            if self.length(s.element.compose(g)) < lg:
                return j
        return None

    def right_descent(self, g: ExtendedAffineWeylElement) -> int | None:
        lg = self.length(g)
        for j, s in enumerate(self.simples):
            if self.length(g.compose(s.element)) < lg:
                return j
        return None

    # -- multiplication ------------------------------------------------------

    def q_half(self, j: int) -> QLaurent:
        return QLaurent.monomial(self.simples[j].half_exponent)

    def _mult_simple_left(self, j: int, v: ExtendedAffineWeylElement) -> dict:
        s = self.simples[j]
        sv = s.element.compose(v)
        if self.length(sv) > self.length(v):
            return {sv: QLaurent.one()}
        if self.normalization == "standard":
            coeff = self.q_half(j) - self.q_half(j).monomial_inverse()
            return {sv: QLaurent.one(), v: coeff}
        # as-printed: N_s^2 = q(s); descent rule N_s N_v = q(s) N_{sv}
        return {sv: self.q_half(j) * self.q_half(j)}

    def _mult_basis(self, u: ExtendedAffineWeylElement, v: ExtendedAffineWeylElement) -> dict:
        key = (u, v)
        if key in self._memo:
            return self._memo[key]
        if u.is_identity:
            out = {v: QLaurent.one()}
        elif not u.twist.is_identity:
            # N_u = N_{u0} N_gamma and N_gamma N_v = N_{gamma v}
            u0 = u.untwisted
            gv = twist_element(u.twist).compose(v)
            out = self._mult_basis(u0, gv)
        elif self.length(u) == 0:
            out = {u.compose(v): QLaurent.one()}
        else:
            j = self.right_descent(u)
            if j is None:
                raise InvalidInputError("length-positive element with no right descent")
            s = self.simples[j]
            u1 = u.compose(s.element)  # l(u1) = l(u) - 1 and u = u1 * s
            inner = self._mult_simple_left(j, v)
            out: dict = {}
            for w, c in inner.items():
                for w2, c2 in self._mult_basis(u1, w).items():
                    cur = out.get(w2, QLaurent.zero()) + c * c2
                    out[w2] = cur
            out = {w: c for w, c in out.items() if not c.is_zero()}
        self._memo[key] = out
        return out

    def multiply(self, a: HeckeElement, b: HeckeElement) -> HeckeElement:
        out: dict = {}
        for u, cu in a.terms.items():
            for v, cv in b.terms.items():
                for w, c in self._mult_basis(u, v).items():
                    out[w] = out.get(w, QLaurent.zero()) + cu * cv * c
        return HeckeElement(out)


def _components(datum: BasedRootDatum) -> list[list[int]]:
    """Connected components of the Dynkin diagram, as lists of base positions."""
    k = len(datum.base)
    adj = {i: set() for i in range(k)}
    for i in range(k):
        for j in range(k):
            if i != j and datum.pair(datum.base_roots[i], datum.base_coroots[j]) != 0:
                adj[i].add(j)
    seen, comps = set(), []
    for i in range(k):
        if i in seen:
            continue
        comp, frontier = {i}, [i]
        while frontier:
            x = frontier.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    frontier.append(y)
        seen |= comp
        comps.append(sorted(comp))
    return comps


def _in_component(datum: BasedRootDatum, root: Vec, comp: list[int]) -> bool:
    coeffs = datum.expansion(root)
    return all(c == 0 for j, c in enumerate(coeffs) if j not in comp)


def _highest_coroot_index(datum: BasedRootDatum, comp: list[int]) -> int:
    """Index of the root whose coroot is dominant within the component."""
    best = None
    for i, (a, av) in enumerate(zip(datum.roots, datum.coroots)):
        if not datum.is_positive(a) or not _in_component(datum, a, comp):
            continue
        if all(datum.pair(datum.base_roots[k], av) >= 0 for k in range(len(datum.base))):
            if best is not None:
                # dominance order picks the unique maximum; compare coroot heights
                hb = sum(abs(c) for c in datum.expansion(datum.roots[best]))
                ha = sum(abs(c) for c in datum.expansion(a))
                best = i if ha > hb else best
            else:
                best = i
    if best is None:
        raise InvalidInputError("component has no dominant coroot")
    return best


def _reflection_matrix(datum: BasedRootDatum, i: int) -> Mat:
    return datum.reflection_matrix(i)


def _coreflection_matrix(datum: BasedRootDatum, i: int) -> Mat:
    return datum.coreflection_matrix(i)


def _conjugate_roots(
    datum: BasedRootDatum, gamma: DiagramAutomorphismGroup, a: Vec, b: Vec
) -> bool:
    seen = {a}
    frontier = [a]
    weyl = enumerate_weyl_group(datum)
    while frontier:
        v = frontier.pop()
        for w in weyl:
            img = w.apply(v)
            if img not in seen:
                seen.add(img)
                frontier.append(img)
        for g in gamma.elements:
            img = g.apply(v)
            if img not in seen:
                seen.add(img)
                frontier.append(img)
        neg = tuple(-c for c in v)
        if neg not in seen:
            seen.add(neg)
            frontier.append(neg)
    return b in seen


# ---------------------------------------------------------------------------
# spec-level operation wrappers
# ---------------------------------------------------------------------------


def hecke_multiply(
    a: HeckeElement,
    b: HeckeElement,
    algebra: HeckeAlgebra,
) -> HeckeElement:
    """Product in H(R, q); bilinear, associative, with the algebra's normalization."""
    return algebra.multiply(a, b)


def crossed_product_multiply(
    a: HeckeElement, b: HeckeElement, algebra: HeckeAlgebra
) -> HeckeElement:
    """Product in H x| Gamma; parameters must be Gamma-invariant (validated on the algebra)."""
    return algebra.multiply(a, b)


# ---------------------------------------------------------------------------
# multivariate polynomials over Q (coordinates + formal symbols)
# ---------------------------------------------------------------------------


class MPoly:
    """Sparse exact polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean: dict[tuple[int, ...], Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
        self.terms = {m: c for m, c in clean.items() if c != 0}

    @classmethod
    def constant(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {tuple([0] * nvars): Fraction(c)})

    @classmethod
    def variable(cls, nvars: int, j: int) -> "MPoly":
        mono = [0] * nvars
        mono[j] = 1
        return cls(nvars, {tuple(mono): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, MPoly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return MPoly(self.nvars, out)

    def __neg__(self):
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            vars_part = "*".join(f"x{j}^{e}" for j, e in enumerate(m) if e)
            parts.append(f"{c}" + (f"*{vars_part}" if vars_part else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# graded Hecke algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedParameter:
    """k(alpha) per simple class, as exact polynomials in the symbol variables."""

    values: tuple[tuple[int, MPoly], ...]  # (class representative base position, value)
    symbols: tuple[str, ...]

    def of(self, rep: int) -> MPoly:
        for k, v in self.values:
            if k == rep:
                return v
        raise InvalidInputError(f"no graded parameter for class {rep}")


class GradedHeckeElement:
    """PBW form: map from W0 elements (matrices) to polynomials (coords + symbols)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, p in (terms or {}).items():
            if not p.is_zero():
                if w in clean:
                    clean[w] = clean[w] + p
                else:
                    clean[w] = p
        self.terms = {w: p for w, p in clean.items() if not p.is_zero()}

    def __eq__(self, other):
        return isinstance(other, GradedHeckeElement) and self.terms == other.terms

    def __add__(self, other):
        out = dict(self.terms)
        for w, p in other.terms.items():
            out[w] = out.get(w) + p if w in out else p
        return GradedHeckeElement(out)

    def max_poly_degree(self) -> int:
        return max((p.degree() for p in self.terms.values()), default=0)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({p})(x)w[{hash(w) % 1000}]" for w, p in self.terms.items())


class GradedHeckeAlgebra:
    """S(t*) (x) C[W0] with the cross relation x s - s s(x) = k(alpha) <x, alpha^>."""

    def __init__(self, datum: BasedRootDatum, k: GradedParameter, gamma=None):
        self.datum = datum
        self.gamma = gamma or DiagramAutomorphismGroup.generate(
            datum, (identity_automorphism(datum),)
        )
        self.k = k
        self.n = datum.rank
        self.nsym = len(k.symbols)
        self.nvars = self.n + self.nsym
        self._classes = simple_classes(datum, self.gamma)
        self.weyl = enumerate_weyl_group(datum)

    # polynomial helpers ------------------------------------------------------

    def coord(self, j: int) -> MPoly:
        return MPoly.variable(self.nvars, j)

    def symbol(self, name: str) -> MPoly:
        return MPoly.variable(self.nvars, self.n + self.k.symbols.index(name))

    def constant(self, c) -> MPoly:
        return MPoly.constant(self.nvars, c)

    def apply_weyl_to_poly(self, w_matrix: Mat, p: MPoly) -> MPoly:
        """Linear substitution on the coordinate variables; symbols are fixed."""
        images = []
        for j in range(self.n):
            e = tuple(int(i == j) for i in range(self.n))
            img = linalg.mat_mul_vec(w_matrix, e)
            poly = MPoly(self.nvars)
            for i, c in enumerate(img):
                if c:
                    poly = poly + MPoly.variable(self.nvars, i) * Fraction(c)
            images.append(poly)
        out = MPoly(self.nvars)
        for mono, c in p.terms.items():
            term = MPoly.constant(self.nvars, c)
            for j in range(self.n):
                for _ in range(mono[j]):
                    term = term * images[j]
            for j in range(self.nsym):
                if mono[self.n + j]:
                    shift = [0] * self.nvars
                    shift[self.n + j] = mono[self.n + j]
                    term = term * MPoly(self.nvars, {tuple(shift): Fraction(1)})
            out = out + term
        return out

    def demazure(self, base_pos: int, p: MPoly) -> MPoly:
        """(p - s_alpha(p)) / alpha via the twisted Leibniz recursion (division-free)."""
        datum = self.datum
        i = datum.base[base_pos]
        s_mat = datum.reflection_matrix(i)
        av = datum.coroots[i]

        def rec(mono: tuple[int, ...], coeff: Fraction) -> MPoly:
            j = next((jj for jj in range(self.n) if mono[jj] > 0), None)
            if j is None:
                return MPoly(self.nvars)  # symbols are W-invariant
            rest = list(mono)
            rest[j] -= 1
            rest_t = tuple(rest)
            e = tuple(int(k == j) for k in range(self.n))
            pairing = Fraction(datum.pair(e, av))
            # Delta(x_j * m') = <x_j, a^> m' + s(x_j) Delta(m')
            first = MPoly(self.nvars, {rest_t: coeff * pairing})
            delta_rest = rec(rest_t, coeff)
            sxj = MPoly(self.nvars)
            img = linalg.mat_mul_vec(s_mat, e)
            for idx, c in enumerate(img):
                if c:
                    sxj = sxj + MPoly.variable(self.nvars, idx) * Fraction(c)
            return first + sxj * delta_rest

        out = MPoly(self.nvars)
        for mono, c in p.terms.items():
            out = out + rec(mono, c)
        return out

    # algebra elements ---------------------------------------------------------

    def identity(self) -> GradedHeckeElement:
        return GradedHeckeElement({self._wkey(linalg.mat_identity(self.n)): self.constant(1)})

    def _wkey(self, matrix: Mat):
        return matrix

    def group_element(self, w: WeylElement) -> GradedHeckeElement:
        return GradedHeckeElement({w.matrix: self.constant(1)})

    def polynomial_element(self, p: MPoly) -> GradedHeckeElement:
        return GradedHeckeElement({linalg.mat_identity(self.n): p})

    def simple_generator(self, base_pos: int) -> GradedHeckeElement:
        i = self.datum.base[base_pos]
        return GradedHeckeElement({self.datum.reflection_matrix(i): self.constant(1)})

    def coordinate_generator(self, j: int) -> GradedHeckeElement:
        return self.polynomial_element(self.coord(j))

    def _word_for(self, matrix: Mat) -> tuple[int, ...]:
        for w in self.weyl:
            if w.matrix == matrix:
                return w.word
        raise InvalidInputError("matrix is not in W0")

    def _mult_simple_left(self, base_pos: int, elem: GradedHeckeElement) -> GradedHeckeElement:
        """(1 (x) s) * elem via s p = s(p) s + k(alpha) Delta_alpha(p)."""
        datum = self.datum
        i = datum.base[base_pos]
        s_mat = datum.reflection_matrix(i)
        rep = self._classes[base_pos]
        k_val = self.k.of(rep)
        out = GradedHeckeElement()
        for w_mat, p in elem.terms.items():
            sp = self.apply_weyl_to_poly(s_mat, p)
            sw = linalg.mat_mul(s_mat, w_mat)
            out = out + GradedHeckeElement({sw: sp})
            delta = self.demazure(base_pos, p)
            out = out + GradedHeckeElement({w_mat: k_val * delta})
        return out

    def multiply(
        self, a: GradedHeckeElement, b: GradedHeckeElement, word_choice: str = "canonical"
    ) -> GradedHeckeElement:
        """PBW-normal-ordered product; word_choice picks the reduced word used to peel."""
        out = GradedHeckeElement()
        for w_mat, p in a.terms.items():
            word = self._word_for(w_mat)
            if word_choice == "reversed-braid" and len(word) >= 1:
                word = self._alternative_word(w_mat) or word
            cur = b
            for letter in reversed(word):
                cur = self._mult_simple_left(letter, cur)
            scaled = GradedHeckeElement({w2: p * q for w2, q in cur.terms.items()})
            out = out + scaled
        return out

    def _alternative_word(self, matrix: Mat):
        """A second reduced word (if any) for PBW-uniqueness checks."""
        target = matrix
        length = len(self._word_for(matrix))
        found = []
        k = len(self.datum.base)

        def rec(cur_mat, word):
            if len(word) == length:
                if cur_mat == target:
                    found.append(tuple(word))
                return
            if len(found) >= 2:
                return
            for j in range(k):
                i = self.datum.base[j]
                rec(linalg.mat_mul(cur_mat, self.datum.reflection_matrix(i)), word + [j])

        rec(linalg.mat_identity(self.n), [])
        canonical = self._word_for(matrix)
        for w in found:
            if w != canonical:
                return w
        return None


def graded_multiply(
    a: GradedHeckeElement, b: GradedHeckeElement, algebra: GradedHeckeAlgebra
) -> GradedHeckeElement:
    """Spec-level wrapper for the PBW product."""
    return algebra.multiply(a, b)


def degenerate_parameters(
    datum: BasedRootDatum,
    gamma: DiagramAutomorphismGroup,
    params: ParameterFunction,
    u: TorusPoint,
) -> GradedParameter:
    """k_u(alpha) = (log q(s_alpha) + alpha(u) log q(t_alpha s_alpha)) / 2, in log q units."""
    classes = simple_classes(datum, gamma)
    nsym = 1  # the single symbol "logq"
    values: dict[int, MPoly] = {}
    for k in range(len(datum.base)):
        rep = classes[k]
        sign = u.value_pm1(datum.base_roots[k])
        coeff = Fraction(params.lam_of(rep) + sign * params.lam_star_of(rep), 2)
        val = MPoly(datum.rank + nsym, {tuple([0] * datum.rank + [1]): coeff})
        if rep in values and values[rep] != val:
            raise InvalidInputError("alpha(u) is not constant on a parameter class")
        values[rep] = val
    return GradedParameter(values=tuple(sorted(values.items())), symbols=("logq",))


def free_graded_parameters(
    datum: BasedRootDatum, gamma: DiagramAutomorphismGroup
) -> GradedParameter:
    """One free symbol k_C per simple class (most general parameter)."""
    classes = simple_classes(datum, gamma)
    reps = sorted(set(classes.values()))
    symbols = tuple(f"k{r}" for r in reps)
    nvars = datum.rank + len(symbols)
    values = []
    for idx, r in enumerate(reps):
        mono = [0] * nvars
        mono[datum.rank + idx] = 1
        values.append((r, MPoly(nvars, {tuple(mono): Fraction(1)})))
    return GradedParameter(values=tuple(values), symbols=symbols)


# ---------------------------------------------------------------------------
# relation verification harness
# ---------------------------------------------------------------------------


def verify_relations(
    datum: BasedRootDatum,
    params: ParameterFunction,
    gamma: DiagramAutomorphismGroup | None = None,
    sample_budget: int = 500,
    seed: int = 0,
    normalization: str = "standard",
    instance: str = "",
    mutation=None,
):
    """Braid/quadratic/associativity checks plus graded PBW and centrality.

    ``mutation``, when given, post-processes every product (mutation test hook
    for the harness itself).  Returns a list of VerificationReport.
    """
    from .report import make_report

    if datum.rank > 3:
        raise InvalidInputError("exhaustive generator checks are bounded at rank 3")
    alg = HeckeAlgebra(datum, params, gamma=gamma, normalization=normalization)
    name = instance or "hecke"
    rng = random.Random(seed)
    reports = []

    def mult(a, b):
        out = alg.multiply(a, b)
        return mutation(out) if mutation else out

    # quadratic relations
    ok, witness = True, None
    for j, s in enumerate(alg.simples):
        lhs = mult(alg.basis(s.element), alg.basis(s.element))
        qh = alg.q_half(j)
        if normalization == "standard":
            rhs = HeckeElement(
                {alg.identity_element(): QLaurent.one(), s.element: qh - qh.monomial_inverse()}
            )
        else:
            rhs = HeckeElement({alg.identity_element(): qh * qh})
        if lhs != rhs:
            ok, witness = False, s.name
            break
    reports.append(
        make_report(name, f"quadratic[{normalization}]", "N_s^2", "relation expansion", ok, witness)
    )

    # braid relations on pairs of affine simples with finite product order
    ok, witness = True, None
    for a in range(len(alg.simples)):
        for b in range(a + 1, len(alg.simples)):
            sa, sb = alg.simples[a], alg.simples[b]
            prod = sa.element.compose(sb.element)
            m, cur = None, prod
            probe = prod
            for order in range(1, 13):
                if probe.is_identity:
                    m = order
                    break
                probe = probe.compose(prod)
            if m is None:
                continue  # infinite braid (affine A1); nothing to check
            word_a = [a, b] * m
            word_b = [b, a] * m
            lhs = alg.basis(alg.identity_element())
            rhs = alg.basis(alg.identity_element())
            for j in word_a[:m]:
                lhs = mult(lhs, alg.basis(alg.simples[j].element))
            for j in word_b[:m]:
                rhs = mult(rhs, alg.basis(alg.simples[j].element))
            if lhs != rhs or len(lhs) != 1:
                ok, witness = False, f"({sa.name},{sb.name})"
                break
        if not ok:
            break
    reports.append(make_report(name, "braid", "alternating product", "alternating product", ok, witness))

    # associativity on sampled triples of words of length <= 4
    twists = [g for g in alg.gamma.elements if not g.is_identity]
    ok, witness = True, None
    for _ in range(sample_budget):
        elems = []
        for _ in range(3):
            word = [rng.randrange(len(alg.simples)) for _ in range(rng.randint(0, 4))]
            tw = rng.choice(twists) if twists and rng.random() < 0.3 else None
            elems.append(alg.from_word(word, twist=tw))
        x, y, z = (alg.basis(e) for e in elems)
        if mult(mult(x, y), z) != mult(x, mult(y, z)):
            ok, witness = False, f"{elems}"
            break
    reports.append(make_report(name, "associativity", "(xy)z", "x(yz)", ok, witness))

    # crossed product action: gamma N_s gamma^{-1} = N_{gamma(s)}
    if twists:
        ok, witness = True, None
        for g in twists:
            ginv = next(h for h in alg.gamma.elements if g.compose(h).is_identity)
            for s in alg.simples:
                lhs = mult(
                    mult(alg.basis(twist_element(g)), alg.basis(s.element)),
                    alg.basis(twist_element(ginv)),
                )
                conj = twist_element(g).compose(s.element).compose(twist_element(ginv))
                if lhs != alg.basis(conj):
                    ok, witness = False, f"({g.label},{s.name})"
                    break
            if not ok:
                break
        reports.append(make_report(name, "crossed-product", "g N_s g^-1", "N_{g(s)}", ok, witness))

    # graded sector: PBW uniqueness and centrality
    gam = gamma or DiagramAutomorphismGroup.generate(datum, (identity_automorphism(datum),))
    k = free_graded_parameters(datum, gam)
    G = GradedHeckeAlgebra(datum, k, gam)
    gens = [G.simple_generator(j) for j in range(len(datum.base))] + [
        G.coordinate_generator(j) for j in range(datum.rank)
    ]
    ok, witness = True, None
    budget = min(sample_budget, 200)
    for _ in range(budget):
        seq = [rng.choice(gens) for _ in range(4)]
        left = G.multiply(G.multiply(G.multiply(seq[0], seq[1]), seq[2]), seq[3])
        right = G.multiply(seq[0], G.multiply(seq[1], G.multiply(seq[2], seq[3])))
        if left != right:
            ok, witness = False, "4-generator product"
            break
    reports.append(make_report(name, "graded-pbw", "left-assoc normal form", "right-assoc normal form", ok, witness))

    weyl = enumerate_weyl_group(datum)
    ok, witness = True, None
    for deg in (1, 2, 3):
        for j in range(datum.rank):
            mono = G.coord(j)
            p = G.constant(0)
            base = G.constant(1)
            for _ in range(deg):
                base = base * mono
            for w in weyl:
                p = p + G.apply_weyl_to_poly(w.matrix, base)
            elem = G.polynomial_element(p)
            for b in range(len(datum.base)):
                s = G.simple_generator(b)
                if G.multiply(elem, s) != G.multiply(s, elem):
                    ok, witness = False, f"deg {deg} coord {j}"
                    break
            if not ok:
                break
        if not ok:
            break
    reports.append(make_report(name, "graded-centrality", "z * s", "s * z", ok, witness))
    return reports
