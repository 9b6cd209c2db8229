"""Ramification filtrations, Artin conductors, differents and |epsilon| monomials.

Conductors are exact rationals computed from lower-numbering filtration data;
|epsilon(0, tau, psi)| = q^{a(W)/2} is carried as a QLaurent monomial in
v = q^{1/2}.  A small cyclic-extension model computes induced-representation
conductors directly (degree-0 inductivity checks).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import linalg
from .errors import InvalidInputError
from .qlaurent import QLaurent
from .rootdata import (
    FieldExtensionData,
    GaloisRootData,
    RelativeRoot,
    relative_root_system,
)
from .conductors import ConductorAssignment


# ---------------------------------------------------------------------------
# inertial representations and conductors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InertialRep:
    """dim W and dim W^{D_j} along a ramification filtration."""

    dimension: int
    fixed_dims: tuple[int, ...]

    def __post_init__(self):
        if self.dimension <= 0:
            raise InvalidInputError("dimension must be positive")
        last = None
        for d in self.fixed_dims:
            if not 0 <= d <= self.dimension:
                raise InvalidInputError("fixed dims must lie in [0, dim]")
            if last is not None and d < last:
                raise InvalidInputError("fixed dims must be non-decreasing")
            last = d
        if self.fixed_dims and self.fixed_dims[-1] != self.dimension:
            raise InvalidInputError("the last filtration group is trivial; it must fix everything")


@dataclass(frozen=True)
class ArtinConductor:
    value: Fraction

    def __post_init__(self):
        if self.value < 0:
            raise InvalidInputError("Artin conductors are non-negative")


@dataclass(frozen=True)
class EpsAbs:
    """|epsilon| as a single positive v-monomial (v = q^{1/2})."""

    monomial: QLaurent

    def __post_init__(self):
        e, c = self.monomial.monomial_parts()
        if c <= 0:
            raise InvalidInputError("|epsilon| must be a positive monomial")

    def __mul__(self, other: "EpsAbs") -> "EpsAbs":
        return EpsAbs(self.monomial * other.monomial)

    @property
    def v_exponent(self) -> int:
        return self.monomial.monomial_parts()[0]


def artin_conductor(rep: InertialRep, ext: FieldExtensionData) -> ArtinConductor:
    """a(W) = sum_j dim(W / W^{D_j}) d_j / d_0."""
    if len(rep.fixed_dims) != len(ext.filtration):
        raise InvalidInputError("fixed_dims and filtration lengths differ")
    d0 = ext.filtration[0]
    total = Fraction(0)
    for fixed, dj in zip(rep.fixed_dims, ext.filtration):
        total += Fraction((rep.dimension - fixed) * dj, d0)
    return ArtinConductor(total)


def herbrand_phi(ext: FieldExtensionData, r: int) -> Fraction:
    """phi_{L/K}(r): piecewise linear with slopes d_j/d_0 on unit intervals."""
    if r < 0 or r > len(ext.filtration) - 1:
        raise InvalidInputError(f"depth {r} outside the filtration range")
    d0 = ext.filtration[0]
    return sum((Fraction(ext.filtration[j], d0) for j in range(1, r + 1)), Fraction(0))


def herbrand_conductor(r: int, ext: FieldExtensionData) -> ArtinConductor:
    """a(tau) = 1 + phi(r) for a character of depth r (smallest r with tau(G_r) != 1)."""
    return ArtinConductor(1 + herbrand_phi(ext, r))


def character_rep(r: int, ext: FieldExtensionData) -> InertialRep:
    """The InertialRep of a depth-r character: fixed nowhere up to level r, then fixed."""
    fixed = tuple(0 if j <= r else 1 for j in range(len(ext.filtration)))
    return InertialRep(dimension=1, fixed_dims=fixed)


def different_valuation(ext: FieldExtensionData) -> int:
    """val(D) = sum_j (d_j - 1)."""
    return sum(d - 1 for d in ext.filtration)


def conductor_induced_trivial(ext: FieldExtensionData) -> ArtinConductor:
    """a(Ind_{F_alpha/F} triv) = f * val(D)."""
    return ArtinConductor(Fraction(ext.f * different_valuation(ext)))


def coset_permutation_rep(ext: FieldExtensionData) -> InertialRep:
    """Ind triv as a permutation InertialRep: dim ef, fixed dims ef/d_j."""
    dim = ext.e * ext.f
    fixed = tuple(dim // dj for dj in ext.filtration)
    return InertialRep(dimension=dim, fixed_dims=fixed)


# ---------------------------------------------------------------------------
# epsilon factors of adjoint root spaces
# ---------------------------------------------------------------------------


def eps_abs_root_space(alpha: RelativeRoot, ext: FieldExtensionData, c_alpha: int) -> EpsAbs:
    """|epsilon| of the +-alpha root-space pair.

    q^{f(1+c) + f val(D)} for c != 0.  For c = 0 the character part is trivial
    but inertia still permutes the summands of a ramified orbit, leaving the
    induced-trivial factor q^{f val(D)} (equal to 1 on unramified orbits).
    """
    if c_alpha < 0:
        raise InvalidInputError("conductors are non-negative")
    vd = different_valuation(ext)
    if c_alpha == 0:
        return EpsAbs(QLaurent.q_power(ext.f * vd))
    return EpsAbs(QLaurent.q_power(ext.f * (1 + c_alpha) + ext.f * vd))


def torus_artin_conductor(g: GaloisRootData) -> Fraction:
    """a(t^vee): inertia acts on Y (x) Q through the torus filtration levels."""
    filt = g.torus_filtration.filtration
    d0 = filt[0]
    mat = g.inertia.comatrix
    n = len(mat)
    total = Fraction(0)
    for dj in filt:
        power = linalg.mat_identity(n)
        for _ in range(d0 // dj):
            power = linalg.mat_mul(power, mat)
        rows = [tuple(power[i][j] - int(i == j) for j in range(n)) for i in range(n)]
        fixed = len(linalg.rat_kernel_basis(rows)) if any(any(r) for r in rows) else n
        total += Fraction((n - fixed) * dj, d0)
    return total


def eps_abs_adjoint(g: GaloisRootData, c: ConductorAssignment) -> EpsAbs:
    """q^{a(t^vee)/2} times the product of root-space factors over positive classes."""
    rel = relative_root_system(g)
    c.validate_for(rel)
    out = EpsAbs(QLaurent.q_power(Fraction(torus_artin_conductor(g), 2)))
    for r in rel:
        if r.sign < 0:
            continue
        ext = g.orbit_field(r.label)
        c_val = 0 if r.divisible else c.of(r)
        out = out * eps_abs_root_space(r, ext, c_val)
    return out


def adjoint_conductor_display(g: GaloisRootData) -> Fraction:
    """a(g^vee) by the volume-normalization display: a(t^vee) + sum_{alpha} f val(D)."""
    rel = relative_root_system(g)
    total = torus_artin_conductor(g)
    for r in rel:
        ext = g.orbit_field(r.class_label)
        total += ext.f * different_valuation(ext)
    return total


def adjoint_conductor_rep_model(g: GaloisRootData) -> Fraction:
    """a(g^vee) computed representation-theoretically (torus block + per-orbit permutation reps)."""
    rel = relative_root_system(g)
    total = torus_artin_conductor(g)
    for r in rel:
        ext = g.orbit_field(r.class_label)
        total += artin_conductor(coset_permutation_rep(ext), ext).value
    return total


# ---------------------------------------------------------------------------
# inertia-fixed subspace of the adjoint with its Frobenius descriptor
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdjointFixedSpace:
    dimension: int
    torus_dim: int
    lines: tuple[str, ...]  # one key per counted fixed root line
    frobenius_line_perm: tuple[int, ...]  # image index per line
    frobenius_torus_matrix: tuple[tuple[Fraction, ...], ...]

    def frobenius_cycle_type(self) -> tuple[int, ...]:
        seen = set()
        cycles = []
        for i in range(len(self.lines)):
            if i in seen:
                continue
            j, n = i, 0
            while j not in seen:
                seen.add(j)
                j = self.frobenius_line_perm[j]
                n += 1
            cycles.append(n)
        return tuple(sorted(cycles))


def adjoint_fixed_space(g: GaloisRootData, c: ConductorAssignment) -> AdjointFixedSpace:
    """dim (g^vee)^{inertia} and the Frobenius action on the counted fixed lines.

    Indivisible classes contribute f lines per sign when c = 0; divisible
    classes only when the inertia action is trivial (with ramified inertia the
    scalar on a Galois-fixed line is pinning-dependent, so those lines are not
    counted).
    """
    rel = relative_root_system(g)
    c.validate_for(rel)
    datum = g.absolute
    n = datum.rank
    inertia_trivial = g.inertia.is_identity

    # torus block: inertia-fixed subspace of Y (x) Q with the Frobenius action
    rows = [
        tuple(g.inertia.comatrix[i][j] - int(i == j) for j in range(n)) for i in range(n)
    ]
    basis = linalg.rat_kernel_basis(rows) if any(any(r) for r in rows) else tuple(
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    )
    frob_cols = []
    basis_rows = [tuple(b) for b in basis]
    for b in basis:
        img = linalg.mat_mul_vec(g.frobenius.comatrix, b)
        coords = linalg.rat_solve([tuple(r) for r in zip(*basis_rows)], list(img))
        if coords is None:
            raise InvalidInputError("Frobenius does not preserve the inertia-fixed torus block")
        frob_cols.append(coords)
    frob_torus = tuple(tuple(frob_cols[j][i] for j in range(len(basis))) for i in range(len(basis)))

    # fixed root lines: one per inertia orbit inside each counted class
    root_pos = {r: k for k, r in enumerate(datum.roots)}
    lines: list[tuple[str, int]] = []  # (class label, inertia-orbit representative index)
    for r in rel:
        if r.divisible and not inertia_trivial:
            continue
        if not r.divisible and c.of(r) != 0:
            continue
        orbit = sorted(r.orbit)
        seen: set[int] = set()
        for idx in orbit:
            if idx in seen:
                continue
            rep = idx
            j = idx
            while True:
                seen.add(j)
                j = root_pos[g.inertia.apply(datum.roots[j])]
                if j in seen:
                    break
            lines.append((r.label, rep))
    line_index = {key: i for i, key in enumerate(lines)}

    def inertia_orbit_rep(idx: int) -> int:
        orb = {idx}
        j = idx
        while True:
            j = root_pos[g.inertia.apply(datum.roots[j])]
            if j in orb:
                break
            orb.add(j)
        return min(orb)

    perm = []
    for label, rep in lines:
        img = root_pos[g.frobenius.apply(datum.roots[rep])]
        img_rep = inertia_orbit_rep(img)
        img_label = next(r.label for r in rel if img in r.orbit)
        perm.append(line_index[(img_label, img_rep)])
    return AdjointFixedSpace(
        dimension=len(basis) + len(lines),
        torus_dim=len(basis),
        lines=tuple(f"{lab}#{rep}" for lab, rep in lines),
        frobenius_line_perm=tuple(perm),
        frobenius_torus_matrix=frob_torus,
    )


# ---------------------------------------------------------------------------
# cyclic extension models: direct induced conductors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicExtensionModel:
    """E/F with Gal(E/F) = Z/n and lower filtration subgroup orders.

    Subgroups of Z/n are indexed by their order; the order-d subgroup is <n/d>.
    Lower numbering restricts to subgroups with the same index (H_j = H n G_j).
    """

    n: int
    filtration_orders: tuple[int, ...]  # |G_j|, ending at 1

    def __post_init__(self):
        if self.filtration_orders[-1] != 1:
            raise InvalidInputError("filtration must end at the trivial group")
        for d in self.filtration_orders:
            if self.n % d != 0:
                raise InvalidInputError("filtration orders must divide n")
        for a, b in zip(self.filtration_orders, self.filtration_orders[1:]):
            if a % b != 0:
                raise InvalidInputError("filtration orders must be a divisibility chain")

    @property
    def e(self) -> int:
        return self.filtration_orders[0]

    @property
    def f(self) -> int:
        return self.n // self.e

    def as_extension(self) -> FieldExtensionData:
        return FieldExtensionData(e=self.e, f=self.f, filtration=self.filtration_orders)

    # --- induced representation Ind_{H'}^{G}(tau), H' of order h, tau = tau_k

    def induced_fixed_dim(self, h: int, k: int, s: int) -> int:
        """dim of the S-fixed subspace (S the order-s subgroup) of Ind tau_k.

        Abelian Mackey: [G : S H'] copies, each fixed iff tau_k is trivial on
        S n H' (of order gcd(s, h)), i.e. gcd(s, h) | k.
        """
        if self.n % h or self.n % s:
            raise InvalidInputError("subgroup orders must divide n")
        g = gcd(s, h)
        if k % g != 0:
            return 0
        return self.n // (s * h // g)

    def induced_conductor(self, h: int, k: int) -> Fraction:
        """a_F(Ind_{H'}^{G} tau_k) computed directly from the filtration action."""
        dim = self.n // h
        d0 = self.filtration_orders[0]
        total = Fraction(0)
        for dj in self.filtration_orders:
            total += Fraction((dim - self.induced_fixed_dim(h, k, dj)) * dj, d0)
        return total

    def sub_extension(self, h: int) -> FieldExtensionData:
        """F_alpha = E^{H'} as an extension of F (H' of order h)."""
        e_sub = self.e // gcd(h, self.e)
        f_sub = (self.n // h) // e_sub
        filt = (1,) if e_sub == 1 else _normalize_quotient_filtration(self.filtration_orders, h)
        return FieldExtensionData(e=e_sub, f=f_sub, filtration=filt)

    def character_conductor(self, h: int, k: int) -> Fraction:
        """a_{F_alpha}(tau_k) on the H'-side: sum over H'_j = H' n G_j."""
        if k % h == 0:
            return Fraction(0)
        h0 = gcd(h, self.filtration_orders[0])
        total = Fraction(0)
        for dj in self.filtration_orders:
            hj = gcd(h, dj)
            nontrivial = k % hj != 0
            total += Fraction(hj, h0) if nontrivial else 0
        return total

    def different_valuation_sub(self, h: int) -> Fraction:
        """val_{F_alpha}(D_{F_alpha/F}) by the tower formula."""
        top = sum(d - 1 for d in self.filtration_orders)
        sub = sum(gcd(h, d) - 1 for d in self.filtration_orders)
        e_top = gcd(h, self.filtration_orders[0])
        return Fraction(top - sub, e_top)

    def f_sub(self, h: int) -> int:
        e_sub = self.filtration_orders[0] // gcd(h, self.filtration_orders[0])
        return (self.n // h) // e_sub


def _normalize_quotient_filtration(filtration: tuple[int, ...], h: int) -> tuple[int, ...]:
    """Lower filtration orders of Gal(F_alpha/F) = G/H' via Herbrand (desk cases only).

    Only needed to package sub-extensions; catalog sub-extensions are tame or
    the wild quadratic, where the quotient filtration is the elementwise
    quotient with trailing ones collapsed.
    """
    out = []
    for dj in filtration:
        q = dj // gcd(h, dj)
        if not out or q < out[-1] or q > 1:
            out.append(q)
    while len(out) > 1 and out[-1] == out[-2] == 1:
        out.pop()
    if out[-1] != 1:
        out.append(1)
    return tuple(out)
