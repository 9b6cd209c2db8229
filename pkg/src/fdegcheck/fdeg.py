"""Volume ratios, the J-root subsystem, the Hecke root datum, Clifford transfer,
and assembly of the formal-degree identity.

Volumes only ever appear as ratios of q-monomials; the unipotent formal degree
is an opaque oracle symbol carried through the transfer chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .conductors import ConductorAssignment, depth_function, is_concave
from .errors import InternalConsistencyError, InvalidInputError
from .localfield import (
    adjoint_conductor_display,
    eps_abs_adjoint,
    EpsAbs,
)
from .qlaurent import QLaurent
from .report import VerificationReport, make_report
from .rootdata import (
    BasedRootDatum,
    DiagramAutomorphismGroup,
    GaloisRootData,
    RelativeRoot,
    coinvariant_lattice,
    enumerate_weyl_group,
    galois_orbits,
    relative_root_system,
)


# ---------------------------------------------------------------------------
# volume ratios
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VolumeRatio:
    monomial: QLaurent

    def __post_init__(self):
        e, c = self.monomial.monomial_parts()
        if c <= 0:
            raise InvalidInputError("volume ratios are positive monomials")

    def __mul__(self, other: "VolumeRatio") -> "VolumeRatio":
        return VolumeRatio(self.monomial * other.monomial)

    @property
    def v_exponent(self) -> int:
        return self.monomial.monomial_parts()[0]


def vol_ratio_I_over_type(g: GaloisRootData, c: ConductorAssignment) -> VolumeRatio:
    """vol(I)/vol(J_chi) = q^{sum_{alpha > 0} f_alpha c_alpha} (indivisible classes).

    The spec signature passes the depth function, but c is not recoverable from
    it (c = 0 and c = 1 share a profile), so the assignment is taken directly;
    concavity of its depth profile is still required.
    """
    rel = relative_root_system(g)
    ok, witness = is_concave(depth_function(c, rel), rel)
    if not ok:
        raise InvalidInputError(f"depth profile is not concave (witness {witness})")
    total = 0
    for r in rel:
        if r.sign < 0 or r.divisible:
            continue
        total += g.orbit_field(r.label).f * c.of(r)
    return VolumeRatio(QLaurent.q_power(total))


def vol_ratio_IJ_over_I(g: GaloisRootData, c: ConductorAssignment) -> VolumeRatio:
    """vol(I_J)/vol(I) = q^{a(g^vee)/2} prod_{alpha > 0, c != 0} q^{f_alpha}."""
    rel = relative_root_system(g)
    c.validate_for(rel)
    exponent = Fraction(adjoint_conductor_display(g), 2)
    for r in rel:
        if r.sign < 0 or r.divisible:
            continue
        if c.of(r) != 0:
            exponent += g.orbit_field(r.label).f
    return VolumeRatio(QLaurent.q_power(exponent))


# ---------------------------------------------------------------------------
# the J-datum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JDatum:
    """Roots of J-circle (classes with c = 0), the rescaled Hecke datum, and W_s orders."""

    j_roots: tuple[str, ...]  # labels of all signed classes with c = 0
    j_multiplicities: tuple[tuple[str, int], ...]  # positive class -> f
    hecke_datum: BasedRootDatum | None
    lattice_rank: int
    w_circ_order: int
    gamma_order: int


def j_root_subsystem(g: GaloisRootData, c: ConductorAssignment):
    """Signed indivisible classes with c_alpha = 0, with absolute multiplicity f per orbit."""
    rel = relative_root_system(g)
    c.validate_for(rel)
    labels = []
    mult = []
    for r in rel:
        if r.divisible:
            continue
        if c.of(r) == 0:
            labels.append(r.label)
            if r.sign > 0:
                mult.append((r.label, g.orbit_field(r.label).f))
    return tuple(labels), tuple(mult)


def _root_string_cartan(roots: set, x, r) -> int:
    """Cartan integer n(x, r) = p - q from the r-string through x (reduced sets)."""
    if x == r:
        return 2
    if x == tuple(-a for a in r):
        return -2
    p = 0
    cur = tuple(a - b for a, b in zip(x, r))
    while cur in roots:
        p += 1
        cur = tuple(a - b for a, b in zip(cur, r))
    q = 0
    cur = tuple(a + b for a, b in zip(x, r))
    while cur in roots:
        q += 1
        cur = tuple(a + b for a, b in zip(cur, r))
    return p - q


def hecke_root_datum(g: GaloisRootData, c: ConductorAssignment) -> BasedRootDatum | None:
    """The based root datum of H(s^vee, q^{1/2}).

    Character lattice: the Galois-invariant lattice Y^Gamma (isomorphic over Q
    to the coinvariant lattice the construction names); roots: per indivisible
    class with c = 0, the Galois orbit-sum of its absolute coroots (equal to
    f_alpha times the coroot class in the coinvariant picture on unramified
    orbits); cocharacter lattice: the free coinvariants of X; coroots solved
    from root-string Cartan integers and validated integral.  Returns None
    when no class survives (J-circle is a torus).
    """
    rel = relative_root_system(g)
    c.validate_for(rel)
    datum = g.absolute
    n = datum.rank
    group = g.galois_group
    y_lat = coinvariant_lattice(tuple(a.comatrix for a in group.elements))
    x_lat = coinvariant_lattice(tuple(a.matrix for a in group.elements))
    y_inv = y_lat.invariant_basis  # basis of Y^Gamma, the new character lattice
    x_quot = x_lat.quotient_rows  # projection X -> X_Gal free, the new cocharacter lattice
    rank_h = len(y_inv)
    if len(x_quot) != rank_h:
        raise InternalConsistencyError("invariant/coinvariant ranks differ")

    def orbit_sum_coroot(r: RelativeRoot):
        total = [0] * n
        for idx in sorted(r.orbit):
            cv = datum.coroots[idx]
            total = [a + b for a, b in zip(total, cv)]
        return tuple(total)

    def to_y_coords(vec):
        rows = [tuple(y_inv[j][i] for j in range(rank_h)) for i in range(n)]
        sol = linalg.rat_solve(rows, list(vec))
        if sol is None or any(s.denominator != 1 for s in sol):
            raise InternalConsistencyError("orbit sum is not in the invariant lattice")
        return tuple(int(s) for s in sol)

    def project_x(vec):
        return tuple(sum(row[j] * vec[j] for j in range(n)) for row in x_quot)

    # pairing of the new datum: <root y, coroot class of x> := <x, y>_original
    def pair_h(y_coords, x_coords):
        # lift x_coords: solve x_quot * x = x_coords (any lift works)
        rows = [tuple(row) for row in x_quot]
        lift = linalg.rat_solve(rows, list(x_coords))
        if lift is None:
            raise InternalConsistencyError("cocharacter class has no lift")
        y_vec = [sum(y_inv[j][i] * y_coords[j] for j in range(rank_h)) for i in range(n)]
        val = sum(
            lift[i] * sum(Fraction(datum.pairing[i][jj]) * y_vec[jj] for jj in range(n))
            for i in range(n)
        )
        if val.denominator != 1:
            raise InternalConsistencyError("non-integral Hecke pairing")
        return int(val)

    pairing_h = tuple(
        tuple(
            pair_h(tuple(int(i == a) for i in range(rank_h)), tuple(int(j == b) for j in range(rank_h)))
            for b in range(rank_h)
        )
        for a in range(rank_h)
    )

    pos_classes = [r for r in rel if r.sign > 0 and not r.divisible and c.of(r) == 0]
    if not pos_classes:
        return None
    plus = [to_y_coords(orbit_sum_coroot(r)) for r in pos_classes]
    roots_h = []
    for v in plus:
        roots_h.append(v)
        roots_h.append(tuple(-a for a in v))
    root_set = set(roots_h)

    # validate closure under string reflections
    for r in root_set:
        for x in root_set:
            nval = _root_string_cartan(root_set, x, r)
            img = tuple(a - nval * b for a, b in zip(x, r))
            if img not in root_set:
                raise InternalConsistencyError("rescaled coroot set is not reflection-closed")
    ordered = sorted(root_set, key=lambda v: (v not in plus, v))

    # coroots: solve <x_j, r^> = n(x_j, r) over the cocharacter lattice
    pairing_rows = {}

    def coroot_of(r):
        rows = []
        rhs = []
        for x in sorted(root_set):
            rows.append(
                tuple(
                    Fraction(
                        pair_h(x, tuple(int(j == b) for j in range(rank_h)))
                    )
                    for b in range(rank_h)
                )
            )
            rhs.append(Fraction(_root_string_cartan(root_set, x, r)))
        sol = linalg.rat_solve(rows, rhs)
        if sol is None or linalg.rat_rank(rows) != rank_h:
            raise InternalConsistencyError(
                "Hecke coroots are not determined; roots do not span the lattice"
            )
        if any(s.denominator != 1 for s in sol):
            raise InternalConsistencyError("non-integral Hecke coroot")
        return tuple(int(s) for s in sol)

    coroots_h = tuple(coroot_of(r) for r in ordered)

    # base: indecomposable positive roots
    pos_set = set(plus)
    base_idx = []
    for i, v in enumerate(ordered):
        if v not in pos_set:
            continue
        decomposable = any(
            tuple(a - b for a, b in zip(v, w)) in pos_set for w in pos_set if w != v
        )
        if not decomposable:
            base_idx.append(i)
    return BasedRootDatum(
        rank=rank_h,
        roots=tuple(ordered),
        coroots=coroots_h,
        pairing=pairing_h,
        base=tuple(base_idx),
    )


# ---------------------------------------------------------------------------
# W_s decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WsDecomposition:
    stabilizer_order: int
    w_circ_order: int
    gamma_order: int
    gamma_labels: tuple[str, ...]


def w_s_decomposition(g: GaloisRootData, c: ConductorAssignment) -> WsDecomposition:
    """Stabilizer of (j_roots, c) in W0 x| Gamma, factored into Weyl part and
    the positivity-preserving complement Gamma_{s^vee}."""
    rel = relative_root_system(g)
    c.validate_for(rel)
    datum = g.absolute
    root_pos = {r: k for k, r in enumerate(datum.roots)}
    orbit_of = {}
    for r in rel:
        for idx in r.orbit:
            orbit_of[idx] = r
    weyl = enumerate_weyl_group(datum)
    group = g.galois_group

    def class_value(r: RelativeRoot):
        return None if r.divisible else c.of(r)

    stab = []
    for w in weyl:
        for gm in group.elements:
            mat = linalg.mat_mul(w.matrix, gm.matrix)
            image_class = {}
            ok = True
            for r in rel:
                images = {root_pos[tuple(linalg.mat_mul_vec(mat, datum.roots[i]))] for i in r.orbit}
                targets = {orbit_of[i].label for i in images}
                if len(targets) != 1:
                    ok = False
                    break
                target = orbit_of[next(iter(images))]
                if target.orbit != frozenset(images):
                    ok = False
                    break
                if class_value(target) != class_value(r):
                    ok = False
                    break
                image_class[r.label] = target.label
            if ok:
                stab.append((mat, gm.label, image_class))

    j_pos = frozenset(r.label for r in rel if r.sign > 0 and not r.divisible and c.of(r) == 0)
    # orbit of the positive j-system under the stabilizer; its stabilizer is Gamma_s
    orbit = set()
    gamma_elems = []
    for mat, glabel, image_class in stab:
        image = frozenset(image_class[lab] for lab in j_pos)
        orbit.add(image)
        if image == j_pos:
            gamma_elems.append((mat, glabel))
    if len(orbit) * len(gamma_elems) != len(stab):
        raise InternalConsistencyError("stabilizer does not factor over positive systems")
    return WsDecomposition(
        stabilizer_order=len(stab),
        w_circ_order=len(orbit),
        gamma_order=len(gamma_elems),
        gamma_labels=tuple(sorted(lbl for _, lbl in gamma_elems)),
    )


def build_j_datum(g: GaloisRootData, c: ConductorAssignment) -> JDatum:
    labels, mult = j_root_subsystem(g, c)
    hd = hecke_root_datum(g, c)
    ws = w_s_decomposition(g, c)
    group = g.galois_group
    y_lat = coinvariant_lattice(tuple(a.comatrix for a in group.elements))
    return JDatum(
        j_roots=labels,
        j_multiplicities=mult,
        hecke_datum=hd,
        lattice_rank=len(y_lat.invariant_basis),
        w_circ_order=ws.w_circ_order,
        gamma_order=ws.gamma_order,
    )


# ---------------------------------------------------------------------------
# Lemma 2: volume ratio = |epsilon|
# ---------------------------------------------------------------------------


def verify_lemma2(g: GaloisRootData, c: ConductorAssignment, instance: str = "") -> VerificationReport:
    """vol(I_J)/vol(J_chi) == |epsilon(0, Ad o phi_chi, psi)| as identical monomials."""
    name = instance or f"{g.name} c={c.as_dict()}"
    lhs = (vol_ratio_IJ_over_I(g, c) * vol_ratio_I_over_type(g, c)).monomial
    rhs = eps_abs_adjoint(g, c).monomial
    passed = lhs == rhs
    witness = None
    if not passed:
        witness = f"LHS v-exponent {lhs.to_sparse()} vs RHS {rhs.to_sparse()}"
    return make_report(name, "lemma2", lhs, rhs, passed, witness)


def verify_conductor_decomposition(g: GaloisRootData, instance: str = "") -> VerificationReport:
    """a(g^vee) = a(t^vee) + 2 sum_{alpha > 0} f_alpha val(D_alpha), two routes."""
    from .localfield import adjoint_conductor_rep_model, different_valuation, torus_artin_conductor

    name = instance or g.name
    rel = relative_root_system(g)
    display = torus_artin_conductor(g)
    for r in rel:
        if r.sign < 0:
            continue
        ext = g.orbit_field(r.label)
        display += 2 * ext.f * different_valuation(ext)
    rep_model = adjoint_conductor_rep_model(g)
    passed = display == rep_model == adjoint_conductor_display(g)
    return make_report(
        name,
        "conductor-decomposition",
        str(rep_model),
        str(display),
        passed,
        None if passed else "a(g) routes disagree",
    )


# ---------------------------------------------------------------------------
# Clifford arithmetic and formal degree assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CliffordInstance:
    """Component-group integers of one induction step pi_J -> pi."""

    dim_rho_J: int
    dim_sigma: int
    gamma_stab_order: int
    index_pi0: int
    s_sharp_G: int
    s_sharp_J: int
    dim_rho_pi: int

    def __post_init__(self):
        for field_name in (
            "dim_rho_J",
            "dim_sigma",
            "gamma_stab_order",
            "index_pi0",
            "s_sharp_G",
            "s_sharp_J",
            "dim_rho_pi",
        ):
            if getattr(self, field_name) < 1:
                raise InvalidInputError(f"{field_name} must be a positive integer")

    @classmethod
    def consistent(
        cls, dim_rho_J: int, dim_sigma: int, gamma_stab_order: int, index_pi0: int, s_sharp_J: int
    ) -> "CliffordInstance":
        """Build an instance satisfying both Clifford identities."""
        return cls(
            dim_rho_J=dim_rho_J,
            dim_sigma=dim_sigma,
            gamma_stab_order=gamma_stab_order,
            index_pi0=index_pi0,
            s_sharp_J=s_sharp_J,
            s_sharp_G=index_pi0 * gamma_stab_order * s_sharp_J,
            dim_rho_pi=dim_rho_J * dim_sigma * index_pi0,
        )


TRIVIAL_CLIFFORD = CliffordInstance.consistent(1, 1, 1, 1, 1)


def verify_lemma1_arithmetic(inst: CliffordInstance, instance: str = "clifford") -> VerificationReport:
    """dim(rho_pi) = dim(rho_J) dim(sigma) [pi0-index], and
    dim(rho_J)/|S#_J| = dim(rho_pi)/|S#_G| * |Gamma_stab|/dim(sigma)."""
    dim_ok = inst.dim_rho_pi == inst.dim_rho_J * inst.dim_sigma * inst.index_pi0
    lhs = Fraction(inst.dim_rho_J, inst.s_sharp_J)
    rhs = Fraction(inst.dim_rho_pi, inst.s_sharp_G) * Fraction(inst.gamma_stab_order, inst.dim_sigma)
    ratio_ok = lhs == rhs
    passed = dim_ok and ratio_ok
    witness = None
    if not dim_ok:
        witness = (
            f"dim(rho_pi) = {inst.dim_rho_pi} != "
            f"{inst.dim_rho_J}*{inst.dim_sigma}*{inst.index_pi0}"
        )
    elif not ratio_ok:
        witness = f"ratio identity fails: {lhs} != {rhs}"
    return make_report(instance, "lemma1", str(lhs), str(rhs), passed, witness)


@dataclass(frozen=True)
class FormalDegreeExpr:
    """rational * v-monomial * opaque oracle symbol."""

    coefficient: Fraction
    monomial: QLaurent
    oracle: str

    def __post_init__(self):
        self.monomial.monomial_parts()

    @classmethod
    def oracle_symbol(cls, name: str) -> "FormalDegreeExpr":
        return cls(coefficient=Fraction(1), monomial=QLaurent.one(), oracle=name)

    def scaled(self, rational) -> "FormalDegreeExpr":
        return FormalDegreeExpr(
            coefficient=self.coefficient * Fraction(rational),
            monomial=self.monomial,
            oracle=self.oracle,
        )

    def times_monomial(self, m: QLaurent) -> "FormalDegreeExpr":
        return FormalDegreeExpr(
            coefficient=self.coefficient, monomial=self.monomial * m, oracle=self.oracle
        )

    def __eq__(self, other):
        return (
            isinstance(other, FormalDegreeExpr)
            and self.coefficient == other.coefficient
            and self.monomial == other.monomial
            and self.oracle == other.oracle
        )

    def render(self) -> str:
        return f"{self.coefficient} * ({self.monomial}) * [{self.oracle}]"


def clifford_fdeg_transfer(expr: FormalDegreeExpr, inst: CliffordInstance) -> FormalDegreeExpr:
    """fdeg(pi') = fdeg(pi_J) * dim(sigma)/|Gamma_stab|."""
    return expr.scaled(Fraction(inst.dim_sigma, inst.gamma_stab_order))


def assemble_hii(
    g: GaloisRootData,
    c: ConductorAssignment,
    inst: CliffordInstance,
    oracle: FormalDegreeExpr | None = None,
    instance: str = "",
) -> VerificationReport:
    """Both sides of the formal-degree identity as formal products of the same oracle.

    LHS: fdeg(pi) = oracle(fdeg pi_J as a group representation)
                    * (vol I_J / vol J_chi) * dim(sigma)/|Gamma_stab|.
    RHS: (dim rho_pi / |S#_pi|) * |eps| * |gamma_J| with
         |gamma_J| = oracle * |S#_J| / dim(rho_J).
    Equality holds exactly when Lemma 2 and the Clifford identities do.
    """
    name = instance or f"{g.name} c={c.as_dict()}"
    lemma2 = verify_lemma2(g, c, instance=name)
    lemma1 = verify_lemma1_arithmetic(inst, instance=name)
    if oracle is None:
        oracle = FormalDegreeExpr.oracle_symbol("fdeg(pi_J)")
    ws = w_s_decomposition(g, c)
    if ws.gamma_order % inst.gamma_stab_order != 0:
        raise InvalidInputError(
            f"Gamma_stab order {inst.gamma_stab_order} does not divide |Gamma_s| = {ws.gamma_order}"
        )
    vol = (vol_ratio_IJ_over_I(g, c) * vol_ratio_I_over_type(g, c)).monomial
    lhs = clifford_fdeg_transfer(oracle, inst).times_monomial(vol)
    eps = eps_abs_adjoint(g, c).monomial
    rhs = (
        oracle.scaled(Fraction(inst.s_sharp_J, inst.dim_rho_J))
        .scaled(Fraction(inst.dim_rho_pi, inst.s_sharp_G))
        .times_monomial(eps)
    )
    passed = lemma2.passed and lemma1.passed and lhs == rhs
    witness = None
    if not lemma2.passed:
        witness = f"lemma2 failed: {lemma2.witness}"
    elif not lemma1.passed:
        witness = f"lemma1 failed: {lemma1.witness}"
    elif not passed:
        witness = "formal products differ"
    return make_report(name, "hii", lhs.render(), rhs.render(), passed, witness)
