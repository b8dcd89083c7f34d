"""Finite G-sets, equivariant bundles over them and the Tambara axioms.

A bundle over X is recorded by one fiber per orbit: a virtual character of
the stabilizer of the orbit's anchor (its least point).  The fiber at any
other point x is transported along the least g with g . anchor = x, so all
comparisons reduce to comparing anchor fibers.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .cyclotomic import CycInt
from .group import FiniteGroup, Subgroup, subgroup_lattice
from .transfer import induce, restrict, tensor_induce
from .vchar import VirtualCharacter

SECTION_BOUND = 10_000


class GSetError(ValueError):
    pass


class FiniteGSet:
    """Points 0..n-1 with action[g][x] = g . x."""

    def __init__(self, G: FiniteGroup, action: Sequence[Sequence[int]], labels: Optional[list] = None):
        self.G = G
        self.action = [list(row) for row in action]
        self.size = len(self.action[0]) if self.action else 0
        self.labels = labels if labels is not None else list(range(self.size))
        n = self.size
        orbit_of = [-1] * n
        anchors, orbits = [], []
        transporter = [0] * n
        for x in range(n):
            if orbit_of[x] >= 0:
                continue
            k = len(anchors)
            anchors.append(x)
            members = []
            for g in range(G.order):
                y = self.action[g][x]
                if orbit_of[y] < 0:
                    orbit_of[y] = k
                    transporter[y] = g
                    members.append(y)
            orbits.append(sorted(members))
        self.orbit_of = orbit_of
        self.anchors = anchors
        self.orbits = orbits
        self.transporter = transporter
        self._stab = {}

    def __len__(self):
        return self.size

    def check_action(self) -> None:
        G, act = self.G, self.action
        if act[0] != list(range(self.size)):
            raise GSetError("identity does not act trivially")
        for g in range(G.order):
            for h in range(G.order):
                gh = G.table[g][h]
                if any(act[gh][x] != act[g][act[h][x]] for x in range(self.size)):
                    raise GSetError("action is not compatible with multiplication")

    def stabilizer(self, x: int) -> Subgroup:
        if x not in self._stab:
            mask = 0
            for g in range(self.G.order):
                if self.action[g][x] == x:
                    mask |= 1 << g
            self._stab[x] = Subgroup(self.G, mask)
        return self._stab[x]

    def anchor_of(self, x: int) -> int:
        return self.anchors[self.orbit_of[x]]


@dataclass
class GSetMap:
    source: FiniteGSet
    target: FiniteGSet
    images: list

    def __post_init__(self):
        G = self.source.G
        for g in range(G.order):
            for x in range(self.source.size):
                if self.images[self.source.action[g][x]] != self.target.action[g][self.images[x]]:
                    raise GSetError("map is not equivariant")

    def __call__(self, x: int) -> int:
        return self.images[x]

    def fiber(self, y: int) -> list[int]:
        return [x for x in range(self.source.size) if self.images[x] == y]


# ---------------------------------------------------------------------------
# constructors


def coset_space(G: FiniteGroup, H: Subgroup) -> FiniteGSet:
    """G/H with points the left cosets in order of least element."""
    cosets = G.left_cosets(H)
    index = {}
    for i, c in enumerate(cosets):
        for g in c:
            index[g] = i
    action = [[index[G.table[g][c[0]]] for c in cosets] for g in range(G.order)]
    return FiniteGSet(G, action, labels=[f"{G.labels[c[0]]}H" for c in cosets])


def point(G: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(G, [[0] for _ in range(G.order)], labels=["*"])


def empty(G: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(G, [[] for _ in range(G.order)], labels=[])


def coset_projection(X: FiniteGSet, Y: FiniteGSet, H: Subgroup, J: Subgroup) -> GSetMap:
    """gH -> gJ for H <= J (X = G/H, Y = G/J built by coset_space)."""
    G = X.G
    cosX, cosY = G.left_cosets(H), G.left_cosets(J)
    where = {}
    for i, c in enumerate(cosY):
        for g in c:
            where[g] = i
    return GSetMap(X, Y, [where[c[0]] for c in cosX])


def to_point(X: FiniteGSet, P: Optional[FiniteGSet] = None) -> GSetMap:
    P = P if P is not None else point(X.G)
    return GSetMap(X, P, [0] * X.size)


def identity_map(X: FiniteGSet) -> GSetMap:
    return GSetMap(X, X, list(range(X.size)))


def disjoint_union(X: FiniteGSet, Y: FiniteGSet) -> tuple[FiniteGSet, GSetMap, GSetMap]:
    n = X.size
    action = [rx + [n + y for y in ry] for rx, ry in zip(X.action, Y.action)]
    U = FiniteGSet(X.G, action, labels=[("L", l) for l in X.labels] + [("R", l) for l in Y.labels])
    return U, GSetMap(X, U, list(range(n))), GSetMap(Y, U, [n + y for y in range(Y.size)])


def copair(f: GSetMap, g: GSetMap, U: FiniteGSet) -> GSetMap:
    """The map X ⊔ Y -> Z restricting to f and g."""
    return GSetMap(U, f.target, list(f.images) + list(g.images))


def pullback_gsets(alpha: GSetMap, beta: GSetMap) -> tuple[FiniteGSet, GSetMap, GSetMap]:
    """A x_C B with its two projections."""
    if alpha.target is not beta.target:
        raise GSetError("maps must share a target")
    A, B = alpha.source, beta.source
    pairs = [(a, b) for a in range(A.size) for b in range(B.size) if alpha(a) == beta(b)]
    index = {p: i for i, p in enumerate(pairs)}
    G = A.G
    action = [[index[(A.action[g][a], B.action[g][b])] for a, b in pairs] for g in range(G.order)]
    P = FiniteGSet(G, action, labels=pairs)
    return P, GSetMap(P, A, [a for a, _ in pairs]), GSetMap(P, B, [b for _, b in pairs])


def pi_f(p: GSetMap, f: GSetMap, bound: int = SECTION_BOUND):
    """Dependent product: sections of p over the fibers of f.

    Returns (Pi, q) with q: Pi -> Y.  A point is (y, s) where s assigns to
    every x in f^-1(y) a point of p^-1(x); g acts by (g s)(x) = g s(g^-1 x).
    """
    A, X = p.source, p.target
    Y = f.target
    if f.source is not X:
        raise GSetError("p must land in the source of f")
    G = X.G
    fibers_A = [p.fiber(x) for x in range(X.size)]
    points = []
    total = 0
    for y in range(Y.size):
        xs = f.fiber(y)
        count = 1
        for x in xs:
            count *= len(fibers_A[x])
        total += count
        if total > bound:
            raise GSetError(f"dependent product exceeds the size bound {bound}")
        for choice in itertools.product(*[fibers_A[x] for x in xs]):
            points.append((y, tuple(zip(xs, choice))))
    index = {pt: i for i, pt in enumerate(points)}
    action = []
    for g in range(G.order):
        row = []
        for y, sec in points:
            gy = Y.action[g][y]
            moved = {X.action[g][x]: A.action[g][a] for x, a in sec}
            new = tuple((x, moved[x]) for x in f.fiber(gy))
            row.append(index[(gy, new)])
        action.append(row)
    Pi = FiniteGSet(G, action, labels=points)
    q = GSetMap(Pi, Y, [y for y, _ in points])
    return Pi, q


def exponential_diagram(p: GSetMap, f: GSetMap):
    """The diagram A <-e- X x_Y Pi -f'-> Pi -q-> Y over p: A -> X, f: X -> Y.

    Returns (Pi, q, P, e, fprime) with P = X x_Y Pi, e(x, s) = s(x) and
    fprime the projection to Pi.
    """
    Pi, q = pi_f(p, f)
    P, to_X, to_Pi = pullback_gsets(f, q)
    A = p.source
    e_images = []
    for k in range(P.size):
        x, s = P.labels[k]
        _, sec = Pi.labels[s]
        e_images.append(dict(sec)[x])
    e = GSetMap(P, A, e_images)
    return Pi, q, P, e, to_Pi


# ---------------------------------------------------------------------------
# equivariant bundles


class EquivBundle:
    """fibers[k] is a virtual character of the stabilizer of anchors[k]."""

    def __init__(self, base: FiniteGSet, fibers: Sequence[VirtualCharacter]):
        if len(fibers) != len(base.anchors):
            raise GSetError("need one fiber per orbit")
        for k, v in enumerate(fibers):
            if v.table is not base.stabilizer(base.anchors[k]).table():
                raise GSetError(f"fiber {k} is not a character of the anchor stabilizer")
        self.base = base
        self.fibers = list(fibers)

    def __eq__(self, other):
        return isinstance(other, EquivBundle) and self.base is other.base and self.fibers == other.fibers

    def __add__(self, other: "EquivBundle") -> "EquivBundle":
        return EquivBundle(self.base, [a + b for a, b in zip(self.fibers, other.fibers)])

    def __mul__(self, other: "EquivBundle") -> "EquivBundle":
        return EquivBundle(self.base, [a * b for a, b in zip(self.fibers, other.fibers)])

    def __repr__(self):
        return f"EquivBundle({self.fibers})"

    def is_actual(self) -> bool:
        return all(v.is_actual() for v in self.fibers)

    def value_at(self, x: int, h: int) -> CycInt:
        """Character of the fiber V_x at h in Stab(x)."""
        X = self.base
        k = X.orbit_of[x]
        a = X.anchors[k]
        g = X.transporter[x]
        G = X.G
        h0 = G.conj(G.inv(g), h)
        return _vc_value(self.fibers[k], X.stabilizer(a), h0)

    def fiber_at(self, x: int) -> VirtualCharacter:
        """V_x as a character of Stab(x)."""
        S = self.base.stabilizer(x)
        t = S.table()
        vals = [self.value_at(x, S.elements[r]) for r in t.classes.reps]
        return VirtualCharacter(t, t.decompose(vals))


def _vc_value(v: VirtualCharacter, S: Subgroup, g: int) -> CycInt:
    t = v.table
    c = t.classes.class_of[S.position[g]]
    acc = CycInt.integer(0, t.exponent)
    for a, row in zip(v.coeffs, t.values):
        if a:
            acc = acc + row[c] * a
    return acc


def unit_bundle(X: FiniteGSet) -> EquivBundle:
    return EquivBundle(X, [VirtualCharacter.one(X.stabilizer(a).table()) for a in X.anchors])


def zero_bundle(X: FiniteGSet) -> EquivBundle:
    return EquivBundle(X, [VirtualCharacter.zero(X.stabilizer(a).table()) for a in X.anchors])


def pull(f: GSetMap, W: EquivBundle) -> EquivBundle:
    """(f* W)_x = W_{f(x)} restricted to Stab(x)."""
    X = f.source
    fibers = []
    for a in X.anchors:
        Wy = W.fiber_at(f(a))
        fibers.append(restrict(Wy, X.stabilizer(a), W.base.stabilizer(f(a))))
    return EquivBundle(X, fibers)


def push(f: GSetMap, V: EquivBundle) -> EquivBundle:
    """(f_* V)_y = sum over Stab(y)-orbits on f^-1(y) of ind V_x."""
    X, Y = f.source, f.target
    fibers = []
    for y in Y.anchors:
        S = Y.stabilizer(y)
        acc = VirtualCharacter.zero(S.table())
        for x in _orbit_reps(X, f.fiber(y), S):
            acc = acc + induce(V.fiber_at(x), X.stabilizer(x), S)
        fibers.append(acc)
    return EquivBundle(Y, fibers)


def norm(f: GSetMap, V: EquivBundle) -> EquivBundle:
    """(f_# V)_y = tensor product of V_x over x in f^-1(y)."""
    if not V.is_actual():
        raise GSetError("the norm of a bundle needs nonnegative fibers")
    X, Y = f.source, f.target
    G = X.G
    fibers = []
    for y in Y.anchors:
        S = Y.stabilizer(y)
        t = S.table()
        fib = f.fiber(y)
        vals = []
        for r in t.classes.reps:
            s = S.elements[r]
            seen = set()
            val = CycInt.integer(1, t.exponent)
            for x in fib:
                if x in seen:
                    continue
                length, z = 0, x
                while True:
                    seen.add(z)
                    length += 1
                    z = X.action[s][z]
                    if z == x:
                        break
                val = val * V.value_at(x, G.power(s, length))
            vals.append(val)
        fibers.append(VirtualCharacter(t, t.decompose(vals)))
    return EquivBundle(Y, fibers)


def bundle_maps(f: GSetMap):
    """The three functorial maps attached to f, as callables."""
    return (lambda W: pull(f, W)), (lambda V: push(f, V)), (lambda V: norm(f, V))


def _orbit_reps(X: FiniteGSet, points: list, S: Subgroup) -> list[int]:
    seen = set()
    reps = []
    for x in points:
        if x in seen:
            continue
        reps.append(x)
        seen.update(X.action[s][x] for s in S.elements)
    return reps


def irreducible_bundles(X: FiniteGSet) -> list[EquivBundle]:
    """Bundles with one irreducible fiber on one orbit and zero elsewhere."""
    out = []
    zero = zero_bundle(X)
    for k, a in enumerate(X.anchors):
        t = X.stabilizer(a).table()
        for i in range(t.r):
            fibers = list(zero.fibers)
            fibers[k] = VirtualCharacter.irreducible(t, i)
            out.append(EquivBundle(X, fibers))
    return out


# ---------------------------------------------------------------------------
# counting G-maps (for the adjunction identity)


def count_maps_over(S: FiniteGSet, s_map: GSetMap, T: FiniteGSet, t_map: GSetMap) -> int:
    """Number of G-maps S -> T commuting with the maps to a common base.

    A G-map is fixed by the images of the orbit anchors; an anchor a may go
    to t exactly when Stab(a) <= Stab(t) and both lie over the same point.
    """
    total = 1
    for a in S.anchors:
        Sa = S.stabilizer(a)
        base = s_map(a)
        count = sum(1 for t in range(T.size) if t_map(t) == base and Sa <= T.stabilizer(t))
        total *= count
        if total == 0:
            break
    return total


def adjunction_counts(p: GSetMap, f: GSetMap, b_map: GSetMap) -> tuple[int, int]:
    """|Hom_X(f* B, A)| and |Hom_Y(B, Pi_f A)| for b_map: B -> Y."""
    P, to_X, _ = pullback_gsets(f, b_map)
    lhs = count_maps_over(P, to_X, p.source, p)
    Pi, q = pi_f(p, f)
    rhs = count_maps_over(b_map.source, b_map, Pi, q)
    return lhs, rhs


# ---------------------------------------------------------------------------
# the axiom suite


@dataclass
class AxiomFailure:
    axiom: str
    description: str
    size: int


@dataclass
class TambaraReport:
    group: str
    checks: dict = field(default_factory=dict)  # axiom -> number of instances checked
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, axiom: str, ok: bool, description: str, size: int) -> None:
        self.checks[axiom] = self.checks.get(axiom, 0) + 1
        if not ok:
            self.failures.append(AxiomFailure(axiom, description, size))

    def minimal_failure(self) -> Optional[AxiomFailure]:
        return min(self.failures, key=lambda f: f.size, default=None)

    def to_json(self) -> dict:
        m = self.minimal_failure()
        return {
            "group": self.group,
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "failures": len(self.failures),
            "minimal_failure": None if m is None else {"axiom": m.axiom, "instance": m.description, "size": m.size},
        }


def _name(H: Subgroup) -> str:
    from .chartab import subgroup_name

    return f"{subgroup_name(H)}[{H.order}]"


def _sample_bundles(X: FiniteGSet, limit: int) -> list[EquivBundle]:
    irr = irreducible_bundles(X)
    out = irr[:limit]
    if len(irr) >= 2:
        out.append(irr[0] + irr[-1])
    out.append(unit_bundle(X))
    return out


def tambara_axiom_suite(G: FiniteGroup, size_bound: int = SECTION_BOUND, bundle_limit: int = 12) -> TambaraReport:
    """Check the pullback, disjoint-union and exponential-diagram axioms."""
    if G.order > 24:
        raise GSetError("the axiom suite is limited to groups of order at most 24")
    report = TambaraReport(G.name)
    reps = subgroup_lattice(G, up_to_conjugacy=True)
    subs = subgroup_lattice(G)
    spaces = {}

    def space(H):
        if H.mask not in spaces:
            spaces[H.mask] = coset_space(G, H)
        return spaces[H.mask]

    # axiom 1: pullback squares over G/J
    for J in reps:
        below = [H for H in subs if H <= J]
        C = space(J)
        for H, K in itertools.combinations_with_replacement(below, 2):
            A, B = space(H), space(K)
            alpha, beta = coset_projection(A, C, H, J), coset_projection(B, C, K, J)
            P, pA, pB = pullback_gsets(alpha, beta)
            for V in _sample_bundles(A, bundle_limit):
                lhs = pull(beta, push(alpha, V))
                rhs = push(pB, pull(pA, V))
                desc = f"pullback push H={_name(H)} K={_name(K)} J={_name(J)}"
                report.record("pullback-push", lhs == rhs, desc, P.size)
                if V.is_actual():
                    lhs = pull(beta, norm(alpha, V))
                    rhs = norm(pB, pull(pA, V))
                    report.record("pullback-norm", lhs == rhs, desc.replace("push", "norm"), P.size)

    # axiom 2: disjoint unions over G/J
    for J in reps:
        below = [H for H in subs if H <= J]
        Y = space(J)
        for H, K in itertools.combinations_with_replacement(below, 2):
            Om, Ps = space(H), space(K)
            U, iO, iP = disjoint_union(Om, Ps)
            fO, fP = coset_projection(Om, Y, H, J), coset_projection(Ps, Y, K, J)
            f = copair(fO, fP, U)
            for V in _sample_bundles(Om, 3):
                for W in _sample_bundles(Ps, 3):
                    both = EquivBundle(U, V.fibers + W.fibers)
                    ok = pull(iO, both) == V and pull(iP, both) == W
                    ok = ok and push(f, both) == push(fO, V) + push(fP, W)
                    if V.is_actual() and W.is_actual():
                        ok = ok and norm(f, both) == norm(fO, V) * norm(fP, W)
                    report.record(
                        "disjoint-union", ok, f"union H={_name(H)} K={_name(K)} J={_name(J)}", U.size
                    )

    # axiom 3: exponential diagrams for chains K <= H <= J
    for J in reps:
        for H in [H for H in subs if H <= J]:
            for K in [K for K in subs if K <= H]:
                X, Y = space(H), space(J)
                f = coset_projection(X, Y, H, J)
                A1 = space(K)
                p1 = coset_projection(A1, X, K, H)
                A2, i1, i2 = disjoint_union(A1, X)
                p2 = copair(p1, identity_map(X), A2)
                for p in (p1, p2):
                    try:
                        Pi, q, P, e, fprime = exponential_diagram(p, f)
                    except GSetError:
                        continue
                    if Pi.size > size_bound:
                        continue
                    for V in _sample_bundles(p.source, bundle_limit):
                        if not V.is_actual():
                            continue
                        lhs = norm(f, push(p, V))
                        rhs = push(q, norm(fprime, pull(e, V)))
                        report.record(
                            "exponential",
                            lhs == rhs,
                            f"exponential K={_name(K)} H={_name(H)} J={_name(J)} |A|={p.source.size}",
                            P.size,
                        )
    return report
