"""Named verification suites run by ``gradedchar verify``.

Each suite returns a list of Check records.  Checks never raise on a wrong
answer; an exception inside a check is caught and reported as a failure so
that one broken computation does not hide the others.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .chartab import character_table
from .filtration import gamma_filtration, graded_image, ring_mul
from .group import (
    FiniteGroup,
    alternating4,
    build_catalog_group,
    cyclic,
    dihedral,
    factor_subgroup,
    normalizer,
    product,
    psl2,
    quaternion8,
    sylow_subgroup,
)
from .gset import tambara_axiom_suite
from .presentation import GradedPresentation, match_presentation
from .saturation import (
    f_in_gamma_bound,
    is_saturated,
    saturated_filtration,
    stable_element_subring,
    stable_invariants,
)
from .transfer import (
    InclusionContext,
    chi_of_rep,
    conjugate_character,
    induce,
    norm_by_subtraction,
    norm_by_vee,
    norm_virtual,
    permutation_character,
    restriction_matrix,
    vee_inverse,
)
from .vchar import VirtualCharacter, chern_rep, lambda_op
from .zlattice import AbelianInvariants, IntLattice, _apply, lattice_sum

SUITES = ("paper-a4", "paper-q8", "paper-dp", "paper-c4c4", "paper-psl", "tambara", "norms")


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


class _Recorder:
    def __init__(self, suite: str):
        self.suite = suite
        self.checks: list[Check] = []

    def run(self, name: str, fn: Callable[[], tuple]) -> None:
        try:
            ok, detail = fn()
        except Exception as exc:  # reported, not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(self.suite, name, bool(ok), detail))


def _group(spec) -> FiniteGroup:
    return build_catalog_group(spec)


def _irr(t, i):
    return VirtualCharacter.irreducible(t, i)


def _match(G: FiniteGroup, pres: GradedPresentation, images: dict, depth: int):
    t = character_table(G)
    f = gamma_filtration(t, depth)
    rep = match_presentation(pres, f.lattices, {k: v.coeffs for k, v in images.items()}, ring_mul(t), VirtualCharacter.one(t).coeffs, depth)
    return rep.ok, "; ".join(rep.failures) or f"degrees 1..{depth} match"


def _in(f, n, x) -> bool:
    return f[n].contains(x.coeffs)


def _inv_list(invs) -> list[str]:
    return [str(i) for i in invs]


# ---------------------------------------------------------------------------


def suite_a4() -> list[Check]:
    r = _Recorder("paper-a4")
    G = _group(alternating4())
    t = character_table(G)
    f = gamma_filtration(t, 6)
    rho, theta = _irr(t, 1), _irr(t, 3)
    x, y = chern_rep(1, rho), chern_rep(2, theta)
    pres = GradedPresentation({"x": 1, "y": 2}, ["3*x", "12*y", "4*y + x^2"])
    r.run("graded ring matches Z[x,y]/(3x,12y,4y+x^2)", lambda: _match(G, pres, {"x": x, "y": y}, 6))
    r.run("3 c1(rho) = 0", lambda: (_in(f, 2, 3 * x), ""))
    r.run("C3(theta) = 0", lambda: (chern_rep(3, theta).is_zero(), ""))
    r.run("4 C2(theta) + C1(rho)^2 in Gamma^3", lambda: (_in(f, 3, 4 * y + x * x), ""))
    r.run("c2(theta) has order 12", lambda: (graded_image(f, y, 2).order == 12, f"order {graded_image(f, y, 2).order}"))
    one = VirtualCharacter.one(t)
    r.run("theta^2 = 1 + rho + rho' + 2 theta", lambda: (theta * theta == one + rho + _irr(t, 2) + 2 * theta, ""))
    r.run("lambda^2 theta = theta, lambda^3 theta = 1", lambda: (lambda_op(2, theta) == theta and lambda_op(3, theta) == one, ""))

    def saturation():
        v = is_saturated(G, 6)
        piece = saturated_filtration(G, 6).graded_invariants(2)
        ok = (not v.saturated) and v.first_failing_degree == 2 and piece == AbelianInvariants.from_divisors([6])
        return ok, f"saturated={v.saturated} first failing degree={v.first_failing_degree} F2/F3={piece}"

    r.run("not saturated, first failing degree 2, F^2/F^3 = Z/6", saturation)

    def mackey_failure():
        V = sylow_subgroup(G, 2)
        tV = V.table()
        fV = gamma_filtration(tV, 4)
        t1, t2 = _irr(tV, 1) - 1, _irr(tV, 2) - 1
        z = t1**3 + t2**3 + t1**2 * t2
        invariant = all(fV[4].contains((conjugate_character(z, V, g)[1] - z).coeffs) for g in range(G.order))
        m = restriction_matrix(G.whole(), V)
        image = IntLattice.from_generators([_apply(m, v) for v in f[3].basis], tV.r)
        hit = lattice_sum(image, fV[4]).contains(z.coeffs)
        return invariant and fV[3].contains(z.coeffs) and not hit, f"invariant={invariant} in restriction image={hit}"

    r.run("t1^3+t2^3+t1^2 t2 is invariant but not a restriction", mackey_failure)

    def stable():
        sat = saturated_filtration(G, 6)
        stab = stable_invariants(G, 6)
        pres = GradedPresentation({"z": 2, "t": 3, "u": 1}, ["2*z", "2*t", "3*u", "z^3 - t^2"])
        want = pres.expansion(6)
        have = [sat.graded_invariants(n) for n in range(7)]
        return stab == have == want, f"stable {_inv_list(stab)} saturated {_inv_list(have)}"

    r.run("stable elements reassemble the saturated ring (PSL(2,3) case)", stable)
    r.run("F^M inside Gamma^n for n = 1, 2, 3", lambda: _bounds(G))
    return r.checks


def _bounds(G: FiniteGroup):
    ms = [f_in_gamma_bound(G, n, 12) for n in (1, 2, 3)]
    return all(m is not None for m in ms), f"M = {ms}"


def suite_q8() -> list[Check]:
    r = _Recorder("paper-q8")
    G = _group(quaternion8())
    t = character_table(G)
    f = gamma_filtration(t, 6)
    x1, x2, y = chern_rep(1, _irr(t, 1)), chern_rep(1, _irr(t, 2)), chern_rep(2, _irr(t, 4))
    pres = GradedPresentation(
        {"x1": 1, "x2": 1, "y": 2}, ["2*x1", "2*x2", "8*y", "x1^2", "x2^2", "x1*x2 - 4*y"]
    )
    r.run("graded ring matches the presentation", lambda: _match(G, pres, {"x1": x1, "x2": x2, "y": y}, 6))
    r.run("c2(Delta) generates Z/8", lambda: (graded_image(f, y, 2).order == 8 and f.graded_invariants(2) == AbelianInvariants.from_divisors([8]), ""))
    r.run("saturated", lambda: (bool(is_saturated(G, 6)), str(is_saturated(G, 6))))
    r.run("F^M inside Gamma^n for n = 1, 2, 3", lambda: _bounds(G))
    return r.checks


def suite_dp() -> list[Check]:
    r = _Recorder("paper-dp")
    for p in (3, 5, 7):
        G = _group(dihedral(p))
        t = character_table(G)
        f = gamma_filtration(t, 6)
        x, y = chern_rep(1, _irr(t, 1)), chern_rep(2, _irr(t, 2))
        pres = GradedPresentation({"x": 1, "y": 2}, ["2*x", f"{p}*y", "x*y"])
        r.run(f"D{p}: graded ring matches Z[x,y]/(2x,{p}y,xy)", lambda G=G, pres=pres, x=x, y=y: _match(G, pres, {"x": x, "y": y}, 6))
        r.run(f"D{p}: saturated", lambda G=G: (bool(is_saturated(G, 6)), ""))
    r.run("D5: F^M inside Gamma^n for n = 1, 2, 3", lambda: _bounds(_group(dihedral(5))))
    return r.checks


def dual_generators(t, order: int) -> tuple[int, int]:
    """First pair of linear characters of the given order generating all linear characters."""
    lin = t.linear_indices()
    one = VirtualCharacter.one(t)

    def char_order(i):
        x, k = _irr(t, i), 1
        while x != one:
            x, k = x * _irr(t, i), k + 1
        return k

    cands = [i for i in lin if char_order(i) == order]
    for a in cands:
        for b in cands:
            if b <= a:
                continue
            span = {one.coeffs}
            xa = one
            for _ in range(order):
                xb = xa
                for _ in range(order):
                    span.add(xb.coeffs)
                    xb = xb * _irr(t, b)
                xa = xa * _irr(t, a)
            if len(span) == len(lin):
                return a, b
    raise ValueError("no generating pair")


def suite_c4c4() -> list[Check]:
    r = _Recorder("paper-c4c4")
    G = _group(product(cyclic(4), cyclic(4)))
    t = character_table(G)
    f = gamma_filtration(t, 6)
    a, b = dual_generators(t, 4)
    x, y = _irr(t, a) - 1, _irr(t, b) - 1
    pres = GradedPresentation({"x": 1, "y": 1}, ["4*x", "4*y", "2*x^2*y + 2*x*y^2", "x^4*y^2 - x^2*y^4"])
    r.run("graded ring in degrees <= 4 matches the presentation", lambda: _match(G, pres, {"x": x, "y": y}, 4))
    r.run("2x^2y + 2xy^2 in Gamma^4", lambda: (_in(f, 4, 2 * x * x * y + 2 * x * y * y), ""))
    r.run("x^4y^2 - x^2y^4 in Gamma^7", lambda: (_in(f, 7, x**4 * y**2 - x**2 * y**4), ""))
    r.run("saturated", lambda: (bool(is_saturated(G, 4)), ""))
    return r.checks


def suite_psl() -> list[Check]:
    r = _Recorder("paper-psl")
    G = _group(psl2(5))
    r.run("order 60", lambda: (G.order == 60, ""))
    r.run("Sylow-2 normalizer has order 12", lambda: (normalizer(G, sylow_subgroup(G, 2)).order == 12, ""))

    def combined():
        have = stable_invariants(G, 6)
        pres = GradedPresentation({"y1": 2, "z": 2, "t": 3, "u": 2}, ["3*y1", "2*z", "2*t", "5*u", "z^3 - t^2"])
        want = pres.expansion(6)
        return have == want, f"stable {_inv_list(have)} presentation {_inv_list(want)}"

    r.run("stable invariants match Z[y1,z,t,u]/(3y1,2z,2t,5u,z^3-t^2)", combined)

    def sylow5():
        rep = stable_element_subring(G, 5, 6)
        ok = True
        for n in range(1, 7):
            want = AbelianInvariants.from_divisors([5] if n % 2 == 0 else [])
            ok = ok and rep.invariants(n) == want
            if n % 2 == 0:
                ok = ok and all("^" in w for w in rep.degrees[n].witnesses)
        return ok, str([rep.degrees[n].witnesses for n in range(1, 7)])

    r.run("Sylow-5 invariants are Z/5 in even degrees, generated by powers", sylow5)

    def sylow2():
        rep = stable_element_subring(G, 2, 3)
        return (
            rep.invariants(2) == AbelianInvariants.from_divisors([2]) and rep.invariants(3) == AbelianInvariants.from_divisors([2]),
            f"{rep.invariants(2)}, {rep.invariants(3)}",
        )

    r.run("Sylow-2 invariants Z/2 in degrees 2 and 3", sylow2)
    return r.checks


def suite_tambara() -> list[Check]:
    r = _Recorder("tambara")
    specs = [cyclic(4), product(cyclic(2), cyclic(2)), cyclic(6), dihedral(3), quaternion8(), alternating4()]
    for spec in specs:
        def run(spec=spec):
            rep = tambara_axiom_suite(_group(spec))
            counts = ", ".join(f"{k} {v}" for k, v in sorted(rep.checks.items()))
            m = rep.minimal_failure()
            return rep.passed, counts if m is None else f"{m.axiom}: {m.description}"

        r.run(f"{spec}: axioms hold", run)
    return r.checks


NORM_INCLUSIONS = (
    (cyclic(4), "C2"),
    (product(cyclic(2), cyclic(2)), "C2"),
    (cyclic(9), "C3"),
    (product(cyclic(3), cyclic(3)), "C3"),
)


def inclusion(spec, sub: str) -> InclusionContext:
    """The first subgroup of the requested type (canonical order) inside spec."""
    from .cli import find_subgroup

    G = _group(spec)
    return InclusionContext(G.whole(), find_subgroup(G, sub))


def random_virtual(t, rng: random.Random, size: int = 2) -> VirtualCharacter:
    return VirtualCharacter(t, [rng.randint(-size, size) for _ in range(t.r)])


def suite_norms(samples: int = 200) -> list[Check]:
    r = _Recorder("norms")
    for spec, sub in NORM_INCLUSIONS:
        ctx = inclusion(spec, sub)
        tH, tK = ctx.tH, ctx.tK
        label = f"{sub} <= {spec}"

        def routes(ctx=ctx, tH=tH):
            rng = random.Random(7)
            bad = 0
            for _ in range(samples):
                x = random_virtual(tH, rng)
                if norm_by_subtraction(x, ctx) != norm_by_vee(x, ctx):
                    bad += 1
            return bad == 0, f"{bad} disagreements in {samples}"

        r.run(f"{label}: subtraction and vee routes agree", routes)

        def multiplicative(ctx=ctx, tH=tH):
            rng = random.Random(11)
            for _ in range(25):
                x, y = random_virtual(tH, rng, 1), random_virtual(tH, rng, 1)
                if norm_virtual(x * y, ctx) != norm_virtual(x, ctx) * norm_virtual(y, ctx):
                    return False, f"fails on {x} and {y}"
            return True, ""

        r.run(f"{label}: norm is multiplicative", multiplicative)
        r.run(f"{label}: norm maps Gamma^n into Gamma^(np)", lambda ctx=ctx: _norm_in_gamma(ctx))
        r.run(f"{label}: pY and C[G/H] - p - Y^(p-1) lie in Gamma^p", lambda ctx=ctx: _py_check(ctx))
        if ctx.p == 2:
            r.run(f"{label}: index-2 formula for -W", lambda ctx=ctx: _index_two(ctx))
    for spec, sub in ((cyclic(9), "C3"), (product(cyclic(3), cyclic(3)), "C3"), (cyclic(25), "C5")):
        ctx = inclusion(spec, sub)
        r.run(f"{sub} <= {spec}: chi(-W)_C = (-1)^|C| chi(W)_C", lambda ctx=ctx: _negation_sign(ctx))
    for gspec in (cyclic(2), cyclic(3), product(cyclic(2), cyclic(2))):
        for p in (2, 3):
            r.run(f"N from {gspec} to {gspec}xC{p} of rho - 1", lambda gspec=gspec, p=p: _evens_norm(gspec, p))
    return r.checks


def _norm_in_gamma(ctx: InclusionContext):
    fH = gamma_filtration(ctx.tH, 3)
    fK = gamma_filtration(ctx.tK, 3 * ctx.p)
    for n in (1, 2, 3):
        for v in fH[n].basis:
            N = norm_virtual(VirtualCharacter(ctx.tH, v), ctx)
            if not fK[n * ctx.p].contains(N.coeffs):
                return False, f"generator of degree {n} escapes"
    return True, ""


def quotient_character(ctx: InclusionContext) -> VirtualCharacter:
    """A nontrivial linear character of K trivial on H."""
    from .transfer import restrict

    one_H = VirtualCharacter.one(ctx.tH)
    for i in ctx.tK.linear_indices()[1:]:
        if restrict(_irr(ctx.tK, i), ctx.H, ctx.K) == one_H:
            return _irr(ctx.tK, i)
    raise ValueError("no character of the quotient")


def _py_check(ctx: InclusionContext):
    p = ctx.p
    fK = gamma_filtration(ctx.tK, p)
    Y = quotient_character(ctx) - 1
    perm = permutation_character(ctx.H, ctx.K)
    # C[G/H] - p = sum_i binom(p, i+1) Y^i; the top term Y^(p-1) has
    # coefficient 1 and in general only lies in Gamma^(p-1)
    literal = _in(fK, p, perm - p)
    corrected = _in(fK, p, perm - p - Y ** (p - 1))
    return _in(fK, p, p * Y) and corrected, f"C[G/H] - p in Gamma^p: {literal}"


def _index_two(ctx: InclusionContext):
    for i in range(ctx.tH.r):
        W = _irr(ctx.tH, i)
        inv = vee_inverse(chi_of_rep(W, ctx)).top()
        want = -chi_of_rep(W, ctx).top() + ctx.ind(W * ctx.coset_conj(W, 1))
        if inv != want:
            return False, f"fails on r{i}"
    return True, ""


def _negation_sign(ctx: InclusionContext):
    for i in range(ctx.tH.r):
        a = chi_of_rep(_irr(ctx.tH, i), ctx)
        b = vee_inverse(a)
        for rep in ctx.reps:
            if rep == 0:
                continue
            sign = -1 if bin(rep).count("1") % 2 else 1
            if rep == ctx.full:
                sign = -1
            if b[rep] != sign * a[rep]:
                return False, f"fails on r{i} at subset {rep:b}"
    return True, ""


def evens_norm_difference(gspec, p: int, i: int):
    """N(rho_i - 1) - (Z^p - Z Y^(p-1)) over G x C_p, with its filtration.

    Z = rho-bar - 1 for the extension of rho trivial on C_p and
    Y = sigma-bar - 1 for a character trivial on G.
    """
    from .transfer import restrict

    GG = _group(product(gspec, cyclic(p)))
    k = len(GG.components[0])
    H, C = factor_subgroup(GG, range(k - 1)), factor_subgroup(GG, [k - 1])
    ctx = InclusionContext(GG.whole(), H)
    tH, tK = ctx.tH, ctx.tK
    rho = _irr(tH, i)
    rho_bar = next(
        _irr(tK, j)
        for j in tK.linear_indices()
        if restrict(_irr(tK, j), H, ctx.K) == rho and restrict(_irr(tK, j), C, ctx.K) == VirtualCharacter.one(C.table())
    )
    Z, Y = rho_bar - 1, quotient_character(ctx) - 1
    N = norm_virtual(rho - 1, ctx)
    return N, N - (Z**p - Z * Y ** (p - 1)), gamma_filtration(tK, p + 1)


def _evens_norm(gspec, p: int):
    t = character_table(_group(gspec))
    for i in t.linear_indices()[1:]:
        N, diff, f = evens_norm_difference(gspec, p, i)
        if not f[p + 1].contains(diff.coeffs):
            return False, f"difference not in Gamma^{p + 1} for r{i}"
        if p == 2 and not diff.is_zero():
            return False, f"ungraded identity fails for r{i}"
    return True, ""


_RUNNERS = {
    "paper-a4": suite_a4,
    "paper-q8": suite_q8,
    "paper-dp": suite_dp,
    "paper-c4c4": suite_c4c4,
    "paper-psl": suite_psl,
    "tambara": suite_tambara,
    "norms": suite_norms,
}


def run_suite(name: str) -> list[Check]:
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(_RUNNERS[s]())
        return out
    if name not in _RUNNERS:
        raise KeyError(name)
    return _RUNNERS[name]()
