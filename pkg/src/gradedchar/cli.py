"""Command-line interface.

Group specs follow the grammar

    spec := atom ("x" atom)*
    atom := "C" n | "D" n | "Q8" | "A4" | "PSL(2," p ")"

with case-insensitive heads and free whitespace.  ``D n`` is the dihedral
group of order 2n.  Exit status: 0 on success, 1 when a verification suite
has a failing check, 2 on usage errors (bad spec, bad expression, a group
whose character table is not available).
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from typing import Optional

from . import __version__
from .chartab import TableUnavailable, character_table, structure_name, subgroup_name
from .group import (
    FiniteGroup,
    GroupError,
    GroupSpec,
    Subgroup,
    alternating4,
    build_catalog_group,
    center,
    conjugacy_classes_of_subgroups,
    cyclic,
    dihedral,
    product,
    psl2,
    quaternion8,
    subgroup_lattice,
)
from .vchar import NotARepresentation, VirtualCharacter, chern_rep


class UsageError(ValueError):
    pass


def report_schema() -> dict:
    """The JSON schema that every ``--json`` report satisfies."""
    from importlib.resources import files

    return json.loads(files("gradedchar").joinpath("schemas/report.schema.json").read_text())


# ---------------------------------------------------------------------------
# group specs


class SpecSyntaxError(UsageError):
    def __init__(self, message: str, offset: int, text: str):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}\n  {text}\n  {' ' * offset}^")


_ATOM = re.compile(r"(?i)(psl\(2,(\d+)\)|q8|a4|c(\d+)|d(\d+))")


def parse_group_spec(text: str) -> GroupSpec:
    """Parse a spec string; raises SpecSyntaxError or UsageError."""
    chars = [(c, i) for i, c in enumerate(text) if not c.isspace()]
    squeezed = "".join(c for c, _ in chars)

    def offset(k: int) -> int:
        return chars[k][1] if k < len(chars) else len(text)

    if not squeezed:
        raise SpecSyntaxError("empty group spec", 0, text)
    atoms = []
    k = 0
    while True:
        m = _ATOM.match(squeezed, k)
        if m is None:
            raise SpecSyntaxError("expected C<n>, D<n>, Q8, A4 or PSL(2,<p>)", offset(k), text)
        atoms.append((_atom_spec(m), offset(k)))
        k = m.end()
        if k == len(squeezed):
            break
        if squeezed[k] not in "xX":
            raise SpecSyntaxError("expected 'x' between factors", offset(k), text)
        k += 1
        if k == len(squeezed):
            raise SpecSyntaxError("missing factor after 'x'", offset(k), text)
    for spec, pos in atoms:
        try:
            spec.validate()
        except GroupError as exc:
            raise UsageError(f"{exc} (factor at offset {pos})") from exc
    specs = [s for s, _ in atoms]
    return specs[0] if len(specs) == 1 else product(*specs)


def _atom_spec(m: re.Match) -> GroupSpec:
    head = m.group(1).lower()
    if head.startswith("psl"):
        return psl2(int(m.group(2)))
    if head == "q8":
        return quaternion8()
    if head == "a4":
        return alternating4()
    if head.startswith("c"):
        return cyclic(int(m.group(3)))
    return dihedral(int(m.group(4)))


def _fingerprint(G: FiniteGroup) -> tuple:
    orders = sorted(G.element_orders)
    sizes = sorted(G.classes.sizes)
    return G.order, tuple(orders), tuple(sizes)


def find_subgroup(G: FiniteGroup, text: str) -> Subgroup:
    """First conjugacy-class representative (canonical order) of the given type."""
    target = build_catalog_group(parse_group_spec(text))
    name = structure_name(target)
    identifiable = not name.startswith("G")
    for H in subgroup_lattice(G, up_to_conjugacy=True):
        if H.order != target.order:
            continue
        local = H.parent if H.order == G.order else H.as_group()
        try:
            same = subgroup_name(H) == name
        except TableUnavailable:
            same = False
        if same or (not identifiable and _fingerprint(local) == _fingerprint(target)):
            return H
    raise UsageError(f"{G.name} has no subgroup isomorphic to {text}")


def subgroup_from_elements(G: FiniteGroup, text: str) -> Subgroup:
    """Subgroup generated by a comma-separated list of element indices or labels."""
    index = {lab: i for i, lab in enumerate(G.labels)}
    gens = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok.isdigit() and int(tok) < G.order:
            gens.append(int(tok))
        elif tok in index:
            gens.append(index[tok])
        else:
            raise UsageError(f"unknown element {tok!r}")
    return G.closure(gens)


# ---------------------------------------------------------------------------
# expression mini-language for --expr
#
#   expr   := term (("+" | "-") term)*
#   term   := factor ("*" factor)*
#   factor := ("-" factor) | power
#   power  := atom ("^" int)?
#   atom   := int | "r" | "r" int | "C_" int "(" expr ")" | "(" expr ")"
#
# r is an alias for r1; C_n(x) is the Chern element gamma^n(x - deg x) of an
# actual character x.

_TOKEN = re.compile(r"\s*(?:(\d+)|(C_\d+|c_\d+)|(r\d*)|([-+*^()]))")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(s: str) -> list[_Tok]:
    out, k = [], 0
    while k < len(s):
        if s[k].isspace():
            k += 1
            continue
        m = _TOKEN.match(s, k)
        if m is None or m.end() == k:
            raise UsageError(f"unexpected character {s[k]!r} at offset {k} in expression")
        num, chern, irr, op = m.groups()
        start = m.start(m.lastindex)
        if num:
            out.append(_Tok("int", num, start))
        elif chern:
            out.append(_Tok("chern", chern, start))
        elif irr:
            out.append(_Tok("irr", irr, start))
        else:
            out.append(_Tok(op, op, start))
        k = m.end()
    out.append(_Tok("end", "", len(s)))
    return out


class _ExprParser:
    def __init__(self, text: str, table):
        self.toks = _tokenize(text)
        self.k = 0
        self.table = table

    def peek(self) -> _Tok:
        return self.toks[self.k]

    def take(self, kind: Optional[str] = None) -> _Tok:
        t = self.toks[self.k]
        if kind is not None and t.kind != kind:
            raise UsageError(f"expected {kind!r} at offset {t.pos} in expression, found {t.text or 'end'!r}")
        self.k += 1
        return t

    def parse(self) -> VirtualCharacter:
        v = self.expr()
        self.take("end")
        return v

    def expr(self):
        v = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.factor()
        while self.peek().kind == "*":
            self.take()
            v = v * self.factor()
        return v

    def factor(self):
        if self.peek().kind == "-":
            self.take()
            return -self.factor()
        v = self.atom()
        if self.peek().kind == "^":
            self.take()
            v = v ** int(self.take("int").text)
        return v

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return VirtualCharacter.one(self.table, int(t.text))
        if t.kind == "irr":
            i = int(t.text[1:]) if len(t.text) > 1 else 1
            if i >= self.table.r:
                raise UsageError(f"r{i} out of range: the table has {self.table.r} irreducibles")
            return VirtualCharacter.irreducible(self.table, i)
        if t.kind == "chern":
            n = int(t.text[2:])
            self.take("(")
            x = self.expr()
            self.take(")")
            try:
                return chern_rep(n, x)
            except NotARepresentation as exc:
                raise UsageError(str(exc)) from exc
        if t.kind == "(":
            v = self.expr()
            self.take(")")
            return v
        raise UsageError(f"unexpected {t.text or 'end'!r} at offset {t.pos} in expression")


def parse_expression(text: str, table) -> VirtualCharacter:
    return _ExprParser(text, table).parse()


# ---------------------------------------------------------------------------
# commands


def _group(text: str) -> FiniteGroup:
    return build_catalog_group(parse_group_spec(text))


def _table(G: FiniteGroup):
    try:
        return character_table(G)
    except TableUnavailable as exc:
        raise UsageError(f"character table of {G.name} is not available: {exc}") from exc


def cmd_group_info(args) -> tuple[dict, str]:
    G = _group(args.spec)
    subs = conjugacy_classes_of_subgroups(G) if G.order <= 200 else None
    data = {
        "group": G.name,
        "order": G.order,
        "exponent": G.exponent,
        "abelian": G.is_abelian,
        "classes": len(G.classes.reps),
        "class_sizes": list(G.classes.sizes),
        "center_order": center(G).order,
        "subgroups": None if subs is None else sum(len(c) for c in subs),
        "subgroup_classes": None if subs is None else len(subs),
    }
    lines = [f"{G.name}: order {G.order}, exponent {G.exponent}, {'abelian' if G.is_abelian else 'nonabelian'}"]
    lines.append(f"  conjugacy classes: {data['classes']} (sizes {data['class_sizes']})")
    lines.append(f"  center: order {data['center_order']}")
    if subs is not None:
        lines.append(f"  subgroups: {data['subgroups']} in {data['subgroup_classes']} conjugacy classes")
    return data, "\n".join(lines)


def cmd_table(args) -> tuple[dict, str]:
    G = _group(args.spec)
    t = _table(G)
    return t.to_json(), t.to_text()


def cmd_graded(args) -> tuple[dict, str]:
    from .filtration import graded_ring_report

    G = _group(args.spec)
    rep = graded_ring_report(_table(G), args.depth)
    return rep.to_json(), rep.to_text()


def cmd_saturated(args) -> tuple[dict, str]:
    from .saturation import SaturationError, is_saturated, saturated_filtration

    G = _group(args.spec)
    _table(G)
    try:
        f = saturated_filtration(G, args.depth)
    except SaturationError as exc:
        raise UsageError(str(exc)) from exc
    v = is_saturated(G, args.depth)
    data = f.to_json()
    data["saturated"] = v.saturated
    data["first_failing_degree"] = v.first_failing_degree
    lines = [f"saturated graded ring of {G.name} (degrees 0..{args.depth})"]
    for d in data["degrees"]:
        extra = f"; beyond Gamma from {', '.join(d['contributing_subgroups'])}" if d["contributing_subgroups"] else ""
        lines.append(f"  degree {d['degree']}: {d['summary']}{extra}")
    if v.saturated:
        lines.append("  saturated: yes")
    else:
        lines.append(f"  saturated: no (graded map fails first in degree {v.first_failing_degree})")
    return data, "\n".join(lines)


def cmd_stable(args) -> tuple[dict, str]:
    from .saturation import NonabelianSylow, stable_element_subring

    G = _group(args.spec)
    if G.order % args.p:
        raise UsageError(f"{args.p} does not divide the order of {G.name}")
    try:
        rep = stable_element_subring(G, args.p, args.depth)
    except NonabelianSylow as exc:
        raise UsageError(str(exc)) from exc
    data = rep.to_json()
    data["group"] = G.name
    lines = [
        f"stable elements of {G.name} at p = {args.p}: Sylow {data['sylow']['type']}, "
        f"normalizer of order {data['normalizer']['order']}"
    ]
    for d in data["degrees"]:
        w = f" generated by {', '.join(d['witnesses'])}" if d["witnesses"] else ""
        lines.append(f"  degree {d['degree']}: {d['summary']}{w}")
    return data, "\n".join(lines)


def cmd_norm(args) -> tuple[dict, str]:
    from .transfer import InclusionContext, TransferError, norm_virtual, tensor_induce

    G = _group(args.spec)
    if (args.sub is None) == (args.sub_elements is None):
        raise UsageError("give exactly one of --sub and --sub-elements")
    H = find_subgroup(G, args.sub) if args.sub is not None else subgroup_from_elements(G, args.sub_elements)
    _table(G)
    tH = H.table()
    x = parse_expression(args.expr, tH)
    K = G.whole()
    try:
        ctx = InclusionContext(K, H)
    except TransferError:
        ctx = None
    if ctx is not None:
        y = norm_virtual(x, ctx)
        method = "prime-index norm (subtraction and vee routes agree)"
    elif x.is_actual():
        y = tensor_induce(x, H, K)
        method = "tensor induction"
    else:
        raise UsageError("virtual norms need a normal subgroup of prime index at most 7")
    data = {
        "group": G.name,
        "subgroup": {"type": subgroup_name(H), "order": H.order, "elements": [G.labels[g] for g in H.elements]},
        "expression": args.expr,
        "input": list(x.coeffs),
        "norm": list(y.coeffs),
        "norm_text": repr(y),
        "degree": y.augmentation(),
        "method": method,
    }
    text = f"N from {subgroup_name(H)} to {G.name} of {args.expr} [{x!r}] = {y!r}   ({method})"
    return data, text


def cmd_verify(args) -> tuple[dict, str]:
    from .verify import run_suite

    checks = run_suite(args.suite)
    data = {
        "suite": args.suite,
        "passed": all(c.passed for c in checks),
        "checks": [c.to_json() for c in checks],
    }
    lines = [f"{'PASS' if c.passed else 'FAIL'}  [{c.suite}] {c.name}" + (f"  ({c.detail})" if c.detail and not c.passed else "") for c in checks]
    lines.append(f"{sum(c.passed for c in checks)}/{len(checks)} checks passed")
    return data, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    from .verify import SUITES

    p = argparse.ArgumentParser(
        prog="gradedchar",
        description="Graded character rings of finite groups.",
        epilog=(
            "Group specs: C<n>, D<n> (order 2n), Q8, A4, PSL(2,<p>), joined with x, e.g. C4xC4. "
            "Expressions (--expr): integers, r0 r1 ... (r means r1), + - * ^, parentheses and "
            "C_n(x) for the Chern element gamma^n(x - deg x)."
        ),
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a JSON report")

    g = sub.add_parser("group", help="group facts")
    gsub = g.add_subparsers(dest="action", required=True)
    gi = gsub.add_parser("info", help="order, classes and subgroup counts")
    gi.add_argument("spec")
    common(gi)
    gi.set_defaults(func=cmd_group_info)

    t = sub.add_parser("table", help="character table")
    t.add_argument("spec")
    common(t)
    t.set_defaults(func=cmd_table)

    for name, func, helptext in (
        ("graded", cmd_graded, "graded character ring"),
        ("saturated", cmd_saturated, "saturated graded ring and verdict"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("spec")
        sp.add_argument("--depth", type=int, default=6)
        common(sp)
        sp.set_defaults(func=func)

    st = sub.add_parser("stable", help="stable elements at one prime")
    st.add_argument("spec")
    st.add_argument("-p", type=int, required=True)
    st.add_argument("--depth", type=int, default=6)
    common(st)
    st.set_defaults(func=cmd_stable)

    n = sub.add_parser("norm", help="multiplicative transfer of a virtual character")
    n.add_argument("spec")
    n.add_argument("--sub", help="subgroup type, e.g. C2 (first conjugacy representative)")
    n.add_argument("--sub-elements", help="comma-separated element indices or labels generating the subgroup")
    n.add_argument("--expr", required=True)
    common(n)
    n.set_defaults(func=cmd_norm)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES) + ["all"])
    common(v)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "depth", 1) is not None and getattr(args, "depth", 1) < 1:
        print("error: --depth must be at least 1", file=sys.stderr)
        return 2
    try:
        data, text = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        report = {"command": args.command, "version": __version__, "result": data}
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text + "\n")
    if args.command == "verify" and not data["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
