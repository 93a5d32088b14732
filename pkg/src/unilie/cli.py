"""Command-line surface.

Verbs: verify, family, analyze, iso, orbit, classify, factorize, export.
Reports are a human-readable section followed by a fenced ```machine block
holding deterministic JSON, so scripted callers parse the fence and people
read the prose.  Exit codes: 0 success, 1 property fails, 2 usage error,
3 budget exceeded, 4 undetermined isomorphism question.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import families, serialize
from .algebra import (StructureTensor, ad_rank, center, centralizer,
                      check_witness, commutator, derivation_dim, from_graph,
                      is_heisenberg_type, j_basis, j_gram,
                      signed_perm_isomorphic, to_graph, totally_geodesic,
                      verify_uniform_basis)
from .enumeration import (UndeterminedPairError, _singular_central_direction,
                          classify_detailed, near_one_factorizations,
                          one_factorizations, sign_class_report)
from .graphs import (BudgetExceededError, ColoredDigraph,
                     DEFAULT_SEARCH_BUDGET,ColorPermAutomorphism,
                     colorings_equivalent, connected_components)

EXIT_OK = 0
EXIT_PROPERTY = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_UNDETERMINED = 4


class _Usage(Exception):
    pass


def _machine(payload: dict) -> str:
    return "```machine\n" + json.dumps(payload, sort_keys=True, indent=2) + "\n```\n"


def _emit(args, human: str, payload: dict, file_body: str | None = None) -> None:
    """Print the report; --output receives the loadable object body when a
    verb produces one, else the full report."""
    text = human.rstrip("\n") + "\n\n" + _machine(payload)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(file_body if file_body is not None else text)
    sys.stdout.write(text)


def _read_inputs(args, count=None):
    paths = args.input or []
    if count is not None and len(paths) != count:
        raise _Usage(f"this verb needs exactly {count} --input file(s), got {len(paths)}")
    objs = []
    for path in paths:
        try:
            with open(path) as fh:
                objs.append(serialize.parse_any(fh.read()))
        except OSError as exc:
            raise _Usage(f"cannot read {path}: {exc.strerror}")
    return objs


def _as_tensor(obj) -> StructureTensor:
    return from_graph(obj) if isinstance(obj, ColoredDigraph) else obj


def _as_graph(obj) -> ColoredDigraph:
    return to_graph(obj) if isinstance(obj, StructureTensor) else obj


def _report_dict(rep) -> dict:
    kinds = {"NonProper": "non-proper", "ColorCountMismatch": "color-count-mismatch",
             "NotRegular": "not-regular", "NotSurjective": "not-surjective"}
    violations = []
    for v in rep.violations:
        d = {"kind": kinds[type(v).__name__]}
        d.update(vars(v))
        violations.append(d)
    return {"is_uniform": rep.is_uniform, "p": rep.p, "q": rep.q,
            "r": rep.r, "s": rep.s, "violations": violations}


# ---------------------------------------------------------------------------
# verbs

def _cmd_verify(args) -> int:
    (obj,) = _read_inputs(args, 1)
    t = _as_tensor(obj)
    rep = verify_uniform_basis(t)
    lines = [f"uniformity check on q={t.q}, p={t.p}"]
    if rep.is_uniform:
        lines.append(f"uniform of type ({rep.p},{rep.q},{rep.r}), degree s={rep.s}")
    else:
        lines.append("not uniform:")
        for v in rep.violations:
            lines.append(f"  {v}")
    _emit(args, "\n".join(lines), _report_dict(rep))
    return EXIT_OK if rep.is_uniform else EXIT_PROPERTY


_FAMILIES = {
    "heisenberg": (families.heisenberg, 1),
    "free": (families.free_two_step, 1),
    "ring": (families.ring_algebra, 1),
    "quaternionic": (families.quaternionic, 0),
    "cyclic": (families.cyclic, 1),
    "kneser": (families.kneser, 2),
    "dihedral-bipartite": (families.dihedral_bipartite, 1),
}


def _cmd_family(args) -> int:
    name = args.name
    if name not in _FAMILIES:
        raise _Usage(f"unknown family '{name}'; choose from "
                     + ", ".join(sorted(_FAMILIES)))
    builder, arity = _FAMILIES[name]
    params = args.params
    if len(params) != arity:
        raise _Usage(f"family '{name}' takes {arity} integer parameter(s)")
    try:
        fargs = [int(x) for x in params]
    except ValueError:
        raise _Usage("family parameters must be integers")
    kwargs = {}
    if name == "ring" and args.variant == "primed":
        kwargs["primed"] = True
    if name == "quaternionic" and args.variant == "associate":
        kwargs["associate"] = True
    if args.variant and name not in ("ring", "quaternionic"):
        raise _Usage(f"family '{name}' has no variants")
    try:
        g = builder(*fargs, **kwargs)
    except ValueError as exc:
        raise _Usage(str(exc))
    rep = verify_uniform_basis(from_graph(g))
    payload = serialize.to_data(g)
    payload["family"] = name
    payload["type"] = [rep.p, rep.q, rep.r]
    body = _format_object(g, args.format)
    human = (f"family {name}({', '.join(params)})"
             + (f" [{args.variant}]" if args.variant else "")
             + f": type ({rep.p},{rep.q},{rep.r}), s={rep.s}\n\n" + body)
    _emit(args, human, payload, file_body=body)
    return EXIT_OK


def _format_object(obj, fmt: str) -> str:
    if fmt == "dot":
        return serialize.write_dot(_as_graph(obj))
    if fmt == "data":
        return serialize.to_json(obj)
    if isinstance(obj, ColoredDigraph):
        return serialize.write_graph(obj)
    return serialize.write_tensor(obj)


def _cmd_analyze(args) -> int:
    (obj,) = _read_inputs(args, 1)
    t = _as_tensor(obj)
    rep = verify_uniform_basis(t)
    lines = [f"analysis of q={t.q}, p={t.p} "
             f"({len(t.entries)} nonzero brackets)"]
    payload = {"uniform": _report_dict(rep)}
    lines.append(serialize.bracket_table(t).rstrip("\n") or "(abelian)")
    cdim = len(center(t))
    mdim = len(commutator(t))
    payload["center_dim"] = cdim
    payload["commutator_dim"] = mdim
    lines.append(f"center dimension {cdim}; commutator dimension {mdim}")
    if not rep.is_uniform:
        lines.append("not uniform; skipping the uniform-only invariants")
        for v in rep.violations:
            lines.append(f"  {v}")
        _emit(args, "\n".join(lines), payload)
        return EXIT_PROPERTY
    cents = [len(centralizer(t, i)) for i in range(1, t.q + 1)]
    ads = [ad_rank(t, i) for i in range(1, t.q + 1)]
    jranks = [j_basis(t, k).rank() for k in range(1, t.p + 1)]
    gram = j_gram(t)
    htype = is_heisenberg_type(t)
    payload.update({
        "centralizer_dims": cents, "ad_ranks": ads, "j_ranks": jranks,
        "j_gram": [[int(x) for x in row] for row in gram.rows],
        "heisenberg_type": htype,
        "derivation_dim": derivation_dim(t),
    })
    lines.append(f"type ({rep.p},{rep.q},{rep.r}), degree s={rep.s}")
    lines.append(f"centralizer dims {cents}; ad ranks {ads}; J ranks {jranks}")
    lines.append(f"J gram diagonal {[int(gram[(k, k)]) for k in range(t.p)]}"
                 f" (expect all {2 * rep.r})")
    lines.append(f"square-norm J identity: {'holds' if htype else 'fails'}")
    lines.append(f"derivation algebra dimension {payload['derivation_dim']}")
    g = to_graph(t)
    tg_rows = []
    for comp in connected_components(g):
        colors = sorted({k for (i, j, k) in g.arcs if i in comp and j in comp})
        res = totally_geodesic(t, comp, colors)
        tg_rows.append({"vertices": list(comp), "colors": colors,
                        "is_subalgebra": res.is_subalgebra,
                        "is_totally_geodesic": res.is_totally_geodesic})
        lines.append(f"component {list(comp)} with colors {colors}: "
                     f"subalgebra={res.is_subalgebra}, "
                     f"totally geodesic={res.is_totally_geodesic}")
    payload["totally_geodesic"] = tg_rows
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _cmd_iso(args) -> int:
    objs = _read_inputs(args)
    if len(objs) == 3:
        a, b, w = objs
        if not hasattr(w, "to_matrix"):
            raise _Usage("third --input must be a witness file")
        t1, t2 = _as_tensor(a), _as_tensor(b)
        try:
            res = check_witness(t1, t2, w)
        except ValueError as exc:
            raise _Usage(str(exc))
        payload = {"mode": "check-witness", "ok": res.ok,
                   "failures": list(res.failures)}
        human = ("witness check: " + ("all brackets intertwined"
                 if res.ok else "fails at " + ", ".join(res.failures)))
        _emit(args, human, payload)
        return EXIT_OK if res.ok else EXIT_PROPERTY
    if len(objs) != 2:
        raise _Usage("iso needs two object files, plus an optional witness file")
    a, b = objs
    if isinstance(a, ColoredDigraph) and isinstance(b, ColoredDigraph):
        if (a.q, a.p) != (b.q, b.p):
            _emit(args, "inequivalent: (q, p) differ",
                  {"mode": "coloring-equivalence", "equivalent": False,
                   "reason": "shape"})
            return EXIT_PROPERTY
        wit = colorings_equivalent(a, b, strict=args.strict_equivalence,
                                   budget=args.budget)
        if wit is not None:
            payload = {"mode": "coloring-equivalence", "equivalent": True,
                       "vertex_images": list(wit.vertex_images),
                       "color_images": list(wit.color_images)}
            _emit(args, "equivalent colorings\nvertex images "
                  + " ".join(map(str, wit.vertex_images)) + "\ncolor images "
                  + " ".join(map(str, wit.color_images)), payload)
            return EXIT_OK
        _emit(args, "inequivalent colorings (exhaustive search)",
              {"mode": "coloring-equivalence", "equivalent": False,
               "reason": "exhausted"})
        return EXIT_PROPERTY
    t1, t2 = _as_tensor(a), _as_tensor(b)
    if (t1.p, t1.q) != (t2.p, t2.q):
        _emit(args, "distinct: (p, q) differ",
              {"mode": "signed-perm", "isomorphic": False,
               "certificate": {"kind": "dimension-split",
                               "left": [t1.p, t1.q], "right": [t2.p, t2.q]}})
        return EXIT_PROPERTY
    w = signed_perm_isomorphic(t1, t2, budget=args.budget)
    if w is not None:
        payload = {"mode": "signed-perm", "isomorphic": True,
                   "witness": serialize.to_data(w)}
        _emit(args, "isomorphic via signed permutation\n\n"
              + serialize.write_witness(w, t1.q, t1.p), payload)
        return EXIT_OK
    d1, d2 = derivation_dim(t1), derivation_dim(t2)
    if d1 != d2:
        _emit(args, f"distinct: derivation algebra dimensions {d1} vs {d2}",
              {"mode": "signed-perm", "isomorphic": False,
               "certificate": {"kind": "derivation-dimension",
                               "left": d1, "right": d2}})
        return EXIT_PROPERTY
    h1, h2 = is_heisenberg_type(t1), is_heisenberg_type(t2)
    if h1 != h2:
        other = t2 if h1 else t1
        d = _singular_central_direction(other)
        if d is not None:
            _emit(args, "distinct: one side satisfies the square-norm J "
                  f"identity, the other has singular central direction {list(d)}",
                  {"mode": "signed-perm", "isomorphic": False,
                   "certificate": {"kind": "central-direction",
                                   "direction": list(d)}})
            return EXIT_PROPERTY
    _emit(args, "undetermined: no signed-permutation witness and no "
          "separating certificate",
          {"mode": "signed-perm", "isomorphic": None})
    return EXIT_UNDETERMINED


def _cmd_orbit(args) -> int:
    (obj,) = _read_inputs(args, 1)
    t = _as_tensor(obj)
    try:
        report = sign_class_report(t, budget=args.budget)
    except ValueError as exc:
        _emit(args, f"sign-class analysis failed: {exc}", {"error": str(exc)})
        return EXIT_PROPERTY
    lines = [f"{len(report.orbit_representatives)} diagonal sign orbit(s), "
             f"{len(report.classes)} class(es) after signed-permutation merging"]
    cls_payload = []
    for n, sc in enumerate(report.classes, start=1):
        lines.append(f"class {n}: orbits {list(sc.members)}, square-norm "
                     f"identity {'holds' if sc.heisenberg else 'fails'}")
        lines.append("  representative signs "
                     + " ".join("+1" if s > 0 else "-1"
                                for s in _sign_vector(sc.representative)))
        cls_payload.append({"members": list(sc.members),
                            "heisenberg": sc.heisenberg,
                            "representative": serialize.to_data(sc.representative)})
    payload = {"orbit_count": len(report.orbit_representatives),
               "classes": cls_payload}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _sign_vector(t: StructureTensor):
    from .algebra import sign_vector
    return sign_vector(t)


def _cmd_classify(args) -> int:
    try:
        rows, certs = classify_detailed(args.qmax, budget=args.budget)
    except UndeterminedPairError as exc:
        payload = {"undetermined": True,
                   "left": serialize.to_data(exc.left),
                   "right": serialize.to_data(exc.right)}
        _emit(args, f"classification aborted: {exc}\n"
              "left candidate:\n" + serialize.bracket_table(exc.left)
              + "right candidate:\n" + serialize.bracket_table(exc.right),
              payload)
        return EXIT_UNDETERMINED
    header = f"{'case':>4}  {'(p,q,r)':<22} {'s':>2}  {'merged':>6}  family"
    lines = [f"{len(rows)} isomorphism classes with q <= {args.qmax}", header,
             "-" * len(header)]
    row_payload = []
    for r in rows:
        types = " = ".join(f"({p},{q},{rr})" for (p, q, rr) in r.types)
        fam = ", ".join(r.family) if r.family else "-"
        lines.append(f"{r.case:>4}  {types:<22} {r.s:>2}  {r.merged:>6}  {fam}")
        row_payload.append({
            "case": r.case, "types": [list(t) for t in r.types], "s": r.s,
            "merged": r.merged, "heisenberg": r.heisenberg,
            "family": list(r.family),
            "representative": serialize.to_data(r.representative)})
    lines.append("")
    lines.append("distinctness certificates for same-(p,q) pairs:")
    cert_payload = []
    for c in certs:
        cert_payload.append({"left": c.left, "right": c.right, "kind": c.kind,
                             "detail": [str(x) for x in c.detail]})
        if c.kind != "dimension-split":
            lines.append(f"  cases {c.left} vs {c.right}: {c.kind} {c.detail}")
    payload = {"qmax": args.qmax, "classes": row_payload,
               "certificates": cert_payload}
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _cmd_factorize(args) -> int:
    n = args.n
    try:
        report = (one_factorizations(n, budget=args.budget) if n % 2 == 0
                  else near_one_factorizations(n, budget=args.budget))
    except ValueError as exc:
        raise _Usage(str(exc))
    lines = [f"{report.kind}s of the complete graph on {n} vertices:",
             f"{report.labeled_count} labeled, "
             f"{len(report.classes)} up to equivalence"]
    payload = {"n": n, "kind": report.kind,
               "labeled_count": report.labeled_count,
               "classes": [serialize.to_data(c) for c in report.classes]}
    for idx, c in enumerate(report.classes, start=1):
        lines.append(f"class {idx}:")
        for (t, h, k) in c.sorted_arcs():
            lines.append(f"  {t} {h} {k}")
    _emit(args, "\n".join(lines), payload)
    return EXIT_OK


def _cmd_export(args) -> int:
    (obj,) = _read_inputs(args, 1)
    body = _format_object(obj, args.format)
    payload = serialize.to_data(obj)
    _emit(args, body, payload, file_body=body)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unilie",
        description="uniformly colored digraphs and their nilpotent Lie algebras")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, fmt_default="text"):
        p.add_argument("--input", action="append",
                       help="input file (repeatable where a verb takes several)")
        p.add_argument("--output", help="also write the report to this file")
        p.add_argument("--format", choices=("text", "dot", "data"),
                       default=fmt_default)
        p.add_argument("--budget", type=int, default=DEFAULT_SEARCH_BUDGET,
                       help="search node budget before aborting with exit 3")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker count for enumeration phases; results "
                            "are identical for any value")
        p.add_argument("--strict-equivalence", action="store_true",
                       help="make graph equivalence respect arc directions")

    sub_verify = sub.add_parser("verify", help="uniformity report")
    common(sub_verify)
    sub_family = sub.add_parser("family", help="emit a construction")
    sub_family.add_argument("name")
    sub_family.add_argument("params", nargs="*")
    sub_family.add_argument("--variant", choices=("primed", "associate"))
    common(sub_family)
    sub_analyze = sub.add_parser("analyze", help="full structure dossier")
    common(sub_analyze)
    sub_iso = sub.add_parser("iso", help="equivalence/isomorphism/witness check")
    common(sub_iso)
    sub_orbit = sub.add_parser("orbit", help="diagonal sign classes")
    common(sub_orbit)
    sub_classify = sub.add_parser("classify", help="small-q classification")
    sub_classify.add_argument("--qmax", type=int, default=5)
    common(sub_classify)
    sub_fact = sub.add_parser("factorize", help="matching factorizations of K_n")
    sub_fact.add_argument("n", type=int)
    common(sub_fact)
    sub_export = sub.add_parser("export", help="rewrite an object in a format")
    common(sub_export, fmt_default="dot")
    return parser


_DISPATCH = {
    "verify": _cmd_verify,
    "family": _cmd_family,
    "analyze": _cmd_analyze,
    "iso": _cmd_iso,
    "orbit": _cmd_orbit,
    "classify": _cmd_classify,
    "factorize": _cmd_factorize,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.jobs is not None and args.jobs < 1:
        sys.stderr.write("--jobs must be at least 1\n")
        return EXIT_USAGE
    try:
        return _DISPATCH[args.verb](args)
    except _Usage as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except serialize.ParseError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BudgetExceededError as exc:
        sys.stderr.write(f"budget exceeded: visited {exc.visited} nodes "
                         f"with budget {exc.budget}\n")
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
