"""Command-line interface.

Exit codes: 0 success or check passed, 1 check found a counterexample
(a replayable JSON document is written), 2 bad input or configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import serialization as ser
from .aggregators import DistanceBased, aggregate, parse_rule
from .axioms import AXIOMS, Outcomes, axiom_matrix, check_axiom
from .constraints import parse_constraint, parse_constraints
from .core import NULL, Profile, Schema
from .folang import FRAGMENT_NAMES, answer, parse_formula, parse_query
from .lifting import check_lifting, verify_prop1, verify_prop3
from .oracle import SpaceSpec, enum_profiles, enum_queries
from .preservation import check_commutes, common_universe


class UsageError(ValueError):
    pass


# ----------------------------------------------------------- helpers


def parse_schema(text: str) -> Schema:
    """``P/2,Q/1`` -> Schema."""
    symbols = {}
    for part in text.split(","):
        name, sep, arity = part.strip().partition("/")
        if not sep or not name:
            raise UsageError(f"bad schema entry {part!r}; expected NAME/ARITY")
        symbols[name] = int(arity)
    return Schema(symbols)


def parse_perm(text: str) -> dict:
    """``a:b,b:a`` -> {"a": "b", "b": "a"}."""
    out = {}
    for part in text.split(","):
        src, sep, dst = part.partition(":")
        if not sep:
            raise UsageError(f"bad permutation entry {part!r}; expected FROM:TO")
        out[src.strip()] = dst.strip()
    return out


def space_from_args(args) -> SpaceSpec:
    cfg = {}
    if args.config:
        cfg = ser.read_json(args.config)
        if not isinstance(cfg, dict):
            raise UsageError("space config must be a JSON object")
    schema = parse_schema(args.schema) if args.schema else (
        ser.schema_from_json(cfg["schema"]) if "schema" in cfg else None)
    if schema is None:
        raise UsageError("a space needs a schema (--schema or config)")
    domain = args.domain.split(",") if args.domain else cfg.get("domain")
    if not domain:
        raise UsageError("a space needs a domain (--domain or config)")
    lines = list(args.space_constraint or []) + list(cfg.get("constraints", []))
    constraints = tuple(parse_constraint(c) for c in lines)
    for c in constraints:
        c.validate(schema)
    pick = lambda flag, key, default: flag if flag is not None else cfg.get(key, default)  # noqa: E731
    mode = "sampled" if args.sampled else cfg.get("mode", "exhaustive")
    return SpaceSpec(schema, tuple(domain), int(pick(args.max_tuples, "max_tuples", 2)),
                     agents=int(pick(args.agents, "agents", 2)), constraints=constraints,
                     mode=mode, seed=int(pick(args.seed, "seed", 0)),
                     count=int(pick(args.count, "count", 100)),
                     cap=int(pick(args.cap, "cap", 10 ** 6)))


def add_space_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("profile space")
    g.add_argument("--config", help="JSON file with schema, domain, max_tuples, agents, ...")
    g.add_argument("--schema", help="relation symbols, e.g. P/2,Q/1")
    g.add_argument("--domain", help="comma-separated domain values")
    g.add_argument("--max-tuples", type=int, dest="max_tuples")
    g.add_argument("--agents", type=int)
    g.add_argument("--space-constraint", action="append",
                   help="keep only instances satisfying this constraint (repeatable)")
    g.add_argument("--sampled", action="store_true", help="sample profiles instead of enumerating")
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int, help="number of sampled profiles")
    g.add_argument("--cap", type=int, help="largest exhaustive space allowed")


def emit(text: str, path=None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _profiles_json(profiles) -> list:
    return [[ser.instance_to_json(d) for d in p] for p in profiles]


def _profiles_from(doc, schema) -> list:
    return [Profile(ser.instance_from_json(schema, d) for d in p) for p in doc["profiles"]]


def _value_text(v) -> str:
    return "null" if v is NULL else v


# ----------------------------------------------------------- commands


def cmd_aggregate(args) -> int:
    p, consts = ser.load_profile(args.input)
    rule = parse_rule(args.rule)
    if args.constraints:
        if not isinstance(rule, DistanceBased):
            raise UsageError("--constraints only applies to the distance rule")
        cs = parse_constraints(Path(args.constraints).read_text(encoding="utf-8"))
        for c in cs:
            c.validate(p.schema)
        rule = DistanceBased(constraints=tuple(cs))
    winners = aggregate(rule, p).winners
    if args.tie == "lex":
        winners = winners[:1]
    doc = {"rule": args.rule, "schema": ser.schema_to_json(p.schema),
           "instances": [ser.instance_to_json(w) for w in winners]}
    if consts:
        doc["consts"] = sorted(consts)
    emit(ser.dumps(doc), args.output)
    return 0


def cmd_query(args) -> int:
    p, consts = ser.load_profile(args.input)
    q = parse_query(args.query, p.schema, consts)
    if args.agent is not None and not 1 <= args.agent <= p.n:
        raise UsageError(f"--agent must be in 1..{p.n}")
    agents = [args.agent] if args.agent else list(range(1, p.n + 1))
    universe = None
    if args.universe == "common":
        universe = common_universe(p)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    tagged = len(agents) > 1
    for i in agents:
        for row in answer(p.agent(i), q, universe):
            cells = [_value_text(v) for v in row]
            w.writerow([i, *cells] if tagged else cells)
    emit(buf.getvalue(), args.output)
    return 0


def _axiom_universe(space: SpaceSpec, full: bool):
    if not full:
        return None
    return {name: space.rows(name) for name in space.schema.names}


def _check_axiom(args) -> int:
    space = space_from_args(args)
    rule = parse_rule(args.rule)
    profiles = list(enum_profiles(space))
    perms = [parse_perm(t) for t in args.perm or []]
    if args.axiom == "NP" and not perms:
        if len(space.domain) < 2:
            raise UsageError("NP needs --perm or a domain with two values")
        a, b = space.domain[:2]
        perms = [{a: b, b: a}]
    universe = _axiom_universe(space, args.full_universe)
    rep = check_axiom(args.axiom, rule, profiles, universe, perms)
    if rep.passed:
        print(f"pass: {args.axiom} holds for {args.rule} on {len(profiles)} profiles "
              f"({space.describe()})")
        return 0
    w = rep.witness
    doc = {"kind": "axiom", "axiom": args.axiom, "rule": args.rule,
           "schema": ser.schema_to_json(space.schema),
           "profiles": _profiles_json(rep.replay_space),
           "universe": None if universe is None else
           {k: [ser.encode_row(r) for r in v] for k, v in universe.items()},
           "permutations": [{k: v for k, v in r.items()} for r in perms]}
    for key in ("symbol", "tuple", "other_tuple"):
        if key in w:
            doc[key] = ser.encode_row(w[key]) if key != "symbol" else w[key]
    if "agent_order" in w:
        doc["agent_order"] = list(w["agent_order"])
    emit(ser.dumps(doc), args.output)
    print(f"counterexample: {rep}", file=sys.stderr)
    return 1


def _constraint_from_args(args, schema: Schema):
    if bool(args.constraint) == bool(args.formula):
        raise UsageError("give exactly one of --constraint or --formula")
    if args.constraint:
        c = parse_constraint(args.constraint)
        c.validate(schema)
        return c, {"constraint": args.constraint}
    consts = tuple(args.consts.split(",")) if args.consts else ()
    phi = parse_formula(args.formula, schema, consts)
    return phi, {"formula": str(phi), "consts": list(consts)}


def _check_lifting(args) -> int:
    space = space_from_args(args)
    rule = parse_rule(args.rule)
    c, meta = _constraint_from_args(args, space.schema)
    rep = check_lifting(rule, c, enum_profiles(space), reading=args.reading)
    if rep.lifted:
        print(f"pass: {rep}")
        return 0
    doc = {"kind": "lifting", "rule": args.rule, "reading": args.reading,
           "schema": ser.schema_to_json(space.schema), "profiles": _profiles_json([rep.profile]),
           "winner": ser.instance_to_json(rep.winner), **meta}
    emit(ser.dumps(doc), args.output)
    print(f"counterexample: {rep}", file=sys.stderr)
    return 1


def _check_commute(args) -> int:
    space = space_from_args(args)
    rule = parse_rule(args.rule)
    consts = tuple(args.consts.split(",")) if args.consts else ()
    if args.query:
        queries = [parse_query(args.query, space.schema, consts)]
    else:
        queries = list(enum_queries(space.schema, args.fragment, args.max_depth,
                                    args.query_seed, args.queries))
    out = Outcomes(rule)
    checked = 0
    for p in enum_profiles(space):
        for q in queries:
            checked += 1
            rep = check_commutes(rule, q, p, args.universe, outcomes=out)
            if not rep.commutes:
                doc = {"kind": "commute", "rule": args.rule, "query": str(q),
                       "consts": list(consts), "universe": args.universe,
                       "schema": ser.schema_to_json(space.schema),
                       "profiles": _profiles_json([p]),
                       "left": [[ser.encode_row(r) for r in a.rows()] for a in rep.left],
                       "right": [[ser.encode_row(r) for r in a.rows()] for a in rep.right]}
                emit(ser.dumps(doc), args.output)
                print(f"diverges: {q} after {checked} checks", file=sys.stderr)
                return 1
    print(f"pass: {args.rule} commutes on {len(queries)} queries x profiles "
          f"({checked} checks, {space.describe()})")
    return 0


def cmd_check(args) -> int:
    return {"axiom": _check_axiom, "lifting": _check_lifting,
            "commute": _check_commute}[args.kind](args)


def cmd_replay(args) -> int:
    doc = ser.read_json(args.document)
    if not isinstance(doc, dict) or doc.get("kind") not in ("axiom", "lifting", "commute"):
        raise UsageError("not a counterexample document")
    schema = ser.schema_from_json(doc["schema"])
    profiles = _profiles_from(doc, schema)
    rule = parse_rule(doc["rule"])
    kind = doc["kind"]
    if kind == "axiom":
        universe = doc.get("universe")
        if universe is not None:
            universe = {k: [tuple(ser.decode_value(v) for v in r) for r in rows]
                        for k, rows in universe.items()}
        rep = check_axiom(doc["axiom"], rule, profiles, universe, doc.get("permutations", []))
        bad = not rep.passed
        label = f"{doc['axiom']} {doc['rule']}"
    elif kind == "lifting":
        if "constraint" in doc:
            c = parse_constraint(doc["constraint"])
        else:
            c = parse_formula(doc["formula"], schema, tuple(doc.get("consts", [])))
        rep = check_lifting(rule, c, profiles, reading=doc.get("reading", "all"))
        bad = not rep.lifted
        label = f"lifting {doc['rule']}"
    else:
        q = parse_query(doc["query"], schema, tuple(doc.get("consts", [])))
        bad = any(not check_commutes(rule, q, p, doc.get("universe", "common")).commutes
                  for p in profiles)
        label = f"commute {doc['rule']} {doc['query']}"
    print(f"{'reproduced' if bad else 'not reproduced'}: {label}")
    return 1 if bad else 0


REPORT_RULES = ("union", "intersection", "majority", "dictator:1", "oligarchy:1,2",
                "avg-voter", "relwise-avg", "distance", "merge")


def _write_csv(path: Path, header: list, rows: list) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def cmd_report(args) -> int:
    from . import plotting
    from .constraints import FunctionalDependency, ReferentialConstraint

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    # axiom matrix on a small unary space with three agents
    schema = Schema({"P": 1})
    space = SpaceSpec(schema, ("a", "b"), 2, agents=3)
    profiles = list(enum_profiles(space))
    rules = [parse_rule(r) for r in REPORT_RULES]
    labels = [r.describe() for r in rules]
    universe = {"P": space.rows("P")}
    matrix = axiom_matrix(rules, profiles, AXIOMS, universe, [{"a": "b", "b": "a"}])
    _write_csv(out / "axiom_matrix.csv", ["rule", *AXIOMS],
               [[lab, *("pass" if matrix[(lab, a)].passed else "fail" for a in AXIOMS)]
                for lab in labels])
    plotting.axiom_matrix_figure(matrix, labels, list(AXIOMS), out / "axiom_matrix.png")

    # quota lifting predictions
    lift_rows = []
    fd = FunctionalDependency("P", (1,), (2,))
    sp = SpaceSpec(Schema({"P": 2}), ("a", "b", "c"), 2, agents=3, constraints=(fd,))
    for label, pred, rep in verify_prop1(3, fd, enum_profiles(sp)).rows:
        lift_rows.append(("fd P: 1 -> 2", label, pred, rep.lifted, rep.profiles_checked))
    rc = ReferentialConstraint("P1", "P2", 1)
    sp = SpaceSpec(Schema({"P1": 2, "P2": 2}), ("a", "b"), 2, agents=2, constraints=(rc,))
    for label, pred, rep in verify_prop3(2, rc, enum_profiles(sp)).rows:
        lift_rows.append((str(rc), label, pred, rep.lifted, rep.profiles_checked))
    _write_csv(out / "lifting.csv", ["constraint", "quota", "predicted", "observed", "profiles"],
               lift_rows)
    plotting.quota_lifting_figure([(r[1], r[2], r[3]) for r in lift_rows], out / "lifting.png",
                                  "quota rules: predicted vs observed lifting")

    # commutation sweep
    schema = Schema({"P": 2})
    profiles = list(enum_profiles(SpaceSpec(schema, ("a", "b", "c"), 1, agents=2)))
    com_rows = []
    for rule_text, fragment in (("union", "exists-positive"), ("intersection", "exists-positive"),
                                ("intersection", "forall-positive"), ("merge", "cq"),
                                ("dictator:1", "fo"), ("majority", "fo")):
        rule = parse_rule(rule_text)
        queries = list(enum_queries(schema, fragment, 3, args.seed, args.queries))
        oc = Outcomes(rule)
        failed = sum(not check_commutes(rule, q, p, outcomes=oc).commutes
                     for p in profiles for q in queries)
        com_rows.append((rule_text, fragment, len(profiles) * len(queries), failed))
    _write_csv(out / "commutation.csv", ["rule", "fragment", "checks", "diverged"], com_rows)
    plotting.divergence_figure([(f"{r} / {f}", c, d) for r, f, c, d in com_rows],
                               out / "commutation.png", "aggregate-then-query vs query-then-aggregate")
    for name in ("axiom_matrix", "lifting", "commutation"):
        print(out / f"{name}.csv")
        print(out / f"{name}.png")
    return 0


# ----------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dbagg", description="Aggregate relational database instances.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("aggregate", help="aggregate a profile document")
    p.add_argument("--rule", required=True, help="e.g. majority, quota:2, dictator:1, merge")
    p.add_argument("--input", required=True)
    p.add_argument("--tie", choices=("all", "lex"), default="all")
    p.add_argument("--constraints", help="constraint file restricting the distance rule")
    p.add_argument("--output")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("query", help="answer a query on the instances of a document")
    p.add_argument("--query", required=True, help='e.g. "ans(x) :- exists y. P(x,y)"')
    p.add_argument("--input", required=True)
    p.add_argument("--agent", type=int, help="only this instance (1-based)")
    p.add_argument("--universe", choices=("adom", "common"), default="adom")
    p.add_argument("--output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("check", help="check an axiom, a lifting claim or commutation")
    csub = p.add_subparsers(dest="kind", required=True)
    c = csub.add_parser("axiom")
    c.add_argument("--axiom", required=True, choices=AXIOMS)
    c.add_argument("--rule", required=True)
    c.add_argument("--perm", action="append", help="value permutation for NP, e.g. a:b,b:a")
    c.add_argument("--full-universe", action="store_true",
                   help="neutrality and independence also range over tuples nobody holds")
    c.add_argument("--output")
    add_space_args(c)
    c = csub.add_parser("lifting")
    c.add_argument("--rule", required=True)
    c.add_argument("--constraint", help='e.g. "fd P: 1 -> 2"')
    c.add_argument("--formula", help="a first-order sentence")
    c.add_argument("--consts", help="comma-separated constants for --formula")
    c.add_argument("--reading", choices=("all", "some"), default="all")
    c.add_argument("--output")
    add_space_args(c)
    c = csub.add_parser("commute")
    c.add_argument("--rule", required=True)
    c.add_argument("--query", help="a single query instead of generated ones")
    c.add_argument("--fragment", choices=sorted(FRAGMENT_NAMES), default="fo")
    c.add_argument("--queries", type=int, default=50)
    c.add_argument("--max-depth", type=int, default=3, dest="max_depth")
    c.add_argument("--query-seed", type=int, default=0, dest="query_seed")
    c.add_argument("--consts")
    c.add_argument("--universe", choices=("common", "adom"), default="common")
    c.add_argument("--output")
    add_space_args(c)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("replay", help="re-run a counterexample document")
    p.add_argument("document")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("report", help="write CSV tables and PNG figures for a standard sweep")
    p.add_argument("--output-dir", required=True, dest="output_dir")
    p.add_argument("--queries", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
