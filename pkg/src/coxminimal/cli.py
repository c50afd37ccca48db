"""Command-line front end.

    coxminimal analyze GROUP
    coxminimal invariants GROUP [--degree-cap D] [-o FILE]
    coxminimal coxring GROUP [--invariants FILE] [--json FILE] [--svg FILE]
    coxminimal relations GROUP ...
    coxminimal gitfan GROUP ...
    coxminimal report FILE.json

GROUP is a group file or the name of a bundled fixture (``E8``,
``order32``...).  Exit codes: 0 success, 2 invalid input, 3 incomplete
(degree or step cap), 4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__, coxring, gitfan
from .cache import DiskCache, default_dir, digest, poly_from_json, poly_to_json
from .groupfile import InputError, build_group, parse_invariants, read_group_text, read_invariants_file
from .invariants import (
    IncompleteGenerators,
    InvariantError,
    accept_user_generators,
    certified_generators,
    check_complete,
    describe_element,
)
from .matgroup import GroupError
from .polyalg import Ring
from .polyalg.ideal import gb_stats, set_disk_cache

log = logging.getLogger("coxminimal")

SCHEMA = "coxminimal-report"
SCHEMA_VERSION = 1
FIXTURES = Path(__file__).parent / "fixtures"
FAN_LIMIT = 2000


class UsageError(ValueError):
    pass


def variable_names(n: int) -> list[str]:
    if n == 2:
        return ["x", "y"]
    if n == 4:
        return ["x", "y", "z", "w"]
    return [f"x{j + 1}" for j in range(n)]


def resolve_group(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    for cand in (FIXTURES / arg, FIXTURES / f"{arg}.grp", FIXTURES / Path(arg).name):
        if cand.is_file():
            return cand
    raise InputError(f"no group file or bundled fixture named {arg!r}")


def _fixture_invariants(group_path: Path) -> Path | None:
    p = group_path.with_suffix(".inv")
    return p if p.exists() else None


# -- session ------------------------------------------------------------------

class Session:
    """A loaded group with its ring, cache and the inputs that key the cache."""

    def __init__(self, args):
        self.path = resolve_group(args.group)
        self.text = self.path.read_text()
        self.G = build_group(read_group_text(self.text, str(self.path)))
        self.ring = Ring(variable_names(self.G.dim), self.G.field.conductor)
        root = getattr(args, "cache_dir", None) or default_dir()
        self.cache = DiskCache(root, digest("group", self.text)) if root else None
        set_disk_cache(self.cache)

    def generators(self, args):
        """(names, polys, source) of the starting invariants."""
        inv = args.invariants
        if inv == "auto":
            inv = None
        elif inv is None:
            inv = _fixture_invariants(self.path) if args.degree_cap is None else None
        if inv is not None:
            spec = read_invariants_file(inv)
            parsed = parse_invariants(spec, self.ring)
            names = [n for n, _ in parsed]
            polys = accept_user_generators(self.G, [f for _, f in parsed], names)
            check_complete(self.G, self.ring, polys, names)
            return names, polys, str(inv)
        key = digest("invariants", args.degree_cap)
        hit = self.cache.get("invariants", key) if self.cache else None
        if hit is not None:
            polys = [poly_from_json(self.ring, d) for d in hit]
        else:
            polys = certified_generators(self.G, self.ring, args.degree_cap)
            if self.cache:
                self.cache.put("invariants", key, [poly_to_json(f) for f in polys])
        return [f"phi{j + 1}" for j in range(len(polys))], polys, "computed"

    def close(self):
        set_disk_cache(None)
        if self.cache is not None:
            st = gb_stats()
            print(f"cache: {self.cache.hits} hits, {self.cache.misses} misses, {self.cache.corrupt} corrupt; "
                  f"groebner bases: {st['disk_hits']} from disk, {st['computed']} computed", file=sys.stderr)


# -- documents ----------------------------------------------------------------

def _abelian(factors) -> str:
    fs = [d for d in factors if d > 1]
    return " x ".join(f"Z/{d}" for d in fs) if fs else "trivial"


def group_doc(S: Session) -> dict:
    G = S.G
    juniors = []
    words = G.junior_words or []
    for i, k in enumerate(G.junior_representatives()):
        ed = G.eigen_data(k)
        juniors.append({
            "index": i + 1,
            "element": words[i] if i < len(words) else describe_element(G, k),
            "order": G.orders[k],
            "age": ed.age,
            "weights": list(ed.exponents),
            "class_size": len(G.classes[G.class_of[k]]),
        })
    return {
        "source": S.path.name,
        "order": G.order,
        "dimension": G.dim,
        "conductor": G.field.conductor,
        "classes": len(G.classes),
        "commutator_order": len(G.commutator),
        "abelianization": list(G.invariant_factors),
        "juniors": juniors,
        "generated_by_juniors": G.generated_by_juniors(),
        "class_group_torsion_free": G.class_group_torsion_free(),
        "symplectic": G.symplectic_form is not None,
    }


def cox_doc(pres: coxring.CoxPresentation, source: str) -> dict:
    gens = []
    for g in pres.generators:
        gens.append({
            "name": g.name,
            "boundary": g.boundary,
            "poly": str(g.poly) if g.poly is not None else None,
            "character": list(g.character) if g.character is not None else None,
            "exponents": list(g.exponents),
        })
    rels = pres.relations.gens if pres.relations is not None else []
    return {
        "invariants_source": source,
        "orders": pres.orders,
        "valuation_table": [[pres.names[j]] + list(row) for j, row in enumerate(pres.degrees)],
        "steps": [{"label": list(h.label), "tries": h.tries, "added": h.added} for h in pres.history],
        "generators": gens,
        "relation_ring": list(coxring.relation_ring(pres).names),
        "relations": [str(g) for g in rels],
        "relations_vanish": coxring.check_relations(pres),
        "lemma_checks": pres.lemma_checks,
    }


def _cone_doc(c: gitfan.Cone) -> dict:
    return {"rays": [list(r) for r in c.rays], "facets": [list(a) for a in c.facets] if c.exact else None}


def fan_doc(pres: coxring.CoxPresentation, limit: int = FAN_LIMIT) -> dict:
    degrees = [g.exponents for g in pres.generators]
    mov = gitfan.movable_cone(pres)
    m = pres.m
    full = mov.exact and mov.dim == m
    out = {"degrees": [list(d) for d in degrees], "movable_cone": _cone_doc(mov), "limit": limit,
           "movable_full": full}
    try:
        fan = gitfan.refinement_fan(degrees, pres.orders, max_chambers=limit)
        out["scope"] = "support"
    except gitfan.FanError as exc:
        if "chambers" not in str(exc):
            raise
        out["scope"] = "truncated"
        if not full:
            return out
        log.info("%s; restricting to the movable cone", exc)
        try:
            fan = gitfan.refinement_fan(degrees, pres.orders, within=mov, max_chambers=limit)
            out["scope"] = "movable"
        except gitfan.FanError as exc2:
            if "chambers" not in str(exc2):
                raise
            return out
    out["rays"] = [list(r) for r in fan.rays]
    out["walls"] = [list(w) for w in fan.walls]
    chambers = []
    names = [g.name for g in pres.generators]
    for k, c in enumerate(fan.chambers):
        inside = mov.contains(c.interior_point(), strict=True) if full else False
        entry = _cone_doc(c)
        entry["movable"] = inside
        if inside:
            subs = gitfan.unstable_locus_description(pres, fan, k)
            entry["unstable"] = [[names[j] for j in sub] for sub in subs]
        chambers.append(entry)
    out["chambers"] = chambers
    if out["scope"] == "support":
        alt = gitfan.movable_by_exclusion(fan)
        out["movable_by_exclusion"] = _cone_doc(alt) if alt is not None else None
    out["_fan"] = fan
    return out


def finalize(doc: dict) -> dict:
    """Drop in-memory helpers; the rest is plain JSON."""
    out = dict(doc)
    if "fan" in out:
        out["fan"] = {k: v for k, v in out["fan"].items() if not k.startswith("_")}
    return out


def dumps(doc: dict) -> str:
    return json.dumps(finalize(doc), indent=1, sort_keys=True, ensure_ascii=False) + "\n"


# -- rendering ----------------------------------------------------------------

def _yes(b) -> str:
    return "true" if b else "false"


def render_group(g: dict) -> list[str]:
    lines = [
        f"group {g['source']}: order {g['order']}, dimension {g['dimension']}, conductor {g['conductor']}",
        f"conjugacy classes: {g['classes']}",
        f"[G,G]: order {g['commutator_order']}",
        f"Ab(G): {_abelian(g['abelianization'])}",
        f"junior classes: {len(g['juniors'])}",
    ]
    if g["juniors"]:
        lines.append("   i  order  age  size  weights        element")
        for j in g["juniors"]:
            w = "(" + ", ".join(map(str, j["weights"])) + ")"
            lines.append(f"  {j['index']:>2}  {j['order']:>5}  {j['age']:>3}  {j['class_size']:>4}  {w:<14} {j['element']}")
    lines.append(f"generated_by_juniors: {_yes(g['generated_by_juniors'])}")
    lines.append(f"class_group_torsion_free: {_yes(g['class_group_torsion_free'])}")
    lines.append(f"symplectic form: {'preserved' if g['symplectic'] else 'none given'}")
    return lines


def render_table(c: dict) -> list[str]:
    m = len(c["orders"])
    head = "  " + "name".ljust(8) + "".join(f"nu{i + 1}".rjust(6) for i in range(m))
    lines = ["valuation table:", head]
    for row in c["valuation_table"]:
        lines.append("  " + row[0].ljust(8) + "".join(str(x).rjust(6) for x in row[1:]))
    lines.append("  " + "r".ljust(8) + "".join(str(r).rjust(6) for r in c["orders"]))
    return lines


def render_cox(c: dict) -> list[str]:
    lines = [f"invariants: {c['invariants_source']}"]
    lines += render_table(c)
    lines.append("steps:")
    for s in c["steps"]:
        ip, i = s["label"]
        extra = f", added {', '.join(s['added'])}" if s["added"] else ""
        lines.append(f"  ({ip},{i}): {s['tries']} tr{'y' if s['tries'] == 1 else 'ies'}{extra}")
    lines += render_generators(c)
    lines += render_relations(c)
    return lines


def render_generators(c: dict) -> list[str]:
    lines = [f"generators: {len(c['generators'])}"]
    for g in c["generators"]:
        exps = "(" + ", ".join(map(str, g["exponents"])) + ")"
        body = "boundary" if g["boundary"] else g["poly"]
        lines.append(f"  {g['name']:<6} t^{exps:<16} {body}")
    return lines


def render_relations(c: dict) -> list[str]:
    vars_ = ", ".join(c["relation_ring"])
    lines = [f"relations in {vars_}: {len(c['relations'])}"]
    lines += [f"  {r}" for r in c["relations"]]
    lines.append(f"relations vanish on the generators: {_yes(c['relations_vanish'])}")
    return lines


def render_fan(f: dict) -> list[str]:
    mov = f["movable_cone"]
    lines = ["movable cone: cone(" + ", ".join(str(tuple(r)) for r in mov["rays"]) + ")"]
    if not f["movable_full"]:
        lines[-1] += " (not full-dimensional)"
    alt = f.get("movable_by_exclusion", False)
    if alt is not False and (alt is None or sorted(alt["rays"]) != sorted(mov["rays"])):
        desc = "cone(" + ", ".join(str(tuple(r)) for r in alt["rays"]) + ")" if alt else "empty"
        lines.append(f"  cross-check (drop one generator at a time) gives {desc}")
    if f["scope"] == "truncated":
        lines.append(f"refinement fan: more than {f['limit']} chambers, not enumerated")
        return lines
    where = "" if f["scope"] == "support" else " (inside the movable cone)"
    lines.append(f"refinement fan{where}: {len(f['chambers'])} chambers, {len(f['rays'])} rays")
    lines.append("  rays: " + ", ".join(str(tuple(r)) for r in f["rays"]))
    for k, ch in enumerate(f["chambers"]):
        tag = " [movable]" if ch["movable"] else ""
        lines.append(f"  chamber {k}{tag}: cone(" + ", ".join(str(tuple(r)) for r in ch["rays"]) + ")")
        if ch.get("unstable") is not None:
            parts = ["V(" + ", ".join(n for n in _complement(f, sub)) + ")" for sub in ch["unstable"]]
            if len(parts) > 3:  # the full list is in the JSON
                parts = parts[:2] + [f"... ({len(parts)} coordinate subspaces)"]
            lines.append("    unstable locus: " + (" ∩ ".join(parts) if parts else "empty"))
    return lines


def _complement(f: dict, sub) -> list[str]:
    return [n for n in f["names"] if n not in sub]


def render(doc: dict) -> str:
    lines = []
    if "group" in doc:
        lines += render_group(doc["group"])
    if "coxring" in doc:
        lines.append("")
        lines += render_cox(doc["coxring"])
    if "fan" in doc:
        lines.append("")
        lines += render_fan(doc["fan"])
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------

def _doc(**parts) -> dict:
    return {"schema": SCHEMA, "version": SCHEMA_VERSION, **parts}


def _write(path, text: str) -> None:
    Path(path).write_text(text)


def cmd_analyze(args) -> int:
    S = Session(args)
    try:
        doc = _doc(group=group_doc(S))
    finally:
        S.close()
    print(render(doc), end="")
    if args.json:
        _write(args.json, dumps(doc))
    return 0


def cmd_invariants(args) -> int:
    S = Session(args)
    try:
        names, polys, _ = S.generators(argparse.Namespace(invariants="auto", degree_cap=args.degree_cap))
    finally:
        S.close()
    lines = [f"# invariants of the commutator subgroup of {S.path.name}",
             f"conductor: {S.ring.conductor}",
             "variables: " + ", ".join(S.ring.names)]
    for n, f in zip(names, polys):
        lines.append(f"{n}: {f}  # degree {f.total_degree()}, character {tuple(f.character)}")
    text = "\n".join(lines) + "\n"
    if args.output:
        _write(args.output, text)
    else:
        print(text, end="")
    return 0


def _presentation(S: Session, args):
    names, polys, source = S.generators(args)
    key = digest("coxring-state", *(str(f) for f in polys), *names)
    resume = None
    if args.resume:
        if S.cache is None:
            raise UsageError("--resume needs a cache directory (--cache-dir or COXMINIMAL_CACHE)")
        saved = S.cache.get("state", key)
        if saved is not None:
            resume = coxring.state_from_json(S.G, S.ring, saved)
            log.info("resuming after %d completed steps", resume.position)
        else:
            log.info("no saved state; starting from the beginning")

    def save(pres):
        if S.cache is not None:
            S.cache.put("state", key, coxring.state_to_json(pres))

    pres = coxring.run(S.G, S.ring, polys, names, threads=args.threads, resume=resume, on_step=save)
    return pres, source


def _full(args, with_fan: bool = True) -> dict:
    S = Session(args)
    try:
        pres, source = _presentation(S, args)
        doc = _doc(group=group_doc(S), coxring=cox_doc(pres, source))
        if with_fan:
            f = fan_doc(pres, args.max_chambers)
            f["names"] = [g.name for g in pres.generators]
            doc["fan"] = f
    finally:
        S.close()
    return doc


def _emit(args, doc: dict, text: str) -> None:
    print(text, end="")
    if args.json:
        _write(args.json, dumps(doc))
    if getattr(args, "svg", None):
        fan = doc.get("fan", {}).get("_fan")
        if fan is None or len(fan.degrees[0]) != 2:
            print("warning: the fan picture is only drawn in rank 2; no SVG written", file=sys.stderr)
        else:
            _write(args.svg, gitfan.svg(fan, title=doc["group"]["source"]))


def cmd_coxring(args) -> int:
    doc = _full(args)
    _emit(args, doc, render(doc))
    return 0


def cmd_relations(args) -> int:
    doc = _full(args, with_fan=False)
    _emit(args, doc, "\n".join(render_relations(doc["coxring"])) + "\n")
    return 0


def cmd_gitfan(args) -> int:
    doc = _full(args)
    lines = render_generators(doc["coxring"]) + [""] + render_fan(doc["fan"])
    _emit(args, doc, "\n".join(lines) + "\n")
    return 0


def cmd_report(args) -> int:
    doc = json.loads(Path(args.report).read_text())
    if doc.get("schema") != SCHEMA:
        raise InputError(f"{args.report} is not a {SCHEMA} document")
    if doc.get("version") != SCHEMA_VERSION:
        raise InputError(f"schema version {doc.get('version')} is not supported (expected {SCHEMA_VERSION})")
    print(render(doc), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coxminimal", description="Cox rings of minimal models of C^n/G.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, cox: bool):
        sp.add_argument("group", help="group file or bundled fixture name")
        sp.add_argument("--cache-dir", help="persistent cache (default: $COXMINIMAL_CACHE)")
        sp.add_argument("--json", help="write the machine-readable report here")
        if cox:
            sp.add_argument("--invariants", help="invariant generators file (default: bundled, else computed)")
            sp.add_argument("--degree-cap", type=int, help="degree cap of the invariant search")
            sp.add_argument("--resume", action="store_true", help="continue after the last completed step")
            sp.add_argument("--threads", type=int, default=1)
            sp.add_argument("--svg", help="write the fan picture (rank 2)")
            sp.add_argument("--max-chambers", type=int, default=FAN_LIMIT)

    sp = sub.add_parser("analyze", help="group diagnostics and junior classes")
    common(sp, cox=False)
    sp.set_defaults(func=cmd_analyze)
    sp = sub.add_parser("invariants", help="generators of the invariants of [G,G]")
    sp.add_argument("group")
    sp.add_argument("--degree-cap", type=int)
    sp.add_argument("--cache-dir")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_invariants)
    for name, fn, hlp in (("coxring", cmd_coxring, "generators, relations and fan"),
                          ("relations", cmd_relations, "relations of the Cox ring"),
                          ("gitfan", cmd_gitfan, "refinement fan and movable cone")):
        sp = sub.add_parser(name, help=hlp)
        common(sp, cox=True)
        sp.set_defaults(func=fn)
    sp = sub.add_parser("report", help="re-render a JSON report")
    sp.add_argument("report")
    sp.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, InvariantError, GroupError, UsageError, gitfan.FanError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (coxring.CoxIncomplete, IncompleteGenerators) as exc:
        print(f"incomplete: {exc}", file=sys.stderr)
        print("completed steps are saved when a cache directory is set; rerun with --resume "
              "(and a larger --degree-cap for invariant searches)", file=sys.stderr)
        return 3
    except (coxring.CoxInternalError, ArithmeticError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    except coxring.CoxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
