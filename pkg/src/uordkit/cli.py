"""Command line front end.

Every subcommand loads one structure file, delegates to a single checker
and prints a report::

    {"schema": 1, "command": ..., "input_digest": ..., "config": ...,
     "results": {law: {"pass": ..., "witness" | "counterexample": ...}},
     "runtime_ms": ...}

Exit codes: 0 when every law passes, 1 when one fails, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

import numpy as np

from . import corpus as corpus_mod
from .cartesian import check_cartesian, search_cartesian
from .dcompletion import d_algebra_check, dcomplete, eta_checks, forall_impl_batch
from .errors import PreconditionError, SchemaError, UordError
from .io import Structure, load_structure, uord_to_json
from .logicaudit import (
    UniverseConfig,
    audit_exists,
    audit_meets,
    audit_tripos,
    dfam_oracle,
    fam_oracle,
    is_discrete,
    is_exists_prime,
    recheck,
)
from .pca import sk
from .pca.bridge import SKRealizability, dco_to_rpca, rpca_to_dco
from .pca.combinators import bracket_abstract, check_combinators, check_obligations, random_elements
from .pca.opas import OUT_OF_BUDGET, SKOpas, TableOpas, eval_term, is_value
from .pca.terms import parse
from .relcomplete import check_relational_completeness, cross_validate, validate_relcomp
from .relcore import BinRel, Carrier, FunTable, classify, map_image, pair_graph
from .uord import check_adjunction, contains

SCHEMA = 1

#: Short names of the checked statements, shown in text output.
LAW_TAGS = {
    "validate": "uniform-preorder-axioms",
    "saturate": "basis-saturation",
    "leq": "fiber-order",
    "monotone": "monotone-map",
    "adjunction": "adjunction-criterion",
    "cartesian": "cartesian-criterion",
    "dcomplete": "existential-completion",
    "eta": "singleton-embedding",
    "relcomp": "relational-completeness",
    "dco": "partial-function-generators",
    "discrete": "discrete-predicate",
    "exists_prime": "existential-prime",
    "meets": "fiberwise-meets",
    "exists.adjoint": "existential-adjoint",
    "exists.beck_chevalley": "beck-chevalley",
    "exists.frobenius": "frobenius",
    "implication": "heyting-implication",
    "forall": "universal-quantifier",
    "forall.beck_chevalley": "beck-chevalley",
    "forall_impl": "forall-implication-formula",
    "tripos": "tripos",
    "generic_predicate": "generic-predicate",
    "enough_primes": "enough-primes",
    "rtr": "discrete-generic-characterisation",
    "d_algebra": "completion-algebra",
    "eval": "strict-evaluation",
    "bracket": "combinatory-completeness",
    "combinators": "combinator-laws",
    "filter": "filter-axioms",
    "bridge": "pca-dco-bridge",
    "realizability": "realizability-order",
    "cross_validation": "relational-completeness-vs-tripos",
}


def law_tag(law: str) -> str:
    parts = law.split(".")
    for i in range(len(parts), 0, -1):
        tag = LAW_TAGS.get(".".join(parts[:i]))
        if tag:
            return tag
    return law


# ------------------------------------------------------------------- helpers


def _names(text: Optional[str]):
    """A list of element names: JSON list, or whitespace-separated."""
    if text is None:
        return None
    text = text.strip()
    if text.startswith("["):
        try:
            value = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"argument list: {exc}") from None
        return [str(x) for x in value]
    return text.split()


def _predicate(carrier, names):
    return FunTable(Carrier.of_size(len(names)), carrier, [carrier.index(x) for x in names])


def _law(passed, witness=None, counterexample=None, **extra):
    out = {"pass": bool(passed)}
    if witness is not None:
        out["witness"] = witness
    if counterexample is not None:
        out["counterexample"] = counterexample
    out.update(extra)
    return out


def _cart(st: Structure, search: bool = False):
    u = st.uord
    if st.meet is not None and st.top is not None and not search:
        return check_cartesian(u, st.meet, st.top)
    return search_cartesian(u)


def _cart_witness(w, carrier):
    n = carrier.size
    table = w.table()
    return {
        "meet": [[carrier.names[int(table[a, b])] for b in range(n)] for a in range(n)],
        "top": carrier.names[w.top],
        "certificates": w.certificates,
    }


def _map(st: Structure, name, target_carrier):
    if name not in st.maps:
        raise SchemaError(f"maps.{name}: not defined in {st.source}")
    return FunTable.from_names(st.carrier, target_carrier, st.maps[name])


# ------------------------------------------------------------------ commands


def cmd_validate(args, st, cfg):
    u = st.uord
    u.validate()
    ident = contains(u, BinRel.identity(u.carrier))
    return {"validate": _law(True, {"generators": len(u.generators), "identity_in": ident})}


def cmd_saturate(args, st, cfg):
    return {"saturate": _law(True, {"generators": uord_to_json(st.uord)})}


def cmd_leq(args, st, cfg):
    u = st.uord
    if args.dcomplete:
        u = dcomplete(u).lifted
    phi, psi = _names(args.phi), _names(args.psi)
    if phi is None or psi is None or len(phi) != len(psi):
        raise SchemaError("--phi/--psi: two element lists of the same length are required")
    p, q = _predicate(u.carrier, phi), _predicate(u.carrier, psi)
    g = contains(u, pair_graph(p, q))
    law = _law(g is not None, {"generator": g} if g else None, None if g else {"pairs": pair_graph(p, q).named_pairs()})
    if args.recheck and g is not None:
        law["recheck"] = pair_graph(p, q) <= u.generator(g)
    return {"leq": law}


def cmd_monotone(args, st, cfg):
    tgt = load_structure(args.target, args.auto_reflexive) if args.target else st
    f = _map(st, args.map, tgt.carrier)
    bad = next((n for n, g in st.uord.generators if contains(tgt.uord, map_image(f, f, g)) is None), None)
    return {"monotone": _law(bad is None, counterexample=None if bad is None else {"generator": bad})}


def cmd_adjunction(args, st, cfg):
    tgt = load_structure(args.target, args.auto_reflexive) if args.target else st
    f = _map(st, args.f, tgt.carrier)
    g = _map(tgt, args.g, st.carrier)
    rep = check_adjunction(f, g, st.uord, tgt.uord)
    failed = [n for n, ok in rep.transforms.items() if not ok]
    cex = None
    if not rep.passed:
        cex = {"counit": rep.counit, "failed_transforms": failed}
    return {"adjunction": _law(rep.passed, {"counit": True, "transforms": rep.transforms} if rep.passed else None, cex)}


def cmd_cartesian(args, st, cfg):
    search = args.search or st.meet is None or st.top is None
    w = _cart(st, search)
    if w is None:
        cex = {"search": "no meet table and top pass"} if search else {"meet": "given table fails"}
        return {"cartesian": _law(False, counterexample=cex)}
    law = _law(True, _cart_witness(w, st.carrier))
    if args.recheck:
        law["recheck"] = check_cartesian(st.uord, w.meet, w.top) is not None
    return {"cartesian": law}


def cmd_dcomplete(args, st, cfg):
    d = dcomplete(st.uord)
    eta = eta_checks(d, max_index=cfg.max_index_size)
    out = {"dcomplete": _law(True, {"generators": uord_to_json(d.lifted)})}
    for key in ("monotone", "order_reflecting", "prime_singletons", "decomposition"):
        val = getattr(eta, key)
        out[f"eta.{key}"] = _law(val is not False, counterexample=eta.counterexamples.get(key))
    return out


def cmd_relcomp(args, st, cfg):
    cart = _cart(st)
    if cart is None:
        raise PreconditionError("relcomp: the structure is not cartesian")
    w = check_relational_completeness(st.uord, cart)
    if w is None:
        return {"relcomp": _law(False, counterexample={"reason": "no generator serves as a universal relation"})}
    law = _law(True, w.to_dict())
    if args.recheck:
        law["recheck"] = validate_relcomp(st.uord, cart, w) is None
    return {"relcomp": law}


def cmd_dco(args, st, cfg):
    for name, g in st.uord.generators:
        if not classify(g).single_valued:
            a = int(np.flatnonzero(g.bits.sum(axis=1) > 1)[0])
            outs = [st.carrier.names[b] for b in g.successors(a)]
            return {"dco": _law(False, counterexample={"generator": name, "element": st.carrier.names[a], "images": outs})}
    return {"dco": _law(True, {"generators": st.uord.names})}


def _recheck_field(args, law, h, name, cfg):
    if args.recheck and "counterexample" in law:
        law["recheck"] = bool(recheck(h, name, law["counterexample"], cfg))


def cmd_discrete(args, st, cfg):
    h = fam_oracle(st.uord)
    names = _names(args.delta) or list(st.carrier.names)
    delta = [st.carrier.index(x) for x in names]
    v = is_discrete(h, delta, cfg)
    law = _law(v.passed, counterexample=v.counterexample)
    _recheck_field(args, law, h, "discrete", cfg)
    return {"discrete": law}


def cmd_prime(args, st, cfg):
    d = dcomplete(st.uord)
    h = dfam_oracle(d)
    names = _names(args.pi)
    if names is None:
        raise SchemaError("--pi: a list of subset names is required")
    pi = [d.carrier.index(x) for x in names]
    v = is_exists_prime(h, pi, cfg)
    law = _law(v.passed, counterexample=v.counterexample)
    _recheck_field(args, law, h, "exists_prime", cfg)
    return {"exists_prime": law}


def cmd_audit(args, st, cfg):
    u = st.uord
    d = dcomplete(u) if args.dcomplete or args.rtr_char else None
    h = dfam_oracle(d) if d is not None else fam_oracle(u)
    if args.tripos or args.rtr_char:
        constructor = None
        cart = _cart(st) if d is not None else None
        if cart is not None:
            w = check_relational_completeness(u, cart)
            if w is not None:
                constructor = forall_impl_batch(d, w.at, cart)
        rep = audit_tripos(h, cfg, constructor=constructor, enough_primes=d is not None, rtr_char=args.rtr_char)
    else:
        rep = audit_meets(h, cfg)
        rep.merge(audit_exists(h, cfg, frobenius=rep.passed))
    out = rep.to_dict()
    if args.recheck:
        for name, law in out.items():
            if "counterexample" in law:
                try:
                    law["recheck"] = bool(recheck(h, name, law["counterexample"], cfg))
                except KeyError:
                    law["recheck"] = None
    return out


def cmd_dalgebra(args, st, cfg):
    alpha = d_algebra_check(st.uord)
    if alpha is None:
        return {"d_algebra": _law(False, counterexample={"reason": "no monotone left adjoint of the singleton map"})}
    return {"d_algebra": _law(True, {"alpha": dict(zip(alpha.source.names, alpha.named()))})}


def _pca(st: Structure):
    if st.pca is None:
        raise SchemaError("pca: required by this command")
    return st.pca


def _value(o, v):
    if v is OUT_OF_BUDGET:
        return "out_of_budget"
    if not is_value(v):
        return "undefined"
    return o.name(v)


def cmd_pca_eval(args, st, cfg):
    r = _pca(st)
    o = r.opas
    t = parse(args.term, o.resolve)
    v = eval_term(o, t, {}, sk.Budget(o.budget) if isinstance(o, SKOpas) else None)
    return {"eval": _law(is_value(v), {"term": args.term, "value": _value(o, v)})}


def _tuples(o, nvars, samples, seed):
    """Argument tuples (the extra last entry plays ``b``)."""
    if isinstance(o, TableOpas):
        import itertools

        return list(itertools.product(o.elements(), repeat=nvars + 1))
    rng = np.random.default_rng(seed)
    pool = random_elements(o, (nvars + 1) * samples, rng)
    return [tuple(pool[i * (nvars + 1) : (i + 1) * (nvars + 1)]) for i in range(samples)]


def compile_and_check(o, p, variables, samples, seed, compact=False):
    """Compile ``p`` over all ``variables`` and check both guarantees on sampled tuples."""
    e = bracket_abstract(o, p, variables, compact)
    defined = violated = inconclusive = 0
    first = None
    tuples = _tuples(o, len(variables) - 1, samples, seed)
    for args in tuples:
        ob = check_obligations(o, p, variables, e, args)
        if ob.inconclusive:
            inconclusive += 1
        if ob.violated:
            violated += 1
            if first is None:
                first = {"args": [o.name(a) for a in args], "partial_defined": ob.partial_defined is True, "full": ob.full}
        defined += ob.partial_defined is True
    return e, len(tuples), violated, inconclusive, first


def cmd_pca_compile(args, st, cfg):
    r = _pca(st)
    o = r.opas
    variables = _names(args.vars) or []
    if not variables:
        raise SchemaError("--vars: at least one variable is required")
    p = parse(args.term, o.resolve, variables)
    e, n, bad, unknown, first = compile_and_check(o, p, variables, args.samples or 20, cfg.sample_seed, args.compact)
    return {
        "bracket": _law(
            bad == 0,
            {"code": str(e), "probes": n, "inconclusive": unknown} if bad == 0 else None,
            first,
        )
    }


def cmd_pca_check(args, st, cfg):
    r = _pca(st)
    rep = check_combinators(r, samples=args.samples or 100, seed=cfg.sample_seed)
    out = {f"combinators.{name}": c.to_dict() for name, c in rep.laws.items()}
    out["combinators.strong_s"] = {"pass": bool(rep.strong)}
    if r.strength == "weak":
        out["combinators.strong_s"]["informational"] = True
    return out


def cmd_bridge(args, st, cfg):
    if args.to_rpca:
        cart = _cart(st)
        if cart is None:
            raise PreconditionError("bridge: the structure is not cartesian")
        br = dco_to_rpca(st.uord, cart)
        return {"bridge.round_trip": _law(br.round_trip, br.to_dict())}
    r = _pca(st)
    if isinstance(r.opas, SKOpas):
        phi, psi = _sk_sets(args.phi), _sk_sets(args.psi)
        handle = SKRealizability(budget=r.opas.budget)
        verdict = handle.fiber_leq(phi, psi)
        return {"realizability": _law(verdict.status == "realized", verdict.to_dict())}
    u = rpca_to_dco(r)
    return {"bridge.to_dco": _law(True, {"generators": uord_to_json(u)})}


def _sk_sets(text):
    if text is None:
        raise SchemaError("--phi/--psi: required for the SK instance")
    text = text.strip()
    if text.startswith("["):
        raw = json.loads(text)
    else:
        raw = [[text]]
    return [{sk.normalize(sk.from_str(t), sk.Budget(10_000)) for t in row} for row in raw]


def cmd_corpus(args, st, cfg):
    entries = []
    if args.semilattices_upto:
        entries += corpus_mod.semilattice_corpus(args.semilattices_upto)
    if args.random:
        entries += corpus_mod.random_cartesian(args.random, args.seed if args.seed is not None else 7)
    if args.sweep:
        entries += corpus_mod.cartesian_sweep(args.sweep)
    rep = cross_validate(entries, cfg)
    summary = rep.to_dict()
    return {
        "cross_validation": _law(
            rep.passed,
            {"entries": len(entries), "positives": summary["positives"], "negatives": summary["negatives"]},
            {"disagreements": summary["disagreements"]} if not rep.passed else None,
        )
    }


COMMANDS = {
    "validate": cmd_validate,
    "saturate": cmd_saturate,
    "leq": cmd_leq,
    "monotone": cmd_monotone,
    "adjunction": cmd_adjunction,
    "cartesian": cmd_cartesian,
    "dcomplete": cmd_dcomplete,
    "relcomp": cmd_relcomp,
    "dco": cmd_dco,
    "discrete": cmd_discrete,
    "prime": cmd_prime,
    "audit": cmd_audit,
    "dalgebra": cmd_dalgebra,
    "pca-eval": cmd_pca_eval,
    "pca-compile": cmd_pca_compile,
    "pca-check": cmd_pca_check,
    "bridge": cmd_bridge,
    "corpus": cmd_corpus,
}


# ---------------------------------------------------------------- arguments


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--no-timing", action="store_true", help="report runtime_ms as null")
    common.add_argument("--recheck", action="store_true", help="re-validate emitted witnesses and counterexamples")
    common.add_argument("--config", help="JSON file with audit settings; flags take precedence")
    common.add_argument("--auto-reflexive", action="store_true", help="add the identity to a basis lacking it")
    common.add_argument("--seed", type=int)
    common.add_argument("--max-index", type=int)
    common.add_argument("--span-bound", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--budget", type=int)

    parser = argparse.ArgumentParser(prog="uordkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_file=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if needs_file:
            p.add_argument("file")
        return p

    add("validate", "saturate the basis and check the invariants")
    add("saturate", "print the generators")
    p = add("leq", "fiber order between two predicates")
    p.add_argument("--phi")
    p.add_argument("--psi")
    p.add_argument("--dcomplete", action="store_true", help="compare predicates of the completion")
    p = add("monotone", "check that a map preserves the preorder")
    p.add_argument("--map", required=True)
    p.add_argument("--target")
    p = add("adjunction", "check that g is a right adjoint of f")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--target")
    p = add("cartesian", "check the given meet and top, or search for them")
    p.add_argument("--search", action="store_true")
    add("dcomplete", "build the existential completion and check the singleton map")
    add("relcomp", "search for a universal relation")
    add("dco", "check that every generator is a partial function")
    p = add("discrete", "bounded discreteness check of a predicate of fam(U)")
    p.add_argument("--delta", help="element names; default is the identity predicate")
    p = add("prime", "bounded existential-primality check in the completion")
    p.add_argument("--pi", help="subset names such as '{0}'")
    p = add("audit", "audit the logical structure of fam(U) or of its completion")
    p.add_argument("--tripos", action="store_true")
    p.add_argument("--rtr-char", action="store_true")
    p.add_argument("--dcomplete", action="store_true")
    add("dalgebra", "search for an algebra structure for the completion")
    p = add("pca-eval", "evaluate a closed term")
    p.add_argument("--term", required=True)
    p = add("pca-compile", "bracket-abstract a polynomial and check the result")
    p.add_argument("--term", required=True)
    p.add_argument("--vars", required=True, help="variables; the last one is the final argument")
    p.add_argument("--compact", action="store_true", help="apply the constant rule to compound subterms too")
    add("pca-check", "check the combinator and filter laws")
    p = add("bridge", "convert between a relative PCA and a DCO")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-rpca", action="store_true")
    mode.add_argument("--to-dco", action="store_true")
    p.add_argument("--phi")
    p.add_argument("--psi")
    p = add("corpus", "cross-validate relational completeness against the tripos audit", needs_file=False)
    p.add_argument("--semilattices-upto", type=int, default=0)
    p.add_argument("--random", type=int, default=0)
    p.add_argument("--sweep", type=int, default=0, help="number of random draws for the deduplicated sweep")
    return parser


CONFIG_KEYS = ("max_index", "span_bound", "seed", "samples", "budget", "enumeration_cap", "map_samples")


def effective_config(args) -> dict:
    conf = {"max_index": 3, "span_bound": 4, "seed": 0, "samples": None, "budget": None,
            "enumeration_cap": 4096, "map_samples": 64}
    if args.config:
        try:
            extra = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"config: {exc}") from None
        unknown = sorted(set(extra) - set(CONFIG_KEYS))
        if unknown:
            raise SchemaError(f"config.{unknown[0]}: unknown setting")
        conf.update(extra)
    for key in CONFIG_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            conf[key] = val
    if args.command == "corpus" and args.seed is None and not (args.config and "seed" in conf):
        conf["seed"] = 7
    return conf


def universe(conf) -> UniverseConfig:
    return UniverseConfig(
        max_index_size=conf["max_index"],
        enumeration_cap=conf["enumeration_cap"],
        sample_seed=conf["seed"],
        span_bound=conf["span_bound"],
        map_samples=conf["map_samples"],
    )


def run(argv=None):
    """Parse ``argv`` and run the command; returns ``(report, args, exit_code)``."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    conf = effective_config(args)
    args.seed = conf["seed"]
    if args.samples is None:
        args.samples = conf["samples"]
    cfg = universe(conf)
    st = None
    if getattr(args, "file", None):
        st = load_structure(args.file, args.auto_reflexive)
        if st.pca is not None and isinstance(st.pca.opas, SKOpas) and conf.get("budget"):
            st.pca.opas.budget = conf["budget"]
    results = COMMANDS[args.command](args, st, cfg)
    report = {
        "schema": SCHEMA,
        "command": args.command,
        "input_digest": st.digest if st else None,
        "config": conf,
        "results": results,
        "runtime_ms": None if args.no_timing else round((time.perf_counter() - start) * 1000, 3),
    }
    ok = all(r.get("pass") or r.get("informational") for r in results.values())
    ok = ok and not any(r.get("recheck") is False for r in results.values())
    return report, args, 0 if ok else 1


def render_text(report) -> str:
    lines = [f"uordkit {report['command']}  input {report['input_digest'] or '-'}"]
    for law, res in report["results"].items():
        status = "PASS" if res.get("pass") else "FAIL"
        line = f"  {status}  {law}  [{law_tag(law)}]"
        if "counterexample" in res:
            line += "  counterexample: " + json.dumps(res["counterexample"], sort_keys=True)
        if "recheck" in res:
            line += f"  recheck: {res['recheck']}"
        lines.append(line)
    if report["runtime_ms"] is not None:
        lines.append(f"  runtime {report['runtime_ms']} ms")
    return "\n".join(lines)


def main(argv=None) -> int:
    try:
        report, args, code = run(argv)
    except UordError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    except OSError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    if args.format == "text":
        print(render_text(report))
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
