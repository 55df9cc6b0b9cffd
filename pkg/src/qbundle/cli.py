"""qbundle command line: run manifests, verify the monopole, export presets.

Exit codes: 0 all checks pass, 1 some check fails, 2 unusable input
(schema violation, malformed scalar literal, unknown preset or check),
3 internal error.
"""
from __future__ import annotations

import argparse
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
import json
import sys
import time
import traceback
from importlib import resources

import jsonschema

from .report import PASS, FAIL, SKIP, Report
from .scalars import ScalarError, parse_scalar
from . import pipeline as pl

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_schema(name):
    text = resources.files("qbundle").joinpath("schemas", name).read_text()
    return json.loads(text)


def validate(doc, schema_name):
    schema = load_schema(schema_name)
    v = jsonschema.Draft202012Validator(schema)
    errs = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errs:
        e = errs[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {e.message}")


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ----------------------------------------------------------------------
# finite instances

def _entries(check_name, params, rep):
    out = []
    for c in rep.checks:
        d = c.to_dict()
        merged = dict(params)
        merged.update(d.pop("params", {}))
        d["params"] = merged
        d["check"] = f"{check_name}.{c.name}"
        out.append(d)
    return out


def run_finite(manifest, seed, jobs, timings):
    try:
        inst = pl.load_instance(manifest)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed payload: {exc!r}") from exc
    checks = manifest["checks"]
    for c in checks:
        if c["name"] not in pl.CHECKS:
            raise InputError(f"unknown check {c['name']!r}; known: {', '.join(sorted(pl.CHECKS))}")
    # shared prerequisite first, then the independent checks
    galois_error = None
    if any(c["name"] in pl.NEEDS_GALOIS for c in checks) and inst.et is not None:
        t0 = time.perf_counter()
        try:
            inst.galois
        except pl.ManifestError:
            raise
        except (ValueError, ZeroDivisionError) as exc:
            galois_error = exc
        timings.append(("galois data", time.perf_counter() - t0))

    def one(c):
        params = dict(c.get("params", {}))
        t0 = time.perf_counter()
        if galois_error is not None and c["name"] in pl.NEEDS_GALOIS:
            rep = _broken_premise(c["name"], galois_error)
        else:
            try:
                rep = pl.CHECKS[c["name"]](inst, {"seed": seed, **params})
            except pl.ManifestError:
                raise
            except (ValueError, ZeroDivisionError) as exc:
                # the structure violates a premise the check relies on
                rep = _broken_premise(c["name"], exc)
        return _entries(c["name"], params, rep), time.perf_counter() - t0

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as ex:
        results = list(ex.map(one, checks))
    entries = []
    for c, (ent, dt) in zip(checks, results):
        entries.extend(ent)
        timings.append((c["name"], dt))
    return inst.name, {"instance": inst.name, **{k: _jsonable(v) for k, v in inst.params.items()}}, entries


def _broken_premise(name, exc):
    rep = Report(name)
    rep.add("premise", False, witness=str(exc))
    return rep


def _jsonable(x):
    return x if isinstance(x, (int, str, bool)) else json.loads(json.dumps(x, default=str))


# ----------------------------------------------------------------------
# monopole

def _monopole_ctx(q, s):
    from .monopole import MonopoleContext
    return MonopoleContext(q=q, s=s)


def _suite_entries(ctx, suite, n, degree, seed):
    from .monopole import run_suite
    rep = run_suite(ctx, suite, N=n, degree=degree, seed=seed)
    params = {"n": n, "d": degree, "q0": str(ctx.q), "s0": str(ctx.s)}
    return _entries(suite, params, rep)


def _suite_worker(q, s, suite, n, degree, seed):
    t0 = time.perf_counter()
    ctx = _monopole_ctx(_scalar_or_none(q), _scalar_or_none(s))
    return _suite_entries(ctx, suite, n, degree, seed), time.perf_counter() - t0


def _scalar_or_none(text):
    return None if text is None else parse_scalar(text)


def monopole_suites(checks):
    from .monopole import SUITES
    names = []
    for c in checks:
        nm = c["name"]
        picked = list(SUITES) if nm == "all" else [x.strip() for x in nm.split(",")]
        for x in picked:
            if x not in SUITES:
                raise InputError(f"unknown monopole suite {x!r}; known: {', '.join(SUITES)}, all")
            if x not in names:
                names.append(x)
    return names


def run_monopole(manifest, seed, jobs, degree, timings):
    pay = manifest["payload"]
    n = pay.get("n", 3)
    degree = pay.get("degree", 6) if degree is None else degree
    point = pay.get("specialize", {})
    q_txt, s_txt = point.get("q"), point.get("s")
    for label, txt in (("q", q_txt), ("s", s_txt)):
        if txt is not None:
            try:
                parse_scalar(txt)
            except ScalarError as exc:
                raise InputError(f"payload.specialize.{label}: bad scalar literal {txt!r}: {exc}") from exc
    suites = monopole_suites(manifest["checks"])
    entries = []
    if jobs > 1 and len(suites) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(_suite_worker, q_txt, s_txt, su, n, degree, seed) for su in suites]
            results = [f.result() for f in futs]
    else:
        ctx = _monopole_ctx(_scalar_or_none(q_txt), _scalar_or_none(s_txt))
        results = []
        for su in suites:
            t0 = time.perf_counter()
            results.append((_suite_entries(ctx, su, n, degree, seed), time.perf_counter() - t0))
    for su, (ent, dt) in zip(suites, results):
        entries.extend(ent)
        timings.append((su, dt))
    config = {"n": n, "degree": degree, "q": q_txt or "q", "s": s_txt or "s", "suites": suites}
    return manifest.get("name", "monopole"), config, entries


# ----------------------------------------------------------------------

def execute(manifest, seed=None, jobs=1, degree=None):
    """Validate and run a manifest; returns (report dict, timings)."""
    validate(manifest, "manifest.schema.json")
    seed = manifest.get("seed", 0) if seed is None else seed
    timings = []
    try:
        if manifest["kind"] == "monopole":
            name, config, entries = run_monopole(manifest, seed, jobs, degree, timings)
        else:
            name, config, entries = run_finite(manifest, seed, jobs, timings)
    except (pl.ManifestError, ScalarError) as exc:
        raise InputError(str(exc)) from exc
    summary = {k: sum(1 for e in entries if e["status"] == k) for k in (PASS, FAIL, SKIP)}
    report = {
        "name": name,
        "kind": manifest["kind"],
        "seed": seed,
        "config": config,
        "status": FAIL if summary[FAIL] else PASS,
        "summary": summary,
        "checks": entries,
    }
    validate(report, "report.schema.json")
    return report, timings


def print_summary(report, timings, verbose, show_timings, out=None):
    out = out or sys.stdout
    print(f"{report['name']} ({report['kind']}, seed {report['seed']})", file=out)
    groups = {}
    for e in report["checks"]:
        groups.setdefault(e["check"].split(".", 1)[0], []).append(e)
    for g, es in groups.items():
        bad = [e for e in es if e["status"] == FAIL]
        print(f"  [{'FAIL' if bad else 'PASS'}] {g}: {len(es) - len(bad)}/{len(es)}", file=out)
        for e in es if verbose else bad:
            tail = f"  witness={json.dumps(e['witness'])}" if "witness" in e else ""
            if e["status"] == SKIP:
                tail = f"  ({e.get('detail', '')})"
            print(f"      {e['status']:7} {e['check']}{tail}", file=out)
    s = report["summary"]
    print(f"{report['status'].upper()}: {s[PASS]} passed, {s[FAIL]} failed, {s[SKIP]} skipped", file=out)
    if show_timings:
        for label, dt in timings:
            print(f"  time {label}: {dt:.2f}s", file=out)


def _parse_specialize(text):
    out = {}
    for part in text.split(","):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in ("q", "s"):
            raise InputError(f"--specialize expects q=Q,s=S, got {text!r}")
        out[key] = val.strip()
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="qbundle", description="Exact verification of factorisations, entwinings and the q-monopole.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--degree", type=int, default=None)
        p.add_argument("--timings", action="store_true", help="print wall times (never written to JSON)")
        p.add_argument("-v", "--verbose", action="store_true", help="list every sub-check")

    r = sub.add_parser("run", help="run the checks listed in a manifest")
    r.add_argument("manifest")
    common(r)

    m = sub.add_parser("monopole", help="verify the q-monopole suites")
    m.add_argument("--n", type=int, default=3, help="highest grouplike index")
    m.add_argument("--verify", default="all", help="suite name, comma list, or all")
    m.add_argument("--specialize", default=None, help="q=Q,s=S with rational literals")
    common(m)

    e = sub.add_parser("export", help="print the structure-constant manifest of a preset")
    e.add_argument("preset", choices=pl.PRESETS)
    e.add_argument("--n", type=int, default=None, help="order for example26")
    e.add_argument("--point", default=None, help="cos,sin for example27, e.g. 3/5,4/5")
    e.add_argument("--kind", choices=("factorisation", "entwining"), default="factorisation")
    e.add_argument("--out", default=None)
    return ap


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_export(args):
    kw = {}
    if args.n is not None:
        if args.preset != "example26":
            raise InputError("--n applies to example26 only")
        kw["n"] = args.n
    if args.point is not None:
        if args.preset != "example27":
            raise InputError("--point applies to example27 only")
        kw["point"] = [x.strip() for x in args.point.split(",")]
    doc = pl.export_manifest(args.preset, kind=args.kind, **kw)
    validate(doc, "manifest.schema.json")
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _cmd_run(args, manifest):
    report, timings = execute(manifest, seed=args.seed, jobs=args.jobs, degree=args.degree)
    if args.out:
        _emit(dumps(report), args.out)
    print_summary(report, timings, args.verbose, args.timings)
    return EXIT_OK if report["status"] == PASS else EXIT_FAIL


def _read_manifest(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.cmd == "export":
            return _cmd_export(args)
        if args.cmd == "run":
            return _cmd_run(args, _read_manifest(args.manifest))
        payload = {"n": args.n}
        if args.degree is not None:
            payload["degree"] = args.degree
        if args.specialize:
            payload["specialize"] = _parse_specialize(args.specialize)
        manifest = {"kind": "monopole", "name": "q-monopole", "payload": payload,
                    "checks": [{"name": args.verify}]}
        return _cmd_run(args, manifest)
    except InputError as exc:
        print(f"qbundle: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (pl.ManifestError, ScalarError) as exc:
        print(f"qbundle: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
