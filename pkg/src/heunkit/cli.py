"""Command-line front end.

Verbs:
  classify      classify an ODE given in the textual grammar (file, inline
                text, or a named corpus entry)
  heun-eval     evaluate a Frobenius solution of the general Heun equation
  mathieu-table characteristic values over a q grid (CSV by default)
  scenario      run a physics scenario and emit its report
  connect       numerical connection matrix between two Frobenius bases

Global options: --format json|csv|text, --output PATH. The environment
variable HEUNKIT_TOL overrides the default integration tolerance 1e-10.
Exit status: 0 success, 1 domain error, 2 usage error. Output is
deterministic: fixed key order, floats at 17 significant digits.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field

from .corpus import canonical_corpus
from .engine import connection_matrix
from .errors import GrammarError, HeunkitError, MalformedComplex, \
    MissingOption, UnknownVerb
from .grammar import format_complex, parse_complex, parse_ode
from .heun import GeneralHeunParams, heun_value
from .mathieu import characteristic_value
from .ode import classify_singularities
from .scenarios import SCENARIOS, run_scenario
from .serialize import emit_json, render_report_text, to_jsonable

DEFAULT_TOL = 1e-10


def _tolerance():
    raw = os.environ.get("HEUNKIT_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError:
        raise MissingOption(f"HEUNKIT_TOL is not a number: {raw!r}")
    if not (0.0 < value < 1.0):
        raise MissingOption(f"HEUNKIT_TOL out of range: {value}")
    return value


@dataclass
class Command:
    verb: str
    options: dict = field(default_factory=dict)
    input: str = None
    output: str = None


# verb -> option name -> (kind, required, default); kind in
# {"complex", "float", "int", "str", "flag-many"}
_HEUN_FLAGS = {name: ("complex", True, None) for name in
               ("a", "b", "c", "d", "e", "f", "q")}

VERBS = {
    "classify": {
        "ode": ("str", False, None),
        "text": ("str", False, None),
        "corpus": ("str", False, None),
        "format": ("str", False, "json"),
        "output": ("str", False, None),
    },
    "heun-eval": {
        **_HEUN_FLAGS,
        "z": ("complex", True, None),
        "center": ("complex", False, 0j),
        "branch": ("str", False, "first"),
        "n-terms": ("int", False, 60),
        "format": ("str", False, "json"),
        "output": ("str", False, None),
    },
    "mathieu-table": {
        "q-values": ("str", False, None),
        "q-min": ("float", False, None),
        "q-max": ("float", False, None),
        "q-count": ("int", False, None),
        "n-max": ("int", False, 5),
        "parity": ("str", False, "both"),
        "format": ("str", False, "csv"),
        "output": ("str", False, None),
    },
    "scenario": {
        "id": ("str", False, None),
        "config": ("str", False, None),
        "set": ("flag-many", False, None),
        "grid-out": ("str", False, None),
        "format": ("str", False, "json"),
        "output": ("str", False, None),
    },
    "connect": {
        **_HEUN_FLAGS,
        "from": ("str", True, None),
        "to": ("str", True, None),
        "tol": ("float", False, None),
        "format": ("str", False, "json"),
        "output": ("str", False, None),
    },
}


def parse_args(argv):
    """Validate argv into a Command; raises UnknownVerb / MissingOption /
    MalformedComplex with the offending flag named."""
    if not argv:
        raise UnknownVerb("no verb given; expected one of: "
                          + ", ".join(sorted(VERBS)))
    verb = argv[0]
    if verb not in VERBS:
        raise UnknownVerb(f"unknown verb {verb!r}; expected one of: "
                          + ", ".join(sorted(VERBS)))
    optspec = VERBS[verb]
    options = {}
    i = 1
    while i < len(argv):
        tok = argv[i]
        if not tok.startswith("--"):
            raise MissingOption(f"unexpected argument {tok!r}")
        name = tok[2:]
        if name not in optspec:
            raise MissingOption(f"unknown option --{name} for verb {verb}")
        kind = optspec[name][0]
        i += 1
        if i >= len(argv):
            raise MissingOption(f"option --{name} needs a value")
        raw = argv[i]
        i += 1
        if kind == "complex":
            options[name] = parse_complex(raw)
        elif kind == "float":
            try:
                options[name] = float(raw)
            except ValueError:
                raise MalformedComplex(f"--{name} expects a number, got {raw!r}")
        elif kind == "int":
            try:
                options[name] = int(raw)
            except ValueError:
                raise MalformedComplex(f"--{name} expects an integer, got {raw!r}")
        elif kind == "flag-many":
            options.setdefault(name, []).append(raw)
        else:
            options[name] = raw
    for name, (kind, required, default) in optspec.items():
        if name not in options:
            if required:
                raise MissingOption(f"verb {verb} requires --{name}")
            if default is not None:
                options[name] = default
    return Command(verb=verb, options=options,
                   input=options.get("ode") or options.get("config"),
                   output=options.get("output"))


def _write(cmd, text):
    if cmd.output:
        with open(cmd.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _points_table(points):
    rows = []
    for p in points:
        row = {
            "location": "inf" if p.at_infinity else to_jsonable(p.location),
            "kind": p.kind.value,
            "rank": str(p.rank),
            "exponents": None if p.exponents is None
            else [to_jsonable(e) for e in p.exponents],
        }
        rows.append(row)
    return rows


def _points_csv(points):
    lines = ["location,kind,rank,exponent1,exponent2"]
    for p in points:
        loc = "inf" if p.at_infinity else format_complex(p.location)
        if p.exponents is None:
            e1 = e2 = ""
        else:
            e1, e2 = (format_complex(e) for e in p.exponents)
        lines.append(f"{loc},{p.kind.value},{p.rank},{e1},{e2}")
    return "\n".join(lines) + "\n"


def _parse_equation_text(text):
    """Accept any of the three textual forms: 'ode ...', 'heun ...',
    'cform ...'."""
    head = text.strip().split(None, 1)[0] if text.strip() else ""
    if head == "heun":
        from .heun import general_heun, heun_params_from_text
        return general_heun(heun_params_from_text(text))
    if head == "cform":
        from .heun import build_confluent_form, confluent_params_from_text
        return build_confluent_form(confluent_params_from_text(text))
    return parse_ode(text)


def _run_classify(cmd):
    opts = cmd.options
    sources = [name for name in ("ode", "text", "corpus") if opts.get(name)]
    if len(sources) != 1:
        raise MissingOption("classify needs exactly one of --ode, --text, "
                            "--corpus")
    if opts.get("ode"):
        with open(opts["ode"]) as fh:
            ode = _parse_equation_text(fh.read().strip())
        label = opts["ode"]
    elif opts.get("text"):
        ode = _parse_equation_text(opts["text"])
        label = "inline"
    else:
        matches = {name: o for name, o, _ in canonical_corpus()}
        if opts["corpus"] not in matches:
            raise HeunkitError(f"unknown corpus entry {opts['corpus']!r}; "
                               "known: " + ", ".join(sorted(matches)))
        ode = matches[opts["corpus"]]
        label = opts["corpus"]
    points = classify_singularities(ode)
    fmt = opts.get("format", "json")
    if fmt == "csv":
        _write(cmd, _points_csv(points))
    elif fmt == "text":
        lines = [f"classification of {label}:"]
        for p in points:
            loc = "inf" if p.at_infinity else f"{p.location:.6g}"
            exp = "" if p.exponents is None else \
                "  exponents " + ", ".join(f"{e:.6g}" for e in p.exponents)
            lines.append(f"  {loc}: {p.kind.value} (rank {p.rank}){exp}")
        _write(cmd, "\n".join(lines) + "\n")
    else:
        _write(cmd, emit_json({"schema": 1, "source": label,
                               "points": _points_table(points)}) + "\n")
    return 0


def _run_heun_eval(cmd):
    o = cmd.options
    params = GeneralHeunParams(o["a"], o["b"], o["c"], o["d"], o["e"],
                               o["f"], o["q"])
    val, series = heun_value(params, o["center"], o["branch"], o["z"],
                             n_terms=o["n-terms"])
    payload = {
        "schema": 1,
        "center": to_jsonable(series.center),
        "branch": o["branch"],
        "exponent": to_jsonable(series.exponent),
        "radius": float(series.radius),
        "z": to_jsonable(o["z"]),
        "w": to_jsonable(val.w),
        "dw": to_jsonable(val.dw),
        "tail": float(val.tail),
        "terms": len(series.coeffs),
    }
    fmt = o.get("format", "json")
    if fmt == "text":
        _write(cmd, (f"w  = {format_complex(val.w)}\n"
                     f"w' = {format_complex(val.dw)}\n"
                     f"tail estimate = {val.tail:.3e}\n"))
    elif fmt == "csv":
        _write(cmd, "quantity,value\n"
                    f"w,{format_complex(val.w)}\n"
                    f"dw,{format_complex(val.dw)}\n"
                    f"tail,{val.tail:.17g}\n")
    else:
        _write(cmd, emit_json(payload) + "\n")
    return 0


def _mathieu_grid(o):
    if o.get("q-values"):
        try:
            return [float(tok) for tok in o["q-values"].split(",") if tok.strip()]
        except ValueError:
            raise HeunkitError(f"bad --q-values list {o['q-values']!r}")
    if o.get("q-min") is None or o.get("q-max") is None:
        raise MissingOption("mathieu-table needs --q-values or --q-min/--q-max")
    count = o.get("q-count") or 5
    lo, hi = o["q-min"], o["q-max"]
    if count == 1:
        return [lo]
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _run_mathieu_table(cmd):
    o = cmd.options
    grid = _mathieu_grid(o)
    parities = {"both": ("even", "odd"), "even": ("even",),
                "odd": ("odd",)}.get(o["parity"])
    if parities is None:
        raise HeunkitError(f"parity must be even, odd or both, got {o['parity']!r}")
    rows = []
    for q in grid:
        for parity in parities:
            start = 0 if parity == "even" else 1
            for n in range(start, o["n-max"] + 1):
                ch = characteristic_value(n, q, parity)
                rows.append((n, parity, q, ch.value, ch.truncation))
    fmt = o.get("format", "csv")
    if fmt == "json":
        payload = {"schema": 1, "rows": [
            {"n": n, "parity": parity, "q": to_jsonable(complex(q)),
             "value": to_jsonable(value), "truncation": truncation}
            for n, parity, q, value, truncation in rows]}
        _write(cmd, emit_json(payload) + "\n")
    else:
        lines = ["n,parity,q,value,truncation"]
        for n, parity, q, value, truncation in rows:
            lines.append(f"{n},{parity},{format_complex(q)},"
                         f"{format_complex(value)},{truncation}")
        _write(cmd, "\n".join(lines) + "\n")
    return 0


def _load_config(path):
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise GrammarError(f"{path}:{lineno}: expected key = value")
            key, val = (part.strip() for part in line.split("=", 1))
            out[key] = val
    return out


def _coerce_scenario_params(scenario_id, raw):
    _, defaults = SCENARIOS[scenario_id]
    out = {}
    for key, val in raw.items():
        if key not in defaults:
            raise HeunkitError(f"scenario {scenario_id!r} has no parameter "
                               f"{key!r}; expects {sorted(defaults)}")
        ref = defaults[key]
        if isinstance(ref, bool):
            out[key] = val.lower() in ("1", "true", "yes")
        elif isinstance(ref, int) and not isinstance(ref, bool):
            out[key] = int(float(val))
        elif isinstance(ref, float):
            out[key] = float(val)
        elif ref is None:
            out[key] = None if val.lower() in ("none", "") else parse_complex(val)
        else:
            out[key] = val
    return out


def _run_scenario(cmd):
    o = cmd.options
    raw = {}
    scenario_id = o.get("id")
    if o.get("config"):
        cfg = _load_config(o["config"])
        scenario_id = cfg.pop("scenario", scenario_id)
        raw.update(cfg)
    for item in o.get("set") or []:
        if "=" not in item:
            raise HeunkitError(f"--set expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        raw[key.strip()] = val.strip()
    if not scenario_id:
        raise MissingOption("scenario needs --id or a config with a "
                            "'scenario' key")
    if scenario_id not in SCENARIOS:
        raise HeunkitError(f"unknown scenario {scenario_id!r}; known: "
                           + ", ".join(sorted(SCENARIOS)))
    overrides = _coerce_scenario_params(scenario_id, raw)
    report = run_scenario(scenario_id, overrides)
    if o.get("grid-out"):
        grid = report.data.get("grid")
        if grid:
            lines = [",".join(grid["columns"])]
            for row in grid["rows"]:
                lines.append(",".join(f"{v:.17g}" if isinstance(v, float)
                                      else str(v) for v in row))
            with open(o["grid-out"], "w") as fh:
                fh.write("\n".join(lines) + "\n")
        else:
            sys.stderr.write(f"note: scenario {scenario_id} emits no grid\n")
    fmt = o.get("format", "json")
    if fmt == "text":
        _write(cmd, render_report_text(report))
    else:
        _write(cmd, emit_json(to_jsonable(report)) + "\n")
    if not report.all_passed():
        for c in report.claims:
            if not c.passed:
                sys.stderr.write(f"claim failed: {c.description} "
                                 f"(expected {c.expected}; observed "
                                 f"{c.observed})\n")
        return 1
    return 0


def _run_connect(cmd):
    o = cmd.options
    params = GeneralHeunParams(o["a"], o["b"], o["c"], o["d"], o["e"],
                               o["f"], o["q"])
    tol = o.get("tol") or _tolerance()
    C = connection_matrix(params, o["from"], o["to"], tol=tol)
    payload = {
        "schema": 1,
        "from": o["from"],
        "to": o["to"],
        "tol": float(tol),
        "entries": [[to_jsonable(v) for v in row] for row in C.entries],
        "determinant": to_jsonable(C.determinant),
        "condition_number": float(C.condition_number),
    }
    fmt = o.get("format", "json")
    if fmt == "text":
        (r1, r2) = C.entries
        _write(cmd, (f"C11 = {format_complex(r1[0])}\nC12 = {format_complex(r1[1])}\n"
                     f"C21 = {format_complex(r2[0])}\nC22 = {format_complex(r2[1])}\n"))
    else:
        _write(cmd, emit_json(payload) + "\n")
    return 0


_RUNNERS = {
    "classify": _run_classify,
    "heun-eval": _run_heun_eval,
    "mathieu-table": _run_mathieu_table,
    "scenario": _run_scenario,
    "connect": _run_connect,
}


def run(cmd):
    """Execute a parsed Command; returns the exit status."""
    return _RUNNERS[cmd.verb](cmd)


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cmd = parse_args(argv)
    except (UnknownVerb, MissingOption, MalformedComplex) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    try:
        return run(cmd)
    except MissingOption as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2
    except HeunkitError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
