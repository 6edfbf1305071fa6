"""JSON scenario files: loading, validation and execution.

A scenario names a set of systems, an input, an optional junction
disturbance, a horizon and one action. Running it writes one CSV per
produced signal (``<scenario>_<signal>.csv``) and a ``report.txt`` of
``key: value`` lines.
"""
from __future__ import annotations

import json
import re
import time
import warnings
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .coeffexpr import ClosedForm, CoefficientError, parse
from .commute import (
    CommutativityWarning, FeedbackGains, SynthesisConstants, check_conditions,
    constants_from_gains, feedback_pair, required_c0, synthesize_pair,
    zero_order_commutes,
)
from .compose import cascade_chain, cascade_first_order, cascade_with_zero_order
from .equivalence import coefficients_close, simulated_equivalent
from .robustness import inject_and_compare, modulation_index, pulse_train
from .system import ATOL, RTOL, LtvSystem, first_mismatch, simulate, unit_sample, validate, write_signal_csv

__all__ = [
    "ACTIONS", "CHECK_ACTIONS", "SchemaError", "ScenarioConfig", "RunReport",
    "load_config", "parse_config", "run", "builtin_scenarios", "builtin_names",
    "load_builtin", "read_report", "resolve_signal",
]

ACTIONS = ("simulate", "cascade", "check-commute", "synthesize", "feedback-pair", "zero-order", "robustness")
CHECK_ACTIONS = ("check-commute", "synthesize", "feedback-pair", "zero-order")
REPORT_NAME = "report.txt"


class SchemaError(ValueError):
    def __init__(self, path, message=None):
        self.path = path
        super().__init__(f"{path}: {message}" if message else f"missing or invalid key {path!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    horizon: int
    systems: dict
    action: str
    input: Any = "unit_sample(0)"
    disturbance: Any = None
    display: Optional[str] = None
    tolerance: Optional[float] = None
    params: dict = field(default_factory=dict)
    description: str = ""

    @property
    def rtol(self):
        return RTOL if self.tolerance is None else self.tolerance

    def system(self, label):
        try:
            return self.systems[label]
        except KeyError:
            raise SchemaError("params", f"unknown system {label!r}") from None


@dataclass
class RunReport:
    action: str
    values: dict
    files: list
    wall_time: float
    exit_status: int

    def lines(self):
        out = [f"scenario: {self.values.get('scenario', '')}", f"action: {self.action}"]
        out += [f"{k}: {_fmt(v)}" for k, v in self.values.items() if k != "scenario"]
        out += [f"file: {p}" for p in self.files]
        out.append(f"wall_time: {self.wall_time:.6f}")
        return out


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


# -- signals ------------------------------------------------------------------

_UNIT = re.compile(r"^\s*unit_sample\(\s*(\d+)\s*\)\s*$")
_NUMBER = r"\s*([-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?)\s*"
_PULSE = re.compile(rf"^\s*pulse_train\({_NUMBER},{_NUMBER},{_NUMBER}\)\s*$")


def _check_signal(sig, path):
    if isinstance(sig, list):
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in sig):
            raise SchemaError(path, "inline samples must be numbers")
        return
    if isinstance(sig, (int, float)) and not isinstance(sig, bool):
        return
    if not isinstance(sig, str):
        raise SchemaError(path, "expected an expression string or a list of samples")
    if _UNIT.match(sig) or _PULSE.match(sig):
        return
    try:
        parse(sig)
    except CoefficientError as exc:
        raise SchemaError(path, str(exc)) from exc


def resolve_signal(sig, K: int) -> np.ndarray:
    """Samples ``0..K`` of a signal given as an expression, list, ``unit_sample(l)``
    or ``pulse_train(amplitude, period, duty)``."""
    if isinstance(sig, list):
        xs = np.asarray(sig, dtype=float)
        if xs.size < K + 1:
            raise ValueError(f"inline signal has {xs.size} samples, horizon needs {K + 1}")
        return xs[: K + 1]
    if isinstance(sig, (int, float)):
        return np.full(K + 1, float(sig))
    m = _UNIT.match(sig)
    if m:
        return unit_sample(int(m.group(1)), K)
    m = _PULSE.match(sig)
    if m:
        amp, period, duty = (float(g) for g in m.groups())
        if period != int(period):
            raise ValueError("pulse_train period must be an integer")
        return pulse_train(amp, int(period), duty, K)
    return ClosedForm.from_text(sig).tabulate(K)


# -- loading ------------------------------------------------------------------

def _require(obj, key, path, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}{key}")
    value = obj[key]
    if kind is not None and (isinstance(value, bool) or not isinstance(value, kind)):
        raise SchemaError(f"{path}{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _coeff_list(entry, path):
    raw = _require(entry, "coeffs", path, (list, dict))
    if isinstance(raw, dict):
        try:
            indexed = {int(i): v for i, v in raw.items()}
        except ValueError:
            raise SchemaError(f"{path}coeffs", "keys must be coefficient indices") from None
        if sorted(indexed) != list(range(len(indexed))):
            raise SchemaError(f"{path}coeffs", "indices must be 0..n without gaps")
        raw = [indexed[i] for i in range(len(indexed))]
    out = []
    for i, v in enumerate(raw):
        where = f"{path}coeffs.{i}"
        if isinstance(v, bool) or not isinstance(v, (str, int, float)):
            raise SchemaError(where, "coefficient must be an expression string or a number")
        if isinstance(v, str):
            try:
                out.append(ClosedForm(parse(v)))
            except CoefficientError as exc:
                raise SchemaError(where, str(exc)) from exc
        else:
            out.append(v)
    return out


def _build_system(label, entry, built, path):
    derive = entry.get("derive")
    if derive is None:
        coeffs = _coeff_list(entry, path)
        order = entry.get("order", len(coeffs) - 1)
        if order != len(coeffs) - 1:
            raise SchemaError(f"{path}order", f"order {order} needs {order + 1} coefficients, got {len(coeffs)}")
        state = entry.get("initial_state", [0.0] * order)
        if not isinstance(state, list) or len(state) != order:
            raise SchemaError(f"{path}initial_state", f"expected {order} numbers")
        return LtvSystem(tuple(coeffs), tuple(state), label)
    src_label = _require(entry, "from", path, str)
    if src_label not in built:
        raise SchemaError(f"{path}from", f"unknown or later-defined system {src_label!r}")
    src = built[src_label]
    K = 0
    if derive == "synthesize":
        c1 = _require(entry, "c1", path, (int, float))
        c0 = entry.get("c0", "required")
        if c0 == "required":
            c0 = required_c0(src, c1)
        sys = synthesize_pair(src, SynthesisConstants(c0=c0, c1=c1), K, entry.get("y0"), label)
    elif derive == "feedback":
        gains = FeedbackGains(_require(entry, "alpha", path, (int, float)), _require(entry, "beta", path, (int, float)))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", CommutativityWarning)
            sys = feedback_pair(src, gains, K, label)
    else:
        raise SchemaError(f"{path}derive", f"unknown derivation {derive!r}")
    if "initial_state" in entry:
        sys = sys.with_initial_state(entry["initial_state"])
    return sys


def parse_config(data: dict, source: str = "<config>") -> ScenarioConfig:
    if not isinstance(data, dict):
        raise SchemaError("<root>", "expected a JSON object")
    horizon = _require(data, "horizon", "", int)
    if horizon < 0:
        raise SchemaError("horizon", "must be nonnegative")
    action = _require(data, "action", "", str)
    if action not in ACTIONS:
        raise SchemaError("action", f"must be one of {', '.join(ACTIONS)}")
    raw_systems = _require(data, "systems", "", dict)
    systems = {}
    for label, entry in raw_systems.items():
        if not isinstance(entry, dict):
            raise SchemaError(f"systems.{label}", "expected an object")
        try:
            systems[label] = _build_system(label, entry, systems, f"systems.{label}.")
        except (ValueError, CoefficientError) as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError(f"systems.{label}", str(exc)) from exc
    for key in ("input", "disturbance"):
        if data.get(key) is not None:
            _check_signal(data[key], key)
    display = data.get("display")
    if display is not None:
        _check_signal(display, "display")
    tol = data.get("tolerance")
    if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol < 0):
        raise SchemaError("tolerance", "must be a nonnegative number")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise SchemaError("params", "expected an object")
    for key in ("system", "first", "second"):
        if key in params and params[key] not in systems:
            raise SchemaError(f"params.{key}", f"unknown system {params[key]!r}")
    if params.get("c1", 1) == 0:
        raise SchemaError("params.c1", "must be nonzero")
    cfg = ScenarioConfig(
        name=data.get("name", Path(source).stem),
        horizon=horizon,
        systems=systems,
        action=action,
        input=data.get("input", "unit_sample(0)"),
        disturbance=data.get("disturbance"),
        display=display,
        tolerance=tol,
        params=params,
        description=data.get("description", ""),
    )
    for sys in systems.values():
        if horizon < sys.order:
            raise SchemaError("horizon", f"shorter than the order of system {sys.label!r}")
        validate(sys, horizon)
    return cfg


def load_config(path) -> ScenarioConfig:
    """Read and validate a scenario file; see the README for the schema."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("<root>", f"invalid JSON: {exc}") from exc
    return parse_config(data, str(path))


def builtin_names():
    files = resources.files("ltvcommute").joinpath("scenarios")
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".json"))


def load_builtin(name: str) -> ScenarioConfig:
    ref = resources.files("ltvcommute").joinpath("scenarios", f"{name}.json")
    if not ref.is_file():
        raise KeyError(f"no built-in scenario {name!r}; available: {', '.join(builtin_names())}")
    return parse_config(json.loads(ref.read_text(encoding="utf-8")), name)


def builtin_scenarios():
    return [load_builtin(n) for n in builtin_names()]


# -- running ------------------------------------------------------------------

def _pair(cfg):
    labels = list(cfg.systems)
    first = cfg.params.get("first", labels[0] if labels else None)
    second = cfg.params.get("second", labels[1] if len(labels) > 1 else None)
    if first is None or second is None:
        raise SchemaError("params", "action needs two systems")
    return cfg.system(first), cfg.system(second)


def _outputs(A, B, x, K):
    """Cascade outputs for both orderings."""
    if A.order == 1 and B.order == 1:
        ab = simulate(cascade_first_order(A, B, K).inner, x, K)
        ba = simulate(cascade_first_order(B, A, K).inner, x, K)
    else:
        ab = cascade_chain(A, B, x, K)
        ba = cascade_chain(B, A, x, K)
    return ab, ba


def _commutativity_values(rep, ab, ba, rtol):
    if rep.commutative:
        verdict = True
    else:
        tag = rep.first_violation[0] if rep.first_violation else ""
        reason = "initial-condition constraint violated" if tag.startswith("ic.") else f"{tag} violated at k={rep.first_violation[1]}"
        verdict = f"false ({reason})"
    return {
        "commutative": verdict,
        "zero_state_ok": rep.zero_state_ok,
        "general_ok": rep.general_ok,
        "ic_constraint_ok": rep.ic_constraint_ok,
        "zero_input_sufficient_ok": rep.zero_input_sufficient_ok,
        "outputs_agree": first_mismatch(ab, ba, rtol, ATOL) is None,
        "max_abs_diff": float(np.max(np.abs(ab - ba))),
    }


def run(cfg: ScenarioConfig, output_dir, seed: int = 0) -> RunReport:
    """Execute ``cfg.action`` and write its CSV files and ``report.txt``.

    ``exit_status`` is 0 on success and 1 when a check action finds the
    systems non-commutative.
    """
    t0 = time.perf_counter()
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    K = cfg.horizon
    rtol = cfg.rtol
    p = cfg.params
    with_ics = bool(p.get("with_ics", True))
    values = {"scenario": cfg.name, "horizon": K}
    signals = {}
    verdict = True
    x = resolve_signal(cfg.input, K)

    if cfg.action == "simulate":
        sys = cfg.system(p.get("system", next(iter(cfg.systems))))
        y = simulate(sys, x, K)
        signals["y"] = y
        values["system"] = sys.label
        values["max_abs_output"] = float(np.max(np.abs(y)))

    elif cfg.action == "cascade":
        A, B = _pair(cfg)
        order = p.get("order", "both")
        ab, ba = _outputs(A, B, x, K)
        if order in ("AB", "both"):
            signals["ab"] = ab
        if order in ("BA", "both"):
            signals["ba"] = ba
        if order == "both":
            values["outputs_agree"] = first_mismatch(ab, ba, rtol, ATOL) is None
            values["max_abs_diff"] = float(np.max(np.abs(ab - ba)))

    elif cfg.action in ("check-commute", "synthesize", "feedback-pair"):
        if cfg.action == "check-commute":
            A, B = _pair(cfg)
        else:
            A = cfg.system(p.get("system", next(iter(cfg.systems))))
            if cfg.action == "synthesize":
                c1 = float(p.get("c1", 1.0))
                c0 = p.get("c0", "required")
                c0 = required_c0(A, c1) if c0 == "required" else float(c0)
                B = synthesize_pair(A, SynthesisConstants(c0=c0, c1=c1), K + 1, p.get("y0"), p.get("label", "B"))
                values["c1"] = c1
                values["c0"] = c0
                values["required_c0"] = required_c0(A, c1)
            else:
                gains = FeedbackGains(float(p.get("alpha", 1.0)), float(p.get("beta", 0.0)))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", CommutativityWarning)
                    B = feedback_pair(A, gains, K + 1, p.get("label", "B"))
                c = constants_from_gains(A, gains)
                values["alpha"] = gains.alpha
                values["beta"] = gains.beta
                values["feedback_constraint_ok"] = bool(coefficients_close(gains.beta, 1 - 1 / gains.alpha, rtol, ATOL))
                values["equivalent_c1"] = c.c1
                values["equivalent_c0"] = c.c0
            values["b1"] = str(B.coeffs[1])
            values["b0"] = str(B.coeffs[0])
            signals["b1"] = B.coeffs[1].tabulate(K)
            signals["b0"] = B.coeffs[0].tabulate(K)
        rep = check_conditions(A, B, K, with_initial_conditions=with_ics, rtol=rtol)
        ab, ba = _outputs(A, B, x, K)
        values.update(_commutativity_values(rep, ab, ba, rtol))
        if A.order == 1 and B.order == 1:
            sim = simulated_equivalent(
                cascade_first_order(A, B, K).inner, cascade_first_order(B, A, K).inner,
                int(p.get("trials", 20)), K, seed, "general" if not rep.relaxed else "zero-state", rtol,
            )
            values["simulated_commutative"] = sim.verdict
        signals["ab"], signals["ba"] = ab, ba
        verdict = rep.commutative

    elif cfg.action == "zero-order":
        A, Z = _pair(cfg)
        if A.order == 0:
            A, Z = Z, A
        rep = zero_order_commutes(A, Z, K, with_initial_conditions=with_ics, rtol=rtol)
        ab = simulate(cascade_with_zero_order(A, Z, "AB", K), x, K)
        ba = simulate(cascade_with_zero_order(A, Z, "BA", K), x, K)
        values.update(_commutativity_values(rep, ab, ba, rtol))
        signals["ab"], signals["ba"] = ab, ba
        verdict = rep.commutative

    elif cfg.action == "robustness":
        A, B = _pair(cfg)
        d = resolve_signal(cfg.disturbance if cfg.disturbance is not None else 0.0, K)
        rep = inject_and_compare(A, B, x, d, K, rtol)
        values["winner"] = rep.winner
        values["max_dev_ab"] = rep.max_dev_ab
        values["max_dev_ba"] = rep.max_dev_ba
        values["bounds_ab"] = rep.bounds_ab
        values["bounds_ba"] = rep.bounds_ba
        values["outputs_agree"] = first_mismatch(rep.clean_ab, rep.clean_ba, rtol, ATOL) is None
        signals.update(
            clean_ab=rep.clean_ab, clean_ba=rep.clean_ba, noisy_ab=rep.noisy_ab,
            noisy_ba=rep.noisy_ba, deviation_ab=rep.deviation_ab, deviation_ba=rep.deviation_ba,
        )
        if cfg.display is not None:
            extra = resolve_signal(cfg.display, K)
            signals["display_ab"] = rep.clean_ab + extra
            signals["display_ba"] = rep.clean_ba + extra
            period = int(p.get("carrier_period", 20))
            start, stop = p.get("mi_window", [0, K])
            values["modulation_index"] = modulation_index(signals["display_ab"], period, int(start), min(int(stop), K))

    else:  # pragma: no cover - parse_config rejects unknown actions
        raise SchemaError("action", f"unknown action {cfg.action!r}")

    files = []
    for key, sig in signals.items():
        path = out / f"{cfg.name}_{key}.csv"
        write_signal_csv(path, sig)
        files.append(str(path))
    status = 1 if (cfg.action in CHECK_ACTIONS and not verdict) else 0
    report = RunReport(cfg.action, values, files, time.perf_counter() - t0, status)
    (out / REPORT_NAME).write_text("\n".join(report.lines()) + "\n", encoding="utf-8")
    return report


def read_report(path) -> dict:
    """Parse ``report.txt`` back into a dict of strings (``file`` keys listed)."""
    result = {"file": []}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        key, _, value = line.partition(": ")
        if key == "file":
            result["file"].append(value)
        else:
            result[key] = value
    return result


def with_overrides(cfg: ScenarioConfig, horizon=None, tolerance=None, **params) -> ScenarioConfig:
    changes = {}
    if horizon is not None:
        changes["horizon"] = horizon
    if tolerance is not None:
        changes["tolerance"] = tolerance
    extra = {k: v for k, v in params.items() if v is not None}
    if extra:
        changes["params"] = {**cfg.params, **extra}
    return replace(cfg, **changes)
