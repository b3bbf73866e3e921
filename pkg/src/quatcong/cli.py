"""Batch command line front end: a declarative JSON config in, JSON or CSV out.

Subcommands map one-to-one onto the computing modules: classify, index,
lefschetz, betti, bianchi, oracle, growth.  All headline numbers are exact:
rationals are serialized as {"num": ..., "den": ...} with decimal-string
parts, large integers as decimal strings, and floats carry an explicit
"tol" alongside.  Exit codes: 0 ok, 2 config error, 3 unsupported input
(e.g. dyadic splitting over a real quadratic base), 4 search-space guard,
5 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import bianchi as bianchi_mod
from . import lefschetz as lefschetz_mod
from . import oracle as oracle_mod
from .congruence import (
    IndexReport,
    LocalIndexFactor,
    LocalProfile,
    congruence_indices,
    index_ratio_squared,
    torsion_free_sufficient,
)
from .errors import (
    ConfigError,
    ConsistencyError,
    GuardExceededError,
    SettingError,
    TwoAdicUnsupportedError,
    UnsupportedFieldError,
)
from .fields import (
    BaseField,
    FactoredIdeal,
    Splitting,
    ideal_from_int,
    parse_ideal,
    primes_above,
    quadratic_extension,
    splitting_in_extension,
)
from .lefschetz import (
    GrowthResult,
    GrowthRow,
    LefschetzReport,
    betti_lower_bound,
    growth_table,
    lefschetz_number,
)
from .quatalg import quaternion_algebra, validate_hyperbolic

DEFAULT_TOL = 1e-10


# ---------------------------------------------------------------------------
# JSON encoding helpers


def rational_json(x: Fraction) -> dict:
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(d: dict) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def real_json(value: float, tol: float) -> dict:
    return {"value": value, "tol": tol}


def _field_json(field: BaseField):
    return "Q" if field.is_rationals else {"sqrt": field.radicand}


def index_report_json(field: BaseField, ideal: FactoredIdeal, report: IndexReport) -> dict:
    return {
        "field": _field_json(field),
        "ideal": str(ideal),
        "index_K0": str(report.index_base),
        "index_K": str(report.index_extended),
        "ratio_squared": rational_json(report.ratio_squared),
        "per_prime": [
            {
                "prime": str(f.profile.prime),
                "exponent": f.profile.exponent,
                "d0_ramified": f.profile.d0_ramified,
                "splitting": f.profile.splitting.value,
                "order_G0": str(f.order_base),
                "order_G": str(f.order_extended),
                "q_squared": rational_json(f.q_squared),
            }
            for f in report.per_prime
        ],
    }


def index_report_from_json(d: dict) -> IndexReport:
    field = _build_field(d["field"])
    factors = []
    for row in d["per_prime"]:
        prime = _prime_from_text(field, row["prime"])
        profile = LocalProfile(
            prime, row["exponent"], row["d0_ramified"], Splitting(row["splitting"])
        )
        factors.append(
            LocalIndexFactor(
                profile,
                int(row["order_G0"]),
                int(row["order_G"]),
                rational_from_json(row["q_squared"]),
            )
        )
    return IndexReport(
        int(d["index_K0"]),
        int(d["index_K"]),
        tuple(factors),
        rational_from_json(d["ratio_squared"]),
    )


def lefschetz_report_json(report: LefschetzReport) -> dict:
    return {
        "mode": report.mode,
        "sign": report.sign,
        "value": None if report.value is None else rational_json(report.value),
        "magnitude_bound": rational_json(report.magnitude_bound),
        "components": {
            "d": report.degree,
            "s": report.split_real,
            "r": report.ramified_real,
            "c": report.complexified,
            "rho": report.surviving_ramified,
            "delta": str(report.norm_product),
            "index_K0": str(report.index_base),
            "h1_factor_known": report.h1_factor_known,
        },
        "torsion_verified": report.torsion_verified,
    }


def lefschetz_report_from_json(d: dict) -> LefschetzReport:
    comp = d["components"]
    return LefschetzReport(
        mode=d["mode"],
        sign=d["sign"],
        value=None if d["value"] is None else rational_from_json(d["value"]),
        magnitude_bound=rational_from_json(d["magnitude_bound"]),
        degree=comp["d"],
        split_real=comp["s"],
        ramified_real=comp["r"],
        complexified=comp["c"],
        surviving_ramified=comp["rho"],
        norm_product=int(comp["delta"]),
        index_base=int(comp["index_K0"]),
        h1_factor_known=comp["h1_factor_known"],
        torsion_verified=d["torsion_verified"],
    )


def growth_json(field: BaseField, result: GrowthResult) -> dict:
    return {
        "field": _field_json(field),
        "rows": [
            {
                "ideal": str(row.ideal),
                "index": str(row.index),
                "betti_bound": rational_json(row.betti_bound),
                "ratio": row.ratio,
            }
            for row in result.rows
        ],
        "kappa": result.kappa,
    }


def growth_from_json(d: dict) -> GrowthResult:
    field = _build_field(d["field"])
    rows = tuple(
        GrowthRow(
            parse_ideal(field, row["ideal"]),
            int(row["index"]),
            rational_from_json(row["betti_bound"]),
            row["ratio"],
        )
        for row in d["rows"]
    )
    return GrowthResult(rows, d["kappa"])


# ---------------------------------------------------------------------------
# Config parsing


def _check_keys(d: dict, allowed, where: str):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys {sorted(unknown)} in {where}")


def _build_field(spec) -> BaseField:
    if spec == "Q":
        return BaseField.rationals()
    if isinstance(spec, dict):
        _check_keys(spec, {"sqrt"}, "field")
        if "sqrt" not in spec:
            raise ConfigError("field object needs a 'sqrt' key")
        return BaseField.real_quadratic(int(spec["sqrt"]))
    raise ConfigError(f"bad field descriptor {spec!r}")


def _build_extension(field: BaseField, spec):
    if not isinstance(spec, dict):
        raise ConfigError("extension must be an object with a 'theta' key")
    _check_keys(spec, {"theta"}, "extension")
    if "theta" not in spec:
        raise ConfigError("extension needs a 'theta' key")
    theta = spec["theta"]
    if isinstance(theta, list):
        theta = tuple(int(t) for t in theta)
    else:
        theta = int(theta)
    return quadratic_extension(field, theta)


def _prime_from_text(field: BaseField, text: str):
    token = text.strip()
    selector = None
    if "." in token:
        token, suffix = token.split(".", 1)
        selector = {"1": "first_root", "2": "second_root"}.get(suffix)
        if selector is None:
            raise ConfigError(f"bad prime token {text!r}")
    above = primes_above(field, int(token))
    if selector is None:
        if len(above) > 1:
            raise ConfigError(f"{token} splits in {field}: use {token}.1 or {token}.2")
        return above[0]
    match = [q for q in above if q.selector == selector]
    if not match:
        raise ConfigError(f"{token} does not split in {field}")
    return match[0]


def _build_algebra(field: BaseField, spec):
    if not isinstance(spec, dict):
        raise ConfigError("algebra must be an object")
    _check_keys(spec, {"hilbert", "ram"}, "algebra")
    if ("hilbert" in spec) == ("ram" in spec):
        raise ConfigError("algebra needs exactly one of 'hilbert' or 'ram'")
    if "hilbert" in spec:
        pair = spec["hilbert"]
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError("'hilbert' must be a pair [a, b]")
        return quaternion_algebra(field, hilbert=(int(pair[0]), int(pair[1])))
    finite = []
    infinite = []
    for token in spec["ram"]:
        text = str(token).strip()
        if text.startswith("inf"):
            tail = text[3:]
            place = 0 if tail in ("", "1") else 1 if tail == "2" else None
            if place is None:
                raise ConfigError(f"bad real place token {token!r}")
            infinite.append(place)
        else:
            finite.append(_prime_from_text(field, text))
    return quaternion_algebra(field, finite=finite, infinite=infinite)


def _build_ideal(field: BaseField, spec) -> FactoredIdeal:
    if isinstance(spec, int):
        return ideal_from_int(field, spec)
    if isinstance(spec, str):
        return parse_ideal(field, spec)
    raise ConfigError(f"bad ideal descriptor {spec!r}")


_TRIPLE_KEYS = {"field", "extension", "algebra", "ideal", "ideals", "tolerance"}


def _load_triple(cfg: dict, need_ideal=True, need_sequence=False):
    _check_keys(cfg, _TRIPLE_KEYS, "config")
    for key in ("field", "extension", "algebra"):
        if key not in cfg:
            raise ConfigError(f"config needs a '{key}' section")
    field = _build_field(cfg["field"])
    ext = _build_extension(field, cfg["extension"])
    algebra = _build_algebra(field, cfg["algebra"])
    ideal = None
    ideals = None
    if need_ideal:
        if "ideal" not in cfg:
            raise ConfigError("config needs an 'ideal'")
        ideal = _build_ideal(field, cfg["ideal"])
    if need_sequence:
        if "ideals" not in cfg or not isinstance(cfg["ideals"], list):
            raise ConfigError("config needs an 'ideals' list")
        ideals = [_build_ideal(field, spec) for spec in cfg["ideals"]]
    return field, ext, algebra, ideal, ideals


# ---------------------------------------------------------------------------
# Command implementations


def _cmd_classify(cfg: dict, tol: float):
    field, ext, algebra, ideal, _ = _load_triple(cfg)
    rows = []
    for prime, exponent in ideal.entries:
        ram = algebra.ramified_at(prime)
        split = splitting_in_extension(ext, prime)
        profile = LocalProfile(prime, exponent, ram, split)
        rows.append(
            {
                "prime": str(prime),
                "norm": prime.norm,
                "exponent": exponent,
                "splitting": split.value,
                "d0_ramified": ram,
                "q_squared": rational_json(index_ratio_squared(profile)),
            }
        )
    payload = {
        "command": "classify",
        "field": _field_json(field),
        "ideal": str(ideal),
        "rows": rows,
    }
    csv_lines = ["prime,norm,exponent,splitting,d0_ramified,q_squared"]
    for row in rows:
        q = Fraction(int(row["q_squared"]["num"]), int(row["q_squared"]["den"]))
        csv_lines.append(
            f"{row['prime']},{row['norm']},{row['exponent']},{row['splitting']},"
            f"{row['d0_ramified']},{q}"
        )
    return payload, "\n".join(csv_lines) + "\n"


def _cmd_index(cfg: dict, tol: float):
    field, ext, algebra, ideal, _ = _load_triple(cfg)
    report = congruence_indices(algebra, ext, ideal)
    payload = {"command": "index"}
    payload.update(index_report_json(field, ideal, report))
    return payload, None


def _cmd_lefschetz(cfg: dict, tol: float):
    _, ext, algebra, ideal, _ = _load_triple(cfg)
    report = lefschetz_number(ext, algebra, ideal, zeta_tol=min(tol, 1e-12))
    payload = {"command": "lefschetz"}
    payload.update(lefschetz_report_json(report))
    return payload, None


def _cmd_betti(cfg: dict, tol: float):
    field, ext, algebra, ideal, _ = _load_triple(cfg)
    setting = validate_hyperbolic(field, ext, algebra)
    bound = betti_lower_bound(setting, ideal)
    report = congruence_indices(algebra, ext, ideal)
    payload = {
        "command": "betti",
        "field": _field_json(field),
        "ideal": str(ideal),
        "betti_bound": rational_json(bound),
        "index": str(report.index_extended),
        "ratio": float(bound) / report.index_extended ** 0.5,
        "torsion_verified": torsion_free_sufficient(ideal),
        "unramified_over_2": setting.unramified_over_two,
    }
    return payload, None


def _cmd_growth(cfg: dict, tol: float):
    field, ext, algebra, _, ideals = _load_triple(cfg, need_ideal=False, need_sequence=True)
    setting = validate_hyperbolic(field, ext, algebra)
    result = growth_table(setting, ideals)
    payload = {"command": "growth"}
    payload.update(growth_json(field, result))
    return payload, lefschetz_mod.growth_csv(result)


def _cmd_bianchi(cfg: dict, tol: float):
    _check_keys(cfg, {"bianchi", "tolerance"}, "config")
    if "bianchi" not in cfg:
        raise ConfigError("config needs a 'bianchi' section")
    spec = cfg["bianchi"]
    _check_keys(
        spec, {"radicand", "ideal", "lefschetz_level", "asymptotic", "allow_unverified"},
        "bianchi",
    )
    if "radicand" not in spec:
        raise ConfigError("bianchi section needs a 'radicand'")
    field = bianchi_mod.bianchi_field(int(spec["radicand"]), zeta_tol=tol)
    payload = {
        "command": "bianchi",
        "radicand": field.radicand,
        "discriminant": field.discriminant,
        "class_number": field.class_number,
        "unit_order": field.unit_order,
        "zeta_two": real_json(field.zeta_two_value, field.zeta_tolerance),
    }
    csv_text = None
    if "ideal" in spec:
        ideal = bianchi_mod.ideal_of_extension(field, int(spec["ideal"]))
        allow = bool(spec.get("allow_unverified", False))
        bound, cusps = bianchi_mod.cusp_betti_bound(field, ideal, allow)
        payload["level"] = {
            "ideal": str(ideal),
            "norm": str(ideal.norm),
            "index": str(bianchi_mod.congruence_index(field, ideal)),
            "cusps": str(cusps),
            "betti_bound": real_json(bound, tol),
        }
    if "lefschetz_level" in spec:
        level = int(spec["lefschetz_level"])
        value = bianchi_mod.galois_lefschetz_number(field.radicand, level)
        payload["lefschetz"] = {"level": level, "value": rational_json(value)}
    if "asymptotic" in spec:
        asym = spec["asymptotic"]
        _check_keys(asym, {"p", "k_max"}, "bianchi.asymptotic")
        rows = bianchi_mod.split_prime_power_table(
            field, int(asym["p"]), int(asym.get("k_max", 5))
        )
        payload["asymptotic"] = {
            "rows": [
                {"k": r.k, "index": str(r.index), "bound": r.bound, "ratio": r.ratio}
                for r in rows
            ]
        }
        csv_text = bianchi_mod.asymptotic_csv(rows)
    return payload, csv_text


def _cmd_oracle(cfg: dict, tol: float):
    _check_keys(cfg, {"oracle", "tolerance"}, "config")
    if "oracle" not in cfg:
        raise ConfigError("config needs an 'oracle' section")
    spec = cfg["oracle"]
    _check_keys(
        spec, {"p", "e", "method", "unit", "explore_dyadic", "with_h1"}, "oracle"
    )
    if spec.get("explore_dyadic"):
        rows = oracle_mod.explore_dyadic_ramified()
        payload = {"command": "oracle", "explore_dyadic": rows}
        csv_lines = ["p,e,ext_type,d0_type,unit,group_order,cocycle_count,class_count"]
        for r in rows:
            csv_lines.append(
                f"{r['p']},{r['e']},{r['ext_type']},{r['d0_type']},{r['unit']},"
                f"{r['group_order']},{r['cocycle_count']},{r['class_count']}"
            )
        return payload, "\n".join(csv_lines) + "\n"
    if "p" not in spec or "e" not in spec:
        raise ConfigError("oracle section needs 'p' and 'e'")
    report = oracle_mod.verify_local_counts(
        int(spec["p"]),
        int(spec["e"]),
        method=str(spec.get("method", "auto")),
        unit=int(spec.get("unit", 1)),
        with_h1=bool(spec.get("with_h1", True)),
    )
    payload = {"command": "oracle"}
    payload.update(report)
    csv_lines = ["p,e,ext_type,d0_type,group_order,cocycle_count,class_count"]
    for r in report["profiles"]:
        csv_lines.append(
            f"{r['p']},{r['e']},{r['ext_type']},{r['d0_type']},{r['group_order']},"
            f"{r.get('cocycle_count', '')},{r.get('class_count', '')}"
        )
    return payload, "\n".join(csv_lines) + "\n"


_COMMANDS = {
    "classify": _cmd_classify,
    "index": _cmd_index,
    "lefschetz": _cmd_lefschetz,
    "betti": _cmd_betti,
    "bianchi": _cmd_bianchi,
    "oracle": _cmd_oracle,
    "growth": _cmd_growth,
}


def _exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, GuardExceededError):
        return 4
    if isinstance(exc, ConsistencyError):
        return 5
    if isinstance(exc, (TwoAdicUnsupportedError, UnsupportedFieldError)):
        return 3
    if isinstance(exc, (ConfigError, SettingError, ValueError, KeyError, TypeError)):
        return 2
    raise exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatcong",
        description="Exact congruence-subgroup invariants for quaternionic groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to a JSON config")
        cmd.add_argument("--out", default=None, help="output path (default stdout)")
        cmd.add_argument("--format", choices=("json", "csv"), default="json")
        cmd.add_argument("--tol", type=float, default=None)
        cmd.add_argument(
            "--single-thread",
            action="store_true",
            help="force the sequential certification path (already the default)",
        )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as handle:
            cfg = json.load(handle)
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        tol = args.tol if args.tol is not None else float(cfg.get("tolerance", DEFAULT_TOL))
        payload, csv_text = _COMMANDS[args.command](cfg, tol)
        if args.format == "csv":
            if csv_text is None:
                raise ConfigError(f"command {args.command} has no CSV form")
            text = csv_text
        else:
            text = json.dumps(payload, indent=2) + "\n"
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: bad JSON config: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - mapped to documented exit codes
        code = _exit_code_for(exc)
        print(f"error: {exc}", file=sys.stderr)
        return code
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
