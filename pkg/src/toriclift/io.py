"""
JSON reading and writing for fans, divisors and cover specs.

Errors in input files are reported with a JSON pointer to the offending
field.  Output is canonical: sorted keys, two-space indent, rationals as
``{"num": .., "den": ..}`` in lowest terms, trailing newline.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .cover import CoverSpec, P1Curve
from .divisor import QDivisor
from .errors import ValidationError
from .fan import FIXTURE_BUILDERS, Fan, validate


class InputError(ValidationError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer or "/"
        super().__init__(f"{self.pointer}: {message}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def rational_json(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError("", f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("", f"{path} is not valid JSON ({e.msg} at line {e.lineno})") from None


def _int(obj, ptr) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InputError(ptr, f"expected an integer, got {obj!r}")
    return obj


def _list(obj, ptr) -> list:
    if not isinstance(obj, list):
        raise InputError(ptr, f"expected a list, got {type(obj).__name__}")
    return obj


def parse_rational(obj, ptr) -> Fraction:
    """Accepts an integer, a string ``"a/b"`` or ``{"num": a, "den": b}``."""
    if isinstance(obj, dict):
        for k in ("num", "den"):
            if k not in obj:
                raise InputError(f"{ptr}/{k}", "missing field")
        num, den = _int(obj["num"], f"{ptr}/num"), _int(obj["den"], f"{ptr}/den")
        if den == 0:
            raise InputError(f"{ptr}/den", "zero denominator")
        return Fraction(num, den)
    if isinstance(obj, str):
        try:
            return Fraction(obj)
        except (ValueError, ZeroDivisionError):
            raise InputError(ptr, f"not a rational number: {obj!r}") from None
    return Fraction(_int(obj, ptr))


def fan_from_obj(obj, ptr: str = "") -> Fan:
    if not isinstance(obj, dict):
        raise InputError(ptr, "a fan is an object with rank, rays, max_cones")
    for k in ("rank", "rays", "max_cones"):
        if k not in obj:
            raise InputError(f"{ptr}/{k}", "missing field")
    rank = _int(obj["rank"], f"{ptr}/rank")
    rays = [[_int(x, f"{ptr}/rays/{i}/{j}") for j, x in enumerate(_list(v, f"{ptr}/rays/{i}"))]
            for i, v in enumerate(_list(obj["rays"], f"{ptr}/rays"))]
    cones = [[_int(x, f"{ptr}/max_cones/{i}/{j}") for j, x in enumerate(_list(c, f"{ptr}/max_cones/{i}"))]
             for i, c in enumerate(_list(obj["max_cones"], f"{ptr}/max_cones"))]
    try:
        return Fan(rank, rays, cones)
    except ValidationError as e:
        raise InputError(ptr, str(e)) from None


def load_fan(path, check: bool = True) -> Fan:
    """Load a fan file, or a fixture by name (``p2``, ``f3`` ...) when no such file exists."""
    p = Path(path)
    if not p.exists() and str(path) in FIXTURE_BUILDERS:
        return FIXTURE_BUILDERS[str(path)]()
    f = fan_from_obj(load_json(p))
    if check:
        problems = validate(f)
        if problems:
            raise ValidationError("; ".join(problems))
    return f


def _resolve_fan(ref, base_dir: Path, ptr: str) -> Fan:
    if isinstance(ref, dict):
        f = fan_from_obj(ref, ptr)
        problems = validate(f)
        if problems:
            raise InputError(ptr, "; ".join(problems))
        return f
    if isinstance(ref, str):
        p = base_dir / ref
        if p.exists():
            return load_fan(p)
        if ref in FIXTURE_BUILDERS:
            return FIXTURE_BUILDERS[ref]()
        raise InputError(ptr, f"fan file {ref!r} not found")
    raise InputError(ptr, "expected a fan object or a fan file name")


def divisor_from_obj(obj, fan: Fan = None, base_dir: Path = Path("."), ptr: str = "") -> QDivisor:
    if isinstance(obj, list):
        obj = {"coeffs": obj}
    if not isinstance(obj, dict):
        raise InputError(ptr, "a divisor is an object with coeffs")
    if "fan" in obj:
        fan = _resolve_fan(obj["fan"], base_dir, f"{ptr}/fan")
    if fan is None:
        raise InputError(f"{ptr}/fan", "missing field and no fan given on the command line")
    if "coeffs" not in obj:
        raise InputError(f"{ptr}/coeffs", "missing field")
    coeffs = [parse_rational(c, f"{ptr}/coeffs/{i}") for i, c in enumerate(_list(obj["coeffs"], f"{ptr}/coeffs"))]
    if len(coeffs) != fan.n_rays:
        raise InputError(f"{ptr}/coeffs", f"expected {fan.n_rays} coefficients, got {len(coeffs)}")
    return QDivisor(fan, coeffs)


def load_divisor(path, fan: Fan = None) -> QDivisor:
    p = Path(path)
    return divisor_from_obj(load_json(p), fan, p.parent)


def divisor_json(D: QDivisor, fan_ref=None) -> dict:
    out = {"coeffs": [rational_json(c) for c in D.coeffs]}
    out["fan"] = D.fan.to_json() if fan_ref is None else fan_ref
    return out


def cover_spec_from_obj(obj, base_dir: Path = Path(".")) -> CoverSpec:
    if not isinstance(obj, dict):
        raise InputError("", "a cover spec is an object")
    for k in ("base", "L_coeffs", "N", "D_coeffs", "p"):
        if k not in obj:
            raise InputError(f"/{k}", "missing field")
    base = obj["base"]
    if isinstance(base, dict) and "curve" in base:
        if base["curve"] != "P1":
            raise InputError("/base/curve", "only the curve P1 is supported")
        base = P1Curve()
    else:
        base = _resolve_fan(base, base_dir, "/base")
    L = [parse_rational(c, f"/L_coeffs/{i}") for i, c in enumerate(_list(obj["L_coeffs"], "/L_coeffs"))]
    D = [parse_rational(c, f"/D_coeffs/{i}") for i, c in enumerate(_list(obj["D_coeffs"], "/D_coeffs"))]
    N = _int(obj["N"], "/N")
    p = _int(obj["p"], "/p")
    branch = obj.get("branch", "invariant")
    try:
        return CoverSpec(base, tuple(L), N, tuple(D), p, branch)
    except ValidationError as e:
        raise InputError("", str(e)) from None


def load_cover_spec(path) -> CoverSpec:
    p = Path(path)
    return cover_spec_from_obj(load_json(p), p.parent)
