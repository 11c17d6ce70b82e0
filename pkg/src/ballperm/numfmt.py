"""Angle parsing and fixed-width number formatting shared by the JSON and CLI layers."""

from __future__ import annotations

import math
import re
from fractions import Fraction

DIGITS = 12

_PI_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?:(?P<num>\d+(?:\.\d+)?)\s*\*?\s*)?pi\s*(?:/\s*(?P<den>\d+(?:\.\d+)?))?\s*$",
    re.IGNORECASE,
)


def parse_angle(value: float | int | str) -> float:
    """Radians from a number or a string such as ``"pi/4"``, ``"-3*pi/8"`` or ``"0.5"``."""
    if isinstance(value, bool):
        raise ValueError("angle must be numeric")
    if isinstance(value, (int, float)):
        return float(value)
    text = str(value).strip()
    m = _PI_RE.match(text)
    if m:
        num = Fraction(m.group("num") or "1")
        den = Fraction(m.group("den") or "1")
        if den == 0:
            raise ValueError(f"zero denominator in angle {text!r}")
        out = float(num / den) * math.pi
        return -out if m.group("sign") == "-" else out
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"cannot parse angle {text!r}") from None


def fmt_real(x: float) -> str:
    x = round(float(x), DIGITS) + 0.0  # + 0.0 drops negative zero
    return f"{x:.{DIGITS}f}"


def fmt_complex(z: complex) -> str:
    z = complex(z)
    re_part = fmt_real(z.real)
    im = round(z.imag, DIGITS) + 0.0
    sign = "-" if im < 0 else "+"
    return f"{re_part}{sign}{abs(im):.{DIGITS}f}i"
