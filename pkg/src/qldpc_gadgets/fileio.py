"""Reading and writing parity-check matrices and code snapshots.

alist
    The usual LDPC layout: ``N M``, then the largest column and row
    degrees, the N column degrees, the M row degrees, N lines of 1-based
    row indices per column and M lines of 1-based column indices per row.
    Lists are padded with zeros to the largest degree.  A CSS code is
    written as the stacked matrix ``[H_X; H_Z]``; the split is not stored,
    so reading one back as a code needs the number of X rows.

json
    ``{"schema": 1, "n": n, "h_x": [[cols...], ...], "h_z": [[...], ...]}``
    with 0-based column indices; ``"name"`` is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .css import CssCode
from .gadget import Gadget
from .gf2 import BitMatrix, mask_of
from .pauli import PauliOperator

SCHEMA = 1


class FormatError(ValueError):
    """A file could not be parsed; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


# alist ----------------------------------------------------------------------


def alist_lines(m: BitMatrix) -> list[str]:
    cols = m.column_supports()
    rows = m.supports()
    max_c = max((len(c) for c in cols), default=0)
    max_r = max((len(r) for r in rows), default=0)

    def padded(idx, width):
        vals = [i + 1 for i in idx] + [0] * (width - len(idx))
        return " ".join(map(str, vals))

    out = [f"{m.ncols} {m.nrows}", f"{max_c} {max_r}"]
    out.append(" ".join(str(len(c)) for c in cols))
    out.append(" ".join(str(len(r)) for r in rows))
    out += [padded(c, max_c) for c in cols]
    out += [padded(r, max_r) for r in rows]
    return out


def dumps_alist(m: BitMatrix) -> str:
    return "\n".join(alist_lines(m)) + "\n"


def loads_alist(text: str) -> BitMatrix:
    lines = text.splitlines()

    def ints(i: int, count: int | None = None) -> list[int]:
        if i >= len(lines):
            raise FormatError("unexpected end of file", i + 1)
        try:
            vals = [int(t) for t in lines[i].split()]
        except ValueError:
            raise FormatError(f"non-integer token in {lines[i]!r}", i + 1) from None
        if count is not None and len(vals) != count:
            raise FormatError(f"expected {count} integers, found {len(vals)}", i + 1)
        if any(v < 0 for v in vals):
            raise FormatError("negative value", i + 1)
        return vals

    ncols, nrows = ints(0, 2)
    max_c, max_r = ints(1, 2)
    col_deg = ints(2, ncols) if ncols else (ints(2, 0) if len(lines) > 2 else [])
    row_deg = ints(3, nrows) if nrows else (ints(3, 0) if len(lines) > 3 else [])
    if any(c > max_c for c in col_deg):
        raise FormatError("column degree exceeds the stated maximum", 3)
    if any(r > max_r for r in row_deg):
        raise FormatError("row degree exceeds the stated maximum", 4)
    expected = 4 + ncols + nrows
    # empty index lists are blank lines, so only surplus blank lines may be dropped
    while len(lines) > expected and not lines[-1].strip():
        lines.pop()
    if len(lines) != expected:
        raise FormatError(f"expected {expected} lines, found {len(lines)}", min(len(lines), expected) + 1)

    def entries(i: int, degree: int, limit: int, width: int) -> list[int]:
        vals = ints(i)
        if len(vals) not in (degree, width):
            raise FormatError(f"expected {degree} entries (or {width} padded)", i + 1)
        real, pad = vals[:degree], vals[degree:]
        if any(v == 0 for v in real) or any(v != 0 for v in pad):
            raise FormatError("misplaced zero padding", i + 1)
        if any(v > limit for v in real):
            raise FormatError(f"index out of range 1..{limit}", i + 1)
        if len(set(real)) != len(real):
            raise FormatError("repeated index", i + 1)
        return [v - 1 for v in real]

    col_lists = [entries(4 + j, col_deg[j], nrows, max_c) for j in range(ncols)]
    row_lists = [entries(4 + ncols + i, row_deg[i], ncols, max_r) for i in range(nrows)]
    m = BitMatrix.from_supports(row_lists, ncols)
    if [sorted(c) for c in m.column_supports()] != [sorted(c) for c in col_lists]:
        raise FormatError("column lists disagree with row lists", 5)
    return m


def stacked(code: CssCode) -> BitMatrix:
    return code.h_x.vstack(code.h_z)


def split_stacked(m: BitMatrix, m_x: int) -> CssCode:
    if not 0 <= m_x <= m.nrows:
        raise ValueError("bad X-row count")
    rows = m.rows
    return CssCode(BitMatrix(rows[:m_x], m.ncols), BitMatrix(rows[m_x:], m.ncols))


# json -----------------------------------------------------------------------


def code_to_dict(code: CssCode) -> dict:
    out: dict[str, Any] = {
        "schema": SCHEMA,
        "n": code.n,
        "h_x": [list(r) for r in code.h_x.supports()],
        "h_z": [list(r) for r in code.h_z.supports()],
    }
    if code.name:
        out["name"] = code.name
    return out


def _matrix(rows: Any, n: int, key: str) -> BitMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise FormatError(f"{key} must be a list of index lists")
    for r in rows:
        if any(not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < n for i in r):
            raise FormatError(f"{key} has an index outside 0..{n - 1}")
        if len(set(r)) != len(r):
            raise FormatError(f"{key} has a repeated index")
    return BitMatrix.from_supports(rows, n)


def code_from_dict(data: Any) -> CssCode:
    if not isinstance(data, dict):
        raise FormatError("top level must be an object")
    if data.get("schema") != SCHEMA:
        raise FormatError(f"unsupported schema {data.get('schema')!r}")
    n = data.get("n")
    if not isinstance(n, int) or n < 0:
        raise FormatError("n must be a non-negative integer")
    return CssCode(_matrix(data.get("h_x"), n, "h_x"), _matrix(data.get("h_z"), n, "h_z"),
                   name=data.get("name"))


def _loads_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno) from None


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# file helpers ----------------------------------------------------------------


def export_parity_checks(code: CssCode, path: str | Path, fmt: str = "json") -> None:
    Path(path).write_text(format_parity_checks(code, fmt))


def format_parity_checks(code: CssCode, fmt: str = "json") -> str:
    if fmt == "alist":
        return dumps_alist(stacked(code))
    if fmt == "json":
        return dumps_json(code_to_dict(code))
    raise ValueError(f"unknown format {fmt!r}")


def import_parity_checks(path: str | Path, fmt: str = "json", m_x: int | None = None):
    """A :class:`CssCode`, or for alist without ``m_x`` the stacked :class:`BitMatrix`."""
    text = Path(path).read_text()
    if fmt == "alist":
        m = loads_alist(text)
        return m if m_x is None else split_stacked(m, m_x)
    if fmt == "json":
        return code_from_dict(_loads_json(text))
    raise ValueError(f"unknown format {fmt!r}")


# snapshots ------------------------------------------------------------------


def _pauli_dict(p: PauliOperator) -> dict:
    return {"n": p.n, "x": list(p.x_support), "z": list(p.z_support)}


def _pauli_from(d: dict) -> PauliOperator:
    return PauliOperator(d["n"], x=mask_of(d["x"]), z=mask_of(d["z"]))


def gadget_to_dict(g: Gadget) -> dict:
    def idx(m: int) -> list[int]:
        return [t for t in range(g.num_qubits) if (m >> t) & 1]

    return {
        "kind": g.kind,
        "seed": _pauli_dict(g.seed),
        "chi_qubits": list(g.chi_qubits),
        "kappa_checks": list(g.kappa_checks),
        "chi_support": [idx(m) for m in g.chi_support],
        "gauge": [idx(m) for m in g.gauge],
        "extra_edges": [list(e) for e in g.extra_edges],
    }


def gadget_from_dict(d: dict) -> Gadget:
    return Gadget(
        kind=d["kind"],
        seed=_pauli_from(d["seed"]),
        chi_qubits=tuple(d["chi_qubits"]),
        kappa_checks=tuple(d["kappa_checks"]),
        chi_support=tuple(mask_of(s) for s in d["chi_support"]),
        gauge=tuple(mask_of(s) for s in d["gauge"]),
        extra_edges=tuple(tuple(e) for e in d["extra_edges"]),
    )


@dataclass
class CodeBundle:
    """Serializable snapshot: code definition, matrices, seeds, gadgets and reports."""

    spec: dict
    code: CssCode
    seeds: dict[str, PauliOperator] = field(default_factory=dict)
    gadgets: dict[str, Gadget] = field(default_factory=dict)
    reports: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "spec": self.spec,
            "code": code_to_dict(self.code),
            "seeds": {k: _pauli_dict(v) for k, v in sorted(self.seeds.items())},
            "gadgets": {k: gadget_to_dict(v) for k, v in sorted(self.gadgets.items())},
            "reports": self.reports,
        }

    def dumps(self) -> str:
        return dumps_json(self.to_dict())

    @classmethod
    def from_dict(cls, d: Any) -> "CodeBundle":
        if not isinstance(d, dict) or d.get("schema") != SCHEMA:
            raise FormatError("not a schema-1 bundle")
        try:
            return cls(
                spec=d["spec"],
                code=code_from_dict(d["code"]),
                seeds={k: _pauli_from(v) for k, v in d.get("seeds", {}).items()},
                gadgets={k: gadget_from_dict(v) for k, v in d.get("gadgets", {}).items()},
                reports=d.get("reports", {}),
            )
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed bundle: {exc}") from None

    @classmethod
    def loads(cls, text: str) -> "CodeBundle":
        return cls.from_dict(_loads_json(text))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CodeBundle) and self.to_dict() == other.to_dict()
