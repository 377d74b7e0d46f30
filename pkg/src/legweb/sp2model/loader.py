"""Reader for the declarative model and derivation-table files."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from ..exterior import COFRAME, DerivationTable, Form, MatrixForm
from ..exterior.parse import parse_form, parse_value
from ..symkernel import REGISTRY, Origin, ParseError, Poly

_HEADER = re.compile(r"^\[(\w+)\s+(\w+)\]$")
_ENTRY = re.compile(r"^(printed\s+)?phi\[(\d)\]\[(\d)\]\s*=\s*(.+)$")


@dataclass
class Section:
    kind: str
    name: str
    lines: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class Model:
    name: str
    phi: MatrixForm
    printed: dict[tuple[int, int], Form]


def _logical_lines(text: str) -> list[tuple[int, str]]:
    out: list[tuple[int, str]] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace() and out:
            prev_no, prev = out[-1]
            out[-1] = (prev_no, prev + " " + line.strip())
        else:
            out.append((no, line.strip()))
    return out


def parse_sections(text: str) -> dict[tuple[str, str], Section]:
    sections: dict[tuple[str, str], Section] = {}
    cur = None
    for no, line in _logical_lines(text):
        m = _HEADER.match(line)
        if m:
            cur = Section(m.group(1), m.group(2))
            sections[(cur.kind, cur.name)] = cur
        elif cur is None:
            raise ParseError(f"line {no}: content before the first section header")
        else:
            cur.lines.append((no, line))
    return sections


@lru_cache(maxsize=None)
def data_file(name: str) -> dict[tuple[str, str], Section]:
    text = resources.files("legweb.data").joinpath(name).read_text()
    return parse_sections(text)


def section(file: str, kind: str, name: str) -> Section:
    try:
        return data_file(file)[(kind, name)]
    except KeyError:
        raise KeyError(f"no [{kind} {name}] section in {file}") from None


def apply_table(sec: Section, table: DerivationTable) -> None:
    """Load ``d X = ...`` entries and ``bind X = ...`` lines into ``table``."""
    for no, line in sec.lines:
        if line.startswith("d "):
            lhs, rhs = line[2:].split("=", 1)
            name = lhs.strip()
            mod_th = rhs.rstrip().endswith("mod th")
            if mod_th:
                rhs = rhs.rstrip()[: -len("mod th")]
            REGISTRY.register(name)
            f = parse_form(rhs)
            if mod_th:
                if not f.coeff(1 << COFRAME.index("th")).is_zero():
                    raise ParseError(f"line {no}: explicit th-term together with 'mod th'")
                child = f"{name}_0"
                REGISTRY.register(child, None, Origin.FRESH)
                f = f + Form.linear({COFRAME.index("th"): Poly.var(child)})
            table.set_entry(name, f, tag=f"{sec.name}:{no}")
        elif line.startswith("bind "):
            lhs, rhs = line[5:].split("=", 1)
            table.bind(lhs.strip(), parse_value(rhs), tag=f"{sec.name}:{no}")
        else:
            raise ParseError(f"line {no}: unrecognized table line {line!r}")
    REGISTRY.infer_missing()


def load_model(sec: Section) -> Model:
    macros: dict[str, Poly | Form] = {}
    rows = [[Form() for _ in range(4)] for _ in range(4)]
    printed: dict[tuple[int, int], Form] = {}
    for no, line in sec.lines:
        if line.startswith("let "):
            lhs, rhs = line[4:].split("=", 1)
            macros[lhs.strip()] = parse_value(rhs, macros)
            continue
        m = _ENTRY.match(line)
        if not m:
            raise ParseError(f"line {no}: unrecognized model line {line!r}")
        i, j = int(m.group(2)), int(m.group(3))
        f = parse_form(m.group(4), macros)
        if m.group(1):
            printed[(i, j)] = f
        else:
            rows[i][j] = f
    REGISTRY.infer_missing()
    return Model(sec.name, MatrixForm(rows), printed)


def load_coframe(sec: Section) -> dict[int, Form]:
    out = {}
    for no, line in sec.lines:
        if not line.startswith("d "):
            raise ParseError(f"line {no}: unrecognized coframe line {line!r}")
        lhs, rhs = line[2:].split("=", 1)
        out[COFRAME.index(lhs.strip())] = parse_form(rhs)
    return out
