"""Plain-text import/export for character tables and class functions.

Table file::

    group <kind> <param> ...
    class <id> <size> <label>
    square <id> <id>            (optional, class of g^2)
    chi <label> <degree> <re> <im> <re> <im> ...

Class function file::

    group <kind> <param> ...
    value <class id> <re> <im>

Floats are written with ``repr`` so export followed by import is bit-exact.
Lines starting with ``#`` are ignored.
"""

from __future__ import annotations

from typing import TextIO

import numpy as np

from ..errors import DataFormatError, InputError
from . import finite
from .classfun import ClassFunction
from .finite import FiniteGroup
from .tables import CharacterTable, character_table


def _header(g: FiniteGroup) -> str:
    return " ".join(["group", g.kind, *map(str, g.params)])


def dump_table(t: CharacterTable, out: TextIO) -> None:
    g = t.group
    out.write(_header(g) + "\n")
    for c, (size, lab) in enumerate(zip(g.class_sizes, g.class_labels)):
        out.write(f"class {c} {size} {lab}\n")
    for c, s in enumerate(g.square_map):
        out.write(f"square {c} {s}\n")
    for lab, deg, row in zip(t.labels, t.degrees, t.values):
        vals = " ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row)
        out.write(f"chi {lab} {deg} {vals}\n")


def _lines(src: TextIO):
    for n, raw in enumerate(src, 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield n, line.split()


def _group_from_header(words: list[str]) -> FiniteGroup | None:
    kind, params = words[1], words[2:]
    if kind in ("explicit",):
        return None
    try:
        return finite.from_ref(kind + (":" + ",".join(params) if params else ""))
    except InputError as exc:
        raise DataFormatError(str(exc)) from None


def load_table(src: TextIO) -> CharacterTable:
    lines = list(_lines(src))
    if not lines or lines[0][1][0] != "group" or len(lines[0][1]) < 2:
        raise DataFormatError("table file must start with a 'group' line")
    head = lines[0][1]
    sizes, labels, squares, chars = [], [], {}, []
    try:
        for n, w in lines[1:]:
            if w[0] == "class":
                if int(w[1]) != len(sizes):
                    raise DataFormatError(f"line {n}: class ids must be consecutive")
                sizes.append(int(w[2]))
                labels.append(w[3] if len(w) > 3 else f"c{w[1]}")
            elif w[0] == "square":
                squares[int(w[1])] = int(w[2])
            elif w[0] == "chi":
                nums = [float(x) for x in w[3:]]
                if len(nums) != 2 * len(sizes):
                    raise DataFormatError(f"line {n}: expected {len(sizes)} complex values")
                row = np.array(nums[0::2]) + 1j * np.array(nums[1::2])
                chars.append((w[1], int(w[2]), row))
            else:
                raise DataFormatError(f"line {n}: unknown record {w[0]!r}")
    except (IndexError, ValueError) as exc:
        raise DataFormatError(f"malformed table file: {exc}") from None
    g = _group_from_header(head)
    if g is None:
        order = sum(sizes)
        sq = tuple(squares.get(c, 0) for c in range(len(sizes))) if squares else None
        g = FiniteGroup(head[1], tuple(head[2:]), order, tuple(sizes), tuple(labels), _square=sq)
    elif tuple(sizes) != g.class_sizes:
        raise DataFormatError("class sizes do not match the named group")
    if len(chars) != len(sizes):
        raise DataFormatError("number of characters differs from number of classes")
    for lab, deg, row in chars:
        if abs(row[0] - deg) > 1e-9:
            raise DataFormatError(f"degree of {lab} disagrees with its value at the identity")
    t = CharacterTable(g, np.array([r for _, _, r in chars]), tuple(lab for lab, _, _ in chars))
    t.validate()
    return t


def dump_class_function(t: ClassFunction, out: TextIO) -> None:
    out.write(_header(t.group) + "\n")
    for c, v in enumerate(t.values):
        out.write(f"value {c} {float(v.real)!r} {float(v.imag)!r}\n")


def load_class_function(src: TextIO, table: CharacterTable | None = None) -> ClassFunction:
    lines = list(_lines(src))
    if not lines or lines[0][1][0] != "group":
        raise DataFormatError("class function file must start with a 'group' line")
    if table is None:
        g = _group_from_header(lines[0][1])
        if g is None:
            raise DataFormatError("explicit groups need the table supplied separately")
        table = character_table(g)
    vals = np.zeros(table.group.num_classes, dtype=np.complex128)
    seen = set()
    try:
        for n, w in lines[1:]:
            if w[0] != "value":
                raise DataFormatError(f"line {n}: unknown record {w[0]!r}")
            c = int(w[1])
            if not 0 <= c < len(vals):
                raise DataFormatError(f"line {n}: class id out of range")
            vals[c] = float(w[2]) + 1j * float(w[3] if len(w) > 3 else 0.0)
            seen.add(c)
    except (IndexError, ValueError) as exc:
        raise DataFormatError(f"malformed class function file: {exc}") from None
    return ClassFunction(table, vals)
