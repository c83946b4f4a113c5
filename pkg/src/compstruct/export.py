"""Line-oriented text dumps and DOT export of finite truncations.

Text format::

    elements: 0 1 2
    R0.0(0,1)
    R1.0(1,2)

Facts are sorted by ``(family, index, codes)``.
"""

from __future__ import annotations

import json
import re
from typing import Callable

from .core import FinitePresentation, RelationSymbol

PALETTE = ("red", "blue", "green", "orange", "purple", "brown", "cyan", "magenta")

_FACT = re.compile(r"^R(\d+)\.(\d+)\(([\d,]*)\)$")


def to_text(fp: FinitePresentation) -> str:
    lines = ["elements: " + " ".join(str(e) for e in fp.elements)]
    for sym, tup in fp.sorted_facts():
        lines.append(f"{sym}({','.join(str(c) for c in tup)})")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> FinitePresentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("elements:"):
        raise ValueError("missing 'elements:' header")
    elements = tuple(int(c) for c in lines[0][len("elements:"):].split())
    facts = set()
    for ln in lines[1:]:
        m = _FACT.match(ln)
        if not m:
            raise ValueError(f"bad fact line {ln!r}")
        codes = tuple(int(c) for c in m.group(3).split(",") if c)
        facts.add((RelationSymbol(int(m.group(1)), int(m.group(2)), len(codes)), codes))
    symbols = tuple(sorted({s for s, _ in facts}))
    return FinitePresentation(elements, frozenset(facts), symbols)


def to_json_lines(fp: FinitePresentation) -> str:
    rows = [json.dumps({"elements": list(fp.elements)})]
    for sym, tup in fp.sorted_facts():
        rows.append(json.dumps({"family": sym.family, "index": sym.index, "codes": list(tup)}))
    return "\n".join(rows) + "\n"


def to_dot(
    fp: FinitePresentation,
    directed: dict[int, bool] | None = None,
    labels: Callable[[int], str] | None = None,
    family_names: dict[int, str] | None = None,
    skip: tuple[int, ...] = (),
    name: str = "G",
) -> str:
    """Binary facts as DOT edges, coloured by symbol index.

    ``directed`` maps family -> bool (default True); undirected families are
    drawn once per unordered pair with ``dir=none``.  Families in ``skip`` and
    non-binary facts are left out.
    """
    directed = directed or {}
    family_names = family_names or {}
    label = labels or str
    out = [f"digraph {name} {{"]
    for e in fp.elements:
        out.append(f'  n{e} [label="{label(e)}"];')
    seen = set()
    for sym, tup in fp.sorted_facts():
        if sym.arity != 2 or sym.family in skip:
            continue
        a, b = tup
        is_directed = directed.get(sym.family, True)
        if not is_directed:
            key = (sym.family, sym.index, min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
        fam = family_names.get(sym.family, f"R{sym.family}")
        attrs = [f'color="{PALETTE[sym.index % len(PALETTE)]}"', f'label="{fam}{sym.index}"']
        if not is_directed:
            attrs.append("dir=none")
        out.append(f"  n{a} -> n{b} [{', '.join(attrs)}];")
    out.append("}")
    return "\n".join(out) + "\n"
