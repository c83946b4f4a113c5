"""Write DOT drawings of the depth-3 cube: edges only, edges plus faces, and the M/N component tags.

    python3 scripts/cube_drawings.py [outdir]
"""

import sys
from pathlib import Path

from compstruct.export import to_dot
from compstruct.hypercube import D, E, decode_h, h_label, truncation
from compstruct.spectra import component_tags


def main(outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    t = truncation(3)
    vertices = [c for c in t.elements if c % 2 == 0]
    kinds = {E: False, D: True}
    names = {E: "E", D: "D"}
    (outdir / "cube_edges.dot").write_text(
        to_dot(t.restrict(vertices), directed=kinds, labels=h_label, family_names=names, name="cube")
    )
    (outdir / "cube_faces.dot").write_text(to_dot(t, directed=kinds, labels=h_label, family_names=names, name="cube_faces"))
    tags = component_tags(3)
    for side in ("M", "N"):
        label = lambda c, side=side: f"{h_label(c)} x {tags[side][str(decode_h(c))]}"  # noqa: E731
        (outdir / f"cube_{side}.dot").write_text(
            to_dot(t, directed=kinds, labels=label, family_names=names, name=f"cube_{side}")
        )
    for p in sorted(outdir.glob("cube_*.dot")):
        print(p)


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out"))
